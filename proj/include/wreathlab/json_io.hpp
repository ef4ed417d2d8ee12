#pragma once

#include <fstream>

#include <json.hpp>

#include "wreathlab/thoma.hpp"
#include "wreathlab/typeiii.hpp"

namespace wreathlab {

using json = nlohmann::ordered_json;

// Group file: {"name", "order", "mult": [[...]], "names": [...],
//              "irreps": [{"name", "dim", "matrices": [[[re,im],...],...]}]}

inline json group_to_json(const GroupTable& g) {
    json j;
    j["name"] = g.name();
    j["order"] = g.order();
    json mult = json::array();
    for (int x = 0; x < g.order(); ++x) {
        json row = json::array();
        for (int y = 0; y < g.order(); ++y) row.push_back(g.mult(x, y));
        mult.push_back(row);
    }
    j["mult"] = mult;
    j["names"] = g.element_names();
    json irreps = json::array();
    for (const auto& r : g.irreps()) {
        json jr;
        jr["name"] = r.name;
        jr["dim"] = r.dim;
        json mats = json::array();
        for (const auto& m : r.images) {
            json rows = json::array();
            for (int a = 0; a < r.dim; ++a) {
                json row = json::array();
                for (int b = 0; b < r.dim; ++b)
                    row.push_back(json::array({m(a, b).real(), m(a, b).imag()}));
                rows.push_back(row);
            }
            mats.push_back(rows);
        }
        jr["matrices"] = mats;
        irreps.push_back(jr);
    }
    j["irreps"] = irreps;
    return j;
}

inline GroupTable group_from_json(const json& j) {
    std::vector<std::vector<int>> mult = j.at("mult").get<std::vector<std::vector<int>>>();
    if (j.contains("order") && j.at("order").get<size_t>() != mult.size())
        throw std::invalid_argument("group file: 'order' does not match the table size");
    std::vector<std::string> names;
    if (j.contains("names")) names = j.at("names").get<std::vector<std::string>>();
    GroupTable g(j.value("name", "custom"), std::move(mult), std::move(names));
    if (j.contains("irreps")) {
        for (const auto& jr : j.at("irreps")) {
            MatrixRep r;
            r.name = jr.at("name").get<std::string>();
            r.dim = jr.at("dim").get<int>();
            for (const auto& jm : jr.at("matrices")) {
                Matrix m(r.dim, r.dim);
                for (int a = 0; a < r.dim; ++a)
                    for (int b = 0; b < r.dim; ++b)
                        m(a, b) = Complex(jm.at(a).at(b).at(0).get<double>(),
                                          jm.at(a).at(b).at(1).get<double>());
                r.images.push_back(m);
            }
            g.add_irrep(std::move(r));
        }
    }
    return g;
}

/// Resolves a group source: a built-in descriptor or a path to a JSON file.
inline GroupTable load_group(const std::string& source) {
    try {
        return build_group(source);
    } catch (const std::invalid_argument&) {
        std::ifstream in(source);
        if (!in) throw std::invalid_argument("cannot open group source '" + source + "'");
        json j;
        in >> j;
        return group_from_json(j);
    }
}

// Params file: {"group": name-or-path, "alpha": [{"weight": w, "irrep": name}],
//               "beta": [...], "tr0": "regular" | "trivial" |
//                              {"mix": [{"irrep": name, "coef": c}, ...]}}

inline ThomaParams params_from_json(const json& j, const GroupTable& g) {
    auto parse_row = [&](const char* key) {
        std::vector<WeightedRep> row;
        if (!j.contains(key)) return row;
        for (const auto& e : j.at(key)) {
            std::string irrep = e.at("irrep").get<std::string>();
            const MatrixRep* r = g.irrep_by_name(irrep);
            if (!r)
                throw std::invalid_argument("params: irrep '" + irrep + "' not found in group '" +
                                            g.name() + "'");
            row.push_back({e.at("weight").get<double>(), *r});
        }
        return row;
    };
    Tr0Spec tr0 = Tr0Spec::regular();
    if (j.contains("tr0")) {
        const auto& jt = j.at("tr0");
        if (jt.is_string()) {
            std::string s = jt.get<std::string>();
            if (s == "regular")
                tr0 = Tr0Spec::regular();
            else if (s == "trivial")
                tr0 = Tr0Spec::trivial();
            else
                throw std::invalid_argument("params: unknown tr0 '" + s + "'");
        } else {
            std::vector<std::pair<MatrixRep, double>> mix;
            for (const auto& e : jt.at("mix")) {
                std::string irrep = e.at("irrep").get<std::string>();
                const MatrixRep* r = g.irrep_by_name(irrep);
                if (!r) throw std::invalid_argument("params: tr0 irrep '" + irrep + "' not found");
                mix.push_back({*r, e.at("coef").get<double>()});
            }
            tr0 = Tr0Spec::mixture(std::move(mix));
        }
    }
    return ThomaParams(g, parse_row("alpha"), parse_row("beta"), std::move(tr0));
}

struct LoadedParams {
    GroupTable group;
    std::optional<ThomaParams> params;
};

/// Loads a params file, resolving its "group" field. The group is owned by
/// the returned struct and must outlive the params.
inline std::unique_ptr<LoadedParams> load_params_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open params file '" + path + "'");
    json j;
    in >> j;
    auto out = std::make_unique<LoadedParams>();
    out->group = load_group(j.value("group", "cyclic 2"));
    out->params.emplace(params_from_json(j, out->group));
    return out;
}

inline ProbMatrix prob_from_json(const json& j) {
    auto rows = j.at("p").get<std::vector<std::vector<double>>>();
    if (rows.size() != 2 || rows[0].size() != 2 || rows[1].size() != 2)
        throw std::invalid_argument("p must be a 2x2 matrix");
    return ProbMatrix::from_flat({rows[0][0], rows[0][1], rows[1][0], rows[1][1]});
}

}  // namespace wreathlab
