// Command-line front end: character evaluation, verification suites, the
// realization cross-check, coset diagram operations, and the type-III lab.
//
// Exit codes: 0 success, 1 check/validation failure, 2 usage or config error.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>

#include "wreathlab/checks.hpp"
#include "wreathlab/json_io.hpp"
#include "wreathlab/report.hpp"

using namespace wreathlab;

namespace {

int thread_cap() {
    const char* env = std::getenv("WREATH_LAB_THREADS");
    if (!env) return 1;
    int v = std::atoi(env);
    return v < 1 ? 1 : v;
}

void write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::invalid_argument("cannot open output path '" + path + "'");
        out << text;
    }
}

struct ParamsSource {
    std::string params_file;
    std::string group = "cyclic 2";
    std::vector<std::string> alpha, beta;
    std::string tr0 = "regular";

    std::unique_ptr<LoadedParams> load() const {
        if (!params_file.empty()) return load_params_file(params_file);
        auto out = std::make_unique<LoadedParams>();
        out->group = load_group(group);
        auto parse_row = [&](const std::vector<std::string>& row) {
            std::vector<WeightedRep> parsed;
            for (const auto& spec : row) {
                auto colon = spec.find(':');
                if (colon == std::string::npos)
                    throw std::invalid_argument("weight spec '" + spec + "' must be weight:irrep");
                double w = std::stod(spec.substr(0, colon));
                std::string irrep = spec.substr(colon + 1);
                const MatrixRep* r = out->group.irrep_by_name(irrep);
                if (!r)
                    throw std::invalid_argument("irrep '" + irrep + "' not found in group '" +
                                                out->group.name() + "'");
                parsed.push_back({w, *r});
            }
            return parsed;
        };
        Tr0Spec t = Tr0Spec::regular();
        if (tr0 == "trivial") t = Tr0Spec::trivial();
        else if (tr0 != "regular")
            throw std::invalid_argument("tr0 must be regular or trivial on the command line; "
                                        "use a params file for mixtures");
        out->params.emplace(out->group, parse_row(alpha), parse_row(beta), std::move(t));
        return out;
    }
};

GPair parse_pair(const std::string& text, const GroupTable& g) {
    auto bar = text.find('|');
    if (bar == std::string::npos)
        throw std::invalid_argument("pair '" + text + "' must be written as \"left | right\"");
    return {parse_element(text.substr(0, bar), g), parse_element(text.substr(bar + 1), g)};
}

std::string diagram_text(const AdmissibleDiagram& d) {
    std::ostringstream os;
    auto classes = conjugacy_classes(*d.group);
    os << "level n = " << d.n << "\n";
    for (const auto& e : d.edges)
        os << "  " << vertex_name(e.from) << " -> " << vertex_name(e.to) << "  ("
           << half_string(e.half2) << ", " << d.group->element_name(e.gamma) << ")\n";
    for (auto [w, cls] : d.circles)
        os << "  circle (" << w << ", cl(" << d.group->element_name(classes.representatives[cls])
           << "))\n";
    return os.str();
}

nlohmann::ordered_json diagram_json(const AdmissibleDiagram& d) {
    nlohmann::ordered_json j;
    j["n"] = d.n;
    auto classes = conjugacy_classes(*d.group);
    nlohmann::ordered_json edges = nlohmann::ordered_json::array();
    for (const auto& e : d.edges) {
        nlohmann::ordered_json je;
        je["from"] = vertex_name(e.from);
        je["to"] = vertex_name(e.to);
        je["weight"] = half_string(e.half2);
        je["gamma"] = d.group->element_name(e.gamma);
        edges.push_back(je);
    }
    j["edges"] = edges;
    nlohmann::ordered_json circles = nlohmann::ordered_json::array();
    for (auto [w, cls] : d.circles) {
        nlohmann::ordered_json jc;
        jc["weight"] = w;
        jc["class_rep"] = d.group->element_name(classes.representatives[cls]);
        circles.push_back(jc);
    }
    j["circles"] = circles;
    return j;
}

int run_checks_and_report(std::vector<CheckResult> checks, bool as_json, double tol_scale,
                          const std::string& out_path) {
    if (tol_scale != 1.0)
        for (auto& c : checks) {
            c.tolerance *= tol_scale;
            c.pass = c.measured <= c.tolerance;
        }
    write_output(as_json ? report_json(checks).dump(2) + "\n" : report_text(checks), out_path);
    return all_pass(checks) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wreath-lab: characters of the infinite wreath product at finite truncation"};
    app.set_help_flag("--help", "print usage");
    app.require_subcommand(1);
    bool as_json = false;
    std::string out_path;
    uint64_t seed = 7;
    double tol_scale = 1.0;
    app.add_flag("--json", as_json, "machine-readable output");
    app.add_option("--out", out_path, "write the report to a file instead of stdout");
    app.add_option("--seed", seed, "seed for sampled checks");
    app.add_option("--tol-scale", tol_scale, "multiply every tolerance by this factor");

    // eval
    auto* eval = app.add_subcommand("eval", "evaluate the character at one element");
    ParamsSource eval_src;
    std::string eval_element;
    eval->add_option("--params", eval_src.params_file, "params JSON file");
    eval->add_option("--group", eval_src.group, "built-in group descriptor or group JSON path");
    eval->add_option("--alpha", eval_src.alpha, "alpha row entries, weight:irrep");
    eval->add_option("--beta", eval_src.beta, "beta row entries, weight:irrep");
    eval->add_option("--tr0", eval_src.tr0, "residual trace: regular or trivial");
    eval->add_option("--element", eval_element, "element text, e.g. \"(1 2 3)[1:g]\"")->required();

    // realize
    auto* realize = app.add_subcommand("realize", "cross-check the evaluator against the "
                                                  "tensor realization on sampled elements");
    ParamsSource real_src;
    int real_count = 100;
    int real_support = 5;
    realize->add_option("--params", real_src.params_file, "params JSON file");
    realize->add_option("--group", real_src.group, "built-in group descriptor");
    realize->add_option("--alpha", real_src.alpha, "alpha row entries, weight:irrep");
    realize->add_option("--beta", real_src.beta, "beta row entries, weight:irrep");
    realize->add_option("--tr0", real_src.tr0, "residual trace: regular or trivial");
    realize->add_option("--count", real_count, "number of sampled elements");
    realize->add_option("--max-support", real_support, "support bound for samples");

    // verify
    auto* verify = app.add_subcommand("verify", "run the property suites");
    std::string suite = "all";
    verify->add_option("--suite", suite,
                       "all | oracle | conjugacy | thoma | gram | alt | omega | moments | "
                       "factorization | cosets | type3");

    // cosets
    auto* cosets = app.add_subcommand("cosets", "double-coset diagram operations");
    std::string co_op = "theta", co_g, co_h, co_group = "symmetric 3", co_dot;
    int co_n = 2;
    cosets->add_option("--op", co_op, "theta | mult | inv");
    cosets->add_option("--n", co_n, "coset level");
    cosets->add_option("--group", co_group, "base group descriptor");
    cosets->add_option("--g", co_g, "pair \"left | right\"")->required();
    cosets->add_option("--h", co_h, "second pair for --op mult");
    cosets->add_option("--dot", co_dot, "also write the result as Graphviz DOT");

    // render
    auto* render = app.add_subcommand("render", "write the DOT rendering of a coset diagram");
    std::string rd_g, rd_group = "symmetric 3", rd_out;
    int rd_n = 3;
    render->add_option("--g", rd_g, "pair \"left | right\"")->required();
    render->add_option("--n", rd_n, "coset level");
    render->add_option("--group", rd_group, "base group descriptor");
    render->add_option("--dot-out", rd_out, "output DOT path")->required();

    // type3
    auto* type3 = app.add_subcommand("type3", "the Z2 x Z2 type-III laboratory");
    std::string t3_op = "lr", t3_p = "0.4,0.1,0.2,0.3", t3_pjson, t3_s, t3_g;
    int t3_n = 2;
    type3->add_option("--op", t3_op, "lr | cyclic | modular | kms | witness");
    type3->add_option("--p", t3_p, "four probabilities p00,p01,p10,p11");
    type3->add_option("--pjson", t3_pjson, "JSON file {\"p\": [[..],[..]]}");
    type3->add_option("--n", t3_n, "site truncation");
    type3->add_option("--s", t3_s, "permutation element for --op kms");
    type3->add_option("--g", t3_g, "group element for --op kms");

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*eval) {
            auto loaded = eval_src.load();
            auto g = parse_element(eval_element, loaded->group);
            Complex v = evaluate(*loaded->params, g);
            if (as_json) {
                nlohmann::ordered_json j;
                j["element"] = format_element(g);
                j["value_re"] = format_double(v.real());
                j["value_im"] = format_double(v.imag());
                write_output(j.dump(2) + "\n", out_path);
            } else {
                std::ostringstream os;
                os << "phi(" << format_element(g) << ") = " << format_double(v.real());
                if (std::abs(v.imag()) > 1e-15) os << " + " << format_double(v.imag()) << "i";
                os << "\n";
                write_output(os.str(), out_path);
            }
            return 0;
        }
        if (*realize) {
            auto loaded = real_src.load();
            Sampler rng(seed);
            std::vector<WreathElement> els;
            els.reserve(real_count);
            for (int i = 0; i < real_count; ++i)
                els.push_back(rng.element(loaded->group, real_support, 3));
            int threads = thread_cap();
            std::vector<double> gaps(els.size());
            auto worker = [&](size_t begin, size_t end) {
                for (size_t i = begin; i < end; ++i)
                    gaps[i] = std::abs(evaluate(*loaded->params, els[i]) -
                                       matrix_element(*loaded->params, els[i], real_support));
            };
            if (threads <= 1) {
                worker(0, els.size());
            } else {
                std::vector<std::future<void>> futs;
                size_t chunk = (els.size() + threads - 1) / threads;
                for (int t = 0; t < threads; ++t) {
                    size_t b = t * chunk, e = std::min(els.size(), b + chunk);
                    if (b >= e) break;
                    futs.push_back(std::async(std::launch::async, worker, b, e));
                }
                for (auto& f : futs) f.get();
            }
            double worst = 0.0;
            for (double g : gaps) worst = std::max(worst, g);
            std::vector<CheckResult> checks = {
                make_check("realize/max_gap", worst, 1e-9,
                           std::to_string(real_count) + " sampled elements, support <= " +
                               std::to_string(real_support))};
            return run_checks_and_report(std::move(checks), as_json, tol_scale, out_path);
        }
        if (*verify) {
            std::vector<CheckResult> checks;
            auto want = [&](const char* name) { return suite == "all" || suite == name; };
            auto append = [&checks](std::vector<CheckResult> more) {
                for (auto& c : more) checks.push_back(std::move(c));
            };
            if (want("oracle")) append(check_two_oracle(seed));
            if (want("conjugacy")) append(check_conjugacy_oracle(seed));
            if (want("thoma")) append(check_thoma_classical());
            if (want("gram")) append(check_gram_psd(seed));
            if (want("alt")) append(check_alternating());
            if (want("omega")) append(check_omega());
            if (want("moments")) append(check_moments());
            if (want("factorization")) append(check_factorization());
            if (want("cosets")) append(check_cosets(seed));
            if (want("type3")) append(check_type3(seed));
            if (checks.empty()) throw std::invalid_argument("unknown suite '" + suite + "'");
            return run_checks_and_report(std::move(checks), as_json, tol_scale, out_path);
        }
        if (*cosets) {
            GroupTable g = load_group(co_group);
            auto a = parse_pair(co_g, g);
            AdmissibleDiagram result = theta(a, co_n);
            if (co_op == "mult") {
                if (co_h.empty()) throw std::invalid_argument("--op mult needs --h");
                auto b = parse_pair(co_h, g);
                result = mult_diagram(theta(a, co_n), theta(b, co_n));
            } else if (co_op == "inv") {
                result = involution(theta(a, co_n));
            } else if (co_op != "theta") {
                throw std::invalid_argument("unknown coset op '" + co_op + "'");
            }
            validate_diagram(result);
            if (!co_dot.empty()) write_output(to_dot(result), co_dot);
            write_output(as_json ? diagram_json(result).dump(2) + "\n" : diagram_text(result),
                         out_path);
            return 0;
        }
        if (*render) {
            GroupTable g = load_group(rd_group);
            auto d = theta(parse_pair(rd_g, g), rd_n);
            write_output(to_dot(d), rd_out);
            return 0;
        }
        if (*type3) {
            ProbMatrix p;
            if (!t3_pjson.empty()) {
                std::ifstream in(t3_pjson);
                if (!in) throw std::invalid_argument("cannot open '" + t3_pjson + "'");
                nlohmann::ordered_json j;
                in >> j;
                p = prob_from_json(j);
            } else {
                std::array<double, 4> v{};
                std::stringstream ss(t3_p);
                std::string tok;
                for (int i = 0; i < 4; ++i) {
                    if (!std::getline(ss, tok, ','))
                        throw std::invalid_argument("--p needs four comma-separated numbers");
                    v[i] = std::stod(tok);
                }
                p = ProbMatrix::from_flat(v);
            }
            std::vector<CheckResult> checks;
            if (t3_op == "lr") {
                auto rep = iso_and_lr(p);
                checks.push_back(make_check("type3/lr_identities", rep.max_residual, 1e-12));
            } else if (t3_op == "cyclic") {
                auto rep = cyclic_separating_check(p, t3_n);
                checks.push_back(make_check(
                    "type3/cyclic_separating", rep.cyclic == (std::abs(p.det()) > 1e-9) ? 0.0 : 1.0,
                    0.0,
                    "left span " + std::to_string(rep.left_span) + ", right span " +
                        std::to_string(rep.right_span) + " of " + std::to_string(rep.full_dim)));
            } else if (t3_op == "modular") {
                auto rep = modular_operator(p, t3_n);
                checks.push_back(
                    make_check("type3/modular_closed_form", rep.closed_form_residual, 1e-10));
                checks.push_back(make_check("type3/modular_fixes_one", rep.fixes_xi, 1e-10));
            } else if (t3_op == "kms") {
                GroupTable z2 = make_cyclic(2);
                Permutation s = t3_s.empty() ? Permutation::transposition(1, 2)
                                             : parse_element(t3_s, z2).perm;
                WreathElement g = t3_g.empty() ? parse_element("(2 3)[1:g]", z2)
                                               : parse_element(t3_g, z2);
                checks.push_back(
                    make_check("type3/kms_residual", kms_trace_check(p, t3_n, s, g), 1e-12));
            } else if (t3_op == "witness") {
                GroupTable z2 = make_cyclic(2);
                auto w = centrality_witness(p, std::max(t3_n, 2), z2);
                bool found = w && w->gap > 1e-3;
                checks.push_back(make_check(
                    "type3/centrality_counterexample", found ? 0.0 : 1.0, 0.0,
                    found ? "gap " + format_double(w->gap) + " at g = " + format_element(w->g) +
                                ", h = " + format_element(w->h)
                          : "no witness found"));
            } else {
                throw std::invalid_argument("unknown type3 op '" + t3_op + "'");
            }
            return run_checks_and_report(std::move(checks), as_json, tol_scale, out_path);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
