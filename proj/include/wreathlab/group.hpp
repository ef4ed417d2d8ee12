#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace wreathlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// A unitary matrix representation of a finite group, one image per element.
struct MatrixRep {
    std::string name;
    int dim = 0;
    std::vector<Matrix> images;  // indexed by element
};

/// Finite group given by its multiplication table.
///
/// Elements are indices 0..order-1. `mult(x, y)` is the product x*y with the
/// same left-to-right convention used everywhere in this library.
class GroupTable {
public:
    GroupTable() = default;

    GroupTable(std::string name, std::vector<std::vector<int>> table,
               std::vector<std::string> element_names = {})
        : name_(std::move(name)), table_(std::move(table)), names_(std::move(element_names)) {
        validate_and_finish();
    }

    const std::string& name() const { return name_; }
    int order() const { return static_cast<int>(table_.size()); }
    int identity() const { return identity_; }
    int mult(int x, int y) const { return table_[x][y]; }
    int inv(int x) const { return inv_[x]; }

    const std::string& element_name(int x) const { return names_[x]; }
    const std::vector<std::string>& element_names() const { return names_; }

    /// Element index by name; aliases registered by built-in constructors
    /// (e.g. "g" for the generator of a cyclic group) are honored.
    std::optional<int> element_by_name(const std::string& s) const {
        for (int i = 0; i < order(); ++i)
            if (names_[i] == s) return i;
        auto it = aliases_.find(s);
        if (it != aliases_.end()) return it->second;
        return std::nullopt;
    }

    bool is_abelian() const {
        for (int x = 0; x < order(); ++x)
            for (int y = 0; y < x; ++y)
                if (mult(x, y) != mult(y, x)) return false;
        return true;
    }

    const std::vector<MatrixRep>& irreps() const { return irreps_; }
    void add_irrep(MatrixRep rep);
    const MatrixRep* irrep_by_name(const std::string& s) const {
        for (const auto& r : irreps_)
            if (r.name == s) return &r;
        return nullptr;
    }

    void add_alias(std::string alias, int elem) { aliases_[std::move(alias)] = elem; }

private:
    void validate_and_finish();

    std::string name_;
    std::vector<std::vector<int>> table_;
    std::vector<std::string> names_;
    std::map<std::string, int> aliases_;
    std::vector<int> inv_;
    std::vector<MatrixRep> irreps_;
    int identity_ = -1;
};

/// Partition of a group into conjugacy classes. Class ids are ordered by the
/// smallest element index they contain, so the identity's class is id 0.
struct ConjClasses {
    std::vector<int> class_of;       // element index -> class id
    std::vector<int> representatives;  // class id -> smallest member
    int count() const { return static_cast<int>(representatives.size()); }
};

/// One multiplicative character of an abelian group.
struct DualCharacter {
    std::vector<Complex> values;  // |values[x]| = 1, values[xy] = values[x]*values[y]
};

struct RepValidation {
    double hom_residual = 0.0;    // max ||rep(x)rep(y) - rep(xy)||_inf
    double unit_residual = 0.0;   // max ||rep(x)rep(x)* - I||_inf
    double chi_inner = 0.0;       // <chi, chi> in the normalized inner product
    bool irreducible = false;     // chi_inner == 1 within 1e-10
    bool ok(double tol = 1e-10) const {
        return hom_residual <= tol && unit_residual <= tol;
    }
};

inline RepValidation validate_rep(const GroupTable& g, const MatrixRep& rep) {
    RepValidation v;
    const int n = g.order();
    if (static_cast<int>(rep.images.size()) != n)
        throw std::invalid_argument("validate_rep: image count does not match group order");
    for (int x = 0; x < n; ++x) {
        if (rep.images[x].rows() != rep.dim || rep.images[x].cols() != rep.dim)
            throw std::invalid_argument("validate_rep: image dimension mismatch at element " +
                                        std::to_string(x));
        Matrix u = rep.images[x] * rep.images[x].adjoint() - Matrix::Identity(rep.dim, rep.dim);
        v.unit_residual = std::max(v.unit_residual, u.cwiseAbs().maxCoeff());
        for (int y = 0; y < n; ++y) {
            Matrix h = rep.images[x] * rep.images[y] - rep.images[g.mult(x, y)];
            v.hom_residual = std::max(v.hom_residual, h.cwiseAbs().maxCoeff());
        }
    }
    Complex inner = 0.0;
    for (int x = 0; x < n; ++x) {
        Complex chi = rep.images[x].trace();
        inner += chi * std::conj(chi);
    }
    v.chi_inner = std::abs(inner) / n;
    v.irreducible = std::abs(v.chi_inner - 1.0) <= 1e-10;
    return v;
}

inline void GroupTable::add_irrep(MatrixRep rep) {
    auto v = validate_rep(*this, rep);
    if (!v.ok())
        throw std::invalid_argument("add_irrep: '" + rep.name + "' fails validation (hom " +
                                    std::to_string(v.hom_residual) + ", unit " +
                                    std::to_string(v.unit_residual) + ")");
    irreps_.push_back(std::move(rep));
}

inline void GroupTable::validate_and_finish() {
    const int n = order();
    if (n <= 0) throw std::invalid_argument("group table is empty");
    for (int x = 0; x < n; ++x) {
        if (static_cast<int>(table_[x].size()) != n)
            throw std::invalid_argument("group table row " + std::to_string(x) + " has wrong length");
        std::vector<bool> seen_row(n, false), seen_col(n, false);
        for (int y = 0; y < n; ++y) {
            int rxy = table_[x][y], cyx = table_[y][x];
            if (rxy < 0 || rxy >= n || cyx < 0 || cyx >= n)
                throw std::invalid_argument("group table entry out of range at (" +
                                            std::to_string(x) + "," + std::to_string(y) + ")");
            if (seen_row[rxy])
                throw std::invalid_argument("row " + std::to_string(x) +
                                            " of the multiplication table is not a permutation");
            if (seen_col[cyx])
                throw std::invalid_argument("column " + std::to_string(x) +
                                            " of the multiplication table is not a permutation");
            seen_row[rxy] = seen_col[cyx] = true;
        }
    }
    identity_ = -1;
    for (int e = 0; e < n; ++e) {
        bool is_id = true;
        for (int x = 0; x < n && is_id; ++x)
            is_id = table_[e][x] == x && table_[x][e] == x;
        if (is_id) { identity_ = e; break; }
    }
    if (identity_ < 0) throw std::invalid_argument("group table has no identity element");
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                if (table_[table_[x][y]][z] != table_[x][table_[y][z]])
                    throw std::invalid_argument(
                        "multiplication table is not associative at triple (" + std::to_string(x) +
                        "," + std::to_string(y) + "," + std::to_string(z) + ")");
    inv_.assign(n, -1);
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y)
            if (table_[x][y] == identity_) { inv_[x] = y; break; }
        if (inv_[x] < 0 || table_[inv_[x]][x] != identity_)
            throw std::invalid_argument("element " + std::to_string(x) + " has no two-sided inverse");
    }
    if (names_.empty()) {
        names_.resize(n);
        for (int x = 0; x < n; ++x) names_[x] = x == identity_ ? "e" : "x" + std::to_string(x);
    }
    if (static_cast<int>(names_.size()) != n)
        throw std::invalid_argument("element name list has wrong length");
}

inline ConjClasses conjugacy_classes(const GroupTable& g) {
    const int n = g.order();
    std::vector<int> cls(n, -1);
    ConjClasses out;
    out.class_of.assign(n, -1);
    int next = 0;
    for (int x = 0; x < n; ++x) {
        if (cls[x] >= 0) continue;
        // orbit of x under conjugation
        for (int h = 0; h < n; ++h) cls[g.mult(g.mult(h, x), g.inv(h))] = next;
        out.representatives.push_back(x);
        ++next;
    }
    out.class_of = cls;
    return out;
}

/// Unnormalized character of a representation, as a function of element index.
inline std::vector<Complex> character_of(const MatrixRep& rep) {
    std::vector<Complex> chi(rep.images.size());
    for (size_t x = 0; x < rep.images.size(); ++x) chi[x] = rep.images[x].trace();
    return chi;
}

/// All multiplicative characters of an abelian group, built by extending the
/// trivial character one generator at a time.
inline std::vector<DualCharacter> dual_group(const GroupTable& g) {
    if (!g.is_abelian()) throw std::invalid_argument("dual_group: group is not abelian");
    const int n = g.order();
    // subgroup elements generated so far, and every character on it
    std::vector<int> sub = {g.identity()};
    std::vector<std::map<int, Complex>> chars(1);
    chars[0][g.identity()] = 1.0;
    std::vector<bool> in_sub(n, false);
    in_sub[g.identity()] = true;
    while (static_cast<int>(sub.size()) < n) {
        int gen = -1;
        for (int x = 0; x < n; ++x)
            if (!in_sub[x]) { gen = x; break; }
        // order of gen over the current subgroup
        int d = 1, p = gen;
        while (!in_sub[p]) { p = g.mult(p, gen); ++d; }
        // p = gen^d lies in the subgroup
        std::vector<std::map<int, Complex>> next;
        next.reserve(chars.size() * d);
        for (const auto& chi : chars) {
            Complex base = chi.at(p);
            double arg0 = std::arg(base) / d;
            for (int j = 0; j < d; ++j) {
                Complex zeta = std::polar(1.0, arg0 + 2.0 * M_PI * j / d);
                std::map<int, Complex> ext;
                int gk = g.identity();
                Complex zk = 1.0;
                for (int k = 0; k < d; ++k) {
                    for (int s : sub) ext[g.mult(s, gk)] = chi.at(s) * zk;
                    gk = g.mult(gk, gen);
                    zk *= zeta;
                }
                next.push_back(std::move(ext));
            }
        }
        chars = std::move(next);
        std::vector<int> new_sub;
        int gk = g.identity();
        for (int k = 0; k < d; ++k) {
            for (int s : sub) {
                int t = g.mult(s, gk);
                if (!in_sub[t]) { in_sub[t] = true; }
                new_sub.push_back(t);
            }
            gk = g.mult(gk, gen);
        }
        sub = std::move(new_sub);
    }
    std::vector<DualCharacter> out;
    out.reserve(chars.size());
    for (const auto& chi : chars) {
        DualCharacter dc;
        dc.values.resize(n);
        for (int x = 0; x < n; ++x) dc.values[x] = chi.at(x);
        out.push_back(std::move(dc));
    }
    // canonical order: lexicographic on (arg rounded) for determinism
    std::sort(out.begin(), out.end(), [n](const DualCharacter& a, const DualCharacter& b) {
        for (int x = 0; x < n; ++x) {
            double ra = std::round(std::arg(a.values[x]) * 1e9);
            double rb = std::round(std::arg(b.values[x]) * 1e9);
            if (ra != rb) return ra < rb;
        }
        return false;
    });
    return out;
}

/// Converts a 1-dim dual character into a MatrixRep.
inline MatrixRep rep_from_dual(const DualCharacter& chi, const std::string& name) {
    MatrixRep r;
    r.name = name;
    r.dim = 1;
    r.images.reserve(chi.values.size());
    for (auto v : chi.values) {
        Matrix m(1, 1);
        m(0, 0) = v;
        r.images.push_back(m);
    }
    return r;
}

// ---- built-in groups -------------------------------------------------------

inline GroupTable make_cyclic(int n) {
    if (n < 1 || n > 64) throw std::invalid_argument("cyclic order must be in 1..64");
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) t[x][y] = (x + y) % n;
    std::vector<std::string> names(n);
    names[0] = "e";
    for (int x = 1; x < n; ++x) names[x] = "g" + std::to_string(x);
    GroupTable g("cyclic" + std::to_string(n), std::move(t), std::move(names));
    if (n > 1) g.add_alias("g", 1);
    for (int j = 0; j < n; ++j) {
        MatrixRep r;
        r.dim = 1;
        if (n == 2)
            r.name = j == 0 ? "trivial" : "sign";
        else
            r.name = j == 0 ? "trivial" : "chi" + std::to_string(j);
        for (int x = 0; x < n; ++x) {
            Matrix m(1, 1);
            int k = (4 * ((j * x) % n)) % (4 * n);
            if (k % n == 0) {
                // exact value on the axes
                static const Complex axis[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
                m(0, 0) = axis[k / n];
            } else {
                m(0, 0) = std::polar(1.0, 2.0 * M_PI * ((j * x) % n) / n);
            }
            r.images.push_back(m);
        }
        g.add_irrep(std::move(r));
    }
    return g;
}

inline GroupTable make_klein4() {
    // elements e, a, b, c with a^2 = b^2 = c^2 = e, ab = c
    std::vector<std::vector<int>> t = {
        {0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    GroupTable g("klein4", std::move(t), {"e", "a", "b", "c"});
    const char* names[4] = {"trivial", "chi10", "chi01", "chi11"};
    const int signs[4][4] = {
        {1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, 1, -1}, {1, -1, -1, 1}};
    for (int j = 0; j < 4; ++j) {
        MatrixRep r;
        r.name = names[j];
        r.dim = 1;
        for (int x = 0; x < 4; ++x) {
            Matrix m(1, 1);
            m(0, 0) = static_cast<double>(signs[j][x]);
            r.images.push_back(m);
        }
        g.add_irrep(std::move(r));
    }
    return g;
}

inline GroupTable make_symmetric3() {
    // enumerate the 6 permutations of {0,1,2} and tabulate composition
    std::vector<std::array<int, 3>> perms;
    std::array<int, 3> p = {0, 1, 2};
    do {
        perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    // reorder as e, r, r^2, s, rs, r^2 s with r = (0 1 2), s = (0 1)
    auto compose = [](std::array<int, 3> a, std::array<int, 3> b) {
        std::array<int, 3> c;
        for (int i = 0; i < 3; ++i) c[i] = a[b[i]];
        return c;
    };
    std::array<int, 3> e = {0, 1, 2}, r = {1, 2, 0}, s = {1, 0, 2};
    std::vector<std::array<int, 3>> order = {e, r, compose(r, r), s, compose(r, s),
                                             compose(compose(r, r), s)};
    auto index_of = [&](const std::array<int, 3>& q) {
        for (size_t i = 0; i < order.size(); ++i)
            if (order[i] == q) return static_cast<int>(i);
        throw std::logic_error("symmetric3: permutation not found");
    };
    std::vector<std::vector<int>> t(6, std::vector<int>(6));
    for (int x = 0; x < 6; ++x)
        for (int y = 0; y < 6; ++y) t[x][y] = index_of(compose(order[x], order[y]));
    GroupTable g("symmetric3", std::move(t), {"e", "r", "r2", "s", "rs", "r2s"});
    {
        MatrixRep triv{"trivial", 1, {}};
        MatrixRep sign{"sign", 1, {}};
        for (int x = 0; x < 6; ++x) {
            Matrix m1(1, 1), ms(1, 1);
            m1(0, 0) = 1.0;
            // parity of the underlying permutation
            const auto& q = order[x];
            int invs = 0;
            for (int i = 0; i < 3; ++i)
                for (int j = i + 1; j < 3; ++j)
                    if (q[i] > q[j]) ++invs;
            ms(0, 0) = invs % 2 == 0 ? 1.0 : -1.0;
            triv.images.push_back(m1);
            sign.images.push_back(ms);
        }
        g.add_irrep(std::move(triv));
        g.add_irrep(std::move(sign));
    }
    {
        // 2-dim standard representation: r -> rotation by 2pi/3, s -> reflection
        MatrixRep std2{"standard", 2, {}};
        Matrix R(2, 2), S(2, 2);
        double c = std::cos(2.0 * M_PI / 3.0), sn = std::sin(2.0 * M_PI / 3.0);
        R << c, -sn, sn, c;
        S << 1, 0, 0, -1;
        std::vector<Matrix> imgs = {Matrix::Identity(2, 2), R, R * R, S, R * S, R * R * S};
        std2.images = imgs;
        g.add_irrep(std::move(std2));
    }
    return g;
}

/// Builds a group from a short descriptor: "cyclic N", "symmetric 3", "klein4".
inline GroupTable build_group(const std::string& descriptor) {
    auto strip = [](std::string s) {
        s.erase(0, s.find_first_not_of(" \t"));
        s.erase(s.find_last_not_of(" \t") + 1);
        return s;
    };
    std::string d = strip(descriptor);
    if (d.rfind("cyclic", 0) == 0) {
        std::string rest = strip(d.substr(6));
        int n = std::stoi(rest);
        return make_cyclic(n);
    }
    if (d == "symmetric 3" || d == "symmetric3" || d == "s3") return make_symmetric3();
    if (d == "klein4") return make_klein4();
    throw std::invalid_argument("unknown group descriptor '" + descriptor + "'");
}

}  // namespace wreathlab
