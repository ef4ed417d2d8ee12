#pragma once

#include <boost/rational.hpp>
#include <cmath>
#include <numeric>
#include <vector>

#include "wreathlab/group.hpp"
#include "wreathlab/wreath.hpp"

namespace wreathlab {

using Rational = boost::rational<long long>;

/// Residual trace: a normalized class function given as a convex combination
/// of normalized irreducible characters. "regular" weights every irreducible
/// by dim^2/|Gamma| and evaluates to the indicator of the identity.
struct Tr0Spec {
    enum class Kind { Regular, Trivial, Mix };
    Kind kind = Kind::Regular;
    std::vector<std::pair<MatrixRep, double>> mix;  // (irreducible rep, coefficient)

    static Tr0Spec regular() { return {Kind::Regular, {}}; }
    static Tr0Spec trivial() { return {Kind::Trivial, {}}; }
    static Tr0Spec mixture(std::vector<std::pair<MatrixRep, double>> m) {
        return {Kind::Mix, std::move(m)};
    }
};

struct WeightedRep {
    double weight = 0.0;
    MatrixRep rep;
};

/// Parameter data of an indecomposable character: weighted irreducible
/// representations on the alpha and beta rows, plus the residual trace.
class ThomaParams {
public:
    ThomaParams(const GroupTable& g, std::vector<WeightedRep> alpha,
                std::vector<WeightedRep> beta, Tr0Spec tr0)
        : group_(&g), alpha_(std::move(alpha)), beta_(std::move(beta)), tr0_(std::move(tr0)) {
        validate();
    }

    const GroupTable& group() const { return *group_; }
    const std::vector<WeightedRep>& alpha() const { return alpha_; }
    const std::vector<WeightedRep>& beta() const { return beta_; }
    const Tr0Spec& tr0() const { return tr0_; }
    double delta() const { return delta_; }

    double tr0_value_real(int x) const { return tr0_value(x).real(); }

    Complex tr0_value(int x) const {
        const GroupTable& G = *group_;
        switch (tr0_.kind) {
            case Tr0Spec::Kind::Regular:
                return x == G.identity() ? 1.0 : 0.0;
            case Tr0Spec::Kind::Trivial:
                return 1.0;
            case Tr0Spec::Kind::Mix: {
                Complex v = 0.0;
                for (const auto& [rep, c] : tr0_.mix)
                    v += c * rep.images[x].trace() / static_cast<double>(rep.dim);
                return v;
            }
        }
        return 0.0;
    }

private:
    void validate() {
        auto check_row = [&](const std::vector<WeightedRep>& row, const char* label) {
            double prev = 2.0;
            for (const auto& wr : row) {
                if (!(wr.weight > 0.0 && wr.weight <= 1.0))
                    throw std::invalid_argument(std::string(label) + " weights must lie in (0,1]");
                if (wr.weight > prev + 1e-12)
                    throw std::invalid_argument(std::string(label) + " weights must be non-increasing");
                prev = wr.weight;
                auto v = validate_rep(*group_, wr.rep);
                if (!v.ok() || !v.irreducible)
                    throw std::invalid_argument("representation '" + wr.rep.name +
                                                "' is not a valid irreducible (chi inner " +
                                                std::to_string(v.chi_inner) + ")");
            }
        };
        check_row(alpha_, "alpha");
        check_row(beta_, "beta");
        double sum = 0.0;
        for (const auto& wr : alpha_) sum += wr.weight * wr.rep.dim;
        for (const auto& wr : beta_) sum += wr.weight * wr.rep.dim;
        if (sum > 1.0 + 1e-12)
            throw std::invalid_argument("sum of weight*dim exceeds 1 (got " + std::to_string(sum) +
                                        ")");
        delta_ = std::max(0.0, 1.0 - sum);
        if (tr0_.kind == Tr0Spec::Kind::Mix) {
            double csum = 0.0;
            for (const auto& [rep, c] : tr0_.mix) {
                if (c < -1e-12) throw std::invalid_argument("tr0 mix coefficients must be >= 0");
                auto v = validate_rep(*group_, rep);
                if (!v.ok() || !v.irreducible)
                    throw std::invalid_argument("tr0 mix component '" + rep.name +
                                                "' is not irreducible");
                csum += c;
            }
            if (std::abs(csum - 1.0) > 1e-9)
                throw std::invalid_argument("tr0 mix coefficients must sum to 1");
        }
    }

    const GroupTable* group_;
    std::vector<WeightedRep> alpha_, beta_;
    Tr0Spec tr0_;
    double delta_ = 0.0;
};

/// Character value at g: product over nontrivial orbits of the bracket from
/// the classification theorem. Fixed points contribute only through delta and
/// the trace terms at their single entry.
inline Complex evaluate(const ThomaParams& params, const WreathElement& g) {
    if (g.group != &params.group())
        throw std::invalid_argument("evaluate: element group does not match params group");
    Complex value = 1.0;
    std::set<int> covered;
    for (const auto& orb : g.perm.orbits()) {
        for (int i : orb) covered.insert(i);
        int gtilde = cycle_product(g, orb);
        double l = static_cast<double>(orb.size());
        double beta_sign = (orb.size() % 2 == 1) ? 1.0 : -1.0;  // (-1)^{|p|-1}
        Complex bracket = 0.0;
        for (const auto& wr : params.alpha())
            bracket += std::pow(wr.weight, l) * wr.rep.images[gtilde].trace();
        for (const auto& wr : params.beta())
            bracket += beta_sign * std::pow(wr.weight, l) * wr.rep.images[gtilde].trace();
        value *= bracket;
    }
    for (auto [p, x] : g.tuple.entries()) {
        if (covered.count(p)) continue;
        Complex bracket = params.delta() * params.tr0_value(x);
        for (const auto& wr : params.alpha()) bracket += wr.weight * wr.rep.images[x].trace();
        for (const auto& wr : params.beta()) bracket += wr.weight * wr.rep.images[x].trace();
        value *= bracket;
    }
    return value;
}

/// Parameter data in the abelian specialization: dual characters instead of
/// matrix representations, and a probability measure on the dual group.
struct AbelianParams {
    const GroupTable* group = nullptr;
    std::vector<std::pair<double, DualCharacter>> alpha, beta;
    std::vector<std::pair<double, DualCharacter>> mu;  // finitely supported measure

    AbelianParams(const GroupTable& g, std::vector<std::pair<double, DualCharacter>> a,
                  std::vector<std::pair<double, DualCharacter>> b,
                  std::vector<std::pair<double, DualCharacter>> m)
        : group(&g), alpha(std::move(a)), beta(std::move(b)), mu(std::move(m)) {
        if (!g.is_abelian()) throw std::invalid_argument("AbelianParams: group is not abelian");
        double musum = 0.0;
        for (auto& [w, _] : mu) {
            if (w < -1e-12) throw std::invalid_argument("mu weights must be nonnegative");
            musum += w;
        }
        if (std::abs(musum - 1.0) > 1e-12)
            throw std::invalid_argument("mu must be a probability vector");
        double s = 0.0;
        for (auto& [w, _] : alpha) s += w;
        for (auto& [w, _] : beta) s += w;
        if (s > 1.0 + 1e-12) throw std::invalid_argument("sum alpha + sum beta exceeds 1");
    }
};

inline Complex evaluate_abelian(const AbelianParams& params, const WreathElement& g) {
    if (g.group != params.group)
        throw std::invalid_argument("evaluate_abelian: element group mismatch");
    double wsum = 0.0;
    for (auto& [w, _] : params.alpha) wsum += w;
    for (auto& [w, _] : params.beta) wsum += w;
    double delta = std::max(0.0, 1.0 - wsum);
    Complex value = 1.0;
    std::set<int> covered;
    auto orbit_bracket = [&](int prod, size_t len) {
        double beta_sign = (len % 2 == 1) ? 1.0 : -1.0;
        Complex bracket = 0.0;
        if (len == 1) {
            Complex avg = 0.0;
            for (const auto& [w, chi] : params.mu) avg += w * chi.values[prod];
            bracket += delta * avg;
        }
        for (const auto& [w, chi] : params.alpha)
            bracket += std::pow(w, static_cast<double>(len)) * chi.values[prod];
        for (const auto& [w, chi] : params.beta)
            bracket += beta_sign * std::pow(w, static_cast<double>(len)) * chi.values[prod];
        return bracket;
    };
    for (const auto& orb : g.perm.orbits()) {
        for (int i : orb) covered.insert(i);
        value *= orbit_bracket(cycle_product(g, orb), orb.size());
    }
    for (auto [p, x] : g.tuple.entries()) {
        if (covered.count(p)) continue;
        value *= orbit_bracket(x, 1);
    }
    return value;
}

/// Equivalent ThomaParams built from abelian data (1-dim reps, tr0 = mu-mix).
inline ThomaParams to_thoma(const AbelianParams& ap) {
    std::vector<WeightedRep> a, b;
    int idx = 0;
    for (const auto& [w, chi] : ap.alpha)
        a.push_back({w, rep_from_dual(chi, "alpha" + std::to_string(idx++))});
    idx = 0;
    for (const auto& [w, chi] : ap.beta)
        b.push_back({w, rep_from_dual(chi, "beta" + std::to_string(idx++))});
    std::vector<std::pair<MatrixRep, double>> mix;
    idx = 0;
    for (const auto& [w, chi] : ap.mu)
        mix.push_back({rep_from_dual(chi, "mu" + std::to_string(idx++)), w});
    return ThomaParams(*ap.group, std::move(a), std::move(b), Tr0Spec::mixture(std::move(mix)));
}

/// Classical single-row value: the weights repeat with multiplicity dim, and
/// every cycle of length l > 1 contributes sum(alpha'^l) + (-1)^{l-1} sum(beta'^l).
inline double thoma_classical(const ThomaParams& params, const std::vector<long>& cycle_type) {
    double value = 1.0;
    for (long l : cycle_type) {
        if (l <= 1) continue;
        double bracket = 0.0;
        for (const auto& wr : params.alpha())
            bracket += wr.rep.dim * std::pow(wr.weight, static_cast<double>(l));
        double sign = (l % 2 == 1) ? 1.0 : -1.0;
        for (const auto& wr : params.beta())
            bracket += sign * wr.rep.dim * std::pow(wr.weight, static_cast<double>(l));
        value *= bracket;
    }
    return value;
}

/// Smallest eigenvalue of the Gram matrix [phi(g_j g_k^{-1})].
inline double gram_psd(const ThomaParams& params, const std::vector<WreathElement>& elements) {
    if (elements.size() > 64) throw std::invalid_argument("gram_psd: at most 64 elements");
    const int n = static_cast<int>(elements.size());
    Matrix m(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            m(j, k) = evaluate(params, multiply(elements[j], inverse(elements[k])));
    Matrix herm = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm);
    return es.eigenvalues().minCoeff();
}

/// |phi(g) - prod phi(cycle factors)|; the evaluator is multiplicative by
/// construction, so this guards refactoring.
inline double check_multiplicativity(const ThomaParams& params, const WreathElement& g) {
    Complex lhs = evaluate(params, g);
    Complex rhs = 1.0;
    for (const auto& f : cycle_decompose(g)) rhs *= evaluate(params, f);
    return std::abs(lhs - rhs);
}

// ---- alternating sums over S_m ---------------------------------------------

namespace detail {

/// Calls f(orbit_count, sign) once per permutation of {1..m}.
template <typename F>
void for_each_perm_orbit(int m, F&& f) {
    std::vector<int> p(m);
    std::iota(p.begin(), p.end(), 0);
    do {
        std::vector<bool> seen(m, false);
        int orbits = 0;
        for (int i = 0; i < m; ++i) {
            if (seen[i]) continue;
            ++orbits;
            int j = i;
            while (!seen[j]) {
                seen[j] = true;
                j = p[j];
            }
        }
        int sign = ((m - orbits) % 2 == 0) ? 1 : -1;
        f(orbits, sign);
    } while (std::next_permutation(p.begin(), p.end()));
}

}  // namespace detail

/// Signed sum over S_m of nu^{#orbits}; equal to the falling factorial
/// nu (nu-1) ... (nu-m+1). Nonnegativity certifies positive-definiteness of
/// the power character at level m.
inline double alternating_sum(double nu, int m) {
    if (m < 1 || m > 8) throw std::invalid_argument("alternating_sum: m must be in 1..8");
    double total = 0.0;
    detail::for_each_perm_orbit(m, [&](int orbits, int sign) {
        total += sign * std::pow(nu, orbits);
    });
    return total;
}

/// Unsigned analogue: sum over S_m of nu^{#orbits} = nu (nu+1) ... (nu+m-1).
inline double symmetric_sum(double nu, int m) {
    if (m < 1 || m > 8) throw std::invalid_argument("symmetric_sum: m must be in 1..8");
    double total = 0.0;
    detail::for_each_perm_orbit(m, [&](int orbits, int) { total += std::pow(nu, orbits); });
    return total;
}

inline Rational alternating_sum_exact(const Rational& nu, int m) {
    if (m < 1 || m > 8) throw std::invalid_argument("alternating_sum_exact: m must be in 1..8");
    Rational total(0);
    detail::for_each_perm_orbit(m, [&](int orbits, int sign) {
        Rational p(1);
        for (int i = 0; i < orbits; ++i) p *= nu;
        total += sign > 0 ? p : -p;
    });
    return total;
}

inline Rational symmetric_sum_exact(const Rational& nu, int m) {
    if (m < 1 || m > 8) throw std::invalid_argument("symmetric_sum_exact: m must be in 1..8");
    Rational total(0);
    detail::for_each_perm_orbit(m, [&](int orbits, int) {
        Rational p(1);
        for (int i = 0; i < orbits; ++i) p *= nu;
        total += p;
    });
    return total;
}

/// Coefficients (index = power of t) of sum_{s in S_m} sgn(s) t^{#orbits}.
inline std::vector<long long> alternating_poly(int m) {
    std::vector<long long> c(m + 1, 0);
    detail::for_each_perm_orbit(m, [&](int orbits, int sign) { c[orbits] += sign; });
    return c;
}

inline std::vector<long long> symmetric_poly(int m) {
    std::vector<long long> c(m + 1, 0);
    detail::for_each_perm_orbit(m, [&](int orbits, int) { c[orbits] += 1; });
    return c;
}

/// t (t-1) ... (t-m+1) as integer coefficients.
inline std::vector<long long> falling_factorial_poly(int m) {
    std::vector<long long> c = {0, 1};  // t
    for (int k = 1; k < m; ++k) {
        std::vector<long long> next(c.size() + 1, 0);
        for (size_t i = 0; i < c.size(); ++i) {
            next[i + 1] += c[i];
            next[i] -= k * c[i];
        }
        c = std::move(next);
    }
    c.resize(m + 1, 0);
    return c;
}

/// t (t+1) ... (t+m-1) as integer coefficients.
inline std::vector<long long> rising_factorial_poly(int m) {
    std::vector<long long> c = {0, 1};
    for (int k = 1; k < m; ++k) {
        std::vector<long long> next(c.size() + 1, 0);
        for (size_t i = 0; i < c.size(); ++i) {
            next[i + 1] += c[i];
            next[i] += k * c[i];
        }
        c = std::move(next);
    }
    c.resize(m + 1, 0);
    return c;
}

/// Exact polynomial identity check for both the signed and unsigned sums.
inline bool alternating_identity_exact(int m) {
    return alternating_poly(m) == falling_factorial_poly(m) &&
           symmetric_poly(m) == rising_factorial_poly(m);
}

}  // namespace wreathlab
