#pragma once

#include <Eigen/Dense>
#include <optional>

#include "wreathlab/wreath.hpp"

namespace wreathlab {

/// Site distribution on Z2 x Z2: p[k][l] = probability of the point (k,l).
struct ProbMatrix {
    double p[2][2] = {{0.25, 0.25}, {0.25, 0.25}};

    static ProbMatrix from_flat(const std::array<double, 4>& v) {
        ProbMatrix m;
        m.p[0][0] = v[0];
        m.p[0][1] = v[1];
        m.p[1][0] = v[2];
        m.p[1][1] = v[3];
        m.validate();
        return m;
    }

    void validate() const {
        double s = 0.0;
        for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l) {
                if (p[k][l] < -1e-15) throw std::invalid_argument("probabilities must be >= 0");
                s += p[k][l];
            }
        if (std::abs(s - 1.0) > 1e-12)
            throw std::invalid_argument("probabilities must sum to 1 (got " + std::to_string(s) + ")");
    }

    bool strictly_positive() const {
        for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l)
                if (p[k][l] <= 0.0) return false;
        return true;
    }

    double det() const { return p[0][0] * p[1][1] - p[0][1] * p[1][0]; }

    /// The per-site image of the constant function 1: entries sqrt(p_kl).
    Eigen::Matrix2d iso_of_one() const {
        Eigen::Matrix2d m;
        m << std::sqrt(p[0][0]), std::sqrt(p[0][1]), std::sqrt(p[1][0]), std::sqrt(p[1][1]);
        return m;
    }
};

/// The explicit 4x4 site matrices in the orthonormal basis e_kl = chi_kl /
/// sqrt(p_kl), ordered (00, 01, 10, 11).
struct SiteOperators {
    Eigen::Matrix4d O0, O1;

    static Eigen::Matrix4d sign0(int b) {
        double s = b % 2 == 0 ? 1.0 : -1.0;
        Eigen::Vector4d d(1.0, 1.0, s, s);
        return d.asDiagonal();
    }
    static Eigen::Matrix4d sign1(int b) {
        double s = b % 2 == 0 ? 1.0 : -1.0;
        Eigen::Vector4d d(1.0, s, 1.0, s);
        return d.asDiagonal();
    }
};

inline SiteOperators site_operators(const ProbMatrix& p, bool require_strictly_positive = true) {
    p.validate();
    if (require_strictly_positive && !p.strictly_positive())
        throw std::invalid_argument(
            "measure is not quasi-invariant: some p_kl vanishes");
    double a = p.p[0][0] + p.p[0][1];
    double b = p.p[1][0] + p.p[1][1];
    double c = std::sqrt(p.p[0][0] * p.p[1][0]) + std::sqrt(p.p[0][1] * p.p[1][1]);
    double ar = p.p[0][0] + p.p[1][0];
    double br = p.p[0][1] + p.p[1][1];
    double cr = std::sqrt(p.p[0][0] * p.p[0][1]) + std::sqrt(p.p[1][0] * p.p[1][1]);
    SiteOperators ops;
    ops.O0 << a, 0, c, 0,
              0, a, 0, c,
              c, 0, b, 0,
              0, c, 0, b;
    ops.O1 << ar, cr, 0, 0,
              cr, br, 0, 0,
              0, 0, ar, cr,
              0, 0, cr, br;
    return ops;
}

// 4x4 matrices of left/right multiplication on M2 in the basis E00,E01,E10,E11.
inline Eigen::Matrix4d left_mult4(const Eigen::Matrix2d& a) {
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) m(i * 2 + j, k * 2 + j) = a(i, k);
    return m;
}

inline Eigen::Matrix4d right_mult4(const Eigen::Matrix2d& b) {
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int l = 0; l < 2; ++l) m(i * 2 + j, i * 2 + l) = b(l, j);
    return m;
}

struct IsoReport {
    Eigen::Matrix2d iso_of_one;
    Eigen::Matrix2d left_form;   // O0 becomes left multiplication by this
    Eigen::Matrix2d right_form;  // O1 becomes right multiplication by this
    double max_residual = 0.0;   // over the four identities
};

/// Verifies that under the matrix-algebra identification the site operators
/// turn into one-sided multiplications and the sign actions into diagonal
/// one-sided multiplications.
inline IsoReport iso_and_lr(const ProbMatrix& p) {
    auto ops = site_operators(p);
    IsoReport rep;
    rep.iso_of_one = p.iso_of_one();
    rep.left_form << p.p[0][0] + p.p[0][1],
        std::sqrt(p.p[0][0] * p.p[1][0]) + std::sqrt(p.p[0][1] * p.p[1][1]),
        std::sqrt(p.p[0][0] * p.p[1][0]) + std::sqrt(p.p[0][1] * p.p[1][1]),
        p.p[1][0] + p.p[1][1];
    rep.right_form << p.p[0][0] + p.p[1][0],
        std::sqrt(p.p[0][0] * p.p[0][1]) + std::sqrt(p.p[1][0] * p.p[1][1]),
        std::sqrt(p.p[0][0] * p.p[0][1]) + std::sqrt(p.p[1][0] * p.p[1][1]),
        p.p[0][1] + p.p[1][1];
    Eigen::Matrix2d sgn;
    sgn << 1, 0, 0, -1;
    double r = 0.0;
    r = std::max(r, (ops.O0 - left_mult4(rep.left_form)).cwiseAbs().maxCoeff());
    r = std::max(r, (ops.O1 - right_mult4(rep.right_form)).cwiseAbs().maxCoeff());
    r = std::max(r, (SiteOperators::sign0(1) - left_mult4(sgn)).cwiseAbs().maxCoeff());
    r = std::max(r, (SiteOperators::sign1(1) - right_mult4(sgn)).cwiseAbs().maxCoeff());
    rep.max_residual = r;
    return rep;
}

/// Finite truncation of the product-measure representation: functions on
/// (Z2 x Z2)^n in the orthonormal indicator basis. Site 1 is the most
/// significant digit of the basis index; digit = 2*x0 + x1.
class TypeIIILab {
public:
    TypeIIILab(const ProbMatrix& p, int n) : p_(p), n_(n) {
        if (n < 1 || n > 16) throw std::invalid_argument("TypeIIILab: n must be in 1..16");
        p.validate();
        dim_ = 1;
        for (int i = 0; i < n; ++i) dim_ *= 4;
        xi_.resize(dim_);
        for (long x = 0; x < dim_; ++x) {
            double w = 1.0;
            for (int i = 1; i <= n; ++i) {
                int d = digit(x, i);
                w *= p.p[d >> 1][d & 1];
            }
            xi_(x) = std::sqrt(w);
        }
    }

    int sites() const { return n_; }
    long dim() const { return dim_; }
    const ProbMatrix& prob() const { return p_; }

    /// The constant function 1, as a unit vector.
    const Eigen::VectorXd& one() const { return xi_; }

    int digit(long x, int site) const {
        int shift = 2 * (n_ - site);
        return static_cast<int>((x >> shift) & 3);
    }
    long with_digit(long x, int site, int d) const {
        int shift = 2 * (n_ - site);
        return (x & ~(3L << shift)) | (long(d) << shift);
    }

    /// pi((s0 gamma0, s1 gamma1)) applied to a coefficient vector.
    Eigen::VectorXd apply_pair(const Permutation& s0, const GammaTuple& g0, const Permutation& s1,
                               const GammaTuple& g1, const Eigen::VectorXd& v) const {
        check_support(s0.max_support());
        check_support(s1.max_support());
        check_support(g0.max_support());
        check_support(g1.max_support());
        // diagonal sign part first, then the measure-preserving relabeling
        Eigen::VectorXd w(v.size());
        for (long x = 0; x < dim_; ++x) {
            int parity = 0;
            for (auto [i, gi] : g0.entries()) parity += gi * (digit(x, i) >> 1);
            for (auto [i, gi] : g1.entries()) parity += gi * (digit(x, i) & 1);
            w(x) = parity % 2 == 0 ? v(x) : -v(x);
        }
        if (s0.is_identity() && s1.is_identity()) return w;
        Eigen::VectorXd out(v.size());
        for (long x = 0; x < dim_; ++x) {
            // (a_g x)_i = (x_{s0(i)}^{(0)}, x_{s1(i)}^{(1)})
            long y = 0;
            for (int i = 1; i <= n_; ++i) {
                int b0 = digit(x, s0.apply(i)) >> 1;
                int b1 = digit(x, s1.apply(i)) & 1;
                y = (y << 2) | (b0 << 1) | b1;
            }
            out(x) = w(y);
        }
        return out;
    }

    Eigen::VectorXd apply_pair(const GPair& g, const Eigen::VectorXd& v) const {
        auto conv = [this](const WreathElement& e) {
            for (auto [pos, x] : e.tuple.entries())
                if (x > 1) throw std::invalid_argument("base group must be Z2");
            (void)this;
            return std::pair<Permutation, GammaTuple>{e.perm, e.tuple};
        };
        auto [s0, g0] = conv(g.first);
        auto [s1, g1] = conv(g.second);
        return apply_pair(s0, g0, s1, g1, v);
    }

    /// pi^{(0)}(g) = pi((g, e)); pi^{(1)}(g) = pi((e, g)).
    Eigen::VectorXd apply_left(const WreathElement& g, const Eigen::VectorXd& v) const {
        return apply_pair(g.perm, g.tuple, {}, {}, v);
    }
    Eigen::VectorXd apply_right(const WreathElement& g, const Eigen::VectorXd& v) const {
        return apply_pair({}, {}, g.perm, g.tuple, v);
    }

    /// <pi^{(0)}(g) 1, 1>.
    double state_value(const WreathElement& g) const { return xi_.dot(apply_left(g, xi_)); }

    /// Dense matrix of a site operator placed at `site` (identity elsewhere).
    Eigen::MatrixXd embed_site(const Eigen::Matrix4d& op, int site) const {
        if (dim_ > 4096) throw std::invalid_argument("embed_site: truncation too large");
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim_, dim_);
        for (long x = 0; x < dim_; ++x) {
            int d = digit(x, site);
            for (int dp = 0; dp < 4; ++dp) {
                double c = op(dp, d);
                if (c != 0.0) m(with_digit(x, site, dp), x) += c;
            }
        }
        return m;
    }

    /// || (1/L) sum_l pi^0((k,l)) v  -  (O0 at site k) v ||.
    double cesaro_site_gap(int k, int L, const Eigen::VectorXd& v) const {
        check_support(L);
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(dim_);
        for (int l = 1; l <= L; ++l) {
            if (l == k) {
                acc += v;
                continue;
            }
            acc += apply_pair(Permutation::transposition(k, l), {}, {}, {}, v);
        }
        acc /= static_cast<double>(L);
        auto ops = site_operators(p_);
        Eigen::VectorXd target(dim_);
        target.setZero();
        for (long x = 0; x < dim_; ++x) {
            int d = digit(x, k);
            for (int dp = 0; dp < 4; ++dp) {
                double c = ops.O0(dp, d);
                if (c != 0.0) target(with_digit(x, k, dp)) += c * v(x);
            }
        }
        return (acc - target).norm();
    }

private:
    void check_support(int s) const {
        if (s > n_) throw std::invalid_argument("support exceeds the truncation");
    }

    ProbMatrix p_;
    int n_;
    long dim_;
    Eigen::VectorXd xi_;
};

struct CyclicReport {
    long left_span = 0;
    long right_span = 0;
    long full_dim = 0;
    bool cyclic = false;  // both spans fill the space
};

/// Span of the left (resp. right) algebra orbit of the constant function,
/// generated by the site operators and the sign actions.
inline CyclicReport cyclic_separating_check(const ProbMatrix& p, int n) {
    if (n < 1 || n > 3) throw std::invalid_argument("cyclic_separating_check: n must be in 1..3");
    TypeIIILab lab(p, n);
    auto ops = site_operators(p, false);
    auto span_dim = [&](bool left) {
        std::vector<Eigen::MatrixXd> gens;
        for (int i = 1; i <= n; ++i) {
            gens.push_back(lab.embed_site(left ? ops.O0 : ops.O1, i));
            gens.push_back(lab.embed_site(left ? SiteOperators::sign0(1) : SiteOperators::sign1(1), i));
        }
        std::vector<Eigen::VectorXd> basis = {lab.one()};
        Eigen::MatrixXd mat(lab.dim(), 1);
        mat.col(0) = lab.one();
        long rank = 1;
        size_t frontier = 0;
        while (frontier < basis.size() && rank < lab.dim()) {
            size_t end = basis.size();
            for (size_t b = frontier; b < end; ++b) {
                for (const auto& g : gens) {
                    Eigen::VectorXd w = g * basis[b];
                    Eigen::MatrixXd trial(lab.dim(), mat.cols() + 1);
                    trial.leftCols(mat.cols()) = mat;
                    trial.col(mat.cols()) = w;
                    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(trial);
                    qr.setThreshold(1e-9);
                    if (qr.rank() > rank) {
                        rank = qr.rank();
                        mat = trial;
                        basis.push_back(w);
                        if (rank == lab.dim()) break;
                    }
                }
                if (rank == lab.dim()) break;
            }
            frontier = end;
        }
        return rank;
    };
    CyclicReport rep;
    rep.full_dim = lab.dim();
    rep.left_span = span_dim(true);
    rep.right_span = span_dim(false);
    rep.cyclic = rep.left_span == rep.full_dim && rep.right_span == rep.full_dim;
    return rep;
}

struct ModularReport {
    Eigen::MatrixXd delta;       // the modular operator on the 4^n space
    double closed_form_residual = 0.0;  // vs conjugation by the per-site O-form
    double fixes_xi = 0.0;              // ||Delta xi - xi||
    double inverse_residual = 0.0;      // ||Delta Delta^{-1} - I||
    bool tracial = false;               // per-site O-form is a multiple of I
    double identity_gap = 0.0;          // ||Delta - I|| (meaningful when tracial)
};

namespace typeiii_detail {

inline Eigen::MatrixXd kron_pow(const Eigen::Matrix4d& a, int n) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Ones(1, 1);
    for (int i = 0; i < n; ++i) {
        Eigen::MatrixXd next(m.rows() * 4, m.cols() * 4);
        for (long r = 0; r < m.rows(); ++r)
            for (long c = 0; c < m.cols(); ++c) next.block(r * 4, c * 4, 4, 4) = m(r, c) * a;
        m = std::move(next);
    }
    return m;
}

}  // namespace typeiii_detail

/// Builds the modular operator of the constant function from its defining
/// antilinear maps S(a xi) = a* xi and F = S*, then verifies the closed form:
/// conjugation by the per-site O-form.
inline ModularReport modular_operator(const ProbMatrix& p, int n) {
    if (n < 1 || n > 3) throw std::invalid_argument("modular_operator: n must be in 1..3");
    if (std::abs(p.det()) < 1e-12)
        throw std::invalid_argument("vector not separating: det of [p_kl] vanishes");
    Eigen::Matrix2d M = p.iso_of_one();
    // S = R(M) T conj R(M)^{-1} per site, with T the adjoint relabeling of
    // matrix units; everything is real here.
    Eigen::Matrix4d T = Eigen::Matrix4d::Zero();
    T(0, 0) = T(3, 3) = 1.0;
    T(1, 2) = T(2, 1) = 1.0;
    Eigen::Matrix4d RM = right_mult4(M);
    Eigen::Matrix4d s_site = RM * T * RM.inverse();
    Eigen::MatrixXd S = typeiii_detail::kron_pow(s_site, n);
    Eigen::MatrixXd delta = S.transpose() * S;

    ModularReport rep;
    rep.delta = delta;
    Eigen::Matrix2d K = M * M.transpose();
    Eigen::Matrix4d expected_site = left_mult4(K) * right_mult4(K.inverse() * M) * RM.inverse();
    Eigen::MatrixXd expected = typeiii_detail::kron_pow(expected_site, n);
    // residual over the basis of left multiplications, i.e. columnwise
    rep.closed_form_residual = (delta * typeiii_detail::kron_pow(RM, n) -
                                expected * typeiii_detail::kron_pow(RM, n))
                                   .cwiseAbs()
                                   .maxCoeff();
    TypeIIILab lab(p, n);
    rep.fixes_xi = (delta * lab.one() - lab.one()).norm();
    rep.inverse_residual =
        (delta * delta.inverse() - Eigen::MatrixXd::Identity(lab.dim(), lab.dim()))
            .cwiseAbs()
            .maxCoeff();
    double off = std::abs(K(0, 1)) + std::abs(K(1, 0));
    double diag_gap = std::abs(K(0, 0) - K(1, 1));
    rep.tracial = off < 1e-12 && diag_gap < 1e-12;
    rep.identity_gap =
        (delta - Eigen::MatrixXd::Identity(lab.dim(), lab.dim())).cwiseAbs().maxCoeff();
    return rep;
}

/// |phi(s g) - phi(g s)| for the type-III state phi = <pi^0(.) 1, 1>.
inline double kms_trace_check(const ProbMatrix& p, int n, const Permutation& s,
                              const WreathElement& g) {
    TypeIIILab lab(p, n);
    WreathElement se(*g.group, s, {});
    double a = lab.state_value(multiply(se, g));
    double b = lab.state_value(multiply(g, se));
    return std::abs(a - b);
}

struct CentralityWitness {
    WreathElement g, h;
    double gap = 0.0;
};

/// Searches small elements for |phi(gh) - phi(hg)| > 0: the state is central
/// under permutations but not under tuple moves.
inline std::optional<CentralityWitness> centrality_witness(const ProbMatrix& p, int n,
                                                           const GroupTable& z2) {
    TypeIIILab lab(p, n);
    std::vector<WreathElement> cand;
    for (int i = 1; i <= std::min(2, n); ++i) {
        GammaTuple t;
        t.set(i, 1, z2);
        cand.push_back(WreathElement(z2, {}, t));
        if (n >= 2) cand.push_back(WreathElement(z2, Permutation::transposition(1, 2), t));
    }
    if (n >= 2) cand.push_back(WreathElement(z2, Permutation::transposition(1, 2), {}));
    if (n >= 3) cand.push_back(WreathElement(z2, Permutation::transposition(2, 3), {}));
    std::optional<CentralityWitness> best;
    for (const auto& g : cand)
        for (const auto& h : cand) {
            double gap = std::abs(lab.state_value(multiply(g, h)) - lab.state_value(multiply(h, g)));
            if (!best || gap > best->gap) best = CentralityWitness{g, h, gap};
        }
    return best;
}

}  // namespace wreathlab
