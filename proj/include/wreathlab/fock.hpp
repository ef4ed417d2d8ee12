#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "wreathlab/thoma.hpp"

namespace wreathlab {

// ---- site symbols -----------------------------------------------------------
//
// A site holds a left item and a right item. Left items are either a basis
// vector of an alpha/beta block or a basis vector of the residual space (the
// GNS space of tr0, tagged with the copy it originated from). Right items are
// either a block basis vector or blank. The reference vector eta uses only
// diagonal block pairs and residual-with-blank symbols; the other combinations
// appear when permutations displace left items, and are orthogonal to eta.

struct SiteSymbol {
    bool left_residual = false;
    int left_a = 0;  // block id, or residual copy
    int left_b = 0;  // index within block, or residual basis index
    bool right_blank = false;
    int right_a = 0;  // block id
    int right_b = 0;  // index within block

    uint64_t pack() const {
        return (uint64_t(left_residual) << 41) | (uint64_t(left_a) << 31) |
               (uint64_t(left_b) << 21) | (uint64_t(right_blank) << 20) |
               (uint64_t(right_a) << 10) | uint64_t(right_b);
    }
    static SiteSymbol unpack(uint64_t v) {
        SiteSymbol s;
        s.left_residual = (v >> 41) & 1;
        s.left_a = int((v >> 31) & 1023);
        s.left_b = int((v >> 21) & 1023);
        s.right_blank = (v >> 20) & 1;
        s.right_a = int((v >> 10) & 1023);
        s.right_b = int(v & 1023);
        return s;
    }
    static SiteSymbol pair(int lb, int li, int rb, int ri) {
        return SiteSymbol{false, lb, li, false, rb, ri};
    }
    static SiteSymbol residual(int copy, int idx) {
        return SiteSymbol{true, copy, idx, true, 0, 0};
    }
};

/// The finite-truncation realization space derived from ThomaParams: block
/// list, residual-space model, and the per-site expansion of eta.
class FockSpace {
public:
    struct Block {
        bool is_beta;
        double weight;
        const MatrixRep* rep;
    };

    explicit FockSpace(const ThomaParams& params) : params_(&params) {
        const GroupTable& G = params.group();
        for (const auto& wr : params.alpha()) blocks_.push_back({false, wr.weight, &wr.rep});
        for (const auto& wr : params.beta()) blocks_.push_back({true, wr.weight, &wr.rep});
        build_h0(G);
    }

    const ThomaParams& params() const { return *params_; }
    const GroupTable& group() const { return params_->group(); }
    const std::vector<Block>& blocks() const { return blocks_; }
    int h0_dim() const { return h0_dim_; }

    /// Sparse expansion of the site-j vacuum vector: (symbol, coefficient).
    /// With `twisted` the beta-block components carry a flipped sign; that
    /// variant records a fermionic crossing absorbed into an unexpanded site.
    std::vector<std::pair<SiteSymbol, double>> eta_components(int site, bool twisted = false) const {
        std::vector<std::pair<SiteSymbol, double>> out;
        for (int b = 0; b < static_cast<int>(blocks_.size()); ++b) {
            double c = std::sqrt(blocks_[b].weight);
            if (twisted && blocks_[b].is_beta) c = -c;
            for (int j = 0; j < blocks_[b].rep->dim; ++j)
                out.push_back({SiteSymbol::pair(b, j, b, j), c});
        }
        double sd = std::sqrt(params_->delta());
        if (sd > 0.0)
            for (const auto& [idx, c] : xi0_) out.push_back({SiteSymbol::residual(site, idx), sd * c});
        return out;
    }

    /// <eta_twisted, eta> = sum_alpha w dim - sum_beta w dim + delta.
    double twist_overlap() const {
        double v = params_->delta();
        for (const auto& b : blocks_) v += (b.is_beta ? -1.0 : 1.0) * b.weight * b.rep->dim;
        return v;
    }

    /// <symbol, eta_site>; nonzero only for diagonal pairs and same-copy
    /// residual symbols.
    double eta_coef(int site, const SiteSymbol& s) const {
        if (!s.left_residual && !s.right_blank) {
            if (s.left_a == s.right_a && s.left_b == s.right_b)
                return std::sqrt(blocks_[s.left_a].weight);
            return 0.0;
        }
        if (s.left_residual && s.right_blank) {
            if (s.left_a != site) return 0.0;
            double sd = std::sqrt(params_->delta());
            if (sd == 0.0) return 0.0;
            for (const auto& [idx, c] : xi0_)
                if (idx == s.left_b) return sd * c;
            return 0.0;
        }
        return 0.0;  // mixed combinations never occur in eta
    }

    /// Left action of a group element on a left item: list of (new symbol,
    /// coefficient) with the right item untouched.
    void act_left(int gamma, const SiteSymbol& s,
                  std::vector<std::pair<SiteSymbol, Complex>>& out) const {
        out.clear();
        if (!s.left_residual) {
            const Matrix& m = blocks_[s.left_a].rep->images[gamma];
            for (int i = 0; i < m.rows(); ++i) {
                Complex c = m(i, s.left_b);
                if (c != 0.0) {
                    SiteSymbol t = s;
                    t.left_b = i;
                    out.push_back({t, c});
                }
            }
        } else {
            const Matrix& m = h0_action_[gamma];
            for (int i = 0; i < m.rows(); ++i) {
                Complex c = m(i, s.left_b);
                if (c != 0.0) {
                    SiteSymbol t = s;
                    t.left_b = i;
                    out.push_back({t, c});
                }
            }
        }
    }

    bool left_is_beta(const SiteSymbol& s) const {
        return !s.left_residual && blocks_[s.left_a].is_beta;
    }

private:
    void build_h0(const GroupTable& G) {
        const Tr0Spec& tr0 = params_->tr0();
        if (tr0.kind == Tr0Spec::Kind::Regular) {
            // GNS space of the regular trace: l^2(Gamma) with left translation
            h0_dim_ = G.order();
            h0_action_.assign(G.order(), Matrix::Zero(h0_dim_, h0_dim_));
            for (int g = 0; g < G.order(); ++g)
                for (int x = 0; x < G.order(); ++x) h0_action_[g](G.mult(g, x), x) = 1.0;
            xi0_ = {{G.identity(), 1.0}};
            return;
        }
        std::vector<std::pair<MatrixRep, double>> mix;
        if (tr0.kind == Tr0Spec::Kind::Trivial) {
            const MatrixRep* triv = G.irrep_by_name("trivial");
            if (triv) {
                mix.push_back({*triv, 1.0});
            } else {
                MatrixRep t;
                t.name = "trivial";
                t.dim = 1;
                t.images.assign(G.order(), Matrix::Identity(1, 1));
                mix.push_back({std::move(t), 1.0});
            }
        } else {
            mix = tr0.mix;
        }
        // GNS space of a mixed trace: one matrix block per component with
        // positive coefficient, basis = scaled matrix units, left action on
        // the row index.
        h0_dim_ = 0;
        std::vector<int> offset;
        for (const auto& [rep, c] : mix) {
            offset.push_back(h0_dim_);
            if (c > 0.0) h0_dim_ += rep.dim * rep.dim;
        }
        h0_action_.assign(G.order(), Matrix::Zero(h0_dim_, h0_dim_));
        for (size_t bi = 0; bi < mix.size(); ++bi) {
            const auto& [rep, c] = mix[bi];
            if (c <= 0.0) continue;
            int d = rep.dim;
            for (int g = 0; g < G.order(); ++g)
                for (int a = 0; a < d; ++a)
                    for (int ap = 0; ap < d; ++ap)
                        for (int b = 0; b < d; ++b)
                            h0_action_[g](offset[bi] + ap * d + b, offset[bi] + a * d + b) =
                                rep.images[g](ap, a);
            for (int a = 0; a < d; ++a)
                xi0_.push_back({offset[bi] + a * d + a, std::sqrt(c / d)});
        }
    }

    const ThomaParams* params_;
    std::vector<Block> blocks_;
    int h0_dim_ = 0;
    std::vector<Matrix> h0_action_;            // element -> unitary on the residual space
    std::vector<std::pair<int, double>> xi0_;  // sparse cyclic vector
};

// ---- states -----------------------------------------------------------------

namespace detail {

using Assignment = std::vector<std::pair<int, uint64_t>>;  // sorted by site

/// Marker for a site holding the twisted vacuum instead of a basis symbol.
inline constexpr uint64_t kTwistedEta = ~uint64_t(0);

struct AssignmentHash {
    size_t operator()(const Assignment& a) const {
        size_t h = 1469598103934665603ull;
        for (auto [site, sym] : a) {
            h = (h ^ size_t(site)) * 1099511628211ull;
            h = (h ^ size_t(sym)) * 1099511628211ull;
        }
        return h;
    }
};

}  // namespace detail

/// A vector in the truncated tensor power: sparse combination of basis
/// configurations, where sites absent from a configuration implicitly hold
/// the vacuum vector eta. States are plain values; operations touch only the
/// state they are handed, so independent computations can run concurrently.
class ProductState {
public:
    ProductState(const FockSpace& space, int sites) : space_(&space), sites_(sites) {
        // the upper bound keeps residual copy tags within the symbol packing
        if (sites < 1 || sites > 1000)
            throw std::invalid_argument("ProductState: sites must be in 1..1000");
    }

    static ProductState vacuum(const FockSpace& space, int sites) {
        ProductState st(space, sites);
        st.terms_[{}] = 1.0;
        return st;
    }

    const FockSpace& space() const { return *space_; }
    int sites() const { return sites_; }
    size_t term_count() const { return terms_.size(); }

    static constexpr size_t kTermBudget = 10'000'000;

    void add(const detail::Assignment& key, Complex amp) {
        auto it = terms_.find(key);
        if (it == terms_.end()) {
            if (terms_.size() >= kTermBudget)
                throw std::runtime_error("expansion exceeds the term budget");
            terms_.emplace(key, amp);
        } else {
            it->second += amp;
        }
    }

    ProductState& operator+=(const ProductState& o) {
        check_same(o);
        for (const auto& [k, a] : o.terms_) add(k, a);
        return *this;
    }
    ProductState& operator-=(const ProductState& o) {
        check_same(o);
        for (const auto& [k, a] : o.terms_) add(k, -a);
        return *this;
    }
    ProductState& operator*=(Complex c) {
        for (auto& [k, a] : terms_) a *= c;
        return *this;
    }

    /// Rewrites every term so the given sites are explicit, expanding the
    /// implicit (possibly twisted) eta there.
    void expand_sites(const std::vector<int>& sites) {
        for (int s : sites)
            if (s < 1 || s > sites_)
                throw std::invalid_argument("expand_sites: site outside truncation");
        std::unordered_map<detail::Assignment, Complex, detail::AssignmentHash> next;
        next.reserve(terms_.size());
        for (const auto& [key, amp] : terms_) {
            std::vector<std::pair<int, bool>> missing;  // (site, twisted)
            for (int s : sites) {
                bool found = false, twisted = false;
                for (auto [site, sym] : key)
                    if (site == s) {
                        found = sym != detail::kTwistedEta;
                        twisted = sym == detail::kTwistedEta;
                        break;
                    }
                if (!found) missing.push_back({s, twisted});
            }
            if (missing.empty()) {
                auto it = next.find(key);
                if (it == next.end()) next.emplace(key, amp); else it->second += amp;
                continue;
            }
            std::vector<std::pair<detail::Assignment, Complex>> partial = {{key, amp}};
            for (auto [s, twisted] : missing) {
                std::vector<std::pair<detail::Assignment, Complex>> grown;
                auto comps = space_->eta_components(s, twisted);
                grown.reserve(partial.size() * comps.size());
                for (const auto& [k, a] : partial) {
                    for (const auto& [sym, c] : comps) {
                        detail::Assignment k2 = k;
                        auto pos = std::lower_bound(
                            k2.begin(), k2.end(), std::make_pair(s, uint64_t(0)),
                            [](const auto& x, const auto& y) { return x.first < y.first; });
                        if (pos != k2.end() && pos->first == s)
                            pos->second = sym.pack();  // replace a twist marker
                        else
                            k2.insert(pos, {s, sym.pack()});
                        grown.push_back({std::move(k2), a * c});
                    }
                }
                partial = std::move(grown);
                if (partial.size() + next.size() > kTermBudget)
                    throw std::runtime_error("expansion exceeds the term budget");
            }
            for (auto& [k, a] : partial) {
                auto it = next.find(k);
                if (it == next.end()) next.emplace(std::move(k), a); else it->second += a;
            }
        }
        terms_ = std::move(next);
    }

    const std::unordered_map<detail::Assignment, Complex, detail::AssignmentHash>& terms() const {
        return terms_;
    }
    std::unordered_map<detail::Assignment, Complex, detail::AssignmentHash>& terms() {
        return terms_;
    }

    void check_same(const ProductState& o) const {
        if (space_ != o.space_ || sites_ != o.sites_)
            throw std::invalid_argument("states live in different spaces");
    }

private:
    const FockSpace* space_;
    int sites_;
    std::unordered_map<detail::Assignment, Complex, detail::AssignmentHash> terms_;
};

/// <a, b> with the implicit-eta convention at unlisted sites. A twist marker
/// overlaps eta by twist_overlap(), a plain symbol by its (possibly
/// sign-flipped) eta coefficient, and another twist marker by one.
inline Complex inner(const ProductState& a, const ProductState& b) {
    a.check_same(b);
    const FockSpace& sp = a.space();
    auto one_sided = [&sp](int site, uint64_t symv) {
        if (symv == detail::kTwistedEta) return sp.twist_overlap();
        return sp.eta_coef(site, SiteSymbol::unpack(symv));
    };
    auto matched = [&sp](int site, uint64_t sa, uint64_t sb) -> double {
        if (sa == sb) return 1.0;
        if (sa == detail::kTwistedEta || sb == detail::kTwistedEta) {
            uint64_t symv = sa == detail::kTwistedEta ? sb : sa;
            SiteSymbol sym = SiteSymbol::unpack(symv);
            double c = sp.eta_coef(site, sym);
            return sp.left_is_beta(sym) ? -c : c;
        }
        return 0.0;
    };
    Complex total = 0.0;
    for (const auto& [ka, va] : a.terms()) {
        for (const auto& [kb, vb] : b.terms()) {
            double factor = 1.0;
            size_t i = 0, j = 0;
            while (factor != 0.0 && (i < ka.size() || j < kb.size())) {
                if (j >= kb.size() || (i < ka.size() && ka[i].first < kb[j].first)) {
                    factor *= one_sided(ka[i].first, ka[i].second);
                    ++i;
                } else if (i >= ka.size() || kb[j].first < ka[i].first) {
                    factor *= one_sided(kb[j].first, kb[j].second);
                    ++j;
                } else {
                    factor *= matched(ka[i].first, ka[i].second, kb[j].second);
                    ++i;
                    ++j;
                }
            }
            if (factor != 0.0) total += va * std::conj(vb) * factor;
        }
    }
    return total;
}

/// Hilbert norm of a - b computed structurally: both states are expanded over
/// the union of their explicit sites, where equal configurations cancel
/// exactly. Intended for small supports (test oracles).
inline double exact_difference_norm(const ProductState& a, const ProductState& b) {
    a.check_same(b);
    std::set<int> sites;
    for (const auto& [k, _] : a.terms())
        for (auto [s, sym] : k) sites.insert(s);
    for (const auto& [k, _] : b.terms())
        for (auto [s, sym] : k) sites.insert(s);
    std::vector<int> site_list(sites.begin(), sites.end());
    ProductState ea = a, eb = b;
    ea.expand_sites(site_list);
    eb.expand_sites(site_list);
    std::unordered_map<detail::Assignment, Complex, detail::AssignmentHash> diff = ea.terms();
    for (const auto& [k, v] : eb.terms()) {
        auto it = diff.find(k);
        if (it == diff.end()) diff.emplace(k, -v); else it->second -= v;
    }
    double n2 = 0.0;
    for (const auto& [k, v] : diff) n2 += std::norm(v);
    return std::sqrt(n2);
}

inline double norm(const ProductState& a) {
    double n2 = std::real(inner(a, a));
    return std::sqrt(std::max(0.0, n2));
}

/// pi(gamma): site-wise left action.
inline void apply_tuple(ProductState& state, const GammaTuple& gamma) {
    const FockSpace& sp = state.space();
    std::vector<int> supp;
    for (auto [p, _] : gamma.entries()) supp.push_back(p);
    if (supp.empty()) return;
    if (gamma.max_support() > state.sites())
        throw std::invalid_argument("apply_tuple: support exceeds truncation");
    state.expand_sites(supp);
    std::unordered_map<detail::Assignment, Complex, detail::AssignmentHash> next;
    next.reserve(state.terms().size());
    std::vector<std::pair<SiteSymbol, Complex>> acted;
    for (const auto& [key, amp] : state.terms()) {
        std::vector<std::pair<detail::Assignment, Complex>> partial = {{key, amp}};
        for (auto [p, gx] : gamma.entries()) {
            std::vector<std::pair<detail::Assignment, Complex>> grown;
            for (auto& [k, a] : partial) {
                size_t slot = 0;
                while (k[slot].first != p) ++slot;
                sp.act_left(gx, SiteSymbol::unpack(k[slot].second), acted);
                for (const auto& [sym, c] : acted) {
                    detail::Assignment k2 = k;
                    k2[slot].second = sym.pack();
                    grown.push_back({std::move(k2), a * c});
                }
            }
            partial = std::move(grown);
        }
        for (auto& [k, a] : partial) {
            auto it = next.find(k);
            if (it == next.end()) next.emplace(std::move(k), a); else it->second += a;
        }
    }
    state.terms() = std::move(next);
}

/// pi(s): the left layer moves by s (block lefts and residual symbols), the
/// right layer stays, and the amplitude picks up the sign of the permutation
/// induced on the ordered list of beta-block left items. A fixed site crossed
/// an odd number of times by moving beta items flips with its own beta
/// content: explicit beta symbols flip the amplitude, unexpanded sites toggle
/// a twisted-vacuum marker.
inline void apply_perm(ProductState& state, const Permutation& s) {
    if (s.is_identity()) return;
    const FockSpace& sp = state.space();
    if (s.max_support() > state.sites())
        throw std::invalid_argument("apply_perm: support exceeds truncation");
    std::vector<int> supp = s.support();
    state.expand_sites(supp);
    std::unordered_map<detail::Assignment, Complex, detail::AssignmentHash> next;
    next.reserve(state.terms().size());
    for (const auto& [key, amp] : state.terms()) {
        // moved beta-left positions, in increasing site order
        std::vector<int> beta_moved, beta_after;
        for (auto [site, symv] : key) {
            auto it = s.as_map().find(site);
            if (it == s.as_map().end()) continue;
            if (sp.left_is_beta(SiteSymbol::unpack(symv))) {
                beta_moved.push_back(site);
                beta_after.push_back(it->second);
            }
        }
        int inversions = 0;
        for (size_t i = 0; i < beta_after.size(); ++i)
            for (size_t j = i + 1; j < beta_after.size(); ++j)
                if (beta_after[i] > beta_after[j]) ++inversions;
        double sign = inversions % 2 == 0 ? 1.0 : -1.0;

        // crossing parity over every fixed site
        int lo = state.sites() + 1, hi = 0;
        for (size_t i = 0; i < beta_moved.size(); ++i) {
            lo = std::min({lo, beta_moved[i], beta_after[i]});
            hi = std::max({hi, beta_moved[i], beta_after[i]});
        }
        std::vector<int> odd_sites;
        for (int j = lo + 1; j < hi; ++j) {
            if (s.as_map().count(j)) continue;  // moved sites carry their own sign
            int crossings = 0;
            for (size_t i = 0; i < beta_moved.size(); ++i) {
                int a = beta_moved[i], b = beta_after[i];
                if (std::min(a, b) < j && j < std::max(a, b)) ++crossings;
            }
            if (crossings % 2 == 1) odd_sites.push_back(j);
        }

        detail::Assignment k2 = key;
        // left layer of site p moves to s(p); rights stay
        std::map<int, std::pair<bool, std::pair<int, int>>> moved_left;  // target -> left item
        for (auto [site, symv] : key) {
            if (!s.as_map().count(site)) continue;
            SiteSymbol sym = SiteSymbol::unpack(symv);
            moved_left[s.apply(site)] = {sym.left_residual, {sym.left_a, sym.left_b}};
        }
        for (auto& [site, symv] : k2) {
            auto it = moved_left.find(site);
            if (it == moved_left.end()) continue;
            SiteSymbol sym = SiteSymbol::unpack(symv);
            sym.left_residual = it->second.first;
            sym.left_a = it->second.second.first;
            sym.left_b = it->second.second.second;
            symv = sym.pack();
        }
        // apply the odd-crossing flips
        for (int j : odd_sites) {
            auto pos = std::lower_bound(k2.begin(), k2.end(), std::make_pair(j, uint64_t(0)),
                                        [](const auto& x, const auto& y) { return x.first < y.first; });
            if (pos != k2.end() && pos->first == j) {
                if (pos->second == detail::kTwistedEta) {
                    k2.erase(pos);  // double twist cancels
                } else if (sp.left_is_beta(SiteSymbol::unpack(pos->second))) {
                    sign = -sign;
                }
            } else {
                k2.insert(pos, {j, detail::kTwistedEta});
            }
        }
        auto itn = next.find(k2);
        if (itn == next.end()) next.emplace(std::move(k2), amp * sign);
        else itn->second += amp * sign;
    }
    state.terms() = std::move(next);
}

/// pi(g) = pi(s) pi(gamma).
inline void apply_element(ProductState& state, const WreathElement& g) {
    if (g.group != &state.space().group())
        throw std::invalid_argument("apply_element: group mismatch");
    apply_tuple(state, g.tuple);
    apply_perm(state, g.perm);
}

/// Builds the vacuum on m sites. The per-site vector has unit norm by
/// construction; this asserts it.
inline ProductState build_eta(const FockSpace& space, int m) {
    double n2 = 0.0;
    for (const auto& [sym, c] : space.eta_components(1)) n2 += c * c;
    if (std::abs(n2 - 1.0) > 1e-12)
        throw std::logic_error("eta site vector is not normalized: " + std::to_string(n2));
    return ProductState::vacuum(space, m);
}

/// <pi(g) eta, eta> on m sites; exact once m covers the support of g.
inline Complex matrix_element(const ThomaParams& params, const WreathElement& g, int m) {
    if (g.max_support() > m)
        throw std::invalid_argument("matrix_element: truncation smaller than support");
    FockSpace space(params);
    ProductState v = build_eta(space, m);
    apply_element(v, g);
    return inner(v, build_eta(space, m));
}

/// Truncated Cesaro average (1/n) [pi(id) + sum_{l != k, l <= n} pi((k,l))].
inline ProductState okounkov_apply(int k, int n, const ProductState& state) {
    if (k < 1 || n < 1 || k > state.sites() || n > state.sites() || k > n)
        throw std::invalid_argument("okounkov_apply: need k <= n within the truncation");
    ProductState acc = state;  // the l = k term contributes the identity
    for (int l = 1; l <= n; ++l) {
        if (l == k) continue;
        ProductState term = state;
        apply_perm(term, Permutation::transposition(k, l));
        acc += term;
    }
    acc *= Complex(1.0 / n);
    return acc;
}

struct MomentResult {
    double measured = 0.0;
    double predicted = 0.0;
    double gap = 0.0;
};

/// q-th moment of the truncated Okounkov operator on the vacuum, against the
/// closed-form prediction from the weights.
inline MomentResult moment_check(const ThomaParams& params, int k, int q, int n) {
    if (q < 1 || q > 4) throw std::invalid_argument("moment_check: q must be in 1..4");
    FockSpace space(params);
    ProductState v = build_eta(space, n);
    for (int i = 0; i < q; ++i) v = okounkov_apply(k, n, v);
    double measured = std::real(inner(v, build_eta(space, n)));
    double predicted = 0.0;
    for (const auto& wr : params.alpha())
        predicted += wr.rep.dim * std::pow(wr.weight, q + 1.0);
    double sign = q % 2 == 0 ? 1.0 : -1.0;
    for (const auto& wr : params.beta())
        predicted += sign * wr.rep.dim * std::pow(wr.weight, q + 1.0);
    return {measured, predicted, std::abs(measured - predicted)};
}

/// Both sides of the cycle factorization identity for <pi(g) prod O_j^{r_j}
/// eta, eta>, with the orbit data collapsed to single Okounkov powers.
struct FactorizationResult {
    Complex lhs;
    Complex rhs;
    double residual = 0.0;
    double scale = 0.0;  // the nominal O(1/n) size
};

inline FactorizationResult factorization_check(const ThomaParams& params, const WreathElement& g,
                                               const std::map<int, int>& powers, int n) {
    FockSpace space(params);
    const GroupTable& G = params.group();
    ProductState v = build_eta(space, n);
    for (auto [j, r] : powers)
        for (int i = 0; i < r; ++i) v = okounkov_apply(j, n, v);
    apply_element(v, g);
    Complex lhs = inner(v, build_eta(space, n));

    // orbits of g plus singleton orbits for any leftover powered positions
    std::vector<std::vector<int>> orbits = g.perm.orbits();
    std::set<int> covered;
    for (const auto& orb : orbits)
        for (int i : orb) covered.insert(i);
    for (auto [p, _] : g.tuple.entries())
        if (!covered.count(p)) { orbits.push_back({p}); covered.insert(p); }
    for (auto [j, r] : powers)
        if (r > 0 && !covered.count(j)) { orbits.push_back({j}); covered.insert(j); }

    Complex rhs = 1.0;
    for (const auto& orb : orbits) {
        int base = *std::min_element(orb.begin(), orb.end());
        int power = static_cast<int>(orb.size()) - 1;
        for (int j : orb) {
            auto it = powers.find(j);
            if (it != powers.end()) power += it->second;
        }
        // reversed product gamma_i * gamma_{s^-1(i)} * ... around the orbit
        Permutation sinv = g.perm.inverse();
        int prod = G.identity();
        int pos = base;
        for (size_t step = 0; step < orb.size(); ++step) {
            prod = G.mult(prod, g.tuple.at(pos, G));
            pos = sinv.apply(pos);
        }
        ProductState w = build_eta(space, n);
        for (int i = 0; i < power; ++i) w = okounkov_apply(base, n, w);
        GammaTuple t;
        t.set(base, prod, G);
        apply_tuple(w, t);
        rhs *= inner(w, build_eta(space, n));
    }
    return {lhs, rhs, std::abs(lhs - rhs), 1.0 / n};
}

/// Eigenvalues of the compression of the truncated Okounkov operator to a
/// Krylov-style probe subspace at site k, with the vacuum's spectral mass on
/// each direction. Near-dependent probe directions are pruned; the count of
/// kept directions is reported.
struct SpectralScanResult {
    std::vector<double> eigenvalues;  // sorted ascending
    std::vector<double> weights;      // |<eigvec, eta>|^2, same order
    int probes_kept = 0;
    int probes_total = 0;
};

inline SpectralScanResult spectral_scan(const ThomaParams& params, int k, int n, int probe_dim) {
    if (probe_dim < 1) throw std::invalid_argument("spectral_scan: probe_dim must be >= 1");
    FockSpace space(params);
    const GroupTable& G = params.group();
    std::vector<ProductState> probes;
    std::vector<GammaTuple> locals;
    locals.push_back(GammaTuple{});
    for (int x = 0; x < G.order(); ++x) {
        if (x == G.identity()) continue;
        GammaTuple t;
        t.set(k, x, G);
        locals.push_back(t);
    }
    for (const auto& t : locals) {
        ProductState base = build_eta(space, n);
        apply_tuple(base, t);
        probes.push_back(base);
        for (int j = 1; j < probe_dim; ++j) {
            base = okounkov_apply(k, n, base);
            probes.push_back(base);
        }
    }
    const int p = static_cast<int>(probes.size());
    Matrix gram(p, p), comp(p, p);
    std::vector<ProductState> oprobes;
    oprobes.reserve(p);
    for (const auto& v : probes) oprobes.push_back(okounkov_apply(k, n, v));
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) {
            gram(i, j) = inner(probes[i], probes[j]);
            comp(i, j) = inner(oprobes[i], probes[j]);
        }
    gram = 0.5 * (gram + gram.adjoint()).eval();
    comp = 0.5 * (comp + comp.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> eg(gram);
    double cutoff = 1e-9 * std::max(1.0, eg.eigenvalues().maxCoeff());
    std::vector<int> keep;
    for (int i = 0; i < p; ++i)
        if (eg.eigenvalues()(i) > cutoff) keep.push_back(i);
    Matrix w(p, static_cast<int>(keep.size()));
    for (size_t i = 0; i < keep.size(); ++i)
        w.col(i) = eg.eigenvectors().col(keep[i]) / std::sqrt(eg.eigenvalues()(keep[i]));
    Matrix h = w.adjoint() * comp * w;
    h = 0.5 * (h + h.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> eh(h);
    SpectralScanResult out;
    out.probes_total = p;
    out.probes_kept = static_cast<int>(keep.size());
    std::vector<std::pair<double, double>> evs;
    for (int i = 0; i < eh.eigenvalues().size(); ++i) {
        // mass of eta (probe 0) on this Ritz direction
        Eigen::VectorXcd coords = w * eh.eigenvectors().col(i);
        Complex overlap = 0.0;
        for (int a = 0; a < p; ++a) overlap += coords(a) * gram(a, 0);
        evs.push_back({eh.eigenvalues()(i), std::norm(overlap)});
    }
    std::sort(evs.begin(), evs.end());
    for (auto [ev, wt] : evs) {
        out.eigenvalues.push_back(ev);
        out.weights.push_back(wt);
    }
    return out;
}

/// || (O_k pi(gamma) - pi(gamma) O_k) eta ||.
inline double commutator_decay(const ThomaParams& params, int k, const GammaTuple& gamma, int n) {
    FockSpace space(params);
    ProductState a = build_eta(space, n);
    apply_tuple(a, gamma);
    a = okounkov_apply(k, n, a);
    ProductState b = okounkov_apply(k, n, build_eta(space, n));
    apply_tuple(b, gamma);
    a -= b;
    return norm(a);
}

/// || (O_k O_l - O_l O_k) eta ||.
inline double okounkov_commutator(const ThomaParams& params, int k, int l, int n) {
    FockSpace space(params);
    ProductState a = okounkov_apply(k, n, okounkov_apply(l, n, build_eta(space, n)));
    ProductState b = okounkov_apply(l, n, okounkov_apply(k, n, build_eta(space, n)));
    a -= b;
    return norm(a);
}

}  // namespace wreathlab
