#pragma once

#include <random>

#include "wreathlab/wreath.hpp"

namespace wreathlab {

/// Seeded element sampler. Bounds are deliberately small (support <= 6 unless
/// asked otherwise) and the integer draws avoid std::uniform_int_distribution
/// so byte-identical runs do not depend on the standard library.
class Sampler {
public:
    explicit Sampler(uint64_t seed) : engine_(seed) {}

    uint64_t raw() { return engine_(); }

    /// Uniform in [0, n).
    int below(int n) {
        if (n <= 0) throw std::invalid_argument("Sampler::below: n must be positive");
        uint64_t span = static_cast<uint64_t>(n);
        uint64_t limit = std::numeric_limits<uint64_t>::max() / span * span;
        uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return static_cast<int>(v % span);
    }

    double unit() { return (engine_() >> 11) * 0x1.0p-53; }

    Permutation permutation(int max_pos, int max_moved) {
        std::vector<int> positions;
        for (int i = 1; i <= max_pos; ++i) positions.push_back(i);
        for (int i = max_pos - 1; i > 0; --i) std::swap(positions[i], positions[below(i + 1)]);
        int k = std::min(max_moved, max_pos);
        std::vector<int> chosen(positions.begin(), positions.begin() + k);
        std::vector<int> image = chosen;
        for (int i = k - 1; i > 0; --i) std::swap(image[i], image[below(i + 1)]);
        std::map<int, int> m;
        for (int i = 0; i < k; ++i)
            if (chosen[i] != image[i]) m[chosen[i]] = image[i];
        return Permutation::from_map(std::move(m));
    }

    GammaTuple tuple(const GroupTable& g, int max_pos, int max_entries) {
        GammaTuple t;
        int k = below(max_entries + 1);
        for (int i = 0; i < k; ++i) t.set(1 + below(max_pos), below(g.order()), g);
        return t;
    }

    WreathElement element(const GroupTable& g, int max_pos = 6, int max_entries = 3) {
        return WreathElement(g, permutation(max_pos, max_pos), tuple(g, max_pos, max_entries));
    }

    /// Random element of G_n(infinity): support confined to (n, n+span].
    WreathElement element_above(const GroupTable& g, int n, int span = 4) {
        Permutation p = permutation(span, span);
        std::map<int, int> shifted;
        for (auto [k, v] : p.as_map()) shifted[k + n] = v + n;
        GammaTuple t;
        int k = below(3);
        for (int i = 0; i < k; ++i) t.set(n + 1 + below(span), below(g.order()), g);
        return WreathElement(g, Permutation::from_map(std::move(shifted)), t);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace wreathlab
