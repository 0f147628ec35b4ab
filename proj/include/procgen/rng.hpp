#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "procgen/common.hpp"
#include "procgen/hashing.hpp"

namespace procgen {

// Counter-based random stream. Every draw is a pure function of
// (seed, path, counter); there is no hidden state anywhere, so any value can
// be reproduced from the seed and the split labels that led to it. Splitting
// derives an independent child stream without touching the parent.
struct RandomStream {
    std::uint64_t seed = 0;
    std::uint64_t path = 0x084242f96eafae2aull;  // root path tag
    std::uint64_t counter = 0;

    static RandomStream root(std::uint64_t seed) { return RandomStream{seed}; }

    std::uint64_t next_raw() {
        const std::uint64_t key = mix64(seed * 0xff51afd7ed558ccdull ^ path);
        return mix64(key ^ mix64(counter++ * 0x9e3779b97f4a7c15ull));
    }

    // One raw draw mapped to [0, 1).
    double next_unit() { return hash_to_unit(next_raw()); }
};

inline RandomStream split(const RandomStream& s, const std::string& label) {
    RandomStream child;
    child.seed = s.seed;
    child.path = hash_combine(s.path, hash_string(label));
    child.counter = 0;
    return child;
}

// Uniform in [lo, hi); consumes exactly one raw draw.
inline double uniform(RandomStream& s, double lo, double hi) {
    if (!(lo <= hi)) raise(errc::invalid_range, "uniform: lo must be <= hi");
    return lo + (hi - lo) * s.next_unit();
}

// Box-Muller normal; consumes exactly two raw draws.
inline double normal(RandomStream& s, double mu, double sigma) {
    if (!(sigma >= 0.0)) raise(errc::invalid_range, "normal: sigma must be >= 0");
    const double u1 = s.next_unit();
    const double u2 = s.next_unit();
    const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    return mu + sigma * r * std::cos(6.283185307179586476925286766559 * u2);
}

// Uniform integer in [0, n); consumes exactly one raw draw.
inline std::int64_t randint(RandomStream& s, std::int64_t n) {
    if (n < 1) raise(errc::invalid_range, "randint: n must be >= 1");
    const auto i = static_cast<std::int64_t>(s.next_unit() * static_cast<double>(n));
    return i >= n ? n - 1 : i;
}

// Weighted index draw. Consumes exactly one raw draw -- the tracer replays
// branch decisions from (seed, path) relying on this.
inline int choice(RandomStream& s, const std::vector<double>& weights) {
    if (weights.empty()) raise(errc::empty_weights, "choice: no weights");
    double total = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) raise(errc::non_positive_weight, "choice: weights must be > 0");
        total += w;
    }
    const double x = s.next_unit() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (x < acc) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size() - 1);
}

// Declares one random parameter: a bounded continuous distribution or a
// weighted discrete set. The bounds also define the 8-bin discretization the
// analytics module uses.
struct ParamSpec {
    enum class Kind { Uniform, Normal, Discrete };

    std::string name;
    Kind kind = Kind::Uniform;
    double lo = 0.0, hi = 1.0;      // uniform bounds
    double mu = 0.0, sigma = 1.0;   // normal parameters; clipped to mu +/- 4 sigma
    std::vector<double> weights;    // discrete option weights

    static ParamSpec make_uniform(std::string name, double lo, double hi) {
        if (!(lo <= hi)) raise(errc::invalid_range, name + ": lo must be <= hi");
        ParamSpec p;
        p.name = std::move(name);
        p.kind = Kind::Uniform;
        p.lo = lo;
        p.hi = hi;
        return p;
    }
    static ParamSpec make_normal(std::string name, double mu, double sigma) {
        if (!(sigma >= 0.0)) raise(errc::invalid_range, name + ": sigma must be >= 0");
        ParamSpec p;
        p.name = std::move(name);
        p.kind = Kind::Normal;
        p.mu = mu;
        p.sigma = sigma;
        return p;
    }
    static ParamSpec make_discrete(std::string name, std::vector<double> weights) {
        if (weights.empty()) raise(errc::empty_weights, name + ": no weights");
        for (double w : weights)
            if (!(w > 0.0)) raise(errc::non_positive_weight, name + ": weights must be > 0");
        ParamSpec p;
        p.name = std::move(name);
        p.kind = Kind::Discrete;
        p.weights = std::move(weights);
        return p;
    }

    bool continuous() const { return kind != Kind::Discrete; }
    double range_lo() const { return kind == Kind::Normal ? mu - 4.0 * sigma : lo; }
    double range_hi() const { return kind == Kind::Normal ? mu + 4.0 * sigma : hi; }

    double draw_from(RandomStream& s) const {
        switch (kind) {
            case Kind::Uniform: return uniform(s, lo, hi);
            case Kind::Normal: {
                const double v = normal(s, mu, sigma);
                return std::min(range_hi(), std::max(range_lo(), v));
            }
            case Kind::Discrete: return static_cast<double>(choice(s, weights));
        }
        return 0.0;
    }

    // Representative value used when tracing skips real draws.
    double placeholder() const {
        switch (kind) {
            case Kind::Uniform: return 0.5 * (lo + hi);
            case Kind::Normal: return mu;
            case Kind::Discrete: return 0.0;
        }
        return 0.0;
    }

    bool value_in_range(double v) const {
        if (kind == Kind::Discrete)
            return v == std::floor(v) && v >= 0.0 && v < static_cast<double>(weights.size());
        return v >= range_lo() && v <= range_hi();
    }

    bool operator==(const ParamSpec& o) const = default;
};

}  // namespace procgen
