#pragma once

#include <cmath>
#include <random>
#include <stdexcept>
#include <variant>

#include "bicore/graph.hpp"

namespace bicore {

// Synthetic edge-weight distributions. SkewNormal uses the usual
// location/scale/shape parametrization; draws are clamped at zero so
// weights stay non-negative.
struct ConstantDist { double value = 1.0; };
struct UniformDist { double lo = 0.0, hi = 1.0; };
struct SkewNormalDist { double loc = 0.0, scale = 1.0, shape = 0.0; };

using WeightDist = std::variant<ConstantDist, UniformDist, SkewNormalDist>;

namespace detail {

// Sampling is built from raw mt19937_64 output; the std:: distribution
// adapters are implementation-defined, which would break fixed-seed
// reproducibility across standard libraries.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double standard_normal(std::mt19937_64& rng) {
    double u1 = uniform01(rng), u2 = uniform01(rng);
    while (u1 <= 0.0) u1 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

// Azzalini's construction: d*|z0| + sqrt(1-d^2)*z1 with d = shape/sqrt(1+shape^2).
inline double standard_skew_normal(std::mt19937_64& rng, double shape) {
    double d = shape / std::sqrt(1.0 + shape * shape);
    double z0 = standard_normal(rng);
    double z1 = standard_normal(rng);
    return d * std::abs(z0) + std::sqrt(1.0 - d * d) * z1;
}

}  // namespace detail

inline double sample_weight(const WeightDist& dist, std::mt19937_64& rng) {
    if (const auto* c = std::get_if<ConstantDist>(&dist)) return c->value;
    if (const auto* u = std::get_if<UniformDist>(&dist))
        return u->lo + (u->hi - u->lo) * detail::uniform01(rng);
    const auto& s = std::get<SkewNormalDist>(dist);
    double x = s.loc + s.scale * detail::standard_skew_normal(rng, s.shape);
    return x < 0.0 ? 0.0 : x;
}

inline void validate(const WeightDist& dist) {
    if (const auto* c = std::get_if<ConstantDist>(&dist)) {
        if (!(c->value >= 0.0) || !std::isfinite(c->value))
            throw std::invalid_argument("constant weight must be finite and non-negative");
    } else if (const auto* u = std::get_if<UniformDist>(&dist)) {
        if (!(u->lo < u->hi)) throw std::invalid_argument("uniform distribution needs lo < hi");
        if (u->lo < 0.0) throw std::invalid_argument("uniform range must be non-negative");
    } else {
        const auto& s = std::get<SkewNormalDist>(dist);
        if (!(s.scale > 0.0)) throw std::invalid_argument("skew-normal scale must be positive");
    }
}

// Same topology, every weight redrawn independently from `dist`.
// Deterministic for a fixed seed.
inline BipartiteGraph generate_weights(const BipartiteGraph& g, const WeightDist& dist, uint64_t seed) {
    validate(dist);
    std::mt19937_64 rng(seed);
    GraphBuilder b;
    for (const std::string& t : g.upper_tokens()) b.intern(Layer::Upper, t);
    for (const std::string& t : g.lower_tokens()) b.intern(Layer::Lower, t);
    for (const Edge& e : g.edges())
        b.add_edge({Layer::Upper, e.upper}, {Layer::Lower, e.lower}, sample_weight(dist, rng));
    return b.finish();
}

// Closed-form moment skewness of the (unclamped) skew-normal; the sampling
// tests compare empirical skewness against this.
inline double skew_normal_skewness(double shape) {
    const double pi = 3.14159265358979323846;
    double d = shape / std::sqrt(1.0 + shape * shape);
    double m = d * std::sqrt(2.0 / pi);
    return (4.0 - pi) / 2.0 * (m * m * m) / std::pow(1.0 - 2.0 * d * d / pi, 1.5);
}

}  // namespace bicore
