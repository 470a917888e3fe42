#pragma once

// Test functions with known coefficients and seminorms.

#include "haarlip/dyadic.hpp"
#include "haarlip/haar.hpp"
#include "haarlip/step_function.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace haarlip {

/// Seeded source of uniform doubles with the same stream on every platform.
class SeededUniform {
public:
    explicit SeededUniform(std::uint64_t seed) : engine_(seed) {}

    /// [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    /// [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
    /// Uniform integer in [0, 2^bits).
    std::uint64_t bits(int count) { return count == 0 ? 0 : engine_() >> (64 - count); }

private:
    std::mt19937_64 engine_;
};

namespace detail {

inline void check_grid(int m0, int J) {
    if (m0 < 0) throw std::invalid_argument("corpus: domain_exponent must be nonnegative");
    if (J < -m0) throw std::invalid_argument("corpus: resolution_level must be >= -domain_exponent");
    if (m0 + J > kMaxDepth) throw std::invalid_argument("corpus: grid too fine");
}

inline void check_alpha(double alpha) {
    if (!(alpha > 0) || !std::isfinite(alpha)) throw std::invalid_argument("corpus: alpha must be positive");
}

}  // namespace detail

/// X_I on [0, 2^m0) at resolution J.
inline StepFunction indicator(const DyadicInterval& I, int m0, int J) {
    detail::check_grid(m0, J);
    StepFunction zero = StepFunction::constant(m0, J, 0.0);
    if (!zero.inside(I)) throw std::out_of_range("indicator: interval " + I.to_string() + " outside the domain");
    if (I.level() > J) throw std::out_of_range("indicator: interval " + I.to_string() + " finer than the resolution");
    std::vector<double> v(zero.size(), 0.0);
    const auto [first, last] = zero.cell_range(I);
    for (std::size_t k = first; k < last; ++k) v[k] = 1.0;
    return {m0, J, std::move(v)};
}

/// Midpoint samples of f(x) = x.
inline StepFunction ramp(int m0, int J) {
    detail::check_grid(m0, J);
    std::vector<double> v(std::size_t{1} << (m0 + J));
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = std::ldexp(static_cast<double>(k) + 0.5, -J);
    return {m0, J, std::move(v)};
}

/// One coefficient 2^{-(alpha+1/2) j} at each level j = 0 .. depth-1, along a
/// random nested path of intervals; every other coefficient and the mean are 0.
inline CoefficientTable dyadic_weierstrass_table(double alpha, int depth, std::uint64_t path_seed, int m0, int J) {
    detail::check_grid(m0, J);
    detail::check_alpha(alpha);
    if (depth < 0 || depth > J)
        throw std::invalid_argument("dyadic_weierstrass: depth must lie in [0, resolution_level], got " +
                                    std::to_string(depth));
    SeededUniform rng(path_seed);
    CoefficientTable table = CoefficientTable::zeros(m0, J);
    std::uint64_t k = rng.bits(m0);
    for (int j = 0; j < depth; ++j) {
        table.set({j, k}, std::exp2(-(alpha + 0.5) * j));
        k = 2 * k + rng.bits(1);
    }
    return table;
}

inline StepFunction dyadic_weierstrass(double alpha, int depth, std::uint64_t path_seed, int m0, int J) {
    return synthesize(dyadic_weierstrass_table(alpha, depth, path_seed, m0, J));
}

/// Coefficients drawn uniformly in [-amplitude |I|^{alpha+1/2}, amplitude |I|^{alpha+1/2}], mean 0.
inline StepFunction random_lip(double alpha, double amplitude, std::uint64_t seed, int m0, int J) {
    detail::check_grid(m0, J);
    detail::check_alpha(alpha);
    if (!(amplitude >= 0) || !std::isfinite(amplitude))
        throw std::invalid_argument("random_lip: amplitude must be nonnegative");
    SeededUniform rng(seed);
    std::vector<std::vector<double>> levels;
    for (int j = -m0; j < J; ++j) {
        const double cap = amplitude * std::exp2(-(alpha + 0.5) * j);
        std::vector<double> row(std::size_t{1} << (m0 + j));
        for (double& c : row) c = cap * rng.uniform(-1.0, 1.0);
        levels.push_back(std::move(row));
    }
    return synthesize(CoefficientTable(m0, J, 0.0, std::move(levels)));
}

/// i.i.d. uniform values in [-1, 1).
inline StepFunction random_free(std::uint64_t seed, int m0, int J) {
    detail::check_grid(m0, J);
    SeededUniform rng(seed);
    std::vector<double> v(std::size_t{1} << (m0 + J));
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    return {m0, J, std::move(v)};
}

/// Midpoint samples of an arbitrary function. Not a step function in
/// disguise: its coefficients carry discretisation error.
template <class F>
StepFunction sampled(F&& fn, int m0, int J) {
    detail::check_grid(m0, J);
    std::vector<double> v(std::size_t{1} << (m0 + J));
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = fn(std::ldexp(static_cast<double>(k) + 0.5, -J));
    return {m0, J, std::move(v)};
}

enum class CorpusKind { indicator, ramp, dyadic_weierstrass, random_lip, random_free };

inline std::string_view to_string(CorpusKind k) {
    switch (k) {
        case CorpusKind::indicator: return "indicator";
        case CorpusKind::ramp: return "ramp";
        case CorpusKind::dyadic_weierstrass: return "dyadic_weierstrass";
        case CorpusKind::random_lip: return "random_lip";
        case CorpusKind::random_free: return "random_free";
    }
    return "?";
}

inline CorpusKind parse_corpus_kind(std::string_view s) {
    for (auto k : {CorpusKind::indicator, CorpusKind::ramp, CorpusKind::dyadic_weierstrass, CorpusKind::random_lip,
                   CorpusKind::random_free})
        if (to_string(k) == s) return k;
    throw std::invalid_argument("corpus: unknown kind '" + std::string(s) + "'");
}

/// A generator and its parameters. Fields not used by `kind` stay empty.
struct CorpusSpec {
    CorpusKind kind = CorpusKind::random_free;
    int domain_exponent = 0;
    int resolution_level = 0;
    std::optional<DyadicInterval> interval;
    std::optional<double> alpha;
    std::optional<int> depth;
    std::optional<double> amplitude;
    std::optional<std::uint64_t> seed;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const {
        auto need = [&](bool present, const char* field) {
            if (!present)
                throw std::invalid_argument("corpus spec: kind '" + std::string(to_string(kind)) + "' requires field '" +
                                            field + "'");
        };
        if (domain_exponent < 0) throw std::invalid_argument("corpus spec: field 'domain_exponent' must be >= 0");
        if (resolution_level < -domain_exponent)
            throw std::invalid_argument("corpus spec: field 'resolution_level' must be >= -domain_exponent");
        if (domain_exponent + resolution_level > kMaxDepth)
            throw std::invalid_argument("corpus spec: field 'resolution_level' too large");
        switch (kind) {
            case CorpusKind::indicator: {
                need(interval.has_value(), "interval");
                if (interval->level() < -domain_exponent ||
                    (domain_exponent + interval->level() < 64 &&
                     interval->index() >= (std::uint64_t{1} << (domain_exponent + interval->level()))))
                    throw std::invalid_argument("corpus spec: field 'interval' lies outside the domain");
                if (interval->level() > resolution_level)
                    throw std::invalid_argument("corpus spec: field 'interval' is finer than resolution_level");
                break;
            }
            case CorpusKind::ramp: break;
            case CorpusKind::dyadic_weierstrass:
                need(alpha.has_value(), "alpha");
                need(depth.has_value(), "depth");
                if (*depth < 0 || *depth > resolution_level)
                    throw std::invalid_argument("corpus spec: field 'depth' must lie in [0, resolution_level]");
                break;
            case CorpusKind::random_lip:
                need(alpha.has_value(), "alpha");
                need(amplitude.has_value(), "amplitude");
                if (!(*amplitude >= 0)) throw std::invalid_argument("corpus spec: field 'amplitude' must be >= 0");
                break;
            case CorpusKind::random_free: break;
        }
        if (alpha && (!(*alpha > 0) || !std::isfinite(*alpha)))
            throw std::invalid_argument("corpus spec: field 'alpha' must be positive");
    }

    std::uint64_t seed_or_default() const { return seed.value_or(0); }
};

inline StepFunction generate(const CorpusSpec& spec) {
    spec.validate();
    const int m0 = spec.domain_exponent;
    const int J = spec.resolution_level;
    switch (spec.kind) {
        case CorpusKind::indicator: return indicator(*spec.interval, m0, J);
        case CorpusKind::ramp: return ramp(m0, J);
        case CorpusKind::dyadic_weierstrass:
            return dyadic_weierstrass(*spec.alpha, *spec.depth, spec.seed_or_default(), m0, J);
        case CorpusKind::random_lip: return random_lip(*spec.alpha, *spec.amplitude, spec.seed_or_default(), m0, J);
        case CorpusKind::random_free: return random_free(spec.seed_or_default(), m0, J);
    }
    throw std::logic_error("generate: unhandled corpus kind");
}

}  // namespace haarlip
