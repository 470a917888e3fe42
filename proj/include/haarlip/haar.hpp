#pragma once

// The Haar system h_I = |I|^-1/2 (X_{I-} - X_{I+}) on the dyadic tree, and the
// finite Haar transform of step functions.

#include "haarlip/dyadic.hpp"
#include "haarlip/step_function.hpp"

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace haarlip {

/// 2^(e/2), exact up to the rounding of sqrt(2) for odd e.
inline double sqrt_pow2(int e) {
    if (e % 2 == 0) return std::ldexp(1.0, e / 2);
    return std::ldexp(std::numbers::sqrt2, (e - 1) / 2);
}

/// |I|^{-1/2}
inline double inv_sqrt_length(const DyadicInterval& I) { return sqrt_pow2(I.level()); }

/// h_I(x): +|I|^{-1/2} on the left half, -|I|^{-1/2} on the right half, 0 elsewhere.
inline double haar_eval(const DyadicInterval& I, const DyadicPoint& x) {
    const auto [left, right] = I.halves();
    if (left.contains(x)) return inv_sqrt_length(I);
    if (right.contains(x)) return -inv_sqrt_length(I);
    return 0.0;
}

struct HaarCoefficient {
    DyadicInterval interval;
    double value;
};

namespace detail {

inline void require_coefficient_interval(const StepFunction& f, const DyadicInterval& I, const char* what) {
    if (!f.inside(I)) throw std::out_of_range(std::string(what) + ": interval " + I.to_string() + " outside the domain");
    if (I.level() >= f.resolution_level())
        throw std::out_of_range(std::string(what) + ": interval " + I.to_string() +
                                " is not coarser than the resolution level");
}

// c_I from the two half means: (|I|^{1/2} / 2) (m_- - m_+)
inline double coefficient_from_means(int level, double left_mean, double right_mean) {
    return sqrt_pow2(-level) / 2 * (left_mean - right_mean);
}

}  // namespace detail

/// <f, h_I> through the half-mean difference.
inline HaarCoefficient coefficient(const StepFunction& f, const DyadicInterval& I) {
    detail::require_coefficient_interval(f, I, "coefficient");
    const auto [left, right] = I.halves();
    return {I, detail::coefficient_from_means(I.level(), mean(f, left), mean(f, right))};
}

inline HaarCoefficient coefficient(const MeanTree& tree, const DyadicInterval& I) {
    if (I.level() >= tree.resolution_level())
        throw std::out_of_range("coefficient: interval " + I.to_string() + " is not coarser than the resolution level");
    const auto [left, right] = I.halves();
    return {I, detail::coefficient_from_means(I.level(), tree.mean(left), tree.mean(right))};
}

/// |m_{I-}(f) - m_{I+}(f)|, which equals 2 |I|^{-1/2} |<f, h_I>|.
inline double oscillation(const StepFunction& f, const DyadicInterval& I) {
    detail::require_coefficient_interval(f, I, "oscillation");
    const auto [left, right] = I.halves();
    return std::abs(mean(f, left) - mean(f, right));
}

inline double oscillation(const MeanTree& tree, const DyadicInterval& I) {
    if (I.level() >= tree.resolution_level())
        throw std::out_of_range("oscillation: interval " + I.to_string() + " is not coarser than the resolution level");
    const auto [left, right] = I.halves();
    return std::abs(tree.mean(left) - tree.mean(right));
}

/// Every Haar coefficient of a step function on [0, 2^m0) at levels
/// -m0 .. J-1, plus the mean over the whole domain.
class CoefficientTable {
public:
    CoefficientTable(int domain_exponent, int resolution_level, double global_mean,
                     std::vector<std::vector<double>> levels)
        : m0_(domain_exponent), J_(resolution_level), global_mean_(global_mean), levels_(std::move(levels)) {
        if (m0_ < 0 || J_ < -m0_ || m0_ + J_ > kMaxDepth)
            throw std::invalid_argument("CoefficientTable: invalid (domain_exponent, resolution_level)");
        if (levels_.size() != static_cast<std::size_t>(m0_ + J_))
            throw std::invalid_argument("CoefficientTable: expected " + std::to_string(m0_ + J_) + " levels, got " +
                                        std::to_string(levels_.size()));
        for (int j = -m0_; j < J_; ++j) {
            const std::size_t expected = std::size_t{1} << (m0_ + j);
            if (level(j).size() != expected)
                throw std::invalid_argument("CoefficientTable: level " + std::to_string(j) + " needs " +
                                            std::to_string(expected) + " coefficients, got " +
                                            std::to_string(level(j).size()));
        }
    }

    /// All-zero table with the given mean.
    static CoefficientTable zeros(int domain_exponent, int resolution_level, double global_mean = 0.0) {
        std::vector<std::vector<double>> levels;
        for (int j = -domain_exponent; j < resolution_level; ++j)
            levels.emplace_back(std::size_t{1} << (domain_exponent + j), 0.0);
        return {domain_exponent, resolution_level, global_mean, std::move(levels)};
    }

    int domain_exponent() const noexcept { return m0_; }
    int resolution_level() const noexcept { return J_; }
    double global_mean() const noexcept { return global_mean_; }

    /// Coarsest and finest levels carrying coefficients; empty when min_level() > max_level().
    int min_level() const noexcept { return -m0_; }
    int max_level() const noexcept { return J_ - 1; }
    bool empty() const noexcept { return levels_.empty(); }

    std::span<const double> level(int j) const { return levels_.at(static_cast<std::size_t>(j + m0_)); }

    double at(const DyadicInterval& I) const {
        if (I.level() < min_level() || I.level() > max_level())
            throw std::out_of_range("CoefficientTable: level " + std::to_string(I.level()) + " not in table");
        const auto row = level(I.level());
        if (I.index() >= row.size()) throw std::out_of_range("CoefficientTable: interval " + I.to_string() + " outside the domain");
        return row[I.index()];
    }

    void set(const DyadicInterval& I, double value) {
        (void)at(I);
        levels_[static_cast<std::size_t>(I.level() + m0_)][I.index()] = value;
    }

private:
    int m0_;
    int J_;
    double global_mean_;
    std::vector<std::vector<double>> levels_;
};

/// One bottom-up pass over the cell values; O(N).
inline CoefficientTable transform(const StepFunction& f) {
    const int m0 = f.domain_exponent();
    const int J = f.resolution_level();
    std::vector<std::vector<double>> levels(static_cast<std::size_t>(m0 + J));
    std::vector<double> means(f.values().begin(), f.values().end());
    for (int j = J - 1; j >= -m0; --j) {
        const std::size_t n = means.size() / 2;
        auto& row = levels[static_cast<std::size_t>(j + m0)];
        row.resize(n);
        const double scale = sqrt_pow2(-j) / 2;
        for (std::size_t k = 0; k < n; ++k) {
            const double left = means[2 * k];
            const double right = means[2 * k + 1];
            row[k] = scale * (left - right);
            means[k] = (left + right) / 2;
        }
        means.resize(n);
    }
    return {m0, J, means.front(), std::move(levels)};
}

/// Inverse of transform: the step function with these coefficients and mean.
inline StepFunction synthesize(const CoefficientTable& table, int domain_exponent, int resolution_level) {
    if (table.domain_exponent() != domain_exponent || table.resolution_level() != resolution_level)
        throw std::invalid_argument("synthesize: table shape (" + std::to_string(table.domain_exponent()) + ", " +
                                    std::to_string(table.resolution_level()) + ") does not match requested (" +
                                    std::to_string(domain_exponent) + ", " + std::to_string(resolution_level) + ")");
    std::vector<double> means{table.global_mean()};
    for (int j = table.min_level(); j <= table.max_level(); ++j) {
        const auto row = table.level(j);
        // m_{I-+} = m_I +- c_I |I|^{-1/2}
        const double scale = sqrt_pow2(j);
        std::vector<double> next(2 * means.size());
        for (std::size_t k = 0; k < means.size(); ++k) {
            const double d = row[k] * scale;
            next[2 * k] = means[k] + d;
            next[2 * k + 1] = means[k] - d;
        }
        means = std::move(next);
    }
    return {domain_exponent, resolution_level, std::move(means)};
}

inline StepFunction synthesize(const CoefficientTable& table) {
    return synthesize(table, table.domain_exponent(), table.resolution_level());
}

}  // namespace haarlip
