#pragma once

// Piecewise-constant functions on a uniform dyadic grid of [0, 2^m0) and the
// bottom-up tree of interval means and extrema.

#include "haarlip/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace haarlip {

/// Largest supported m0 + J; 2^48 cells is far beyond what fits in memory.
inline constexpr int kMaxDepth = 48;

/// f on [0, 2^domain_exponent) taking values[k] on the level-J cell I^J_k.
class StepFunction {
public:
    StepFunction(int domain_exponent, int resolution_level, std::vector<double> values)
        : m0_(domain_exponent), J_(resolution_level), values_(std::move(values)) {
        if (m0_ < 0) throw std::invalid_argument("StepFunction: domain_exponent must be nonnegative");
        if (J_ < -m0_) throw std::invalid_argument("StepFunction: resolution_level must be >= -domain_exponent");
        if (m0_ + J_ > kMaxDepth) throw std::invalid_argument("StepFunction: domain_exponent + resolution_level too large");
        const std::size_t expected = std::size_t{1} << (m0_ + J_);
        if (values_.size() != expected)
            throw std::invalid_argument("StepFunction: expected " + std::to_string(expected) + " values, got " +
                                        std::to_string(values_.size()));
        for (std::size_t k = 0; k < values_.size(); ++k)
            if (!std::isfinite(values_[k]))
                throw std::invalid_argument("StepFunction: non-finite value at cell " + std::to_string(k));
    }

    static StepFunction constant(int domain_exponent, int resolution_level, double c) {
        return {domain_exponent, resolution_level,
                std::vector<double>(std::size_t{1} << (domain_exponent + resolution_level), c)};
    }

    int domain_exponent() const noexcept { return m0_; }
    int resolution_level() const noexcept { return J_; }
    /// Number of dyadic levels from the whole domain down to the cells.
    int depth() const noexcept { return m0_ + J_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t k) const { return values_[k]; }

    DyadicInterval domain() const noexcept { return {-m0_, 0}; }
    DyadicInterval cell(std::size_t k) const noexcept { return {J_, k}; }

    /// Number of intervals of level j inside the domain.
    std::size_t count_at(int level) const noexcept { return std::size_t{1} << (m0_ + level); }

    /// I lies inside [0, 2^m0) (at any level, including finer than the cells).
    bool inside(const DyadicInterval& I) const noexcept {
        if (I.level() < -m0_) return false;
        const int shift = m0_ + I.level();
        return shift >= 64 || I.index() < (std::uint64_t{1} << shift);
    }

    bool inside(const DyadicPoint& x) const { return domain().contains(x); }

    /// Half-open range of cell indices covered by I. I must be inside and no finer than J.
    std::pair<std::size_t, std::size_t> cell_range(const DyadicInterval& I) const {
        require_resolvable(I, "cell_range");
        const int shift = J_ - I.level();
        const auto first = static_cast<std::size_t>(I.index()) << shift;
        return {first, first + (std::size_t{1} << shift)};
    }

    /// Index of the cell containing x.
    std::size_t cell_of(const DyadicPoint& x) const {
        if (!inside(x)) throw std::out_of_range("StepFunction: point " + x.to_string() + " outside the domain");
        return x.floor_scaled(J_).convert_to<std::size_t>();
    }

    void require_resolvable(const DyadicInterval& I, const char* what) const {
        if (!inside(I))
            throw std::out_of_range(std::string(what) + ": interval " + I.to_string() + " outside the domain");
        if (I.level() > J_)
            throw std::out_of_range(std::string(what) + ": interval " + I.to_string() + " finer than the resolution");
    }

private:
    int m0_;
    int J_;
    std::vector<double> values_;
};

namespace detail {

// Pairwise average of a power-of-two-sized block, matching the tree order.
inline double pairwise_mean(std::span<const double> v) {
    if (v.size() == 1) return v[0];
    const std::size_t half = v.size() / 2;
    return (pairwise_mean(v.first(half)) + pairwise_mean(v.subspan(half))) / 2;
}

}  // namespace detail

/// m_I(f), by pairwise summation over the cells of I.
inline double mean(const StepFunction& f, const DyadicInterval& I) {
    const auto [first, last] = f.cell_range(I);
    return detail::pairwise_mean(f.values().subspan(first, last - first));
}

inline double integrate(const StepFunction& f, const DyadicInterval& I) {
    return std::ldexp(mean(f, I), -I.level());
}

/// Value of the cell containing x.
inline double eval(const StepFunction& f, const DyadicPoint& x) { return f[f.cell_of(x)]; }

struct Extrema {
    double min;
    double max;
    friend bool operator==(const Extrema&, const Extrema&) = default;
};

/// Means, minima and maxima of f on every dyadic interval from the whole
/// domain (level -m0) down to the cells (level J).
class MeanTree {
public:
    explicit MeanTree(const StepFunction& f) : m0_(f.domain_exponent()), J_(f.resolution_level()) {
        levels_.resize(static_cast<std::size_t>(m0_ + J_ + 1));
        auto& finest = levels_.back();
        finest.mean.assign(f.values().begin(), f.values().end());
        finest.min = finest.mean;
        finest.max = finest.mean;
        for (int j = J_ - 1; j >= -m0_; --j) {
            const Level& child = at(j + 1);
            Level& node = levels_[static_cast<std::size_t>(j + m0_)];
            const std::size_t n = child.mean.size() / 2;
            node.mean.resize(n);
            node.min.resize(n);
            node.max.resize(n);
            for (std::size_t k = 0; k < n; ++k) {
                node.mean[k] = (child.mean[2 * k] + child.mean[2 * k + 1]) / 2;
                node.min[k] = std::min(child.min[2 * k], child.min[2 * k + 1]);
                node.max[k] = std::max(child.max[2 * k], child.max[2 * k + 1]);
            }
        }
    }

    int domain_exponent() const noexcept { return m0_; }
    int resolution_level() const noexcept { return J_; }

    double mean(const DyadicInterval& I) const { return at_checked(I).mean[I.index()]; }
    double integrate(const DyadicInterval& I) const { return std::ldexp(mean(I), -I.level()); }
    double min(const DyadicInterval& I) const { return at_checked(I).min[I.index()]; }
    double max(const DyadicInterval& I) const { return at_checked(I).max[I.index()]; }
    Extrema extrema(const DyadicInterval& I) const {
        const Level& l = at_checked(I);
        return {l.min[I.index()], l.max[I.index()]};
    }

    std::span<const double> means(int level) const { return at(level).mean; }
    std::span<const double> minima(int level) const { return at(level).min; }
    std::span<const double> maxima(int level) const { return at(level).max; }

private:
    struct Level {
        std::vector<double> mean, min, max;
    };

    const Level& at(int level) const { return levels_[static_cast<std::size_t>(level + m0_)]; }

    const Level& at_checked(const DyadicInterval& I) const {
        if (I.level() < -m0_ || I.level() > J_)
            throw std::out_of_range("MeanTree: interval " + I.to_string() + " outside the resolvable levels");
        const Level& l = at(I.level());
        if (I.index() >= l.mean.size())
            throw std::out_of_range("MeanTree: interval " + I.to_string() + " outside the domain");
        return l;
    }

    int m0_;
    int J_;
    std::vector<Level> levels_;
};

/// (min, max) over the cells of I by direct scan.
inline Extrema extrema(const StepFunction& f, const DyadicInterval& I) {
    const auto [first, last] = f.cell_range(I);
    const auto [lo, hi] = std::minmax_element(f.values().begin() + static_cast<std::ptrdiff_t>(first),
                                              f.values().begin() + static_cast<std::ptrdiff_t>(last));
    return {*lo, *hi};
}

}  // namespace haarlip
