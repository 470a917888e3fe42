#pragma once

// Dyadic Lipschitz regularity of step functions, measured two ways: from the
// Haar coefficients (A = sup |c_I| |I|^-(alpha+1/2)) and from the values
// (the seminorm sup |f(x) - f(y)| / delta(x,y)^alpha), plus the telescoping
// mean chain that bounds the second by the first.

#include "haarlip/dyadic.hpp"
#include "haarlip/haar.hpp"
#include "haarlip/step_function.hpp"
#include "haarlip/tolerance.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace haarlip {

namespace detail {

inline void require_positive_alpha(double alpha, const char* what) {
    if (!(alpha > 0) || !std::isfinite(alpha))
        throw std::invalid_argument(std::string(what) + ": alpha must be a positive finite number, got " +
                                    std::to_string(alpha));
}

}  // namespace detail

/// C_alpha = max{2, 1/(2^alpha - 1)}.
inline double c_alpha(double alpha) {
    detail::require_positive_alpha(alpha, "c_alpha");
    return std::max(2.0, 1.0 / std::expm1(alpha * std::numbers::ln2));
}

/// 2 + 2/(2^alpha - 1): the sum of the central bound and both chain bounds,
/// which is what the telescoping chain actually guarantees. It exceeds
/// c_alpha for every alpha; e.g. the midpoint ramp at alpha = 1 has
/// seminorm close to 4A while c_alpha(1) A = 2A.
inline double chain_constant(double alpha) {
    detail::require_positive_alpha(alpha, "chain_constant");
    return 2.0 + 2.0 / std::expm1(alpha * std::numbers::ln2);
}

/// A supremum over dyadic intervals with the first (coarsest level, smallest
/// index) interval attaining it.
struct Supremum {
    double value = 0.0;
    std::optional<DyadicInterval> witness;
};

/// sup_I |c_I| |I|^{-(alpha+1/2)} over the table.
inline Supremum coefficient_supremum(const CoefficientTable& table, double alpha) {
    detail::require_positive_alpha(alpha, "coefficient_bound");
    Supremum best;
    for (int j = table.min_level(); j <= table.max_level(); ++j) {
        const double weight = std::exp2(j * (alpha + 0.5));
        const auto row = table.level(j);
        for (std::size_t k = 0; k < row.size(); ++k) {
            const double ratio = std::abs(row[k]) * weight;
            if (ratio > best.value) best = {ratio, DyadicInterval{j, k}};
        }
    }
    return best;
}

inline double coefficient_bound(const CoefficientTable& table, double alpha) {
    return coefficient_supremum(table, alpha).value;
}

/// sup over x != y in the domain of |f(x) - f(y)| / delta(x,y)^alpha.
/// Points in opposite halves of I are exactly the pairs with delta = |I|,
/// so the sup is taken over intervals of the largest cross-half gap.
inline Supremum seminorm_supremum(const MeanTree& tree, double alpha) {
    detail::require_positive_alpha(alpha, "seminorm");
    Supremum best;
    const int m0 = tree.domain_exponent();
    for (int j = -m0; j < tree.resolution_level(); ++j) {
        const double weight = std::exp2(j * alpha);
        const auto lo = tree.minima(j + 1);
        const auto hi = tree.maxima(j + 1);
        const std::size_t n = lo.size() / 2;
        for (std::size_t k = 0; k < n; ++k) {
            const double gap = std::max(hi[2 * k] - lo[2 * k + 1], hi[2 * k + 1] - lo[2 * k]);
            if (gap <= 0) continue;
            const double ratio = gap * weight;
            if (ratio > best.value) best = {ratio, DyadicInterval{j, k}};
        }
    }
    return best;
}

inline double seminorm(const MeanTree& tree, double alpha) { return seminorm_supremum(tree, alpha).value; }
inline double seminorm(const StepFunction& f, double alpha) { return seminorm(MeanTree(f), alpha); }

struct LevelMax {
    int level;
    double max_abs;
    std::size_t index;  // first index attaining max_abs
};

inline std::vector<LevelMax> per_level_max(const CoefficientTable& table) {
    std::vector<LevelMax> out;
    for (int j = table.min_level(); j <= table.max_level(); ++j) {
        const auto row = table.level(j);
        LevelMax lm{j, 0.0, 0};
        for (std::size_t k = 0; k < row.size(); ++k)
            if (std::abs(row[k]) > lm.max_abs) lm = {j, std::abs(row[k]), k};
        out.push_back(lm);
    }
    return out;
}

struct AlphaEstimate {
    double alpha;
    double slope;
    double intercept;
    int levels_used;
};

/// Levels whose largest coefficient is at or below this are treated as zero.
inline constexpr double kZeroCoefficient = 1e-300;

/// Least-squares fit of log2 max_k |c_{j,k}| = slope * j + intercept over
/// levels with a nonzero maximum; alpha = -slope - 1/2.
inline AlphaEstimate estimate_alpha(const CoefficientTable& table) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& lm : per_level_max(table))
        if (lm.max_abs > kZeroCoefficient) pts.emplace_back(lm.level, std::log2(lm.max_abs));
    if (pts.size() < 3)
        throw std::domain_error("estimate_alpha: need at least 3 levels with a nonzero coefficient, found " +
                                std::to_string(pts.size()));
    const auto n = static_cast<double>(pts.size());
    double sx = 0, sy = 0;
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    const double slope = sxy / sxx;
    return {-slope - 0.5, slope, my - slope * mx, static_cast<int>(pts.size())};
}

struct RegularityReport {
    double alpha = 0;
    double A = 0;
    double seminorm = 0;
    double c_alpha = 0;
    double chain_constant = 0;
    bool lower_ok = false;        // A <= seminorm
    bool upper_ok = false;        // seminorm <= c_alpha A
    bool chain_upper_ok = false;  // seminorm <= chain_constant A
    std::vector<LevelMax> per_level_max;
    std::optional<AlphaEstimate> alpha_estimate;
    std::optional<double> tightness;  // seminorm / (c_alpha A), when A > 0
    std::optional<DyadicInterval> coefficient_witness;
    std::optional<DyadicInterval> seminorm_witness;

    bool holds() const noexcept { return lower_ok && upper_ok; }
};

inline RegularityReport verify_theorem(const StepFunction& f, double alpha, const Tolerance& tol = {}) {
    detail::require_positive_alpha(alpha, "verify_theorem");
    const CoefficientTable table = transform(f);
    const MeanTree tree(f);
    const Supremum a = coefficient_supremum(table, alpha);
    const Supremum s = seminorm_supremum(tree, alpha);

    RegularityReport r;
    r.alpha = alpha;
    r.A = a.value;
    r.seminorm = s.value;
    r.c_alpha = c_alpha(alpha);
    r.chain_constant = chain_constant(alpha);
    r.lower_ok = tol.less_equal(r.A, r.seminorm);
    r.upper_ok = tol.less_equal(r.seminorm, r.c_alpha * r.A);
    r.chain_upper_ok = tol.less_equal(r.seminorm, r.chain_constant * r.A);
    r.per_level_max = per_level_max(table);
    try {
        r.alpha_estimate = estimate_alpha(table);
    } catch (const std::domain_error&) {
        r.alpha_estimate.reset();
    }
    if (r.A > 0) r.tightness = r.seminorm / (r.c_alpha * r.A);
    r.coefficient_witness = a.witness;
    r.seminorm_witness = s.witness;
    return r;
}

/// One interval of a descending chain with its mean. `jump` is
/// |m(this) - m(predecessor)| and `jump_bound` is A |predecessor|^alpha;
/// both are 0 for the first link.
struct ChainLink {
    DyadicInterval interval;
    double mean;
    double jump;
    double jump_bound;
};

/// The five-group decomposition
///   |f(x) - f(y)| <= |f(x) - m(I^x_k)| + sum of x-chain jumps
///                  + |m(I^-) - m(I^+)| + sum of y-chain jumps + |m(I^y_k) - f(y)|
/// for x < y, where I is the smallest dyadic interval containing both.
struct TelescopingCertificate {
    DyadicPoint x, y;  // x < y
    DyadicInterval root;
    DyadicScalar delta;
    double alpha = 0;
    double A = 0;
    double fx = 0, fy = 0;
    std::vector<ChainLink> chain_x, chain_y;

    double endpoint_x = 0;  // I
    double sum_x = 0;       // II
    double central = 0;     // III
    double sum_y = 0;       // IV
    double endpoint_y = 0;  // V
    double total = 0;

    double delta_pow = 0;      // delta^alpha
    double central_bound = 0;  // 2 A delta^alpha
    double chain_bound = 0;    // A delta^alpha / (2^alpha - 1), for each of II and IV
    double bound = 0;          // c_alpha A delta^alpha
    double chain_total_bound = 0;

    struct Checks {
        bool nested = false;
        bool links = false;
        bool endpoints_exact = false;
        bool central = false;
        bool sum_x = false;
        bool sum_y = false;
        bool difference_le_total = false;
        bool total_le_chain_bound = false;
        bool total_le_bound = false;
    } checks;

    double difference() const { return std::abs(fx - fy); }

    /// Every per-term check plus |f(x) - f(y)| <= total <= c_alpha A delta^alpha.
    bool holds() const noexcept {
        return checks.nested && checks.links && checks.endpoints_exact && checks.central && checks.sum_x &&
               checks.sum_y && checks.difference_le_total && checks.total_le_bound;
    }
};

namespace detail {

// Mean on intervals inside the domain, including those finer than the cells
// (where a step function is constant).
inline double chain_mean(const MeanTree& tree, const StepFunction& f, const DyadicInterval& I) {
    if (I.level() <= f.resolution_level()) return tree.mean(I);
    const int up = I.level() - f.resolution_level();
    return f[static_cast<std::size_t>(up >= 64 ? 0 : I.index() >> up)];
}

inline std::vector<ChainLink> descend(const MeanTree& tree, const StepFunction& f, DyadicInterval first,
                                      const DyadicPoint& p, double A, double alpha) {
    std::vector<ChainLink> chain{{first, chain_mean(tree, f, first), 0.0, 0.0}};
    while (chain.back().interval.level() < f.resolution_level()) {
        const DyadicInterval prev = chain.back().interval;
        const auto [left, right] = prev.halves();
        const DyadicInterval next = left.contains(p) ? left : right;
        const double m = chain_mean(tree, f, next);
        chain.push_back({next, m, std::abs(m - chain.back().mean), A * prev.length().pow(alpha)});
    }
    return chain;
}

}  // namespace detail

inline TelescopingCertificate telescope_certificate(const StepFunction& f, const MeanTree& tree, DyadicPoint x,
                                                    DyadicPoint y, double alpha, double A,
                                                    const Tolerance& tol = {}) {
    detail::require_positive_alpha(alpha, "telescope_certificate");
    if (x == y) throw std::invalid_argument("telescope_certificate: x and y must differ");
    if (!f.inside(x)) throw std::out_of_range("telescope_certificate: x = " + x.to_string() + " outside the domain");
    if (!f.inside(y)) throw std::out_of_range("telescope_certificate: y = " + y.to_string() + " outside the domain");
    if (!(A >= 0)) throw std::invalid_argument("telescope_certificate: A must be nonnegative");
    if (y < x) std::swap(x, y);

    TelescopingCertificate c;
    c.x = x;
    c.y = y;
    c.alpha = alpha;
    c.A = A;
    c.root = smallest_common(x, y);
    c.delta = c.root.length();
    c.fx = eval(f, x);
    c.fy = eval(f, y);

    const auto [left, right] = c.root.halves();
    c.chain_x = detail::descend(tree, f, left, x, A, alpha);
    c.chain_y = detail::descend(tree, f, right, y, A, alpha);

    c.endpoint_x = std::abs(c.fx - c.chain_x.back().mean);
    c.endpoint_y = std::abs(c.chain_y.back().mean - c.fy);
    for (const auto& l : c.chain_x) c.sum_x += l.jump;
    for (const auto& l : c.chain_y) c.sum_y += l.jump;
    c.central = std::abs(c.chain_x.front().mean - c.chain_y.front().mean);
    c.total = c.endpoint_x + c.sum_x + c.central + c.sum_y + c.endpoint_y;

    c.delta_pow = c.delta.pow(alpha);
    c.central_bound = 2 * A * c.delta_pow;
    c.chain_bound = A * c.delta_pow / std::expm1(alpha * std::numbers::ln2);
    c.bound = c_alpha(alpha) * A * c.delta_pow;
    c.chain_total_bound = chain_constant(alpha) * A * c.delta_pow;

    auto nested = [&](const std::vector<ChainLink>& chain, const DyadicPoint& p) {
        for (std::size_t l = 0; l < chain.size(); ++l) {
            if (!chain[l].interval.contains(p)) return false;
            if (l > 0 && chain[l].interval.parent() != chain[l - 1].interval) return false;
        }
        return true;
    };
    auto links = [&](const std::vector<ChainLink>& chain) {
        return std::all_of(chain.begin(), chain.end(),
                           [&](const ChainLink& l) { return tol.less_equal(l.jump, l.jump_bound); });
    };
    c.checks.nested = nested(c.chain_x, x) && nested(c.chain_y, y) && c.chain_x.front().interval == left &&
                      c.chain_y.front().interval == right;
    c.checks.links = links(c.chain_x) && links(c.chain_y);
    c.checks.endpoints_exact = c.endpoint_x == 0.0 && c.endpoint_y == 0.0;
    c.checks.central = tol.less_equal(c.central, c.central_bound);
    c.checks.sum_x = tol.less_equal(c.sum_x, c.chain_bound);
    c.checks.sum_y = tol.less_equal(c.sum_y, c.chain_bound);
    c.checks.difference_le_total = tol.less_equal(c.difference(), c.total);
    c.checks.total_le_chain_bound = tol.less_equal(c.total, c.chain_total_bound);
    c.checks.total_le_bound = tol.less_equal(c.total, c.bound);
    return c;
}

inline TelescopingCertificate telescope_certificate(const StepFunction& f, const DyadicPoint& x, const DyadicPoint& y,
                                                    double alpha, double A, const Tolerance& tol = {}) {
    return telescope_certificate(f, MeanTree(f), x, y, alpha, A, tol);
}

}  // namespace haarlip
