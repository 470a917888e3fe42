// Acceptance suite. Usage: haarlip_acceptance [N ...]  (default: all ten)
// Prints one [PASS]/[FAIL] line per criterion; exit status 1 if any selected
// criterion fails.

#include "haarlip/haarlip.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace haarlip;

namespace {

// Pinned tolerances.
constexpr double kRel = 1e-12;             // relative agreement for floating checks
constexpr double kAbs = 1e-12;             // additive slack in the upper bounds
constexpr double kUltrametricSeconds = 5;  // criterion 1
constexpr double kEquivalenceSeconds = 60;     // criterion 5
constexpr double kStraddleRatio = 1e6;     // criterion 2
constexpr double kAlphaRecovery = 1e-9;    // criterion 7, ramp
constexpr double kAlphaWeierstrass = 0.02; // criterion 7, dyadic_weierstrass
constexpr double kDoublingRatio = 2.5;     // criterion 9

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

bool rel_close(double a, double b) { return oracle::close(a, b, kRel, 1e-14); }

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

StepFunction random_step(std::mt19937_64& rng, int max_depth) {
    const int depth = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_depth));
    const int m0 = static_cast<int>(rng() % 3) % (depth + 1);
    return random_free(rng(), m0, depth - m0);
}

Outcome ultrametric() {
    std::mt19937_64 rng(1);
    const auto t0 = Clock::now();
    long violations = 0, symmetry = 0, identity = 0;
    const int triples = 100000;
    for (int t = 0; t < triples; ++t) {
        const DyadicPoint x = oracle::random_point(rng, 40, 6);
        // shared prefixes make the inequality nontrivial
        DyadicPoint y = rng() % 4 == 0 ? x : oracle::random_point(rng, 40, 6);
        if (rng() % 3 == 0) y = DyadicPoint(x.numerator() * BigInt(1 << 5) + BigInt(rng() % 32), x.scale() + 5);
        const DyadicPoint z = rng() % 5 == 0 ? y : oracle::random_point(rng, 40, 6);
        const DyadicScalar xy = delta(x, y), yz = delta(y, z), xz = delta(x, z);
        if (xz > std::max(xy, yz)) ++violations;
        if (xy != delta(y, x) || xz != delta(z, x)) ++symmetry;
        if ((x == y) != xy.is_zero() || (x == z) != xz.is_zero() || !delta(x, x).is_zero()) ++identity;
    }
    const double secs = seconds_since(t0);
    return {violations == 0 && symmetry == 0 && identity == 0 && secs < kUltrametricSeconds,
            fmt("%d triples, %ld strong-triangle / %ld symmetry / %ld identity failures, %.2fs (limit %.0fs)",
                triples, violations, symmetry, identity, secs, kUltrametricSeconds)};
}

Outcome domination() {
    std::mt19937_64 rng(2);
    long failures = 0;
    for (int t = 0; t < 100000; ++t) {
        const DyadicPoint x = oracle::random_point(rng, 40, 6);
        const DyadicPoint y = oracle::random_point(rng, 40, 6);
        if (abs_diff(x, y) > delta(x, y)) ++failures;
    }
    // x just left of the midpoint of [0,1), y the midpoint
    double worst = 0;
    for (std::uint32_t s = 2; s <= 40; ++s) {
        const DyadicPoint x((BigInt(1) << (s - 1)) - 1, s);
        const DyadicPoint y(BigInt(1), 1);
        const DyadicScalar d = delta(x, y), gap = abs_diff(x, y);
        if (gap > d) ++failures;
        worst = std::max(worst, d.to_double() / gap.to_double());
    }
    return {failures == 0 && worst > kStraddleRatio,
            fmt("%ld domination failures, largest straddle ratio %.3g (need > %.0g)", failures, worst, kStraddleRatio)};
}

Outcome orthonormality() {
    std::vector<DyadicInterval> basis;
    for (int j = 0; j <= 5; ++j)
        for (std::uint64_t k = 0; k < (1u << j); ++k) basis.emplace_back(j, k);
    const int J = 6;
    std::vector<std::vector<double>> rows;
    for (const auto& I : basis) {
        std::vector<double> v(1u << J);
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = haar_eval(I, DyadicInterval(J, k).left());
        rows.push_back(std::move(v));
    }
    double worst = 0;
    for (std::size_t a = 0; a < rows.size(); ++a)
        for (std::size_t b = 0; b < rows.size(); ++b) {
            double s = 0;
            for (std::size_t k = 0; k < rows[a].size(); ++k) s += rows[a][k] * rows[b][k];
            worst = std::max(worst, std::abs(std::ldexp(s, -J) - (a == b ? 1.0 : 0.0)));
        }
    return {basis.size() == 63 && worst <= 1e-12,
            fmt("%zu wavelets, max |G - Id| = %.3g (limit 1e-12)", basis.size(), worst)};
}

Outcome lemma_identity() {
    std::mt19937_64 rng(4);
    long checked = 0, failures = 0;
    for (int t = 0; t < 1000; ++t) {
        const StepFunction f = random_step(rng, 12);
        const MeanTree tree(f);
        for (int j = -f.domain_exponent(); j < f.resolution_level(); ++j)
            for (std::size_t k = 0; k < f.count_at(j); ++k) {
                const DyadicInterval I{j, k};
                const double lhs = oscillation(tree, I);
                const double rhs = 2 * inv_sqrt_length(I) * std::abs(oracle::direct_coefficient(f, I));
                ++checked;
                if (!rel_close(lhs, rhs)) ++failures;
            }
    }
    return {failures == 0, fmt("1000 functions, %ld intervals, %ld mismatches", checked, failures)};
}

Outcome theorem() {
    std::mt19937_64 rng(5);
    const auto t0 = Clock::now();
    const double alphas[] = {0.3, 0.5, 1.0, 1.7};
    long lower = 0, upper = 0, chain = 0, cases = 0;
    double worst_ratio = 0;
    auto check = [&](const StepFunction& f, double alpha, const oracle::PairGaps& gaps) {
        const double A = coefficient_bound(transform(f), alpha);
        const double s = gaps.seminorm(alpha);
        ++cases;
        if (!(A <= s * (1 + kRel) + 1e-14)) ++lower;
        if (!(s <= c_alpha(alpha) * A + kAbs)) ++upper;
        if (!(s <= chain_constant(alpha) * A + kAbs)) ++chain;
        if (A > 0) worst_ratio = std::max(worst_ratio, s / (c_alpha(alpha) * A));
    };
    for (int t = 0; t < 100; ++t) {
        const StepFunction f = random_step(rng, 10);
        const auto gaps = oracle::pair_gaps(f);
        for (double a : alphas) check(f, a, gaps);
    }
    for (int t = 0; t < 100; ++t)
        for (double a : alphas) {
            const int depth = 1 + static_cast<int>(rng() % 10);
            const int m0 = static_cast<int>(rng() % 3) % (depth + 1);
            const StepFunction f = random_lip(a, 1.0, rng(), m0, depth - m0);
            check(f, a, oracle::pair_gaps(f));
        }
    const double secs = seconds_since(t0);
    return {lower == 0 && upper == 0 && secs < kEquivalenceSeconds,
            fmt("%ld cases: A <= [f] fails %ld, [f] <= C_a A + 1e-12 fails %ld (max [f]/(C_a A) = %.4f); "
                "with 2 + 2/(2^a-1) in place of C_a fails %ld; %.2fs (limit %.0fs)",
                cases, lower, upper, worst_ratio, chain, secs, kEquivalenceSeconds)};
}

Outcome sharpness() {
    const StepFunction f = indicator({1, 0}, 1, 8);
    const RegularityReport r = verify_theorem(f, 1.0);
    const bool ok = rel_close(r.seminorm, 1.0) && rel_close(r.A, 0.5) && r.c_alpha == 2.0 && r.tightness &&
                    rel_close(*r.tightness, 1.0);
    return {ok, fmt("seminorm %.17g, A %.17g, C_1 %.17g, tightness %.17g", r.seminorm, r.A, r.c_alpha,
                    r.tightness.value_or(-1))};
}

Outcome alpha_recovery() {
    bool ok = true;
    std::ostringstream out;
    const CoefficientTable ramp_table = transform(ramp(0, 12));
    double worst_level = 0;
    for (const LevelMax& lm : per_level_max(ramp_table))
        if (lm.level >= 0) worst_level = std::max(worst_level, std::abs(std::log2(lm.max_abs) - (-1.5 * lm.level - 2)));
    const AlphaEstimate ramp_est = estimate_alpha(ramp_table);
    ok = ok && worst_level <= 1e-12 && std::abs(ramp_est.alpha - 1) <= kAlphaRecovery;
    out << fmt("ramp: max level error %.3g, alpha %.15g", worst_level, ramp_est.alpha);
    // J = 10: at J = 12 the finest jump of f sits ~2^-40 below |f|, so binary64
    // storage alone moves A by ~1e-12 for alpha = 1.2 (reported, not gated)
    for (double a : {0.3, 0.5, 1.2}) {
        const CoefficientTable t = transform(dyadic_weierstrass(a, 10, 7, 0, 10));
        const double A = coefficient_bound(t, a);
        const AlphaEstimate est = estimate_alpha(t);
        const double A12 = coefficient_bound(transform(dyadic_weierstrass(a, 12, 7, 0, 12)), a);
        ok = ok && rel_close(A, 1.0) && std::abs(est.alpha - a) <= kAlphaWeierstrass;
        out << fmt("; weierstrass(%.1f): A %.17g, alpha %.6f (J=12: A-1 = %.2g)", a, A, est.alpha, A12 - 1);
    }
    return {ok, out.str()};
}

Outcome oracle_equivalence() {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> alpha_dist(0.05, 2.5);
    int failures = 0;
    for (int t = 0; t < 50; ++t) {
        const StepFunction f = t % 2 ? random_step(rng, 10) : random_lip(alpha_dist(rng), 1.0, rng(), 1, 9);
        const MeanTree tree(f);
        const auto gaps = oracle::pair_gaps(f);
        for (int r = 0; r < 4; ++r) {
            const double a = alpha_dist(rng);
            if (!rel_close(seminorm(tree, a), gaps.seminorm(a))) ++failures;
        }
    }
    return {failures == 0, fmt("50 functions x 4 exponents, %d mismatches", failures)};
}

Outcome round_trip() {
    std::mt19937_64 rng(9);
    double worst = 0;
    for (int depth = 1; depth <= 16; ++depth) {
        const StepFunction f = random_free(rng(), depth % 3, depth - depth % 3);
        const StepFunction g = synthesize(transform(f));
        for (std::size_t k = 0; k < f.size(); ++k) worst = std::max(worst, std::abs(f[k] - g[k]));
    }
    // best of several runs, to keep scheduler noise out of the ratio; sizes start
    // past L2 so the cache step at ~1 MB is not read as superlinear cost
    auto timed = [&](int depth) {
        const StepFunction f = random_free(3, 0, depth);
        double best = 1e9;
        for (int rep = 0; rep < 15; ++rep) {
            const auto t0 = Clock::now();
            const CoefficientTable t = transform(f);
            best = std::min(best, seconds_since(t0));
            if (t.global_mean() == 42) std::abort();
        }
        return best;
    };
    std::vector<double> ns;
    for (int depth = 17; depth <= 21; ++depth) ns.push_back(timed(depth) * 1e9 / std::ldexp(1.0, depth));
    double worst_ratio = 0;
    std::ostringstream ratios;
    for (std::size_t i = 1; i < ns.size(); ++i) {
        const double r = 2 * ns[i] / ns[i - 1];
        worst_ratio = std::max(worst_ratio, r);
        ratios << (i > 1 ? ", " : "") << fmt("%.2f", r);
    }
    return {worst <= 1e-12 && worst_ratio <= kDoublingRatio,
            fmt("max |f - S(T f)| = %.3g up to N = 2^16; ns/cell 2^17..2^21: %.2f..%.2f, doubling ratios %s (limit %.1f)",
                worst, ns.front(), ns.back(),
                ratios.str().c_str(), kDoublingRatio)};
}

Outcome certificates() {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> alpha_dist(0.1, 2.0);
    long failures = 0, term_failures = 0, chain_ok = 0;
    double worst = 0;
    for (int t = 0; t < 1000; ++t) {
        const double alpha = alpha_dist(rng);
        const StepFunction f = t % 2 ? random_step(rng, 10) : random_lip(alpha, 1.0, rng(), 1, 1 + rng() % 9);
        const double A = coefficient_bound(transform(f), alpha);
        DyadicPoint x = oracle::random_point_in(rng, f), y = oracle::random_point_in(rng, f);
        while (x == y) y = oracle::random_point_in(rng, f);
        const auto c = telescope_certificate(f, x, y, alpha, A);
        const auto within = [](double v, double bound) { return v <= bound + kAbs; };
        const bool terms = c.checks.nested && c.checks.links && c.checks.endpoints_exact &&
                           within(c.central, 2 * A * c.delta_pow) && within(c.sum_x, c.chain_bound) &&
                           within(c.sum_y, c.chain_bound);
        const bool chain = c.difference() <= c.total + kAbs && within(c.total, c_alpha(alpha) * A * c.delta_pow);
        if (!terms) ++term_failures;
        if (!terms || !chain) ++failures;
        if (within(c.total, c.chain_total_bound)) ++chain_ok;
        if (A > 0) worst = std::max(worst, c.total / c.bound);
    }
    return {failures == 0,
            fmt("1000 instances: %ld fail (per-term bounds fail %ld); max total/(C_a A delta^a) = %.4f; "
                "total <= (2 + 2/(2^a-1)) A delta^a in %ld",
                failures, term_failures, worst, chain_ok)};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"ultrametric", ultrametric},
        {"domination and unboundedness", domination},
        {"orthonormality", orthonormality},
        {"half-mean jump identity", lemma_identity},
        {"equivalence, both directions", theorem},
        {"sharpness at alpha = 1", sharpness},
        {"exact alpha recovery", alpha_recovery},
        {"fast seminorm vs brute force", oracle_equivalence},
        {"round trip and linear time", round_trip},
        {"telescoping certificates", certificates},
    };
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        const int n = std::atoi(argv[i]);
        if (n < 1 || n > static_cast<int>(criteria.size())) {
            std::cerr << "unknown criterion '" << argv[i] << "'\n";
            return 2;
        }
        selected.push_back(n);
    }
    if (selected.empty())
        for (int n = 1; n <= static_cast<int>(criteria.size()); ++n) selected.push_back(n);

    bool all = true;
    for (int n : selected) {
        const auto& [name, fn] = criteria[static_cast<std::size_t>(n - 1)];
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        all = all && o.pass;
        std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << fmt("%02d ", n) << name << ": " << o.detail << std::endl;
    }
    return all ? 0 : 1;
}
