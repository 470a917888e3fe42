#include "haarlip/step_function.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <limits>
#include <random>

using namespace haarlip;

namespace {

StepFunction zero_one_two_three() { return {0, 2, {0.0, 1.0, 2.0, 3.0}}; }

StepFunction midpoint_ramp(int m0, int J) {
    std::vector<double> v(std::size_t{1} << (m0 + J));
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = std::ldexp(k + 0.5, -J);
    return {m0, J, v};
}

StepFunction random_values(std::mt19937_64& rng, int m0, int J) {
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    std::vector<double> v(std::size_t{1} << (m0 + J));
    for (double& x : v) x = u(rng);
    return {m0, J, v};
}

}  // namespace

TEST(StepFunction, ValidatesShapeAndValues) {
    EXPECT_THROW(StepFunction(0, 2, {1.0, 2.0}), std::invalid_argument);
    EXPECT_THROW(StepFunction(-1, 2, {1.0}), std::invalid_argument);
    EXPECT_THROW(StepFunction(1, -2, {1.0}), std::invalid_argument);
    EXPECT_THROW(StepFunction(0, 1, {1.0, std::numeric_limits<double>::quiet_NaN()}), std::invalid_argument);
    EXPECT_THROW(StepFunction(0, 1, {1.0, std::numeric_limits<double>::infinity()}), std::invalid_argument);
    const StepFunction coarse(2, -1, {1.0, 2.0});  // cells [0,2), [2,4)
    EXPECT_EQ(coarse.size(), 2u);
    EXPECT_EQ(coarse.cell(1), DyadicInterval(-1, 1));
}

TEST(StepFunction, Mean) {
    EXPECT_DOUBLE_EQ(mean(StepFunction::constant(0, 3, 2.5), {2, 1}), 2.5);
    EXPECT_DOUBLE_EQ(mean(StepFunction::constant(0, 3, 2.5), {0, 0}), 2.5);
    EXPECT_EQ(mean(zero_one_two_three(), {1, 0}), 0.5);
    // midpoint rule is exact for f(x) = x: mean over [0,1/2) is 1/4
    EXPECT_EQ(mean(midpoint_ramp(0, 8), {1, 0}), 0.25);
}

TEST(StepFunction, Integrate) {
    EXPECT_EQ(integrate(StepFunction::constant(0, 4, 1.0), {0, 0}), 1.0);
    EXPECT_EQ(integrate(StepFunction::constant(0, 4, 1.0), {2, 0}), 0.25);
    EXPECT_EQ(integrate(zero_one_two_three(), {0, 0}), 1.5);
    EXPECT_EQ(integrate(StepFunction::constant(2, 1, 1.0), {-2, 0}), 4.0);
}

TEST(StepFunction, Extrema) {
    EXPECT_EQ(extrema(StepFunction::constant(1, 2, -3.0), {0, 1}), (Extrema{-3.0, -3.0}));
    EXPECT_EQ(extrema(zero_one_two_three(), {1, 1}), (Extrema{2.0, 3.0}));
    const MeanTree tree(zero_one_two_three());
    EXPECT_EQ(tree.extrema({1, 1}), (Extrema{2.0, 3.0}));
    EXPECT_EQ(tree.extrema({0, 0}), (Extrema{0.0, 3.0}));
}

TEST(StepFunction, Eval) {
    const StepFunction f = zero_one_two_three();
    EXPECT_EQ(eval(f, parse_point("1/4")), 1.0);
    EXPECT_EQ(eval(f, parse_point("1/2")), 2.0);
    EXPECT_EQ(eval(f, parse_point("0")), 0.0);
    EXPECT_EQ(eval(f, parse_point("5/16")), 1.0);
    EXPECT_EQ(eval(f, parse_point("1023/1024")), 3.0);
    EXPECT_THROW(eval(f, parse_point("1")), std::out_of_range);
}

TEST(StepFunction, RejectsIntervalsOutsideOrTooFine) {
    const StepFunction f = zero_one_two_three();
    EXPECT_THROW(mean(f, {3, 0}), std::out_of_range);   // finer than cells
    EXPECT_THROW(mean(f, {-1, 0}), std::out_of_range);  // [0,2) sticks out of [0,1)
    EXPECT_THROW(mean(f, {1, 2}), std::out_of_range);   // [1, 3/2)
    EXPECT_THROW(extrema(f, {0, 1}), std::out_of_range);
    const MeanTree tree(f);
    EXPECT_THROW(tree.mean({3, 0}), std::out_of_range);
    EXPECT_THROW(tree.mean({0, 1}), std::out_of_range);
}

TEST(MeanTree, ParentIsAverageOfChildren) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const int m0 = static_cast<int>(rng() % 3);
        const int J = static_cast<int>(rng() % 8) - m0 + 1;
        const StepFunction f = random_values(rng, m0, J);
        const MeanTree tree(f);
        for (int j = -m0; j < J; ++j)
            for (std::size_t k = 0; k < f.count_at(j); ++k) {
                const DyadicInterval I{j, k};
                const auto [l, r] = I.halves();
                EXPECT_TRUE(oracle::close(tree.mean(I), (tree.mean(l) + tree.mean(r)) / 2));
                EXPECT_EQ(tree.min(I), std::min(tree.min(l), tree.min(r)));
                EXPECT_EQ(tree.max(I), std::max(tree.max(l), tree.max(r)));
            }
        for (std::size_t k = 0; k < f.size(); ++k) EXPECT_EQ(tree.mean(f.cell(k)), f[k]);
    }
}

TEST(MeanTree, AgreesWithNaiveScans) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        const int m0 = static_cast<int>(rng() % 3);
        const int J = static_cast<int>(rng() % 9);
        const StepFunction f = random_values(rng, m0, J);
        const MeanTree tree(f);
        for (int j = -m0; j <= J; ++j)
            for (std::size_t k = 0; k < f.count_at(j); ++k) {
                const DyadicInterval I{j, k};
                EXPECT_TRUE(oracle::close(tree.mean(I), oracle::naive_mean(f, I), 1e-12, 1e-13));
                EXPECT_EQ(tree.mean(I), mean(f, I));
                EXPECT_EQ(tree.extrema(I), oracle::naive_extrema(f, I));
                EXPECT_EQ(extrema(f, I), oracle::naive_extrema(f, I));
            }
    }
}

TEST(MeanTree, MidpointRampMeansAreExact) {
    for (const auto& [m0, J] : {std::pair{0, 8}, std::pair{2, 6}, std::pair{1, 3}}) {
        const StepFunction f = midpoint_ramp(m0, J);
        const MeanTree tree(f);
        for (int j = -m0; j <= J; ++j)
            for (std::size_t k = 0; k < f.count_at(j); ++k) {
                // mean of x on [k 2^-j, (k+1) 2^-j)
                const double exact = std::ldexp(k + 0.5, -j);
                EXPECT_TRUE(oracle::close(tree.mean({j, k}), exact)) << j << "," << k;
            }
    }
}
