#include <gtest/gtest.h>

#include <cstdlib>

#include "rcsub/analysis.hpp"
#include "support.hpp"

using namespace rcsub;

TEST(Analysis, InfinityErrorSkipsExcludedNodes)
{
    const SampleSeries s(UniformGrid1D::unit(4), {0, 1, 5, 1, 0});
    auto zero = [](double) { return 0.0; };
    EXPECT_EQ(error_inf(zero, s), 5.0);
    EXPECT_EQ(error_inf(zero, s, {{0.5, 0.5}}), 1.0);
    EXPECT_EQ(error_inf(zero, s, {{0.2, 0.8}}), 0.0);
}

TEST(Analysis, CellErrorsAgainstHandSums)
{
    const CellAverageSeries c(UniformGrid1D::unit(4), {1, 2, 3, 4});
    auto exact = [](double lo, double hi) { return 10 * (lo + hi) / 2; };   // averages of 10x
    // exact averages 1.25, 3.75, 6.25, 8.75
    EXPECT_NEAR(error_inf_cells(exact, c), 4.75, 1e-14);
    EXPECT_NEAR(error_inf_cells(exact, c, {{0.8, 0.9}}), 3.25, 1e-14);
    EXPECT_NEAR(error_inf_cells(exact, c, {{0.75, 0.75}}), 1.75, 1e-14);
    EXPECT_NEAR(error_l1(exact, c), 0.25 * (0.25 + 1.75 + 3.25 + 4.75), 1e-14);
}

TEST(Analysis, ObservedOrdersAreRecomputable)
{
    const std::vector<double> e{1e-2, 1.3e-3, 7e-5, 5e-6, 2e-14, 1e-15};
    const auto o = observed_orders(e);
    ASSERT_EQ(o.size(), e.size() - 1);
    for (std::size_t i = 0; i + 3 < e.size(); ++i)
        EXPECT_NEAR(o[i], std::log2(e[i] / e[i + 1]), 1e-12);
    EXPECT_TRUE(std::isnan(o[3]));
    EXPECT_TRUE(std::isnan(o[4]));
}

TEST(Analysis, ComparisonLevelIsCapped)
{
    EXPECT_EQ(comparison_level(16, 10), 10);
    EXPECT_EQ(comparison_level(2048, 10), 10);
    EXPECT_EQ(comparison_level(8192, 10), 8);
    EXPECT_LE((std::size_t{1} << 22), max_comparison_nodes + 1);
}

TEST(Analysis, CornerStudyFirstRows)
{
    const auto rc = refinement_study(make_exp1(0.0), Framework::point, Scheme::rc, {16, 32}, 10, Norm::inf);
    EXPECT_NEAR(rc.errors[0], 2.3041e-02, 5e-6);
    EXPECT_NEAR(rc.errors[1], 5.3611e-03, 5e-7);
    const auto lin = refinement_study(make_exp1(0.0), Framework::point, Scheme::linear, {16}, 10, Norm::inf);
    EXPECT_NEAR(lin.errors[0], 1.1052e-01, 5e-5);
    EXPECT_EQ(lin.exclusion, "none");
}

TEST(Analysis, OrdersDoNotDependOnTheComparisonLevel)
{
    const std::vector<int> n{64, 128, 256};
    const auto a = refinement_study(make_exp1(10.0), Framework::point, Scheme::rc, n, 6, Norm::inf);
    const auto b = refinement_study(make_exp1(10.0), Framework::point, Scheme::rc, n, 9, Norm::inf);
    for (std::size_t i = 0; i < a.orders.size(); ++i)
        EXPECT_NEAR(a.orders[i], b.orders[i], 0.1);
}

TEST(Analysis, StudiesAreDeterministicAcrossThreadCounts)
{
    const std::vector<int> n{32, 64, 128, 256};
    ::setenv("RC_SUBDIV_THREADS", "1", 1);
    EXPECT_EQ(worker_count(8), 1u);
    const auto one = refinement_study(make_exp3(), Framework::cell, Scheme::rc, n, 6, Norm::l1);
    ::setenv("RC_SUBDIV_THREADS", "4", 1);
    const auto four = refinement_study(make_exp3(), Framework::cell, Scheme::rc, n, 6, Norm::l1);
    ::unsetenv("RC_SUBDIV_THREADS");
    EXPECT_EQ(one.errors, four.errors);
}

TEST(Analysis, FailedRowsAreReportedNotThrown)
{
    // 4 cells is below the pipeline minimum
    const auto r = refinement_study(make_exp1(0.0), Framework::point, Scheme::rc, {4, 16}, 4, Norm::inf);
    EXPECT_TRUE(std::isnan(r.errors[0]));
    EXPECT_FALSE(r.failures[0].empty());
    EXPECT_TRUE(r.failures[1].empty());
    EXPECT_TRUE(std::isnan(r.orders[0]));
}

TEST(Analysis, StudyRejectsBadInput)
{
    EXPECT_THROW(refinement_study(make_exp1(0.0), Framework::point, Scheme::rc, {}, 4, Norm::inf), Error);
    EXPECT_THROW(refinement_study(make_exp1(0.0), Framework::point, Scheme::rc, {32, 16}, 4, Norm::inf), Error);
    EXPECT_THROW(refinement_study(make_exp1(0.0), Framework::point, Scheme::rc, {16}, -1, Norm::inf), Error);
}

TEST(Analysis, LinearRegularityStaysBelowOne)
{
    const auto r = numerical_regularity(make_exp1(0.0), Framework::point, Scheme::linear, 100, {5, 10});
    EXPECT_NEAR(r.beta1.back(), 0.8861, 0.002);
    EXPECT_LT(r.beta2.back(), 0.01);
    EXPECT_NEAR(r.window_end, oracle::s1, 0.01);
    EXPECT_LE(r.window_end, oracle::s1);
}

TEST(Analysis, RcRegularityOnTheSmoothWindow)
{
    const auto r = numerical_regularity(make_exp1(0.0), Framework::point, Scheme::rc, 100, {9, 10});
    EXPECT_GT(r.beta1.back(), 0.99);
    EXPECT_GE(r.beta2.back(), 0.0);
    EXPECT_LE(r.beta2.back(), 0.1);
}

TEST(Analysis, RegularityExponentFloor)
{
    EXPECT_NEAR(detail::regularity_exponent(1e-3, 2.5e-4, 0), 2.0, 1e-12);
    EXPECT_TRUE(std::isnan(detail::regularity_exponent(1e-15, 1e-16, 0)));
}
