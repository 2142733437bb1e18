#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "rcsub/functions.hpp"
#include "rcsub/io.hpp"
#include "support.hpp"

using namespace rcsub;

TEST(Grid, UnitGridNodesAndCounts)
{
    const auto g = UniformGrid1D::unit(16);
    EXPECT_EQ(g.node_count(), 17u);
    EXPECT_EQ(g.cell_count(), 16u);
    EXPECT_DOUBLE_EQ(g.spacing(), 1.0 / 16.0);
    EXPECT_EQ(g.node(0), 0.0);
    EXPECT_EQ(g.back(), 1.0);
    EXPECT_EQ(g.node(-1), -1.0 / 16.0);
}

TEST(Grid, RefinedKeepsCoarseNodesBitwise)
{
    const auto g = UniformGrid1D::unit(100);
    const auto f = g.refined(5);
    EXPECT_EQ(f.node_count(), 100u * 32u + 1u);
    for (std::ptrdiff_t j = 0; j <= 100; ++j)
        EXPECT_EQ(f.node(32 * j), g.node(j));
}

TEST(Grid, RejectsBadConstruction)
{
    EXPECT_THROW(UniformGrid1D(0.0, 0.0, 5), Error);
    EXPECT_THROW(UniformGrid1D(0.0, 0.1, 1), Error);
    EXPECT_THROW(UniformGrid1D::unit(0), Error);
    try {
        UniformGrid1D::unit(0);
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::bad_resolution);
    }
    const auto g = UniformGrid1D::unit(4);
    EXPECT_THROW(SampleSeries(g, {1, 2, 3}), Error);
    EXPECT_THROW(CellAverageSeries(g, {1, 2, 3}), Error);
    EXPECT_THROW(SampleSeries(g, {1, 2, 3, std::nan(""), 5}), Error);
}

TEST(Grid, PrimitiveRoundTripsAverages)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3, 3);
    std::vector<double> a(40);
    for (auto& v : a)
        v = u(rng);
    const CellAverageSeries c(UniformGrid1D::unit(40), a);
    const SampleSeries F = primitive(c);
    EXPECT_EQ(F[0], 0.0);
    double sum = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        sum += a[j] / 40.0;
        EXPECT_NEAR(F[j + 1], sum, 1e-14);
    }
    const auto back = cell_averages_from_primitive(F);
    for (std::size_t j = 0; j < a.size(); ++j)
        EXPECT_NEAR(back[j], a[j], 1e-12);
}

TEST(Functions, Exp1MatchesClosedForm)
{
    for (double a : {0.0, 10.0}) {
        const auto f = make_exp1(a);
        for (int i = 0; i <= 1000; ++i) {
            const double x = i / 1000.0;
            EXPECT_NEAR(f(x), oracle::exp1(x, a), 1e-13) << x;
        }
        EXPECT_NEAR(f(oracle::s1), oracle::exp1(oracle::s1, a), 1e-13);
    }
}

TEST(Functions, Exp2AndExp4PiecesAtTheirBreakpoints)
{
    const double s1 = std::numbers::pi / 12, s2 = std::numbers::pi / 4;
    const auto e2 = make_exp2();
    const auto e4 = make_exp4();
    auto mid = [](double x) { return x * x + std::sin(10 * x); };
    EXPECT_NEAR(e2(0.5), mid(0.5), 1e-14);
    EXPECT_NEAR(e2(0.1), (0.1 - s1) * (0.1 - s1 - 10) + mid(0.1), 1e-13);
    EXPECT_NEAR(e2(0.9), (0.9 - s2) * (0.9 - s2 - 5) + mid(0.9), 1e-13);
    EXPECT_NEAR(e4(0.1), (0.1 - s1) * (0.1 - s1 - 10) + mid(0.1) + 1, 1e-13);
    EXPECT_NEAR(e4(0.9), (0.9 - s2) * (0.9 - s2 - 5) + mid(0.9) + 2, 1e-13);
    // continuous corners for exp2, jumps of 1 and 2 for exp4
    EXPECT_NEAR(e2.jump(0, 0), 0.0, 1e-13);
    EXPECT_NEAR(e2.jump(1, 0), 0.0, 1e-13);
    EXPECT_NEAR(e4.jump(0, 0), -1.0, 1e-13);
    EXPECT_NEAR(e4.jump(1, 0), 2.0, 1e-13);
}

TEST(Functions, DerivativeJumpsMatchSymbolicOracle)
{
    const auto f = make_exp1(0.0);
    for (int k = 0; k < 4; ++k)
        EXPECT_NEAR(f.jump(0, k), oracle::exp1_jump(oracle::s1, 0.0, k), 1e-10) << k;
    EXPECT_NEAR(f.jump(0, 1), 10.0, 1e-12);
    EXPECT_NEAR(f.jump(0, 2), -2.0, 1e-12);
}

TEST(Functions, AveragesMatchAntiderivative)
{
    for (double a : {0.0, 10.0}) {
        const auto f = make_exp1(a);
        const auto c = average(f, UniformGrid1D::unit(20));
        for (std::size_t j = 0; j < c.size(); ++j) {
            const double lo = j / 20.0, hi = (j + 1) / 20.0;
            EXPECT_NEAR(c[j], oracle::exp1_average(lo, hi, a), 1e-12) << j;
        }
        EXPECT_NEAR(f.integral(0.0, 1.0), oracle::exp1_integral(0.0, 1.0, a), 1e-12);
    }
}

TEST(Functions, RelocatedMovesTheBreakpoint)
{
    const auto f = make_exp1(10.0);
    const auto g = f.relocated(0, 0.53);
    EXPECT_EQ(g.breakpoints().front(), 0.53);
    EXPECT_NEAR(g(0.525), oracle::exp1_left_derivative(0.525, 10.0, 0), 1e-13);
    EXPECT_NEAR(g(0.535), oracle::exp1_right_derivative(0.535, 0), 1e-13);
}

TEST(Functions, UnknownNamesAreRejected)
{
    try {
        make_function("exp9");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::unknown_function);
        EXPECT_EQ(exit_status(e.code()), 2);
    }
    EXPECT_THROW(make_function_2d("exp1"), Error);
    EXPECT_TRUE(is_2d_function("exp2D"));
    EXPECT_FALSE(is_2d_function("exp2"));
}

TEST(Functions, TwoDimensionalAveragesMatchSeparableOracle)
{
    // exp2D is -cos(pi x)cos(pi y) + const on three quadrants; the integral of
    // cos(pi x) over [a,b] is (sin(pi b) - sin(pi a)) / pi.
    const auto f = make_exp2d();
    auto icos = [](double a, double b) { return (std::sin(std::numbers::pi * b) - std::sin(std::numbers::pi * a)) / std::numbers::pi; };
    const double x0 = 0.6, x1 = 0.7, y0 = 0.1, y1 = 0.3;
    const double want = (-icos(x0, x1) * icos(y0, y1) + 2.0 * (x1 - x0) * (y1 - y0)) / ((x1 - x0) * (y1 - y0));
    EXPECT_NEAR(f.average(x0, x1, y0, y1), want, 1e-13);
    const double w2 = (icos(0.1, 0.2) * icos(0.1, 0.2)) / 0.01;
    EXPECT_NEAR(f.average(0.1, 0.2, 0.1, 0.2), w2, 1e-13);
}

TEST(Io, SeriesRoundTripIsExact)
{
    const auto s = sample(make_exp1(0.0), UniformGrid1D::unit(16));
    std::stringstream ss;
    write_series(ss, s);
    std::string first;
    std::getline(ss, first);
    EXPECT_EQ(first, "# kind=point, origin=0, h=0.0625");
    ss.seekg(0);
    const auto back = std::get<SampleSeries>(read_series(ss));
    EXPECT_EQ(back.values(), s.values());
    EXPECT_EQ(back.grid(), s.grid());

    const auto c = average(make_exp3(), UniformGrid1D::unit(20));
    std::stringstream cs;
    write_series(cs, c);
    const auto cb = std::get<CellAverageSeries>(read_series(cs));
    EXPECT_EQ(cb.averages(), c.averages());
    EXPECT_EQ(cb.grid(), c.grid());
}

TEST(Io, MalformedInputIsAnIoError)
{
    for (const char* text : {"", "1\n2\n", "# kind=point\n1\n2\n", "# kind=blob, origin=0, h=1\n1\n2\n",
                             "# kind=point, origin=0, h=0.5\n1\nabc\n2\n"}) {
        std::stringstream ss(text);
        try {
            read_series(ss);
            FAIL() << text;
        } catch (const Error& e) {
            EXPECT_EQ(exit_status(e.code()), 2) << text;
        }
    }
}

TEST(Io, MatrixRoundTripIsExact)
{
    const auto g = UniformGrid1D::unit(8);
    Matrix m(9, 9);
    for (int r = 0; r < 9; ++r)
        for (int c = 0; c < 9; ++c)
            m(r, c) = std::sin(r + 0.1 * c);
    const Grid2DSamples data(g, g, m);
    std::stringstream ss;
    write_matrix(ss, data);
    const auto back = read_matrix(ss);
    EXPECT_EQ(back.values, data.values);
    EXPECT_EQ(back.x_grid, g);
    EXPECT_EQ(back.framework, Framework::point);
}
