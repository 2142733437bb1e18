#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "rcsub/io.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path work = fs::path(RCSUB_TEST_WORKDIR) / "cli";

int run(const std::string& args)
{
    fs::create_directories(work);
    const std::string cmd = "cd '" + work.string() + "' && '" RCSUB_CLI_PATH "' " + args + " >stdout.txt 2>stderr.txt";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

std::vector<std::string> lines_of(const fs::path& p)
{
    std::vector<std::string> out;
    std::istringstream in(slurp(p));
    for (std::string l; std::getline(in, l);)
        out.push_back(l);
    return out;
}

} // namespace

TEST(Cli, GenWritesOneLinePerNode)
{
    ASSERT_EQ(run("gen exp1 --n 16 --out exp1.csv"), 0);
    const auto l = lines_of(work / "exp1.csv");
    ASSERT_EQ(l.size(), 18u);   // header, then 17 nodes
    EXPECT_EQ(l[0].rfind("#", 0), 0u);
    ASSERT_EQ(run("gen exp3 --n 20 --cell --out exp3.csv"), 0);
    EXPECT_EQ(lines_of(work / "exp3.csv").size(), 21u);
}

TEST(Cli, GenOfTheQuadrantFunctionIsSquare)
{
    ASSERT_EQ(run("gen exp2D --n 32 --out q.csv"), 0);
    const auto g = rcsub::read_matrix_file(work / "q.csv");
    EXPECT_EQ(g.rows(), 32);
    EXPECT_EQ(g.cols(), 32);
}

TEST(Cli, RcFindsTheCorner)
{
    ASSERT_EQ(run("gen exp1 --n 32 --out in.csv"), 0);
    ASSERT_EQ(run("rc in.csv --levels 3 --out run"), 0);
    const auto h = lines_of(work / "run" / "hypotheses.csv");
    ASSERT_EQ(h.size(), 2u);
    std::istringstream row(h[1]);
    std::string idx, kind, x;
    std::getline(row, idx, ',');
    std::getline(row, kind, ',');
    std::getline(row, x, ',');
    EXPECT_EQ(kind, "corner");
    EXPECT_NEAR(std::stod(x), 0.5235987755982988, 1e-3);
    EXPECT_TRUE(fs::exists(work / "run" / "levels" / "level_3.csv"));
    EXPECT_TRUE(fs::exists(work / "run" / "timings"));
}

TEST(Cli, SmoothInputHasNoHypotheses)
{
    ASSERT_EQ(run("gen smooth --n 64 --out s.csv"), 0);
    ASSERT_EQ(run("rc s.csv --levels 2 --out srun"), 0);
    EXPECT_EQ(lines_of(work / "srun" / "hypotheses.csv").size(), 1u);
}

TEST(Cli, InputErrorsExitWithTwo)
{
    ASSERT_EQ(run("gen exp1 --n 6 --out tiny.csv"), 0);
    EXPECT_EQ(run("rc tiny.csv --levels 2 --out tiny"), 2);
    EXPECT_NE(slurp(work / "stderr.txt").find("TooFewNodes"), std::string::npos);
    EXPECT_EQ(run("gen nosuch"), 2);
    EXPECT_EQ(run("fig 12"), 2);
    EXPECT_EQ(run("table 9"), 2);
    EXPECT_EQ(run("--levels"), 2);
}

TEST(Cli, ConfigFilesRejectUnknownKeys)
{
    std::ofstream(work / "good.cfg") << "n=20\nlevels=2\n";
    std::ofstream(work / "bad.cfg") << "n=20\nbogus=1\n";
    ASSERT_EQ(run("--config good.cfg gen exp1 --out cfg.csv"), 0);
    EXPECT_EQ(lines_of(work / "cfg.csv").size(), 22u);
    EXPECT_EQ(run("--config bad.cfg gen exp1"), 2);
}

TEST(Cli, TablesAreReproducible)
{
    ASSERT_EQ(run("table 3 --out t3a.csv"), 0);
    ASSERT_EQ(run("table 3 --out t3b.csv"), 0);
    EXPECT_EQ(slurp(work / "t3a.csv"), slurp(work / "t3b.csv"));
    EXPECT_FALSE(slurp(work / "stdout.txt").empty());
}

TEST(Cli, FigureBundlesAreWritten)
{
    ASSERT_EQ(run("fig 3 --out f3"), 0);
    EXPECT_TRUE(fs::exists(work / "f3" / "rc.csv"));
    EXPECT_TRUE(fs::exists(work / "f3" / "hypotheses.csv"));
}
