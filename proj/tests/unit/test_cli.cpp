#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include <gtest/gtest.h>

#include "arithdyn/cli.hpp"
#include "support/zero_tables.hpp"

using namespace arithdyn;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code = 0;
    std::string out, err;
};

Outcome run_cli(std::vector<std::string> args, const cli::AcceptanceRunner& acceptance = {})
{
    args.insert(args.begin(), "arithdyn");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Outcome o;
    o.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err, acceptance);
    o.out = out.str();
    o.err = err.str();
    return o;
}

std::string env_or(const char* name, const std::string& fallback)
{
    const char* v = std::getenv(name);
    return v && *v ? v : fallback;
}

std::string data_file(const std::string& name) { return env_or("ARITHDYN_DATA", "data") + "/" + name; }

std::string read_file(const fs::path& p)
{
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir = fs::temp_directory_path() / ("arithdyn_cli_" + std::to_string(::getpid()) + "_"
                                           + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    // Zero table to T = 5000 on disk.
    std::string zeros5000()
    {
        if (const char* env = std::getenv("ARITHDYN_ZEROS"); env && *env && fs::exists(env)) return env;
        const fs::path p = dir / "zeros5000.txt";
        if (!fs::exists(p)) write_zero_table(p.string(), arithdyn::testing::zeros_to(5000.0));
        return p.string();
    }

    fs::path dir;
};

} // namespace

TEST_F(CliTest, ZerosComputeWritesTwentyNineOrdinates)
{
    const fs::path out = dir / "zeros.txt";
    const Outcome o = run_cli({"zeros", "compute", "--tmax", "100", "--out", out.string()});
    EXPECT_EQ(o.code, 0) << o.err;
    std::ifstream is(out);
    std::string line;
    int ordinates = 0;
    while (std::getline(is, line))
        if (!line.empty() && line[0] != '#') ++ordinates;
    EXPECT_EQ(ordinates, 29);
    EXPECT_EQ(load_zero_table(out.string()).size(), 29u);
}

TEST_F(CliTest, ZerosCheck)
{
    const fs::path out = dir / "zeros.txt";
    ASSERT_EQ(run_cli({"zeros", "compute", "--tmax", "200", "--out", out.string()}).code, 0);
    const Outcome o = run_cli({"zeros", "check", "--zeros", out.string()});
    EXPECT_EQ(o.code, 0) << o.err;
    EXPECT_NE(o.out.find("T,observed,smooth_estimate,discrepancy,flagged"), std::string::npos);
    EXPECT_NE(o.out.find("\n100,29,"), std::string::npos) << o.out;
}

TEST_F(CliTest, ZerosCheckFlagsGappyTable)
{
    const ZeroTable& t = arithdyn::testing::zeros_to(200.0);
    std::vector<double> o = t.ordinates();
    o.erase(o.begin() + 3, o.begin() + 6);
    const fs::path p = dir / "gappy.txt";
    write_zero_table(p.string(), ZeroTable(o, ZeroSource::file, 1e-9, 200.0));
    const Outcome r = run_cli({"zeros", "check", "--zeros", p.string(), "--tmax", "100"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("zero counting"), std::string::npos) << r.err;
}

TEST_F(CliTest, EfCheckSingleBump)
{
    const Outcome o = run_cli({"ef-check", "--zeros", zeros5000(), "--center", "0.6931", "--width", "0.05", "--tol", "1e-6"});
    EXPECT_EQ(o.code, 0) << o.err;
    EXPECT_NE(o.out.find("center,width,zeros_used,primes_used,spectral,arithmetic,residual,tail_bound"),
              std::string::npos);
    EXPECT_NE(o.out.find("\n0.6931,0.05,"), std::string::npos) << o.out;
}

TEST_F(CliTest, EfCheckDefaultGrid)
{
    const fs::path csv = dir / "ef.csv";
    const Outcome o = run_cli({"ef-check", "--zeros", zeros5000(), "--out", csv.string()});
    EXPECT_EQ(o.code, 0) << o.err;
    std::ifstream is(csv);
    std::string line;
    int rows = -1;
    while (std::getline(is, line)) ++rows;
    EXPECT_EQ(rows, 12);
}

TEST_F(CliTest, EfCheckMissingZeroFails)
{
    std::vector<double> o = arithdyn::testing::zeros_to(5000.0).ordinates();
    o.erase(o.begin());
    const fs::path p = dir / "missing_first.txt";
    write_zero_table(p.string(), ZeroTable(o, ZeroSource::file, 1e-9, 5000.0));
    const Outcome r = run_cli({"ef-check", "--zeros", p.string(), "--center", "0.6931", "--width", "0.05"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("explicit formula"), std::string::npos) << r.err;
}

TEST_F(CliTest, EfCheckShortTableIsTailError)
{
    const fs::path p = dir / "short.txt";
    write_zero_table(p.string(), arithdyn::testing::zeros_to(30.0));
    const Outcome r = run_cli({"ef-check", "--zeros", p.string(), "--center", "0.6931", "--width", "0.02"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("tail"), std::string::npos) << r.err;
}

TEST_F(CliTest, TorsionCircle)
{
    const Outcome o = run_cli({"torsion", "--complex", data_file("circle.json"), "--zeta", "q=2:-1"});
    EXPECT_EQ(o.code, 0) << o.err;
    EXPECT_NE(o.out.find("acyclicity"), std::string::npos) << o.out;
    EXPECT_NE(o.out.find("order"), std::string::npos);
    EXPECT_NE(o.out.find("leading_coefficient"), std::string::npos);
}

TEST_F(CliTest, TorsionTorus)
{
    EXPECT_EQ(run_cli({"torsion", "--complex", data_file("torus.json")}).code, 0);
}

TEST_F(CliTest, TorsionNegativeControls)
{
    const Outcome wrong = run_cli({"torsion", "--complex", data_file("circle_wrong_exponent.json")});
    EXPECT_EQ(wrong.code, 1);
    EXPECT_NE(wrong.err.find("vanishing order"), std::string::npos) << wrong.err;

    const Outcome override = run_cli({"torsion", "--complex", data_file("circle.json"), "--zeta", "q=2:-2"});
    EXPECT_EQ(override.code, 1);

    const Outcome flat = run_cli({"torsion", "--complex", data_file("circle_non_acyclic.json")});
    EXPECT_EQ(flat.code, 1);
    EXPECT_NE(flat.err.find("acyclicity"), std::string::npos) << flat.err;

    const Outcome bad = run_cli({"torsion", "--complex", data_file("not_a_complex.json")});
    EXPECT_EQ(bad.code, 2);
    EXPECT_NE(bad.err.find("is not zero"), std::string::npos) << bad.err;
}

TEST_F(CliTest, InputErrorsExitTwo)
{
    EXPECT_EQ(run_cli({}).code, 2);
    EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
    EXPECT_EQ(run_cli({"torsion"}).code, 2);
    EXPECT_EQ(run_cli({"torsion", "--complex", (dir / "missing.json").string()}).code, 2);
    EXPECT_EQ(run_cli({"torsion", "--complex", data_file("circle.json"), "--zeta", "q=2"}).code, 2);
    EXPECT_EQ(run_cli({"zeros", "check", "--zeros", (dir / "missing.txt").string()}).code, 2);
    EXPECT_EQ(run_cli({"numberfield", "--d", "-12"}).code, 2);
    EXPECT_EQ(run_cli({"ef-check", "--zeros", zeros5000(), "--tol", "-1"}).code, 2);

    const fs::path unsorted = dir / "unsorted.txt";
    std::ofstream(unsorted) << "21.022039639\n14.134725142\n";
    const Outcome u = run_cli({"ef-check", "--zeros", unsorted.string()});
    EXPECT_EQ(u.code, 2);
    EXPECT_NE(u.err.find("does not exceed"), std::string::npos) << u.err;
}

TEST_F(CliTest, RegdetCheck)
{
    const Outcome o = run_cli({"regdet-check"});
    EXPECT_EQ(o.code, 0) << o.err;
}

TEST_F(CliTest, SuspensionSystems)
{
    for (const char* f : {"cat_map.json", "permutation.json", "two_scales.json"}) {
        const Outcome o = run_cli({"suspension", "--system", data_file(f), "--d", "8"});
        EXPECT_EQ(o.code, 0) << f << ": " << o.err;
    }
    const Outcome bad = run_cli({"suspension", "--system", data_file("cat_map.json"), "--d", "0"});
    EXPECT_EQ(bad.code, 2);
}

TEST_F(CliTest, NumberfieldSelection)
{
    const Outcome o = run_cli({"numberfield", "--d", "-4,-23,5"});
    EXPECT_EQ(o.code, 0) << o.err;
    EXPECT_NE(o.out.find("D,h,w,R,lhs,rhs,exact_or_abs_error"), std::string::npos);
    EXPECT_NE(o.out.find("\n-23,3,2,"), std::string::npos) << o.out;
}

TEST_F(CliTest, DeterministicCsv)
{
    struct Case {
        std::vector<std::string> args;
    };
    const std::vector<Case> cases{
        {{"regdet-check"}},
        {{"numberfield"}},
        {{"suspension", "--system", data_file("cat_map.json")}},
        {{"torsion", "--complex", data_file("torus.json"), "--seed", "7"}},
        {{"ef-check", "--zeros", zeros5000(), "--center", "1.0986", "--width", "0.1"}},
    };
    int i = 0;
    for (const auto& c : cases) {
        std::string first, second;
        for (std::string* target : {&first, &second}) {
            const fs::path p = dir / ("run" + std::to_string(i++) + ".csv");
            auto args = c.args;
            args.insert(args.end(), {"--out", p.string()});
            const Outcome o = run_cli(args);
            EXPECT_EQ(o.code, 0) << o.err;
            *target = read_file(p);
        }
        EXPECT_FALSE(first.empty());
        EXPECT_EQ(first, second) << c.args.front();
    }
}

TEST_F(CliTest, AllAcceptanceUsesRunnerExitCode)
{
    int calls = 0;
    const auto pass = [&](const cli::RunConfig& cfg, std::ostream&) {
        ++calls;
        EXPECT_EQ(cfg.seed, 3u);
        return 0;
    };
    EXPECT_EQ(run_cli({"all-acceptance", "--seed", "3"}, pass).code, 0);
    EXPECT_EQ(calls, 1);
    const auto fail = [](const cli::RunConfig&, std::ostream&) { return 1; };
    EXPECT_EQ(run_cli({"all-acceptance"}, fail).code, 1);
}

TEST_F(CliTest, BinaryExitCodes)
{
    const std::string bin = env_or("ARITHDYN_BIN", "");
    if (bin.empty()) GTEST_SKIP() << "ARITHDYN_BIN not set";
    auto status = [&](const std::string& args) {
        const int s = std::system((bin + " " + args + " >/dev/null 2>&1").c_str());
        return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
    };
    EXPECT_EQ(status("torsion --complex " + data_file("circle.json")), 0);
    EXPECT_EQ(status("torsion --complex " + data_file("circle_wrong_exponent.json")), 1);
    EXPECT_EQ(status("torsion --complex " + data_file("not_a_complex.json")), 2);
    EXPECT_EQ(status("no-such-command"), 2);
    EXPECT_EQ(status("--help"), 0);
}
