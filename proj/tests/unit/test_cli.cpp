#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rdsde_cli/cli.hpp"

namespace fs = std::filesystem;
using rdsde::cli::run_cli;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run cli(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        std::random_device rd;
        dir_ = fs::temp_directory_path() / ("rdsde_cli_" + std::to_string(rd()));
        fs::create_directories(dir_);
        const char* src = std::getenv("RDSDE_SOURCE_DIR");
        ASSERT_NE(src, nullptr);
        configs_ = fs::path(src) / "configs";
    }
    void TearDown() override { fs::remove_all(dir_); }

    void write(const fs::path& p, const std::string& text) {
        std::ofstream f(p);
        f << text;
    }

    fs::path dir_;
    fs::path configs_;
};

}  // namespace

TEST_F(CliTest, FbmIsDeterministic) {
    const auto a = cli({"fbm", "--hurst", "0.7", "--steps", "64", "--paths", "2", "--seed", "5"});
    const auto b = cli({"fbm", "--hurst", "0.7", "--steps", "64", "--paths", "2", "--seed", "5"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out.rfind("t,w_1_1,w_2_1\n", 0), 0u);
    const auto c = cli({"fbm", "--hurst", "0.7", "--steps", "64", "--paths", "2", "--seed", "6"});
    EXPECT_NE(a.out, c.out);
}

TEST_F(CliTest, FbmWritesFile) {
    const fs::path out = dir_ / "w.csv";
    const auto r = cli({"fbm", "--hurst", "0.8", "--steps", "16", "--method", "cholesky", "--dim", "2", "--out",
                        out.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const std::string text = slurp(out);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 18);
    EXPECT_EQ(text.rfind("t,w_1_1,w_1_2\n0,0,0\n", 0), 0u);
}

TEST_F(CliTest, FbmHurstRange) {
    const auto r = cli({"fbm", "--hurst", "0.5"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("usage error"), std::string::npos);
    EXPECT_EQ(cli({"fbm", "--hurst", "0.5", "--allow-h-half", "--steps", "8"}).code, 0);
    EXPECT_EQ(cli({"fbm", "--hurst", "1.0"}).code, 1);
    EXPECT_EQ(cli({"fbm"}).code, 1);
}

TEST_F(CliTest, CholeskyCap) {
    const auto r = cli({"fbm", "--hurst", "0.7", "--steps", "4096", "--method", "cholesky"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("error"), std::string::npos);
}

TEST_F(CliTest, SkorokhodOfNegativeRamp) {
    const fs::path in = dir_ / "z.csv";
    write(in, "t,a\n0,0\n0.5,-0.5\n1,-1\n");
    const auto r = cli({"skorokhod", in.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "t,x_a,y_a,z_a\n0,0,0,0\n0.5,0,0.5,-0.5\n1,0,1,-1\n");
}

TEST_F(CliTest, SkorokhodRejectsBadInput) {
    const fs::path in = dir_ / "z.csv";
    write(in, "t,a\n0,-1\n1,0\n");
    const auto r = cli({"skorokhod", in.string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("precondition violated"), std::string::npos);
    write(in, "t,a\n0,0\n0.3,1\n1,0\n");
    EXPECT_EQ(cli({"skorokhod", in.string()}).code, 1);
    EXPECT_EQ(cli({"skorokhod", (dir_ / "missing.csv").string()}).code, 1);
}

TEST_F(CliTest, NormsOfIdentity) {
    const fs::path in = dir_ / "f.csv";
    std::ostringstream csv;
    csv.precision(17);
    csv << "t,f\n";
    for (int k = 0; k <= 4096; ++k) {
        csv << k / 4096.0 << ',' << k / 4096.0 << '\n';
    }
    write(in, csv.str());
    const auto r = cli({"norms", in.string(), "--alpha", "0.4"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["f"]["w_alpha_inf"].get<double>(), 1.0 + 1.0 / 0.6, 1e-3);
    EXPECT_EQ(cli({"norms", in.string(), "--alpha", "0.7"}).code, 1);
}

TEST_F(CliTest, SimulateBundledConfigs) {
    for (const char* name : {"linear_a.cfg", "nonlinear_b.cfg"}) {
        const fs::path out = dir_ / name;
        const auto r = cli({"simulate", (configs_ / name).string(), "--set", "solver.steps_per_delay=32", "--set",
                            "mc.paths=2", "--out", out.string()});
        ASSERT_EQ(r.code, 0) << r.err;
        EXPECT_TRUE(fs::exists(out / "path_0000.csv"));
        EXPECT_TRUE(fs::exists(out / "path_0001.csv"));
        const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
        EXPECT_EQ(manifest["paths"].size(), 2u);
        EXPECT_EQ(manifest["failures"], 0);
        EXPECT_EQ(manifest["invariant_violations"], 0);
        const std::string csv = slurp(out / "path_0000.csv");
        EXPECT_EQ(csv.rfind("t,x_1,y_1,z_1\n-1,", 0), 0u);
    }
}

TEST_F(CliTest, SimulateNegativeEta) {
    const fs::path cfg = dir_ / "neg.cfg";
    write(cfg, "[problem]\nr = 1\nT = 1\neta = \"t\"\ndrift = \"0\"\ndiffusion = \"1\"\n");
    const auto r = cli({"simulate", cfg.string(), "--out", (dir_ / "o").string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("precondition violated"), std::string::npos);
}

TEST_F(CliTest, SimulateConfigErrors) {
    const fs::path cfg = dir_ / "bad.cfg";
    write(cfg, "[problem]\nr = 1\nT = 1\neta = \"1\"\ndrift = \"0\"\ndiffusion = \"1\"\nspeed = 3\n");
    const auto r = cli({"simulate", cfg.string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("bad.cfg:7: problem.speed: unknown key"), std::string::npos);
    EXPECT_EQ(cli({"simulate", (dir_ / "nope.cfg").string()}).code, 1);
}

TEST_F(CliTest, ConvergeNeedsThreeLevels) {
    const auto cfg = (configs_ / "linear_a.cfg").string();
    EXPECT_EQ(cli({"converge", cfg, "--levels", "32,64", "--out", dir_.string()}).code, 1);
    const auto r = cli({"converge", cfg, "--levels", "16,32,64,128", "--set", "solver.scheme=\"euler\"", "--out",
                        dir_.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(slurp(dir_ / "convergence.json"));
    EXPECT_EQ(j["rows"].size(), 4u);
    EXPECT_TRUE(fs::exists(dir_ / "convergence.csv"));
}

TEST_F(CliTest, AuditWarnsButSucceeds) {
    const auto cfg = (configs_ / "nonlinear_b.cfg").string();
    const auto clean = cli({"audit", cfg, "--out", dir_.string()});
    EXPECT_EQ(clean.code, 0);
    EXPECT_NE(clean.out.find("clean"), std::string::npos);
    const auto flagged = cli({"audit", cfg, "--set", "meta.m0=0.1", "--out", dir_.string()});
    EXPECT_EQ(flagged.code, 0);
    EXPECT_NE(flagged.err.find("m0_spatial"), std::string::npos);
    EXPECT_TRUE(fs::exists(dir_ / "audit.json"));
}

TEST_F(CliTest, HelpAndUnknownCommand) {
    EXPECT_EQ(cli({"--help"}).code, 0);
    EXPECT_EQ(cli({"frobnicate"}).code, 1);
}
