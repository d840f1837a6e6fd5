// Copyright 2026 The primesq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "primesq/experiments.hpp"
#include "primesq_cli/cli.hpp"

namespace primesq::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> v;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) v.push_back(line);
    return v;
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::path(::testing::TempDir()) / ("primesq_cli_" + name);
    fs::remove_all(dir);
    return dir;
}

TEST(Cli, CovEnumeration) {
    const auto r = run({"cov", "--n1", "2", "--n2", "6", "--h1", "1", "--h2", "2", "--q", "1", "--method", "enum"});
    EXPECT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(r.out, "0\n");
    const auto exact = run({"cov", "--n1", "5", "--n2", "5", "--h1", "1", "--h2", "2", "--q", "1", "--method",
                            "enum", "--exact"});
    EXPECT_EQ(exact.out, "-2/25\n");
}

TEST(Cli, CovPrimorials) {
    const auto compact = run({"cov", "--n1", "P#2", "--n2", "P#3", "--h1", "5", "--h2", "16", "--q", "16",
                              "--method", "compact"});
    const auto enumerated = run({"cov", "--n1", "6", "--n2", "30", "--h1", "5", "--h2", "16", "--q", "16",
                                 "--method", "enum"});
    EXPECT_EQ(compact.code, kExitOk) << compact.err;
    EXPECT_EQ(compact.out, enumerated.out);
    const auto automatic = run({"cov", "--n1", "P#2", "--n2", "P#3", "--h1", "5", "--h2", "16", "--q", "16"});
    EXPECT_EQ(automatic.out, enumerated.out);
}

TEST(Cli, CovErrors) {
    EXPECT_EQ(run({"cov", "--n1", "3", "--n2", "6", "--h1", "1", "--h2", "2", "--q", "1", "--method", "threesum"}).code,
              kExitUsage);
    EXPECT_EQ(run({"cov", "--n1", "x", "--n2", "6", "--h1", "1", "--h2", "2", "--q", "1"}).code, kExitUsage);
    EXPECT_EQ(run({"cov", "--n1", "P#9", "--n2", "P#9", "--h1", "1", "--h2", "2", "--q", "1", "--method", "enum"}).code,
              kExitResource);
    EXPECT_EQ(run({"cov", "--n1", "2", "--n2", "6", "--h1", "0", "--h2", "2", "--q", "1"}).code, kExitUsage);
}

TEST(Cli, SieveTable) {
    const auto r = run({"sieve", "--k-max", "3"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0], "k,p_k,p_k1,l_k,pi_k");
    EXPECT_EQ(rows[1], "1,2,3,5,2");
    EXPECT_EQ(rows[3], "3,5,7,24,6");
    EXPECT_EQ(run({"sieve", "--k-max", "3", "--segment-kib", "1"}).out, r.out);
}

TEST(Cli, Stats) {
    const auto r = run({"stats", "--k-max", "30", "--tau"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 31u);
    EXPECT_EQ(rows[0].rfind("k,x,pi_k,li_k,tilde_pi_k,tau_k,mu_k,sigma_k,pi_bar_k", 0), 0u);
    // k = 1: x = 9, pi_1 = 2, tilde_pi = 2.5, tau = 2.5
    EXPECT_EQ(rows[1].rfind("1,9,2,", 0), 0u);
    EXPECT_NE(rows[1].find(",2.5,2.5,"), std::string::npos);
    // sigma_3 is undefined, so sigma and pi_bar are empty fields
    EXPECT_NE(rows[3].find(",,"), std::string::npos);
}

TEST(Cli, ModelReproducible) {
    const std::vector<std::string> args{"model", "--kind", "correlated", "--k-max", "5", "--realizations", "2",
                                        "--seed", "7"};
    const auto a = run(args);
    ASSERT_EQ(a.code, kExitOk) << a.err;
    EXPECT_EQ(a.out, run(args).out);
    const auto rows = lines(a.out);
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_EQ(rows[0], "k,count_1,count_2");

    const fs::path dir = scratch("model");
    const auto written = run({"model", "--kind", "constrained", "--k-max", "5", "--seed", "7", "--out", dir.string()});
    ASSERT_EQ(written.code, kExitOk) << written.err;
    EXPECT_TRUE(fs::exists(dir / "model_constrained.csv"));
    std::ifstream sidecar(dir / "model_constrained.json");
    const auto j = nlohmann::json::parse(sidecar);
    EXPECT_EQ(j["seed"], 7);
    EXPECT_EQ(j["K"], 5);
    fs::remove_all(dir);

    EXPECT_EQ(run({"model", "--kind", "gaussian", "--k-max", "5"}).code, kExitUsage);
}

TEST(Cli, FigureRatios) {
    const fs::path dir = scratch("ratios");
    const auto r = run({"figure", "--id", "ratios", "--k-max", "1000", "--stride", "100", "--out", dir.string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_TRUE(fs::exists(dir / "ratios.csv"));
    EXPECT_TRUE(fs::exists(dir / "ratios.manifest.json"));
    std::ifstream in(dir / "ratios.manifest.json");
    const auto m = nlohmann::json::parse(in);
    EXPECT_EQ(m["figure_id"], "ratios");
    EXPECT_EQ(m["K_max"], 1000);
    EXPECT_EQ(m["truncated"], false);
    fs::remove_all(dir);
}

TEST(Cli, FigureUsesEnvironmentDirectory) {
    const fs::path dir = scratch("env");
    ::setenv(kOutputDirEnv, dir.c_str(), 1);
    const auto r = run({"--threads", "1", "figure", "--id", "pik_curves", "--k-max", "20"});
    ::unsetenv(kOutputDirEnv);
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_TRUE(fs::exists(dir / "pik_curves.csv"));
    fs::remove_all(dir);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run({}).code, kExitUsage);
    EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
    EXPECT_EQ(run({"sieve"}).code, kExitUsage);
    EXPECT_EQ(run({"sieve", "--k-max", "0"}).code, kExitUsage);
    EXPECT_EQ(run({"figure", "--id", "nope", "--k-max", "5", "--out", scratch("nope").string()}).code, kExitUsage);
    EXPECT_EQ(run({"figure", "--id", "ratios", "--k-max", "5", "--separation", "sideways"}).code, kExitUsage);
    const auto r = run({"figure", "--id", "ratios", "--k-max", "5", "--d1", "9", "--d2", "3", "--out",
                        scratch("d").string()});
    EXPECT_EQ(r.code, kExitUsage);
    EXPECT_FALSE(r.err.empty());
}

TEST(Cli, VersionAndHelp) {
    const auto v = run({"--version"});
    EXPECT_EQ(v.code, kExitOk);
    EXPECT_EQ(v.out, library_version() + "\n");
    const auto h = run({"--help"});
    EXPECT_EQ(h.code, kExitOk);
    EXPECT_NE(h.out.find("figure"), std::string::npos);
}

}  // namespace
}  // namespace primesq::cli
