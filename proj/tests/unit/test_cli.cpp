#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "nlpg/cli/commands.hpp"
#include "nlpg/cli/config.hpp"
#include "nlpg/cli/pool.hpp"
#include "nlpg/cli/report.hpp"
#include "nlpg/errors.hpp"

namespace fs = std::filesystem;
using namespace nlpg::cli;

namespace {

fs::path tmp_path(const std::string& name) {
    fs::path dir(NLPG_TEST_TMP);
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Data lines of a CSV report (comment lines dropped).
std::vector<std::string> body(const std::string& csv) {
    std::vector<std::string> out;
    std::istringstream is(csv);
    for (std::string line; std::getline(is, line);)
        if (!line.empty() && line[0] != '#') out.push_back(line);
    return out;
}

std::string meta_value(const std::string& csv, const std::string& key) {
    std::istringstream is(csv);
    const std::string prefix = "# " + key + "=";
    for (std::string line; std::getline(is, line);)
        if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
    return "<missing>";
}

int run(std::vector<std::string> args) {
    std::ostringstream err;
    return run_cli(args, err);
}

}  // namespace

TEST(CliConfig, ParsesAndRejectsDuplicates) {
    const ConfigFile c = parse_config("# comment\n\nscenario = laplace\nmesh.list = 2,4\n");
    ASSERT_EQ(c.entries.size(), 2u);
    EXPECT_EQ(c.entries[1].first, "mesh.list");
    EXPECT_EQ(c.entries[1].second, "2,4");
    EXPECT_THROW(parse_config("p = 1\np = 2\n"), nlpg::ConfigError);
    EXPECT_THROW(parse_config("no equals sign\n"), nlpg::ConfigError);
}

TEST(CliConfig, KeyAliases) {
    EXPECT_EQ(option_for_key("solver.tol"), "solver-tol");
    EXPECT_EQ(option_for_key("mesh.list"), "mesh-list");
    EXPECT_EQ(option_for_key("mesh.n_elem"), "n-elem");
    EXPECT_EQ(option_for_key("output.dir"), "output");
    EXPECT_EQ(option_for_key("p_list"), "p-list");
}

TEST(CliConfig, Lists) {
    EXPECT_EQ(parse_size_list("2, 4,8", "m"), (std::vector<std::size_t>{2, 4, 8}));
    EXPECT_EQ(parse_double_list("1.5,2", "p"), (std::vector<double>{1.5, 2.0}));
    EXPECT_THROW(parse_size_list("", "m"), nlpg::ConfigError);
    EXPECT_THROW(parse_double_list("1.5,x", "p"), nlpg::ConfigError);
}

TEST(CliReport, CsvAndJson) {
    Report r;
    r.scenario = "demo";
    r.meta = {{"p", "1.5"}};
    r.columns = {"a", "b"};
    r.add_row({1.0, std::string("x")});
    r.add_row({std::nan(""), std::int64_t{3}});
    std::ostringstream csv, js;
    write_csv(csv, r);
    write_json(js, r);
    EXPECT_NE(csv.str().find("# p=1.5"), std::string::npos);
    EXPECT_EQ(body(csv.str()), (std::vector<std::string>{"a,b", "1.00000000000e+00,x", "nan,3"}));
    const auto j = nlohmann::json::parse(js.str());
    EXPECT_EQ(j["scenario"], "demo");
    EXPECT_EQ(j["rows"].size(), 2u);
}

TEST(CliPool, ResultsKeepIndexOrder) {
    const auto res = parallel_map<int>(
        20, 4, [](std::size_t i) { if (i == 7) throw std::runtime_error("boom"); return static_cast<int>(i * i); },
        [](const std::exception&) { return false; });
    for (std::size_t i = 0; i < 20; ++i) {
        if (i == 7) {
            EXPECT_FALSE(res[i].value.has_value());
            EXPECT_EQ(res[i].error, "boom");
        } else {
            EXPECT_EQ(*res[i].value, static_cast<int>(i * i));
        }
    }
}

TEST(Cli, ConstantsProducesSixtyRows) {
    const fs::path out = tmp_path("constants.csv");
    ASSERT_EQ(run({"constants", "--p-min", "1.02", "--p-max", "50", "--p-steps", "60", "--grid-ao", "2000",
                   "--grid-best", "91", "--output", out.string()}),
              kOk);
    EXPECT_EQ(body(slurp(out)).size(), 61u);   // header + 60 rows
}

TEST(Cli, LaplaceSmoothRateNearOne) {
    const fs::path out = tmp_path("laplace.json");
    ASSERT_EQ(run({"laplace", "--smooth", "--p", "1.5", "--k", "1", "--mesh-list", "2,4,8,16,32,64", "--format", "json",
                   "--output", out.string()}),
              kOk);
    const auto j = nlohmann::json::parse(slurp(out));
    const auto& last = j["rows"].back();
    EXPECT_NEAR(last["energy_rate"].get<double>(), 1.0, 0.05);
}

TEST(Cli, EmptyMeshListIsConfigError) {
    EXPECT_EQ(run({"laplace", "--mesh-list", ""}), kConfigError);
    EXPECT_EQ(run({"advect", "--mesh-list", ","}), kConfigError);
}

TEST(Cli, UnknownConfigKeyIsConfigError) {
    const fs::path cfg = tmp_path("bad.cfg");
    std::ofstream(cfg) << "scenario = laplace\nnot_a_key = 3\n";
    EXPECT_EQ(run({"--config", cfg.string()}), kConfigError);
}

TEST(Cli, FlagsOverrideConfig) {
    const fs::path cfg = tmp_path("lap.cfg");
    std::ofstream(cfg) << "scenario = laplace\np = 1.5\nmesh.list = 2,4,8\n";
    const fs::path out = tmp_path("lap_override.csv");
    ASSERT_EQ(run({"--config", cfg.string(), "--output", out.string(), "laplace", "--p", "1.75"}), kOk);
    const std::string csv = slurp(out);
    EXPECT_EQ(meta_value(csv, "p"), "1.75");
    EXPECT_EQ(meta_value(csv, "mesh-list"), "2,4,8");
}

TEST(Cli, DeterministicOutput) {
    const fs::path a = tmp_path("det_a.csv"), b = tmp_path("det_b.csv");
    const std::vector<std::string> args{"advect", "--p-list", "1.5,2", "--mesh-list", "4,8,16"};
    auto with = [&](const fs::path& o, const std::string& jobs) {
        auto v = args;
        v.insert(v.end(), {"--jobs", jobs, "--output", o.string()});
        return v;
    };
    ASSERT_EQ(run(with(a, "1")), kOk);
    ASSERT_EQ(run(with(b, "3")), kOk);
    EXPECT_EQ(body(slurp(a)), body(slurp(b)));
}

TEST(Cli, VerifyDualityPasses) { EXPECT_EQ(run({"verify", "duality"}), kOk); }

TEST(Cli, UnknownSubcommandFails) { EXPECT_NE(run({"frobnicate"}), kOk); }
