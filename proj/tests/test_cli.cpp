#include "circlelab/cli.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace circlelab;
using cli::ExperimentConfig;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir()
{
    const fs::path dir = fs::temp_directory_path() / ("circlelab-cli-test-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args)
{
    const std::string cmd = std::string(CIRCLELAB_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& text)
{
    std::ofstream(p, std::ios::binary) << text;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("configs round trip and hash deterministically")
{
    const auto j = json::parse(R"({"module":"arcs","operation":"farey","params":{"n":10},"seed":3,"output":"x.csv"})");
    const auto c = ExperimentConfig::from_json(j);
    CHECK(c.module == "arcs");
    CHECK(c.operation == "farey");
    CHECK(c.seed == 3);
    CHECK(ExperimentConfig::from_json(c.to_json()).hash() == c.hash());
    auto other = c;
    other.output = "y.csv";
    CHECK(other.hash() == c.hash());
    other.seed = 4;
    CHECK(other.hash() != c.hash());
}

TEST_CASE("configs reject unknown keys")
{
    CHECK_THROWS_AS(ExperimentConfig::from_json(json::parse(R"({"module":"arcs","operation":"farey","colour":1})")),
                    cli::UsageError);
    CHECK_THROWS_AS(ExperimentConfig::from_json(json::parse(R"({"module":"arcs","operation":3})")), cli::UsageError);
    ExperimentConfig c;
    c.module = "arcs";
    c.operation = "farey";
    c.params = json{{"n", 5}, {"bogus", 1}};
    CHECK_THROWS_AS(cli::run(c), cli::UsageError);
    CHECK_THROWS_AS(cli::parameters("arcs nothing"), cli::UsageError);
}

TEST_CASE("every registered operation lists its parameters")
{
    const auto ops = cli::operations();
    CHECK(ops.size() >= 15);
    for (const auto& op : ops)
        CHECK_NOTHROW(cli::parameters(op));
}

TEST_CASE("in-process run and CSV layout")
{
    ExperimentConfig c;
    c.module = "arcs";
    c.operation = "farey";
    c.params = json{{"n", 10}};
    const auto r = cli::run(c);
    CHECK(r.rows.size() == 32);
    CHECK(r.passed());
    std::ostringstream out;
    cli::write_csv(r, out);
    const std::string csv = out.str();
    CHECK(csv.rfind("a,q,value\r\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 33);

    const auto side = cli::sidecar(c, r);
    CHECK(side["config_hash"] == c.hash());
    CHECK(side.contains("timestamp"));
}

TEST_CASE("the binary writes CSV and a sidecar")
{
    const auto dir = scratch_dir();
    const auto cfg = dir / "farey.json";
    const auto out = dir / "farey.csv";
    write_file(cfg, R"({"module":"arcs","operation":"farey","params":{"n":10},"seed":0,"output":")" +
                        out.string() + R"("})");
    REQUIRE(run_cli("run --config " + cfg.string()) == 0);
    const std::string first = slurp(out);
    CHECK(std::count(first.begin(), first.end(), '\n') == 33);
    CHECK(fs::exists(dir / "farey.csv.json"));
    const auto side = json::parse(slurp(dir / "farey.csv.json"));
    CHECK(side["config"]["module"] == "arcs");

    REQUIRE(run_cli("run --config " + cfg.string()) == 0);
    CHECK(slurp(out) == first);

    const auto flag_out = dir / "flag.csv";
    REQUIRE(run_cli("arcs farey --n 10 --out " + flag_out.string()) == 0);
    CHECK(slurp(flag_out) == first);
    fs::remove_all(dir);
}

TEST_CASE("the binary rejects bad input with exit code 1")
{
    const auto dir = scratch_dir();
    const auto bad = dir / "bad.json";
    const auto out = dir / "never.csv";
    write_file(bad, "{\"module\": \"arcs\", \"operation\": ");
    CHECK(run_cli("run --config " + bad.string()) == 1);
    CHECK_FALSE(fs::exists(out));
    CHECK(run_cli("arcs farey --n 10 --colour red") == 1);
    CHECK(run_cli("arcs farey --config " + bad.string() + " --out " + out.string()) == 1);
    CHECK_FALSE(fs::exists(out));
    CHECK(run_cli("suite no-such-suite") == 1);
    CHECK(run_cli("run --config " + (dir / "missing.json").string()) == 1);
    fs::remove_all(dir);
}

}
