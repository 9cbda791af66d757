// circlelab command-line entry point.
//
//   circlelab arcs farey --n 10
//   circlelab ergodic run --config exp.json --out results.csv
//   circlelab run --config full_config.json
//   circlelab suite smoke

#include "circlelab/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>

using circlelab::cli::ExperimentConfig;
using circlelab::cli::UsageError;
using nlohmann::json;

namespace {

// Keys whose values stay strings even when they look like numbers.
const std::set<std::string> text_keys{"poly", "input"};

json flag_value(const std::string& key, const std::string& text)
{
    if (text_keys.count(key))
        return text;
    try {
        return json::parse(text);
    } catch (const json::exception&) {
        return text;
    }
}

struct OpCommand {
    std::string module, operation;
    std::map<std::string, std::string> values;
    bool verify = false;
    std::string config, out;
    std::uint64_t seed = 0;
    CLI::App* app = nullptr;
};

// A parameters file may also carry "seed" and "output".
json read_params_file(const std::string& path, std::optional<std::uint64_t>& seed, std::string& out)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot read config '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError("malformed JSON in '" + path + "': " + e.what());
    }
    if (!j.is_object())
        throw UsageError("config must be a JSON object");
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned())
            throw UsageError("seed must be a nonnegative integer");
        seed = j["seed"].get<std::uint64_t>();
        j.erase("seed");
    }
    if (j.contains("output")) {
        if (!j["output"].is_string())
            throw UsageError("output must be a string");
        if (out.empty())
            out = j["output"].get<std::string>();
        j.erase("output");
    }
    return j;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"circlelab: exact and numerical experiments on polynomial ergodic averages"};
    app.require_subcommand(1);

    std::vector<std::unique_ptr<OpCommand>> commands;
    std::map<std::string, CLI::App*> modules;
    for (const auto& name : circlelab::cli::operations()) {
        const auto space = name.find(' ');
        auto cmd = std::make_unique<OpCommand>();
        cmd->module = name.substr(0, space);
        cmd->operation = name.substr(space + 1);
        if (!modules.count(cmd->module)) {
            modules[cmd->module] = app.add_subcommand(cmd->module, cmd->module + " operations");
            modules[cmd->module]->require_subcommand(1);
        }
        cmd->app = modules[cmd->module]->add_subcommand(cmd->operation);
        for (const auto& key : circlelab::cli::parameters(name)) {
            if (key == "verify")
                cmd->app->add_flag("--verify", cmd->verify, "verify the result");
            else
                cmd->app->add_option("--" + key, cmd->values[key]);
        }
        cmd->app->add_option("--config", cmd->config, "JSON file with the parameters (and optionally seed)");
        cmd->app->add_option("--seed", cmd->seed, "RNG seed");
        cmd->app->add_option("--out", cmd->out, "CSV output path; a .json sidecar is written next to it");
        commands.push_back(std::move(cmd));
    }

    std::string full_config;
    auto* run_cmd = app.add_subcommand("run", "run a full experiment config {module, operation, params, seed, output}");
    run_cmd->add_option("--config", full_config)->required();

    std::string suite_name;
    auto* suite_cmd = app.add_subcommand("suite", "run the acceptance or smoke battery");
    suite_cmd->add_option("name", suite_name)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 1;
    }

    if (suite_cmd->parsed())
        return circlelab::cli::run_suite(suite_name, std::cout, std::cerr);

    try {
        ExperimentConfig config;
        if (run_cmd->parsed()) {
            config = ExperimentConfig::load(full_config);
        } else {
            OpCommand* cmd = nullptr;
            for (auto& c : commands)
                if (c->app->parsed())
                    cmd = c.get();
            config.module = cmd->module;
            config.operation = cmd->operation;
            std::optional<std::uint64_t> file_seed;
            if (!cmd->config.empty())
                config.params = read_params_file(cmd->config, file_seed, cmd->out);
            config.seed = cmd->app->count("--seed") ? cmd->seed : file_seed.value_or(0);
            for (const auto& [key, text] : cmd->values)
                if (cmd->app->count("--" + key))
                    config.params[key] = flag_value(key, text);
            if (cmd->verify)
                config.params["verify"] = true;
            config.output = cmd->out;
        }
        return circlelab::cli::execute(config, std::cout, std::cerr);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
