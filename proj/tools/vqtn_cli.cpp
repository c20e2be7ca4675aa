// Copyright 2026 The vqtn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// vqtn: experiment runner. Exit codes: 0 ok, 2 bad config or data, 3 resource cap refused.

#include <iostream>

#include "CLI11.hpp"
#include "vqtn/experiments.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitResource = 3;

struct Flags {
    std::string config;
    std::vector<std::size_t> n, layers;
    double gamma = -1.0;
    std::size_t seeds = 0, jobs = 0;
    std::string out;
};

CLI::App *add_command(CLI::App &app, const std::string &name, const std::string &help, Flags &f) {
    auto *sub = app.add_subcommand(name, help);
    sub->add_option("--config", f.config, "JSON config file (defaults apply when omitted)")->check(CLI::ExistingFile);
    sub->add_option("--n", f.n, "override N (list)");
    sub->add_option("--layers", f.layers, "override L (list)");
    sub->add_option("--gamma", f.gamma, "override the noise strength");
    sub->add_option("--seeds", f.seeds, "number of random parameter sets");
    sub->add_option("--jobs", f.jobs, "worker threads");
    sub->add_option("--out", f.out, "output directory");
    return sub;
}

}  // namespace

int main(int argc, char **argv) {
    using namespace vqtn;
    CLI::App app{"vqtn experiment runner"};
    app.require_subcommand(1);
    Flags f;
    for (auto [name, help] : {std::pair{"entropy", "entanglement of circuit coefficient tensors"},
                              std::pair{"truncation", "bond truncation errors of coefficient tensors"},
                              std::pair{"regress", "cMPS and circuit regression tasks"},
                              std::pair{"kernel", "quantum and product kernel ridge regression"}})
        add_command(app, name, help, f);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    try {
        experiments::ExperimentConfig cfg;
        if (!f.config.empty()) cfg = experiments::ExperimentConfig::load(f.config);
        if (cfg.command.empty()) cfg.command = command;
        if (cfg.command != command)
            throw ConfigError("config is for '" + cfg.command + "', not '" + command + "'");
        experiments::Overrides o;
        if (!f.n.empty()) o.n = f.n;
        if (!f.layers.empty()) o.layers = f.layers;
        if (f.gamma >= 0.0) o.gamma = f.gamma;
        if (f.seeds) o.seeds = f.seeds;
        if (f.jobs) o.jobs = f.jobs;
        if (!f.out.empty()) o.out = f.out;
        experiments::apply_overrides(cfg, o);
        const auto result = experiments::run(cfg);
        experiments::write_result(cfg.out, cfg, result);
        std::cout << "wrote " << result.tables.size() << " table(s), summary.json and manifest.json to " << cfg.out << '\n';
        return 0;
    } catch (const ResourceLimitError &e) {
        std::cerr << "refused: " << e.what() << '\n';
        return kExitResource;
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DataError &e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const nlohmann::json::exception &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
