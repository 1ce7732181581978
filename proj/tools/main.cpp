#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "adaflow/cli.hpp"

namespace {

void add_flag_override(std::vector<std::pair<std::string, std::string>>& overrides,
                       const std::string& key, const std::string& value) {
    if (!value.empty()) overrides.emplace_back(key, value);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"continuous-time adaptive learning simulator"};
    app.require_subcommand(1);

    app.add_subcommand("list", "list available scenarios");

    auto* run = app.add_subcommand("run", "run a scenario and write CSV outputs");
    std::string scenario, out_dir = "out";
    std::string draws, seed, beta, gamma, mu, step, horizon, laws;
    std::vector<std::string> sets;
    run->add_option("scenario", scenario, "builtin scenario name or config file path")->required();
    run->add_option("--out", out_dir, "output directory (default: out)");
    run->add_option("--draws", draws, "Monte-Carlo draw count");
    run->add_option("--seed", seed, "Monte-Carlo seed");
    run->add_option("--beta", beta, "friction gain");
    run->add_option("--gamma", gamma, "learning gain");
    run->add_option("--mu", mu, "normalization weight (or 'auto')");
    run->add_option("--step", step, "integration step (s)");
    run->add_option("--horizon", horizon, "integration horizon (s)");
    run->add_option("--laws", laws, "comma list: first_order,higher_order,wibisono");
    run->add_option("--set", sets, "extra override key=value")->take_all();

    auto* verify = app.add_subcommand("verify", "re-check invariants on a run directory");
    std::string verify_dir;
    verify->add_option("dir", verify_dir, "directory written by 'run'")->required();

    CLI11_PARSE(app, argc, argv);

    if (app.got_subcommand("list")) return adaflow::cmd_list(std::cout);

    if (app.got_subcommand("run")) {
        adaflow::RunOptions opts;
        opts.scenario = scenario;
        opts.out_dir = out_dir;
        add_flag_override(opts.overrides, "mc.draws", draws);
        add_flag_override(opts.overrides, "mc.seed", seed);
        add_flag_override(opts.overrides, "tuner.beta", beta);
        add_flag_override(opts.overrides, "tuner.gamma", gamma);
        add_flag_override(opts.overrides, "tuner.mu", mu);
        add_flag_override(opts.overrides, "sim.step", step);
        add_flag_override(opts.overrides, "sim.horizon", horizon);
        add_flag_override(opts.overrides, "scenario.laws", laws);
        for (const std::string& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) {
                std::cerr << "error: --set expects key=value, got '" << s << "'\n";
                return 2;
            }
            opts.overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
        }
        return adaflow::cmd_run(opts, std::cout);
    }

    return adaflow::cmd_verify(verify_dir, std::cout);
}
