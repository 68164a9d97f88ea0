// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

using omorilab::cli::RunConfig;

void add_common_options(CLI::App* cmd, RunConfig& config) {
    cmd->add_option("--q", config.q_list, "Volatility thresholds (ascending)")->delimiter(',');
    cmd->add_option("--lambda", config.lambda1, "Look-back decay (trading days) for the speculation metric");
    cmd->add_option("--l1", config.l1, "Look-back horizon (trading days) for the speculation metric");
    cmd->add_option("--lambda2", config.lambda2, "Decay (trading days) for the surprise metric windows");
    cmd->add_option("--l2", config.l2, "Horizon (trading days) for the surprise metric windows");
    cmd->add_option("--window", config.window, "Event-window half-width in trading days");
    cmd->add_option("--method", config.methods,
                    "Ensemble methods: individual, portfolio, partial (repeatable)")
        ->delimiter(',');
    cmd->add_option("--group-size", config.group_size, "Partial-combination group size M");
    cmd->add_option("--multiday", config.multiday, "Days per event span (announcement day first)");
    cmd->add_option("--exclude-open-minutes", config.exclude_open_minutes,
                    "Drop the first N minutes of continuation days");
    cmd->add_option("--seed", config.seed, "Master seed");
    cmd->add_option("--threads", config.threads, "Worker threads for per-(stock, event) work");
    cmd->add_option("--out", config.out_dir, "Output directory")->envname("OMORI_LAB_OUT");
    cmd->add_flag("--strict", config.strict, "Turn fill warnings into errors");
    cmd->add_option("--pattern-min-days", config.pattern_min_days,
                    "Minimum days in the intraday-pattern estimation set");
    cmd->add_option("--shuffles", config.shuffles, "Shuffle replicates for profile dispersion bars");
    cmd->add_flag("--dump-pattern", config.dump_pattern, "Write patterns/<ticker>.csv");
}

void add_input_options(CLI::App* cmd, RunConfig& config) {
    cmd->add_option("--daily-bars", config.daily_bars, "Daily OHLCV CSV");
    cmd->add_option("--minute-bars", config.minute_bars, "1-minute bar CSV");
    cmd->add_option("--rates", config.rates, "Rates CSV (target, effective, 6m T-Bill)");
    cmd->add_option("--events", config.events, "Announcement events CSV");
    cmd->add_option("--sectors", config.sectors, "Ticker-to-sector CSV");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Market response to scheduled announcements: spread metrics, volatility "
                 "event detection, and power-law relaxation fits"};
    app.require_subcommand(1);

    RunConfig config;

    auto* validate = app.add_subcommand("validate", "Check input files against their schemas");
    add_input_options(validate, config);
    add_common_options(validate, config);

    auto* daily = app.add_subcommand("daily", "Daily-scale analysis: metrics, profile, regression");
    add_input_options(daily, config);
    add_common_options(daily, config);

    auto* intraday = app.add_subcommand("intraday", "Intraday analysis: relaxation fits around events");
    add_input_options(intraday, config);
    add_common_options(intraday, config);

    auto* simulate = app.add_subcommand("simulate", "Generate synthetic inputs with known ground truth");
    simulate->add_option("spec", config.sim_spec, "JSON simulation spec")->required();
    add_common_options(simulate, config);

    auto* calibrate = app.add_subcommand("calibrate", "Run the estimator bias/coverage suite");
    add_common_options(calibrate, config);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (validate->parsed()) return omorilab::cli::cmd_validate(config);
    if (daily->parsed()) return omorilab::cli::cmd_daily(config);
    if (intraday->parsed()) return omorilab::cli::cmd_intraday(config);
    if (simulate->parsed()) return omorilab::cli::cmd_simulate(config);
    if (calibrate->parsed()) return omorilab::cli::cmd_calibrate(config);
    return 1;
}
