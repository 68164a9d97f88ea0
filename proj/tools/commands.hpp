// SPDX-License-Identifier: Apache-2.0

#ifndef OMORILAB_TOOLS_COMMANDS_HPP
#define OMORILAB_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace omorilab::cli {

struct RunConfig {
    std::string daily_bars;
    std::string minute_bars;
    std::string rates;
    std::string events;
    std::string sectors;
    std::string sim_spec; // simulate subcommand input

    std::vector<double> q_list = {3.0, 4.0, 5.0};
    double lambda1 = 10.0;
    int l1 = 15;
    double lambda2 = 10.0;
    int l2 = 15;
    int window = 20;
    std::vector<std::string> methods = {"individual", "portfolio", "partial"};
    std::size_t group_size = 5;
    int multiday = 1;
    int exclude_open_minutes = 0;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out_dir = ".";
    bool strict = false;
    std::size_t pattern_min_days = 20;
    int shuffles = 200;
    bool dump_pattern = false;
};

// Exit codes: 0 success, 1 validation failure, 2 runtime error.
int cmd_validate(const RunConfig& config);
int cmd_daily(const RunConfig& config);
int cmd_intraday(const RunConfig& config);
int cmd_simulate(const RunConfig& config);
int cmd_calibrate(const RunConfig& config);

} // namespace omorilab::cli

#endif
