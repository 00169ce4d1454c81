#pragma once

#include "config.hpp"

#include <filesystem>
#include <ostream>
#include <string_view>

namespace triq::cli {

enum ExitCode : int { kOk = 0, kIoError = 1, kConfigError = 2, kNumericalError = 3 };

struct RunContext {
    std::filesystem::path out_dir = ".";
    std::ostream* log = nullptr;  // progress and summary lines
};

// decay.csv, decay.svg and, for the built-in states with H_s off and a
// Markovian bath, decay_analytic.csv.
void cmd_decay(const ExperimentConfig& cfg, const RunContext& ctx);
// protected.csv (with protection_factor), unprotected.csv, protect.svg.
void cmd_protect(const ExperimentConfig& cfg, const RunContext& ctx);
// calibrated.conf holding bath.ou_sigma.
void cmd_calibrate(const ExperimentConfig& cfg, const RunContext& ctx);
// tomo_report.json, plus tomo_records.txt when the records were simulated.
void cmd_tomo(const ExperimentConfig& cfg, const RunContext& ctx);
// schedule.csv for one cycle of dd.sequence.
void cmd_schedule_dump(const ExperimentConfig& cfg, const RunContext& ctx);

// Runs `command` and maps exceptions to exit codes, printing the message to
// `err`.
int run_command(std::string_view command, const ExperimentConfig& cfg, const RunContext& ctx, std::ostream& err);

}  // namespace triq::cli
