#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "epr/analysis.hpp"
#include "epr/config.hpp"

namespace epr::cli {

// Exit codes shared by the commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitBadConfig = 2;
inline constexpr int kExitIoError = 3;
inline constexpr int kExitFitFlagged = 4;

// Writes the four frames (image/fourier x delta_c/delta_d) as text matrices
// plus P5 graymaps and a manifest into cfg.out_dir.
int cmd_simulate(const RunConfig& cfg, std::ostream& log);

// Reads the four frame text files from cfg.out_dir, runs the pipeline and
// writes report.txt. Exit 4 when a fit is flagged non-converged.
int cmd_analyze(const RunConfig& cfg, std::ostream& log);

// Theory-side verification suite: transform identities, factorization
// conditions, W against P proportionality, sampled against analytic sigmas,
// Schmidt number, uncertainty product and witness. One pass/fail line per
// check. chirp_alpha != 0 injects a phase chirp that must break the
// factorization condition (the check then expects failure). dump_amplitudes
// writes the position/momentum states into cfg.out_dir in binary form.
int cmd_verify(const RunConfig& cfg, std::ostream& log, double chirp_alpha = 0.0,
               bool dump_amplitudes = false);

struct SeedOutcome {
    uint64_t seed = 0;
    double u_hbar = 0.0;
    double f_percent = 0.0;
    double d = 0.0;
    bool degraded = false;
    std::string report_text;
};

struct McSummary {
    int seeds = 0;
    double u_median = 0.0, u_p05 = 0.0, u_p95 = 0.0;
    double f_median = 0.0;
    double d_median = 0.0, d_p05 = 0.0, d_p95 = 0.0;
    double u_th = 0.0;
    double converged_fraction = 0.0;
    std::vector<SeedOutcome> outcomes;
};

// Seed sweep seed .. seed+seeds-1 over the full simulate+analyze path; the
// theory profiles are built once and only detection varies per seed.
McSummary run_monte_carlo(const RunConfig& cfg);

// Writes per-seed reports and a median/percentile summary to cfg.out_dir.
int cmd_report(const RunConfig& cfg, std::ostream& log);

}  // namespace epr::cli
