#pragma once

#include <string>
#include <vector>

#include "routersim/config.hpp"
#include "routersim/protocol.hpp"

namespace routersim::harness {

// Strict flat dotted-key config text: `key = value` lines, `#` comments.
// Unknown keys, duplicate keys, and invariant violations are errors.
SimConfig parse_config(const std::string& text);
SimConfig parse_config_file(const std::string& path);

// The full key table with defaults and provenance notes, as printed by
// the `defaults` subcommand.
std::string defaults_table();

struct SummaryRow {
    std::string architecture;
    int m = 0;
    double l_km = 0;
    int runs = 0;
    double rate_hz_mean = 0, rate_hz_sem = 0;
    double fidelity_mean = 0, fidelity_sem = 0;
    double infidelity_mean = 0;
    double mean_idle_cycles = 0;     // mean of (left + right) idle cycles per delivery
    double mean_stored_attempts = 0;
    std::uint64_t master_seed = 0;
};

struct PointResult {
    SummaryRow row;
    // Per-run simulation results, in run order.
    std::vector<protocol::RunResult> runs;
};

// Derives per-run seeds from (master_seed, run index) and aggregates
// mean/SEM statistics over the independent runs.
PointResult run_point(const SimConfig& cfg, int runs);
SummaryRow summarize(const SimConfig& cfg, const std::vector<protocol::RunResult>& runs);

struct SweepGrid {
    std::vector<int> m_values;
    std::vector<double> l_values_km;
    std::vector<Architecture> architectures;
    int runs_per_point = 3;
};

std::vector<SummaryRow> sweep(const SweepGrid& grid, const SimConfig& base);

std::string to_csv(const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> parse_csv(const std::string& text);

struct OracleReport {
    bool pass = true;
    std::vector<std::string> lines;
};

// Registered analytic scenarios: "order-stat", "attempt-noise",
// "teleport-noiseless", "geometric-dephasing", "stored-attempts".
// Throws std::invalid_argument for an unregistered scenario.
OracleReport oracle_check(const std::string& scenario, const SimConfig& cfg);
std::vector<std::string> oracle_scenarios();

}  // namespace routersim::harness
