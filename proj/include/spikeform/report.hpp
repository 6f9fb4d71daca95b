// Experiment reports: target-level theory-vs-empirical records with verdicts,
// rendered as JSON (machine round-trip), aligned text tables, and RFC-4180
// CSV; plus the per-replicate CSV dump.  A report parsed back from JSON can be
// re-verified and yields identical verdicts.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spikeform/config.hpp"
#include "spikeform/simulate.hpp"

namespace spikeform::rep {

struct RunInfo {
    std::string experiment;  // "spiked" | "quadform" | "forms"
    int R_requested = 0;
    int R_effective = 0;
    int R_discarded = 0;
    int sep_warnings = 0;
    std::uint64_t master_seed = 0;
    double z = 4.0;
    std::string centering = "empirical";
    // experiment-specific echoes (0 / empty when not applicable)
    std::size_t p = 0, n = 0, k = 0;
    int powers = 0;
    double y = 0.0;
    std::string dist;
    double rho1 = 0.0, rho2 = 0.0;
    std::string matrix_a, matrix_b;
};

struct ReportTarget {
    std::string label;
    std::string kind;       // target grammar kind, or "cov" / "mean" for vector experiments
    std::size_t i = 0, j = 0;  // 1-based display indices (0 = unused)
    double theory_asymptotic = 0.0, empirical_asymptotic = 0.0, se_asymptotic = 0.0;
    double theory_raw = 0.0, empirical_raw = 0.0, se_raw = 0.0;
    double zscore = 0.0;
    bool pass = false;
    int R = 0;
};

struct Report {
    int schema = 1;
    RunInfo run;
    std::vector<ReportTarget> targets;
    bool budget_ok = true;
    bool no_targets = false;
    bool all_pass = false;
};

// Builders for the three experiments.  Verdicts use strict |emp-theory| < z*SE.
Report make_report(const cfg::ExperimentConfig& config, const sim::SpikedResult& result,
                   const sim::VerifyResult& verify);
Report make_report(const cfg::ExperimentConfig& config, const sim::QuadformResult& result);
Report make_report(const cfg::ExperimentConfig& config, const sim::FormsResult& result,
                   const la::Matrix& A, const la::Matrix& B);

std::string to_json(const Report& r);
Report from_json(const std::string& text);  // throws ConfigError on schema problems

std::string to_table(const Report& r);  // aligned columns + run summary
std::string to_csv(const Report& r);    // RFC-4180 target table, CRLF, header row

// Recompute z-scores and verdicts from the stored raw statistics at a new
// threshold; returns the resulting all_pass.
bool reverify(Report& r, double z);

// Per-replicate dump: header "replicate,l_1..l_M,proj_1..proj_M", CRLF records.
void write_replicate_csv(const std::string& path, const sim::SpikedResult& result);

}  // namespace spikeform::rep
