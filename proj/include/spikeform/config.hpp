// Experiment configuration: a flat `key = value` text format with explicit
// schema versioning, strict validation (unknown and duplicate keys rejected),
// and helpers for the target-list grammar and dense-matrix CSV files.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "spikeform/linalg.hpp"
#include "spikeform/simulate.hpp"

namespace spikeform::cfg {

enum class ExperimentKind { Spiked, Quadform, Forms };

struct ExperimentConfig {
    int schema = 0;
    ExperimentKind experiment = ExperimentKind::Spiked;
    std::string source;  // file path or "<string>"

    // spiked experiment (also carries R / master_seed / workers for the others)
    sim::SpikedConfig spiked;
    bool has_pn = false;      // p and n were given (required for running)
    bool has_y = false;       // y was given directly (enough for theory targets)
    double y_direct = 0.0;
    std::vector<sim::Target> targets;
    sim::Centering centering = sim::Centering::Empirical;
    double z = 4.0;
    std::string csv_dump;     // optional per-replicate CSV path

    // quadform experiment
    sim::QuadformConfig quadform;

    // forms experiment
    sim::FormsConfig forms;
    std::string matrix_a, matrix_b;  // dense-matrix CSV paths

    // y for theory evaluation: y_direct if given, else p/n.
    double theory_y() const;
    // throws ConfigError unless the config can actually be run
    void require_runnable() const;
};

// Parse a config from text / file.  Errors carry "<source>:<line>: message".
ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& source_name = "<string>");
ExperimentConfig parse_config_file(const std::string& path);

// Target-list grammar: comma-separated `kind:i` (1-based) or `eig_pair_cov:i:j`.
// Kinds: eig_mean, eig_var, eig_pair_cov, proj_mean, proj_var, proj_eig_cov.
std::vector<sim::Target> parse_targets(const std::string& text);
std::string target_spec(const sim::Target& t);  // inverse of one token
std::string target_kind_name(sim::TargetKind kind);

// Dense square-matrix CSV: first record is the dimension n, then n records of
// n comma-separated values (row-major).
la::Matrix read_matrix_csv(const std::string& path);
void write_matrix_csv(const std::string& path, const la::Matrix& m);

}  // namespace spikeform::cfg
