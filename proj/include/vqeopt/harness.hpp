#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vqeopt/accounting.hpp"
#include "vqeopt/circuit.hpp"
#include "vqeopt/optimizer.hpp"
#include "vqeopt/pauli.hpp"
#include "vqeopt/reference.hpp"

namespace vqeopt {

struct HamiltonianSpec {
    enum class Kind { example1, heisenberg, file };
    Kind kind = Kind::example1;
    int n = 2;       // heisenberg
    double coupling = -1.0;
    double field = -1.0;
    std::string path; // file
};

struct AnsatzSpec {
    enum class Kind { example1, efficient_su2, so4 };
    Kind kind = Kind::example1;
    int n = 2;
    int depth = 2;  // efficient_su2: rotation blocks; parameters = 2*n*depth
    int layers = 1; // so4
    std::string pairing = "brick"; // "brick" | "even" | custom list
    std::vector<std::pair<int, int>> custom_pairs;
    std::uint64_t initial_basis = 0;
};

struct DiagnosticsConfig {
    bool conjugacy = false;
    bool fidelity = false;
};

struct ExperimentConfig {
    std::string name;
    HamiltonianSpec hamiltonian;
    AnsatzSpec ansatz;
    OptimizerConfig optimizer;
    std::optional<std::int64_t> shots; // nullopt = exact
    std::vector<std::uint64_t> seeds;
    int iterations = 100;
    std::optional<std::vector<double>> initial_parameters;
    DiagnosticsConfig diagnostics;
    std::string output_dir = "out";
};

/// Validation failure in a config file; message names the offending field.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config_json(const std::string& json_text);
std::string config_to_json(const ExperimentConfig& cfg); // canonical form
std::string config_hash(const ExperimentConfig& cfg);

Observable build_hamiltonian(const HamiltonianSpec& spec);
Observable build_heisenberg(int n, double coupling, double field);
Circuit build_ansatz(const AnsatzSpec& spec);

struct RunRecord {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::vector<StepRecord> steps;
    double final_energy = 0.0;
    std::optional<double> final_fidelity;
    double wall_time_seconds = 0.0;
    std::vector<double> final_theta;
    EvalAccount account;
    std::string error; // nonempty when the run aborted
};

/// Runs every seed of the experiment (concurrently when workers > 1).
/// A failing seed records its error and leaves the other seeds untouched.
std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg,
                                      int workers = 1);

struct SummaryRow {
    int iteration = 0;
    double cumulative_evals = 0.0;
    double energy_mean = 0.0;
    double energy_median = 0.0;
    double q25 = 0.0;
    double q75 = 0.0;
    std::optional<double> fidelity_mean;
    double alpha_mean = 0.0;
    double beta_mean = 0.0;
};

struct Summary {
    std::vector<SummaryRow> by_iteration;
    /// Same statistics on the union grid of cumulative evaluation counts,
    /// with last-value interpolation per run; `iteration` is the row index.
    std::vector<SummaryRow> by_evals;
    bool has_fidelity = false;
    double fallback_rate = 0.0; // fraction of steps that took the fallback
};

Summary aggregate(const std::vector<RunRecord>& records);

std::string summary_csv(const std::vector<SummaryRow>& rows,
                        bool has_fidelity);
void export_summary_csv(const Summary& summary, const std::string& dir,
                        const std::string& stem);

std::string records_to_json(const std::vector<RunRecord>& records);
std::vector<RunRecord> records_from_json(const std::string& json_text);
void export_records_json(const std::vector<RunRecord>& records,
                         const std::string& path);
std::vector<RunRecord> import_records_json(const std::string& path);

struct SweepEntry {
    std::map<std::string, double> assignment;
    double mean_final_energy = 0.0;
    Summary summary;
};

struct SweepResult {
    ExperimentConfig best;
    std::vector<SweepEntry> entries; // ranked, best first
};

/// Cross-product sweep over optimizer hyperparameters. Valid grid keys:
/// eta, alpha0, beta0, lambda.
SweepResult grid_sweep(const ExperimentConfig& cfg,
                       const std::map<std::string, std::vector<double>>& grid,
                       int workers = 1);

std::string sweep_csv(const SweepResult& result);

} // namespace vqeopt
