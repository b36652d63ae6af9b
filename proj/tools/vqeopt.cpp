#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vqeopt/deriv.hpp"
#include "vqeopt/harness.hpp"
#include "vqeopt/reference.hpp"
#include "vqeopt/rng.hpp"
#include "vqeopt/simulator.hpp"

namespace {

using namespace vqeopt;

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

std::string slurp_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<double> probe_theta(const ExperimentConfig& cfg,
                                const Circuit& circuit) {
    if (cfg.initial_parameters) return *cfg.initial_parameters;
    UniformRng rng(mix_seed(cfg.seeds.front(), 0x1a17));
    std::vector<double> theta(static_cast<std::size_t>(circuit.n_params));
    constexpr double half_pi = std::numbers::pi / 2.0;
    for (double& x : theta) x = rng.next_in(-half_pi, half_pi);
    return theta;
}

int cmd_run(const std::string& config_path, const std::string& out_override,
            int workers) {
    const ExperimentConfig cfg = load_config(config_path);
    const std::string out_dir =
        out_override.empty() ? cfg.output_dir : out_override;

    std::printf("running '%s': %zu seed(s), %d iteration(s), %s mode\n",
                cfg.name.c_str(), cfg.seeds.size(), cfg.iterations,
                cfg.shots ? "sampled" : "exact");
    const auto records = run_experiment(cfg, workers);

    int failed = 0;
    for (const RunRecord& r : records) {
        if (!r.error.empty()) {
            ++failed;
            std::printf("  seed %llu: FAILED (%s)\n",
                        static_cast<unsigned long long>(r.seed),
                        r.error.c_str());
            continue;
        }
        std::size_t fallbacks = 0;
        for (const StepRecord& s : r.steps) {
            if (!s.subproblem_success) ++fallbacks;
        }
        std::printf("  seed %llu: final energy % .10f  evals %lld  "
                    "fallback rate %.3f  (%.2fs)\n",
                    static_cast<unsigned long long>(r.seed), r.final_energy,
                    static_cast<long long>(r.account.total()),
                    r.steps.empty() ? 0.0
                                    : static_cast<double>(fallbacks) /
                                          static_cast<double>(r.steps.size()),
                    r.wall_time_seconds);
    }

    export_records_json(records, out_dir + "/" + cfg.name + "_records.json");
    const Summary summary = aggregate(records);
    export_summary_csv(summary, out_dir, cfg.name);
    std::printf("wrote %s/%s_records.json and per-iteration / per-evaluation "
                "summaries\n",
                out_dir.c_str(), cfg.name.c_str());
    if (failed == static_cast<int>(records.size())) {
        return kExitRuntime;
    }
    return 0;
}

int cmd_eig(const std::string& hamiltonian_path) {
    const Observable obs = parse_hamiltonian(slurp_file(hamiltonian_path));
    const GroundTruth gt = ground_state(obs);
    std::printf("qubits:         %d\n", obs.n_qubits());
    std::printf("terms:          %zu\n", obs.terms().size());
    std::printf("ground energy:  %.12f\n", gt.energy);
    std::printf("degenerate:     %s (subspace dimension %zu)\n",
                gt.degenerate ? "yes" : "no", gt.subspace.size());
    return 0;
}

int cmd_gradcheck(const std::string& config_path) {
    const ExperimentConfig cfg = load_config(config_path);
    const Observable obs = build_hamiltonian(cfg.hamiltonian);
    const Circuit circuit = build_ansatz(cfg.ansatz);
    if (cfg.shots) {
        std::printf("note: gradcheck always runs in exact mode\n");
    }
    CostFunction cost(circuit, obs, ShotConfig::exact_mode(), nullptr);
    const auto theta = probe_theta(cfg, circuit);
    const auto ps = parameter_shift_gradient(cost, theta);
    const auto fd = finite_difference_gradient(cost, theta, 1e-5);

    double max_err = 0.0;
    std::printf("%6s %22s %22s %12s\n", "param", "parameter-shift",
                "finite-difference", "abs diff");
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const double err = std::abs(ps[i] - fd[i]);
        max_err = std::max(max_err, err);
        std::printf("%6zu %22.14e %22.14e %12.3e\n", i, ps[i], fd[i], err);
    }
    std::printf("max component error: %.3e (reference bound 1e-6)\n", max_err);
    return max_err < 1e-6 ? 0 : kExitRuntime;
}

int cmd_metriccheck(const std::string& config_path) {
    const ExperimentConfig cfg = load_config(config_path);
    const Circuit circuit = build_ansatz(cfg.ansatz);
    const auto theta = probe_theta(cfg, circuit);

    const MetricMatrix full = full_metric(circuit, theta);
    std::printf("full metric: %ld x %ld\n",
                static_cast<long>(full.entries.rows()),
                static_cast<long>(full.entries.cols()));

    double worst = 0.0;
    bool checked = false;
    try {
        const MetricMatrix block = block_diag_metric(circuit, theta);
        double block_err = 0.0;
        for (const LayerSpec& layer : circuit.layers) {
            if (!layer.rotation_layer) continue;
            for (const LayerGenerator& a : layer.generators) {
                for (const LayerGenerator& b : layer.generators) {
                    block_err = std::max(
                        block_err,
                        std::abs(block.entries(a.param_index, b.param_index) -
                                 full.entries(a.param_index, b.param_index)));
                }
            }
        }
        std::printf("block-diagonal vs full (within-layer blocks): "
                    "max error %.3e\n",
                    block_err);
        worst = std::max(worst, block_err);
        checked = true;
    } catch (const std::exception& e) {
        std::printf("block-diagonal metric not applicable: %s\n", e.what());
    }

    if (cfg.ansatz.kind == AnsatzSpec::Kind::example1) {
        const MetricMatrix closed = example1_metric_closed_form(
            {theta[0], theta[1], theta[2]});
        const double err =
            (full.entries - closed.entries).cwiseAbs().maxCoeff();
        std::printf("full vs closed form: max error %.3e\n", err);
        worst = std::max(worst, err);
        checked = true;
    }

    if (!checked) {
        std::printf("no independent metric reference for this ansatz; "
                    "reporting symmetry only\n");
        worst = (full.entries - full.entries.transpose()).cwiseAbs().maxCoeff();
        std::printf("symmetry residual: %.3e\n", worst);
    }
    std::printf("max discrepancy: %.3e (reference bound 1e-9)\n", worst);
    return worst < 1e-9 ? 0 : kExitRuntime;
}

int cmd_sweep(const std::string& config_path, const std::string& grid_json,
              const std::string& out_override, int workers) {
    const ExperimentConfig cfg = load_config(config_path);
    std::map<std::string, std::vector<double>> grid;
    try {
        const nlohmann::json j = nlohmann::json::parse(grid_json);
        if (!j.is_object()) {
            throw ConfigError("grid: must be a JSON object");
        }
        for (const auto& [key, values] : j.items()) {
            if (!values.is_array()) {
                throw ConfigError("grid." + key + ": must be an array");
            }
            for (const auto& v : values) {
                if (!v.is_number()) {
                    throw ConfigError("grid." + key +
                                      ": entries must be numbers");
                }
                grid[key].push_back(v.get<double>());
            }
        }
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("grid: invalid JSON: ") + e.what());
    }

    const SweepResult result = grid_sweep(cfg, grid, workers);
    std::printf("%s", sweep_csv(result).c_str());

    const std::string out_dir =
        out_override.empty() ? cfg.output_dir : out_override;
    std::filesystem::create_directories(out_dir);
    const std::string path = out_dir + "/" + cfg.name + "_sweep.csv";
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << sweep_csv(result);
    std::printf("wrote %s\n", path.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variational eigensolver optimization toolkit: gradient "
                 "descent, natural gradient and conjugate natural gradient "
                 "on a dense statevector simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir, hamiltonian_path, grid_json;
    int workers = 1;

    CLI::App* run = app.add_subcommand("run", "Run an experiment config");
    run->add_option("--config", config_path, "experiment JSON config")
        ->required();
    run->add_option("--out", out_dir, "output directory (defaults to the "
                                      "config's output_dir)");
    run->add_option("--workers", workers, "concurrent seed runs");

    CLI::App* eig = app.add_subcommand(
        "eig", "Exact ground state of a Hamiltonian file");
    eig->add_option("--hamiltonian", hamiltonian_path,
                    "Hamiltonian text file")
        ->required();

    CLI::App* gradcheck = app.add_subcommand(
        "gradcheck", "Compare parameter-shift and finite-difference "
                     "gradients for a config");
    gradcheck->add_option("--config", config_path, "experiment JSON config")
        ->required();

    CLI::App* metriccheck = app.add_subcommand(
        "metriccheck", "Cross-check full, block-diagonal and closed-form "
                       "metrics for a config");
    metriccheck->add_option("--config", config_path, "experiment JSON config")
        ->required();

    CLI::App* sweep =
        app.add_subcommand("sweep", "Hyperparameter grid sweep");
    sweep->add_option("--config", config_path, "experiment JSON config")
        ->required();
    sweep->add_option("--grid", grid_json,
                      "JSON object: {\"alpha0\": [0.01, 0.1], ...}")
        ->required();
    sweep->add_option("--out", out_dir, "output directory");
    sweep->add_option("--workers", workers, "concurrent seed runs");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, out_dir, workers);
        if (eig->parsed()) return cmd_eig(hamiltonian_path);
        if (gradcheck->parsed()) return cmd_gradcheck(config_path);
        if (metriccheck->parsed()) return cmd_metriccheck(config_path);
        if (sweep->parsed())
            return cmd_sweep(config_path, grid_json, out_dir, workers);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return kExitValidation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
    return 0;
}
