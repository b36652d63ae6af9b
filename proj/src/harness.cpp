#include "vqeopt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "vqeopt/rng.hpp"
#include "vqeopt/simulator.hpp"

namespace vqeopt {

using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open file: " + path);
    }
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

const json& require_field(const json& j, const char* key,
                          const std::string& path) {
    if (!j.is_object() || !j.contains(key)) {
        throw ConfigError("missing required field: " + path);
    }
    return j.at(key);
}

double require_number(const json& j, const char* key,
                      const std::string& path) {
    const json& v = require_field(j, key, path);
    if (!v.is_number()) {
        throw ConfigError("field must be a number: " + path);
    }
    return v.get<double>();
}

int require_int(const json& j, const char* key, const std::string& path) {
    const json& v = require_field(j, key, path);
    if (!v.is_number_integer()) {
        throw ConfigError("field must be an integer: " + path);
    }
    return v.get<int>();
}

std::string require_string(const json& j, const char* key,
                           const std::string& path) {
    const json& v = require_field(j, key, path);
    if (!v.is_string()) {
        throw ConfigError("field must be a string: " + path);
    }
    return v.get<std::string>();
}

HamiltonianSpec parse_hamiltonian_spec(const json& j) {
    HamiltonianSpec spec;
    const std::string kind = require_string(j, "kind", "hamiltonian.kind");
    if (kind == "example1") {
        spec.kind = HamiltonianSpec::Kind::example1;
        spec.n = 2;
    } else if (kind == "heisenberg") {
        spec.kind = HamiltonianSpec::Kind::heisenberg;
        spec.n = require_int(j, "n", "hamiltonian.n");
        spec.coupling = j.value("J", -1.0);
        spec.field = j.value("h", -1.0);
        if (spec.n < 2) {
            throw ConfigError("hamiltonian.n: need at least 2 sites");
        }
    } else if (kind == "file") {
        spec.kind = HamiltonianSpec::Kind::file;
        spec.path = require_string(j, "path", "hamiltonian.path");
    } else {
        throw ConfigError("hamiltonian.kind: unknown kind '" + kind + "'");
    }
    return spec;
}

AnsatzSpec parse_ansatz_spec(const json& j) {
    AnsatzSpec spec;
    const std::string kind = require_string(j, "kind", "ansatz.kind");
    if (kind == "example1") {
        spec.kind = AnsatzSpec::Kind::example1;
        spec.n = 2;
    } else if (kind == "efficient_su2") {
        spec.kind = AnsatzSpec::Kind::efficient_su2;
        spec.n = require_int(j, "n", "ansatz.n");
        spec.depth = require_int(j, "depth", "ansatz.depth");
        if (spec.depth < 2) {
            throw ConfigError("ansatz.depth: must be >= 2 (rotation blocks, "
                              "parameters = 2*n*depth)");
        }
    } else if (kind == "so4") {
        spec.kind = AnsatzSpec::Kind::so4;
        spec.n = require_int(j, "n", "ansatz.n");
        spec.layers = require_int(j, "layers", "ansatz.layers");
        spec.initial_basis = j.value("initial_basis", std::uint64_t{0});
        if (j.contains("pairing")) {
            const json& p = j.at("pairing");
            if (p.is_string()) {
                spec.pairing = p.get<std::string>();
                if (spec.pairing != "brick" && spec.pairing != "even") {
                    throw ConfigError("ansatz.pairing: unknown scheme '" +
                                      spec.pairing + "'");
                }
            } else if (p.is_array()) {
                spec.pairing = "custom";
                for (const json& pr : p) {
                    if (!pr.is_array() || pr.size() != 2 ||
                        !pr[0].is_number_integer() ||
                        !pr[1].is_number_integer()) {
                        throw ConfigError(
                            "ansatz.pairing: custom pairing must be a list "
                            "of [a, b] qubit pairs");
                    }
                    spec.custom_pairs.emplace_back(pr[0].get<int>(),
                                                   pr[1].get<int>());
                }
            } else {
                throw ConfigError("ansatz.pairing: must be a string or a "
                                  "pair list");
            }
        }
    } else {
        throw ConfigError("ansatz.kind: unknown kind '" + kind + "'");
    }
    return spec;
}

OptimizerConfig parse_optimizer_spec(const json& j, int iterations) {
    OptimizerConfig cfg;
    const std::string kind = require_string(j, "kind", "optimizer.kind");
    if (kind == "gd") {
        cfg.kind = OptimizerKind::gd;
    } else if (kind == "qng") {
        cfg.kind = OptimizerKind::qng;
    } else if (kind == "cqng") {
        cfg.kind = OptimizerKind::cqng;
    } else {
        throw ConfigError("optimizer.kind: unknown kind '" + kind + "'");
    }
    if (cfg.kind != OptimizerKind::gd || j.contains("metric_mode")) {
        const std::string mode = j.value("metric_mode", std::string("full"));
        if (mode == "full") {
            cfg.metric_mode = MetricMode::full;
        } else if (mode == "block_diagonal") {
            cfg.metric_mode = MetricMode::block_diagonal;
        } else {
            throw ConfigError("optimizer.metric_mode: unknown mode '" + mode +
                              "'");
        }
    }
    if (cfg.kind == OptimizerKind::cqng) {
        cfg.alpha0 = require_number(j, "alpha0", "optimizer.alpha0");
        cfg.beta0 = require_number(j, "beta0", "optimizer.beta0");
        cfg.eta = j.value("eta", 0.01);
    } else {
        cfg.eta = require_number(j, "eta", "optimizer.eta");
        cfg.alpha0 = j.value("alpha0", 0.01);
        cfg.beta0 = j.value("beta0", 0.1);
    }
    cfg.lambda = j.value("lambda", 0.01);
    cfg.subproblem_max_evals = j.value("subproblem_max_evals", 25);
    cfg.force_subproblem_fallback =
        j.value("force_subproblem_fallback", false);
    const std::string rule =
        j.value("update_rule", std::string("argmin_point"));
    if (rule == "algorithm1") {
        cfg.update_rule = UpdateRule::algorithm1;
    } else if (rule == "argmin_point") {
        cfg.update_rule = UpdateRule::argmin_point;
    } else {
        throw ConfigError("optimizer.update_rule: unknown rule '" + rule +
                          "'");
    }
    cfg.max_iterations = std::max(1, iterations);
    try {
        validate(cfg);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

int hamiltonian_qubits(const HamiltonianSpec& spec) {
    switch (spec.kind) {
    case HamiltonianSpec::Kind::example1: return 2;
    case HamiltonianSpec::Kind::heisenberg: return spec.n;
    case HamiltonianSpec::Kind::file:
        return parse_hamiltonian(slurp(spec.path)).n_qubits();
    }
    return 0;
}

int ansatz_qubits(const AnsatzSpec& spec) {
    return spec.kind == AnsatzSpec::Kind::example1 ? 2 : spec.n;
}

std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

} // namespace

ExperimentConfig parse_config_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("config root must be a JSON object");
    }

    ExperimentConfig cfg;
    cfg.name = require_string(j, "name", "name");
    cfg.hamiltonian =
        parse_hamiltonian_spec(require_field(j, "hamiltonian", "hamiltonian"));
    cfg.ansatz = parse_ansatz_spec(require_field(j, "ansatz", "ansatz"));

    const json& it = require_field(j, "iterations", "iterations");
    if (!it.is_number_integer() || it.get<int>() < 0) {
        throw ConfigError("iterations: must be a non-negative integer");
    }
    cfg.iterations = it.get<int>();

    cfg.optimizer = parse_optimizer_spec(
        require_field(j, "optimizer", "optimizer"), cfg.iterations);

    if (j.contains("shots")) {
        const json& s = j.at("shots");
        if (s.is_string() && s.get<std::string>() == "exact") {
            cfg.shots.reset();
        } else if (s.is_number_integer() && s.get<std::int64_t>() >= 1) {
            cfg.shots = s.get<std::int64_t>();
        } else {
            throw ConfigError("shots: must be \"exact\" or a positive "
                              "integer");
        }
    }

    const json& seeds = require_field(j, "seeds", "seeds");
    if (!seeds.is_array() || seeds.empty()) {
        throw ConfigError("seeds: must be a nonempty array");
    }
    for (const json& s : seeds) {
        if (!s.is_number_integer()) {
            throw ConfigError("seeds: entries must be integers");
        }
        cfg.seeds.push_back(s.get<std::uint64_t>());
    }

    if (j.contains("initial_parameters")) {
        const json& p = j.at("initial_parameters");
        if (!p.is_array()) {
            throw ConfigError("initial_parameters: must be an array");
        }
        std::vector<double> theta;
        for (const json& x : p) {
            if (!x.is_number()) {
                throw ConfigError("initial_parameters: entries must be "
                                  "numbers");
            }
            theta.push_back(x.get<double>());
        }
        cfg.initial_parameters = std::move(theta);
    }

    if (j.contains("diagnostics")) {
        const json& d = j.at("diagnostics");
        cfg.diagnostics.conjugacy = d.value("conjugacy", false);
        cfg.diagnostics.fidelity = d.value("fidelity", false);
    }
    cfg.optimizer.record_conjugacy = cfg.diagnostics.conjugacy;
    cfg.output_dir = j.value("output_dir", std::string("out"));

    const int hq = hamiltonian_qubits(cfg.hamiltonian);
    const int aq = ansatz_qubits(cfg.ansatz);
    if (hq != aq) {
        throw ConfigError("hamiltonian acts on " + std::to_string(hq) +
                          " qubits but ansatz has " + std::to_string(aq));
    }
    if (cfg.initial_parameters) {
        const Circuit probe = build_ansatz(cfg.ansatz);
        if (static_cast<int>(cfg.initial_parameters->size()) !=
            probe.n_params) {
            throw ConfigError(
                "initial_parameters: expected " +
                std::to_string(probe.n_params) + " values, got " +
                std::to_string(cfg.initial_parameters->size()));
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    return parse_config_json(slurp(path));
}

std::string config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["name"] = cfg.name;
    switch (cfg.hamiltonian.kind) {
    case HamiltonianSpec::Kind::example1:
        j["hamiltonian"] = {{"kind", "example1"}};
        break;
    case HamiltonianSpec::Kind::heisenberg:
        j["hamiltonian"] = {{"kind", "heisenberg"},
                            {"n", cfg.hamiltonian.n},
                            {"J", cfg.hamiltonian.coupling},
                            {"h", cfg.hamiltonian.field}};
        break;
    case HamiltonianSpec::Kind::file:
        j["hamiltonian"] = {{"kind", "file"}, {"path", cfg.hamiltonian.path}};
        break;
    }
    switch (cfg.ansatz.kind) {
    case AnsatzSpec::Kind::example1:
        j["ansatz"] = {{"kind", "example1"}};
        break;
    case AnsatzSpec::Kind::efficient_su2:
        j["ansatz"] = {{"kind", "efficient_su2"},
                       {"n", cfg.ansatz.n},
                       {"depth", cfg.ansatz.depth}};
        break;
    case AnsatzSpec::Kind::so4: {
        json a = {{"kind", "so4"},
                  {"n", cfg.ansatz.n},
                  {"layers", cfg.ansatz.layers},
                  {"initial_basis", cfg.ansatz.initial_basis}};
        if (cfg.ansatz.pairing == "custom") {
            json pairs = json::array();
            for (const auto& pr : cfg.ansatz.custom_pairs) {
                pairs.push_back({pr.first, pr.second});
            }
            a["pairing"] = pairs;
        } else {
            a["pairing"] = cfg.ansatz.pairing;
        }
        j["ansatz"] = a;
        break;
    }
    }
    const OptimizerConfig& oc = cfg.optimizer;
    j["optimizer"] = {
        {"kind", oc.kind == OptimizerKind::gd     ? "gd"
                 : oc.kind == OptimizerKind::qng  ? "qng"
                                                  : "cqng"},
        {"metric_mode", oc.metric_mode == MetricMode::full ? "full"
                                                           : "block_diagonal"},
        {"eta", oc.eta},
        {"lambda", oc.lambda},
        {"alpha0", oc.alpha0},
        {"beta0", oc.beta0},
        {"subproblem_max_evals", oc.subproblem_max_evals},
        {"update_rule", oc.update_rule == UpdateRule::algorithm1
                            ? "algorithm1"
                            : "argmin_point"},
        {"force_subproblem_fallback", oc.force_subproblem_fallback}};
    if (cfg.shots) {
        j["shots"] = *cfg.shots;
    } else {
        j["shots"] = "exact";
    }
    j["seeds"] = cfg.seeds;
    j["iterations"] = cfg.iterations;
    if (cfg.initial_parameters) {
        j["initial_parameters"] = *cfg.initial_parameters;
    }
    j["diagnostics"] = {{"conjugacy", cfg.diagnostics.conjugacy},
                        {"fidelity", cfg.diagnostics.fidelity}};
    j["output_dir"] = cfg.output_dir;
    return j.dump(2);
}

std::string config_hash(const ExperimentConfig& cfg) {
    return fnv1a_hex(config_to_json(cfg));
}

Observable build_heisenberg(int n, double coupling, double field) {
    if (n < 2 || n > kMaxQubits) {
        throw std::invalid_argument("heisenberg: site count must be in [2, " +
                                    std::to_string(kMaxQubits) + "]");
    }
    std::vector<Observable::Term> terms;
    const std::string id(static_cast<std::size_t>(n), 'I');
    for (int i = 0; i + 1 < n; ++i) {
        for (char axis : {'X', 'Y', 'Z'}) {
            std::string w = id;
            w[static_cast<std::size_t>(i)] = axis;
            w[static_cast<std::size_t>(i + 1)] = axis;
            terms.push_back({coupling, PauliWord(w)});
        }
    }
    for (int i = 0; i < n; ++i) {
        std::string w = id;
        w[static_cast<std::size_t>(i)] = 'X';
        terms.push_back({field, PauliWord(w)});
    }
    return Observable(n, std::move(terms));
}

Observable build_hamiltonian(const HamiltonianSpec& spec) {
    switch (spec.kind) {
    case HamiltonianSpec::Kind::example1:
        return Observable(2, {{0.4, PauliWord("ZI")},
                              {0.4, PauliWord("IZ")},
                              {0.2, PauliWord("XX")}});
    case HamiltonianSpec::Kind::heisenberg:
        return build_heisenberg(spec.n, spec.coupling, spec.field);
    case HamiltonianSpec::Kind::file:
        return parse_hamiltonian(slurp(spec.path));
    }
    throw std::invalid_argument("unknown hamiltonian kind");
}

Circuit build_ansatz(const AnsatzSpec& spec) {
    switch (spec.kind) {
    case AnsatzSpec::Kind::example1: return build_example1_ansatz();
    case AnsatzSpec::Kind::efficient_su2:
        return build_efficient_su2(spec.n, spec.depth - 1);
    case AnsatzSpec::Kind::so4:
        if (spec.pairing == "custom") {
            return build_so4_ansatz(spec.n, spec.layers, spec.custom_pairs,
                                    spec.initial_basis);
        }
        return build_so4_ansatz(spec.n, spec.layers,
                                spec.pairing == "brick" ? So4Pairing::brick
                                                        : So4Pairing::even,
                                spec.initial_basis);
    }
    throw std::invalid_argument("unknown ansatz kind");
}

namespace {

std::vector<double> initial_theta(const ExperimentConfig& cfg,
                                  const Circuit& circuit,
                                  std::uint64_t seed) {
    if (cfg.initial_parameters) {
        if (static_cast<int>(cfg.initial_parameters->size()) !=
            circuit.n_params) {
            throw std::invalid_argument("initial_parameters length does not "
                                        "match the ansatz parameter count");
        }
        return *cfg.initial_parameters;
    }
    // Random initialization, uniform in [-pi/2, pi/2], one stream per seed.
    UniformRng rng(mix_seed(seed, 0x1a17));
    std::vector<double> theta(static_cast<std::size_t>(circuit.n_params));
    constexpr double half_pi = std::numbers::pi / 2.0;
    for (double& x : theta) x = rng.next_in(-half_pi, half_pi);
    return theta;
}

RunRecord run_single_seed(const ExperimentConfig& cfg,
                          const Observable& observable, const Circuit& circuit,
                          const GroundTruth* truth, const std::string& hash,
                          std::uint64_t seed) {
    const auto t_start = std::chrono::steady_clock::now();
    RunRecord rec;
    rec.config_hash = hash;
    rec.seed = seed;

    EvalAccount account;
    const ShotConfig shot_cfg =
        cfg.shots ? ShotConfig::sampled(*cfg.shots, seed)
                  : ShotConfig::exact_mode();
    CostFunction cost(circuit, observable, shot_cfg, &account);
    OptimizerState state;
    state.theta = initial_theta(cfg, circuit, seed);

    try {
        for (int t = 0; t < cfg.iterations; ++t) {
            auto [next, step] = optimizer_step(cost, state, cfg.optimizer);
            if (truth) {
                step.fidelity = ground_space_fidelity(
                    *truth, run_circuit(circuit, state.theta));
            }
            rec.steps.push_back(std::move(step));
            state = std::move(next);
        }
        rec.final_energy = cost.exact_energy(state.theta);
        if (truth) {
            rec.final_fidelity = ground_space_fidelity(
                *truth, run_circuit(circuit, state.theta));
        }
    } catch (const std::exception& e) {
        rec.error = e.what();
        try {
            rec.final_energy = cost.exact_energy(state.theta);
        } catch (const std::exception&) {
            rec.final_energy = std::numeric_limits<double>::quiet_NaN();
        }
    }
    rec.final_theta = state.theta;
    rec.account = account;
    rec.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      t_start)
            .count();
    return rec;
}

} // namespace

std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg,
                                      int workers) {
    validate(cfg.optimizer);
    if (cfg.seeds.empty()) {
        throw std::invalid_argument("experiment has no seeds");
    }
    const Observable observable = build_hamiltonian(cfg.hamiltonian);
    const Circuit circuit = build_ansatz(cfg.ansatz);
    if (observable.n_qubits() != circuit.n_qubits) {
        throw std::invalid_argument("hamiltonian and ansatz qubit counts "
                                    "disagree");
    }

    std::optional<GroundTruth> truth;
    if (cfg.diagnostics.fidelity && observable.n_qubits() <= 14) {
        truth = ground_state(observable);
    }
    const std::string hash = config_hash(cfg);

    std::vector<RunRecord> records(cfg.seeds.size());
    const int n_workers = std::max(
        1, std::min<int>(workers, static_cast<int>(cfg.seeds.size())));
    if (n_workers == 1) {
        for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
            records[i] =
                run_single_seed(cfg, observable, circuit,
                                truth ? &*truth : nullptr, hash, cfg.seeds[i]);
        }
    } else {
        std::atomic<std::size_t> next{0};
        auto work = [&] {
            for (std::size_t i = next.fetch_add(1); i < cfg.seeds.size();
                 i = next.fetch_add(1)) {
                records[i] = run_single_seed(cfg, observable, circuit,
                                             truth ? &*truth : nullptr, hash,
                                             cfg.seeds[i]);
            }
        };
        std::vector<std::thread> pool;
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
    }
    return records;
}

SweepResult grid_sweep(const ExperimentConfig& cfg,
                       const std::map<std::string, std::vector<double>>& grid,
                       int workers) {
    if (grid.empty()) {
        throw std::invalid_argument("grid sweep: empty grid");
    }
    for (const auto& [key, values] : grid) {
        if (key != "eta" && key != "alpha0" && key != "beta0" &&
            key != "lambda") {
            throw std::invalid_argument("grid sweep: unknown key '" + key +
                                        "' (expected eta, alpha0, beta0 or "
                                        "lambda)");
        }
        if (values.empty()) {
            throw std::invalid_argument("grid sweep: empty value list for '" +
                                        key + "'");
        }
    }

    // Deterministic cross product (keys in map order).
    std::vector<std::map<std::string, double>> assignments{{}};
    for (const auto& [key, values] : grid) {
        std::vector<std::map<std::string, double>> grown;
        for (const auto& base : assignments) {
            for (double v : values) {
                auto a = base;
                a[key] = v;
                grown.push_back(std::move(a));
            }
        }
        assignments = std::move(grown);
    }

    SweepResult result;
    for (const auto& assignment : assignments) {
        ExperimentConfig point = cfg;
        for (const auto& [key, v] : assignment) {
            if (key == "eta") point.optimizer.eta = v;
            if (key == "alpha0") point.optimizer.alpha0 = v;
            if (key == "beta0") point.optimizer.beta0 = v;
            if (key == "lambda") point.optimizer.lambda = v;
        }
        const auto records = run_experiment(point, workers);
        SweepEntry entry;
        entry.assignment = assignment;
        entry.summary = aggregate(records);
        double sum = 0.0;
        int ok = 0;
        for (const RunRecord& r : records) {
            if (r.error.empty() && std::isfinite(r.final_energy)) {
                sum += r.final_energy;
                ++ok;
            }
        }
        entry.mean_final_energy =
            ok > 0 ? sum / ok : std::numeric_limits<double>::infinity();
        result.entries.push_back(std::move(entry));
    }

    std::stable_sort(result.entries.begin(), result.entries.end(),
                     [](const SweepEntry& a, const SweepEntry& b) {
                         return a.mean_final_energy < b.mean_final_energy;
                     });
    result.best = cfg;
    for (const auto& [key, v] : result.entries.front().assignment) {
        if (key == "eta") result.best.optimizer.eta = v;
        if (key == "alpha0") result.best.optimizer.alpha0 = v;
        if (key == "beta0") result.best.optimizer.beta0 = v;
        if (key == "lambda") result.best.optimizer.lambda = v;
    }
    return result;
}

std::string sweep_csv(const SweepResult& result) {
    std::ostringstream out;
    out << "rank,eta,alpha0,beta0,lambda,mean_final_energy\n";
    int rank = 1;
    for (const SweepEntry& e : result.entries) {
        auto get = [&](const char* key, double fallback) {
            const auto it = e.assignment.find(key);
            return it == e.assignment.end() ? fallback : it->second;
        };
        char buf[256];
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      rank++, get("eta", result.best.optimizer.eta),
                      get("alpha0", result.best.optimizer.alpha0),
                      get("beta0", result.best.optimizer.beta0),
                      get("lambda", result.best.optimizer.lambda),
                      e.mean_final_energy);
        out << buf;
    }
    return out.str();
}

} // namespace vqeopt
