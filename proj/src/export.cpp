#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "vqeopt/harness.hpp"

namespace vqeopt {

using nlohmann::json;

namespace {

constexpr const char* kRecordsSchema = "vqeopt.records.v1";

/// Sorting before summation makes the statistics invariant under record
/// permutation, bit for bit.
double mean_of_sorted(std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

/// Linear-interpolation quantile (type 7) on an already-sorted vector.
double quantile_sorted(const std::vector<double>& v, double p) {
    const std::size_t n = v.size();
    if (n == 1) return v[0];
    const double h = p * static_cast<double>(n - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, n - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

SummaryRow make_row(int iteration, double cumulative,
                    std::vector<double> energies, std::vector<double> alphas,
                    std::vector<double> betas,
                    std::vector<double>* fidelities) {
    SummaryRow row;
    row.iteration = iteration;
    row.cumulative_evals = cumulative;
    std::sort(energies.begin(), energies.end());
    double sum = 0.0;
    for (double e : energies) sum += e;
    row.energy_mean = sum / static_cast<double>(energies.size());
    row.energy_median = quantile_sorted(energies, 0.5);
    row.q25 = quantile_sorted(energies, 0.25);
    row.q75 = quantile_sorted(energies, 0.75);
    row.alpha_mean = mean_of_sorted(alphas);
    row.beta_mean = mean_of_sorted(betas);
    if (fidelities) {
        row.fidelity_mean = mean_of_sorted(*fidelities);
    }
    return row;
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

json step_to_json(const StepRecord& s) {
    json j;
    j["t"] = s.t;
    j["energy"] = s.energy;
    j["alpha"] = s.alpha;
    j["beta"] = s.beta;
    j["subproblem_success"] = s.subproblem_success;
    j["subproblem_evals"] = s.subproblem_evals;
    j["grad_norm"] = s.grad_norm;
    j["circuit_evals_cumulative"] = s.circuit_evals_cumulative;
    j["conjugacy_residual"] =
        s.conjugacy_residual ? json(*s.conjugacy_residual) : json(nullptr);
    j["fidelity"] = s.fidelity ? json(*s.fidelity) : json(nullptr);
    return j;
}

StepRecord step_from_json(const json& j) {
    StepRecord s;
    s.t = j.at("t").get<int>();
    s.energy = j.at("energy").get<double>();
    s.alpha = j.at("alpha").get<double>();
    s.beta = j.at("beta").get<double>();
    s.subproblem_success = j.at("subproblem_success").get<bool>();
    s.subproblem_evals = j.at("subproblem_evals").get<int>();
    s.grad_norm = j.at("grad_norm").get<double>();
    s.circuit_evals_cumulative =
        j.at("circuit_evals_cumulative").get<std::int64_t>();
    if (!j.at("conjugacy_residual").is_null()) {
        s.conjugacy_residual = j.at("conjugacy_residual").get<double>();
    }
    if (!j.at("fidelity").is_null()) {
        s.fidelity = j.at("fidelity").get<double>();
    }
    return s;
}

json record_to_json(const RunRecord& r) {
    json j;
    j["config_hash"] = r.config_hash;
    j["seed"] = r.seed;
    j["final_energy"] = r.final_energy;
    j["final_fidelity"] =
        r.final_fidelity ? json(*r.final_fidelity) : json(nullptr);
    j["wall_time_seconds"] = r.wall_time_seconds;
    j["final_theta"] = r.final_theta;
    j["account"] = {{"energy_evals", r.account.energy_evals},
                    {"gradient_evals", r.account.gradient_evals},
                    {"metric_evals", r.account.metric_evals},
                    {"subproblem_evals", r.account.subproblem_evals}};
    j["error"] = r.error;
    json steps = json::array();
    for (const StepRecord& s : r.steps) steps.push_back(step_to_json(s));
    j["steps"] = std::move(steps);
    return j;
}

RunRecord record_from_json(const json& j) {
    RunRecord r;
    r.config_hash = j.at("config_hash").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.final_energy = j.at("final_energy").get<double>();
    if (!j.at("final_fidelity").is_null()) {
        r.final_fidelity = j.at("final_fidelity").get<double>();
    }
    r.wall_time_seconds = j.at("wall_time_seconds").get<double>();
    r.final_theta = j.at("final_theta").get<std::vector<double>>();
    const json& a = j.at("account");
    r.account.energy_evals = a.at("energy_evals").get<std::int64_t>();
    r.account.gradient_evals = a.at("gradient_evals").get<std::int64_t>();
    r.account.metric_evals = a.at("metric_evals").get<std::int64_t>();
    r.account.subproblem_evals = a.at("subproblem_evals").get<std::int64_t>();
    r.error = j.at("error").get<std::string>();
    for (const json& s : j.at("steps")) {
        r.steps.push_back(step_from_json(s));
    }
    return r;
}

} // namespace

Summary aggregate(const std::vector<RunRecord>& records) {
    if (records.empty()) {
        throw std::invalid_argument("aggregate: no records");
    }
    std::vector<const RunRecord*> ok;
    for (const RunRecord& r : records) {
        if (r.error.empty()) ok.push_back(&r);
    }
    if (ok.empty()) {
        throw std::runtime_error("aggregate: every run failed");
    }
    const std::size_t n_steps = ok.front()->steps.size();
    for (const RunRecord* r : ok) {
        if (r->steps.size() != n_steps) {
            throw std::invalid_argument(
                "aggregate: records have mismatched step counts");
        }
    }

    Summary summary;
    summary.has_fidelity = true;
    std::size_t fallback_steps = 0;
    std::size_t total_steps = 0;
    for (const RunRecord* r : ok) {
        for (const StepRecord& s : r->steps) {
            summary.has_fidelity = summary.has_fidelity && s.fidelity.has_value();
            ++total_steps;
            if (!s.subproblem_success) ++fallback_steps;
        }
    }
    summary.fallback_rate =
        total_steps == 0
            ? 0.0
            : static_cast<double>(fallback_steps) /
                  static_cast<double>(total_steps);
    if (n_steps == 0) {
        return summary;
    }

    for (std::size_t t = 0; t < n_steps; ++t) {
        std::vector<double> energies, alphas, betas, fidelities, cums;
        for (const RunRecord* r : ok) {
            const StepRecord& s = r->steps[t];
            energies.push_back(s.energy);
            alphas.push_back(s.alpha);
            betas.push_back(s.beta);
            cums.push_back(static_cast<double>(s.circuit_evals_cumulative));
            if (summary.has_fidelity) fidelities.push_back(*s.fidelity);
        }
        const double cum_mean = mean_of_sorted(cums);
        summary.by_iteration.push_back(make_row(
            static_cast<int>(t), cum_mean, std::move(energies),
            std::move(alphas), std::move(betas),
            summary.has_fidelity ? &fidelities : nullptr));
    }

    // Union evaluation grid with last-value interpolation per run.
    std::vector<double> grid;
    for (const RunRecord* r : ok) {
        for (const StepRecord& s : r->steps) {
            grid.push_back(static_cast<double>(s.circuit_evals_cumulative));
        }
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        const double e = grid[gi];
        std::vector<double> energies, alphas, betas, fidelities;
        for (const RunRecord* r : ok) {
            // Last step whose cumulative count does not exceed e (the first
            // step when none does).
            std::size_t idx = 0;
            for (std::size_t t = 0; t < r->steps.size(); ++t) {
                if (static_cast<double>(
                        r->steps[t].circuit_evals_cumulative) <= e) {
                    idx = t;
                } else {
                    break;
                }
            }
            const StepRecord& s = r->steps[idx];
            energies.push_back(s.energy);
            alphas.push_back(s.alpha);
            betas.push_back(s.beta);
            if (summary.has_fidelity) fidelities.push_back(*s.fidelity);
        }
        summary.by_evals.push_back(make_row(
            static_cast<int>(gi), e, std::move(energies), std::move(alphas),
            std::move(betas), summary.has_fidelity ? &fidelities : nullptr));
    }
    return summary;
}

std::string summary_csv(const std::vector<SummaryRow>& rows,
                        bool has_fidelity) {
    std::ostringstream out;
    if (has_fidelity) {
        out << "iteration,cumulative_evals,energy_mean,energy_median,q25,q75,"
               "fidelity_mean,alpha_mean,beta_mean\n";
    } else {
        out << "iteration,cumulative_evals,energy_mean,energy_median,q25,q75,"
               "alpha_mean,beta_mean\n";
    }
    for (const SummaryRow& r : rows) {
        out << r.iteration << ',' << format_double(r.cumulative_evals) << ','
            << format_double(r.energy_mean) << ','
            << format_double(r.energy_median) << ',' << format_double(r.q25)
            << ',' << format_double(r.q75) << ',';
        if (has_fidelity) {
            out << format_double(r.fidelity_mean.value_or(0.0)) << ',';
        }
        out << format_double(r.alpha_mean) << ','
            << format_double(r.beta_mean) << '\n';
    }
    return out.str();
}

void export_summary_csv(const Summary& summary, const std::string& dir,
                        const std::string& stem) {
    std::filesystem::create_directories(dir);
    const auto write = [&](const std::string& name, const std::string& body) {
        const std::string path = dir + "/" + name;
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw std::runtime_error("cannot write " + path);
        }
        out << body;
    };
    write(stem + "_by_iteration.csv",
          summary_csv(summary.by_iteration, summary.has_fidelity));
    write(stem + "_by_evals.csv",
          summary_csv(summary.by_evals, summary.has_fidelity));
}

std::string records_to_json(const std::vector<RunRecord>& records) {
    json j;
    j["schema"] = kRecordsSchema;
    // The (alpha, beta) subproblem is posed along the descent direction
    // -F^{-1} grad L; recorded so exported data is self-describing.
    j["direction_convention"] = "descent";
    json arr = json::array();
    for (const RunRecord& r : records) arr.push_back(record_to_json(r));
    j["records"] = std::move(arr);
    return j.dump(2);
}

std::vector<RunRecord> records_from_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("invalid records JSON: ") +
                                 e.what());
    }
    if (!j.is_object() || j.value("schema", std::string()) != kRecordsSchema) {
        throw std::runtime_error("records JSON has an unexpected schema");
    }
    std::vector<RunRecord> records;
    for (const json& r : j.at("records")) {
        records.push_back(record_from_json(r));
    }
    return records;
}

void export_records_json(const std::vector<RunRecord>& records,
                         const std::string& path) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << records_to_json(records);
}

std::vector<RunRecord> import_records_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return records_from_json(buf.str());
}

} // namespace vqeopt
