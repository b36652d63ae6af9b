#include "vqeopt/accounting.hpp"

namespace vqeopt {

void EvalAccount::charge(EvalPurpose purpose, std::int64_t count) {
    switch (purpose) {
    case EvalPurpose::energy: energy_evals += count; break;
    case EvalPurpose::gradient: gradient_evals += count; break;
    case EvalPurpose::metric: metric_evals += count; break;
    case EvalPurpose::subproblem: subproblem_evals += count; break;
    case EvalPurpose::none: break;
    }
}

void charge_energy(EvalAccount& acc) { acc.charge(EvalPurpose::energy, 1); }

void charge_gradient(EvalAccount& acc, int single_qubit_occurrences,
                     int controlled_occurrences) {
    acc.charge(EvalPurpose::gradient,
               gradient_cost(single_qubit_occurrences, controlled_occurrences));
}

void charge_full_metric(EvalAccount& acc, int n_params) {
    acc.charge(EvalPurpose::metric, full_metric_cost(n_params));
}

void charge_block_metric(EvalAccount& acc, int n_rotation_layers) {
    acc.charge(EvalPurpose::metric, n_rotation_layers);
}

void charge_subproblem_eval(EvalAccount& acc) {
    acc.charge(EvalPurpose::subproblem, 1);
}

std::int64_t gradient_cost(int single_qubit_occurrences,
                           int controlled_occurrences) {
    return 2 * static_cast<std::int64_t>(single_qubit_occurrences) +
           4 * static_cast<std::int64_t>(controlled_occurrences);
}

std::int64_t full_metric_cost(int n_params) {
    const std::int64_t m = n_params;
    return m * (m + 1) / 2;
}

} // namespace vqeopt
