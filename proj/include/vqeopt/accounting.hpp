#pragma once

#include <cstdint>

namespace vqeopt {

/// What a circuit execution (or a lump-sum charge) is billed to.
enum class EvalPurpose { energy, gradient, metric, subproblem, none };

/// Cumulative circuit-execution tally, partitioned by purpose. The unit is
/// one hardware-style circuit execution; shot counts do not multiply it.
///
/// Metric construction is billed at the hardware cost model even though the
/// simulator computes metrics exactly: m(m+1)/2 executions for the full
/// metric and one execution per rotation layer for the block-diagonal one
/// (all of a layer's generator observables commute and can be measured
/// together).
struct EvalAccount {
    std::int64_t energy_evals = 0;
    std::int64_t gradient_evals = 0;
    std::int64_t metric_evals = 0;
    std::int64_t subproblem_evals = 0;

    std::int64_t total() const {
        return energy_evals + gradient_evals + metric_evals + subproblem_evals;
    }

    void charge(EvalPurpose purpose, std::int64_t count = 1);
};

// Closed-form per-event charges.
void charge_energy(EvalAccount& acc);
void charge_gradient(EvalAccount& acc, int single_qubit_occurrences,
                     int controlled_occurrences);
void charge_full_metric(EvalAccount& acc, int n_params);
void charge_block_metric(EvalAccount& acc, int n_rotation_layers);
void charge_subproblem_eval(EvalAccount& acc);

std::int64_t gradient_cost(int single_qubit_occurrences,
                           int controlled_occurrences);
std::int64_t full_metric_cost(int n_params);

} // namespace vqeopt
