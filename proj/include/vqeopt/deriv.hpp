#pragma once

#include <atomic>
#include <cstdint>
#include <span>
#include <vector>

#include "vqeopt/accounting.hpp"
#include "vqeopt/circuit.hpp"
#include "vqeopt/pauli.hpp"
#include "vqeopt/simulator.hpp"

namespace vqeopt {

/// Cost L(theta) = <psi(theta)|O|psi(theta)>, with every evaluation billed
/// to a shared EvalAccount (one charge per circuit execution). In sampling
/// mode each evaluation draws from a fresh rng stream derived from
/// (rng_seed, evaluation ordinal), so runs are reproducible.
class CostFunction {
  public:
    CostFunction(const Circuit& circuit, const Observable& observable,
                 ShotConfig shot_config, EvalAccount* account = nullptr);

    double evaluate(std::span<const double> params,
                    EvalPurpose purpose = EvalPurpose::energy);

    /// Evaluation with additive per-gate angle offsets (in the gate's own
    /// angle), used by the parameter-shift rule.
    double evaluate_with_shifts(
        std::span<const double> params,
        std::span<const std::pair<int, double>> gate_angle_shifts,
        EvalPurpose purpose);

    /// Exact expectation regardless of shot mode; never billed. For
    /// diagnostics and step records only.
    double exact_energy(std::span<const double> params) const;

    const Circuit& circuit() const { return *circuit_; }
    const Observable& observable() const { return *observable_; }
    const ShotConfig& shot_config() const { return shot_config_; }
    EvalAccount* account() const { return account_; }
    int n_params() const { return circuit_->n_params; }
    const OccurrenceCensus& census() const { return census_; }

  private:
    double eval_angles(std::span<const double> gate_angles,
                       EvalPurpose purpose);

    const Circuit* circuit_;
    const Observable* observable_;
    ShotConfig shot_config_;
    EvalAccount* account_;
    OccurrenceCensus census_;
    std::atomic<std::uint64_t> eval_ordinal_{0};
};

/// Exact gradient via the parameter-shift rule: two evaluations per
/// single-qubit rotation occurrence, four per controlled-rotation
/// occurrence. Shared parameters sum their occurrence contributions.
std::vector<double> parameter_shift_gradient(CostFunction& cost,
                                             std::span<const double> params);

/// Central finite differences; the independent oracle for the shift rule.
std::vector<double> finite_difference_gradient(CostFunction& cost,
                                               std::span<const double> params,
                                               double eps);

/// H*v by central differences of the parameter-shift gradient.
std::vector<double> hessian_vector_product(CostFunction& cost,
                                           std::span<const double> params,
                                           std::span<const double> v,
                                           double eps);

} // namespace vqeopt
