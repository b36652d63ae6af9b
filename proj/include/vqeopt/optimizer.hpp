#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "vqeopt/deriv.hpp"
#include "vqeopt/metric.hpp"
#include "vqeopt/subproblem.hpp"

namespace vqeopt {

enum class OptimizerKind { gd, qng, cqng };
enum class MetricMode { full, block_diagonal };

/// Which parameter update the cqng step applies once (alpha, beta) are
/// solved. `argmin_point` (default) steps to the exact subproblem
/// minimizer theta += alpha * g + beta * d_prev. `algorithm1` folds beta
/// into the stored direction first and steps
/// theta += alpha * (g + beta * d_prev), which re-scales the d_prev
/// coefficient by alpha; because the applied point then differs from the
/// point the subproblem evaluated, this variant can step uphill once the
/// solver starts returning aggressive (alpha, beta) pairs near
/// convergence. It is kept selectable for comparison.
enum class UpdateRule { argmin_point, algorithm1 };

struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::gd;
    MetricMode metric_mode = MetricMode::full;
    double eta = 0.01;    // gd/qng learning rate
    double lambda = 0.01; // metric regularization
    double alpha0 = 0.01; // cqng initial step size
    double beta0 = 0.1;   // cqng initial conjugate coefficient
    int subproblem_max_evals = 25;
    int max_iterations = 100;
    UpdateRule update_rule = UpdateRule::argmin_point;
    // Diagnostic hook: skip the subproblem so every cqng step takes the
    // (alpha0, 0) fallback branch.
    bool force_subproblem_fallback = false;
    bool record_conjugacy = false;
};

void validate(const OptimizerConfig& cfg); // throws on invalid values

struct OptimizerState {
    std::vector<double> theta;
    std::vector<double> prev_direction; // empty before the first cqng step
    int t = 0;
};

struct StepRecord {
    int t = 0;
    double energy = 0.0; // exact diagnostic at theta_t, never billed
    double alpha = 0.0;
    double beta = 0.0;
    bool subproblem_success = true;
    int subproblem_evals = 0;
    double grad_norm = 0.0;
    std::int64_t circuit_evals_cumulative = 0;
    std::optional<double> conjugacy_residual;
    std::optional<double> fidelity; // filled by the harness when enabled
};

std::pair<OptimizerState, StepRecord>
gd_step(CostFunction& cost, const OptimizerState& state,
        const OptimizerConfig& cfg);

std::pair<OptimizerState, StepRecord>
qng_step(CostFunction& cost, const OptimizerState& state,
         const OptimizerConfig& cfg);

std::pair<OptimizerState, StepRecord>
cqng_step(CostFunction& cost, const OptimizerState& state,
          const OptimizerConfig& cfg);

/// Dispatches on cfg.kind.
std::pair<OptimizerState, StepRecord>
optimizer_step(CostFunction& cost, const OptimizerState& state,
               const OptimizerConfig& cfg);

/// Normalized conjugacy diagnostic |d_t^T H d_prev| / (|d_t| |H d_prev|),
/// in [0, 1]; H*d_prev is estimated by finite differences of the
/// parameter-shift gradient with step eps. Evaluations are not billed.
double conjugacy_residual(CostFunction& cost, std::span<const double> theta,
                          std::span<const double> d_t,
                          std::span<const double> d_prev, double eps = 1e-4);

} // namespace vqeopt
