#include "vqeopt/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace vqeopt {

namespace {

double l2_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

std::int64_t account_total(const CostFunction& cost) {
    return cost.account() ? cost.account()->total() : 0;
}

/// Metric of the configured kind at theta, billed at the hardware cost.
MetricMatrix charged_metric(CostFunction& cost, std::span<const double> theta,
                            const OptimizerConfig& cfg) {
    if (cfg.metric_mode == MetricMode::full) {
        const MetricMatrix f = full_metric(cost.circuit(), theta);
        if (cost.account()) charge_full_metric(*cost.account(), cost.n_params());
        return f;
    }
    const MetricMatrix f = block_diag_metric(cost.circuit(), theta);
    if (cost.account()) {
        int rotation_layers = 0;
        for (const LayerSpec& l : cost.circuit().layers) {
            if (l.rotation_layer) ++rotation_layers;
        }
        charge_block_metric(*cost.account(), rotation_layers);
    }
    return f;
}

} // namespace

void validate(const OptimizerConfig& cfg) {
    if (!(cfg.eta > 0.0)) {
        throw std::invalid_argument("optimizer: eta must be > 0");
    }
    if (!(cfg.lambda >= 0.0)) {
        throw std::invalid_argument("optimizer: lambda must be >= 0");
    }
    if (!(cfg.alpha0 > 0.0)) {
        throw std::invalid_argument("optimizer: alpha0 must be > 0");
    }
    if (cfg.max_iterations < 1) {
        throw std::invalid_argument("optimizer: max_iterations must be >= 1");
    }
    if (cfg.subproblem_max_evals < 3) {
        throw std::invalid_argument(
            "optimizer: subproblem_max_evals must be >= 3");
    }
}

std::pair<OptimizerState, StepRecord>
gd_step(CostFunction& cost, const OptimizerState& state,
        const OptimizerConfig& cfg) {
    StepRecord rec;
    rec.t = state.t;
    rec.energy = cost.exact_energy(state.theta);
    const auto grad = parameter_shift_gradient(cost, state.theta);
    rec.grad_norm = l2_norm(grad);
    rec.alpha = cfg.eta;
    rec.beta = 0.0;

    OptimizerState next;
    next.t = state.t + 1;
    next.theta.resize(state.theta.size());
    for (std::size_t i = 0; i < state.theta.size(); ++i) {
        next.theta[i] = state.theta[i] - cfg.eta * grad[i];
    }
    rec.circuit_evals_cumulative = account_total(cost);
    return {std::move(next), rec};
}

std::pair<OptimizerState, StepRecord>
qng_step(CostFunction& cost, const OptimizerState& state,
         const OptimizerConfig& cfg) {
    StepRecord rec;
    rec.t = state.t;
    rec.energy = cost.exact_energy(state.theta);
    const auto grad = parameter_shift_gradient(cost, state.theta);
    rec.grad_norm = l2_norm(grad);

    const MetricMatrix f = charged_metric(cost, state.theta, cfg);
    const auto nat = natural_direction(regularize(f, cfg.lambda), grad);
    rec.alpha = cfg.eta;
    rec.beta = 0.0;

    OptimizerState next;
    next.t = state.t + 1;
    next.theta.resize(state.theta.size());
    for (std::size_t i = 0; i < state.theta.size(); ++i) {
        next.theta[i] = state.theta[i] - cfg.eta * nat[i];
    }
    rec.circuit_evals_cumulative = account_total(cost);
    return {std::move(next), rec};
}

std::pair<OptimizerState, StepRecord>
cqng_step(CostFunction& cost, const OptimizerState& state,
          const OptimizerConfig& cfg) {
    StepRecord rec;
    rec.t = state.t;
    rec.energy = cost.exact_energy(state.theta);
    const auto grad = parameter_shift_gradient(cost, state.theta);
    rec.grad_norm = l2_norm(grad);

    const MetricMatrix f = charged_metric(cost, state.theta, cfg);
    const auto nat = natural_direction(regularize(f, cfg.lambda), grad);

    const std::size_t m = state.theta.size();
    std::vector<double> g(m);
    for (std::size_t i = 0; i < m; ++i) g[i] = -nat[i];

    double alpha = cfg.alpha0;
    double beta = 0.0;
    rec.subproblem_success = true;
    rec.subproblem_evals = 0;

    const bool have_prev = !state.prev_direction.empty();
    if (have_prev) {
        if (cfg.force_subproblem_fallback) {
            rec.subproblem_success = false;
        } else {
            std::vector<double> trial(m);
            auto objective = [&](double a, double b) {
                for (std::size_t i = 0; i < m; ++i) {
                    trial[i] = state.theta[i] + a * g[i] +
                               b * state.prev_direction[i];
                }
                return cost.evaluate(trial, EvalPurpose::subproblem);
            };
            const SubproblemResult res = solve_subproblem(
                objective, cfg.alpha0, cfg.beta0, cfg.subproblem_max_evals);
            rec.subproblem_success = res.success;
            rec.subproblem_evals = res.evals_used;
            if (res.success) {
                alpha = res.alpha;
                beta = res.beta;
            }
        }
    }
    rec.alpha = alpha;
    rec.beta = beta;

    // d_t = g_t + beta * d_{t-1}; the beta == 0 branch keeps the fallback
    // trajectory bit-identical to a qng run with eta = alpha0.
    std::vector<double> direction(m);
    for (std::size_t i = 0; i < m; ++i) {
        direction[i] = (have_prev && beta != 0.0)
                           ? g[i] + beta * state.prev_direction[i]
                           : g[i];
    }

    OptimizerState next;
    next.t = state.t + 1;
    next.theta.resize(m);
    if (cfg.update_rule == UpdateRule::argmin_point && have_prev) {
        for (std::size_t i = 0; i < m; ++i) {
            next.theta[i] = state.theta[i] + alpha * g[i] +
                            beta * state.prev_direction[i];
        }
    } else {
        for (std::size_t i = 0; i < m; ++i) {
            next.theta[i] = state.theta[i] + alpha * direction[i];
        }
    }

    if (cfg.record_conjugacy && have_prev &&
        l2_norm(state.prev_direction) > 0.0) {
        rec.conjugacy_residual = conjugacy_residual(
            cost, state.theta, direction, state.prev_direction);
    }

    next.prev_direction = std::move(direction);
    rec.circuit_evals_cumulative = account_total(cost);
    return {std::move(next), rec};
}

std::pair<OptimizerState, StepRecord>
optimizer_step(CostFunction& cost, const OptimizerState& state,
               const OptimizerConfig& cfg) {
    switch (cfg.kind) {
    case OptimizerKind::gd: return gd_step(cost, state, cfg);
    case OptimizerKind::qng: return qng_step(cost, state, cfg);
    case OptimizerKind::cqng: return cqng_step(cost, state, cfg);
    }
    throw std::invalid_argument("unknown optimizer kind");
}

double conjugacy_residual(CostFunction& cost, std::span<const double> theta,
                          std::span<const double> d_t,
                          std::span<const double> d_prev, double eps) {
    if (l2_norm(d_prev) == 0.0) {
        throw std::invalid_argument(
            "conjugacy_residual: previous direction is zero");
    }
    // Diagnostic-only evaluations: exact mode, never billed.
    CostFunction diag(cost.circuit(), cost.observable(),
                      ShotConfig::exact_mode(), nullptr);
    const auto hv = hessian_vector_product(diag, theta, d_prev, eps);
    double dot = 0.0;
    for (std::size_t i = 0; i < hv.size(); ++i) dot += d_t[i] * hv[i];
    return std::abs(dot) / (l2_norm(d_t) * l2_norm(hv) + 1e-30);
}

} // namespace vqeopt
