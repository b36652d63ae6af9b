#include "vqeopt/deriv.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "vqeopt/rng.hpp"

namespace vqeopt {

namespace {

// Four-term shift coefficients for controlled rotations, whose generator
// spectrum {0, +-1/2} yields the frequency pair {1/2, 1}.
const double kCtrlC1 = (2.0 + std::sqrt(2.0)) / 8.0;
const double kCtrlC2 = (2.0 - std::sqrt(2.0)) / 8.0;

} // namespace

CostFunction::CostFunction(const Circuit& circuit, const Observable& observable,
                           ShotConfig shot_config, EvalAccount* account)
    : circuit_(&circuit), observable_(&observable),
      shot_config_(shot_config), account_(account),
      census_(occurrence_census(circuit)) {
    if (circuit.n_qubits != observable.n_qubits()) {
        throw std::invalid_argument(
            "cost function: circuit acts on " +
            std::to_string(circuit.n_qubits) + " qubits, observable on " +
            std::to_string(observable.n_qubits()));
    }
}

double CostFunction::eval_angles(std::span<const double> gate_angles,
                                 EvalPurpose purpose) {
    const State s = run_with_angles(*circuit_, gate_angles);
    if (account_) account_->charge(purpose, 1);
    if (shot_config_.exact()) {
        return expectation(*observable_, s);
    }
    const std::uint64_t ordinal = eval_ordinal_.fetch_add(1);
    const ShotConfig per_eval{shot_config_.shots,
                              mix_seed(shot_config_.rng_seed, ordinal)};
    return sampled_expectation(*observable_, s, per_eval);
}

double CostFunction::evaluate(std::span<const double> params,
                              EvalPurpose purpose) {
    return eval_angles(bind_angles(*circuit_, params), purpose);
}

double CostFunction::evaluate_with_shifts(
    std::span<const double> params,
    std::span<const std::pair<int, double>> gate_angle_shifts,
    EvalPurpose purpose) {
    auto angles = bind_angles(*circuit_, params);
    for (const auto& [gate_index, delta] : gate_angle_shifts) {
        angles.at(static_cast<std::size_t>(gate_index)) += delta;
    }
    return eval_angles(angles, purpose);
}

double CostFunction::exact_energy(std::span<const double> params) const {
    return expectation(*observable_, run_circuit(*circuit_, params));
}

std::vector<double> parameter_shift_gradient(CostFunction& cost,
                                             std::span<const double> params) {
    const Circuit& c = cost.circuit();
    if (static_cast<int>(params.size()) != c.n_params) {
        throw std::invalid_argument("gradient: parameter count mismatch");
    }
    std::vector<double> grad(static_cast<std::size_t>(c.n_params), 0.0);

    constexpr double half_pi = std::numbers::pi / 2.0;
    for (const Occurrence& occ : parameter_occurrences(c)) {
        double d = 0.0;
        const std::pair<int, double> plus{occ.gate_index, half_pi};
        const std::pair<int, double> minus{occ.gate_index, -half_pi};
        if (!occ.controlled) {
            const double lp = cost.evaluate_with_shifts(
                params, std::span(&plus, 1), EvalPurpose::gradient);
            const double lm = cost.evaluate_with_shifts(
                params, std::span(&minus, 1), EvalPurpose::gradient);
            d = occ.angle_scale * 0.5 * (lp - lm);
        } else {
            const std::pair<int, double> plus3{occ.gate_index, 3.0 * half_pi};
            const std::pair<int, double> minus3{occ.gate_index, -3.0 * half_pi};
            const double lp = cost.evaluate_with_shifts(
                params, std::span(&plus, 1), EvalPurpose::gradient);
            const double lm = cost.evaluate_with_shifts(
                params, std::span(&minus, 1), EvalPurpose::gradient);
            const double lp3 = cost.evaluate_with_shifts(
                params, std::span(&plus3, 1), EvalPurpose::gradient);
            const double lm3 = cost.evaluate_with_shifts(
                params, std::span(&minus3, 1), EvalPurpose::gradient);
            d = occ.angle_scale * (kCtrlC1 * (lp - lm) - kCtrlC2 * (lp3 - lm3));
        }
        grad[static_cast<std::size_t>(occ.param_index)] += d;
    }
    return grad;
}

std::vector<double> finite_difference_gradient(CostFunction& cost,
                                               std::span<const double> params,
                                               double eps) {
    if (eps <= 0.0) {
        throw std::invalid_argument("finite differences require eps > 0");
    }
    std::vector<double> theta(params.begin(), params.end());
    std::vector<double> grad(theta.size(), 0.0);
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double saved = theta[i];
        theta[i] = saved + eps;
        const double lp = cost.evaluate(theta, EvalPurpose::energy);
        theta[i] = saved - eps;
        const double lm = cost.evaluate(theta, EvalPurpose::energy);
        theta[i] = saved;
        grad[i] = (lp - lm) / (2.0 * eps);
    }
    return grad;
}

std::vector<double> hessian_vector_product(CostFunction& cost,
                                           std::span<const double> params,
                                           std::span<const double> v,
                                           double eps) {
    if (v.size() != params.size()) {
        throw std::invalid_argument("hvp: direction size mismatch");
    }
    double vnorm2 = 0.0;
    for (double x : v) vnorm2 += x * x;
    if (vnorm2 == 0.0) {
        throw std::invalid_argument("hvp: direction must be nonzero");
    }
    if (eps <= 0.0) {
        throw std::invalid_argument("hvp requires eps > 0");
    }
    std::vector<double> theta_p(params.begin(), params.end());
    std::vector<double> theta_m(params.begin(), params.end());
    for (std::size_t i = 0; i < theta_p.size(); ++i) {
        theta_p[i] += eps * v[i];
        theta_m[i] -= eps * v[i];
    }
    const auto gp = parameter_shift_gradient(cost, theta_p);
    const auto gm = parameter_shift_gradient(cost, theta_m);
    std::vector<double> hv(gp.size(), 0.0);
    for (std::size_t i = 0; i < hv.size(); ++i) {
        hv[i] = (gp[i] - gm[i]) / (2.0 * eps);
    }
    return hv;
}

} // namespace vqeopt
