#include "vqeopt/metric.hpp"

#include <complex>
#include <set>
#include <stdexcept>
#include <string>

#include "vqeopt/kernels.hpp"
#include "vqeopt/simulator.hpp"
#include "vqeopt/state.hpp"

namespace vqeopt {

namespace {

kernels::Mat2 scaled_pauli(char axis, cplx scale) {
    const cplx i{0.0, 1.0};
    switch (axis) {
    case 'X': return {0.0, scale, scale, 0.0};
    case 'Y': return {0.0, -i * scale, i * scale, 0.0};
    case 'Z': return {scale, 0.0, 0.0, -scale};
    default: throw std::invalid_argument("unknown Pauli axis");
    }
}

// Applies the derivative generator of a bound parameterized gate to `s`
// (d/dtheta of the gate, with the gate itself already applied):
//   single-qubit rotation:  -i*(scale/2) * P on the target
//   controlled rotation:    -i*(scale/2) * |1><1|_c (x) P_t
void apply_generator(State& s, const GateInstance& g) {
    const cplx factor = cplx{0.0, -0.5 * g.angle_scale};
    const kernels::Mat2 m = scaled_pauli(rotation_axis(g.kind), factor);
    const int tbit = qubit_bit(s.n_qubits, g.target());
    if (is_controlled(g.kind)) {
        kernels::apply_projected_1q(s.amps, qubit_bit(s.n_qubits, g.control()),
                                    tbit, m);
    } else {
        kernels::apply_1q(s.amps, tbit, m);
    }
}

double pauli_moment(const State& s, std::uint64_t xmask, std::uint64_t ymask,
                    std::uint64_t zmask) {
    return kernels::pauli_expectation(s.amps, xmask, ymask, zmask).real();
}

struct AxisMasks {
    std::uint64_t x = 0, y = 0, z = 0;
};

AxisMasks generator_masks(int n_qubits, const LayerGenerator& gen) {
    const std::uint64_t bit = std::uint64_t{1} << qubit_bit(n_qubits, gen.qubit);
    AxisMasks m;
    switch (gen.axis) {
    case 'X': m.x = bit; break;
    case 'Y': m.y = bit; break;
    case 'Z': m.z = bit; break;
    default: throw std::invalid_argument("unknown Pauli axis");
    }
    return m;
}

} // namespace

MetricMatrix full_metric(const Circuit& c, std::span<const double> params) {
    const auto angles = bind_angles(c, params);
    const int m = c.n_params;

    State base = init_basis_state(c.n_qubits, c.initial_basis_index);
    struct Branch {
        int param_index;
        State state;
    };
    std::vector<Branch> branches;
    for (std::size_t gi = 0; gi < c.gates.size(); ++gi) {
        const GateInstance& g = c.gates[gi];
        apply_gate(base, g, angles[gi]);
        for (Branch& b : branches) {
            apply_gate(b.state, g, angles[gi]);
        }
        if (is_parameterized(g.kind)) {
            Branch b{g.param_index, base};
            apply_generator(b.state, g);
            branches.push_back(std::move(b));
        }
    }

    // Sum occurrence branches into per-parameter derivative states.
    State zero;
    zero.n_qubits = c.n_qubits;
    zero.amps.assign(base.dim(), cplx{0.0});
    std::vector<State> dpsi(static_cast<std::size_t>(m), zero);
    for (const Branch& b : branches) {
        auto& dst = dpsi[static_cast<std::size_t>(b.param_index)].amps;
        for (std::size_t i = 0; i < dst.size(); ++i) {
            dst[i] += b.state.amps[i];
        }
    }

    std::vector<cplx> overlap(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        overlap[static_cast<std::size_t>(i)] = kernels::inner_product(
            dpsi[static_cast<std::size_t>(i)].amps, base.amps);
    }

    MetricMatrix f;
    f.kind = MetricKind::full;
    f.entries = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            const cplx jij =
                kernels::inner_product(dpsi[static_cast<std::size_t>(i)].amps,
                                       dpsi[static_cast<std::size_t>(j)].amps);
            const cplx berry = overlap[static_cast<std::size_t>(i)] *
                               std::conj(overlap[static_cast<std::size_t>(j)]);
            const double fij = jij.real() - berry.real();
            f.entries(i, j) = fij;
            f.entries(j, i) = fij;
        }
    }
    return f;
}

MetricMatrix block_diag_metric(const Circuit& c,
                               std::span<const double> params) {
    const auto layers = layer_partition(c);
    for (const LayerSpec& layer : layers) {
        if (layer.parameterized && !layer.rotation_layer) {
            throw std::runtime_error(
                "block-diagonal metric: circuit has a parameterized layer "
                "that is not a single-qubit Pauli rotation layer; use the "
                "full metric instead");
        }
    }
    {
        std::set<int> seen;
        for (const Occurrence& occ : parameter_occurrences(c)) {
            if (!seen.insert(occ.param_index).second) {
                throw std::runtime_error(
                    "block-diagonal metric: parameter " +
                    std::to_string(occ.param_index) +
                    " is shared between gates; use the full metric instead");
            }
        }
    }

    const auto angles = bind_angles(c, params);
    const int m = c.n_params;
    MetricMatrix f;
    f.kind = MetricKind::block_diagonal;
    f.entries = Eigen::MatrixXd::Zero(m, m);

    State s = init_basis_state(c.n_qubits, c.initial_basis_index);
    for (const LayerSpec& layer : layers) {
        if (layer.rotation_layer) {
            // Generator covariance on the state before this layer's
            // rotations. The generators commute with their own layer, so
            // this matches the inclusive-of-layer convention as well.
            const auto& gens = layer.generators;
            std::vector<AxisMasks> masks;
            std::vector<double> first_moment;
            masks.reserve(gens.size());
            for (const LayerGenerator& gen : gens) {
                masks.push_back(generator_masks(c.n_qubits, gen));
                first_moment.push_back(
                    pauli_moment(s, masks.back().x, masks.back().y,
                                 masks.back().z));
            }
            for (std::size_t a = 0; a < gens.size(); ++a) {
                const double sa = gens[a].angle_scale;
                const int pa = gens[a].param_index;
                f.entries(pa, pa) =
                    0.25 * sa * sa * (1.0 - first_moment[a] * first_moment[a]);
                for (std::size_t b = a + 1; b < gens.size(); ++b) {
                    const double sb = gens[b].angle_scale;
                    const int pb = gens[b].param_index;
                    const double second = pauli_moment(
                        s, masks[a].x | masks[b].x, masks[a].y | masks[b].y,
                        masks[a].z | masks[b].z);
                    const double fab =
                        0.25 * sa * sb *
                        (second - first_moment[a] * first_moment[b]);
                    f.entries(pa, pb) = fab;
                    f.entries(pb, pa) = fab;
                }
            }
        }
        for (int gi = layer.begin; gi < layer.end; ++gi) {
            apply_gate(s, c.gates[static_cast<std::size_t>(gi)],
                       angles[static_cast<std::size_t>(gi)]);
        }
    }
    return f;
}

MetricMatrix regularize(const MetricMatrix& f, double lambda) {
    if (lambda < 0.0) {
        throw std::invalid_argument("regularization strength must be >= 0");
    }
    MetricMatrix out;
    out.kind = f.kind;
    out.lambda_applied = f.lambda_applied + lambda;
    out.entries = f.entries;
    out.entries.diagonal().array() += lambda;
    return out;
}

std::vector<double> natural_direction(const MetricMatrix& f_reg,
                                      std::span<const double> grad) {
    const Eigen::Index m = f_reg.entries.rows();
    if (f_reg.entries.cols() != m ||
        static_cast<Eigen::Index>(grad.size()) != m) {
        throw std::invalid_argument("natural_direction: dimension mismatch");
    }
    Eigen::VectorXd g(m);
    for (Eigen::Index i = 0; i < m; ++i) g(i) = grad[static_cast<std::size_t>(i)];

    Eigen::LLT<Eigen::MatrixXd> llt(f_reg.entries);
    if (llt.info() != Eigen::Success) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
            f_reg.entries, Eigen::EigenvaluesOnly);
        const double smallest =
            eig.info() == Eigen::Success ? eig.eigenvalues()(0) : 0.0;
        throw std::runtime_error(
            "metric factorization failed: matrix is not positive definite "
            "(smallest eigenvalue ~ " + std::to_string(smallest) +
            "); increase the regularization strength");
    }
    const Eigen::VectorXd x = llt.solve(g);
    return std::vector<double>(x.data(), x.data() + m);
}

} // namespace vqeopt
