#include "vqeopt/reference.hpp"

#include <cmath>
#include <stdexcept>

namespace vqeopt {

namespace {
constexpr double kDegeneracyGap = 1e-8;
}

GroundTruth ground_state(const Observable& obs, int dense_limit) {
    const Eigen::MatrixXcd h = to_dense(obs, dense_limit);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
    if (eig.info() != Eigen::Success) {
        throw std::runtime_error("ground_state: eigensolver failed");
    }

    GroundTruth gt;
    gt.energy = eig.eigenvalues()(0);
    const Eigen::Index dim = h.rows();
    auto column_state = [&](Eigen::Index k) {
        State s;
        s.n_qubits = obs.n_qubits();
        s.amps.resize(static_cast<std::size_t>(dim));
        for (Eigen::Index i = 0; i < dim; ++i) {
            s.amps[static_cast<std::size_t>(i)] = eig.eigenvectors()(i, k);
        }
        return s;
    };
    gt.state = column_state(0);
    gt.subspace.push_back(gt.state);
    for (Eigen::Index k = 1; k < dim; ++k) {
        if (eig.eigenvalues()(k) - gt.energy < kDegeneracyGap) {
            gt.subspace.push_back(column_state(k));
        } else {
            break;
        }
    }
    gt.degenerate = gt.subspace.size() > 1;
    return gt;
}

double ground_space_fidelity(const GroundTruth& gt, const State& psi) {
    double total = 0.0;
    for (const State& phi : gt.subspace) {
        total += fidelity(phi, psi);
    }
    return std::min(total, 1.0);
}

MetricMatrix example1_metric_closed_form(const std::array<double, 3>& theta) {
    const double t0 = theta[0];
    const double t1 = theta[1];
    MetricMatrix f;
    f.kind = MetricKind::full;
    f.entries = Eigen::MatrixXd::Zero(3, 3);
    f.entries(0, 0) = 1.0;
    f.entries(1, 1) = 1.0;
    f.entries(0, 2) = std::cos(t1) * std::sin(t1);
    f.entries(1, 2) = -std::cos(t0) * std::sin(t0);
    f.entries(2, 2) = 0.5 * (1.0 - std::cos(2.0 * t0) * std::cos(2.0 * t1));
    f.entries(2, 0) = f.entries(0, 2);
    f.entries(2, 1) = f.entries(1, 2);
    return f;
}

} // namespace vqeopt
