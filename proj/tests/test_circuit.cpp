#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <set>

#include "test_util.hpp"
#include "vqeopt/circuit.hpp"
#include "vqeopt/simulator.hpp"

using namespace vqeopt;
using testutil::random_params;

TEST_CASE("example ansatz structure") {
    const Circuit c = build_example1_ansatz();
    CHECK(c.n_qubits == 2);
    CHECK(c.n_params == 3);
    REQUIRE(c.gates.size() == 5);
    CHECK(c.gates[0].kind == GateKind::RY);
    CHECK(c.gates[0].angle_scale == 2.0);
    CHECK(c.gates[1].kind == GateKind::RY);
    CHECK(c.gates[2].kind == GateKind::CNOT);
    CHECK(c.gates[3].kind == GateKind::CRY);
    CHECK(c.gates[3].param_index == 2);
    CHECK(c.gates[4].kind == GateKind::Z);

    const auto layers = layer_partition(c);
    REQUIRE(layers.size() == 4);
    CHECK(layers[0].rotation_layer);
    CHECK(layers[0].generators.size() == 2);
    CHECK_FALSE(layers[1].parameterized);
    CHECK(layers[2].parameterized);
    CHECK_FALSE(layers[2].rotation_layer); // controlled rotation
    CHECK_FALSE(layers[3].parameterized);
}

TEST_CASE("efficient_su2 parameter counts match the depth convention") {
    // depth d (= reps + 1 rotation blocks) gives 2 * n * d parameters.
    CHECK(build_efficient_su2(12, 4).n_params == 120);
    CHECK(build_efficient_su2(14, 4).n_params == 140);
    CHECK(build_efficient_su2(16, 4).n_params == 160);
    CHECK(build_efficient_su2(20, 4).n_params == 200);
    CHECK(build_efficient_su2(12, 1).n_params == 48);
    CHECK(build_efficient_su2(12, 2).n_params == 72);
    CHECK(build_efficient_su2(12, 3).n_params == 96);
}

TEST_CASE("efficient_su2 structure and smoke run") {
    const Circuit c = build_efficient_su2(2, 1);
    // RY, RZ, CNOT block, RY, RZ.
    const auto layers = layer_partition(c);
    REQUIRE(layers.size() == 5);
    int rotation = 0, fixed = 0;
    for (const auto& l : layers) {
        if (l.rotation_layer) ++rotation;
        if (!l.parameterized) ++fixed;
    }
    CHECK(rotation == 4);
    CHECK(fixed == 1);

    const std::vector<double> zeros(static_cast<std::size_t>(c.n_params), 0.0);
    const State s = run_circuit(c, zeros);
    CHECK(std::abs(s.amps[0] - cplx{1.0}) < 1e-15);

    CHECK_THROWS_AS(build_efficient_su2(1, 1), std::invalid_argument);
    CHECK_THROWS_AS(build_efficient_su2(4, 0), std::invalid_argument);
}

TEST_CASE("parameter count formulas hold across sizes") {
    for (int n = 2; n <= 20; n += 3) {
        for (int reps = 1; reps <= 6; reps += 2) {
            const Circuit c = build_efficient_su2(n, reps);
            CHECK(c.n_params == 2 * n * (reps + 1));
            // Census agrees with the formula.
            int counted = 0;
            for (const auto& g : c.gates) {
                if (is_parameterized(g.kind)) ++counted;
            }
            CHECK(counted == c.n_params);
        }
    }
}

TEST_CASE("so4 ansatz pairing schemes and parameter counts") {
    // Brick pairing on 14 qubits: 7 even + 6 odd blocks, 6 parameters each.
    const Circuit brick14 =
        build_so4_ansatz(14, 1, So4Pairing::brick, 0);
    CHECK(brick14.n_params == 78);
    const Circuit brick14x3 =
        build_so4_ansatz(14, 3, So4Pairing::brick, 0);
    CHECK(brick14x3.n_params == 234);

    const Circuit even12 = build_so4_ansatz(12, 1, So4Pairing::even, 0);
    CHECK(even12.n_params == 36);

    // A ring-closing pair list reaches 7 blocks on 12 qubits.
    std::vector<std::pair<int, int>> ring;
    for (int q = 0; q + 1 < 12; q += 2) ring.emplace_back(q, q + 1);
    ring.emplace_back(11, 0);
    CHECK(build_so4_ansatz(12, 1, ring, 0).n_params == 42);

    CHECK_THROWS_AS(build_so4_ansatz(5, 1, So4Pairing::brick, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        build_so4_ansatz(4, 1, std::vector<std::pair<int, int>>{{0, 7}}, 0),
        std::invalid_argument);
    CHECK_THROWS_AS(build_so4_ansatz(4, 0, So4Pairing::even, 0),
                    std::invalid_argument);
}

TEST_CASE("so4 ansatz runs from a basis state and stays normalized") {
    const Circuit c = build_so4_ansatz(4, 1, So4Pairing::brick, 0b0101);
    const std::vector<double> zeros(static_cast<std::size_t>(c.n_params), 0.0);
    const State at_zero = run_circuit(c, zeros);
    // The block wrapper cancels at zero angles: the circuit is the identity.
    CHECK(std::abs(at_zero.amps[0b0101] - cplx{1.0}) < 1e-12);

    const auto theta = random_params(c.n_params, 17);
    const State s = run_circuit(c, theta);
    CHECK(std::abs(norm_sq(s) - 1.0) < 1e-10);
}

TEST_CASE("so4 block is a real orthogonal transformation") {
    // On two qubits a single block, conjugated by the fixed wrapper, must be
    // real orthogonal for any parameters (that is what makes it an SO(4)
    // block). Build the 4x4 matrix column by column.
    for (std::uint64_t seed : {5ull, 6ull, 7ull, 8ull}) {
        const Circuit c = build_so4_ansatz(2, 1, So4Pairing::even, 0);
        REQUIRE(c.n_params == 6);
        const auto theta = random_params(6, seed, -3.0, 3.0);
        Eigen::Matrix4cd u;
        for (int col = 0; col < 4; ++col) {
            Circuit with_basis = c;
            with_basis.initial_basis_index = static_cast<std::uint64_t>(col);
            const State s = run_circuit(with_basis, theta);
            for (int row = 0; row < 4; ++row) {
                u(row, col) = s.amps[static_cast<std::size_t>(row)];
            }
        }
        // A global phase is allowed; remove it using the largest entry.
        Eigen::Index r0 = 0, c0 = 0;
        u.cwiseAbs().maxCoeff(&r0, &c0);
        const cplx phase = u(r0, c0) / std::abs(u(r0, c0));
        const Eigen::Matrix4cd real_u = u / phase;
        CHECK(real_u.imag().cwiseAbs().maxCoeff() < 1e-10);
        const Eigen::Matrix4d o = real_u.real();
        CHECK((o * o.transpose() - Eigen::Matrix4d::Identity())
                  .cwiseAbs()
                  .maxCoeff() < 1e-10);
        CHECK(o.determinant() == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("layer partition flags non-rotation parameterized layers") {
    const Circuit c = build_example1_ansatz();
    const auto layers = layer_partition(c);
    CHECK_FALSE(layers[2].rotation_layer);

    Circuit empty;
    empty.n_qubits = 2;
    CHECK(layer_partition(empty).empty());

    Circuit no_meta = c;
    no_meta.layers.clear();
    CHECK_THROWS_AS(layer_partition(no_meta), std::invalid_argument);
}

TEST_CASE("rotation layers act on pairwise distinct qubits in all builders") {
    const Circuit circuits[] = {
        build_example1_ansatz(),
        build_efficient_su2(5, 3),
        build_so4_ansatz(6, 2, So4Pairing::brick, 0),
    };
    for (const Circuit& c : circuits) {
        for (const LayerSpec& l : c.layers) {
            if (!l.rotation_layer) continue;
            std::set<int> qubits;
            for (const LayerGenerator& g : l.generators) {
                CHECK(qubits.insert(g.qubit).second);
            }
        }
    }
}

TEST_CASE("circuit validation rejects structural errors") {
    Circuit c = build_example1_ansatz();

    SUBCASE("unbound parameter") {
        c.n_params = 4;
        CHECK_THROWS_AS(validate_circuit(c), std::invalid_argument);
    }
    SUBCASE("bad qubit index") {
        c.gates[0].qubits[0] = 9;
        CHECK_THROWS_AS(validate_circuit(c), std::invalid_argument);
    }
    SUBCASE("zero angle scale") {
        c.gates[0].angle_scale = 0.0;
        CHECK_THROWS_AS(validate_circuit(c), std::invalid_argument);
    }
    SUBCASE("fixed gate with a parameter slot") {
        c.gates.push_back({GateKind::H, {0, -1}, 1, 1.0});
        c.layers.push_back({4, 5, false, false, {}});
        CHECK_THROWS_AS(validate_circuit(c), std::invalid_argument);
    }
    SUBCASE("non-contiguous layers") {
        c.layers[1].begin = 3;
        CHECK_THROWS_AS(validate_circuit(c), std::invalid_argument);
    }
    SUBCASE("duplicate qubit in a rotation layer") {
        c.gates[1].qubits[0] = 0;
        c.layers[0].generators[1].qubit = 0;
        CHECK_THROWS_AS(validate_circuit(c), std::invalid_argument);
    }
}

TEST_CASE("occurrence census distinguishes controlled occurrences") {
    const OccurrenceCensus census = occurrence_census(build_example1_ansatz());
    CHECK(census.single_qubit == 2);
    CHECK(census.controlled == 1);

    const auto occs = parameter_occurrences(build_example1_ansatz());
    REQUIRE(occs.size() == 3);
    CHECK_FALSE(occs[0].controlled);
    CHECK(occs[2].controlled);
    CHECK(occs[2].angle_scale == 2.0);

    const Circuit shared = testutil::random_circuit(
        {.n_qubits = 3, .rotation_layers = 2, .with_shared = true}, 3);
    const auto census2 = occurrence_census(shared);
    CHECK(census2.single_qubit >
          shared.n_params - census2.controlled); // shared slots repeat
}
