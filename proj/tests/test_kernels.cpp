#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>

#include "test_util.hpp"
#include "vqeopt/kernels.hpp"

using namespace vqeopt;
using kernels::cplx;
using kernels::Mat2;
using testutil::random_state;

namespace {
const Mat2 kRandomUnitary{cplx{0.6, 0.0}, cplx{0.0, -0.8}, cplx{0.0, -0.8},
                          cplx{0.6, 0.0}};
}

TEST_CASE("serial and parallel gate kernels produce identical amplitudes") {
    for (int n : {1, 3, 6, 9, 15}) {
        for (int bit = 0; bit < n; ++bit) {
            auto a = random_state(n, 1000 + static_cast<std::uint64_t>(n) * 31 +
                                         static_cast<std::uint64_t>(bit));
            auto b = a;
            kernels::serial::apply_1q(a.amps, bit, kRandomUnitary);
            kernels::par::apply_1q(b.amps, bit, kRandomUnitary);
            REQUIRE(a.amps == b.amps); // elementwise ops, bit-identical
        }
    }
}

TEST_CASE("serial and parallel controlled kernels agree") {
    for (int n : {2, 4, 8, 15}) {
        auto a = random_state(n, 77 + static_cast<std::uint64_t>(n));
        auto b = a;
        kernels::serial::apply_controlled_1q(a.amps, 0, n - 1, kRandomUnitary);
        kernels::par::apply_controlled_1q(b.amps, 0, n - 1, kRandomUnitary);
        REQUIRE(a.amps == b.amps);

        kernels::serial::apply_projected_1q(a.amps, n - 1, 0, kRandomUnitary);
        kernels::par::apply_projected_1q(b.amps, n - 1, 0, kRandomUnitary);
        REQUIRE(a.amps == b.amps);
    }
}

TEST_CASE("serial and parallel reductions agree to rounding") {
    for (int n : {1, 5, 10, 15}) {
        const auto a = random_state(n, 4242 + static_cast<std::uint64_t>(n));
        const auto b = random_state(n, 2424 + static_cast<std::uint64_t>(n));

        const double ns = kernels::serial::norm_sq(a.amps);
        const double np = kernels::par::norm_sq(a.amps);
        CHECK(ns == doctest::Approx(np).epsilon(1e-13));

        const cplx is = kernels::serial::inner_product(a.amps, b.amps);
        const cplx ip = kernels::par::inner_product(a.amps, b.amps);
        CHECK(std::abs(is - ip) < 1e-13);

        const std::uint64_t zmask = (std::uint64_t{1} << n) - 1;
        const std::uint64_t xmask = zmask & 0x5;
        const cplx es =
            kernels::serial::pauli_expectation(a.amps, xmask, 0, zmask & ~xmask);
        const cplx ep =
            kernels::par::pauli_expectation(a.amps, xmask, 0, zmask & ~xmask);
        CHECK(std::abs(es - ep) < 1e-13);
    }
}

TEST_CASE("unitary gate application preserves the norm") {
    auto s = random_state(10, 7);
    for (int bit = 0; bit < 10; ++bit) {
        kernels::apply_1q(s.amps, bit, kRandomUnitary);
    }
    CHECK(kernels::norm_sq(s.amps) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pauli expectation on basis states") {
    // <0...0| Z_q |0...0> = 1 for any q.
    State zero = init_basis_state(4, 0);
    for (int bit = 0; bit < 4; ++bit) {
        const cplx e = kernels::pauli_expectation(
            zero.amps, 0, 0, std::uint64_t{1} << bit);
        CHECK(e.real() == doctest::Approx(1.0));
        CHECK(e.imag() == doctest::Approx(0.0));
    }
    // <1111| Z_q |1111> = -1.
    State ones = init_basis_state(4, 15);
    const cplx e = kernels::pauli_expectation(ones.amps, 0, 0, 1);
    CHECK(e.real() == doctest::Approx(-1.0));
    // X flips: <0|X|0> = 0.
    CHECK(std::abs(kernels::pauli_expectation(zero.amps, 1, 0, 0)) <
          1e-15);
}

TEST_CASE("projected application zeroes the control-0 sector") {
    auto s = random_state(3, 99);
    // control = bit 2 (qubit 0), target = bit 0.
    kernels::apply_projected_1q(s.amps, 2, 0, {1.0, 0.0, 0.0, 1.0});
    for (std::uint64_t i = 0; i < 4; ++i) {
        CHECK(s.amps[i] == cplx{0.0});
    }
    CHECK(kernels::norm_sq(s.amps) > 0.0);
}
