#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "vqeopt/state.hpp"

namespace vqeopt {

/// Tensor product of single-qubit Paulis, one letter per qubit.
/// Letter order is big-endian: letter 0 acts on qubit 0 (the most
/// significant bit of a basis index). Immutable after construction.
class PauliWord {
  public:
    explicit PauliWord(std::string_view letters);

    int size() const { return static_cast<int>(letters_.size()); }
    char letter(int qubit) const { return letters_[qubit]; }
    const std::string& str() const { return letters_; }
    bool is_identity() const { return (xmask_ | ymask_ | zmask_) == 0; }

    std::uint64_t xmask() const { return xmask_; }
    std::uint64_t ymask() const { return ymask_; }
    std::uint64_t zmask() const { return zmask_; }

    friend bool operator==(const PauliWord& a, const PauliWord& b) {
        return a.letters_ == b.letters_;
    }

  private:
    std::string letters_;
    // Bit masks into the amplitude index (qubit q -> bit size()-1-q).
    std::uint64_t xmask_ = 0, ymask_ = 0, zmask_ = 0;
};

/// Weighted sum of Pauli words: a Hermitian observable with real
/// coefficients. Duplicate words are merged on construction and terms with
/// negligible merged coefficient are dropped.
class Observable {
  public:
    struct Term {
        double coeff;
        PauliWord word;
    };

    Observable(int n_qubits, std::vector<Term> terms);

    int n_qubits() const { return n_qubits_; }
    const std::vector<Term>& terms() const { return terms_; }

  private:
    int n_qubits_;
    std::vector<Term> terms_;
};

/// Parses the Hamiltonian text format:
///   first non-comment line:  qubits: <n>
///   term lines:              <coefficient> <word of n letters from IXYZ>
/// '#' starts a comment; blank lines are ignored.
Observable parse_hamiltonian(const std::string& text);

/// <psi|O|psi> via matrix-free Pauli application. The state must be
/// normalized; an imaginary residue above 1e-10 signals a bug and throws.
double expectation(const Observable& obs, const State& state);

/// <psi|P|psi> for a single unit-coefficient word; same conventions.
double expectation(const PauliWord& word, const State& state);

/// Dense 2^n x 2^n Hermitian matrix of the observable, big-endian qubit
/// order. Intended for reference oracles only.
Eigen::MatrixXcd to_dense(const Observable& obs, int dense_limit = 14);

} // namespace vqeopt
