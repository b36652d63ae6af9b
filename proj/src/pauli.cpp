#include "vqeopt/pauli.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "vqeopt/kernels.hpp"

namespace vqeopt {

namespace {

constexpr double kMergeDropTol = 1e-15;
constexpr double kImagResidueTol = 1e-10;
constexpr double kNormTol = 1e-10;

Eigen::Matrix2cd letter_matrix(char c) {
    Eigen::Matrix2cd m;
    const cplx i{0.0, 1.0};
    switch (c) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("unknown Pauli letter");
    }
    return m;
}

void check_state(const Observable& obs, const State& state) {
    if (obs.n_qubits() != state.n_qubits) {
        throw std::invalid_argument(
            "expectation: observable acts on " +
            std::to_string(obs.n_qubits()) + " qubits, state has " +
            std::to_string(state.n_qubits));
    }
    const double norm = std::sqrt(kernels::norm_sq(state.amps));
    if (std::abs(norm - 1.0) > kNormTol) {
        throw std::invalid_argument("expectation: state is not normalized (|norm-1| = " +
                                    std::to_string(std::abs(norm - 1.0)) + ")");
    }
}

} // namespace

PauliWord::PauliWord(std::string_view letters) : letters_(letters) {
    if (letters_.empty() || letters_.size() > 64) {
        throw std::invalid_argument("Pauli word length must be in [1, 64]");
    }
    const int n = size();
    for (int q = 0; q < n; ++q) {
        const std::uint64_t bit = std::uint64_t{1} << qubit_bit(n, q);
        switch (letters_[q]) {
        case 'I': break;
        case 'X': xmask_ |= bit; break;
        case 'Y': ymask_ |= bit; break;
        case 'Z': zmask_ |= bit; break;
        default:
            throw std::invalid_argument(
                std::string("invalid Pauli letter '") + letters_[q] +
                "' (expected I, X, Y or Z)");
        }
    }
}

Observable::Observable(int n_qubits, std::vector<Term> terms)
    : n_qubits_(n_qubits) {
    if (n_qubits < 1) {
        throw std::invalid_argument("observable qubit count must be positive");
    }
    for (const Term& t : terms) {
        if (t.word.size() != n_qubits) {
            throw std::invalid_argument(
                "term word '" + t.word.str() + "' has length " +
                std::to_string(t.word.size()) + ", expected " +
                std::to_string(n_qubits));
        }
        if (!std::isfinite(t.coeff)) {
            throw std::invalid_argument("term coefficient for '" +
                                        t.word.str() + "' is not finite");
        }
    }
    // Merge duplicates, preserving first-occurrence order.
    for (Term& t : terms) {
        bool merged = false;
        for (Term& kept : terms_) {
            if (kept.word == t.word) {
                kept.coeff += t.coeff;
                merged = true;
                break;
            }
        }
        if (!merged) terms_.push_back(std::move(t));
    }
    std::erase_if(terms_,
                  [](const Term& t) { return std::abs(t.coeff) < kMergeDropTol; });
}

Observable parse_hamiltonian(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    int n_qubits = -1;
    std::vector<Observable::Term> terms;

    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream ls(line);
        if (n_qubits < 0) {
            std::string key;
            if (!(ls >> key)) continue; // blank
            if (key != "qubits:") {
                throw std::invalid_argument(
                    "line " + std::to_string(line_no) +
                    ": expected header 'qubits: <n>', got '" + key + "'");
            }
            if (!(ls >> n_qubits) || n_qubits < 1) {
                throw std::invalid_argument("line " + std::to_string(line_no) +
                                            ": invalid qubit count");
            }
            continue;
        }
        std::string coeff_tok, word_tok, extra;
        if (!(ls >> coeff_tok)) continue; // blank
        if (!(ls >> word_tok) || (ls >> extra)) {
            throw std::invalid_argument(
                "line " + std::to_string(line_no) +
                ": expected '<coefficient> <word>'");
        }
        std::size_t pos = 0;
        double coeff = 0.0;
        try {
            coeff = std::stod(coeff_tok, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != coeff_tok.size() || !std::isfinite(coeff)) {
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": invalid coefficient '" + coeff_tok +
                                        "'");
        }
        if (static_cast<int>(word_tok.size()) != n_qubits) {
            throw std::invalid_argument(
                "line " + std::to_string(line_no) + ": word '" + word_tok +
                "' has length " + std::to_string(word_tok.size()) +
                ", expected " + std::to_string(n_qubits));
        }
        try {
            terms.push_back({coeff, PauliWord(word_tok)});
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": " + e.what());
        }
    }
    if (n_qubits < 0) {
        throw std::invalid_argument("missing 'qubits: <n>' header");
    }
    if (terms.empty()) {
        throw std::invalid_argument("Hamiltonian has no terms");
    }
    return Observable(n_qubits, std::move(terms));
}

double expectation(const Observable& obs, const State& state) {
    check_state(obs, state);
    cplx total = 0.0;
    for (const auto& term : obs.terms()) {
        total += term.coeff * kernels::pauli_expectation(state.amps,
                                                         term.word.xmask(),
                                                         term.word.ymask(),
                                                         term.word.zmask());
    }
    if (std::abs(total.imag()) > kImagResidueTol) {
        throw std::runtime_error(
            "expectation: imaginary residue " + std::to_string(total.imag()) +
            " exceeds tolerance; this indicates a bug");
    }
    return total.real();
}

double expectation(const PauliWord& word, const State& state) {
    return expectation(Observable(word.size(), {{1.0, word}}), state);
}

Eigen::MatrixXcd to_dense(const Observable& obs, int dense_limit) {
    if (obs.n_qubits() > dense_limit) {
        throw std::invalid_argument(
            "to_dense: " + std::to_string(obs.n_qubits()) +
            " qubits exceeds the dense limit of " + std::to_string(dense_limit));
    }
    const Eigen::Index dim = Eigen::Index{1} << obs.n_qubits();
    Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& term : obs.terms()) {
        // Wrap letters outside-in so that letter 0 lands on the most
        // significant index bit.
        Eigen::MatrixXcd word = Eigen::MatrixXcd::Ones(1, 1);
        for (int q = obs.n_qubits() - 1; q >= 0; --q) {
            const Eigen::Matrix2cd l = letter_matrix(term.word.letter(q));
            Eigen::MatrixXcd next(word.rows() * 2, word.cols() * 2);
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c)
                    next.block(r * word.rows(), c * word.cols(), word.rows(),
                               word.cols()) = l(r, c) * word;
            word = std::move(next);
        }
        total += term.coeff * word;
    }
    return total;
}

} // namespace vqeopt
