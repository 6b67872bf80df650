#pragma once

#include "qinterp/circuit.hpp"

namespace qinterp {

// Dense statevector over n qubits. Qubit 0 is the least significant bit of
// the amplitude index. 2^n memory is the only exponential cost; gates are
// applied in place by stride iteration, never by building a 2^n x 2^n matrix.
class StateVector {
  public:
    explicit StateVector(int n_qubits, InitState init = InitState::AllZero);

    int n_qubits() const { return n_; }
    size_t dim() const { return amp_.size(); }
    const std::vector<cplx>& amplitudes() const { return amp_; }
    std::vector<cplx>& amplitudes() { return amp_; }
    cplx amplitude(uint64_t index) const { return amp_[index]; }

    double norm() const;  // 2-norm, Kahan-compensated

  private:
    int n_;
    std::vector<cplx> amp_;
};

void apply_gate(StateVector& state, const Gate& gate);

StateVector simulate(const Circuit& circuit);

// |<outcome|C>|^2
double output_probability(const Circuit& circuit, const BitString& outcome);

// All 2^n outcome probabilities of the final state.
std::vector<double> output_distribution(const Circuit& circuit);

struct PostselectMask {
    std::vector<int> qubits;  // ancilla set, strictly increasing
    std::vector<int> bits;    // demanded outcomes, same length
};

struct ConditionalState {
    StateVector state;        // normalized state on the data qubits
    double mask_probability;  // Pr[ancillas = mask]
};

// Thrown when Pr[ancillas = mask] vanishes; signals an invalid gadget
// instance rather than a numerical problem.
struct ZeroPostselectionProbability : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Conditional state of the data qubits given the ancilla outcomes. Data
// qubits keep their relative order.
ConditionalState conditional_on(const StateVector& state, const PostselectMask& mask);

// Pr[data = outcome | ancillas = mask]. `outcome` is read on the data qubits
// in increasing qubit order.
double postselected_probability(const Circuit& circuit, const PostselectMask& mask,
                                const BitString& outcome);

// Kahan-compensated sum; probability sums need to stay accurate to ~2^-2n-2.
double kahan_sum(const std::vector<double>& xs);

}  // namespace qinterp
