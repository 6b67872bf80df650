#pragma once

#include "qinterp/circuit.hpp"

namespace qinterp {

// Sign function f: {0,1}^n -> {-1,+1}, stored as a full truth table in
// lexicographic x order.
struct SignFunction {
    int n = 0;
    std::vector<int8_t> table;  // entries are -1 or +1; size 2^n

    static SignFunction constant(int n, int8_t value);
    // f(x) = (-1)^{|x|}; balanced for every n >= 1.
    static SignFunction parity(int n);
    static SignFunction random(int n, uint64_t seed);

    int8_t at(uint64_t x) const { return table[x]; }
    long long sum() const;
    void check() const;
};

SignFunction parse_sign_function(std::istream& in);
SignFunction parse_sign_function_file(const std::string& path);
std::string format_sign_function(const SignFunction& f);

// Closed form |sum_x f(x)|^2 / 2^{2n}; the oracle for both builders.
double hard_probability_reference(const SignFunction& f);

// p=1 QAOA circuit on |+^n> with p(0^n) = |sum f|^2 / 2^{2n}: a Z-diagonal
// gate with phases of (-i)^{|x|} f(x), then the mixer exp(i pi/4 X) on each
// qubit.
Circuit build_qaoa_hard_circuit(const SignFunction& f);

// IQP circuit H^n U_f H^n with p(0^n) = (sum f)^2 / 2^{2n}.
Circuit build_iqp_hard_circuit(const SignFunction& f);

struct GadgetExpansion {
    Circuit circuit;           // no mid-circuit Hadamards on data qubits
    std::vector<int> mask_qubits;  // retired qubits, post-selected on 0
    std::vector<int> data_map;     // original qubit -> final physical qubit
};

// Replaces every Hadamard in the gate list by the modified Hadamard gadget:
// a fresh |+> ancilla, Q = diag(1,i,1,-i) split as CZ then S on the old data
// qubit, exp(-i pi/4 X) on it, and post-selection of outcome 0 there. The
// ancilla takes over the data role. Ancilla |+> preparation gates (when the
// circuit starts from |0^n>) are emitted at the very start, before any data
// flows. Supported input gates: H, CZ, S, T and diagonal gates.
GadgetExpansion hadamard_gadget_expand(const Circuit& circuit);

// Ising form exp(i (g + sum_j b_j sz_j + sum_{j<k} c_{jk} sz_j sz_k)) of a
// Z-diagonal circuit. sz eigenvalue is +1 for bit 0.
struct IsingCoefficients {
    int n = 0;
    double global = 0.0;
    std::vector<double> linear;               // b_j
    std::vector<std::vector<double>> quad;    // c_{jk}, symmetric, zero diagonal

    double phase_at(uint64_t z) const;  // g + sum b s + sum c s s
};

struct NotIsingRepresentable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Solves for (global, b, c) from the weight <= 2 diagonal phases and checks
// every entry of the re-synthesized diagonal against the circuit's diagonal
// to 1e-9; throws NotIsingRepresentable when degree > 2 terms remain (e.g. a
// CCZ-like diagonal).
IsingCoefficients compile_to_ising(const Circuit& z_diagonal_circuit);

// (1/2^n) sum_z exp(i H_Z(z)) for an IQP-form circuit (Hadamard sandwich
// around a Z-diagonal block), evaluated by enumeration (n <= 12) and checked
// against <0^n|C|0^n> to 1e-9.
cplx amplitude_as_ising_partition(const Circuit& iqp_circuit);

}  // namespace qinterp
