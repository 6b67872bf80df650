#pragma once

#include <optional>

#include "qinterp/circuit.hpp"
#include "qinterp/statevector.hpp"

namespace qinterp {

enum class FamilyKind { QaoaP1, Haar, Iqp };

const char* family_name(FamilyKind f);
FamilyKind family_from_name(const std::string& s);

// Distribution of the random Z-block phases of a QAOA draw. The X layer is
// always uniform on [0, 2pi), regardless of this choice.
struct QaoaPhaseDistribution {
    enum class Kind { UniformPhases, SherringtonKirkpatrick, ErdosRenyiWeightedMaxCut };
    Kind kind = Kind::UniformPhases;
    double edge_prob = 0.5;  // ER only

    static QaoaPhaseDistribution uniform() { return {}; }
    static QaoaPhaseDistribution sk() { return {Kind::SherringtonKirkpatrick, 0.5}; }
    static QaoaPhaseDistribution er(double p) {
        return {Kind::ErdosRenyiWeightedMaxCut, p};
    }
};

// One randomized gate slot. Basis tells how the slot's random phases enter:
// ZDiag slots are diagonal in the Z basis, XDiag in the X basis, Generic
// slots carry a Haar unitary left-multiplier instead of phases.
struct GateSlot {
    enum class Basis { ZDiag, XDiag, Generic };
    Basis basis;
    std::vector<int> support;

    int dim() const { return 1 << support.size(); }
};

struct Architecture {
    int n_qubits = 0;
    std::vector<GateSlot> slots;

    int m() const { return static_cast<int>(slots.size()); }

    // QAOA layout: m - n two-qubit Z slots on a nearest-neighbour chain,
    // then the X layer (one single-qubit slot per qubit). Requires m > n.
    static Architecture qaoa_chain(int n, int m);
    // IQP layout: m two-qubit Z slots on a chain.
    static Architecture iqp_chain(int n, int m);
    // Haar layout: alternating single- and two-qubit generic slots.
    static Architecture haar_chain(int n, int m);
};

// Phases per slot, indexed by the slot's local eigenbasis label.
struct PhaseAssignment {
    std::vector<std::vector<double>> phases;

    bool same_shape(const PhaseAssignment& o) const;
};

// A worst-case base circuit plus sampled randomness; C(theta) for any theta
// in [0, m] is reconstructed deterministically from this. Immutable after
// sampling and safe to share across concurrent p_theta evaluations.
struct RandomDraw {
    FamilyKind family = FamilyKind::QaoaP1;
    Architecture arch;
    Circuit base;             // canonical worst-case circuit; C(m) == base
    PhaseAssignment worst;    // h (QAOA/IQP); empty for Haar
    PhaseAssignment random;   // phi (QAOA/IQP); empty for Haar
    std::vector<Gate> haar_gates;  // H_j per slot (Haar only)
    QaoaPhaseDistribution dist;    // QAOA only
    uint64_t seed = 0;

    int n() const { return arch.n_qubits; }
    int m() const { return arch.m(); }
};

// The sum-over-paths decomposition of p(theta): terms (dphi_r, B_r) with
// p(theta) = sum_r exp(i (1 - theta/m) dphi_r) B_r. The equivalent form
// A_r = B_r exp(i dphi_r) has the same magnitudes.
struct PathTermSet {
    std::vector<std::pair<double, cplx>> terms;
    int m = 0;
};

// Base circuit whose worst-case phases are all zero for the given layout.
Circuit trivial_base(const Architecture& arch, FamilyKind family);

// Draws randomness for every slot; deterministic in seed (child streams are
// split per slot index). The base circuit is canonicalized: its gates are
// rebuilt from the extracted eigenphases, within 1e-10 of the input gates.
RandomDraw sample_random_draw(FamilyKind family, const Architecture& arch,
                              const Circuit& base_circuit,
                              std::optional<QaoaPhaseDistribution> dist, uint64_t seed);

// Haar-measure unitary of dimension 2 or 4 (Ginibre QR with the R-diagonal
// phase correction); deterministic in seed.
Gate haar_unitary(int dim, uint64_t seed);

// exp(exponent * log H) with principal-branch eigenphases in (-pi, pi].
// Computed from the complex Schur form, so the result is unitary to machine
// precision even for (near-)degenerate eigenvalues.
Gate unitary_fractional_power(const Gate& h, double exponent);

// Principal-branch eigenphases of a unitary gate.
std::vector<double> unitary_eigenphases(const Gate& g);

Circuit build_interpolated_circuit(const RandomDraw& draw, double theta);

// p(theta) = |<0^n| C(theta) |init>|^2
double p_theta(const RandomDraw& draw, double theta);

// Brute-force path-sum enumeration for the family. QAOA/IQP need
// n <= 3; Haar needs prod_j N_j^2 <= 1e7.
PathTermSet enumerate_path_terms(const RandomDraw& draw);

// Evaluates the path sum at theta and checks the imaginary residue <= 1e-9.
double sum_over_paths_probability(const RandomDraw& draw, double theta);

// Outcome-hiding transport: returns draw' with p_z(C(theta)) =
// p_0(C'(theta)) for every theta, by absorbing X^z (QAOA) or Z^z (IQP) into
// the worst-case phases. The random phases are untouched, so the sampled
// marginal stays uniform. Haar hiding is out of scope.
RandomDraw hiding_transport(const RandomDraw& draw, const BitString& z);

// JSON round-trip (bit-exact for all doubles).
std::string serialize_draw(const RandomDraw& draw);
RandomDraw parse_draw(const std::string& json);

}  // namespace qinterp
