#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace qinterp {

using cplx = std::complex<double>;

inline constexpr double kUnitaryTol = 1e-10;

// Measurement outcome / basis label. Bit i belongs to qubit i; qubit 0 is the
// least significant bit of an amplitude index. The text form writes qubit 0
// leftmost, e.g. "101" has bit 0 = 1, bit 1 = 0, bit 2 = 1.
class BitString {
  public:
    BitString() = default;
    BitString(int n, uint64_t bits);
    static BitString zeros(int n) { return BitString(n, 0); }
    static BitString from_string(const std::string& s);

    int size() const { return n_; }
    uint64_t bits() const { return bits_; }
    int bit(int i) const { return static_cast<int>((bits_ >> i) & 1u); }
    int weight() const;
    std::string str() const;

    bool operator==(const BitString& o) const { return n_ == o.n_ && bits_ == o.bits_; }

  private:
    int n_ = 0;
    uint64_t bits_ = 0;
};

// A gate is either a dense unitary on one or two qubits, or a diagonal phase
// gate on up to 16 qubits (eigenphase per Z-basis label). support[0] is the
// least significant bit of the gate's local basis index.
class Gate {
  public:
    enum class Kind { Dense, Diagonal };

    static Gate dense(std::vector<int> support, std::vector<cplx> matrix,
                      std::string name = "");
    static Gate diagonal(std::vector<int> support, std::vector<double> phases,
                         std::string name = "");

    Kind kind() const { return kind_; }
    const std::vector<int>& support() const { return support_; }
    int arity() const { return static_cast<int>(support_.size()); }
    int dim() const { return 1 << support_.size(); }
    // Row-major dense matrix; entry(r, c) also works for diagonal gates.
    const std::vector<cplx>& matrix() const;
    const std::vector<double>& phases() const;
    cplx entry(int r, int c) const;
    const std::string& name() const { return name_; }

    bool is_diagonal_matrix(double tol = 1e-12) const;
    // Eigenphase table of a diagonal (or numerically diagonal dense) gate.
    std::vector<double> diagonal_phases(double tol = 1e-10) const;
    double frobenius_distance(const Gate& other) const;

  private:
    Gate() = default;
    Kind kind_ = Kind::Dense;
    std::vector<int> support_;
    std::vector<cplx> matrix_;     // dense only
    std::vector<double> phases_;   // diagonal only
    std::string name_;
};

// Named-gate constructors used by the text format.
namespace gates {
Gate h(int q);
Gate x(int q);
Gate z(int q);
Gate s(int q);
Gate t(int q);
Gate cz(int a, int b);
Gate cnot(int control, int target);
Gate rz(double angle, int q);                  // exp(-i angle/2 Z)
Gate rx(double angle, int q);                  // exp(-i angle/2 X)
Gate diag(std::vector<int> support, std::vector<double> phases);
Gate identity1(int q);
Gate identity2(int a, int b);
// Diagonal in the X basis: H diag(e^{i phi0}, e^{i phi1}) H as a dense gate.
Gate x_diag(int q, double phi0, double phi1);
}  // namespace gates

enum class InitState { AllZero, AllPlus };

struct Circuit {
    int n_qubits = 0;
    InitState init = InitState::AllZero;
    std::vector<Gate> gates;  // applied in order, gates[0] first

    void check() const;  // throws if a support index is out of range
};

// Text format, one gate per line after the header:
//   n=<int> init=<zero|plus>
//   GATE H 0
//   GATE RZ(0.25) 2
//   GATE DIAG(0,1.5707963267948966) 1
//   GATE MATRIX(re:im,re:im,...) 0,1      (row-major, dim 4 or 16)
Circuit parse_circuit(std::istream& in);
Circuit parse_circuit_file(const std::string& path);
std::string format_circuit(const Circuit& c);

}  // namespace qinterp
