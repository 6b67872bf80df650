#include "qinterp/families.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "qinterp/rng.hpp"

namespace qinterp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_2pi(double x) {
    double y = std::fmod(x, kTwoPi);
    return y < 0 ? y + kTwoPi : y;
}

Eigen::MatrixXcd to_eigen(const Gate& g) {
    int d = g.dim();
    Eigen::MatrixXcd m(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) m(r, c) = g.entry(r, c);
    return m;
}

Gate from_eigen(const std::vector<int>& support, const Eigen::MatrixXcd& m,
                const std::string& name = "") {
    int d = static_cast<int>(m.rows());
    std::vector<cplx> flat(static_cast<size_t>(d) * d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) flat[r * d + c] = m(r, c);
    return Gate::dense(support, std::move(flat), name);
}

}  // namespace

const char* family_name(FamilyKind f) {
    switch (f) {
        case FamilyKind::QaoaP1: return "qaoa";
        case FamilyKind::Haar: return "haar";
        case FamilyKind::Iqp: return "iqp";
    }
    return "?";
}

FamilyKind family_from_name(const std::string& s) {
    if (s == "qaoa") return FamilyKind::QaoaP1;
    if (s == "haar") return FamilyKind::Haar;
    if (s == "iqp") return FamilyKind::Iqp;
    throw std::invalid_argument("unknown family: " + s);
}

bool PhaseAssignment::same_shape(const PhaseAssignment& o) const {
    if (phases.size() != o.phases.size()) return false;
    for (size_t i = 0; i < phases.size(); ++i)
        if (phases[i].size() != o.phases[i].size()) return false;
    return true;
}

Architecture Architecture::qaoa_chain(int n, int m) {
    if (n < 1 || m <= n) throw std::invalid_argument("qaoa_chain needs m > n");
    Architecture a;
    a.n_qubits = n;
    int mz = m - n;
    for (int j = 0; j < mz; ++j) {
        if (n == 1)
            a.slots.push_back({GateSlot::Basis::ZDiag, {0}});
        else {
            int q = j % (n - 1);
            a.slots.push_back({GateSlot::Basis::ZDiag, {q, q + 1}});
        }
    }
    for (int q = 0; q < n; ++q) a.slots.push_back({GateSlot::Basis::XDiag, {q}});
    return a;
}

Architecture Architecture::iqp_chain(int n, int m) {
    if (n < 1 || m < 1) throw std::invalid_argument("iqp_chain needs m >= 1");
    Architecture a;
    a.n_qubits = n;
    for (int j = 0; j < m; ++j) {
        if (n == 1)
            a.slots.push_back({GateSlot::Basis::ZDiag, {0}});
        else {
            int q = j % (n - 1);
            a.slots.push_back({GateSlot::Basis::ZDiag, {q, q + 1}});
        }
    }
    return a;
}

Architecture Architecture::haar_chain(int n, int m) {
    if (n < 1 || m < 1) throw std::invalid_argument("haar_chain needs m >= 1");
    Architecture a;
    a.n_qubits = n;
    for (int j = 0; j < m; ++j) {
        if (n == 1 || j % 2 == 0)
            a.slots.push_back({GateSlot::Basis::Generic, {j % n}});
        else {
            int q = (j / 2) % (n - 1);
            a.slots.push_back({GateSlot::Basis::Generic, {q, q + 1}});
        }
    }
    return a;
}

namespace {

void validate_layout(FamilyKind family, const Architecture& arch) {
    if (arch.n_qubits < 1) throw std::invalid_argument("architecture needs qubits");
    for (const GateSlot& s : arch.slots)
        for (int q : s.support)
            if (q < 0 || q >= arch.n_qubits)
                throw std::invalid_argument("slot support out of range");
    switch (family) {
        case FamilyKind::QaoaP1: {
            // Z block first, then exactly one X slot per qubit.
            int n = arch.n_qubits;
            int mx = 0;
            std::vector<int> seen(n, 0);
            bool in_x = false;
            for (const GateSlot& s : arch.slots) {
                if (s.basis == GateSlot::Basis::Generic)
                    throw std::invalid_argument("QAOA layout cannot contain generic slots");
                if (s.basis == GateSlot::Basis::XDiag) {
                    in_x = true;
                    if (s.support.size() != 1)
                        throw std::invalid_argument("QAOA X layer slots are single-qubit");
                    ++seen[s.support[0]];
                    ++mx;
                } else if (in_x) {
                    throw std::invalid_argument("QAOA layout must be Z block then X layer");
                }
            }
            if (mx != n || *std::min_element(seen.begin(), seen.end()) != 1 ||
                *std::max_element(seen.begin(), seen.end()) != 1)
                throw std::invalid_argument("QAOA X layer must cover each qubit once");
            break;
        }
        case FamilyKind::Iqp:
            for (const GateSlot& s : arch.slots)
                if (s.basis != GateSlot::Basis::ZDiag)
                    throw std::invalid_argument("IQP slots must be Z-diagonal");
            break;
        case FamilyKind::Haar:
            for (const GateSlot& s : arch.slots) {
                if (s.basis != GateSlot::Basis::Generic)
                    throw std::invalid_argument("Haar slots must be generic");
                if (s.support.size() > 2)
                    throw std::invalid_argument("Haar slots act on 1 or 2 qubits");
            }
            break;
    }
}

// Positions of the slot gates inside the base circuit's gate list. For IQP
// the base carries a fixed Hadamard sandwich around the slot gates.
size_t slot_gate_offset(FamilyKind family, int n) {
    return family == FamilyKind::Iqp ? static_cast<size_t>(n) : 0;
}

void validate_base_shape(FamilyKind family, const Architecture& arch, const Circuit& base) {
    if (base.n_qubits != arch.n_qubits)
        throw std::invalid_argument("base circuit qubit count mismatch");
    size_t off = slot_gate_offset(family, arch.n_qubits);
    size_t expect = arch.slots.size() + 2 * off;
    if (base.gates.size() != expect)
        throw std::invalid_argument("base circuit gate count does not match architecture");
    if (family == FamilyKind::Iqp) {
        if (base.init != InitState::AllZero)
            throw std::invalid_argument("IQP base starts from |0^n>");
        auto is_h_layer = [&](size_t start) {
            std::vector<int> seen(arch.n_qubits, 0);
            for (size_t i = start; i < start + off; ++i) {
                const Gate& g = base.gates[i];
                if (g.name() != "H" || g.arity() != 1) return false;
                ++seen[g.support()[0]];
            }
            return std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; });
        };
        if (!is_h_layer(0) || !is_h_layer(off + arch.slots.size()))
            throw std::invalid_argument("IQP base needs Hadamard layers around the Z block");
    }
    if (family == FamilyKind::QaoaP1 && base.init != InitState::AllPlus)
        throw std::invalid_argument("QAOA base starts from |+^n>");
    if (family == FamilyKind::Haar && base.init != InitState::AllZero)
        throw std::invalid_argument("Haar base starts from |0^n>");
    for (size_t j = 0; j < arch.slots.size(); ++j) {
        const Gate& g = base.gates[off + j];
        if (g.support() != arch.slots[j].support)
            throw std::invalid_argument("base gate support does not match slot");
    }
}

// Eigenphases of the base gate in the slot's diagonal basis.
std::vector<double> extract_worst_phases(const GateSlot& slot, const Gate& g) {
    if (slot.basis == GateSlot::Basis::ZDiag) return g.diagonal_phases();
    // XDiag: conjugate by H and read the diagonal.
    Eigen::MatrixXcd m = to_eigen(g);
    Eigen::Matrix2cd H;
    double r = 1.0 / std::sqrt(2.0);
    H << r, r, r, -r;
    Eigen::MatrixXcd d = H * m * H;
    if (std::abs(d(0, 1)) > kUnitaryTol || std::abs(d(1, 0)) > kUnitaryTol)
        throw std::invalid_argument("base gate is not X-diagonal");
    return {std::arg(d(0, 0)), std::arg(d(1, 1))};
}

Gate slot_gate(const GateSlot& slot, const std::vector<double>& phases) {
    if (slot.basis == GateSlot::Basis::ZDiag) return Gate::diagonal(slot.support, phases);
    return gates::x_diag(slot.support[0], phases[0], phases[1]);
}

Circuit rebuild_base(FamilyKind family, const Architecture& arch,
                     const PhaseAssignment& worst, const std::vector<Gate>& haar_base) {
    Circuit c;
    c.n_qubits = arch.n_qubits;
    c.init = family == FamilyKind::QaoaP1 ? InitState::AllPlus : InitState::AllZero;
    if (family == FamilyKind::Iqp)
        for (int q = 0; q < arch.n_qubits; ++q) c.gates.push_back(gates::h(q));
    for (size_t j = 0; j < arch.slots.size(); ++j) {
        if (family == FamilyKind::Haar)
            c.gates.push_back(haar_base[j]);
        else
            c.gates.push_back(slot_gate(arch.slots[j], worst.phases[j]));
    }
    if (family == FamilyKind::Iqp)
        for (int q = 0; q < arch.n_qubits; ++q) c.gates.push_back(gates::h(q));
    return c;
}

std::vector<double> sample_z_phases(const GateSlot& slot, const QaoaPhaseDistribution& dist,
                                    int n, std::mt19937_64& eng) {
    using Kind = QaoaPhaseDistribution::Kind;
    int d = slot.dim();
    std::vector<double> ph(d);
    switch (dist.kind) {
        case Kind::UniformPhases:
            for (double& p : ph) p = uniform_phase(eng);
            break;
        case Kind::SherringtonKirkpatrick: {
            if (slot.support.size() != 2)
                throw std::invalid_argument("SK phases need two-qubit Z slots");
            double j = standard_normal(eng) / std::sqrt(static_cast<double>(n));
            // exp(i j sz sz): sign pattern (+,-,-,+) over (b0, b1)
            ph = {j, -j, -j, j};
            break;
        }
        case Kind::ErdosRenyiWeightedMaxCut: {
            if (slot.support.size() != 2)
                throw std::invalid_argument("ER phases need two-qubit Z slots");
            // centered, standardized weighted adjacency: Adj/sqrt(p)
            bool present = uniform01(eng) < dist.edge_prob;
            double w = standard_normal(eng);
            double j = present ? w / std::sqrt(dist.edge_prob) : 0.0;
            // MaxCut cost J * (b0 xor b1)
            ph = {0.0, j, j, 0.0};
            break;
        }
    }
    return ph;
}

}  // namespace

Circuit trivial_base(const Architecture& arch, FamilyKind family) {
    Circuit c;
    c.n_qubits = arch.n_qubits;
    c.init = family == FamilyKind::QaoaP1 ? InitState::AllPlus : InitState::AllZero;
    if (family == FamilyKind::Iqp)
        for (int q = 0; q < arch.n_qubits; ++q) c.gates.push_back(gates::h(q));
    for (const GateSlot& s : arch.slots) {
        if (family == FamilyKind::Haar) {
            if (s.support.size() == 1)
                c.gates.push_back(gates::identity1(s.support[0]));
            else
                c.gates.push_back(
                    from_eigen(s.support, Eigen::MatrixXcd::Identity(4, 4), "I2"));
        } else {
            c.gates.push_back(slot_gate(s, std::vector<double>(s.dim(), 0.0)));
        }
    }
    if (family == FamilyKind::Iqp)
        for (int q = 0; q < arch.n_qubits; ++q) c.gates.push_back(gates::h(q));
    return c;
}

RandomDraw sample_random_draw(FamilyKind family, const Architecture& arch,
                              const Circuit& base_circuit,
                              std::optional<QaoaPhaseDistribution> dist, uint64_t seed) {
    validate_layout(family, arch);
    validate_base_shape(family, arch, base_circuit);
    RandomDraw draw;
    draw.family = family;
    draw.arch = arch;
    draw.seed = seed;
    if (family == FamilyKind::QaoaP1)
        draw.dist = dist.value_or(QaoaPhaseDistribution::uniform());
    else if (dist.has_value())
        throw std::invalid_argument("phase distribution applies to QAOA only");

    size_t off = slot_gate_offset(family, arch.n_qubits);
    if (family == FamilyKind::Haar) {
        std::vector<Gate> base_gates;
        for (size_t j = 0; j < arch.slots.size(); ++j) {
            base_gates.push_back(base_circuit.gates[off + j]);
            draw.haar_gates.push_back(
                haar_unitary(arch.slots[j].dim(), split_seed(seed, j)));
        }
        draw.base = rebuild_base(family, arch, {}, base_gates);
        return draw;
    }

    for (size_t j = 0; j < arch.slots.size(); ++j) {
        const GateSlot& slot = arch.slots[j];
        draw.worst.phases.push_back(extract_worst_phases(slot, base_circuit.gates[off + j]));
        auto eng = make_engine(split_seed(seed, j));
        if (slot.basis == GateSlot::Basis::XDiag) {
            draw.random.phases.push_back({uniform_phase(eng), uniform_phase(eng)});
        } else {
            draw.random.phases.push_back(sample_z_phases(slot, draw.dist, arch.n_qubits, eng));
        }
    }
    draw.base = rebuild_base(family, arch, draw.worst, {});
    return draw;
}

Gate haar_unitary(int dim, uint64_t seed) {
    if (dim != 2 && dim != 4) throw std::invalid_argument("haar_unitary supports dim 2 or 4");
    auto eng = make_engine(seed);
    Eigen::MatrixXcd z(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) {
            double re = standard_normal(eng);
            double im = standard_normal(eng);
            z(r, c) = cplx(re, im) / std::sqrt(2.0);
        }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
    Eigen::MatrixXcd q = qr.householderQ();
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int c = 0; c < dim; ++c) {
        cplx d = r(c, c);
        q.col(c) *= d / std::abs(d);
    }
    std::vector<int> support(dim == 2 ? 1 : 2);
    for (size_t i = 0; i < support.size(); ++i) support[i] = static_cast<int>(i);
    return from_eigen(support, q, "HAAR");
}

namespace {

// Schur form of a unitary: T is diagonal up to roundoff and the Schur basis
// is orthonormal regardless of eigenvalue degeneracy.
void unitary_schur(const Gate& g, Eigen::MatrixXcd& basis, std::vector<double>& phases) {
    Eigen::MatrixXcd m = to_eigen(g);
    double dev = (m.adjoint() * m - Eigen::MatrixXcd::Identity(m.rows(), m.cols())).norm();
    if (dev > kUnitaryTol) throw std::invalid_argument("matrix is not unitary within 1e-10");
    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(m);
    basis = schur.matrixU();
    phases.resize(m.rows());
    for (int i = 0; i < m.rows(); ++i) phases[i] = std::arg(schur.matrixT()(i, i));
}

}  // namespace

Gate unitary_fractional_power(const Gate& h, double exponent) {
    Eigen::MatrixXcd basis;
    std::vector<double> phases;
    unitary_schur(h, basis, phases);
    Eigen::VectorXcd d(phases.size());
    for (size_t i = 0; i < phases.size(); ++i) d(i) = std::polar(1.0, exponent * phases[i]);
    Eigen::MatrixXcd out = basis * d.asDiagonal() * basis.adjoint();
    return from_eigen(h.support(), out);
}

std::vector<double> unitary_eigenphases(const Gate& g) {
    Eigen::MatrixXcd basis;
    std::vector<double> phases;
    unitary_schur(g, basis, phases);
    return phases;
}

Circuit build_interpolated_circuit(const RandomDraw& draw, double theta) {
    const int m = draw.m();
    if (theta < 0.0 || theta > m) throw std::invalid_argument("theta outside [0, m]");
    const double s = 1.0 - theta / m;
    Circuit c;
    c.n_qubits = draw.n();
    c.init = draw.family == FamilyKind::QaoaP1 ? InitState::AllPlus : InitState::AllZero;
    if (draw.family == FamilyKind::Iqp)
        for (int q = 0; q < draw.n(); ++q) c.gates.push_back(gates::h(q));
    for (size_t j = 0; j < draw.arch.slots.size(); ++j) {
        const GateSlot& slot = draw.arch.slots[j];
        if (draw.family == FamilyKind::Haar) {
            const Gate& base_gate = draw.base.gates[j];
            if (s == 0.0) {
                c.gates.push_back(base_gate);  // C(m) = C exactly
            } else {
                Gate pert = unitary_fractional_power(draw.haar_gates[j], s);
                Eigen::MatrixXcd u = to_eigen(pert) * to_eigen(base_gate);
                c.gates.push_back(from_eigen(slot.support, u));
            }
            continue;
        }
        std::vector<double> ph(slot.dim());
        for (int k = 0; k < slot.dim(); ++k)
            ph[k] = draw.worst.phases[j][k] + s * draw.random.phases[j][k];
        c.gates.push_back(slot_gate(slot, ph));
    }
    if (draw.family == FamilyKind::Iqp)
        for (int q = 0; q < draw.n(); ++q) c.gates.push_back(gates::h(q));
    return c;
}

double p_theta(const RandomDraw& draw, double theta) {
    Circuit c = build_interpolated_circuit(draw, theta);
    return output_probability(c, BitString::zeros(draw.n()));
}

namespace {

// Accumulated phase over all slots of one global Z (or X) basis string.
void layer_phase_tables(const RandomDraw& draw, GateSlot::Basis basis,
                        std::vector<double>& h_tab, std::vector<double>& phi_tab) {
    const size_t dim = size_t{1} << draw.n();
    h_tab.assign(dim, 0.0);
    phi_tab.assign(dim, 0.0);
    for (size_t j = 0; j < draw.arch.slots.size(); ++j) {
        const GateSlot& slot = draw.arch.slots[j];
        if (slot.basis != basis) continue;
        for (size_t g = 0; g < dim; ++g) {
            size_t loc = 0;
            for (size_t b = 0; b < slot.support.size(); ++b)
                loc |= ((g >> slot.support[b]) & 1u) << b;
            h_tab[g] += draw.worst.phases[j][loc];
            phi_tab[g] += draw.random.phases[j][loc];
        }
    }
}

PathTermSet qaoa_path_terms(const RandomDraw& draw) {
    const int n = draw.n();
    if (n > 3) throw std::invalid_argument("QAOA path enumeration needs n <= 3");
    const size_t dim = size_t{1} << n;
    std::vector<double> hx, px, hz, pz;
    layer_phase_tables(draw, GateSlot::Basis::XDiag, hx, px);
    layer_phase_tables(draw, GateSlot::Basis::ZDiag, hz, pz);
    // <0|x_k><x_k|z_k'><z_k'|+> = 2^{-3n/2} (-1)^{k.k'}
    const double mag = std::pow(2.0, -1.5 * n);
    PathTermSet out;
    out.m = draw.m();
    out.terms.reserve(dim * dim * dim * dim);
    for (size_t k = 0; k < dim; ++k)
        for (size_t kp = 0; kp < dim; ++kp) {
            double h1 = hx[k] + hz[kp], p1 = px[k] + pz[kp];
            double sgn1 = std::popcount(k & kp) % 2 ? -1.0 : 1.0;
            for (size_t l = 0; l < dim; ++l)
                for (size_t lp = 0; lp < dim; ++lp) {
                    double dphi = p1 - px[l] - pz[lp];
                    double dh = h1 - hx[l] - hz[lp];
                    double sgn = sgn1 * (std::popcount(l & lp) % 2 ? -1.0 : 1.0);
                    out.terms.emplace_back(
                        dphi, std::polar(mag * mag, dh) * sgn);
                }
        }
    return out;
}

PathTermSet iqp_path_terms(const RandomDraw& draw) {
    const int n = draw.n();
    if (n > 3) throw std::invalid_argument("IQP path enumeration needs n <= 3");
    const size_t dim = size_t{1} << n;
    std::vector<double> hz, pz;
    layer_phase_tables(draw, GateSlot::Basis::ZDiag, hz, pz);
    // <0|H^n|z><z|H^n|0> = 2^{-n} for every z
    const double mag = std::pow(2.0, -2.0 * n);
    PathTermSet out;
    out.m = draw.m();
    out.terms.reserve(dim * dim);
    for (size_t z = 0; z < dim; ++z)
        for (size_t zp = 0; zp < dim; ++zp)
            out.terms.emplace_back(pz[z] - pz[zp], std::polar(mag, hz[z] - hz[zp]));
    return out;
}

// Applies an arbitrary (not necessarily unitary) small matrix on the
// support qubits; used for the eigenprojectors of the path enumeration.
void apply_small_matrix(StateVector& st, const std::vector<int>& support,
                        const Eigen::MatrixXcd& m) {
    auto& amp = st.amplitudes();
    const size_t k = support.size();
    const int d = 1 << k;
    uint64_t sup_mask = 0;
    for (int q : support) sup_mask |= uint64_t{1} << q;
    std::vector<cplx> in(d), out(d);
    for (uint64_t g = 0; g < amp.size(); ++g) {
        if (g & sup_mask) continue;
        for (int loc = 0; loc < d; ++loc) {
            uint64_t idx = g;
            for (size_t b = 0; b < k; ++b)
                if ((loc >> b) & 1) idx |= uint64_t{1} << support[b];
            in[loc] = amp[idx];
        }
        for (int r = 0; r < d; ++r) {
            cplx acc = 0.0;
            for (int c = 0; c < d; ++c) acc += m(r, c) * in[c];
            out[r] = acc;
        }
        for (int loc = 0; loc < d; ++loc) {
            uint64_t idx = g;
            for (size_t b = 0; b < k; ++b)
                if ((loc >> b) & 1) idx |= uint64_t{1} << support[b];
            amp[idx] = out[loc];
        }
    }
}

PathTermSet haar_path_terms(const RandomDraw& draw) {
    double paths = 1.0;
    for (const GateSlot& s : draw.arch.slots) paths *= s.dim();
    if (paths * paths > 1e7)
        throw std::invalid_argument("Haar path enumeration too large (N^2m > 1e7)");
    const int n = draw.n();

    // Depth-first over eigenprojector choices; leaves carry (sum phi, amp).
    struct Leaf { double phase; cplx amp; };
    std::vector<Leaf> leaves;
    std::vector<Eigen::MatrixXcd> bases(draw.m());
    std::vector<std::vector<double>> phases(draw.m());
    for (int j = 0; j < draw.m(); ++j)
        unitary_schur(draw.haar_gates[j], bases[j], phases[j]);

    struct Node { int j; StateVector st; double phase; };
    std::vector<Node> stack;
    StateVector init(n, InitState::AllZero);
    stack.push_back({0, init, 0.0});
    while (!stack.empty()) {
        Node node = std::move(stack.back());
        stack.pop_back();
        if (node.j == draw.m()) {
            leaves.push_back({node.phase, node.st.amplitude(0)});
            continue;
        }
        const GateSlot& slot = draw.arch.slots[node.j];
        StateVector applied = node.st;
        apply_gate(applied, draw.base.gates[node.j]);
        const Eigen::MatrixXcd& v = bases[node.j];
        for (int k = 0; k < slot.dim(); ++k) {
            Eigen::MatrixXcd proj = v.col(k) * v.col(k).adjoint();
            StateVector next = applied;
            apply_small_matrix(next, slot.support, proj);
            stack.push_back({node.j + 1, std::move(next), node.phase + phases[node.j][k]});
        }
    }
    PathTermSet out;
    out.m = draw.m();
    out.terms.reserve(leaves.size() * leaves.size());
    for (const Leaf& a : leaves)
        for (const Leaf& b : leaves)
            out.terms.emplace_back(a.phase - b.phase, a.amp * std::conj(b.amp));
    return out;
}

}  // namespace

PathTermSet enumerate_path_terms(const RandomDraw& draw) {
    switch (draw.family) {
        case FamilyKind::QaoaP1: return qaoa_path_terms(draw);
        case FamilyKind::Iqp: return iqp_path_terms(draw);
        case FamilyKind::Haar: return haar_path_terms(draw);
    }
    throw std::logic_error("unreachable");
}

double sum_over_paths_probability(const RandomDraw& draw, double theta) {
    PathTermSet terms = enumerate_path_terms(draw);
    const double s = 1.0 - theta / terms.m;
    double re = 0.0, rec = 0.0, im = 0.0, imc = 0.0;
    for (const auto& [dphi, b] : terms.terms) {
        cplx v = std::polar(1.0, s * dphi) * b;
        double y = v.real() - rec;
        double t = re + y;
        rec = (t - re) - y;
        re = t;
        y = v.imag() - imc;
        t = im + y;
        imc = (t - im) - y;
        im = t;
    }
    if (std::abs(im) > 1e-9)
        throw std::runtime_error("path sum imaginary residue exceeds 1e-9");
    return re;
}

RandomDraw hiding_transport(const RandomDraw& draw, const BitString& z) {
    if (draw.family == FamilyKind::Haar)
        throw std::invalid_argument("Haar hiding is delegated to prior work");
    if (z.size() != draw.n()) throw std::invalid_argument("outcome length mismatch");
    RandomDraw out = draw;
    if (draw.family == FamilyKind::QaoaP1) {
        // <z| = <0| X^z and X in the X basis is diag(1, -1): shift the worst
        // phase of the |-> label by pi on each flipped qubit.
        for (size_t j = 0; j < draw.arch.slots.size(); ++j) {
            const GateSlot& slot = draw.arch.slots[j];
            if (slot.basis != GateSlot::Basis::XDiag) continue;
            if (z.bit(slot.support[0]))
                out.worst.phases[j][1] = wrap_2pi(out.worst.phases[j][1] + kPi);
        }
    } else {
        // X^z commuted through the Hadamard layer becomes Z^z; absorb each
        // Z_k into the first Z slot covering qubit k.
        for (int q = 0; q < draw.n(); ++q) {
            if (!z.bit(q)) continue;
            bool absorbed = false;
            for (size_t j = 0; j < draw.arch.slots.size() && !absorbed; ++j) {
                const GateSlot& slot = draw.arch.slots[j];
                auto it = std::find(slot.support.begin(), slot.support.end(), q);
                if (it == slot.support.end()) continue;
                size_t bit = static_cast<size_t>(it - slot.support.begin());
                for (int k = 0; k < slot.dim(); ++k)
                    if ((k >> bit) & 1)
                        out.worst.phases[j][k] = wrap_2pi(out.worst.phases[j][k] + kPi);
                absorbed = true;
            }
            if (!absorbed)
                throw std::invalid_argument("no Z slot covers a flipped qubit");
        }
    }
    out.base = rebuild_base(out.family, out.arch, out.worst, {});
    return out;
}

namespace {

const char* basis_tag(GateSlot::Basis b) {
    switch (b) {
        case GateSlot::Basis::ZDiag: return "z";
        case GateSlot::Basis::XDiag: return "x";
        case GateSlot::Basis::Generic: return "generic";
    }
    return "?";
}

GateSlot::Basis basis_from_tag(const std::string& s) {
    if (s == "z") return GateSlot::Basis::ZDiag;
    if (s == "x") return GateSlot::Basis::XDiag;
    if (s == "generic") return GateSlot::Basis::Generic;
    throw std::invalid_argument("unknown slot basis: " + s);
}

const char* dist_tag(QaoaPhaseDistribution::Kind k) {
    switch (k) {
        case QaoaPhaseDistribution::Kind::UniformPhases: return "uniform";
        case QaoaPhaseDistribution::Kind::SherringtonKirkpatrick: return "sk";
        case QaoaPhaseDistribution::Kind::ErdosRenyiWeightedMaxCut: return "er";
    }
    return "?";
}

QaoaPhaseDistribution::Kind dist_from_tag(const std::string& s) {
    if (s == "uniform") return QaoaPhaseDistribution::Kind::UniformPhases;
    if (s == "sk") return QaoaPhaseDistribution::Kind::SherringtonKirkpatrick;
    if (s == "er") return QaoaPhaseDistribution::Kind::ErdosRenyiWeightedMaxCut;
    throw std::invalid_argument("unknown distribution: " + s);
}

}  // namespace

std::string serialize_draw(const RandomDraw& draw) {
    nlohmann::json j;
    j["family"] = family_name(draw.family);
    j["seed"] = draw.seed;
    j["n"] = draw.arch.n_qubits;
    auto& slots = j["slots"] = nlohmann::json::array();
    for (const GateSlot& s : draw.arch.slots)
        slots.push_back({{"basis", basis_tag(s.basis)}, {"support", s.support}});
    if (draw.family == FamilyKind::QaoaP1)
        j["dist"] = {{"kind", dist_tag(draw.dist.kind)}, {"edge_prob", draw.dist.edge_prob}};
    if (draw.family == FamilyKind::Haar) {
        auto& hg = j["haar_gates"] = nlohmann::json::array();
        for (const Gate& g : draw.haar_gates) {
            nlohmann::json m = nlohmann::json::array();
            for (const cplx& e : g.matrix()) m.push_back({e.real(), e.imag()});
            hg.push_back({{"support", g.support()}, {"matrix", m}});
        }
    } else {
        j["worst"] = draw.worst.phases;
        j["random"] = draw.random.phases;
    }
    j["base"] = format_circuit(draw.base);
    return j.dump(2);
}

RandomDraw parse_draw(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    RandomDraw draw;
    draw.family = family_from_name(j.at("family").get<std::string>());
    draw.seed = j.at("seed").get<uint64_t>();
    draw.arch.n_qubits = j.at("n").get<int>();
    for (const auto& s : j.at("slots"))
        draw.arch.slots.push_back({basis_from_tag(s.at("basis").get<std::string>()),
                                   s.at("support").get<std::vector<int>>()});
    if (j.contains("dist")) {
        draw.dist.kind = dist_from_tag(j["dist"].at("kind").get<std::string>());
        draw.dist.edge_prob = j["dist"].at("edge_prob").get<double>();
    }
    if (j.contains("haar_gates")) {
        for (const auto& g : j["haar_gates"]) {
            auto support = g.at("support").get<std::vector<int>>();
            std::vector<cplx> m;
            for (const auto& e : g.at("matrix"))
                m.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
            draw.haar_gates.push_back(Gate::dense(support, std::move(m), "HAAR"));
        }
    } else {
        draw.worst.phases = j.at("worst").get<std::vector<std::vector<double>>>();
        draw.random.phases = j.at("random").get<std::vector<std::vector<double>>>();
    }
    std::istringstream base_in(j.at("base").get<std::string>());
    draw.base = parse_circuit(base_in);
    validate_layout(draw.family, draw.arch);
    validate_base_shape(draw.family, draw.arch, draw.base);
    return draw;
}

}  // namespace qinterp
