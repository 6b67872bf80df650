#include "qinterp/worstcase.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qinterp/rng.hpp"
#include "qinterp/statevector.hpp"

namespace qinterp {

namespace {
constexpr double kPi = std::numbers::pi;
}

SignFunction SignFunction::constant(int n, int8_t value) {
    SignFunction f{n, std::vector<int8_t>(size_t{1} << n, value)};
    f.check();
    return f;
}

SignFunction SignFunction::parity(int n) {
    SignFunction f{n, std::vector<int8_t>(size_t{1} << n)};
    for (size_t x = 0; x < f.table.size(); ++x)
        f.table[x] = std::popcount(x) % 2 ? -1 : 1;
    return f;
}

SignFunction SignFunction::random(int n, uint64_t seed) {
    auto eng = make_engine(seed);
    SignFunction f{n, std::vector<int8_t>(size_t{1} << n)};
    for (auto& v : f.table) v = (eng() & 1) ? 1 : -1;
    return f;
}

long long SignFunction::sum() const {
    long long s = 0;
    for (int8_t v : table) s += v;
    return s;
}

void SignFunction::check() const {
    if (n < 1 || n > 20) throw std::invalid_argument("sign function arity out of range");
    if (table.size() != (size_t{1} << n))
        throw std::invalid_argument("sign function table size mismatch");
    for (int8_t v : table)
        if (v != 1 && v != -1) throw std::invalid_argument("sign function entries must be +-1");
}

SignFunction parse_sign_function(std::istream& in) {
    std::string header;
    if (!std::getline(in, header) || header.rfind("n=", 0) != 0)
        throw std::invalid_argument("sign function file needs an n= header");
    SignFunction f;
    f.n = std::stoi(header.substr(2));
    std::string line;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string tok;
        if (!(ss >> tok)) continue;
        if (tok == "+1" || tok == "1")
            f.table.push_back(1);
        else if (tok == "-1")
            f.table.push_back(-1);
        else
            throw std::invalid_argument("sign function entries must be +-1");
    }
    f.check();
    return f;
}

SignFunction parse_sign_function_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open sign function file: " + path);
    return parse_sign_function(in);
}

std::string format_sign_function(const SignFunction& f) {
    std::ostringstream out;
    out << "n=" << f.n << "\n";
    for (int8_t v : f.table) out << (v > 0 ? "+1" : "-1") << "\n";
    return out.str();
}

double hard_probability_reference(const SignFunction& f) {
    f.check();
    double s = static_cast<double>(f.sum());
    return s * s / std::pow(4.0, f.n);
}

namespace {

// Phases of f(x) = (-i)^{|x|} f~(x): multiples of pi/2.
std::vector<double> qaoa_phase_table(const SignFunction& f) {
    std::vector<double> ph(f.table.size());
    for (size_t x = 0; x < ph.size(); ++x) {
        cplx v = std::pow(cplx(0, -1), std::popcount(x)) * static_cast<double>(f.at(x));
        ph[x] = std::arg(v);
    }
    return ph;
}

std::vector<int> all_qubits(int n) {
    std::vector<int> q(n);
    for (int i = 0; i < n; ++i) q[i] = i;
    return q;
}

}  // namespace

Circuit build_qaoa_hard_circuit(const SignFunction& f) {
    f.check();
    Circuit c;
    c.n_qubits = f.n;
    c.init = InitState::AllPlus;
    c.gates.push_back(gates::diag(all_qubits(f.n), qaoa_phase_table(f)));
    for (int q = 0; q < f.n; ++q) c.gates.push_back(gates::rx(-kPi / 2, q));  // exp(i pi/4 X)
    return c;
}

Circuit build_iqp_hard_circuit(const SignFunction& f) {
    f.check();
    Circuit c;
    c.n_qubits = f.n;
    c.init = InitState::AllZero;
    std::vector<double> ph(f.table.size());
    for (size_t x = 0; x < ph.size(); ++x) ph[x] = f.at(x) > 0 ? 0.0 : kPi;
    for (int q = 0; q < f.n; ++q) c.gates.push_back(gates::h(q));
    c.gates.push_back(gates::diag(all_qubits(f.n), ph));
    for (int q = 0; q < f.n; ++q) c.gates.push_back(gates::h(q));
    return c;
}

GadgetExpansion hadamard_gadget_expand(const Circuit& circuit) {
    circuit.check();
    for (const Gate& g : circuit.gates) {
        if (g.kind() == Gate::Kind::Diagonal) continue;
        if (g.name() == "H" || g.name() == "S" || g.name() == "T" || g.name() == "CZ") continue;
        throw std::invalid_argument("gadget expansion supports {H, CZ, S, T, DIAG} only");
    }
    GadgetExpansion out;
    out.data_map.resize(circuit.n_qubits);
    std::vector<int> carrier(circuit.n_qubits);  // logical qubit -> physical qubit
    for (int q = 0; q < circuit.n_qubits; ++q) carrier[q] = q;
    int n_phys = circuit.n_qubits;

    std::vector<Gate> body;
    std::vector<int> prep;  // ancillas needing an initial H when init is |0^n>
    for (const Gate& g : circuit.gates) {
        if (g.kind() == Gate::Kind::Dense && g.name() == "H") {
            int logical = g.support()[0];
            int p = carrier[logical];
            int anc = n_phys++;
            prep.push_back(anc);
            body.push_back(gates::cz(anc, p));
            body.push_back(gates::s(p));
            body.push_back(gates::rx(kPi / 2, p));  // exp(-i pi/4 X)
            out.mask_qubits.push_back(p);
            carrier[logical] = anc;
            continue;
        }
        // remap supports through the carrier table
        std::vector<int> sup = g.support();
        for (int& q : sup) q = carrier[q];
        if (g.kind() == Gate::Kind::Diagonal)
            body.push_back(Gate::diagonal(sup, g.phases(), g.name()));
        else
            body.push_back(Gate::dense(sup, g.matrix(), g.name()));
    }

    out.circuit.n_qubits = n_phys;
    out.circuit.init = circuit.init;
    if (circuit.init == InitState::AllZero)
        for (int anc : prep) out.circuit.gates.push_back(gates::h(anc));
    for (Gate& g : body) out.circuit.gates.push_back(std::move(g));
    for (int q = 0; q < circuit.n_qubits; ++q) out.data_map[q] = carrier[q];
    return out;
}

double IsingCoefficients::phase_at(uint64_t z) const {
    auto sz = [&](int j) { return (z >> j) & 1 ? -1.0 : 1.0; };
    double acc = global;
    for (int j = 0; j < n; ++j) acc += linear[j] * sz(j);
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) acc += quad[j][k] * sz(j) * sz(k);
    return acc;
}

namespace {

// Total diagonal phase table of a Z-diagonal circuit, as real accumulated
// values (well-defined up to the per-gate principal branches).
std::vector<double> diagonal_phase_table(const Circuit& c) {
    if (c.n_qubits > 12) throw std::invalid_argument("diagonal enumeration needs n <= 12");
    std::vector<double> tab(size_t{1} << c.n_qubits, 0.0);
    for (const Gate& g : c.gates) {
        std::vector<double> ph = g.diagonal_phases();
        for (size_t z = 0; z < tab.size(); ++z) {
            size_t loc = 0;
            for (size_t b = 0; b < g.support().size(); ++b)
                loc |= ((z >> g.support()[b]) & 1u) << b;
            tab[z] += ph[loc];
        }
    }
    return tab;
}

}  // namespace

IsingCoefficients compile_to_ising(const Circuit& circuit) {
    circuit.check();
    for (const Gate& g : circuit.gates)
        if (!g.is_diagonal_matrix())
            throw std::invalid_argument("compile_to_ising needs Z-diagonal gates");
    const int n = circuit.n_qubits;
    std::vector<double> tab = diagonal_phase_table(circuit);

    // Multilinear coefficients over x in {0,1} from the weight <= 2 strings.
    double a0 = tab[0];
    std::vector<double> aj(n);
    for (int j = 0; j < n; ++j) aj[j] = tab[uint64_t{1} << j] - a0;
    std::vector<std::vector<double>> ajk(n, std::vector<double>(n, 0.0));
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k)
            ajk[j][k] = tab[(uint64_t{1} << j) | (uint64_t{1} << k)] - aj[j] - aj[k] - a0;

    IsingCoefficients out;
    out.n = n;
    // Change of variables x_j = (1 - s_j)/2.
    out.global = a0;
    out.linear.assign(n, 0.0);
    out.quad.assign(n, std::vector<double>(n, 0.0));
    for (int j = 0; j < n; ++j) {
        out.global += aj[j] / 2;
        out.linear[j] -= aj[j] / 2;
    }
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            out.global += ajk[j][k] / 4;
            out.linear[j] -= ajk[j][k] / 4;
            out.linear[k] -= ajk[j][k] / 4;
            out.quad[j][k] = out.quad[k][j] = ajk[j][k] / 4;
        }

    // Entrywise re-synthesis check, mod-2pi safe via complex comparison.
    for (size_t z = 0; z < tab.size(); ++z) {
        cplx want = std::polar(1.0, tab[z]);
        cplx got = std::polar(1.0, out.phase_at(z));
        if (std::abs(want - got) > 1e-9)
            throw NotIsingRepresentable(
                "diagonal has multilinear terms of degree > 2 (not an Ising interaction)");
    }
    return out;
}

namespace {

bool is_h_layer(const Circuit& c, size_t start, size_t count) {
    std::vector<int> seen(c.n_qubits, 0);
    for (size_t i = start; i < start + count; ++i) {
        const Gate& g = c.gates[i];
        if (g.kind() != Gate::Kind::Dense || g.name() != "H") return false;
        ++seen[g.support()[0]];
    }
    for (int s : seen)
        if (s != 1) return false;
    return true;
}

}  // namespace

cplx amplitude_as_ising_partition(const Circuit& iqp) {
    iqp.check();
    const size_t n = iqp.n_qubits;
    if (iqp.init != InitState::AllZero || iqp.gates.size() < 2 * n ||
        !is_h_layer(iqp, 0, n) || !is_h_layer(iqp, iqp.gates.size() - n, n))
        throw std::invalid_argument("not an IQP-form circuit");
    Circuit middle;
    middle.n_qubits = iqp.n_qubits;
    middle.gates.assign(iqp.gates.begin() + n, iqp.gates.end() - n);
    for (const Gate& g : middle.gates)
        if (!g.is_diagonal_matrix())
            throw std::invalid_argument("IQP middle block must be Z-diagonal");

    std::vector<double> tab;
    try {
        IsingCoefficients ising = compile_to_ising(middle);
        tab.resize(size_t{1} << n);
        for (size_t z = 0; z < tab.size(); ++z) tab[z] = ising.phase_at(z);
    } catch (const NotIsingRepresentable&) {
        tab = diagonal_phase_table(middle);  // raw diagonal fallback
    }

    double re = 0.0, im = 0.0, rec = 0.0, imc = 0.0;
    for (double ph : tab) {
        double y = std::cos(ph) - rec;
        double t = re + y;
        rec = (t - re) - y;
        re = t;
        y = std::sin(ph) - imc;
        t = im + y;
        imc = (t - im) - y;
        im = t;
    }
    cplx amp = cplx(re, im) / std::pow(2.0, static_cast<double>(n));

    cplx direct = simulate(iqp).amplitude(0);
    if (std::abs(amp - direct) > 1e-9)
        throw std::runtime_error("partition sum does not match the simulated amplitude");
    return amp;
}

}  // namespace qinterp
