#include "qinterp/circuit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace qinterp {

namespace {

constexpr double kPi = std::numbers::pi;

void check_unitary(const std::vector<cplx>& m, int dim) {
    // ||U^dag U - I||_F <= kUnitaryTol
    double acc = 0.0;
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            cplx e = 0.0;
            for (int k = 0; k < dim; ++k) e += std::conj(m[k * dim + r]) * m[k * dim + c];
            if (r == c) e -= 1.0;
            acc += std::norm(e);
        }
    }
    if (std::sqrt(acc) > kUnitaryTol)
        throw std::invalid_argument("gate matrix is not unitary within 1e-10");
}

}  // namespace

BitString::BitString(int n, uint64_t bits) : n_(n), bits_(bits) {
    if (n < 0 || n > 63) throw std::invalid_argument("BitString length out of range");
    if (n < 64 && (bits >> n) != 0) throw std::invalid_argument("BitString has stray bits");
}

BitString BitString::from_string(const std::string& s) {
    uint64_t b = 0;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '1')
            b |= uint64_t{1} << i;
        else if (s[i] != '0')
            throw std::invalid_argument("BitString characters must be 0 or 1");
    }
    return BitString(static_cast<int>(s.size()), b);
}

int BitString::weight() const { return std::popcount(bits_); }

std::string BitString::str() const {
    std::string s(n_, '0');
    for (int i = 0; i < n_; ++i)
        if (bit(i)) s[i] = '1';
    return s;
}

Gate Gate::dense(std::vector<int> support, std::vector<cplx> matrix, std::string name) {
    if (support.size() != 1 && support.size() != 2)
        throw std::invalid_argument("dense gates act on 1 or 2 qubits");
    int dim = 1 << support.size();
    if (matrix.size() != static_cast<size_t>(dim * dim))
        throw std::invalid_argument("gate matrix size does not match support");
    if (support.size() == 2 && support[0] == support[1])
        throw std::invalid_argument("gate support indices must be distinct");
    check_unitary(matrix, dim);
    Gate g;
    g.kind_ = Kind::Dense;
    g.support_ = std::move(support);
    g.matrix_ = std::move(matrix);
    g.name_ = std::move(name);
    return g;
}

Gate Gate::diagonal(std::vector<int> support, std::vector<double> phases, std::string name) {
    if (support.empty() || support.size() > 16)
        throw std::invalid_argument("diagonal gate arity out of range");
    std::vector<int> sorted = support;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("gate support indices must be distinct");
    if (phases.size() != (size_t{1} << support.size()))
        throw std::invalid_argument("diagonal phase count does not match support");
    for (double p : phases)
        if (!std::isfinite(p)) throw std::invalid_argument("diagonal phase is not finite");
    Gate g;
    g.kind_ = Kind::Diagonal;
    g.support_ = std::move(support);
    g.phases_ = std::move(phases);
    g.name_ = std::move(name);
    return g;
}

const std::vector<cplx>& Gate::matrix() const {
    if (kind_ != Kind::Dense) throw std::logic_error("diagonal gate has no dense matrix");
    return matrix_;
}

const std::vector<double>& Gate::phases() const {
    if (kind_ != Kind::Diagonal) throw std::logic_error("dense gate has no phase table");
    return phases_;
}

cplx Gate::entry(int r, int c) const {
    if (kind_ == Kind::Dense) return matrix_[r * dim() + c];
    if (r != c) return 0.0;
    return std::polar(1.0, phases_[r]);
}

bool Gate::is_diagonal_matrix(double tol) const {
    if (kind_ == Kind::Diagonal) return true;
    int d = dim();
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
            if (r != c && std::abs(matrix_[r * d + c]) > tol) return false;
    return true;
}

std::vector<double> Gate::diagonal_phases(double tol) const {
    if (kind_ == Kind::Diagonal) return phases_;
    if (!is_diagonal_matrix(tol))
        throw std::invalid_argument("gate is not diagonal");
    std::vector<double> ph(dim());
    for (int i = 0; i < dim(); ++i) ph[i] = std::arg(matrix_[i * dim() + i]);
    return ph;
}

double Gate::frobenius_distance(const Gate& other) const {
    if (support_ != other.support_) throw std::invalid_argument("gate supports differ");
    double acc = 0.0;
    for (int r = 0; r < dim(); ++r)
        for (int c = 0; c < dim(); ++c) acc += std::norm(entry(r, c) - other.entry(r, c));
    return std::sqrt(acc);
}

namespace gates {

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}

Gate h(int q) {
    return Gate::dense({q}, {kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2}, "H");
}
Gate x(int q) { return Gate::dense({q}, {0, 1, 1, 0}, "X"); }
Gate z(int q) { return Gate::diagonal({q}, {0.0, kPi}, "Z"); }
Gate s(int q) { return Gate::diagonal({q}, {0.0, kPi / 2}, "S"); }
Gate t(int q) { return Gate::diagonal({q}, {0.0, kPi / 4}, "T"); }
Gate cz(int a, int b) { return Gate::diagonal({a, b}, {0.0, 0.0, 0.0, kPi}, "CZ"); }

Gate cnot(int control, int target) {
    // support order (target, control): local index = target_bit + 2*control_bit
    return Gate::dense({target, control},
                       {1, 0, 0, 0,
                        0, 1, 0, 0,
                        0, 0, 0, 1,
                        0, 0, 1, 0},
                       "CNOT");
}

Gate rz(double angle, int q) { return Gate::diagonal({q}, {-angle / 2, angle / 2}, "RZ"); }

Gate rx(double angle, int q) {
    double c = std::cos(angle / 2), s = std::sin(angle / 2);
    return Gate::dense({q}, {cplx(c, 0), cplx(0, -s), cplx(0, -s), cplx(c, 0)}, "RX");
}

Gate diag(std::vector<int> support, std::vector<double> phases) {
    return Gate::diagonal(std::move(support), std::move(phases), "DIAG");
}

Gate identity1(int q) { return Gate::diagonal({q}, {0.0, 0.0}, "I"); }
Gate identity2(int a, int b) { return Gate::diagonal({a, b}, {0, 0, 0, 0}, "I2"); }

Gate x_diag(int q, double phi0, double phi1) {
    cplx e0 = std::polar(1.0, phi0), e1 = std::polar(1.0, phi1);
    // H diag(e0, e1) H
    cplx a = 0.5 * (e0 + e1), b = 0.5 * (e0 - e1);
    return Gate::dense({q}, {a, b, b, a}, "XDIAG");
}

}  // namespace gates

void Circuit::check() const {
    if (n_qubits < 1 || n_qubits > 24) throw std::invalid_argument("qubit count out of range");
    for (const Gate& g : gates)
        for (int q : g.support())
            if (q < 0 || q >= n_qubits) throw std::invalid_argument("gate support out of range");
}

namespace {

std::vector<double> parse_args(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

std::vector<cplx> parse_matrix_args(const std::string& s) {
    std::vector<cplx> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        auto colon = tok.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("matrix entry needs re:im");
        out.emplace_back(std::stod(tok.substr(0, colon)), std::stod(tok.substr(colon + 1)));
    }
    return out;
}

}  // namespace

Circuit parse_circuit(std::istream& in) {
    Circuit c;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string word;
        if (!(ss >> word)) continue;
        if (word[0] == '#') continue;
        if (!have_header) {
            if (word.rfind("n=", 0) != 0) throw std::invalid_argument("missing circuit header");
            c.n_qubits = std::stoi(word.substr(2));
            std::string init;
            ss >> init;
            if (init == "init=zero")
                c.init = InitState::AllZero;
            else if (init == "init=plus")
                c.init = InitState::AllPlus;
            else
                throw std::invalid_argument("header init must be zero or plus");
            have_header = true;
            continue;
        }
        if (word != "GATE") throw std::invalid_argument("expected GATE line: " + line);
        std::string token, qubits;
        if (!(ss >> token >> qubits)) throw std::invalid_argument("malformed GATE line: " + line);
        std::vector<int> qs;
        {
            std::stringstream qss(qubits);
            std::string tok;
            while (std::getline(qss, tok, ',')) qs.push_back(std::stoi(tok));
        }
        auto paren = token.find('(');
        std::string name = token.substr(0, paren);
        std::string args = paren == std::string::npos
                               ? ""
                               : token.substr(paren + 1, token.rfind(')') - paren - 1);
        if (name == "H" && qs.size() == 1)
            c.gates.push_back(gates::h(qs[0]));
        else if (name == "X" && qs.size() == 1)
            c.gates.push_back(gates::x(qs[0]));
        else if (name == "Z" && qs.size() == 1)
            c.gates.push_back(gates::z(qs[0]));
        else if (name == "S" && qs.size() == 1)
            c.gates.push_back(gates::s(qs[0]));
        else if (name == "T" && qs.size() == 1)
            c.gates.push_back(gates::t(qs[0]));
        else if (name == "CZ" && qs.size() == 2)
            c.gates.push_back(gates::cz(qs[0], qs[1]));
        else if (name == "RZ" && qs.size() == 1)
            c.gates.push_back(gates::rz(parse_args(args).at(0), qs[0]));
        else if (name == "RX" && qs.size() == 1)
            c.gates.push_back(gates::rx(parse_args(args).at(0), qs[0]));
        else if (name == "DIAG")
            c.gates.push_back(gates::diag(qs, parse_args(args)));
        else if (name == "MATRIX")
            c.gates.push_back(Gate::dense(qs, parse_matrix_args(args)));
        else
            throw std::invalid_argument("unknown gate: " + token);
    }
    if (!have_header) throw std::invalid_argument("empty circuit file");
    c.check();
    return c;
}

Circuit parse_circuit_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open circuit file: " + path);
    return parse_circuit(in);
}

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string format_circuit(const Circuit& c) {
    std::ostringstream out;
    out << "n=" << c.n_qubits << " init=" << (c.init == InitState::AllZero ? "zero" : "plus")
        << "\n";
    for (const Gate& g : c.gates) {
        out << "GATE ";
        if (g.kind() == Gate::Kind::Dense && (g.name() == "H" || g.name() == "X")) {
            out << g.name() << " " << g.support()[0] << "\n";
            continue;
        }
        if (g.kind() == Gate::Kind::Diagonal) {
            out << "DIAG(";
            for (size_t i = 0; i < g.phases().size(); ++i)
                out << (i ? "," : "") << fmt17(g.phases()[i]);
            out << ")";
        } else {
            out << "MATRIX(";
            const auto& m = g.matrix();
            for (size_t i = 0; i < m.size(); ++i)
                out << (i ? "," : "") << fmt17(m[i].real()) << ":" << fmt17(m[i].imag());
            out << ")";
        }
        out << " ";
        for (size_t i = 0; i < g.support().size(); ++i)
            out << (i ? "," : "") << g.support()[i];
        out << "\n";
    }
    return out.str();
}

}  // namespace qinterp
