#include "qinterp/statevector.hpp"

#include <cmath>

namespace qinterp {

double kahan_sum(const std::vector<double>& xs) {
    double sum = 0.0, comp = 0.0;
    for (double x : xs) {
        double y = x - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

StateVector::StateVector(int n_qubits, InitState init) : n_(n_qubits) {
    if (n_qubits < 1 || n_qubits > 24) throw std::invalid_argument("qubit count out of range");
    amp_.assign(size_t{1} << n_qubits, cplx(0.0, 0.0));
    if (init == InitState::AllZero) {
        amp_[0] = 1.0;
    } else {
        double a = std::pow(2.0, -0.5 * n_qubits);
        for (auto& v : amp_) v = a;
    }
}

double StateVector::norm() const {
    double sum = 0.0, comp = 0.0;
    for (const cplx& a : amp_) {
        double y = std::norm(a) - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return std::sqrt(sum);
}

namespace {

void apply_dense1(std::vector<cplx>& amp, const std::vector<cplx>& m, int q) {
    const size_t step = size_t{1} << q;
    const size_t block = step << 1;
    const size_t dim = amp.size();
    for (size_t base = 0; base < dim; base += block) {
        for (size_t off = 0; off < step; ++off) {
            const size_t i0 = base + off;
            const size_t i1 = i0 + step;
            const cplx a = amp[i0], b = amp[i1];
            amp[i0] = m[0] * a + m[1] * b;
            amp[i1] = m[2] * a + m[3] * b;
        }
    }
}

// support[0] = LSB of the local index.
void apply_dense2(std::vector<cplx>& amp, const std::vector<cplx>& m, int q0, int q1) {
    const size_t s0 = size_t{1} << q0;
    const size_t s1 = size_t{1} << q1;
    const size_t dim = amp.size();
    const size_t mask = s0 | s1;
    for (size_t g = 0; g < dim; ++g) {
        if (g & mask) continue;  // visit each quadruple once, at its 00 corner
        const size_t i00 = g, i01 = g | s0, i10 = g | s1, i11 = g | mask;
        const cplx v0 = amp[i00], v1 = amp[i01], v2 = amp[i10], v3 = amp[i11];
        amp[i00] = m[0] * v0 + m[1] * v1 + m[2] * v2 + m[3] * v3;
        amp[i01] = m[4] * v0 + m[5] * v1 + m[6] * v2 + m[7] * v3;
        amp[i10] = m[8] * v0 + m[9] * v1 + m[10] * v2 + m[11] * v3;
        amp[i11] = m[12] * v0 + m[13] * v1 + m[14] * v2 + m[15] * v3;
    }
}

void apply_diagonal(std::vector<cplx>& amp, const Gate& g) {
    const auto& sup = g.support();
    const auto& ph = g.phases();
    std::vector<cplx> eig(ph.size());
    for (size_t i = 0; i < ph.size(); ++i) eig[i] = std::polar(1.0, ph[i]);
    const size_t dim = amp.size();
    for (size_t gidx = 0; gidx < dim; ++gidx) {
        size_t loc = 0;
        for (size_t b = 0; b < sup.size(); ++b) loc |= ((gidx >> sup[b]) & 1u) << b;
        amp[gidx] *= eig[loc];
    }
}

}  // namespace

void apply_gate(StateVector& state, const Gate& gate) {
    for (int q : gate.support())
        if (q < 0 || q >= state.n_qubits())
            throw std::invalid_argument("gate support out of range for state");
    auto& amp = state.amplitudes();
    if (gate.kind() == Gate::Kind::Diagonal) {
        apply_diagonal(amp, gate);
    } else if (gate.arity() == 1) {
        apply_dense1(amp, gate.matrix(), gate.support()[0]);
    } else {
        apply_dense2(amp, gate.matrix(), gate.support()[0], gate.support()[1]);
    }
}

StateVector simulate(const Circuit& circuit) {
    circuit.check();
    StateVector st(circuit.n_qubits, circuit.init);
    for (const Gate& g : circuit.gates) apply_gate(st, g);
    return st;
}

double output_probability(const Circuit& circuit, const BitString& outcome) {
    if (outcome.size() != circuit.n_qubits)
        throw std::invalid_argument("outcome length does not match qubit count");
    StateVector st = simulate(circuit);
    return std::norm(st.amplitude(outcome.bits()));
}

std::vector<double> output_distribution(const Circuit& circuit) {
    StateVector st = simulate(circuit);
    std::vector<double> p(st.dim());
    for (size_t i = 0; i < p.size(); ++i) p[i] = std::norm(st.amplitude(i));
    return p;
}

ConditionalState conditional_on(const StateVector& state, const PostselectMask& mask) {
    if (mask.qubits.size() != mask.bits.size())
        throw std::invalid_argument("postselect mask qubit/bit count mismatch");
    uint64_t sel_mask = 0, sel_bits = 0;
    for (size_t i = 0; i < mask.qubits.size(); ++i) {
        int q = mask.qubits[i];
        if (q < 0 || q >= state.n_qubits() || (sel_mask >> q) & 1)
            throw std::invalid_argument("bad postselect mask");
        sel_mask |= uint64_t{1} << q;
        if (mask.bits[i]) sel_bits |= uint64_t{1} << q;
    }
    int n_data = state.n_qubits() - static_cast<int>(mask.qubits.size());
    if (n_data < 1) throw std::invalid_argument("postselect mask covers all qubits");

    // data qubits in increasing order keep their relative order
    std::vector<int> data;
    for (int q = 0; q < state.n_qubits(); ++q)
        if (!((sel_mask >> q) & 1)) data.push_back(q);

    StateVector out(n_data, InitState::AllZero);
    out.amplitudes().assign(out.dim(), cplx(0.0, 0.0));
    double psum = 0.0, comp = 0.0;
    for (uint64_t g = 0; g < state.dim(); ++g) {
        if ((g & sel_mask) != sel_bits) continue;
        uint64_t idx = 0;
        for (size_t b = 0; b < data.size(); ++b) idx |= ((g >> data[b]) & 1u) << b;
        out.amplitudes()[idx] = state.amplitude(g);
        double y = std::norm(state.amplitude(g)) - comp;
        double t = psum + y;
        comp = (t - psum) - y;
        psum = t;
    }
    if (psum < 1e-12)
        throw ZeroPostselectionProbability("postselection probability vanishes");
    double scale = 1.0 / std::sqrt(psum);
    for (auto& a : out.amplitudes()) a *= scale;
    return {std::move(out), psum};
}

double postselected_probability(const Circuit& circuit, const PostselectMask& mask,
                                const BitString& outcome) {
    StateVector st = simulate(circuit);
    if (mask.qubits.empty()) {
        if (outcome.size() != circuit.n_qubits)
            throw std::invalid_argument("outcome length does not match qubit count");
        return std::norm(st.amplitude(outcome.bits()));
    }
    ConditionalState cond = conditional_on(st, mask);
    if (outcome.size() != cond.state.n_qubits())
        throw std::invalid_argument("outcome length does not match data qubit count");
    return std::norm(cond.state.amplitude(outcome.bits()));
}

}  // namespace qinterp
