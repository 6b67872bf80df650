#include <sstream>

#include "doctest.h"
#include "qinterp/statevector.hpp"
#include "testutil.hpp"

using namespace qinterp;
namespace tu = qinterp::testutil;

TEST_SUITE_BEGIN("circuit_io");

TEST_CASE("named gates parse and simulate") {
    std::istringstream in(
        "n=2 init=zero\n"
        "GATE H 0\n"
        "GATE S 0\n"
        "GATE T 1\n"
        "GATE CZ 0,1\n"
        "GATE RZ(0.5) 1\n"
        "GATE RX(-1.5707963267948966) 0\n"
        "GATE DIAG(0,0.25,0.5,0.75) 0,1\n");
    Circuit c = parse_circuit(in);
    CHECK(c.n_qubits == 2);
    CHECK(c.gates.size() == 7);
    CHECK(std::abs(simulate(c).norm() - 1.0) < 1e-12);
}

TEST_CASE("raw matrix entries parse as re:im pairs") {
    std::istringstream in(
        "n=1 init=plus\n"
        "GATE MATRIX(0.70710678118654752:0,0.70710678118654752:0,"
        "0.70710678118654752:0,-0.70710678118654752:0) 0\n");
    Circuit c = parse_circuit(in);
    CHECK(c.init == InitState::AllPlus);
    // H|+> = |0>
    CHECK(output_probability(c, BitString::from_string("0")) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("round trip preserves simulation exactly") {
    for (uint64_t s = 0; s < 6; ++s) {
        Circuit c = tu::random_circuit(3, 8, 400 + s);
        std::istringstream in(format_circuit(c));
        Circuit back = parse_circuit(in);
        StateVector a = simulate(c), b = simulate(back);
        for (size_t i = 0; i < a.dim(); ++i)
            CHECK(a.amplitude(i) == b.amplitude(i));  // %.17g round-trips doubles
    }
}

TEST_CASE("header and gate errors") {
    std::istringstream no_header("GATE H 0\n");
    CHECK_THROWS_AS(parse_circuit(no_header), std::invalid_argument);
    std::istringstream bad_init("n=2 init=up\n");
    CHECK_THROWS_AS(parse_circuit(bad_init), std::invalid_argument);
    std::istringstream bad_gate("n=2 init=zero\nGATE FOO 0\n");
    CHECK_THROWS_AS(parse_circuit(bad_gate), std::invalid_argument);
    std::istringstream bad_support("n=2 init=zero\nGATE H 5\n");
    CHECK_THROWS_AS(parse_circuit(bad_support), std::invalid_argument);
}

TEST_SUITE_END();
