#include <doctest.h>

#include <complex>
#include <random>

#include "dtcp/errors.hpp"
#include "dtcp/special_functions.hpp"

using namespace dtcp;
using C = std::complex<double>;

namespace {

double rel_err(C got, C want) { return std::abs(got - want) / std::max(1e-300, std::abs(want)); }

// 30-term Taylor series oracle for the matrix exponential, independent of
// the scaling-and-squaring path.
sf::ComplexMatrix taylor_exp(const sf::ComplexMatrix& m, int terms = 30) {
    sf::ComplexMatrix acc = sf::ComplexMatrix::Identity(m.rows(), m.cols());
    sf::ComplexMatrix term = acc;
    for (int k = 1; k <= terms; ++k) {
        term = (term * m / static_cast<double>(k)).eval();
        acc += term;
    }
    return acc;
}

} // namespace

TEST_CASE("complex_erfc basic values") {
    CHECK(rel_err(sf::complex_erfc(C(0, 0)), 1.0) < 1e-14);
    CHECK(rel_err(sf::complex_erfc(C(1, 0)), C(0.157299207050285130658779364917, 0)) < 1e-13);
    CHECK(rel_err(sf::complex_erfc(C(0.3, 0.7)),
                  C(0.478838995139850313143681206789, -0.830910976368351622772823097146)) < 1e-13);
    CHECK(rel_err(sf::complex_erfc(C(5, 2)),
                  C(4.00293555775272373868093296292e-12, -7.83582046669295226242775127037e-11)) < 1e-12);
    CHECK(rel_err(sf::complex_erfc(C(-2.5, 1.2)),
                  C(1.99842079571060602308340684427, -0.000194059615495129177880423538284)) < 1e-12);
}

TEST_CASE("complex_erfc Schwarz reflection and summation identity") {
    const C z(0.3, 0.7);
    CHECK(std::abs(sf::complex_erfc(std::conj(z)) - std::conj(sf::complex_erfc(z))) < 1e-14);

    std::mt19937 gen(42);
    std::uniform_real_distribution<double> u(-6.0, 6.0);
    for (int i = 0; i < 200; ++i) {
        const C w(u(gen), u(gen));
        const C sum = sf::complex_erfc(w) + sf::complex_erfc(-w);
        CHECK(std::abs(sum - 2.0) < 1e-11 * std::max(1.0, std::abs(sf::complex_erfc(w))));
    }
}

TEST_CASE("complex_erfc overflow signalled") {
    CHECK_THROWS_AS(sf::complex_erfc(C(0.0, 40.0)), RangeError);
}

TEST_CASE("erfcx matches erfc where both are representable") {
    for (const C z : {C(0.5, 0.3), C(3.0, -2.0), C(8.0, 5.0)}) {
        const C a = sf::erfcx(z);
        const C b = std::exp(z * z) * sf::complex_erfc(z);
        CHECK(rel_err(a, b) < 1e-12);
    }
    // large argument: asymptotic regime, no overflow
    const C big = sf::erfcx(C(150.0, 40.0));
    CHECK(std::isfinite(big.real()));
    CHECK(rel_err(big, 1.0 / (C(150.0, 40.0) * std::sqrt(3.14159265358979324))) < 1e-3);
}

TEST_CASE("gamma_fn values and poles") {
    CHECK(rel_err(sf::gamma_fn(C(1, 0)), 1.0) < 1e-14);
    CHECK(rel_err(sf::gamma_fn(C(0.5, 0)), std::sqrt(3.14159265358979324)) < 1e-13);
    CHECK(rel_err(sf::gamma_fn(C(-0.5, 0)), -2.0 * std::sqrt(3.14159265358979324)) < 1e-13);
    CHECK(rel_err(sf::gamma_fn(C(3.3, -2.1)),
                  C(-0.907040604066263319350354653312, -0.937476764532419752174572932664)) < 1e-12);
    CHECK(rel_err(sf::gamma_fn(C(-1.7, 0.4)),
                  C(1.13564388243163952052800060156, -0.26890799072916941431243890243)) < 1e-12);
    CHECK_THROWS_AS(sf::gamma_fn(C(0, 0)), PoleError);
    CHECK_THROWS_AS(sf::gamma_fn(C(-3, 0)), PoleError);
}

TEST_CASE("gamma_fn recurrence on a random grid") {
    std::mt19937 gen(7);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    int tested = 0;
    while (tested < 100) {
        const C z(u(gen), u(gen));
        if (std::abs(z.imag()) < 0.05 && z.real() < 0.5) continue; // stay clear of poles
        const C lhs = sf::gamma_fn(z + 1.0);
        const C rhs = z * sf::gamma_fn(z);
        CHECK(rel_err(lhs, rhs) < 1e-10);
        ++tested;
    }
}

TEST_CASE("hyp1f1 reference values") {
    CHECK(rel_err(sf::hyp1f1(C(0.3, 0.1), C(1.7, 0), C(0, 0)), 1.0) < 1e-15);
    CHECK(rel_err(sf::hyp1f1(C(1, 0), C(1, 0), C(0.5, 0)), std::exp(C(0.5, 0))) < 1e-13);
    CHECK(rel_err(sf::hyp1f1(C(-0.75, 0), C(0.5, 0), C(2, 1)),
                  C(-2.36512072079061188806083138916, -2.33152544370457466044126429429)) < 1e-12);
    CHECK(rel_err(sf::hyp1f1(C(1.2, 0.3), C(2.5, 0), C(-8, 3)),
                  C(0.0965231915601633435317200997145, -0.0249310747935458472268195338322)) < 1e-11);
    // large-argument branches
    CHECK(rel_err(sf::hyp1f1(C(0.5, 0), C(1.5, 0), C(0, 60)),
                  C(0.0784275902814218800168682874626, 0.0888573504738913710001379055736)) < 1e-9);
    CHECK(rel_err(sf::hyp1f1(C(2.5, 0), C(0.5, 0), C(37, 0)), C(2.31374934247032889272873741277e19, 0)) <
          1e-11);
    CHECK_THROWS_AS(sf::hyp1f1(C(0.5, 0), C(-2, 0), C(1, 0)), PoleError);
}

TEST_CASE("hyp1f1 Kummer transform self-consistency") {
    std::mt19937 gen(12);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int i = 0; i < 50; ++i) {
        const C a(u(gen), u(gen)), z(4.0 * u(gen), 4.0 * u(gen));
        const C b(2.0 + std::abs(u(gen)), 0.0);
        const C direct = sf::hyp1f1(a, b, z);
        const C transformed = std::exp(z) * sf::hyp1f1(b - a, b, -z);
        CHECK(rel_err(direct, transformed) < 1e-9);
    }
}

TEST_CASE("mat_exp trivial and diagonal cases") {
    sf::ComplexMatrix z2 = sf::ComplexMatrix::Zero(2, 2);
    CHECK((sf::mat_exp(z2) - sf::ComplexMatrix::Identity(2, 2)).norm() < 1e-15);

    sf::ComplexMatrix d = sf::ComplexMatrix::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = -2.0;
    const sf::ComplexMatrix e = sf::mat_exp(d);
    CHECK(rel_err(e(0, 0), std::exp(1.0)) < 1e-14);
    CHECK(rel_err(e(1, 1), std::exp(-2.0)) < 1e-14);
    CHECK(std::abs(e(0, 1)) == 0.0);
}

TEST_CASE("mat_exp against the Taylor-series oracle") {
    std::mt19937 gen(3);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int trial = 0; trial < 20; ++trial) {
        sf::ComplexMatrix m(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) m(i, j) = C(u(gen), u(gen));
        m *= 2.0 / std::max(1.0, m.norm());
        const sf::ComplexMatrix a = sf::mat_exp(m);
        const sf::ComplexMatrix b = taylor_exp(m);
        CHECK((a - b).norm() < 1e-10 * std::max(1.0, b.norm()));
    }
}

TEST_CASE("mat_exp inverse identity") {
    std::mt19937 gen(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    sf::ComplexMatrix m(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m(i, j) = C(u(gen), u(gen));
    const sf::ComplexMatrix prod = sf::mat_exp(m) * sf::mat_exp((-m).eval());
    CHECK((prod - sf::ComplexMatrix::Identity(4, 4)).norm() < 1e-10);
}

TEST_CASE("mat_exp block-diagonal splits into blocks") {
    std::mt19937 gen(21);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    sf::ComplexMatrix a(2, 2), b(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            a(i, j) = C(u(gen), u(gen));
            b(i, j) = C(u(gen), u(gen));
        }
    sf::ComplexMatrix big = sf::ComplexMatrix::Zero(4, 4);
    big.block(0, 0, 2, 2) = a;
    big.block(2, 2, 2, 2) = b;
    const sf::ComplexMatrix e = sf::mat_exp(big);
    CHECK((e.block(0, 0, 2, 2) - sf::mat_exp(a)).norm() < 1e-12);
    CHECK((e.block(2, 2, 2, 2) - sf::mat_exp(b)).norm() < 1e-12);
    CHECK(e.block(0, 2, 2, 2).norm() < 1e-13);
}

TEST_CASE("mat_log_principal round trips") {
    CHECK(sf::mat_log_principal(sf::ComplexMatrix::Identity(3, 3)).norm() < 1e-14);

    sf::ComplexMatrix d = sf::ComplexMatrix::Zero(2, 2);
    d(0, 0) = std::exp(1.0);
    d(1, 1) = std::exp(2.0);
    const sf::ComplexMatrix l = sf::mat_log_principal(d);
    CHECK(rel_err(l(0, 0), 1.0) < 1e-13);
    CHECK(rel_err(l(1, 1), 2.0) < 1e-13);

    std::mt19937 gen(5);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int trial = 0; trial < 10; ++trial) {
        sf::ComplexMatrix h(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) h(i, j) = C(u(gen), u(gen));
        sf::ComplexMatrix a = (h + h.adjoint().eval()) * 0.5 + 0.2 * h;
        a *= 1.0 / std::max(1.0, a.norm());
        const sf::ComplexMatrix back = sf::mat_log_principal(sf::mat_exp(a));
        CHECK((back - a).norm() < 1e-9);
        CHECK((sf::mat_exp(sf::mat_log_principal(sf::mat_exp(a))) - sf::mat_exp(a)).norm() < 1e-9);
    }
}

TEST_CASE("mat_log_principal branch errors") {
    sf::ComplexMatrix neg = sf::ComplexMatrix::Identity(2, 2);
    neg(0, 0) = -1.0;
    CHECK_THROWS_AS(sf::mat_log_principal(neg), BranchError);
    sf::ComplexMatrix sing = sf::ComplexMatrix::Zero(2, 2);
    CHECK_THROWS_AS(sf::mat_log_principal(sing), DomainError);
}
