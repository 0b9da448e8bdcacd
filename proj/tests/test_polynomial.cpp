#include "intb/polynomial.hpp"

#include <doctest.h>

#include <random>

using namespace intb;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

Polynomial random_poly(std::mt19937& rng, int nvars, int terms, int maxdeg) {
    std::uniform_real_distribution<double> c(-1, 1);
    std::uniform_int_distribution<int> p(0, maxdeg);
    std::vector<Term> ts;
    for (int i = 0; i < terms; ++i) {
        std::vector<int> pw(static_cast<std::size_t>(nvars));
        for (auto& q : pw) q = p(rng);
        ts.push_back({c(rng), pw});
    }
    return Polynomial(nvars, ts);
}

PolynomialField random_field(std::mt19937& rng, int n) {
    std::vector<Polynomial> comps;
    for (int i = 0; i < n; ++i) comps.push_back(random_poly(rng, n, 3, 2));
    return PolynomialField(comps);
}

VectorXd random_point(std::mt19937& rng, int n) {
    std::uniform_real_distribution<double> u(-1, 1);
    VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = u(rng);
    return x;
}

// Bracket evaluated from Jacobians and values, independent of the symbolic path.
VectorXd bracket_oracle(const PolynomialField& f, const PolynomialField& g, const VectorXd& x) {
    return g.jacobian(x) * f.eval(x) - f.jacobian(x) * g.eval(x);
}

}  // namespace

TEST_CASE("construction merges like terms and drops zeros") {
    const Polynomial p(2, {{1, {1, 0}}, {2, {1, 0}}, {0, {0, 3}}, {-1, {0, 0}}, {1, {0, 0}}});
    REQUIRE(p.terms().size() == 1);
    CHECK(p.terms()[0].coef == 3);
    CHECK(p.degree() == 1);
    CHECK(Polynomial(2).is_zero());
    CHECK_THROWS(Polynomial(2, {{1, {1}}}));
    CHECK_THROWS(Polynomial(1, {{1, {-1}}}));
}

TEST_CASE("evaluation and calculus") {
    const Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
    const Polynomial p = x * x * y + 3.0 * y - Polynomial::constant(2, 2);
    VectorXd pt(2);
    pt << 1.5, -2;
    CHECK(p.eval(pt) == doctest::Approx(1.5 * 1.5 * -2 + 3 * -2 - 2));
    CHECK(p.derivative(0) == 2.0 * x * y);
    CHECK(p.derivative(1) == x * x + Polynomial::constant(2, 3));
    CHECK((p - p).is_zero());
}

TEST_CASE("ring axioms on random polynomials") {
    std::mt19937 rng(1);
    for (int trial = 0; trial < 30; ++trial) {
        const Polynomial a = random_poly(rng, 3, 4, 3), b = random_poly(rng, 3, 4, 3), c = random_poly(rng, 3, 3, 2);
        const VectorXd x = random_point(rng, 3);
        CHECK((a * (b + c)).eval(x) == doctest::Approx(a.eval(x) * (b.eval(x) + c.eval(x))));
        CHECK((a * b).eval(x) == doctest::Approx((b * a).eval(x)));
        CHECK((a * b).derivative(1).eval(x) ==
              doctest::Approx((a.derivative(1) * b + a * b.derivative(1)).eval(x)));
    }
}

TEST_CASE("linear fields act on the right or the left") {
    MatrixXd A(2, 2);
    A << 1, 2, 3, 4;
    VectorXd x(2);
    x << 0.5, -1;
    const auto r = PolynomialField::linear(A, true);
    const auto l = PolynomialField::linear(A, false);
    CHECK((r.eval(x) - (x.transpose() * A).transpose()).norm() < 1e-15);
    CHECK((l.eval(x) - A * x).norm() < 1e-15);
    CHECK((r.jacobian(x) - A.transpose()).norm() < 1e-15);
}

TEST_CASE("linear brackets are matrix commutators AB - BA") {
    MatrixXd A(2, 2), B(2, 2);
    A << 0, 0, 1, 0;
    B << 0, 1, 0, 0;
    const auto f = bracket(PolynomialField::linear(A), PolynomialField::linear(B));
    CHECK(f == PolynomialField::linear(A * B - B * A));
}

TEST_CASE("bracket matches the Jacobian oracle and is antisymmetric") {
    std::mt19937 rng(2);
    for (int trial = 0; trial < 30; ++trial) {
        const auto f = random_field(rng, 3), g = random_field(rng, 3);
        const VectorXd x = random_point(rng, 3);
        CHECK((bracket(f, g).eval(x) - bracket_oracle(f, g, x)).norm() <= 1e-12);
        const auto s = bracket(f, g).components();
        const auto t = bracket(g, f).components();
        for (std::size_t i = 0; i < s.size(); ++i) CHECK((s[i] + t[i]).is_zero());
        CHECK(bracket(f, f).is_zero());
    }
}

TEST_CASE("Jacobi identity") {
    std::mt19937 rng(4);
    for (int trial = 0; trial < 10; ++trial) {
        const auto f = random_field(rng, 2), g = random_field(rng, 2), h = random_field(rng, 2);
        const VectorXd x = random_point(rng, 2);
        const VectorXd j = bracket(f, bracket(g, h)).eval(x) + bracket(g, bracket(h, f)).eval(x) +
                           bracket(h, bracket(f, g)).eval(x);
        CHECK(j.norm() <= 1e-11);
    }
}
