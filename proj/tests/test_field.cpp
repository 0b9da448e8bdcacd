#include "intb/field.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace intb;

namespace {

// Truncated Taylor series of e^{tA}.
Mat taylor_exp(const Mat& A, double t) {
    Mat term = Mat::Identity(A.rows(), A.cols()), sum = term;
    for (int k = 1; k < 40; ++k) {
        term = term * A * (t / k);
        sum += term;
    }
    return sum;
}

Vec row_times(const Vec& x, const Mat& P) { return (x.transpose() * P).transpose(); }

Vec v2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

Mat m2(double a, double b, double c, double d) {
    Mat m(2, 2);
    m << a, b, c, d;
    return m;
}

FieldHandle sin_field() {
    return FieldHandle(
        2, [](const Vec& x) { return v2(std::sin(x[1]), std::cos(x[0]) * x[1]); }, {}, kSmooth, kClosureNoise,
        "sin");
}

Mat sin_jacobian(const Vec& x) { return m2(0, std::cos(x[1]), -std::sin(x[0]) * x[1], std::cos(x[0])); }

FieldHandle as_closure(const FieldHandle& f) {
    return FieldHandle(f.dim(), [f](const Vec& x) { return f(x); });
}

// D(phi^{-1}) at phi(x) applied to h(phi(x)), by central differences.
Vec ad_oracle(const FlowWord& phi, const FieldHandle& h, const Vec& x, const OdeConfig& cfg) {
    const Vec y = phi.apply(x, cfg);
    const Vec hy = h(y);
    const double e = 1e-5;
    const FlowWord inv = phi.inverse();
    return (inv.apply(y + e * hy, cfg) - inv.apply(y - e * hy, cfg)) / (2 * e);
}

}  // namespace

TEST_CASE("linear fields act on row vectors by default") {
    const Mat A = m2(1, 2, 3, 4);
    const Vec x = v2(0.5, -1);
    CHECK((FieldHandle::linear(A)(x) - row_times(x, A)).norm() < 1e-15);
    CHECK((FieldHandle::linear(A, Action::Left)(x) - A * x).norm() < 1e-15);
}

TEST_CASE("linear flows match the Taylor exponential, both time signs") {
    const Mat A = m2(0.3, -1.2, 0.8, -0.1);
    const FieldHandle f = FieldHandle::linear(A);
    const Vec x = v2(0.7, -0.4);
    for (double t : {0.9, -0.6}) {
        CHECK((flow(f, x, t, OdeConfig{}) - row_times(x, taylor_exp(A, t))).norm() <= 1e-9);
        CHECK((flow_jacobian(f, x, t, OdeConfig{}) - taylor_exp(A, t).transpose()).norm() <= 1e-9);
    }
}

TEST_CASE("flow group law") {
    const FieldHandle f = sin_field();
    const Vec x = v2(0.2, 0.5);
    const OdeConfig cfg;
    for (auto [s, t] : {std::pair{0.3, 0.4}, std::pair{0.5, -0.8}, std::pair{-0.2, -0.1}}) {
        CHECK((flow(f, flow(f, x, s, cfg), t, cfg) - flow(f, x, s + t, cfg)).norm() <= 1e-9);
    }
}

TEST_CASE("flow word inverse undoes the word") {
    const FieldHandle f = sin_field(), g = FieldHandle::linear(m2(0, 1, -1, 0));
    const FlowWord w({{f, 0.3}, {g, -0.2}, {f, 0.1}});
    const Vec x = v2(0.4, -0.3);
    const OdeConfig cfg;
    CHECK(((w * w.inverse()).apply(x, cfg) - x).norm() <= 1e-9);
    CHECK((w.inverse().apply(w.apply(x, cfg), cfg) - x).norm() <= 1e-9);
    CHECK(w.inverse().factors().front().duration == -0.1);
}

TEST_CASE("finite-difference Jacobian accuracy") {
    const FieldHandle f = sin_field();
    CHECK_FALSE(f.has_analytic_jacobian());
    for (const Vec& x : {v2(0.2, 0.3), v2(-1.5, 2.0), v2(3, -4)}) {
        CHECK((f.jacobian(x) - sin_jacobian(x)).norm() <= 1e-8 * std::max(1.0, x.norm()));
    }
}

TEST_CASE("flow Jacobian against finite differences of the flow") {
    const FieldHandle f = sin_field();
    const Vec x = v2(0.3, 0.6);
    const OdeConfig cfg;
    const Mat J = flow_jacobian(f, x, 0.7, cfg);
    for (int j = 0; j < 2; ++j) {
        Vec e = Vec::Zero(2);
        e[j] = 1e-5;
        const Vec col = (flow(f, x + e, 0.7, cfg) - flow(f, x - e, 0.7, cfg)) / 2e-5;
        CHECK((J.col(j) - col).norm() <= 1e-7);
    }
}

TEST_CASE("Lie bracket: polynomial path against closure path") {
    Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
    const FieldHandle f = FieldHandle::polynomial(PolynomialField({x * y, Polynomial::constant(2, 1) + y * y}));
    const FieldHandle g = FieldHandle::polynomial(PolynomialField({x * x * x, 0.5 * x}));
    const Vec p = v2(0.3, -0.7);
    const FieldHandle exact = lie_bracket(f, g);
    REQUIRE(exact.polynomial_form() != nullptr);
    const FieldHandle approx = lie_bracket(as_closure(f), as_closure(g));
    CHECK(approx.polynomial_form() == nullptr);
    CHECK((exact(p) - approx(p)).norm() <= 1e-9);
    CHECK((lie_bracket(FieldHandle::linear(m2(0, 0, 1, 0)), FieldHandle::linear(m2(0, 1, 0, 0)))(p) -
           row_times(p, m2(-1, 0, 0, 1)))
              .norm() < 1e-15);
}

TEST_CASE("Lie bracket antisymmetry") {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> u(-1, 1);
    const FieldHandle f = sin_field(), g = FieldHandle::linear(m2(0.2, 1, -0.3, 0.4));
    for (int i = 0; i < 20; ++i) {
        const Vec x = v2(u(rng), u(rng));
        CHECK((lie_bracket(f, g)(x) + lie_bracket(g, f)(x)).norm() <= 1e-14);
        CHECK(lie_bracket(f, f)(x).norm() <= 1e-14);
    }
}

TEST_CASE("Ad by a linear word is conjugation") {
    const Mat A = m2(0.3, -1.2, 0.8, -0.1), B = m2(0, 1, 0.5, 0.2), H = m2(1, 0.4, -0.3, 0.6);
    const FlowWord w({{FieldHandle::linear(A), 0.4}, {FieldHandle::linear(B), -0.3}});
    const Mat P = taylor_exp(A, 0.4) * taylor_exp(B, -0.3);
    const FieldHandle a = ad(w, FieldHandle::linear(H), OdeConfig{});
    const Vec x = v2(0.6, 0.2);
    CHECK((a(x) - row_times(x, P * H * P.inverse())).norm() <= 1e-9);
}

TEST_CASE("Ad matches the differential of the inverse word") {
    const FieldHandle f = sin_field();
    const Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
    const FieldHandle g = FieldHandle::polynomial(PolynomialField({y * y, x}));
    const FieldHandle h = FieldHandle::polynomial(PolynomialField({Polynomial::constant(2, 1), x * y}));
    const FlowWord w({{f, 0.25}, {g, -0.4}});
    const OdeConfig cfg;
    for (const Vec& p : {v2(0.1, 0.2), v2(-0.3, 0.5)}) {
        CHECK((ad(w, h, cfg)(p) - ad_oracle(w, h, p, cfg)).norm() <= 1e-8);
    }
}

TEST_CASE("Ad preserves brackets") {
    const Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
    const FieldHandle f = FieldHandle::polynomial(PolynomialField({Polynomial::constant(2, 1), x}));
    const FieldHandle g = FieldHandle::polynomial(PolynomialField({y, x * x}));
    const FieldHandle h = FieldHandle::polynomial(PolynomialField({x * y, Polynomial::constant(2, 0.5)}));
    const FlowWord w({{f, 0.3}, {g, -0.2}});
    const OdeConfig cfg;
    const Vec p = v2(0.2, -0.1);
    const Vec lhs = ad(w, lie_bracket(g, h), cfg)(p);
    const Vec rhs = lie_bracket(ad(w, g, cfg), ad(w, h, cfg))(p);
    CHECK((lhs - rhs).norm() <= 1e-6);
}

TEST_CASE("Ad by an empty or zero-time word is the identity") {
    const FieldHandle h = sin_field();
    const Vec p = v2(0.3, 0.1);
    CHECK((ad(FlowWord{}, h, OdeConfig{})(p) - h(p)).norm() == 0);
    CHECK((ad(FlowWord({{FieldHandle::linear(m2(1, 2, 3, 4)), 0.0}}), h, OdeConfig{})(p) - h(p)).norm() == 0);
}

TEST_CASE("flow word failures name the factor") {
    const Polynomial x = Polynomial::variable(1, 0);
    const FieldHandle quad = FieldHandle::polynomial(PolynomialField({x * x}));
    const FieldHandle one = FieldHandle::polynomial(PolynomialField({Polynomial::constant(1, 1)}));
    const FlowWord w({{one, 0.1}, {quad, 5.0}});
    try {
        w.apply(Vec::Ones(1), OdeConfig{});
        FAIL("expected IntegrationError");
    } catch (const IntegrationError& e) {
        CHECK(e.factor() == 1);
    }
}

TEST_CASE("builtins and specs") {
    const FieldHandle f2 = FieldHandle::builtin("heisenberg_f2");
    Vec p(3);
    p << 0.7, 0.1, -0.2;
    CHECK(f2(p)[2] == 0.7);
    CHECK(f2.dim() == 3);
    CHECK(FieldHandle::builtin("c1_kink").regularity() == 1);
    CHECK(FieldHandle::builtin("zero", 4)(Vec::Ones(4)).norm() == 0);
    CHECK_THROWS_AS(FieldHandle::builtin("nope"), std::invalid_argument);
    CHECK_THROWS_AS(FieldHandle::builtin("heisenberg_f1", 2), std::invalid_argument);
    CHECK_THROWS_AS(f2(Vec::Ones(2)), std::invalid_argument);

    VectorFieldSpec s;
    s.kind = VectorFieldSpec::Kind::Linear;
    s.matrix = m2(1, 0, 0, 1);
    s.dim = 3;
    CHECK_THROWS_AS(FieldHandle::from_spec(s), std::invalid_argument);
    s.dim = 2;
    CHECK(FieldHandle::from_spec(s)(v2(2, 3)) == v2(2, 3));
}

TEST_CASE("c1_kink Jacobian is continuous across the kink") {
    const FieldHandle k = FieldHandle::builtin("c1_kink");
    CHECK((k.jacobian(v2(1e-10, 0)) - k.jacobian(v2(-1e-10, 0))).norm() <= 1e-4);
    CHECK((k.jacobian(v2(0.04, 0.3)) - k.fd_jacobian(v2(0.04, 0.3))).norm() <= 1e-6);
}

TEST_CASE("scaling and linear combinations") {
    const FieldHandle f = FieldHandle::linear(m2(1, 2, 3, 4)), g = sin_field();
    const Vec p = v2(0.3, -0.5);
    CHECK((f.scaled(-2)(p) + 2 * f(p)).norm() < 1e-15);
    CHECK((linear_combination({f, g}, {0.5, 2})(p) - (0.5 * f(p) + 2 * g(p))).norm() < 1e-15);
    CHECK(linear_combination({f, f}, {1, -1}).polynomial_form() != nullptr);
    CHECK_THROWS(linear_combination({f}, {1, 2}));
}
