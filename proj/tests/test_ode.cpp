#include "intb/ode.hpp"

#include <doctest.h>

#include <cmath>

using namespace intb;

namespace {

Vec v2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

const OdeRhs rotation = [](const Vec& y, Vec& dy) {
    dy.resize(2);
    dy << -y[1], y[0];
};

}  // namespace

TEST_CASE("exponential growth forward and backward") {
    const OdeRhs rhs = [](const Vec& y, Vec& dy) { dy = y; };
    for (double t : {0.5, -0.7, 2.0}) {
        const Vec y = integrate(rhs, Vec::Ones(1), t, OdeConfig{});
        CHECK(std::abs(y[0] - std::exp(t)) <= 1e-9 * std::exp(std::abs(t)));
    }
}

TEST_CASE("rotation matches the closed form") {
    const double t = 1.3;
    const Vec y = integrate(rotation, v2(1, 0), t, OdeConfig{});
    CHECK((y - v2(std::cos(t), std::sin(t))).norm() <= 1e-9);
}

TEST_CASE("zero time is the identity") {
    const Vec x = v2(0.3, -2);
    CHECK(integrate(rotation, x, 0.0, OdeConfig{}) == x);
}

TEST_CASE("semigroup property") {
    const Vec x = v2(0.4, 0.9);
    const OdeConfig cfg;
    const Vec a = integrate(rotation, integrate(rotation, x, 0.4, cfg), -1.1, cfg);
    const Vec b = integrate(rotation, x, -0.7, cfg);
    CHECK((a - b).norm() <= 1e-9);
}

TEST_CASE("uniform scheme converges at fifth order") {
    OdeConfig cfg = uniform(OdeConfig{});
    const double t = 2.0;
    const Vec exact = v2(std::cos(t), std::sin(t));
    cfg.fixed_steps = 8;
    const double e1 = (integrate(rotation, v2(1, 0), t, cfg) - exact).norm();
    cfg.fixed_steps = 16;
    const double e2 = (integrate(rotation, v2(1, 0), t, cfg) - exact).norm();
    CHECK(std::log2(e1 / e2) >= 4.5);
}

TEST_CASE("uniform step size") {
    OdeConfig cfg;
    cfg.abs_tol = 1e-10;
    cfg.rel_tol = 1e-5;
    CHECK(cfg.uniform_step() == doctest::Approx(1e-2));
    cfg.max_step = 1e-3;
    CHECK(cfg.uniform_step() == doctest::Approx(1e-3));
}

TEST_CASE("tighter tolerance reduces the error") {
    const OdeRhs rhs = [](const Vec& y, Vec& dy) { dy = Vec::Constant(1, -10.0 * y[0] * y[0]); };
    const double exact = 1.0 / (1.0 + 10.0 * 1.5);
    OdeConfig loose;
    loose.abs_tol = loose.rel_tol = 1e-5;
    const double el = std::abs(integrate(rhs, Vec::Ones(1), 1.5, loose)[0] - exact);
    const double et = std::abs(integrate(rhs, Vec::Ones(1), 1.5, OdeConfig{})[0] - exact);
    CHECK(et <= el);
    CHECK(et <= 1e-8);
}

TEST_CASE("blow-up raises IntegrationError") {
    const OdeRhs rhs = [](const Vec& y, Vec& dy) { dy = y.cwiseProduct(y); };
    CHECK_THROWS_AS(integrate(rhs, Vec::Ones(1), 2.0, OdeConfig{}), IntegrationError);
}

TEST_CASE("non-finite right-hand side raises IntegrationError") {
    const OdeRhs rhs = [](const Vec&, Vec& dy) { dy = Vec::Constant(1, std::nan("")); };
    CHECK_THROWS_AS(integrate(rhs, Vec::Ones(1), 1.0, OdeConfig{}), IntegrationError);
}

TEST_CASE("leaving the domain raises IntegrationError") {
    OdeConfig cfg;
    cfg.domain = Box{v2(-1, -1), v2(1, 1)};
    const OdeRhs rhs = [](const Vec&, Vec& dy) { dy = v2(1, 0); };
    CHECK_THROWS_AS(integrate(rhs, v2(0, 0), 3.0, cfg), IntegrationError);
    CHECK_NOTHROW(integrate(rhs, v2(0, 0), 0.5, cfg));
}

TEST_CASE("step budget") {
    OdeConfig cfg;
    cfg.max_steps = 3;
    CHECK_THROWS_AS(integrate(rotation, v2(1, 0), 50.0, cfg), IntegrationError);
}

TEST_CASE("config validation") {
    OdeConfig cfg;
    cfg.abs_tol = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = OdeConfig{};
    cfg.max_step = -1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    CHECK_NOTHROW(OdeConfig{}.validate());
}

TEST_CASE("error factor annotation") {
    const IntegrationError e("boom");
    CHECK(e.factor() == -1);
    CHECK(e.at_factor(4).factor() == 4);
}
