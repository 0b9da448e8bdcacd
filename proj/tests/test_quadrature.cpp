#include "intb/quadrature.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>

using namespace intb;

namespace {

Vec scalar(double v) { return Vec::Constant(1, v); }

}  // namespace

TEST_CASE("Gauss-Legendre nodes and weights") {
    for (int n = 1; n <= 20; ++n) {
        const GaussRule g = gauss_legendre(n);
        REQUIRE(g.nodes.size() == static_cast<std::size_t>(n));
        double w = 0;
        for (double x : g.weights) w += x;
        CHECK(w == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(std::is_sorted(g.nodes.begin(), g.nodes.end()));
        for (int i = 0; i < n; ++i) {
            CHECK(g.nodes[static_cast<std::size_t>(i)] ==
                  doctest::Approx(-g.nodes[static_cast<std::size_t>(n - 1 - i)]).epsilon(1e-14));
        }
    }
    const GaussRule g5 = gauss_legendre(5);
    CHECK(g5.nodes[4] == doctest::Approx(0.9061798459386640).epsilon(1e-15));
    CHECK(g5.weights[4] == doctest::Approx(0.2369268850561891).epsilon(1e-15));
    CHECK(g5.nodes[2] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(g5.weights[2] == doctest::Approx(128.0 / 225.0).epsilon(1e-15));
    CHECK_THROWS(gauss_legendre(0));
}

TEST_CASE("n-point rule is exact to degree 2n-1") {
    for (int n = 1; n <= 12; ++n) {
        const GaussRule g = gauss_legendre(n);
        for (int k = 0; k <= 2 * n - 1; ++k) {
            double s = 0;
            for (int i = 0; i < n; ++i) s += g.weights[static_cast<std::size_t>(i)] * std::pow(g.nodes[static_cast<std::size_t>(i)], k);
            const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
            CHECK(std::abs(s - exact) <= 1e-13);
        }
    }
}

TEST_CASE("box integrals of monomials, either orientation") {
    const BoxIntegrand f = [](const std::vector<double>& s) { return scalar(s[0] * s[0] * s[1] + 1.0); };
    for (double a : {0.7, -0.4}) {
        for (double b : {1.3, -0.2}) {
            const double exact = a * a * a / 3 * b * b / 2 + a * b;
            CHECK(integrate_box(f, {a, b}, 3, 1)[0] == doctest::Approx(exact).epsilon(1e-14));
        }
    }
    const BoxIntegrand g = [](const std::vector<double>& s) { return scalar(s[0] * s[1] * s[2] * s[3]); };
    CHECK(integrate_box(g, {1, 2, -1, 0.5}, 2, 1)[0] == doctest::Approx(0.5 * 2 * 0.5 * 0.125).epsilon(1e-14));
}

TEST_CASE("empty box integrates the point value") {
    const BoxIntegrand f = [](const std::vector<double>& s) {
        CHECK(s.empty());
        return scalar(3.5);
    };
    CHECK(integrate_box(f, {}, 4, 1)[0] == 3.5);
}

TEST_CASE("serial and OpenMP kernels agree bitwise") {
    const BoxIntegrand f = [](const std::vector<double>& s) {
        Vec v(2);
        v << std::sin(s[0] * 3 + s[1]) * std::exp(s[2]), std::cos(s[0] - s[1] * s[2]);
        return v;
    };
    for (int n : {3, 7, 10}) {
        const Vec a = integrate_box(f, {0.4, -0.3, 0.9}, n, 2, Kernel::Serial);
        const Vec b = integrate_box(f, {0.4, -0.3, 0.9}, n, 2, Kernel::OpenMP);
        CHECK(a[0] == b[0]);
        CHECK(a[1] == b[1]);
    }
}

TEST_CASE("integrand exceptions propagate from the parallel kernel") {
    const BoxIntegrand f = [](const std::vector<double>& s) -> Vec {
        if (s[0] > 0.5) throw IntegrationError("bad node");
        return scalar(1);
    };
    CHECK_THROWS_AS(integrate_box(f, {1, 1}, 5, 1, Kernel::OpenMP), IntegrationError);
    CHECK_THROWS_AS(integrate_box(f, {1, 1}, 5, 1, Kernel::Serial), IntegrationError);
}

TEST_CASE("refined integration reports the rule difference") {
    QuadratureConfig q;
    q.nodes_per_dim = 4;
    const BoxIntegrand smooth = [](const std::vector<double>& s) { return scalar(std::exp(s[0] + s[1])); };
    const BoxResult r = integrate_box_refined(smooth, {1, 1}, 1, q);
    const double exact = (std::exp(1.0) - 1) * (std::exp(1.0) - 1);
    CHECK(r.nodes == 4);
    CHECK(r.refined_nodes == 8);
    CHECK(r.evaluations == 16 + 64);
    CHECK(std::abs(r.value[0] - exact) <= 1e-12);
    CHECK(r.error_estimate >= std::abs(r.value[0] - exact));
    CHECK(r.error_estimate <= 1e-5);

    const BoxIntegrand kink = [](const std::vector<double>& s) { return scalar(std::pow(std::abs(s[0] - 0.31), 1.5)); };
    CHECK(integrate_box_refined(kink, {1}, 1, q).error_estimate > 1e-6);
}

TEST_CASE("mapped nodes are exactly the evaluation points") {
    std::set<double> seen;
    std::mutex mu;
    const BoxIntegrand f = [&](const std::vector<double>& s) {
        std::lock_guard<std::mutex> lock(mu);
        seen.insert(s[0]);
        return scalar(0);
    };
    integrate_box(f, {-0.37}, 6, 1);
    const auto m = mapped_nodes(6, -0.37);
    CHECK(seen == std::set<double>(m.begin(), m.end()));
}

TEST_CASE("node defaults and validation") {
    CHECK(default_nodes(1) == 8);
    CHECK(default_nodes(3) == 8);
    CHECK(default_nodes(4) == 6);
    CHECK(default_nodes(6) == 5);
    QuadratureConfig q;
    CHECK(q.nodes_for(2) == 8);
    q.nodes_per_dim = 12;
    CHECK(q.nodes_for(2) == 12);
    q.nodes_per_dim = 1;
    CHECK_THROWS_AS(q.validate(), std::invalid_argument);
    q = QuadratureConfig{};
    q.refinement_delta = 0;
    CHECK_THROWS_AS(q.validate(), std::invalid_argument);
}
