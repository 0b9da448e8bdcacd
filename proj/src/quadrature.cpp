#include "intb/quadrature.hpp"

#include <cmath>
#include <exception>
#include <numbers>
#include <stdexcept>

namespace intb {

GaussRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("Gauss-Legendre rule needs at least one node");
    GaussRule r;
    r.nodes.resize(static_cast<std::size_t>(n));
    r.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Recompute the derivative at the converged node.
        double p0 = 1, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1);
        const auto j = static_cast<std::size_t>(n - 1 - i);
        r.nodes[j] = x;
        r.weights[j] = 2 / ((1 - x * x) * dp * dp);
    }
    return r;
}

void QuadratureConfig::validate() const {
    if (nodes_per_dim != 0 && nodes_per_dim < 2) throw std::invalid_argument("nodes_per_dim must be at least 2");
    if (refinement_delta < 1) throw std::invalid_argument("refinement_delta must be positive");
}

int default_nodes(int dim) {
    if (dim <= 3) return 8;
    if (dim == 4) return 6;
    return 5;
}

int QuadratureConfig::nodes_for(int dim) const { return nodes_per_dim > 0 ? nodes_per_dim : default_nodes(dim); }

std::vector<double> mapped_nodes(int nodes, double upper) {
    const GaussRule r = gauss_legendre(nodes);
    std::vector<double> out;
    const double half = 0.5 * upper;
    for (double g : r.nodes) out.push_back(half * (g + 1));
    return out;
}

Vec integrate_box(const BoxIntegrand& f, const std::vector<double>& upper, int nodes, Eigen::Index out_dim,
                  Kernel kernel) {
    const int d = static_cast<int>(upper.size());
    if (d == 0) return f({});
    const GaussRule r = gauss_legendre(nodes);
    long total = 1;
    for (int k = 0; k < d; ++k) total *= nodes;

    auto point = [&](long idx, std::vector<double>& s) {
        double w = 1;
        for (int k = d - 1; k >= 0; --k) {
            const auto i = static_cast<std::size_t>(idx % nodes);
            idx /= nodes;
            const double half = 0.5 * upper[static_cast<std::size_t>(k)];
            s[static_cast<std::size_t>(k)] = half * (r.nodes[i] + 1);
            w *= half * r.weights[i];
        }
        return w;
    };

    Vec sum = Vec::Zero(out_dim);
    if (kernel == Kernel::Serial) {
        std::vector<double> s(static_cast<std::size_t>(d));
        for (long idx = 0; idx < total; ++idx) {
            const double w = point(idx, s);
            sum += w * f(s);
        }
        return sum;
    }

    std::vector<Vec> values(static_cast<std::size_t>(total));
    std::vector<double> weights(static_cast<std::size_t>(total));
    std::exception_ptr failure;
#pragma omp parallel
    {
        std::vector<double> s(static_cast<std::size_t>(d));
#pragma omp for schedule(dynamic)
        for (long idx = 0; idx < total; ++idx) {
            try {
                weights[static_cast<std::size_t>(idx)] = point(idx, s);
                values[static_cast<std::size_t>(idx)] = f(s);
            } catch (...) {
#pragma omp critical(intb_quadrature_failure)
                if (!failure) failure = std::current_exception();
            }
        }
    }
    if (failure) std::rethrow_exception(failure);
    for (long idx = 0; idx < total; ++idx) {
        sum += weights[static_cast<std::size_t>(idx)] * values[static_cast<std::size_t>(idx)];
    }
    return sum;
}

BoxResult integrate_box_refined(const BoxIntegrand& f, const std::vector<double>& upper, Eigen::Index out_dim,
                                const QuadratureConfig& qcfg) {
    qcfg.validate();
    const int d = static_cast<int>(upper.size());
    BoxResult res;
    res.nodes = qcfg.nodes_for(d);
    res.refined_nodes = res.nodes + qcfg.refinement_delta;
    const Vec coarse = integrate_box(f, upper, res.nodes, out_dim, qcfg.kernel);
    res.value = integrate_box(f, upper, res.refined_nodes, out_dim, qcfg.kernel);
    res.error_estimate = d == 0 ? 0.0 : (res.value - coarse).lpNorm<Eigen::Infinity>();
    res.evaluations = static_cast<long>(std::pow(res.nodes, d) + std::pow(res.refined_nodes, d));
    return res;
}

}  // namespace intb
