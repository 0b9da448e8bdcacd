#pragma once

// Tensor-product Gauss-Legendre quadrature over boxes [0,t_1] x ... x [0,t_d].

#include "intb/ode.hpp"

#include <functional>
#include <vector>

namespace intb {

struct GaussRule {
    std::vector<double> nodes;    // on [-1,1], ascending
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule, nodes by Newton iteration on P_n.
GaussRule gauss_legendre(int n);

enum class QuadratureRule { GaussLegendre };

enum class Kernel { Serial, OpenMP };

struct QuadratureConfig {
    /// 0 selects default_nodes(dimension).
    int nodes_per_dim = 0;
    int refinement_delta = 4;
    QuadratureRule rule = QuadratureRule::GaussLegendre;
    Kernel kernel = Kernel::OpenMP;

    void validate() const;
    int nodes_for(int dim) const;
};

/// 8 nodes per dimension up to dimension 3, 6 for dimension 4, 5 beyond.
int default_nodes(int dim);

using BoxIntegrand = std::function<Vec(const std::vector<double>& s)>;

/// Tensor rule with `nodes` points per dimension over the box with corners 0
/// and `upper` (entries of either sign). Both kernels sum node contributions
/// in the same fixed order and return bitwise identical results.
Vec integrate_box(const BoxIntegrand& f, const std::vector<double>& upper, int nodes, Eigen::Index out_dim,
                  Kernel kernel = Kernel::Serial);

struct BoxResult {
    Vec value;              ///< refined estimate
    double error_estimate;  ///< max-norm difference between the two rules
    int nodes;
    int refined_nodes;
    long evaluations;
};

/// Integrates with nodes_for(d) and nodes_for(d) + refinement_delta points.
BoxResult integrate_box_refined(const BoxIntegrand& f, const std::vector<double>& upper, Eigen::Index out_dim,
                                const QuadratureConfig& qcfg);

/// Distinct nodes of the 1-D rule mapped to [0, upper].
std::vector<double> mapped_nodes(int nodes, double upper);

}  // namespace intb
