#pragma once

// Stock problems used by the acceptance suite, the tests and the CLI.

#include "intb/multiflow.hpp"

namespace intb::scenarios {

/// [[X1,X2],X3] with the three 2x2 example51 matrices, x = (0.7,-0.4).
MultiflowProblem example51(const Times& t = {0.2, 0.2, 0.2});

/// [X1,X2] with f1 = (1 + x2^2, 0.3 x1), f2 = (0.5 x1 x2, 1 - x1^2).
MultiflowProblem poly_pair(const Times& t = {0.3, -0.25});

/// [X1,X2] with f1 = (1,0), f2 = (0, x1 + x1^2/4); [f1,f2] = (0, 1 + x1/2).
MultiflowProblem asymptotic_pair(const Times& t = {0.1, 0.1});

/// [[X1,X2],X3] with f1 = (1,0), f2 = (0,x1), f3 = (x2,0).
MultiflowProblem nonlinear_triple(const Times& t = {0.1, 0.1, 0.1});

/// The triple above with f3 replaced by the C^1 field (x2, |x1|^1.5), based
/// at a point whose trajectories cross x1 = 0.
MultiflowProblem low_regularity_triple(const Times& t = {0.2, 0.15, 0.2});

/// [[X1,X2],[X3,X4]] with four fixed 3x3 matrices.
MultiflowProblem linear_degree4(const Times& t = {0.2, -0.15, 0.1, 0.2});

/// Strictly upper-triangular pair e12, e23 on R^3: all brackets of degree 3 vanish.
MultiflowProblem nilpotent_pair(const Times& t = {0.3, 0.2});

/// Heisenberg fields f1 = (1,0,0), f2 = (0,1,x1).
Fields heisenberg();

}  // namespace intb::scenarios
