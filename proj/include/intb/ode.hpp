#pragma once

// Explicit Dormand-Prince 5(4) integration of autonomous systems y' = F(y).

#include <Eigen/Dense>

#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace intb {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class OdeScheme {
    Dopri5,         ///< adaptive embedded pair
    Dopri5Uniform,  ///< same tableau, fixed uniform steps
};

/// Axis-aligned working domain. Trajectories leaving it raise IntegrationError.
struct Box {
    Vec lower;
    Vec upper;
    bool contains(const Vec& x) const;
};

struct OdeConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double max_step = std::numeric_limits<double>::infinity();
    OdeScheme scheme = OdeScheme::Dopri5;
    /// Uniform scheme only: exact number of steps per integration when > 0.
    int fixed_steps = 0;
    long max_steps = 2'000'000;
    /// State norm treated as blow-up.
    double blowup = 1e12;
    std::optional<Box> domain;

    /// Throws std::invalid_argument on nonpositive tolerances or steps.
    void validate() const;
    /// Step length of the uniform scheme: min(max_step, min(tol)^(1/5)).
    double uniform_step() const;
};

/// Copy of cfg switched to the uniform scheme.
OdeConfig uniform(OdeConfig cfg);

class IntegrationError : public std::runtime_error {
public:
    explicit IntegrationError(const std::string& what, int factor = -1);
    /// Index of the failing factor of a flow word, or -1.
    int factor() const noexcept { return factor_; }
    IntegrationError at_factor(int i) const;

private:
    std::string bare_;
    int factor_;
};

using OdeRhs = std::function<void(const Vec& y, Vec& dy)>;

/// Solution at time t (of either sign) of y' = rhs(y), y(0) = y0. The domain
/// box, if configured, is checked on the first `state_dim` coordinates
/// (all of them when state_dim < 0).
Vec integrate(const OdeRhs& rhs, const Vec& y0, double t, const OdeConfig& cfg, int state_dim = -1);

}  // namespace intb
