#pragma once

// Numerical checks of the integral representations, the asymptotic formula
// and related identities.

#include "intb/multiflow.hpp"

#include <json.hpp>

#include <limits>
#include <optional>
#include <string>

namespace intb {

using Json = nlohmann::ordered_json;

struct VerificationReport {
    std::string scenario;
    std::string check;
    double residual_max = 0;
    double residual_rel = 0;
    double quadrature_error_estimate = 0;
    double tolerance = 0;
    std::optional<double> fitted_order;
    bool pass = false;
    Json settings = Json::object();
    Json details = Json::object();

    Json to_json() const;
    static std::string csv_header();
    std::string csv_row() const;
    /// "PASS <scenario> <check> residual_rel=... " style summary.
    std::string summary() const;
};

/// max(1e-6, 100 * qerr_rel + 100 * ode tolerance).
double pass_tolerance(double qerr_rel, const OdeConfig& cfg);

Json settings_json(const OdeConfig& cfg);
Json settings_json(const OdeConfig& cfg, const QuadratureConfig& qcfg);

/// x Psi(t) against x + box integral of x Psi(t_1..t_{m-1}, s_m) B(f)^{(...)}.
/// Times with |t_i| > delta are rejected.
VerificationReport verify_integral_representation(const MultiflowProblem& problem, const QuadratureConfig& qcfg,
                                                  const OdeConfig& cfg,
                                                  double delta = std::numeric_limits<double>::infinity(),
                                                  const std::string& scenario = "problem");

/// Hand-wired degree-3 form for [[X1,X2],X3].
VerificationReport verify_degree3_form(const MultiflowProblem& problem, const QuadratureConfig& qcfg,
                                       const OdeConfig& cfg, const std::string& scenario = "problem");

/// Log-log fit of |x Psi(t,...,t) - x - t^m B(f)(x)| over t_grid.
VerificationReport verify_asymptotic(const FormalBracket& b, const Fields& fields, const Vec& x,
                                     std::vector<double> t_grid, const OdeConfig& cfg,
                                     const std::string& scenario = "problem");

/// Default asymptotic grid 2^-3, ..., 2^-9.
std::vector<double> default_asymptotic_grid();

/// max over the grid of |x Psi_[X1,X2](t) - x|; commuting pairs must stay
/// below tol, non-commuting pairs must exceed it.
VerificationReport verify_commutativity_byproduct(const FieldHandle& f1, const FieldHandle& f2,
                                                  const std::vector<Vec>& x_grid, const Times& t,
                                                  const OdeConfig& cfg, double tol = 1e-8,
                                                  const std::string& scenario = "problem");

/// example51: zero classical triple bracket, nonzero integrating bracket,
/// nonzero displacement of Psi.
VerificationReport verify_adjoint_failure(const OdeConfig& cfg);

/// [f1,f2]^{(s2,s1)}(x) - [f1,f2](x) against the two correction integrals.
VerificationReport verify_lemma2(const FieldHandle& f1, const FieldHandle& f2, const Vec& x, double s2, double s1,
                                 const QuadratureConfig& qcfg, const OdeConfig& cfg,
                                 const std::string& scenario = "problem");

/// Degree-3 integrating bracket against Ad of (classical bracket + two
/// correction integrals). With nilpotent = true the corrections are dropped.
VerificationReport verify_bracket_decomposition(const Fields& fields, const Vec& x, double t1, double s3,
                                                double s1, double s2, bool nilpotent, const QuadratureConfig& qcfg,
                                                const OdeConfig& cfg, const std::string& scenario = "problem");

/// Derivative, quadrature and recursive evaluations of V_B^f(t) at x.
VerificationReport verify_v_field(const MultiflowProblem& problem, const QuadratureConfig& qcfg,
                                  const OdeConfig& cfg, const std::string& scenario = "problem");

/// example51 matrices and points computed through the numerical pipeline
/// against the transcribed closed forms, over `grid` points per parameter in
/// [-0.3,0.3]. Errors are |numeric - closed form| / max(1, |closed form|).
std::vector<VerificationReport> example51_checks(const OdeConfig& cfg, int grid = 5);

}  // namespace intb
