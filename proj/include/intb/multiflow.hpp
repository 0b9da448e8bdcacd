#pragma once

// Multiflows Psi_B^f, integrating brackets and the generating fields V_B^f.

#include "intb/bracket.hpp"
#include "intb/field.hpp"
#include "intb/params.hpp"
#include "intb/quadrature.hpp"

#include <string>
#include <vector>

namespace intb {

using Fields = std::vector<FieldHandle>;
using Times = std::vector<double>;

struct MultiflowProblem {
    FormalBracket bracket;
    Fields fields;
    Vec x;
    Times t;

    /// Canonical bracket, one field and one time per letter, common dimension.
    void validate() const;
    /// Slots whose declared regularity is below the C^B requirement, or undeclared.
    std::vector<std::string> regularity_warnings() const;
};

/// The word W(B1) W(B2) W(B1)^{-1} W(B2)^{-1}, with W(X1) = e^{t f}.
FlowWord psi_word(const FormalBracket& b, const Fields& fields, const Times& t);

Vec psi_eval(const FormalBracket& b, const Fields& fields, const Vec& x, const Times& t, const OdeConfig& cfg);
Vec psi_eval(const MultiflowProblem& problem, const OdeConfig& cfg);

/// A parameterized field together with the parameter pack it was built from.
class ParamField {
public:
    ParamField(FormalBracket b, IntegratingParams params, FieldHandle field);

    const FormalBracket& bracket() const noexcept { return bracket_; }
    const IntegratingParams& params() const noexcept { return params_; }
    const FieldHandle& field() const noexcept { return field_; }
    Vec operator()(const Vec& x) const { return field_(x); }

private:
    FormalBracket bracket_;
    IntegratingParams params_;
    FieldHandle field_;
};

ParamField integrating_bracket(const FormalBracket& b, const Fields& fields, const IntegratingParams& params,
                               const OdeConfig& cfg);

/// The integrating bracket addressed by its slot vector tau (length m) and s.
FieldHandle integrating_bracket_slots(const FormalBracket& b, const Fields& fields, const Times& tau,
                                      const Times& s, const OdeConfig& cfg);

/// Classical B(f) by nested lie_bracket.
FieldHandle classical_bracket(const FormalBracket& b, const Fields& fields);

/// d/dtau at 0 of x Psi(t)^{-1} Psi(t + tau e_m), 4th-order central
/// differences with step tau_step * max(1, |t_m|).
Vec v_field_derivative(const FormalBracket& b, const Fields& fields, const Times& t, const Vec& x,
                       const OdeConfig& cfg, double tau_step = 1e-3);

struct VFieldValue {
    Vec value;
    double error_estimate = 0;
    long nodes = 0;
};

/// Box integral of the integrating bracket over [0,t_1] x ... x [0,t_{m-1}].
VFieldValue v_field_quadrature(const FormalBracket& b, const Fields& fields, const Times& t, const Vec& x,
                               const QuadratureConfig& qcfg, const OdeConfig& cfg);

/// Single sigma-integral of the Ad-conjugated bracket of the factor V fields.
VFieldValue v_field_recursive(const FormalBracket& b, const Fields& fields, const Times& t, const Vec& x,
                              const OdeConfig& cfg, const QuadratureConfig& qcfg = {});

/// V_B^f(t) as a field, evaluated by the recursive route with n nodes per level.
FieldHandle v_field_closure(const FormalBracket& b, const Fields& fields, const Times& t, int nodes,
                            const OdeConfig& cfg);

}  // namespace intb
