#include "intb/multiflow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace intb {

namespace {

template <class T>
std::vector<T> slice(const std::vector<T>& v, int from, int len) {
    return std::vector<T>(v.begin() + from, v.begin() + from + len);
}

void check_tuple(const FormalBracket& b, const Fields& fields, std::size_t ntimes, const char* what) {
    if (!b.is_canonical()) throw std::invalid_argument(std::string(what) + ": bracket " + render(b) + " is not canonical");
    const auto m = static_cast<std::size_t>(b.degree());
    if (fields.size() != m) {
        throw std::invalid_argument(std::string(what) + ": bracket of degree " + std::to_string(m) + " given " +
                                    std::to_string(fields.size()) + " fields");
    }
    if (ntimes != m) {
        throw std::invalid_argument(std::string(what) + ": bracket of degree " + std::to_string(m) + " given " +
                                    std::to_string(ntimes) + " times");
    }
    for (const auto& f : fields) {
        if (f.dim() != fields.front().dim()) throw std::invalid_argument(std::string(what) + ": field dimensions differ");
    }
}

}  // namespace

void MultiflowProblem::validate() const {
    check_tuple(bracket, fields, t.size(), "multiflow problem");
    if (x.size() != fields.front().dim()) throw std::invalid_argument("multiflow problem: base point has wrong dimension");
}

std::vector<std::string> MultiflowProblem::regularity_warnings() const {
    std::vector<std::string> out;
    const auto prof = regularity_profile(bracket);
    for (std::size_t j = 0; j < fields.size(); ++j) {
        const int need = std::max(1, prof.orders[j]);
        const auto r = fields[j].regularity();
        if (!r) {
            out.push_back("field " + std::to_string(j + 1) + " has undeclared regularity, C^" + std::to_string(need) +
                          " required");
        } else if (*r < need) {
            out.push_back("field " + std::to_string(j + 1) + " is C^" + std::to_string(*r) + ", C^" +
                          std::to_string(need) + " required");
        }
    }
    return out;
}

FlowWord psi_word(const FormalBracket& b, const Fields& fields, const Times& t) {
    check_tuple(b, fields, t.size(), "psi_word");
    if (b.is_leaf()) return FlowWord({{fields.front(), t.front()}});
    const auto f = canonical_factorization(b);
    const int m2 = b.degree() - f.m1;
    const FlowWord w1 = psi_word(f.left, slice(fields, 0, f.m1), slice(t, 0, f.m1));
    const FlowWord w2 = psi_word(f.right, slice(fields, f.m1, m2), slice(t, f.m1, m2));
    return w1 * w2 * w1.inverse() * w2.inverse();
}

Vec psi_eval(const FormalBracket& b, const Fields& fields, const Vec& x, const Times& t, const OdeConfig& cfg) {
    return psi_word(b, fields, t).apply(x, cfg);
}

Vec psi_eval(const MultiflowProblem& problem, const OdeConfig& cfg) {
    problem.validate();
    return psi_eval(problem.bracket, problem.fields, problem.x, problem.t, cfg);
}

ParamField::ParamField(FormalBracket b, IntegratingParams params, FieldHandle field)
    : bracket_(std::move(b)), params_(std::move(params)), field_(std::move(field)) {
    check_arity(bracket_, params_);
}

FieldHandle classical_bracket(const FormalBracket& b, const Fields& fields) {
    check_tuple(b, fields, fields.size(), "classical_bracket");
    if (b.is_leaf()) return fields.front();
    const auto f = canonical_factorization(b);
    const int m2 = b.degree() - f.m1;
    return lie_bracket(classical_bracket(f.left, slice(fields, 0, f.m1)),
                       classical_bracket(f.right, slice(fields, f.m1, m2)));
}

FieldHandle integrating_bracket_slots(const FormalBracket& b, const Fields& fields, const Times& tau,
                                      const Times& s, const OdeConfig& cfg) {
    check_tuple(b, fields, tau.size(), "integrating_bracket");
    const int m = b.degree();
    if (static_cast<int>(s.size()) != m - 1) throw std::invalid_argument("integrating_bracket: s has wrong length");
    if (m == 1) return fields.front();
    const auto f = canonical_factorization(b);
    const int m1 = f.m1;
    const int m2 = m - m1;
    Times tau1 = slice(tau, 0, m1);
    tau1.back() = s[static_cast<std::size_t>(m1 - 1)];
    const Times tau2 = slice(tau, m1, m2);
    const Fields f1 = slice(fields, 0, m1);
    const Fields f2 = slice(fields, m1, m2);
    const FieldHandle inner1 = integrating_bracket_slots(f.left, f1, tau1, slice(s, 0, m1 - 1), cfg);
    const FieldHandle inner2 = integrating_bracket_slots(f.right, f2, tau2, slice(s, m1, m2 - 1), cfg);
    const FlowWord phi = psi_word(f.right, f2, tau2) * psi_word(f.left, f1, tau1);
    return ad(phi, lie_bracket(inner1, inner2), cfg);
}

ParamField integrating_bracket(const FormalBracket& b, const Fields& fields, const IntegratingParams& params,
                               const OdeConfig& cfg) {
    const Times tau = slot_vector(b, params);
    return ParamField(b, params, integrating_bracket_slots(b, fields, tau, params.s, cfg));
}

Vec v_field_derivative(const FormalBracket& b, const Fields& fields, const Times& t, const Vec& x,
                       const OdeConfig& cfg, double tau_step) {
    check_tuple(b, fields, t.size(), "v_field_derivative");
    if (!(tau_step > 0)) throw std::invalid_argument("v_field_derivative: tau step must be positive");
    const double tm = t.back();
    const double d = tau_step * std::max(1.0, std::abs(tm));

    // A fixed step count keeps every stencil point on the same discretization.
    OdeConfig fcfg = uniform(cfg);
    double tmax = 0;
    for (double ti : t) tmax = std::max(tmax, std::abs(ti));
    fcfg.fixed_steps = std::max(1, static_cast<int>(std::ceil((tmax + 2 * d) / cfg.uniform_step())));

    const Vec y = psi_word(b, fields, t).inverse().apply(x, fcfg);
    auto A = [&](double tau) {
        Times tt = t;
        tt.back() += tau;
        return psi_word(b, fields, tt).apply(y, fcfg);
    };
    return (8.0 * (A(d) - A(-d)) - (A(2 * d) - A(-2 * d))) / (12.0 * d);
}

VFieldValue v_field_quadrature(const FormalBracket& b, const Fields& fields, const Times& t, const Vec& x,
                               const QuadratureConfig& qcfg, const OdeConfig& cfg) {
    check_tuple(b, fields, t.size(), "v_field_quadrature");
    const int m = b.degree();
    if (m == 1) return {fields.front()(x), 0.0, 0};
    const Times box = slice(t, 0, m - 1);
    auto integrand = [&](const std::vector<double>& s) -> Vec {
        return integrating_bracket_slots(b, fields, t, s, cfg)(x);
    };
    const BoxResult r = integrate_box_refined(integrand, box, x.size(), qcfg);
    return {r.value, r.error_estimate, r.evaluations};
}

namespace {

FieldHandle v_closure_impl(const FormalBracket& b, const Fields& fields, const Times& t, int nodes,
                           const OdeConfig& cfg) {
    const int m = b.degree();
    if (m == 1) return fields.front();
    const auto f = canonical_factorization(b);
    const int m1 = f.m1;
    const int m2 = m - m1;
    const Fields f1 = slice(fields, 0, m1);
    const Fields f2 = slice(fields, m1, m2);
    const Times t1 = slice(t, 0, m1);
    const Times t2 = slice(t, m1, m2);
    const double upper = t1.back();
    const int n = fields.front().dim();
    if (upper == 0.0) return FieldHandle::zero(n);

    const FieldHandle v2 = v_closure_impl(f.right, f2, t2, nodes, cfg);
    const FlowWord w2 = psi_word(f.right, f2, t2);
    const GaussRule rule = gauss_legendre(nodes);
    Fields terms;
    std::vector<double> weights;
    for (int i = 0; i < nodes; ++i) {
        const double sigma = 0.5 * upper * (rule.nodes[static_cast<std::size_t>(i)] + 1);
        Times t1s = t1;
        t1s.back() = sigma;
        const FieldHandle v1 = v_closure_impl(f.left, f1, t1s, nodes, cfg);
        terms.push_back(ad(w2 * psi_word(f.left, f1, t1s), lie_bracket(v1, v2), cfg));
        weights.push_back(0.5 * upper * rule.weights[static_cast<std::size_t>(i)]);
    }
    return linear_combination(terms, weights);
}

}  // namespace

FieldHandle v_field_closure(const FormalBracket& b, const Fields& fields, const Times& t, int nodes,
                            const OdeConfig& cfg) {
    check_tuple(b, fields, t.size(), "v_field_closure");
    if (nodes < 1) throw std::invalid_argument("v_field_closure needs at least one node");
    return v_closure_impl(b, fields, t, nodes, cfg);
}

VFieldValue v_field_recursive(const FormalBracket& b, const Fields& fields, const Times& t, const Vec& x,
                              const OdeConfig& cfg, const QuadratureConfig& qcfg) {
    check_tuple(b, fields, t.size(), "v_field_recursive");
    qcfg.validate();
    if (b.degree() == 1) return {fields.front()(x), 0.0, 0};
    const int n = qcfg.nodes_for(1);
    const Vec coarse = v_field_closure(b, fields, t, n, cfg)(x);
    const Vec fine = v_field_closure(b, fields, t, n + qcfg.refinement_delta, cfg)(x);
    return {fine, (fine - coarse).lpNorm<Eigen::Infinity>(), 2L * n + qcfg.refinement_delta};
}

}  // namespace intb
