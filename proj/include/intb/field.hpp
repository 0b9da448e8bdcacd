#pragma once

// Vector fields on open subsets of R^n, their flows, Lie brackets and the Ad
// pullback.
//
// Conventions: points are acted on from the right. A linear field with
// matrix A is x -> x A, flow words act leftmost factor first, and
// [f,g](x) = Dg(x) f(x) - Df(x) g(x). Linear fields bracket as A B - B A.

#include "intb/ode.hpp"
#include "intb/polynomial.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace intb {

/// Declared C^r order of an infinitely differentiable field.
inline constexpr int kSmooth = 1 << 20;

/// Roundoff level assumed for fields evaluated by closures.
inline constexpr double kClosureNoise = 1e-14;

enum class Action { Right, Left };

struct VectorFieldSpec {
    enum class Kind { Linear, Polynomial, Builtin };
    Kind kind = Kind::Linear;
    int dim = 0;
    Mat matrix;                                  // Linear
    Action action = Action::Right;               // Linear
    std::vector<std::vector<Term>> components;   // Polynomial
    std::string name;                            // Builtin
};

class FieldHandle {
public:
    using EvalFn = std::function<Vec(const Vec&)>;
    using JacFn = std::function<Mat(const Vec&)>;

    FieldHandle(int dim, EvalFn eval, JacFn jacobian = {}, std::optional<int> regularity = std::nullopt,
                double noise = kClosureNoise, std::string label = "closure");

    static FieldHandle from_spec(const VectorFieldSpec& spec);
    static FieldHandle linear(const Mat& A, Action action = Action::Right);
    static FieldHandle polynomial(PolynomialField p, std::string label = "polynomial");
    /// Known names: zero, heisenberg_f1, heisenberg_f2, c1_kink.
    static FieldHandle builtin(const std::string& name, int dim = 0);
    static FieldHandle zero(int dim);

    int dim() const noexcept;
    Vec operator()(const Vec& x) const;
    /// Analytic Jacobian when available, else 4th-order central differences
    /// with steps max(1,|x_i|) * noise^(1/5).
    Mat jacobian(const Vec& x) const;
    Mat fd_jacobian(const Vec& x) const;
    bool has_analytic_jacobian() const noexcept;

    std::optional<int> regularity() const noexcept;
    double noise() const noexcept;
    const PolynomialField* polynomial_form() const noexcept;
    const std::string& label() const noexcept;

    FieldHandle scaled(double c) const;

private:
    struct Impl;
    explicit FieldHandle(std::shared_ptr<const Impl> p) : impl_(std::move(p)) {}
    std::shared_ptr<const Impl> impl_;
};

struct FlowFactor {
    FieldHandle field;
    double duration;
};

/// Ordered product of exponentials e^{t_1 g_1} ... e^{t_k g_k}, leftmost first.
class FlowWord {
public:
    FlowWord() = default;
    explicit FlowWord(std::vector<FlowFactor> factors) : factors_(std::move(factors)) {}

    const std::vector<FlowFactor>& factors() const noexcept { return factors_; }
    std::size_t size() const noexcept { return factors_.size(); }
    bool empty() const noexcept { return factors_.empty(); }

    /// Reverse order with negated durations.
    FlowWord inverse() const;
    friend FlowWord operator*(const FlowWord& a, const FlowWord& b);

    /// x pushed through every factor in order. IntegrationError carries the
    /// index of the failing factor.
    Vec apply(const Vec& x, const OdeConfig& cfg) const;

private:
    std::vector<FlowFactor> factors_;
};

Vec flow(const FieldHandle& f, const Vec& x, double t, const OdeConfig& cfg);
/// D(x -> x e^{tf}) by the variational equation J' = Df(x(t)) J.
Mat flow_jacobian(const FieldHandle& f, const Vec& x, double t, const OdeConfig& cfg);

FieldHandle lie_bracket(const FieldHandle& f, const FieldHandle& g);

/// x -> D(phi^{-1})|_{phi(x)} h(phi(x)). Closures integrate with uniform(cfg).
FieldHandle ad(const FlowWord& phi, const FieldHandle& h, const OdeConfig& cfg);

/// Sum of fields of the same dimension weighted by w.
FieldHandle linear_combination(const std::vector<FieldHandle>& fields, const std::vector<double>& w);

}  // namespace intb
