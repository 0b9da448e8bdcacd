#include "intb/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace intb {

struct FieldHandle::Impl {
    int dim = 0;
    EvalFn eval;
    JacFn jac;
    std::optional<int> regularity;
    double noise = kClosureNoise;
    std::string label;
    std::optional<PolynomialField> poly;
};

namespace {

std::optional<int> min_reg(std::optional<int> a, std::optional<int> b) {
    if (!a || !b) return std::nullopt;
    return std::min(*a, *b);
}

std::optional<int> minus_one(std::optional<int> r) {
    if (!r) return std::nullopt;
    return *r >= kSmooth ? kSmooth : *r - 1;
}

void check_point(const Vec& x, int dim, const std::string& label) {
    if (x.size() != dim) {
        throw std::invalid_argument("field '" + label + "' of dimension " + std::to_string(dim) +
                                    " evaluated at a point of dimension " + std::to_string(x.size()));
    }
}

}  // namespace

FieldHandle::FieldHandle(int dim, EvalFn eval, JacFn jacobian, std::optional<int> regularity, double noise,
                         std::string label) {
    if (dim <= 0) throw std::invalid_argument("field dimension must be positive");
    if (!eval) throw std::invalid_argument("field needs an evaluation function");
    auto p = std::make_shared<Impl>();
    p->dim = dim;
    p->eval = std::move(eval);
    p->jac = std::move(jacobian);
    p->regularity = regularity;
    p->noise = noise;
    p->label = std::move(label);
    impl_ = std::move(p);
}

FieldHandle FieldHandle::polynomial(PolynomialField pf, std::string label) {
    auto p = std::make_shared<Impl>();
    p->dim = pf.dim();
    p->poly = std::move(pf);
    const PolynomialField* raw = &*p->poly;
    p->eval = [raw](const Vec& x) { return raw->eval(x); };
    p->jac = [raw](const Vec& x) { return raw->jacobian(x); };
    p->regularity = kSmooth;
    p->noise = 1e-15;
    p->label = std::move(label);
    return FieldHandle(std::shared_ptr<const Impl>(std::move(p)));
}

FieldHandle FieldHandle::linear(const Mat& A, Action action) {
    return polynomial(PolynomialField::linear(A, action == Action::Right), "linear");
}

FieldHandle FieldHandle::zero(int dim) {
    if (dim <= 0) throw std::invalid_argument("zero field needs a positive dimension");
    return polynomial(PolynomialField(std::vector<Polynomial>(static_cast<std::size_t>(dim), Polynomial(dim))),
                      "zero");
}

FieldHandle FieldHandle::builtin(const std::string& name, int dim) {
    auto check_dim = [&](int expected) {
        if (dim != 0 && dim != expected) {
            throw std::invalid_argument("builtin '" + name + "' has dimension " + std::to_string(expected));
        }
    };
    if (name == "zero") return zero(dim);
    if (name == "heisenberg_f1") {
        check_dim(3);
        return polynomial(PolynomialField({Polynomial::constant(3, 1), Polynomial(3), Polynomial(3)}), name);
    }
    if (name == "heisenberg_f2") {
        check_dim(3);
        return polynomial(
            PolynomialField({Polynomial(3), Polynomial::constant(3, 1), Polynomial::variable(3, 0)}), name);
    }
    if (name == "c1_kink") {
        // (x2, |x1|^1.5): C^1 but not C^2 across x1 = 0.
        check_dim(2);
        auto eval = [](const Vec& x) {
            check_point(x, 2, "c1_kink");
            Vec v(2);
            v << x[1], std::pow(std::abs(x[0]), 1.5);
            return v;
        };
        auto jac = [](const Vec& x) {
            Mat J = Mat::Zero(2, 2);
            J(0, 1) = 1;
            J(1, 0) = 1.5 * std::copysign(std::sqrt(std::abs(x[0])), x[0]);
            return J;
        };
        return FieldHandle(2, eval, jac, 1, 1e-15, name);
    }
    throw std::invalid_argument("unknown builtin field '" + name + "'");
}

FieldHandle FieldHandle::from_spec(const VectorFieldSpec& spec) {
    switch (spec.kind) {
        case VectorFieldSpec::Kind::Linear:
            if (spec.dim != 0 && spec.matrix.rows() != spec.dim) {
                throw std::invalid_argument("linear field matrix does not match the declared dimension");
            }
            return linear(spec.matrix, spec.action);
        case VectorFieldSpec::Kind::Polynomial: {
            const int n = spec.dim != 0 ? spec.dim : static_cast<int>(spec.components.size());
            if (static_cast<int>(spec.components.size()) != n) {
                throw std::invalid_argument("polynomial field needs one component per dimension");
            }
            std::vector<Polynomial> comps;
            for (const auto& terms : spec.components) comps.emplace_back(n, terms);
            return polynomial(PolynomialField(std::move(comps)));
        }
        case VectorFieldSpec::Kind::Builtin:
            return builtin(spec.name, spec.dim);
    }
    throw std::logic_error("unreachable field kind");
}

int FieldHandle::dim() const noexcept { return impl_->dim; }

Vec FieldHandle::operator()(const Vec& x) const {
    check_point(x, impl_->dim, impl_->label);
    return impl_->eval(x);
}

Mat FieldHandle::jacobian(const Vec& x) const {
    check_point(x, impl_->dim, impl_->label);
    if (impl_->jac) return impl_->jac(x);
    return fd_jacobian(x);
}

Mat FieldHandle::fd_jacobian(const Vec& x) const {
    check_point(x, impl_->dim, impl_->label);
    const int n = impl_->dim;
    const double base = std::pow(std::max(impl_->noise, 1e-16), 0.2);
    Mat J(n, n);
    Vec p = x;
    for (int j = 0; j < n; ++j) {
        const double h = std::max(1.0, std::abs(x[j])) * base;
        p[j] = x[j] + 2 * h;
        const Vec f2 = impl_->eval(p);
        p[j] = x[j] + h;
        const Vec f1 = impl_->eval(p);
        p[j] = x[j] - h;
        const Vec m1 = impl_->eval(p);
        p[j] = x[j] - 2 * h;
        const Vec m2 = impl_->eval(p);
        p[j] = x[j];
        J.col(j) = (8.0 * (f1 - m1) - (f2 - m2)) / (12.0 * h);
    }
    return J;
}

bool FieldHandle::has_analytic_jacobian() const noexcept { return static_cast<bool>(impl_->jac); }
std::optional<int> FieldHandle::regularity() const noexcept { return impl_->regularity; }
double FieldHandle::noise() const noexcept { return impl_->noise; }
const std::string& FieldHandle::label() const noexcept { return impl_->label; }

const PolynomialField* FieldHandle::polynomial_form() const noexcept {
    return impl_->poly ? &*impl_->poly : nullptr;
}

FieldHandle FieldHandle::scaled(double c) const {
    if (const auto* p = polynomial_form()) {
        std::vector<Polynomial> comps;
        for (const auto& q : p->components()) comps.push_back(c * q);
        return polynomial(PolynomialField(std::move(comps)), impl_->label);
    }
    auto self = impl_;
    JacFn jac;
    if (self->jac) jac = [self, c](const Vec& x) -> Mat { return c * self->jac(x); };
    return FieldHandle(
        self->dim, [self, c](const Vec& x) -> Vec { return c * self->eval(x); }, jac, self->regularity,
        self->noise, self->label);
}

// ---------------------------------------------------------------------------

FlowWord FlowWord::inverse() const {
    std::vector<FlowFactor> out;
    out.reserve(factors_.size());
    for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) out.push_back({it->field, -it->duration});
    return FlowWord(std::move(out));
}

FlowWord operator*(const FlowWord& a, const FlowWord& b) {
    std::vector<FlowFactor> out = a.factors_;
    out.insert(out.end(), b.factors_.begin(), b.factors_.end());
    return FlowWord(std::move(out));
}

Vec FlowWord::apply(const Vec& x, const OdeConfig& cfg) const {
    Vec y = x;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        try {
            y = flow(factors_[i].field, y, factors_[i].duration, cfg);
        } catch (const IntegrationError& e) {
            throw e.at_factor(static_cast<int>(i));
        }
    }
    return y;
}

Vec flow(const FieldHandle& f, const Vec& x, double t, const OdeConfig& cfg) {
    if (x.size() != f.dim()) throw std::invalid_argument("flow start point has wrong dimension");
    if (t == 0.0) return x;
    return integrate([&f](const Vec& y, Vec& dy) { dy = f(y); }, x, t, cfg);
}

namespace {

// Jointly transports a point z and a matrix W (n x k) along e^{t g}:
// z' = g(z), W' = Dg(z) W.
void transport(const FieldHandle& g, Vec& z, Mat& W, double t, const OdeConfig& cfg) {
    if (t == 0.0) return;
    const Eigen::Index n = z.size();
    const Eigen::Index k = W.cols();
    Vec y(n + n * k);
    y.head(n) = z;
    y.tail(n * k) = Eigen::Map<const Vec>(W.data(), n * k);
    auto rhs = [&g, n, k](const Vec& s, Vec& ds) {
        const Vec p = s.head(n);
        ds.resize(s.size());
        ds.head(n) = g(p);
        Eigen::Map<const Mat> Wm(s.data() + n, n, k);
        Eigen::Map<Mat>(ds.data() + n, n, k) = g.jacobian(p) * Wm;
    };
    const Vec out = integrate(rhs, y, t, cfg, static_cast<int>(n));
    z = out.head(n);
    W = Eigen::Map<const Mat>(out.data() + n, n, k);
}

}  // namespace

Mat flow_jacobian(const FieldHandle& f, const Vec& x, double t, const OdeConfig& cfg) {
    if (x.size() != f.dim()) throw std::invalid_argument("flow start point has wrong dimension");
    Vec z = x;
    Mat J = Mat::Identity(f.dim(), f.dim());
    transport(f, z, J, t, cfg);
    return J;
}

FieldHandle lie_bracket(const FieldHandle& f, const FieldHandle& g) {
    if (f.dim() != g.dim()) throw std::invalid_argument("lie_bracket: fields have different dimensions");
    if (f.polynomial_form() && g.polynomial_form()) {
        return FieldHandle::polynomial(bracket(*f.polynomial_form(), *g.polynomial_form()),
                                       "[" + f.label() + "," + g.label() + "]");
    }
    const double noise = std::pow(std::max({f.noise(), g.noise(), 1e-16}), 0.8);
    auto eval = [f, g](const Vec& x) -> Vec {
        const Vec p = g.jacobian(x) * f(x);
        const Vec q = f.jacobian(x) * g(x);
        return p - q;
    };
    return FieldHandle(f.dim(), eval, {}, minus_one(min_reg(f.regularity(), g.regularity())), noise,
                       "[" + f.label() + "," + g.label() + "]");
}

FieldHandle ad(const FlowWord& word, const FieldHandle& h, const OdeConfig& cfg) {
    std::vector<FlowFactor> kept;
    std::optional<int> reg = h.regularity();
    for (const auto& fac : word.factors()) {
        if (fac.field.dim() != h.dim()) throw std::invalid_argument("ad: flow word and field dimensions differ");
        if (fac.duration == 0.0) continue;
        reg = min_reg(reg, minus_one(fac.field.regularity()));
        kept.push_back(fac);
    }
    if (kept.empty()) return h;
    const FlowWord phi(std::move(kept));
    const OdeConfig ucfg = uniform(cfg);
    const FlowWord back = phi.inverse();
    auto eval = [phi, back, h, ucfg](const Vec& x) -> Vec {
        Vec z = phi.apply(x, ucfg);
        Mat w = h(z);
        const auto& fs = back.factors();
        for (std::size_t i = 0; i < fs.size(); ++i) {
            try {
                transport(fs[i].field, z, w, fs[i].duration, ucfg);
            } catch (const IntegrationError& e) {
                throw e.at_factor(static_cast<int>(phi.size() + i));
            }
        }
        return w.col(0);
    };
    return FieldHandle(h.dim(), eval, {}, reg, std::max(h.noise(), kClosureNoise), "Ad(" + h.label() + ")");
}

FieldHandle linear_combination(const std::vector<FieldHandle>& fields, const std::vector<double>& w) {
    if (fields.empty() || fields.size() != w.size()) {
        throw std::invalid_argument("linear_combination needs matching nonempty field and weight lists");
    }
    const int n = fields.front().dim();
    bool all_poly = true;
    double noise = 0;
    std::optional<int> reg = kSmooth;
    for (const auto& f : fields) {
        if (f.dim() != n) throw std::invalid_argument("linear_combination: fields have different dimensions");
        all_poly = all_poly && f.polynomial_form();
        noise = std::max(noise, f.noise());
        reg = min_reg(reg, f.regularity());
    }
    if (all_poly) {
        std::vector<Polynomial> comps(static_cast<std::size_t>(n), Polynomial(n));
        for (std::size_t k = 0; k < fields.size(); ++k) {
            const auto& pc = fields[k].polynomial_form()->components();
            for (std::size_t i = 0; i < comps.size(); ++i) comps[i] = comps[i] + w[k] * pc[i];
        }
        return FieldHandle::polynomial(PolynomialField(std::move(comps)), "combination");
    }
    auto eval = [fields, w, n](const Vec& x) -> Vec {
        Vec acc = Vec::Zero(n);
        for (std::size_t k = 0; k < fields.size(); ++k) acc += w[k] * fields[k](x);
        return acc;
    };
    return FieldHandle(n, eval, {}, reg, noise, "combination");
}

}  // namespace intb
