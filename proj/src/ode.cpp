#include "intb/ode.hpp"

#include <algorithm>
#include <cmath>

namespace intb {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Stepper {
    const OdeRhs& f;
    Vec k1, k2, k3, k4, k5, k6, k7, tmp;

    Stepper(const OdeRhs& rhs, Eigen::Index n)
        : f(rhs), k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n) {}

    // Advances y by h into ynew; k1 must hold f(y) on entry, k7 holds f(ynew) on exit.
    void step(const Vec& y, double h, Vec& ynew) {
        tmp = y + h * a21 * k1;
        f(tmp, k2);
        tmp = y + h * (a31 * k1 + a32 * k2);
        f(tmp, k3);
        tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        f(tmp, k4);
        tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        f(tmp, k5);
        tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        f(tmp, k6);
        ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        f(ynew, k7);
    }

    double error_norm(const Vec& y, const Vec& ynew, double h, const OdeConfig& cfg) {
        tmp = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        double acc = 0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            const double r = tmp[i] / sc;
            acc += r * r;
        }
        return std::sqrt(acc / static_cast<double>(y.size()));
    }
};

void check_state(const Vec& y, const OdeConfig& cfg, int state_dim) {
    if (!y.allFinite()) throw IntegrationError("non-finite state (blow-up)");
    if (y.lpNorm<Eigen::Infinity>() > cfg.blowup) throw IntegrationError("state norm exceeded blow-up bound");
    if (cfg.domain) {
        const Eigen::Index n = state_dim < 0 ? y.size() : state_dim;
        if (!cfg.domain->contains(y.head(n))) throw IntegrationError("trajectory left the working domain");
    }
}

}  // namespace

bool Box::contains(const Vec& x) const {
    if (x.size() != lower.size() || x.size() != upper.size()) {
        throw std::invalid_argument("domain box dimension does not match the state");
    }
    return (x.array() >= lower.array()).all() && (x.array() <= upper.array()).all();
}

void OdeConfig::validate() const {
    if (!(abs_tol > 0) || !(rel_tol > 0)) throw std::invalid_argument("ODE tolerances must be positive");
    if (!(max_step > 0)) throw std::invalid_argument("ODE max_step must be positive");
    if (fixed_steps < 0) throw std::invalid_argument("ODE fixed_steps must be nonnegative");
    if (max_steps <= 0) throw std::invalid_argument("ODE max_steps must be positive");
}

double OdeConfig::uniform_step() const {
    return std::min(max_step, std::pow(std::min(abs_tol, rel_tol), 0.2));
}

OdeConfig uniform(OdeConfig cfg) {
    cfg.scheme = OdeScheme::Dopri5Uniform;
    return cfg;
}

IntegrationError::IntegrationError(const std::string& what, int factor)
    : std::runtime_error(factor >= 0 ? what + " (flow factor " + std::to_string(factor) + ")" : what),
      bare_(what),
      factor_(factor) {}

IntegrationError IntegrationError::at_factor(int i) const { return IntegrationError(bare_, i); }

Vec integrate(const OdeRhs& rhs, const Vec& y0, double t, const OdeConfig& cfg, int state_dim) {
    cfg.validate();
    Vec y = y0;
    check_state(y, cfg, state_dim);
    if (t == 0.0) return y;

    Stepper st(rhs, y.size());
    Vec ynew(y.size());
    rhs(y, st.k1);
    const double dir = t > 0 ? 1.0 : -1.0;
    const double span = std::abs(t);

    if (cfg.scheme == OdeScheme::Dopri5Uniform) {
        const long n = cfg.fixed_steps > 0
                           ? cfg.fixed_steps
                           : std::max(1L, static_cast<long>(std::ceil(span / cfg.uniform_step() - 1e-12)));
        if (n > cfg.max_steps) throw IntegrationError("uniform scheme needs more than max_steps steps");
        const double h = t / static_cast<double>(n);
        for (long i = 0; i < n; ++i) {
            st.step(y, h, ynew);
            y.swap(ynew);
            st.k1.swap(st.k7);
            check_state(y, cfg, state_dim);
        }
        return y;
    }

    // Initial step from the scaled size of y and y'.
    double d0 = 0, d1 = 0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double sc = cfg.abs_tol + cfg.rel_tol * std::abs(y[i]);
        d0 = std::max(d0, std::abs(y[i]) / sc);
        d1 = std::max(d1, std::abs(st.k1[i]) / sc);
    }
    double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min({h, span, cfg.max_step});
    h = std::max(h, 1e-12 * span);

    double done = 0;
    long steps = 0;
    while (done < span) {
        if (++steps > cfg.max_steps) throw IntegrationError("exceeded max_steps");
        bool last = false;
        if (done + h >= span * (1 - 1e-14)) {
            h = span - done;
            last = true;
        }
        st.step(y, dir * h, ynew);
        const double err = st.error_norm(y, ynew, h, cfg);
        if (!std::isfinite(err)) {
            h *= 0.1;
            if (h < 1e-14 * std::max(1.0, span)) throw IntegrationError("step size underflow (blow-up)");
            continue;
        }
        if (err <= 1.0) {
            done = last ? span : done + h;
            y.swap(ynew);
            st.k1.swap(st.k7);
            check_state(y, cfg, state_dim);
            const double fac = err == 0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            h = std::min(h * fac, cfg.max_step);
        } else {
            h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
            if (h < 1e-14 * std::max(1.0, span)) throw IntegrationError("step size underflow");
        }
    }
    return y;
}

}  // namespace intb
