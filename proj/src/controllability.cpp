#include "intb/controllability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace intb {

void ControlSystem::validate() const {
    if (fields.empty()) throw std::invalid_argument("control system needs at least one field");
    for (const auto& f : fields) {
        if (f.dim() != fields.front().dim()) throw std::invalid_argument("control system fields differ in dimension");
    }
}

int ControlSystem::dim() const { return fields.empty() ? 0 : fields.front().dim(); }

Fields BracketSlots::pick(const ControlSystem& sys) const {
    if (!bracket.is_canonical()) throw std::invalid_argument("bracket " + render(bracket) + " is not canonical");
    if (static_cast<int>(slots.size()) != bracket.degree()) {
        throw std::invalid_argument("bracket " + render(bracket) + " needs " + std::to_string(bracket.degree()) +
                                    " slots, got " + std::to_string(slots.size()));
    }
    Fields out;
    for (int s : slots) {
        if (s < 1 || s > static_cast<int>(sys.fields.size())) {
            throw std::invalid_argument("slot " + std::to_string(s) + " does not name a system field");
        }
        out.push_back(sys.fields[static_cast<std::size_t>(s - 1)]);
    }
    return out;
}

RankCertificate rank_condition(const ControlSystem& sys, const std::vector<BracketSlots>& certificate,
                               const Vec& x_star) {
    sys.validate();
    if (certificate.empty()) throw std::invalid_argument("rank certificate needs at least one bracket");
    if (x_star.size() != sys.dim()) throw std::invalid_argument("x_star has wrong dimension");
    RankCertificate rc;
    rc.brackets = certificate;
    const int n = sys.dim();
    Mat D(n, static_cast<Eigen::Index>(certificate.size()));
    for (std::size_t j = 0; j < certificate.size(); ++j) {
        const Fields fs = certificate[j].pick(sys);
        const FormalBracket& b = certificate[j].bracket;
        rc.max_degree = std::max(rc.max_degree, b.degree());
        const auto prof = regularity_profile(b);
        for (std::size_t i = 0; i < fs.size(); ++i) {
            const auto r = fs[i].regularity();
            const int need = std::max(1, prof.orders[i]);
            if (!r || *r < need) {
                rc.warnings.push_back(render(b) + ": slot " + std::to_string(i + 1) + " needs C^" +
                                      std::to_string(need) +
                                      (r ? ", field is C^" + std::to_string(*r) : ", regularity undeclared"));
            }
        }
        const Vec v = classical_bracket(b, fs)(x_star);
        rc.directions.push_back(v);
        D.col(static_cast<Eigen::Index>(j)) = v;
    }
    Eigen::JacobiSVD<Mat> svd(D);
    const Vec sv = svd.singularValues();
    rc.singular_values.assign(sv.data(), sv.data() + sv.size());
    const double smax = sv.size() ? sv[0] : 0.0;
    rc.threshold = 1e-8 * smax;
    for (double s : rc.singular_values) {
        if (s > rc.threshold && s > 0) ++rc.rank;
    }
    rc.full_rank = rc.rank == n;
    return rc;
}

SteeringExperiment steer_scaling_experiment(const ControlSystem& sys, const BracketSlots& word, const Vec& x_star,
                                            const std::vector<double>& d_grid, const OdeConfig& cfg) {
    sys.validate();
    if (x_star.size() != sys.dim()) throw std::invalid_argument("x_star has wrong dimension");
    const Fields fs = word.pick(sys);
    const FormalBracket& b = word.bracket;
    const int k = b.degree();
    const Vec dir = classical_bracket(b, fs)(x_star);
    const double bn = dir.norm();
    if (!(bn > 0)) throw std::invalid_argument("bracket direction vanishes at x_star");
    const Vec u = dir / bn;
    const long nfactors = num_exponential_factors(b);

    SteeringExperiment ex;
    ex.k = k;
    auto endpoint = [&](double t) {
        return psi_eval(b, fs, x_star, Times(static_cast<std::size_t>(k), t), cfg);
    };
    for (double d : d_grid) {
        if (d < 0) throw std::invalid_argument("target distances must be nonnegative");
        SteeringResult r;
        r.d = d;
        r.word = render(b);
        if (d == 0) {
            r.reached = true;
            ex.results.push_back(r);
            continue;
        }
        const Vec target = x_star + d * u;
        double t = std::pow(d / bn, 1.0 / k);
        const double p = u.dot(endpoint(t) - x_star);
        if (p > 0) t *= std::pow(d / p, 1.0 / k);
        r.t = t;
        r.time = static_cast<double>(nfactors) * t;
        r.final_error = (endpoint(t) - target).norm();
        r.reached = p > 0 && r.final_error <= 0.1 * d;
        ex.results.push_back(r);
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& r : ex.results) {
        if (!r.reached || r.d == 0) continue;
        const double lx = std::log(r.d), ly = std::log(r.time);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++ex.fit_points;
        ex.constant = std::max(ex.constant, r.time / std::pow(r.d, 1.0 / k));
    }
    if (ex.fit_points >= 2) {
        const double n = ex.fit_points;
        ex.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    } else {
        ex.exponent = std::nan("");
    }
    return ex;
}

}  // namespace intb
