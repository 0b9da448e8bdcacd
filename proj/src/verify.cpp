#include "intb/verify.hpp"

#include "intb/linear_oracle.hpp"
#include "intb/scenarios.hpp"

#include <algorithm>
#include <array>
#include <exception>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace intb {

namespace {

Json vec_json(const Vec& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Json mat_json(const Mat& m) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vec_json(m.row(i).transpose()));
    return a;
}

double inf_norm(const Vec& v) { return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>(); }

double ode_tol(const OdeConfig& cfg) { return std::max(cfg.abs_tol, cfg.rel_tol); }

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

// Row matrix of a linear field, read off from its values at the basis vectors.
Mat matrix_of(const FieldHandle& f) {
    const int n = f.dim();
    Mat M(n, n);
    for (int i = 0; i < n; ++i) M.row(i) = f(Vec::Unit(n, i)).transpose();
    return M;
}

// 1-D Gauss-Legendre integral of a field-valued integrand over [0, upper], as a field.
FieldHandle integral_field(const std::function<FieldHandle(double)>& integrand, double upper, int nodes, int dim) {
    if (upper == 0.0) return FieldHandle::zero(dim);
    const GaussRule r = gauss_legendre(nodes);
    Fields terms;
    std::vector<double> w;
    const double half = 0.5 * upper;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        terms.push_back(integrand(half * (r.nodes[i] + 1)));
        w.push_back(half * r.weights[i]);
    }
    return linear_combination(terms, w);
}

}  // namespace

Json VerificationReport::to_json() const {
    Json j;
    j["scenario"] = scenario;
    j["check"] = check;
    j["pass"] = pass;
    j["residual_max"] = residual_max;
    j["residual_rel"] = residual_rel;
    j["quadrature_error_estimate"] = quadrature_error_estimate;
    j["tolerance"] = tolerance;
    j["fitted_order"] = fitted_order ? Json(*fitted_order) : Json(nullptr);
    j["settings"] = settings;
    j["details"] = details;
    return j;
}

std::string VerificationReport::csv_header() { return "scenario,check,residual_rel,fitted_order,pass"; }

std::string VerificationReport::csv_row() const {
    std::ostringstream os;
    os.precision(17);
    os << scenario << ',' << check << ',' << residual_rel << ',';
    if (fitted_order) os << *fitted_order;
    os << ',' << (pass ? "true" : "false");
    return os.str();
}

std::string VerificationReport::summary() const {
    std::string s = std::string(pass ? "PASS " : "FAIL ") + scenario + " " + check + " residual_rel=" +
                    fmt(residual_rel) + " tol=" + fmt(tolerance);
    if (fitted_order) s += " order=" + fmt(*fitted_order);
    return s;
}

double pass_tolerance(double qerr_rel, const OdeConfig& cfg) {
    return std::max(1e-6, 100 * qerr_rel + 100 * ode_tol(cfg));
}

Json settings_json(const OdeConfig& cfg) {
    Json j;
    j["ode_abs_tol"] = cfg.abs_tol;
    j["ode_rel_tol"] = cfg.rel_tol;
    j["ode_scheme"] = cfg.scheme == OdeScheme::Dopri5 ? "dopri5" : "dopri5-uniform";
    return j;
}

Json settings_json(const OdeConfig& cfg, const QuadratureConfig& qcfg) {
    Json j = settings_json(cfg);
    j["quad_nodes_per_dim"] = qcfg.nodes_per_dim;
    j["quad_refinement_delta"] = qcfg.refinement_delta;
    j["quad_rule"] = "gauss-legendre";
    return j;
}

// ---------------------------------------------------------------------------

VerificationReport verify_integral_representation(const MultiflowProblem& problem, const QuadratureConfig& qcfg,
                                                  const OdeConfig& cfg, double delta, const std::string& scenario) {
    problem.validate();
    qcfg.validate();
    const FormalBracket& b = problem.bracket;
    const int m = b.degree();
    if (m < 2) throw std::invalid_argument("verify_integral_representation needs degree >= 2");
    for (double ti : problem.t) {
        if (std::abs(ti) > delta) {
            throw std::invalid_argument("time " + std::to_string(ti) + " exceeds the time box bound " +
                                        std::to_string(delta));
        }
    }
    const Vec& x = problem.x;
    const Times& t = problem.t;
    const Vec lhs = psi_eval(problem, cfg);

    // Base points x Psi(t_1..t_{m-1}, s_m) for every s_m node of both rules.
    std::map<double, Vec> base;
    const int n0 = qcfg.nodes_for(m);
    for (int n : {n0, n0 + qcfg.refinement_delta}) {
        for (double sm : mapped_nodes(n, t.back())) {
            if (base.count(sm)) continue;
            Times tt = t;
            tt.back() = sm;
            base.emplace(sm, psi_eval(b, problem.fields, x, tt, cfg));
        }
    }
    auto integrand = [&](const std::vector<double>& s) -> Vec {
        const double sm = s.back();
        Times tau = t;
        tau.back() = sm;
        const auto it = base.find(sm);
        const Vec y = it != base.end() ? it->second : psi_eval(b, problem.fields, x, tau, cfg);
        const Times ss(s.begin(), s.end() - 1);
        return integrating_bracket_slots(b, problem.fields, tau, ss, cfg)(y);
    };
    const BoxResult q = integrate_box_refined(integrand, t, x.size(), qcfg);
    const Vec rhs = x + q.value;

    VerificationReport r;
    r.scenario = scenario;
    r.check = "integral-representation";
    const double scale = std::max(1.0, inf_norm(x));
    r.residual_max = inf_norm(lhs - rhs);
    r.residual_rel = r.residual_max / scale;
    r.quadrature_error_estimate = q.error_estimate;
    r.tolerance = pass_tolerance(q.error_estimate / scale, cfg);
    r.pass = r.residual_rel <= r.tolerance;
    r.settings = settings_json(cfg, qcfg);
    r.details["bracket"] = render(b);
    r.details["t"] = t;
    r.details["x"] = vec_json(x);
    r.details["lhs"] = vec_json(lhs);
    r.details["rhs"] = vec_json(rhs);
    const double disp = inf_norm(lhs - x);
    r.details["displacement"] = disp;
    r.details["residual_vs_displacement"] = disp > 0 ? r.residual_max / disp : 0.0;
    r.details["nodes"] = q.nodes;
    r.details["refined_nodes"] = q.refined_nodes;
    r.details["regularity_warnings"] = problem.regularity_warnings();
    return r;
}

VerificationReport verify_degree3_form(const MultiflowProblem& problem, const QuadratureConfig& qcfg,
                                       const OdeConfig& cfg, const std::string& scenario) {
    problem.validate();
    if (render(problem.bracket) != "[[X1,X2],X3]") {
        throw std::invalid_argument("verify_degree3_form needs the bracket [[X1,X2],X3]");
    }
    const auto& f = problem.fields;
    const FieldHandle &f1 = f[0], &f2 = f[1], &f3 = f[2];
    const Vec& x = problem.x;
    const double t1 = problem.t[0], t2 = problem.t[1], t3 = problem.t[2];
    auto E = [](const FieldHandle& g, double s) { return FlowFactor{g, s}; };
    auto psi = [&](double a, double b, double c) {
        return FlowWord({E(f1, a), E(f2, b), E(f1, -a), E(f2, -b), E(f3, c), E(f2, b), E(f1, a), E(f2, -b),
                         E(f1, -a), E(f3, -c)});
    };
    const FieldHandle b12 = lie_bracket(f1, f2);
    const Vec lhs = psi(t1, t2, t3).apply(x, cfg);
    auto integrand = [&](const std::vector<double>& s) -> Vec {
        const double s1 = s[0], s2 = s[1], s3 = s[2];
        const Vec y = psi(t1, t2, s3).apply(x, cfg);
        const FieldHandle inner = ad(FlowWord({E(f2, s2), E(f1, s1)}), b12, cfg);
        const FlowWord outer({E(f3, s3), E(f1, t1), E(f2, s2), E(f1, -t1), E(f2, -s2)});
        return ad(outer, lie_bracket(inner, f3), cfg)(y);
    };
    const BoxResult q = integrate_box_refined(integrand, problem.t, x.size(), qcfg);
    const Vec rhs = x + q.value;

    VerificationReport r;
    r.scenario = scenario;
    r.check = "degree3-form";
    const double scale = std::max(1.0, inf_norm(x));
    r.residual_max = inf_norm(lhs - rhs);
    r.residual_rel = r.residual_max / scale;
    r.quadrature_error_estimate = q.error_estimate;
    r.tolerance = pass_tolerance(q.error_estimate / scale, cfg);
    r.pass = r.residual_rel <= r.tolerance;
    r.settings = settings_json(cfg, qcfg);
    r.details["t"] = problem.t;
    r.details["lhs"] = vec_json(lhs);
    r.details["rhs"] = vec_json(rhs);
    r.details["displacement"] = inf_norm(lhs - x);
    return r;
}

std::vector<double> default_asymptotic_grid() {
    std::vector<double> g;
    for (int k = 3; k <= 9; ++k) g.push_back(std::ldexp(1.0, -k));
    return g;
}

VerificationReport verify_asymptotic(const FormalBracket& b, const Fields& fields, const Vec& x,
                                     std::vector<double> t_grid, const OdeConfig& cfg,
                                     const std::string& scenario) {
    const int m = b.degree();
    MultiflowProblem probe{b, fields, x, Times(static_cast<std::size_t>(m), 0.0)};
    probe.validate();
    if (t_grid.size() < 2) throw std::invalid_argument("asymptotic grid needs at least two points");
    for (double t : t_grid) {
        if (!(t > 0)) throw std::invalid_argument("asymptotic grid points must be positive");
    }
    std::sort(t_grid.begin(), t_grid.end(), std::greater<>());
    const OdeConfig ucfg = uniform(cfg);
    const Vec bx = classical_bracket(b, fields)(x);

    std::vector<double> res;
    std::vector<Vec> disp;
    for (double t : t_grid) {
        const Vec d = psi_eval(b, fields, x, Times(static_cast<std::size_t>(m), t), ucfg) - x;
        disp.push_back(d);
        res.push_back(inf_norm(d - std::pow(t, m) * bx));
    }

    // Points before the first residual ratio above 0.5 are above the roundoff floor.
    std::size_t valid = res.size();
    for (std::size_t i = 1; i < res.size(); ++i) {
        if (!(res[i] <= 0.5 * res[i - 1])) {
            valid = i;
            break;
        }
    }
    VerificationReport r;
    r.scenario = scenario;
    r.check = "asymptotic";
    r.settings = settings_json(ucfg);
    r.tolerance = m + 0.9;
    r.details["bracket"] = render(b);
    r.details["t_grid"] = t_grid;
    r.details["residuals"] = res;
    r.details["bracket_value"] = vec_json(bx);
    r.details["valid_points"] = valid;

    const double finest_t = t_grid.back();
    const double bn = inf_norm(bx);
    if (bn > 0) {
        const double rel = inf_norm(disp.back() / std::pow(finest_t, m) - bx) / bn;
        r.details["leading_term_rel_error"] = rel;
    }
    r.residual_max = res.back();
    r.residual_rel = res.back() / std::max(1.0, inf_norm(x));

    const double roundoff = 100 * std::numeric_limits<double>::epsilon() * std::max(1.0, inf_norm(x));
    if (std::all_of(res.begin(), res.end(), [&](double v) { return v <= roundoff; })) {
        r.pass = true;
        r.details["note"] = "residual at roundoff level on the whole grid";
        return r;
    }
    if (valid < 2) {
        r.pass = false;
        r.details["note"] = "residuals hit the roundoff floor; shrink the grid";
        return r;
    }
    const std::size_t first = valid >= 4 ? valid - 4 : 0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(valid - first);
    for (std::size_t i = first; i < valid; ++i) {
        const double lx = std::log(t_grid[i]), ly = std::log(res[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    r.fitted_order = slope;
    r.details["fit_points"] = valid - first;
    if (valid < res.size()) r.details["floor"] = res[valid];
    r.pass = slope >= r.tolerance;
    return r;
}

VerificationReport verify_commutativity_byproduct(const FieldHandle& f1, const FieldHandle& f2,
                                                  const std::vector<Vec>& x_grid, const Times& t,
                                                  const OdeConfig& cfg, double tol, const std::string& scenario) {
    if (x_grid.empty()) throw std::invalid_argument("commutativity check needs at least one probe point");
    if (t.size() != 2) throw std::invalid_argument("commutativity check needs two times");
    const FormalBracket b = parse("[X1,X2]");
    const FieldHandle br = lie_bracket(f1, f2);
    double disp = 0, bracket_norm = 0;
    for (const Vec& x : x_grid) {
        disp = std::max(disp, inf_norm(psi_eval(b, {f1, f2}, x, t, cfg) - x));
        bracket_norm = std::max(bracket_norm, inf_norm(br(x)));
    }
    const bool commuting = bracket_norm <= 1e-12;
    VerificationReport r;
    r.scenario = scenario;
    r.check = "commutativity";
    r.residual_max = disp;
    r.residual_rel = disp;
    r.tolerance = tol;
    r.pass = commuting ? disp <= tol : disp > tol;
    r.settings = settings_json(cfg);
    r.details["bracket_max_norm"] = bracket_norm;
    r.details["expected"] = commuting ? "identity" : "displacement";
    r.details["t"] = t;
    return r;
}

VerificationReport verify_adjoint_failure(const OdeConfig& cfg) {
    const MultiflowProblem p = scenarios::example51({0.2, 0.2, 0.2});
    const double classical = inf_norm(matrix_of(classical_bracket(p.bracket, p.fields)).reshaped());
    const IntegratingParams ip{{0.2}, 0.1, {0.1, 0.2}};
    const Mat ib = matrix_of(integrating_bracket(p.bracket, p.fields, ip, cfg).field());
    const double ib_norm = inf_norm(ib.reshaped());
    Vec probe(2);
    probe << 1, 1;
    const Vec moved = psi_eval(p.bracket, p.fields, probe, p.t, cfg);
    const double disp = inf_norm(moved - probe);

    VerificationReport r;
    r.scenario = "example51";
    r.check = "adjoint-failure";
    r.residual_max = classical;
    r.residual_rel = classical;
    r.tolerance = 0;
    r.pass = classical == 0.0 && ib_norm >= 1e-3 && disp >= 1e-6;
    r.settings = settings_json(cfg);
    r.details["classical_bracket_max_abs"] = classical;
    r.details["integrating_bracket"] = mat_json(ib);
    r.details["integrating_bracket_params"] = {0.2, 0.1, 0.1, 0.2};
    r.details["integrating_bracket_max_abs"] = ib_norm;
    r.details["psi_displacement"] = disp;
    r.details["psi_point"] = vec_json(moved);
    return r;
}

VerificationReport verify_lemma2(const FieldHandle& f1, const FieldHandle& f2, const Vec& x, double s2, double s1,
                                 const QuadratureConfig& qcfg, const OdeConfig& cfg, const std::string& scenario) {
    qcfg.validate();
    const FormalBracket b = parse("[X1,X2]");
    const Fields fs{f1, f2};
    const FieldHandle b12 = lie_bracket(f1, f2);
    const FieldHandle b212 = lie_bracket(f2, b12);
    const FieldHandle b112 = lie_bracket(f1, b12);
    const Vec lhs = integrating_bracket_slots(b, fs, {0.0, s2}, {s1}, cfg)(x) - b12(x);

    auto corrections = [&](int nodes) {
        const Vec c1 = integrate_box(
            [&](const std::vector<double>& s) { return ad(FlowWord({{f2, s[0]}}), b212, cfg)(x); }, {s2}, nodes,
            x.size(), qcfg.kernel);
        const Vec c2 = integrate_box(
            [&](const std::vector<double>& s) { return ad(FlowWord({{f2, s2}, {f1, s[0]}}), b112, cfg)(x); },
            {s1}, nodes, x.size(), qcfg.kernel);
        return std::pair<Vec, Vec>{c1, c2};
    };
    const int n = qcfg.nodes_for(1);
    const auto coarse = corrections(n);
    const auto fine = corrections(n + qcfg.refinement_delta);
    const Vec rhs = fine.first + fine.second;
    const double qerr = inf_norm(rhs - coarse.first - coarse.second);

    VerificationReport r;
    r.scenario = scenario;
    r.check = "lemma2";
    const double scale = std::max(1.0, inf_norm(x));
    r.residual_max = inf_norm(lhs - rhs);
    r.residual_rel = r.residual_max / scale;
    r.quadrature_error_estimate = qerr;
    r.tolerance = pass_tolerance(qerr / scale, cfg);
    r.pass = r.residual_rel <= r.tolerance;
    r.settings = settings_json(cfg, qcfg);
    r.details["s2"] = s2;
    r.details["s1"] = s1;
    r.details["integrating_minus_classical"] = vec_json(lhs);
    r.details["correction_s2"] = vec_json(fine.first);
    r.details["correction_s1"] = vec_json(fine.second);
    r.details["correction_max_abs"] = std::max(inf_norm(fine.first), inf_norm(fine.second));
    r.details["difference_max_abs"] = inf_norm(lhs);
    return r;
}

VerificationReport verify_bracket_decomposition(const Fields& fields, const Vec& x, double t1, double s3,
                                                double s1, double s2, bool nilpotent, const QuadratureConfig& qcfg,
                                                const OdeConfig& cfg, const std::string& scenario) {
    if (fields.size() != 3) throw std::invalid_argument("bracket decomposition needs three fields");
    qcfg.validate();
    const FormalBracket b = parse("[[X1,X2],X3]");
    const FieldHandle &f1 = fields[0], &f2 = fields[1], &f3 = fields[2];
    const int n = f1.dim();
    const Vec lhs = integrating_bracket(b, fields, {{t1}, s3, {s1, s2}}, cfg)(x);

    const FieldHandle b12 = lie_bracket(f1, f2);
    const FieldHandle b212 = lie_bracket(f2, b12);
    const FieldHandle b112 = lie_bracket(f1, b12);
    const FlowWord outer({{f3, s3}, {f1, t1}, {f2, s2}, {f1, -t1}, {f2, -s2}});
    auto rhs_with = [&](int nodes) -> Vec {
        Fields parts{lie_bracket(b12, f3)};
        if (!nilpotent) {
            parts.push_back(integral_field(
                [&](double tau) { return lie_bracket(ad(FlowWord({{f2, tau}}), b212, cfg), f3); }, s2, nodes, n));
            parts.push_back(integral_field(
                [&](double sig) { return lie_bracket(ad(FlowWord({{f2, s2}, {f1, sig}}), b112, cfg), f3); }, s1,
                nodes, n));
        }
        return ad(outer, linear_combination(parts, std::vector<double>(parts.size(), 1.0)), cfg)(x);
    };
    const int nodes = qcfg.nodes_for(1);
    const Vec coarse = rhs_with(nodes);
    const Vec rhs = nilpotent ? coarse : rhs_with(nodes + qcfg.refinement_delta);
    const double qerr = inf_norm(rhs - coarse);

    VerificationReport r;
    r.scenario = scenario;
    r.check = nilpotent ? "bracket-decomposition-nilpotent" : "bracket-decomposition";
    const double scale = std::max(1.0, inf_norm(x));
    r.residual_max = inf_norm(lhs - rhs);
    r.residual_rel = r.residual_max / scale;
    r.quadrature_error_estimate = qerr;
    r.tolerance = pass_tolerance(qerr / scale, cfg);
    r.pass = r.residual_rel <= r.tolerance;
    r.settings = settings_json(cfg, qcfg);
    r.details["params"] = {t1, s3, s1, s2};
    r.details["lhs"] = vec_json(lhs);
    r.details["rhs"] = vec_json(rhs);
    return r;
}

VerificationReport verify_v_field(const MultiflowProblem& problem, const QuadratureConfig& qcfg,
                                  const OdeConfig& cfg, const std::string& scenario) {
    problem.validate();
    const auto& b = problem.bracket;
    const Vec d = v_field_derivative(b, problem.fields, problem.t, problem.x, cfg);
    const VFieldValue q = v_field_quadrature(b, problem.fields, problem.t, problem.x, qcfg, cfg);
    const VFieldValue rec = v_field_recursive(b, problem.fields, problem.t, problem.x, cfg, qcfg);
    const double spread = std::max({inf_norm(d - q.value), inf_norm(d - rec.value), inf_norm(q.value - rec.value)});

    VerificationReport r;
    r.scenario = scenario;
    r.check = "v-field-agreement";
    const double scale = std::max(1.0, inf_norm(problem.x));
    r.residual_max = spread;
    r.residual_rel = spread / scale;
    r.quadrature_error_estimate = std::max(q.error_estimate, rec.error_estimate);
    r.tolerance = std::max(1e-6, 50 * r.quadrature_error_estimate / scale);
    r.pass = r.residual_rel <= r.tolerance;
    r.settings = settings_json(cfg, qcfg);
    r.details["bracket"] = render(b);
    r.details["t"] = problem.t;
    r.details["derivative"] = vec_json(d);
    r.details["quadrature"] = vec_json(q.value);
    r.details["recursive"] = vec_json(rec.value);
    return r;
}

namespace {

double rel_err(const Mat& num, const Mat& ref) {
    double e = 0;
    for (Eigen::Index i = 0; i < ref.rows(); ++i) {
        for (Eigen::Index j = 0; j < ref.cols(); ++j) {
            e = std::max(e, std::abs(num(i, j) - ref(i, j)) / std::max(1.0, std::abs(ref(i, j))));
        }
    }
    return e;
}

std::vector<double> grid_values(int grid) {
    std::vector<double> g;
    for (int i = 0; i < grid; ++i) g.push_back(grid == 1 ? 0.0 : -0.3 + 0.6 * i / (grid - 1));
    return g;
}

VerificationReport grid_report(const std::string& check, double err, const OdeConfig& cfg, long points) {
    VerificationReport r;
    r.scenario = "example51";
    r.check = check;
    r.residual_max = err;
    r.residual_rel = err;
    r.tolerance = 1e-8;
    r.pass = err <= r.tolerance;
    r.settings = settings_json(cfg);
    r.details["grid_points"] = points;
    return r;
}

}  // namespace

std::vector<VerificationReport> example51_checks(const OdeConfig& cfg, int grid) {
    if (grid < 1) throw std::invalid_argument("example51_checks needs at least one grid point");
    namespace ex = intb::example51;
    const MultiflowProblem p = scenarios::example51();
    const Fields& f = p.fields;
    const FormalBracket b2 = parse("[X1,X2]");
    const std::vector<double> g = grid_values(grid);
    std::vector<VerificationReport> out;

    Mat c2(2, 2);
    c2 << -1, 0, 0, 1;
    const double e_c2 = rel_err(matrix_of(lie_bracket(f[0], f[1])), c2);
    const double e_c3 = rel_err(matrix_of(classical_bracket(p.bracket, f)), Mat::Zero(2, 2));
    out.push_back(grid_report("classical-brackets", std::max(e_c2, e_c3), cfg, 1));
    out.back().details["bracket12_error"] = e_c2;
    out.back().details["bracket123_error"] = e_c3;

    // Grid sweeps; each point is independent.
    std::vector<std::array<double, 4>> pts2, pts3;
    for (double s2 : g)
        for (double s1 : g) pts2.push_back({s2, s1, 0, 0});
    for (double t1 : g)
        for (double s3 : g)
            for (double s1 : g)
                for (double s2 : g) pts3.push_back({t1, s3, s1, s2});

    std::vector<double> e2(pts2.size()), e3(pts3.size());
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < static_cast<long>(pts2.size() + pts3.size()); ++i) {
        try {
            if (i < static_cast<long>(pts2.size())) {
                const auto& q = pts2[static_cast<std::size_t>(i)];
                const Mat num = matrix_of(integrating_bracket(b2, {f[0], f[1]}, {{}, q[0], {q[1]}}, cfg).field());
                e2[static_cast<std::size_t>(i)] = rel_err(num, ex::bracket2_display(q[0], q[1]));
            } else {
                const auto k = static_cast<std::size_t>(i) - pts2.size();
                const auto& q = pts3[k];
                const Mat num = matrix_of(integrating_bracket(p.bracket, f, {{q[0]}, q[1], {q[2], q[3]}}, cfg).field());
                e3[k] = rel_err(num, ex::bracket3_display(q[0], q[1], q[2], q[3]));
            }
        } catch (...) {
#pragma omp critical(intb_example51_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    out.push_back(grid_report("integrating-bracket-2", *std::max_element(e2.begin(), e2.end()), cfg,
                              static_cast<long>(pts2.size())));
    out.push_back(grid_report("integrating-bracket-3", *std::max_element(e3.begin(), e3.end()), cfg,
                              static_cast<long>(pts3.size())));

    // Psi at the basis points: numerical flow composition, exact row-action
    // oracle, and the transcribed point formula.
    const LinearScenario sc = ex::scenario();
    double e_display = 0, e_oracle = 0, e_display_column = 0;
    long npsi = 0;
    for (double t1 : g)
        for (double t2 : g)
            for (double t3 : g) {
                const Times t{t1, t2, t3};
                const Mat P = linear_psi_matrix(sc, t);
                Mat num(2, 2), disp(2, 2), oracle(2, 2);
                for (int i = 0; i < 2; ++i) {
                    const Vec e = Vec::Unit(2, i);
                    num.col(i) = psi_eval(p.bracket, f, e, t, cfg);
                    disp.col(i) = ex::psi_display(t1, t2, t3, e);
                    oracle.col(i) = P.transpose() * e;
                }
                e_display = std::max(e_display, rel_err(num, disp));
                e_oracle = std::max(e_oracle, rel_err(num, oracle));
                e_display_column = std::max(e_display_column, rel_err(disp, P));
                ++npsi;
            }
    out.push_back(grid_report("psi-closed-form", e_display, cfg, npsi));
    out.back().details["numeric_vs_exact_row_action"] = e_oracle;
    out.back().details["closed_form_vs_column_action"] = e_display_column;
    out.push_back(grid_report("psi-exact-product", e_oracle, cfg, npsi));
    return out;
}

}  // namespace intb
