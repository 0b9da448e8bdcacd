#include "intb/problem.hpp"

#include "intb/controllability.hpp"
#include "intb/scenarios.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace intb {

namespace {

std::string key_path(const std::string& base, const std::string& key) { return base + "." + key; }
std::string idx_path(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

const Json& need(const Json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) throw ValidationError(path, "expected an object");
    if (!j.contains(key)) throw ValidationError(key_path(path, key), "missing required field");
    return j.at(key);
}

double number(const Json& j, const std::string& path) {
    if (!j.is_number()) throw ValidationError(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ValidationError(path, "expected a finite number");
    return v;
}

int integer(const Json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ValidationError(path, "expected an integer");
    return j.get<int>();
}

std::vector<double> numbers(const Json& j, const std::string& path) {
    if (!j.is_array()) throw ValidationError(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], idx_path(path, i)));
    return out;
}

Vec vector_of(const Json& j, const std::string& path) {
    const auto v = numbers(j, path);
    if (v.empty()) throw ValidationError(path, "expected a nonempty array");
    return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Mat matrix_of(const Json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw ValidationError(path, "expected a nonempty array of rows");
    const auto n = j.size();
    Mat A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = numbers(j[i], idx_path(path, i));
        if (row.size() != n) throw ValidationError(idx_path(path, i), "matrix must be square");
        for (std::size_t k = 0; k < n; ++k) A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = row[k];
    }
    return A;
}

FormalBracket bracket_of(const Json& j, const std::string& path) {
    if (!j.is_string()) throw ValidationError(path, "expected a bracket string");
    try {
        return parse(j.get<std::string>());
    } catch (const std::exception& e) {
        throw ValidationError(path, e.what());
    }
}

VectorFieldSpec field_spec(const Json& j, const std::string& path) {
    const Json& kind = need(j, "kind", path);
    if (!kind.is_string()) throw ValidationError(key_path(path, "kind"), "expected a string");
    VectorFieldSpec s;
    const std::string k = kind.get<std::string>();
    if (k == "linear") {
        s.kind = VectorFieldSpec::Kind::Linear;
        s.matrix = matrix_of(need(j, "matrix", path), key_path(path, "matrix"));
        s.dim = static_cast<int>(s.matrix.rows());
        if (j.contains("action")) {
            const Json& a = j.at("action");
            if (a == "right") {
                s.action = Action::Right;
            } else if (a == "left") {
                s.action = Action::Left;
            } else {
                throw ValidationError(key_path(path, "action"), "expected \"right\" or \"left\"");
            }
        }
    } else if (k == "polynomial") {
        s.kind = VectorFieldSpec::Kind::Polynomial;
        const Json& comps = need(j, "components", path);
        const std::string cpath = key_path(path, "components");
        if (!comps.is_array() || comps.empty()) throw ValidationError(cpath, "expected a nonempty array");
        s.dim = static_cast<int>(comps.size());
        for (std::size_t i = 0; i < comps.size(); ++i) {
            const std::string ip = idx_path(cpath, i);
            if (!comps[i].is_array()) throw ValidationError(ip, "expected an array of monomials");
            std::vector<Term> terms;
            for (std::size_t q = 0; q < comps[i].size(); ++q) {
                const std::string qp = idx_path(ip, q);
                Term t;
                t.coef = number(need(comps[i][q], "coef", qp), key_path(qp, "coef"));
                const Json& pw = need(comps[i][q], "powers", qp);
                const std::string pp = key_path(qp, "powers");
                if (!pw.is_array() || static_cast<int>(pw.size()) != s.dim) {
                    throw ValidationError(pp, "expected " + std::to_string(s.dim) + " powers");
                }
                for (std::size_t r = 0; r < pw.size(); ++r) {
                    const int p = integer(pw[r], idx_path(pp, r));
                    if (p < 0) throw ValidationError(idx_path(pp, r), "powers must be nonnegative");
                    t.powers.push_back(p);
                }
                terms.push_back(std::move(t));
            }
            s.components.push_back(std::move(terms));
        }
    } else if (k == "builtin") {
        s.kind = VectorFieldSpec::Kind::Builtin;
        const Json& name = need(j, "name", path);
        if (!name.is_string()) throw ValidationError(key_path(path, "name"), "expected a string");
        s.name = name.get<std::string>();
        if (j.contains("dim")) s.dim = integer(j.at("dim"), key_path(path, "dim"));
    } else {
        throw ValidationError(key_path(path, "kind"), "unknown field kind '" + k + "'");
    }
    return s;
}

OdeConfig ode_of(const Json& j, const std::string& path) {
    OdeConfig c;
    if (!j.is_object()) throw ValidationError(path, "expected an object");
    if (j.contains("abs_tol")) c.abs_tol = number(j.at("abs_tol"), key_path(path, "abs_tol"));
    if (j.contains("rel_tol")) c.rel_tol = number(j.at("rel_tol"), key_path(path, "rel_tol"));
    if (j.contains("max_step")) c.max_step = number(j.at("max_step"), key_path(path, "max_step"));
    if (j.contains("scheme")) {
        const Json& s = j.at("scheme");
        if (s == "dopri5") {
            c.scheme = OdeScheme::Dopri5;
        } else if (s == "dopri5-uniform") {
            c.scheme = OdeScheme::Dopri5Uniform;
        } else {
            throw ValidationError(key_path(path, "scheme"), "expected \"dopri5\" or \"dopri5-uniform\"");
        }
    }
    if (j.contains("domain")) {
        const std::string dp = key_path(path, "domain");
        const Json& d = j.at("domain");
        Box b{vector_of(need(d, "lower", dp), key_path(dp, "lower")),
              vector_of(need(d, "upper", dp), key_path(dp, "upper"))};
        if (b.lower.size() != b.upper.size()) throw ValidationError(dp, "lower and upper differ in length");
        c.domain = b;
    }
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw ValidationError(path, e.what());
    }
    return c;
}

QuadratureConfig quad_of(const Json& j, const std::string& path) {
    QuadratureConfig q;
    if (!j.is_object()) throw ValidationError(path, "expected an object");
    if (j.contains("nodes_per_dim")) q.nodes_per_dim = integer(j.at("nodes_per_dim"), key_path(path, "nodes_per_dim"));
    if (j.contains("refinement_delta")) {
        q.refinement_delta = integer(j.at("refinement_delta"), key_path(path, "refinement_delta"));
    }
    if (j.contains("rule") && j.at("rule") != "gauss-legendre") {
        throw ValidationError(key_path(path, "rule"), "only \"gauss-legendre\" is supported");
    }
    if (j.contains("kernel")) {
        const Json& k = j.at("kernel");
        if (k == "serial") {
            q.kernel = Kernel::Serial;
        } else if (k == "openmp") {
            q.kernel = Kernel::OpenMP;
        } else {
            throw ValidationError(key_path(path, "kernel"), "expected \"serial\" or \"openmp\"");
        }
    }
    try {
        q.validate();
    } catch (const std::invalid_argument& e) {
        throw ValidationError(path, e.what());
    }
    return q;
}

}  // namespace

MultiflowProblem ProblemFile::multiflow() const {
    if (!bracket) throw ValidationError("$.bracket", "this command needs a bracket");
    if (!x) throw ValidationError("$.x", "this command needs a base point");
    if (!t) throw ValidationError("$.t", "this command needs times");
    if (!bracket->is_canonical()) throw ValidationError("$.bracket", "bracket " + render(*bracket) + " is not canonical");
    return {*bracket, fields, *x, *t};
}

ProblemFile load_problem(const Json& j) {
    if (!j.is_object()) throw ValidationError("$", "problem must be a JSON object");
    ProblemFile p;
    const Json& fl = need(j, "fields", "$");
    if (!fl.is_array()) throw ValidationError("$.fields", "expected an array");
    if (fl.empty()) throw ValidationError("$.fields", "empty fields list");
    for (std::size_t i = 0; i < fl.size(); ++i) {
        const std::string path = idx_path("$.fields", i);
        p.field_specs.push_back(field_spec(fl[i], path));
        try {
            p.fields.push_back(FieldHandle::from_spec(p.field_specs.back()));
        } catch (const std::invalid_argument& e) {
            throw ValidationError(path, e.what());
        }
        if (p.fields.back().dim() != p.fields.front().dim()) {
            throw ValidationError(path, "field dimension differs from $.fields[0]");
        }
    }
    const int n = p.fields.front().dim();
    if (j.contains("bracket")) {
        p.bracket = bracket_of(j.at("bracket"), "$.bracket");
        if (static_cast<int>(p.fields.size()) != p.bracket->degree()) {
            throw ValidationError("$.fields", "bracket of degree " + std::to_string(p.bracket->degree()) + " needs " +
                                                  std::to_string(p.bracket->degree()) + " fields, got " +
                                                  std::to_string(p.fields.size()));
        }
    }
    if (j.contains("x")) {
        p.x = vector_of(j.at("x"), "$.x");
        if (p.x->size() != n) throw ValidationError("$.x", "point must have dimension " + std::to_string(n));
    }
    if (j.contains("t")) {
        p.t = numbers(j.at("t"), "$.t");
        if (p.bracket && static_cast<int>(p.t->size()) != p.bracket->degree()) {
            throw ValidationError("$.t", "expected " + std::to_string(p.bracket->degree()) + " times");
        }
    }
    if (j.contains("ode")) p.ode = ode_of(j.at("ode"), "$.ode");
    if (j.contains("quadrature")) p.quadrature = quad_of(j.at("quadrature"), "$.quadrature");
    if (j.contains("scenario")) {
        if (!j.at("scenario").is_object()) throw ValidationError("$.scenario", "expected an object");
        p.scenario = j.at("scenario");
    }
    return p;
}

ProblemFile load_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("$", "cannot open problem file '" + path + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("$", std::string("malformed JSON: ") + e.what());
    }
    return load_problem(j);
}

// ---------------------------------------------------------------------------

namespace {

Json vjson(const Vec& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

std::string vtext(const Vec& v) {
    std::ostringstream os;
    os.precision(12);
    os << "(";
    for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
    os << ")";
    return os.str();
}

const Json* opt(const ProblemFile& p, const char* key) {
    return p.scenario.contains(key) ? &p.scenario.at(key) : nullptr;
}

std::string spath(const char* key) { return std::string("$.scenario.") + key; }

void add(CommandOutput& out, VerificationReport r) {
    out.lines.push_back(r.summary());
    out.reports.push_back(std::move(r));
}

std::vector<BracketSlots> slot_list(const Json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw ValidationError(path, "expected a nonempty array");
    std::vector<BracketSlots> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string ip = idx_path(path, i);
        BracketSlots bs{bracket_of(need(j[i], "bracket", ip), key_path(ip, "bracket")), {}};
        const Json& sl = need(j[i], "slots", ip);
        if (!sl.is_array()) throw ValidationError(key_path(ip, "slots"), "expected an array of integers");
        for (std::size_t k = 0; k < sl.size(); ++k) bs.slots.push_back(integer(sl[k], idx_path(key_path(ip, "slots"), k)));
        out.push_back(std::move(bs));
    }
    return out;
}

bool all_linear(const ProblemFile& p) {
    for (const auto& s : p.field_specs) {
        if (s.kind != VectorFieldSpec::Kind::Linear) return false;
    }
    return true;
}

}  // namespace

const std::vector<std::string>& known_commands() {
    static const std::vector<std::string> cmds{"psi",           "ibracket",  "verify-integral", "verify-asymptotic",
                                               "verify-lemma2", "verify-v",  "example51",       "rank",
                                               "steer"};
    return cmds;
}

Json CommandOutput::to_json(const std::string& command) const {
    Json j;
    j["command"] = command;
    j["results"] = results;
    Json reps = Json::array();
    for (const auto& r : reports) reps.push_back(r.to_json());
    j["reports"] = reps;
    return j;
}

std::string CommandOutput::to_csv() const {
    std::string s = VerificationReport::csv_header() + "\n";
    for (const auto& r : reports) s += r.csv_row() + "\n";
    return s;
}

CommandOutput run_command(const ProblemFile& problem, const std::string& command, const RunOptions& opts) {
    OdeConfig cfg = problem.ode;
    if (opts.ode_tol) {
        if (!(*opts.ode_tol > 0)) throw ValidationError("--ode-tol", "must be positive");
        cfg.abs_tol = cfg.rel_tol = *opts.ode_tol;
    }
    QuadratureConfig qcfg = problem.quadrature;
    if (opts.quad_nodes) {
        if (*opts.quad_nodes < 2) throw ValidationError("--quad-nodes", "must be at least 2");
        qcfg.nodes_per_dim = *opts.quad_nodes;
    }
    const double delta = opts.delta ? *opts.delta : (all_linear(problem) ? 0.5 : 0.3);
    if (!(delta > 0)) throw ValidationError("--delta", "must be positive");

    CommandOutput out;
    if (command == "psi") {
        const MultiflowProblem mp = problem.multiflow();
        const Vec y = psi_eval(mp, cfg);
        out.results["bracket"] = render(mp.bracket);
        out.results["factors"] = num_exponential_factors(mp.bracket);
        out.results["x"] = vjson(mp.x);
        out.results["t"] = mp.t;
        out.results["psi"] = vjson(y);
        out.lines.push_back("psi " + vtext(y));
    } else if (command == "ibracket") {
        const MultiflowProblem mp = problem.multiflow();
        const int m = mp.bracket.degree();
        IntegratingParams ip;
        if (m > 1) {
            ip = params_from_times(mp.bracket, mp.t, mp.t.back(), Times(mp.t.begin(), mp.t.end() - 1));
            if (const Json* j = opt(problem, "t_del")) ip.t_del = numbers(*j, spath("t_del"));
            if (const Json* j = opt(problem, "s_m")) ip.s_m = number(*j, spath("s_m"));
            if (const Json* j = opt(problem, "s")) ip.s = numbers(*j, spath("s"));
        }
        try {
            check_arity(mp.bracket, ip);
        } catch (const std::invalid_argument& e) {
            throw ValidationError("$.scenario", e.what());
        }
        const Vec v = integrating_bracket(mp.bracket, mp.fields, ip, cfg)(mp.x);
        const Vec c = classical_bracket(mp.bracket, mp.fields)(mp.x);
        out.results["bracket"] = render(mp.bracket);
        out.results["t_del"] = ip.t_del;
        out.results["s_m"] = ip.s_m;
        out.results["s"] = ip.s;
        out.results["x"] = vjson(mp.x);
        out.results["integrating_bracket"] = vjson(v);
        out.results["classical_bracket"] = vjson(c);
        out.lines.push_back("integrating bracket " + vtext(v));
        out.lines.push_back("classical bracket   " + vtext(c));
    } else if (command == "verify-integral") {
        const MultiflowProblem mp = problem.multiflow();
        for (double ti : mp.t) {
            if (std::abs(ti) > delta) throw ValidationError("$.t", "time exceeds the time box bound " + std::to_string(delta));
        }
        add(out, verify_integral_representation(mp, qcfg, cfg, delta));
        if (render(mp.bracket) == "[[X1,X2],X3]") add(out, verify_degree3_form(mp, qcfg, cfg));
    } else if (command == "verify-asymptotic") {
        const MultiflowProblem mp = problem.multiflow();
        std::vector<double> grid = default_asymptotic_grid();
        if (const Json* j = opt(problem, "t_grid")) grid = numbers(*j, spath("t_grid"));
        try {
            add(out, verify_asymptotic(mp.bracket, mp.fields, mp.x, grid, cfg));
        } catch (const std::invalid_argument& e) {
            throw ValidationError(spath("t_grid"), e.what());
        }
    } else if (command == "verify-lemma2") {
        const MultiflowProblem mp = problem.multiflow();
        if (render(mp.bracket) != "[X1,X2]") throw ValidationError("$.bracket", "verify-lemma2 needs [X1,X2]");
        double s2 = mp.t[1], s1 = mp.t[0];
        if (const Json* j = opt(problem, "s2")) s2 = number(*j, spath("s2"));
        if (const Json* j = opt(problem, "s1")) s1 = number(*j, spath("s1"));
        add(out, verify_lemma2(mp.fields[0], mp.fields[1], mp.x, s2, s1, qcfg, cfg));
    } else if (command == "verify-v") {
        add(out, verify_v_field(problem.multiflow(), qcfg, cfg));
    } else if (command == "example51") {
        for (auto& r : example51_checks(cfg)) add(out, std::move(r));
        add(out, verify_adjoint_failure(cfg));
        const MultiflowProblem mp = scenarios::example51();
        add(out, verify_integral_representation(mp, qcfg, cfg, 0.5, "example51"));
        add(out, verify_degree3_form(mp, qcfg, cfg, "example51"));
    } else if (command == "rank") {
        const Json* bl = opt(problem, "brackets");
        if (!bl) throw ValidationError(spath("brackets"), "missing required field");
        const auto slots = slot_list(*bl, spath("brackets"));
        Vec xs = problem.x ? *problem.x : Vec::Zero(problem.fields.front().dim());
        if (const Json* j = opt(problem, "x_star")) xs = vector_of(*j, spath("x_star"));
        RankCertificate rc;
        try {
            rc = rank_condition(ControlSystem{problem.fields}, slots, xs);
        } catch (const std::invalid_argument& e) {
            throw ValidationError(spath("brackets"), e.what());
        }
        Json dirs = Json::array();
        for (const auto& d : rc.directions) dirs.push_back(vjson(d));
        out.results["x_star"] = vjson(xs);
        out.results["directions"] = dirs;
        out.results["singular_values"] = rc.singular_values;
        out.results["threshold"] = rc.threshold;
        out.results["rank"] = rc.rank;
        out.results["max_degree"] = rc.max_degree;
        out.results["full_rank"] = rc.full_rank;
        out.results["warnings"] = rc.warnings;
        VerificationReport r;
        r.scenario = "problem";
        r.check = "rank-condition";
        r.pass = rc.full_rank;
        r.tolerance = rc.threshold;
        r.details["rank"] = rc.rank;
        r.details["dimension"] = problem.fields.front().dim();
        add(out, std::move(r));
        for (const auto& w : rc.warnings) out.lines.push_back("warning: " + w);
    } else if (command == "steer") {
        const Json* bj = opt(problem, "bracket");
        if (!bj) throw ValidationError(spath("bracket"), "missing required field");
        BracketSlots bs{bracket_of(*bj, spath("bracket")), {}};
        if (const Json* j = opt(problem, "slots")) {
            for (double s : numbers(*j, spath("slots"))) bs.slots.push_back(static_cast<int>(s));
        } else {
            for (int i = 1; i <= bs.bracket.degree(); ++i) bs.slots.push_back(i);
        }
        Vec xs = problem.x ? *problem.x : Vec::Zero(problem.fields.front().dim());
        if (const Json* j = opt(problem, "x_star")) xs = vector_of(*j, spath("x_star"));
        std::vector<double> grid{1e-4, 1e-3, 1e-2};
        if (const Json* j = opt(problem, "d_grid")) grid = numbers(*j, spath("d_grid"));
        SteeringExperiment ex;
        try {
            ex = steer_scaling_experiment(ControlSystem{problem.fields}, bs, xs, grid, cfg);
        } catch (const std::invalid_argument& e) {
            throw ValidationError("$.scenario", e.what());
        }
        Json rows = Json::array();
        double worst = 0;
        bool reached = true;
        for (const auto& s : ex.results) {
            Json row;
            row["d"] = s.d;
            row["time"] = s.time;
            row["t"] = s.t;
            row["final_error"] = s.final_error;
            row["reached"] = s.reached;
            rows.push_back(row);
            reached = reached && s.reached;
            if (s.d > 0) worst = std::max(worst, s.final_error / s.d);
        }
        out.results["word"] = render(bs.bracket);
        out.results["k"] = ex.k;
        out.results["steps"] = rows;
        out.results["exponent"] = ex.exponent;
        out.results["constant"] = ex.constant;
        VerificationReport r;
        r.scenario = "problem";
        r.check = "steering";
        r.fitted_order = ex.exponent;
        r.residual_max = worst;
        r.residual_rel = worst;
        r.tolerance = 0.01;
        const double expected = 1.0 / ex.k;
        r.pass = reached && worst <= 0.01 && std::abs(ex.exponent - expected) <= 0.1;
        r.details["expected_exponent"] = expected;
        add(out, std::move(r));
    } else {
        throw ValidationError("command", "unknown command '" + command + "'");
    }
    return out;
}

}  // namespace intb
