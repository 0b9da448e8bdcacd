#include "intb/polynomial.hpp"

#include <algorithm>
#include <stdexcept>

namespace intb {

namespace {

void check_same(const Polynomial& a, const Polynomial& b) {
    if (a.nvars() != b.nvars()) throw std::invalid_argument("polynomials in different numbers of variables");
}

}  // namespace

Polynomial::Polynomial(int nvars) : nvars_(nvars) {
    if (nvars < 0) throw std::invalid_argument("negative number of variables");
}

Polynomial::Polynomial(int nvars, std::vector<Term> terms) : nvars_(nvars) {
    if (nvars < 0) throw std::invalid_argument("negative number of variables");
    for (const Term& t : terms) {
        if (static_cast<int>(t.powers.size()) != nvars) {
            throw std::invalid_argument("monomial has " + std::to_string(t.powers.size()) +
                                        " powers, expected " + std::to_string(nvars));
        }
        for (int p : t.powers) {
            if (p < 0) throw std::invalid_argument("negative monomial power");
        }
    }
    std::stable_sort(terms.begin(), terms.end(),
                     [](const Term& a, const Term& b) { return a.powers < b.powers; });
    for (Term& t : terms) {
        if (!terms_.empty() && terms_.back().powers == t.powers) {
            terms_.back().coef += t.coef;
        } else {
            terms_.push_back(std::move(t));
        }
    }
    std::erase_if(terms_, [](const Term& t) { return t.coef == 0.0; });
}

Polynomial Polynomial::constant(int nvars, double c) {
    return Polynomial(nvars, {{c, std::vector<int>(static_cast<std::size_t>(nvars), 0)}});
}

Polynomial Polynomial::variable(int nvars, int i) {
    if (i < 0 || i >= nvars) throw std::out_of_range("variable index out of range");
    std::vector<int> p(static_cast<std::size_t>(nvars), 0);
    p[static_cast<std::size_t>(i)] = 1;
    return Polynomial(nvars, {{1.0, p}});
}

int Polynomial::degree() const {
    int d = -1;
    for (const Term& t : terms_) {
        int s = 0;
        for (int p : t.powers) s += p;
        d = std::max(d, s);
    }
    return d;
}

double Polynomial::eval(const Eigen::VectorXd& x) const {
    if (x.size() != nvars_) throw std::invalid_argument("polynomial evaluated at a point of wrong dimension");
    double acc = 0;
    for (const Term& t : terms_) {
        double m = t.coef;
        for (int i = 0; i < nvars_; ++i) {
            for (int k = 0; k < t.powers[static_cast<std::size_t>(i)]; ++k) m *= x[i];
        }
        acc += m;
    }
    return acc;
}

Polynomial Polynomial::derivative(int i) const {
    if (i < 0 || i >= nvars_) throw std::out_of_range("variable index out of range");
    std::vector<Term> out;
    for (const Term& t : terms_) {
        const int p = t.powers[static_cast<std::size_t>(i)];
        if (p == 0) continue;
        Term d{t.coef * p, t.powers};
        d.powers[static_cast<std::size_t>(i)] = p - 1;
        out.push_back(std::move(d));
    }
    return Polynomial(nvars_, std::move(out));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    check_same(a, b);
    std::vector<Term> t = a.terms_;
    t.insert(t.end(), b.terms_.begin(), b.terms_.end());
    return Polynomial(a.nvars_, std::move(t));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-1.0) * b; }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    check_same(a, b);
    std::vector<Term> t;
    t.reserve(a.terms_.size() * b.terms_.size());
    for (const Term& x : a.terms_) {
        for (const Term& y : b.terms_) {
            Term z{x.coef * y.coef, x.powers};
            for (std::size_t i = 0; i < z.powers.size(); ++i) z.powers[i] += y.powers[i];
            t.push_back(std::move(z));
        }
    }
    return Polynomial(a.nvars_, std::move(t));
}

Polynomial operator*(double c, const Polynomial& a) {
    std::vector<Term> t = a.terms_;
    for (Term& x : t) x.coef *= c;
    return Polynomial(a.nvars_, std::move(t));
}

bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.nvars_ != b.nvars_ || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
        if (a.terms_[i].coef != b.terms_[i].coef || a.terms_[i].powers != b.terms_[i].powers) return false;
    }
    return true;
}

PolynomialField::PolynomialField(std::vector<Polynomial> components) : comps_(std::move(components)) {
    const int n = dim();
    if (n == 0) throw std::invalid_argument("polynomial field needs at least one component");
    for (const Polynomial& p : comps_) {
        if (p.nvars() != n) {
            throw std::invalid_argument("polynomial field component is not a function of " +
                                        std::to_string(n) + " variables");
        }
    }
    jac_.resize(comps_.size());
    for (std::size_t i = 0; i < comps_.size(); ++i) {
        for (int j = 0; j < n; ++j) jac_[i].push_back(comps_[i].derivative(j));
    }
}

PolynomialField PolynomialField::linear(const Eigen::MatrixXd& A, bool right_action) {
    if (A.rows() != A.cols() || A.rows() == 0) throw std::invalid_argument("linear field matrix must be square");
    const int n = static_cast<int>(A.rows());
    std::vector<Polynomial> comps;
    for (int i = 0; i < n; ++i) {
        std::vector<Term> t;
        for (int k = 0; k < n; ++k) {
            std::vector<int> p(static_cast<std::size_t>(n), 0);
            p[static_cast<std::size_t>(k)] = 1;
            t.push_back({right_action ? A(k, i) : A(i, k), p});
        }
        comps.emplace_back(n, std::move(t));
    }
    return PolynomialField(std::move(comps));
}

bool PolynomialField::is_zero() const {
    return std::all_of(comps_.begin(), comps_.end(), [](const Polynomial& p) { return p.is_zero(); });
}

int PolynomialField::degree() const {
    int d = -1;
    for (const Polynomial& p : comps_) d = std::max(d, p.degree());
    return d;
}

Eigen::VectorXd PolynomialField::eval(const Eigen::VectorXd& x) const {
    Eigen::VectorXd v(dim());
    for (int i = 0; i < dim(); ++i) v[i] = comps_[static_cast<std::size_t>(i)].eval(x);
    return v;
}

Eigen::MatrixXd PolynomialField::jacobian(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd J(dim(), dim());
    for (int i = 0; i < dim(); ++i) {
        for (int j = 0; j < dim(); ++j) {
            J(i, j) = jac_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].eval(x);
        }
    }
    return J;
}

namespace {

// sum_j v_j * d w_i / d x_j
std::vector<Polynomial> directional(const PolynomialField& v, const PolynomialField& w) {
    const int n = v.dim();
    std::vector<Polynomial> out;
    for (int i = 0; i < n; ++i) {
        Polynomial acc(n);
        for (int j = 0; j < n; ++j) {
            acc = acc + v.components()[static_cast<std::size_t>(j)] *
                            w.components()[static_cast<std::size_t>(i)].derivative(j);
        }
        out.push_back(std::move(acc));
    }
    return out;
}

}  // namespace

PolynomialField bracket(const PolynomialField& f, const PolynomialField& g) {
    if (f.dim() != g.dim()) throw std::invalid_argument("bracket of fields of different dimension");
    const auto p = directional(f, g);
    const auto q = directional(g, f);
    std::vector<Polynomial> out;
    for (std::size_t i = 0; i < p.size(); ++i) out.push_back(p[i] - q[i]);
    return PolynomialField(std::move(out));
}

}  // namespace intb
