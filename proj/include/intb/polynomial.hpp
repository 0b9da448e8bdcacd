#pragma once

// Exact multivariate polynomials with real coefficients, and polynomial
// vector fields closed under the Lie bracket.

#include <Eigen/Dense>

#include <vector>

namespace intb {

struct Term {
    double coef;
    std::vector<int> powers;
};

class Polynomial {
public:
    explicit Polynomial(int nvars = 0);
    /// Merges like terms and drops zero coefficients.
    Polynomial(int nvars, std::vector<Term> terms);

    static Polynomial constant(int nvars, double c);
    static Polynomial variable(int nvars, int i);

    int nvars() const noexcept { return nvars_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    int degree() const;

    double eval(const Eigen::VectorXd& x) const;
    Polynomial derivative(int i) const;

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(double c, const Polynomial& a);
    friend bool operator==(const Polynomial& a, const Polynomial& b);

private:
    int nvars_;
    std::vector<Term> terms_;  // sorted by powers, unique, nonzero
};

class PolynomialField {
public:
    PolynomialField() = default;
    explicit PolynomialField(std::vector<Polynomial> components);

    /// x -> x A (right action) or x -> A x (left action) as a polynomial field.
    static PolynomialField linear(const Eigen::MatrixXd& A, bool right_action = true);

    int dim() const noexcept { return static_cast<int>(comps_.size()); }
    const std::vector<Polynomial>& components() const noexcept { return comps_; }
    bool is_zero() const;
    int degree() const;

    Eigen::VectorXd eval(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const;

    friend bool operator==(const PolynomialField& a, const PolynomialField& b) {
        return a.comps_ == b.comps_;
    }

private:
    std::vector<Polynomial> comps_;
    std::vector<std::vector<Polynomial>> jac_;  // jac_[i][j] = d comp_i / d x_j
};

/// Exact [f,g] = Dg f - Df g.
PolynomialField bracket(const PolynomialField& f, const PolynomialField& g);

}  // namespace intb
