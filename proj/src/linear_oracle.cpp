#include "intb/linear_oracle.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>

namespace intb {

Mat expm(const Mat& A, double t) {
    if (A.rows() != A.cols()) throw std::invalid_argument("expm needs a square matrix");
    if (t == 0.0) return Mat::Identity(A.rows(), A.cols());
    const Mat tA = t * A;
    return tA.exp();
}

Mat commutator(const Mat& A, const Mat& B) { return A * B - B * A; }

void LinearScenario::validate() const {
    if (!bracket.is_canonical()) throw std::invalid_argument("linear scenario needs a canonical bracket");
    if (static_cast<int>(matrices.size()) != bracket.degree()) {
        throw std::invalid_argument("linear scenario needs one matrix per bracket letter");
    }
    const auto n = matrices.front().rows();
    for (const Mat& A : matrices) {
        if (A.rows() != n || A.cols() != n || n == 0) {
            throw std::invalid_argument("linear scenario matrices must be square and of equal size");
        }
    }
}

int LinearScenario::dim() const { return matrices.empty() ? 0 : static_cast<int>(matrices.front().rows()); }

namespace {

using Mats = std::vector<Mat>;

Mats slice(const Mats& v, int from, int len) {
    return Mats(v.begin() + from, v.begin() + from + len);
}

std::vector<double> slice(const std::vector<double>& v, int from, int len) {
    return std::vector<double>(v.begin() + from, v.begin() + from + len);
}

Mat classical(const FormalBracket& b, const Mats& A) {
    if (b.is_leaf()) return A.front();
    const auto f = canonical_factorization(b);
    const int m2 = b.degree() - f.m1;
    return commutator(classical(f.left, slice(A, 0, f.m1)), classical(f.right, slice(A, f.m1, m2)));
}

// Word matrix of Psi_B(t): W(B1) W(B2) W(B1)^{-1} W(B2)^{-1}.
Mat word_matrix(const FormalBracket& b, const Mats& A, const std::vector<double>& t) {
    if (b.is_leaf()) return expm(A.front(), t.front());
    const auto f = canonical_factorization(b);
    const int m2 = b.degree() - f.m1;
    const Mat P1 = word_matrix(f.left, slice(A, 0, f.m1), slice(t, 0, f.m1));
    const Mat P2 = word_matrix(f.right, slice(A, f.m1, m2), slice(t, f.m1, m2));
    return P1 * P2 * P1.inverse() * P2.inverse();
}

Mat conj(const Mat& P, const Mat& H) { return P * H * P.inverse(); }

Mat ib(const FormalBracket& b, const Mats& A, const std::vector<double>& tau, const std::vector<double>& s) {
    if (b.is_leaf()) return A.front();
    const auto f = canonical_factorization(b);
    const int m1 = f.m1;
    const int m2 = b.degree() - m1;
    std::vector<double> tau1 = slice(tau, 0, m1);
    tau1.back() = s[static_cast<std::size_t>(m1 - 1)];
    const std::vector<double> s1 = slice(s, 0, m1 - 1);
    const std::vector<double> tau2 = slice(tau, m1, m2);
    const std::vector<double> s2 = slice(s, m1, m2 - 1);
    const Mats A1 = slice(A, 0, m1);
    const Mats A2 = slice(A, m1, m2);
    const Mat inner = commutator(ib(f.left, A1, tau1, s1), ib(f.right, A2, tau2, s2));
    return conj(word_matrix(f.right, A2, tau2) * word_matrix(f.left, A1, tau1), inner);
}

}  // namespace

Mat linear_bracket(const LinearScenario& sc) {
    sc.validate();
    return classical(sc.bracket, sc.matrices);
}

Mat linear_psi_matrix(const LinearScenario& sc, const std::vector<double>& t) {
    sc.validate();
    if (static_cast<int>(t.size()) != sc.bracket.degree()) throw std::invalid_argument("time vector has wrong length");
    return word_matrix(sc.bracket, sc.matrices, t);
}

Vec linear_psi(const LinearScenario& sc, const std::vector<double>& t, const Vec& x) {
    if (x.size() != sc.dim()) throw std::invalid_argument("point has wrong dimension");
    return linear_psi_matrix(sc, t).transpose() * x;
}

Mat linear_integrating_bracket(const LinearScenario& sc, const IntegratingParams& p) {
    sc.validate();
    const auto tau = slot_vector(sc.bracket, p);
    return ib(sc.bracket, sc.matrices, tau, p.s);
}

Mat linear_integrating_bracket_explicit(const LinearScenario& sc, const IntegratingParams& p) {
    sc.validate();
    check_arity(sc.bracket, p);
    const Mats& A = sc.matrices;
    auto E = [&](int i, double t) { return expm(A[static_cast<std::size_t>(i - 1)], t); };
    const std::string shape = render(sc.bracket);
    if (shape == "[X1,X2]") {
        const double s2 = p.s_m, s1 = p.s[0];
        return conj(E(2, s2) * E(1, s1), commutator(A[0], A[1]));
    }
    if (shape == "[[X1,X2],X3]") {
        const double t1 = p.t_del[0], s3 = p.s_m, s1 = p.s[0], s2 = p.s[1];
        const Mat inner = conj(E(2, s2) * E(1, s1), commutator(A[0], A[1]));
        const Mat psi12 = E(1, t1) * E(2, s2) * E(1, -t1) * E(2, -s2);
        return conj(E(3, s3) * psi12, commutator(inner, A[2]));
    }
    if (shape == "[X1,[X2,X3]]") {
        const double t2 = p.t_del[0], s3 = p.s_m, s1 = p.s[0], s2 = p.s[1];
        const Mat inner = conj(E(3, s3) * E(2, s2), commutator(A[1], A[2]));
        const Mat psi23 = E(2, t2) * E(3, s3) * E(2, -t2) * E(3, -s3);
        return conj(psi23 * E(1, s1), commutator(A[0], inner));
    }
    throw std::invalid_argument("no explicit wiring for bracket " + shape);
}

namespace example51 {

Mat A1() {
    Mat A(2, 2);
    A << 0, 0, 1, 0;
    return A;
}

Mat A2() {
    Mat A(2, 2);
    A << 0, 1, 0, 0;
    return A;
}

Mat A3() {
    Mat A(2, 2);
    A << 1, 0, 0, 0;
    return A;
}

LinearScenario scenario() { return {{A1(), A2(), A3()}, parse("[[X1,X2],X3]")}; }

Mat bracket2_display(double s2, double s1) {
    Mat M(2, 2);
    M << -2 * s1 * s2 - 1, 2 * s2 * (s1 * s2 + 1), -2 * s1, 2 * s1 * s2 + 1;
    return M;
}

Mat bracket3_display(double t1, double s3, double s1, double s2) {
    const double a = -2 * s2 * s2 * t1 * (s1 + t1 - s2 * t1 * t1 + 2 * s1 * s2 * t1);
    const double b = -2 * s2 * std::exp(s3) *
                     (s2 * s2 * t1 * t1 - 2 * s1 * s2 * s2 * t1 - 2 * s2 * t1 + s1 * s2 + 1);
    const double c = -2 * std::exp(-s3) *
                     (-s2 * s2 * s2 * std::pow(t1, 4) + 2 * s1 * s2 * s2 * s2 * t1 * t1 * t1 +
                      3 * s1 * s2 * s2 * t1 * t1 + 2 * s1 * s2 * t1 + s1);
    const double d = 2 * s2 * s2 * t1 * (s1 + t1 - s2 * t1 * t1 + 2 * s1 * s2 * t1);
    Mat M(2, 2);
    M << a, b, c, d;
    return M;
}

Vec psi_display(double t1, double t2, double t3, const Vec& xy) {
    if (xy.size() != 2) throw std::invalid_argument("the example51 point map lives in R^2");
    const double x = xy[0], y = xy[1];
    const double p = t1 * t1 * t1 * t2 * t2 * t2;
    Vec d(2);
    d[0] = p * (std::exp(-t3) - 1) * x + t1 * t2 * t2 * (std::exp(t3) - 1) * (t1 * t2 - 1) * y;
    d[1] = -t1 * t1 * t2 * std::exp(-t3) * (std::exp(t3) - 1) * (t1 * t1 * t2 * t2 + t1 * t2 + 1) * x +
           p * (std::exp(t3) - 1) * y;
    return xy + d;
}

}  // namespace example51

}  // namespace intb
