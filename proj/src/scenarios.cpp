#include "intb/scenarios.hpp"

#include "intb/linear_oracle.hpp"

namespace intb::scenarios {

namespace {

Polynomial mono(double c, std::vector<int> powers) {
    const int n = static_cast<int>(powers.size());
    return Polynomial(n, {{c, std::move(powers)}});
}

Vec point(std::initializer_list<double> v) {
    Vec x(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double d : v) x[i++] = d;
    return x;
}

FieldHandle poly(std::vector<Polynomial> comps) { return FieldHandle::polynomial(PolynomialField(std::move(comps))); }

}  // namespace

MultiflowProblem example51(const Times& t) {
    const auto sc = intb::example51::scenario();
    Fields f;
    for (const Mat& A : sc.matrices) f.push_back(FieldHandle::linear(A));
    return {sc.bracket, f, point({0.7, -0.4}), t};
}

MultiflowProblem poly_pair(const Times& t) {
    const FieldHandle f1 = poly({mono(1, {0, 0}) + mono(1, {0, 2}), mono(0.3, {1, 0})});
    const FieldHandle f2 = poly({mono(0.5, {1, 1}), mono(1, {0, 0}) - mono(1, {2, 0})});
    return {parse("[X1,X2]"), {f1, f2}, point({0.2, 0.1}), t};
}

MultiflowProblem asymptotic_pair(const Times& t) {
    const FieldHandle f1 = poly({mono(1, {0, 0}), Polynomial(2)});
    const FieldHandle f2 = poly({Polynomial(2), mono(1, {1, 0}) + mono(0.25, {2, 0})});
    return {parse("[X1,X2]"), {f1, f2}, point({0.2, 0.1}), t};
}

MultiflowProblem nonlinear_triple(const Times& t) {
    const FieldHandle f1 = poly({mono(1, {0, 0}), Polynomial(2)});
    const FieldHandle f2 = poly({Polynomial(2), mono(1, {1, 0})});
    const FieldHandle f3 = poly({mono(1, {0, 1}), Polynomial(2)});
    return {parse("[[X1,X2],X3]"), {f1, f2, f3}, point({0.2, 0.1}), t};
}

MultiflowProblem low_regularity_triple(const Times& t) {
    MultiflowProblem p = nonlinear_triple(t);
    p.fields[2] = FieldHandle::builtin("c1_kink");
    p.x = point({-0.05, 0.1});
    return p;
}

MultiflowProblem linear_degree4(const Times& t) {
    Mat A1(3, 3), A2(3, 3), A3(3, 3), A4(3, 3);
    A1 << 0.2, 1.0, 0.0, -0.5, 0.1, 0.3, 0.0, 0.4, -0.2;
    A2 << -0.3, 0.0, 0.6, 0.2, 0.5, 0.0, 1.0, -0.1, 0.1;
    A3 << 0.0, -0.7, 0.2, 0.3, 0.0, 0.5, -0.4, 0.2, 0.3;
    A4 << 0.4, 0.1, -0.3, 0.0, -0.2, 0.8, 0.5, 0.0, 0.1;
    Fields f;
    for (const Mat* A : {&A1, &A2, &A3, &A4}) f.push_back(FieldHandle::linear(*A));
    return {parse("[[X1,X2],[X3,X4]]"), f, point({0.6, -0.3, 0.4}), t};
}

MultiflowProblem nilpotent_pair(const Times& t) {
    Mat e12 = Mat::Zero(3, 3), e23 = Mat::Zero(3, 3);
    e12(0, 1) = 1;
    e23(1, 2) = 1;
    return {parse("[X1,X2]"), {FieldHandle::linear(e12), FieldHandle::linear(e23)}, point({0.5, -0.2, 0.3}), t};
}

Fields heisenberg() { return {FieldHandle::builtin("heisenberg_f1"), FieldHandle::builtin("heisenberg_f2")}; }

}  // namespace intb::scenarios
