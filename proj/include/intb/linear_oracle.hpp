#pragma once

// Closed-form engine for linear vector fields x -> x A.
//
// Flows are e^{tA} acting on row vectors, so a flow word maps x to x P with P
// the product of exponentials in word order, and Ad by a word with matrix P
// sends H to P H P^{-1}.

#include "intb/bracket.hpp"
#include "intb/ode.hpp"
#include "intb/params.hpp"

#include <vector>

namespace intb {

/// e^{tA} (Pade scaling and squaring).
Mat expm(const Mat& A, double t = 1.0);
Mat commutator(const Mat& A, const Mat& B);

struct LinearScenario {
    std::vector<Mat> matrices;
    FormalBracket bracket;

    /// Square matrices of one size, one per letter, canonical bracket.
    void validate() const;
    int dim() const;
};

/// Classical bracket B(A).
Mat linear_bracket(const LinearScenario& sc);
/// Product of exponentials of the multiflow word of B in word order.
Mat linear_psi_matrix(const LinearScenario& sc, const std::vector<double>& t);
/// x Psi(t), returned as a column vector.
Vec linear_psi(const LinearScenario& sc, const std::vector<double>& t, const Vec& x);

/// Integrating-bracket matrix by the general recursion.
Mat linear_integrating_bracket(const LinearScenario& sc, const IntegratingParams& p);
/// Same matrix from hand-expanded products; shapes [X1,X2], [[X1,X2],X3]
/// and [X1,[X2,X3]] only.
Mat linear_integrating_bracket_explicit(const LinearScenario& sc, const IntegratingParams& p);

namespace example51 {

Mat A1();
Mat A2();
Mat A3();
/// ([[X1,X2],X3], (A1,A2,A3)).
LinearScenario scenario();

/// Transcribed closed forms.
Mat bracket2_display(double s2, double s1);
Mat bracket3_display(double t1, double s3, double s1, double s2);
/// The displayed point formula for (x,y) Psi(t1,t2,t3).
Vec psi_display(double t1, double t2, double t3, const Vec& xy);

}  // namespace example51

}  // namespace intb
