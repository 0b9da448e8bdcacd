#pragma once

// Parameter packs of integrating brackets.
//
// For a canonical B of degree m >= 2 with factorization (B1, B2, m1) the
// integrating bracket depends on
//   t_del : the times t_1..t_m with entries m1 and m removed (m - 2 values),
//   s_m   : one value standing in the m-th time slot,
//   s     : s_1..s_{m-1}.
// For m = 1 the pack is empty.

#include "intb/bracket.hpp"

#include <vector>

namespace intb {

struct IntegratingParams {
    std::vector<double> t_del;
    double s_m = 0.0;
    std::vector<double> s;
};

/// Throws std::invalid_argument when the pack does not fit B.
void check_arity(const FormalBracket& b, const IntegratingParams& p);

/// The length-m slot vector tau with tau_{m1} = 0 (unused) and tau_m = s_m.
std::vector<double> slot_vector(const FormalBracket& b, const IntegratingParams& p);

/// Pack built from a full time vector t (length m) by deleting entries m1 and
/// m; s_m and s are given separately.
IntegratingParams params_from_times(const FormalBracket& b, const std::vector<double>& t, double s_m,
                                    const std::vector<double>& s);

/// Pack whose slot vector is exactly tau.
IntegratingParams params_from_slots(const FormalBracket& b, const std::vector<double>& tau,
                                    const std::vector<double>& s);

}  // namespace intb
