#pragma once

// Lie algebra rank condition and the steering-time scaling experiment for
// driftless systems x' = sum_i u_i f_i(x), |u_i| <= 1.

#include "intb/multiflow.hpp"

#include <string>
#include <vector>

namespace intb {

struct ControlSystem {
    Fields fields;

    void validate() const;
    int dim() const;
};

/// A bracket together with the (1-based) system fields filling its letters.
struct BracketSlots {
    FormalBracket bracket;
    std::vector<int> slots;

    Fields pick(const ControlSystem& sys) const;
};

struct RankCertificate {
    std::vector<BracketSlots> brackets;
    std::vector<Vec> directions;
    std::vector<double> singular_values;
    double threshold = 0;
    int rank = 0;
    int max_degree = 0;
    bool full_rank = false;
    std::vector<std::string> warnings;
};

/// Numerical rank of the evaluated brackets at x_star, singular values below
/// 1e-8 times the largest count as zero.
RankCertificate rank_condition(const ControlSystem& sys, const std::vector<BracketSlots>& certificate,
                               const Vec& x_star);

struct SteeringResult {
    double d = 0;
    double time = 0;  ///< total control time, sum of |durations|
    double t = 0;     ///< common duration of the word's letters
    double final_error = 0;
    bool reached = false;
    std::string word;
};

struct SteeringExperiment {
    std::vector<SteeringResult> results;
    int k = 0;
    double exponent = 0;  ///< slope of log T against log d
    double constant = 0;  ///< max T / d^(1/k)
    int fit_points = 0;
};

/// For each d, steers x_star towards x_star + d u, u the unit bracket
/// direction, with equal times (d / |B(f)(x_star)|)^(1/k) and one Newton-type
/// correction, then fits the time exponent.
SteeringExperiment steer_scaling_experiment(const ControlSystem& sys, const BracketSlots& word, const Vec& x_star,
                                            const std::vector<double>& d_grid, const OdeConfig& cfg);

}  // namespace intb
