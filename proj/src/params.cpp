#include "intb/params.hpp"

#include <stdexcept>
#include <string>

namespace intb {

namespace {

int split_of(const FormalBracket& b) { return b.is_leaf() ? 0 : b.left().degree(); }

}  // namespace

void check_arity(const FormalBracket& b, const IntegratingParams& p) {
    if (!b.is_canonical()) throw std::invalid_argument("integrating bracket needs a canonical bracket");
    const int m = b.degree();
    if (m == 1) {
        if (!p.t_del.empty() || !p.s.empty() || p.s_m != 0.0) {
            throw std::invalid_argument("degree-1 integrating bracket takes no parameters");
        }
        return;
    }
    if (static_cast<int>(p.t_del.size()) != m - 2) {
        throw std::invalid_argument("integrating bracket of degree " + std::to_string(m) + " needs " +
                                    std::to_string(m - 2) + " retained times, got " +
                                    std::to_string(p.t_del.size()));
    }
    if (static_cast<int>(p.s.size()) != m - 1) {
        throw std::invalid_argument("integrating bracket of degree " + std::to_string(m) + " needs " +
                                    std::to_string(m - 1) + " s-parameters, got " + std::to_string(p.s.size()));
    }
}

std::vector<double> slot_vector(const FormalBracket& b, const IntegratingParams& p) {
    check_arity(b, p);
    const int m = b.degree();
    if (m == 1) return {0.0};
    const int m1 = split_of(b);
    std::vector<double> tau;
    std::size_t k = 0;
    for (int j = 1; j < m; ++j) tau.push_back(j == m1 ? 0.0 : p.t_del[k++]);
    tau.push_back(p.s_m);
    return tau;
}

IntegratingParams params_from_times(const FormalBracket& b, const std::vector<double>& t, double s_m,
                                    const std::vector<double>& s) {
    const int m = b.degree();
    if (static_cast<int>(t.size()) != m) {
        throw std::invalid_argument("time vector has " + std::to_string(t.size()) + " entries, bracket degree is " +
                                    std::to_string(m));
    }
    IntegratingParams p;
    if (m == 1) return p;
    const int m1 = split_of(b);
    for (int j = 1; j < m; ++j) {
        if (j != m1) p.t_del.push_back(t[static_cast<std::size_t>(j - 1)]);
    }
    p.s_m = s_m;
    p.s = s;
    check_arity(b, p);
    return p;
}

IntegratingParams params_from_slots(const FormalBracket& b, const std::vector<double>& tau,
                                    const std::vector<double>& s) {
    if (static_cast<int>(tau.size()) != b.degree()) throw std::invalid_argument("slot vector has wrong length");
    return params_from_times(b, tau, tau.back(), s);
}

}  // namespace intb
