#pragma once

#include <string>
#include <vector>

#include "mdiqkd/bounds.hpp"

namespace mdiqkd {

struct FluctuationConfig {
    double n_delta = 5.3;
    double n_tau = 5.3;
    double epsilon = 1e-7;
    // Exact vacuum (mu_o = 0): source pairs involving o with zero recorded
    // events have deterministic statistics and their fluctuation terms are
    // dropped instead of rejected.
    bool vacuum_exact = true;
};

enum class Method { asymptotic, traditional, improved, lp };
enum class Branch { v1, v2, max_of };

const char* method_name(Method m);
const char* branch_name(Branch b);

struct BoundResult {
    double s11_lower = 0.0;
    double e11_upper = 0.0;
    Method method = Method::asymptotic;
    Branch branch_used = Branch::max_of;
    bool s11_clamped = false;    // raw bound was negative
    bool e11_clamped = false;    // raw bound fell outside [0,1]
    bool zero_count_fallback = false;  // absolute bound used for a zero error count
};

// n / sqrt(N * S); throws when N * S <= 0.
double delta_bound(double N, double S, double n);

// max of f(x) = sum alpha_k x_k subject to |sum_{k in K} beta_k x_k| <=
// n0 sqrt(sum_{k in K} beta_k) for every nonempty subset K.
struct Theorem1Instance {
    std::vector<double> alpha;  // nonnegative
    std::vector<double> beta;   // positive
    double n0 = 0.0;
};

struct ExtremumResult {
    double f_max = 0.0;
    std::vector<double> x_star;  // maximizer; -x_star attains f_min = -f_max
};

ExtremumResult theorem1_extremum(const Theorem1Instance& inst);

// Per-source worst case: every yield replaced by S(1 -+ delta_bar)
// independently, then max of the two closed forms, clamped at 0.
BoundResult s11_lower_traditional(const BasisStatistics& stats,
                                  const CoefficientSet& coeff,
                                  const FluctuationConfig& cfg);

double e11_upper_traditional(const BasisStatistics& stats,
                             const CoefficientSet& coeff,
                             const FluctuationConfig& cfg, double s11_lower,
                             bool* zero_count_fallback = nullptr);

// Joint treatment: deviations of the + and - yield groups optimized under
// the nested subset constraints via the closed-form extremum.
BoundResult s11_lower_improved(const BasisStatistics& stats,
                               const CoefficientSet& coeff,
                               const FluctuationConfig& cfg);

double e11_upper_improved(const BasisStatistics& stats,
                          const CoefficientSet& coeff,
                          const FluctuationConfig& cfg,
                          double s11_lower_improved,
                          bool* zero_count_fallback = nullptr);

}  // namespace mdiqkd
