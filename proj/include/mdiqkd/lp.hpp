#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "mdiqkd/fluctuation.hpp"

namespace mdiqkd {

// One-sided rows encoding |sum_{k in J} w_k x_k| <= n sqrt(sum_{k in J} w_k)
// for every nonempty subset J of the positive-weight variables, plus the
// optional zero-sum equality row.
struct ConstraintSystem {
    std::vector<int> var_label;     // lr index per variable (informational)
    std::vector<double> weight;     // w_k > 0
    double n = 0.0;
    std::size_t num_abs_constraints = 0;  // 2^K - 1
    bool has_equality = false;

    // row r: sum_k row_coeff[r][k] * x_k <= rhs[r]
    std::vector<std::vector<double>> row_coeff;
    std::vector<double> rhs;
};

ConstraintSystem enumerate_constraints(const std::array<double, kNumPairs>& weights,
                                       double n, bool include_equality = false);

// Same constraint family over an explicit weight list (e.g. a Theorem 1
// instance's beta vector).
ConstraintSystem enumerate_constraints(const std::vector<double>& weights,
                                       double n, bool include_equality = false);

struct LpResult {
    double optimum = 0.0;
    std::vector<double> argpoint;
};

// Dense simplex (Bland anti-cycling). Objective indexed like the system's
// variables. Throws on infeasible/unbounded systems (internal error here:
// the origin is feasible and the boundary rows bound every variable).
LpResult lp_solve(const std::vector<double>& objective, bool maximize,
                  const ConstraintSystem& system);

struct LpOptions {
    bool include_equality = false;
};

// Full 502-joint-constraint bounds for one basis: the s11 lower bound from
// both closed-form objectives minimized over the 9-variable delta system and
// the e11 numerator maximized over the tau system.
BoundResult bounds_via_lp(const BasisStatistics& stats,
                          const CoefficientSet& coeff,
                          const FluctuationConfig& cfg,
                          const LpOptions& opts = {});

}  // namespace mdiqkd
