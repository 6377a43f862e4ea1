#include "mdiqkd/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mdiqkd {

namespace {

ConstraintSystem build_system(std::vector<int> labels, std::vector<double> weights,
                              double n, bool include_equality) {
    ConstraintSystem sys;
    sys.var_label = std::move(labels);
    sys.weight = std::move(weights);
    sys.n = n;
    sys.has_equality = include_equality;
    const std::size_t K = sys.weight.size();
    if (K > 20) throw std::invalid_argument("enumerate_constraints: too many variables");
    const std::size_t nmask = (std::size_t{1} << K) - 1;
    sys.num_abs_constraints = nmask;
    sys.row_coeff.reserve(2 * nmask + (include_equality ? 2 : 0));
    sys.rhs.reserve(sys.row_coeff.capacity());
    for (std::size_t mask = 1; mask <= nmask; ++mask) {
        std::vector<double> row(K, 0.0);
        double wsum = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            if (mask & (std::size_t{1} << k)) {
                row[k] = sys.weight[k];
                wsum += sys.weight[k];
            }
        }
        const double bound = n * std::sqrt(wsum);
        sys.row_coeff.push_back(row);
        sys.rhs.push_back(bound);
        for (auto& v : row) v = -v;
        sys.row_coeff.push_back(std::move(row));
        sys.rhs.push_back(bound);
    }
    if (include_equality) {
        std::vector<double> row(sys.weight);
        sys.row_coeff.push_back(row);
        sys.rhs.push_back(0.0);
        for (auto& v : row) v = -v;
        sys.row_coeff.push_back(std::move(row));
        sys.rhs.push_back(0.0);
    }
    return sys;
}

}  // namespace

ConstraintSystem enumerate_constraints(const std::array<double, kNumPairs>& weights,
                                       double n, bool include_equality) {
    std::vector<int> labels;
    std::vector<double> w;
    for (int lr = 0; lr < kNumPairs; ++lr) {
        const double v = weights[static_cast<std::size_t>(lr)];
        if (v < 0.0)
            throw std::invalid_argument("enumerate_constraints: negative weight");
        if (v > 0.0) {
            labels.push_back(lr);
            w.push_back(v);
        }
    }
    return build_system(std::move(labels), std::move(w), n, include_equality);
}

ConstraintSystem enumerate_constraints(const std::vector<double>& weights,
                                       double n, bool include_equality) {
    std::vector<int> labels;
    std::vector<double> w;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        if (weights[k] < 0.0)
            throw std::invalid_argument("enumerate_constraints: negative weight");
        if (weights[k] > 0.0) {
            labels.push_back(static_cast<int>(k));
            w.push_back(weights[k]);
        }
    }
    return build_system(std::move(labels), std::move(w), n, include_equality);
}

namespace {

// Dense tableau simplex, maximization, slack basis start (the origin is
// feasible: every rhs is nonnegative). Dantzig pricing with a permanent
// switch to Bland's rule after a degenerate stall.
class Simplex {
  public:
    Simplex(const std::vector<std::vector<double>>& rows,
            const std::vector<double>& rhs, const std::vector<double>& obj)
        : m_(rows.size()), nvars_(obj.size()), ncols_(obj.size() + rows.size()) {
        tab_.assign(m_ * (ncols_ + 1), 0.0);
        cost_.assign(ncols_ + 1, 0.0);
        basis_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            for (std::size_t j = 0; j < nvars_; ++j) at(i, j) = rows[i][j];
            at(i, nvars_ + i) = 1.0;
            at(i, ncols_) = rhs[i];
            basis_[i] = nvars_ + i;
        }
        for (std::size_t j = 0; j < nvars_; ++j) cost_[j] = -obj[j];
    }

    // returns variable values (first nvars_ columns)
    std::vector<double> solve() {
        constexpr double kTol = 1e-11;
        bool bland = false;
        double last_obj = 0.0;
        std::size_t stall = 0;
        for (std::size_t iter = 0; iter < kMaxIter; ++iter) {
            std::size_t enter = ncols_;
            if (bland) {
                for (std::size_t j = 0; j < ncols_; ++j)
                    if (cost_[j] < -kTol) { enter = j; break; }
            } else {
                double best = -kTol;
                for (std::size_t j = 0; j < ncols_; ++j)
                    if (cost_[j] < best) { best = cost_[j]; enter = j; }
            }
            if (enter == ncols_) return extract();

            std::size_t leave = m_;
            double best_ratio = 0.0;
            for (std::size_t i = 0; i < m_; ++i) {
                const double a = at(i, enter);
                if (a > kTol) {
                    const double ratio = at(i, ncols_) / a;
                    if (leave == m_ || ratio < best_ratio - kTol ||
                        (ratio < best_ratio + kTol && basis_[i] < basis_[leave])) {
                        leave = i;
                        best_ratio = ratio;
                    }
                }
            }
            if (leave == m_)
                throw std::runtime_error("lp_solve: unbounded (internal error)");
            pivot(leave, enter);

            if (!bland) {
                const double obj = -cost_[ncols_];
                if (obj <= last_obj + kTol) {
                    if (++stall > 64) bland = true;
                } else {
                    stall = 0;
                }
                last_obj = obj;
            }
        }
        throw std::runtime_error("lp_solve: iteration limit (internal error)");
    }

  private:
    static constexpr std::size_t kMaxIter = 200000;

    double& at(std::size_t i, std::size_t j) { return tab_[i * (ncols_ + 1) + j]; }

    void pivot(std::size_t pr, std::size_t pc) {
        const double pivot_val = at(pr, pc);
        const double inv = 1.0 / pivot_val;
        for (std::size_t j = 0; j <= ncols_; ++j) at(pr, j) *= inv;
        at(pr, pc) = 1.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == pr) continue;
            const double f = at(i, pc);
            if (f == 0.0) continue;
            double* ri = &tab_[i * (ncols_ + 1)];
            const double* rp = &tab_[pr * (ncols_ + 1)];
            for (std::size_t j = 0; j <= ncols_; ++j) ri[j] -= f * rp[j];
            ri[pc] = 0.0;
        }
        const double f = cost_[pc];
        if (f != 0.0) {
            const double* rp = &tab_[pr * (ncols_ + 1)];
            for (std::size_t j = 0; j <= ncols_; ++j) cost_[j] -= f * rp[j];
            cost_[pc] = 0.0;
        }
        basis_[pr] = pc;
    }

    std::vector<double> extract() const {
        std::vector<double> x(nvars_, 0.0);
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] < nvars_) x[basis_[i]] = tab_[i * (ncols_ + 1) + ncols_];
        return x;
    }

    std::size_t m_, nvars_, ncols_;
    std::vector<double> tab_;
    std::vector<double> cost_;
    std::vector<std::size_t> basis_;
};

}  // namespace

LpResult lp_solve(const std::vector<double>& objective, bool maximize,
                  const ConstraintSystem& system) {
    const std::size_t K = system.weight.size();
    if (objective.size() != K)
        throw std::invalid_argument("lp_solve: objective size mismatch");
    LpResult res;
    res.argpoint.assign(K, 0.0);
    if (K == 0 || system.n == 0.0) return res;  // origin is the only point

    // Column scaling by the per-variable boundary bound keeps the tableau
    // near unit magnitude across many orders of magnitude in the weights.
    std::vector<double> scale(K);
    for (std::size_t k = 0; k < K; ++k)
        scale[k] = system.n / std::sqrt(system.weight[k]);

    const std::size_t m = system.row_coeff.size();
    std::vector<std::vector<double>> rows(m, std::vector<double>(2 * K, 0.0));
    std::vector<double> rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
        double norm = system.rhs[i];
        if (norm <= 0.0) {
            for (std::size_t k = 0; k < K; ++k)
                norm = std::max(norm, std::abs(system.row_coeff[i][k] * scale[k]));
            if (norm <= 0.0) norm = 1.0;
        }
        for (std::size_t k = 0; k < K; ++k) {
            const double a = system.row_coeff[i][k] * scale[k] / norm;
            rows[i][k] = a;
            rows[i][K + k] = -a;
        }
        rhs[i] = system.rhs[i] / norm;
    }

    std::vector<double> obj(2 * K);
    for (std::size_t k = 0; k < K; ++k) {
        const double c = (maximize ? objective[k] : -objective[k]) * scale[k];
        obj[k] = c;
        obj[K + k] = -c;
    }

    Simplex solver(rows, rhs, obj);
    const std::vector<double> y = solver.solve();
    double value = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        res.argpoint[k] = (y[k] - y[K + k]) * scale[k];
        value += objective[k] * res.argpoint[k];
    }
    res.optimum = value;
    return res;
}

namespace {

// Objective restricted to the system's variables; terms whose variable was
// dropped (zero weight) contribute nothing.
std::vector<double> restrict_objective(
    const ConstraintSystem& sys, const std::array<double, kNumPairs>& coeffs) {
    std::vector<double> obj(sys.weight.size(), 0.0);
    for (std::size_t k = 0; k < sys.var_label.size(); ++k)
        obj[k] = coeffs[static_cast<std::size_t>(sys.var_label[k])];
    return obj;
}

void require_events(const BasisStatistics& st, bool vacuum_exact) {
    for (int lr = 0; lr < kNumPairs; ++lr) {
        const std::size_t i = static_cast<std::size_t>(lr);
        if (st.N[i] * st.S[i] <= 0.0) {
            const Source l = static_cast<Source>(lr / 3);
            const Source r = static_cast<Source>(lr % 3);
            if (!(vacuum_exact && (l == Source::O || r == Source::O)))
                throw std::domain_error("bounds_via_lp: zero yield count for non-vacuum pair");
        }
    }
}

double lp_f1(const BasisStatistics& st, const CoefficientSet& c,
             const FluctuationConfig& cfg, const LpOptions& opts) {
    if (c.K_a > c.K_b) return lp_f1(transposed(st), c.swapped(), cfg, opts);
    std::array<double, kNumPairs> w{};
    for (int lr = 0; lr < kNumPairs; ++lr)
        w[static_cast<std::size_t>(lr)] =
            st.N[static_cast<std::size_t>(lr)] * st.S[static_cast<std::size_t>(lr)];
    const ConstraintSystem sys =
        enumerate_constraints(w, cfg.n_delta, opts.include_equality);

    using enum Source;
    const double denom = c.a1 * c.a1p * c.b_tilde_12;
    std::array<double, kNumPairs> coeffs{};
    auto set = [&](Source l, Source r, double v) {
        coeffs[static_cast<std::size_t>(pair_index(l, r))] =
            v * st.S_at(l, r) / denom;
    };
    set(X, X, c.a1p * c.b2p);
    set(O, Y, c.a1 * c.b2 * c.a0p);
    set(Y, O, c.a1 * c.b2 * c.b0p);
    set(O, O, c.a1p * c.b2p * c.a0 * c.b0 - c.a1 * c.b2 * c.a0p * c.b0p);
    set(Y, Y, -c.a1 * c.b2);
    set(O, X, -c.a1p * c.b2p * c.a0);
    set(X, O, -c.a1p * c.b2p * c.b0);

    const LpResult lp = lp_solve(restrict_objective(sys, coeffs), false, sys);
    return s11_v1_raw(st, c) + lp.optimum;
}

double lp_f2(const BasisStatistics& st, const CoefficientSet& c,
             const FluctuationConfig& cfg, const LpOptions& opts) {
    std::array<double, kNumPairs> w{};
    for (int lr = 0; lr < kNumPairs; ++lr)
        w[static_cast<std::size_t>(lr)] =
            st.N[static_cast<std::size_t>(lr)] * st.S[static_cast<std::size_t>(lr)];
    const ConstraintSystem sys =
        enumerate_constraints(w, cfg.n_delta, opts.include_equality);

    using enum Source;
    const double denom = c.a1 * c.b1 * c.a_tilde_12 * c.b_tilde_12;
    std::array<double, kNumPairs> coeffs{};
    auto set = [&](Source l, Source r, double v) {
        coeffs[static_cast<std::size_t>(pair_index(l, r))] =
            v * st.S_at(l, r) / denom;
    };
    set(X, X, c.g_xx);
    set(O, Y, c.g_oy);
    set(Y, O, c.g_yo);
    set(O, O, c.g_oo);
    set(X, Y, -c.g_xy);
    set(Y, X, -c.g_yx);
    set(O, X, -c.g_ox);
    set(X, O, -c.g_xo);

    const LpResult lp = lp_solve(restrict_objective(sys, coeffs), false, sys);
    return s11_v2_raw(st, c) + lp.optimum;
}

}  // namespace

BoundResult bounds_via_lp(const BasisStatistics& stats,
                          const CoefficientSet& coeff,
                          const FluctuationConfig& cfg, const LpOptions& opts) {
    require_events(stats, cfg.vacuum_exact);

    BoundResult r;
    r.method = Method::lp;
    const double f1 = lp_f1(stats, coeff, cfg, opts);
    const double f2 = lp_f2(stats, coeff, cfg, opts);
    const double raw = std::max(f1, f2);
    r.branch_used = f1 >= f2 ? Branch::v1 : Branch::v2;
    r.s11_lower = std::max(0.0, raw);
    r.s11_clamped = raw < 0.0;

    // e11 numerator over the tau system
    using enum Source;
    std::array<double, kNumPairs> wt{};
    for (int lr = 0; lr < kNumPairs; ++lr)
        wt[static_cast<std::size_t>(lr)] = stats.N[static_cast<std::size_t>(lr)] *
                                           stats.T[static_cast<std::size_t>(lr)];
    const ConstraintSystem sys =
        enumerate_constraints(wt, cfg.n_tau, opts.include_equality);

    std::array<double, kNumPairs> coeffs{};
    coeffs[static_cast<std::size_t>(pair_index(X, X))] = stats.T_at(X, X);
    coeffs[static_cast<std::size_t>(pair_index(O, O))] =
        coeff.a0 * coeff.b0 * stats.T_at(O, O);
    coeffs[static_cast<std::size_t>(pair_index(O, X))] =
        -coeff.a0 * stats.T_at(O, X);
    coeffs[static_cast<std::size_t>(pair_index(X, O))] =
        -coeff.b0 * stats.T_at(X, O);

    const LpResult lp = lp_solve(restrict_objective(sys, coeffs), true, sys);

    // zero-error-count fallbacks, identical to the closed-form treatment
    double extra = 0.0;
    auto plus_fallback = [&](Source l, Source rr, double coef) {
        const std::size_t i = static_cast<std::size_t>(pair_index(l, rr));
        if (stats.N[i] * stats.T[i] <= 0.0 && stats.N[i] > 0.0) {
            extra += coef * cfg.n_tau * cfg.n_tau / stats.N[i];
            r.zero_count_fallback = true;
        }
    };
    plus_fallback(X, X, 1.0);
    plus_fallback(O, O, coeff.a0 * coeff.b0);

    const double numerator = stats.T_at(X, X) +
                             coeff.a0 * coeff.b0 * stats.T_at(O, O) -
                             coeff.a0 * stats.T_at(O, X) -
                             coeff.b0 * stats.T_at(X, O) + lp.optimum + extra;
    if (r.s11_lower > 0.0) {
        const double e = numerator / (coeff.a1 * coeff.b1 * r.s11_lower);
        r.e11_upper = std::clamp(e, 0.0, 1.0);
        r.e11_clamped = e < 0.0 || e > 1.0;
    } else {
        r.e11_upper = 1.0;
        r.e11_clamped = true;
    }
    return r;
}

}  // namespace mdiqkd
