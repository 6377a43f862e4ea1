#include "mdiqkd/fluctuation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mdiqkd {

const char* method_name(Method m) {
    switch (m) {
        case Method::asymptotic: return "asymptotic";
        case Method::traditional: return "traditional";
        case Method::improved: return "improved";
        default: return "lp";
    }
}

const char* branch_name(Branch b) {
    switch (b) {
        case Branch::v1: return "v1";
        case Branch::v2: return "v2";
        default: return "max";
    }
}

double delta_bound(double N, double S, double n) {
    const double events = N * S;
    if (events <= 0.0) throw std::domain_error("delta_bound: zero event count");
    return n / std::sqrt(events);
}

ExtremumResult theorem1_extremum(const Theorem1Instance& inst) {
    const std::size_t K = inst.alpha.size();
    if (K == 0 || K > 4)
        throw std::invalid_argument("theorem1_extremum: K must be in 1..4");
    if (inst.beta.size() != K)
        throw std::invalid_argument("theorem1_extremum: alpha/beta size mismatch");
    if (inst.n0 < 0.0) throw std::invalid_argument("theorem1_extremum: n0 < 0");
    for (std::size_t k = 0; k < K; ++k) {
        if (!(inst.beta[k] > 0.0))
            throw std::invalid_argument("theorem1_extremum: beta must be > 0");
        if (inst.alpha[k] < 0.0)
            throw std::invalid_argument("theorem1_extremum: alpha must be >= 0");
    }

    // ascending gamma = alpha/beta, ties broken by original index
    std::vector<std::size_t> order(K);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return inst.alpha[i] * inst.beta[j] < inst.alpha[j] * inst.beta[i];
    });

    std::vector<double> tail(K + 1, 0.0);  // tail[k] = sum_{n>=k} beta~[n]
    for (std::size_t k = K; k-- > 0;)
        tail[k] = tail[k + 1] + inst.beta[order[k]];

    ExtremumResult res;
    res.x_star.assign(K, 0.0);
    double prev_gamma = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        const std::size_t j = order[k];
        const double gamma = inst.alpha[j] / inst.beta[j];
        res.f_max += (gamma - prev_gamma) * std::sqrt(tail[k]);
        prev_gamma = gamma;
        res.x_star[j] =
            inst.n0 / inst.beta[j] * (std::sqrt(tail[k]) - std::sqrt(tail[k + 1]));
    }
    res.f_max *= inst.n0;
    return res;
}

namespace {

bool involves_vacuum(Source l, Source r) {
    return l == Source::O || r == Source::O;
}

// delta_bar for one pair; 0 for event-free exact-vacuum pairs.
double dbar(const BasisStatistics& st, Source l, Source r,
            const FluctuationConfig& cfg) {
    const double events = st.N_at(l, r) * st.S_at(l, r);
    if (events > 0.0) return cfg.n_delta / std::sqrt(events);
    if (cfg.vacuum_exact && involves_vacuum(l, r)) return 0.0;
    throw std::domain_error("fluctuation: zero yield count for non-vacuum pair");
}

// --- traditional ------------------------------------------------------

double trad_v1(const BasisStatistics& st, const CoefficientSet& c,
               const FluctuationConfig& cfg) {
    if (c.K_a > c.K_b) return trad_v1(transposed(st), c.swapped(), cfg);
    if (c.b_tilde_12 <= 0.0)
        throw std::domain_error("s11_lower_traditional: b_tilde_12 <= 0");
    using enum Source;
    auto lo = [&](Source l, Source r) {
        return st.S_at(l, r) * (1.0 - dbar(st, l, r, cfg));
    };
    auto hi = [&](Source l, Source r) {
        return st.S_at(l, r) * (1.0 + dbar(st, l, r, cfg));
    };
    const double sp = S_plus_1(c, lo(X, X), lo(O, Y), lo(Y, O), lo(O, O));
    const double sn = S_minus_1(c, hi(Y, Y), hi(O, X), hi(X, O));
    return (sp - sn) / (c.a1 * c.a1p * c.b_tilde_12);
}

double trad_v2(const BasisStatistics& st, const CoefficientSet& c,
               const FluctuationConfig& cfg) {
    if (c.a_tilde_12 * c.b_tilde_12 <= 0.0)
        throw std::domain_error("s11_lower_traditional: a_tilde_12*b_tilde_12 <= 0");
    using enum Source;
    auto lo = [&](Source l, Source r) {
        return st.S_at(l, r) * (1.0 - dbar(st, l, r, cfg));
    };
    auto hi = [&](Source l, Source r) {
        return st.S_at(l, r) * (1.0 + dbar(st, l, r, cfg));
    };
    const double sp = S_plus_2(c, lo(X, X), lo(O, Y), lo(Y, O), lo(O, O));
    const double sn = S_minus_2(c, hi(X, Y), hi(Y, X), hi(O, X), hi(X, O));
    return (sp - sn) / (c.a1 * c.b1 * c.a_tilde_12 * c.b_tilde_12);
}

BoundResult compose_s11(double v1, double v2, Method method) {
    BoundResult r;
    r.method = method;
    const double raw = std::max(v1, v2);
    r.branch_used = v1 >= v2 ? Branch::v1 : Branch::v2;
    r.s11_lower = std::max(0.0, raw);
    r.s11_clamped = raw < 0.0;
    return r;
}

// Error-yield interval for one pair under the per-source worst case.
struct TauInterval {
    double lo, hi;
    bool fallback;
};

TauInterval tau_interval(const BasisStatistics& st, Source l, Source r,
                         const FluctuationConfig& cfg) {
    const double N = st.N_at(l, r);
    const double T = st.T_at(l, r);
    const double cnt = N * T;
    if (cnt > 0.0) {
        const double tb = cfg.n_tau / std::sqrt(cnt);
        return {T * (1.0 - tb), T * (1.0 + tb), false};
    }
    if (N > 0.0)  // no observed errors: absolute n_tau^2-event bound
        return {0.0, cfg.n_tau * cfg.n_tau / N, true};
    if (cfg.vacuum_exact && involves_vacuum(l, r)) return {T, T, false};
    throw std::domain_error("fluctuation: zero error count for non-vacuum pair");
}

// --- improved ---------------------------------------------------------

struct JointGroup {
    Theorem1Instance inst;
    double absolute_extra = 0.0;  // zero-count fallback contributions
    bool fallback = false;
};

// Joint deviation budget for a group of (coefficient, pair) terms over
// yields. Event-free exact-vacuum terms drop out (deterministic).
double yield_group_extremum(const BasisStatistics& st,
                            const FluctuationConfig& cfg,
                            const std::vector<std::pair<double, int>>& terms) {
    Theorem1Instance inst;
    inst.n0 = cfg.n_delta;
    for (const auto& [coef, lr] : terms) {
        const std::size_t i = static_cast<std::size_t>(lr);
        const double w = st.N[i] * st.S[i];
        if (w > 0.0) {
            inst.alpha.push_back(coef * st.S[i]);
            inst.beta.push_back(w);
        } else if (!(cfg.vacuum_exact &&
                     involves_vacuum(static_cast<Source>(lr / 3),
                                     static_cast<Source>(lr % 3)))) {
            throw std::domain_error(
                "fluctuation: zero yield count for non-vacuum pair");
        }
    }
    if (inst.alpha.empty()) return 0.0;
    return theorem1_extremum(inst).f_max;
}

double impr_f1(const BasisStatistics& st, const CoefficientSet& c,
               const FluctuationConfig& cfg) {
    if (c.K_a > c.K_b) return impr_f1(transposed(st), c.swapped(), cfg);
    if (c.b_tilde_12 <= 0.0)
        throw std::domain_error("s11_lower_improved: b_tilde_12 <= 0");
    using enum Source;
    const double a0oo =
        c.a1p * c.b2p * c.a0 * c.b0 - c.a1 * c.b2 * c.a0p * c.b0p;
    const double f_plus = yield_group_extremum(
        st, cfg,
        {{c.a1p * c.b2p, pair_index(X, X)},
         {c.a1 * c.b2 * c.a0p, pair_index(O, Y)},
         {c.a1 * c.b2 * c.b0p, pair_index(Y, O)},
         {a0oo, pair_index(O, O)}});
    const double f_minus = yield_group_extremum(
        st, cfg,
        {{c.a1 * c.b2, pair_index(Y, Y)},
         {c.a1p * c.b2p * c.a0, pair_index(O, X)},
         {c.a1p * c.b2p * c.b0, pair_index(X, O)}});
    return s11_v1_raw(st, c) + (-f_plus - f_minus) / (c.a1 * c.a1p * c.b_tilde_12);
}

double impr_f2(const BasisStatistics& st, const CoefficientSet& c,
               const FluctuationConfig& cfg) {
    if (c.a_tilde_12 * c.b_tilde_12 <= 0.0)
        throw std::domain_error("s11_lower_improved: a_tilde_12*b_tilde_12 <= 0");
    using enum Source;
    const double f_plus = yield_group_extremum(st, cfg,
                                               {{c.g_xx, pair_index(X, X)},
                                                {c.g_oy, pair_index(O, Y)},
                                                {c.g_yo, pair_index(Y, O)},
                                                {c.g_oo, pair_index(O, O)}});
    const double f_minus = yield_group_extremum(st, cfg,
                                                {{c.g_xy, pair_index(X, Y)},
                                                 {c.g_yx, pair_index(Y, X)},
                                                 {c.g_ox, pair_index(O, X)},
                                                 {c.g_xo, pair_index(X, O)}});
    return s11_v2_raw(st, c) +
           (-f_plus - f_minus) / (c.a1 * c.b1 * c.a_tilde_12 * c.b_tilde_12);
}

// Joint worst-case deviation for a group of error-yield terms; returns the
// extremal deviation budget plus any absolute zero-count contributions.
JointGroup error_group(const BasisStatistics& st, const FluctuationConfig& cfg,
                       const std::vector<std::pair<double, int>>& terms) {
    JointGroup g;
    g.inst.n0 = cfg.n_tau;
    for (const auto& [coef, lr] : terms) {
        const std::size_t i = static_cast<std::size_t>(lr);
        const double cnt = st.N[i] * st.T[i];
        if (cnt > 0.0) {
            g.inst.alpha.push_back(coef * st.T[i]);
            g.inst.beta.push_back(cnt);
        } else if (st.N[i] > 0.0) {
            g.absolute_extra += coef * cfg.n_tau * cfg.n_tau / st.N[i];
            g.fallback = true;
        } else if (!(cfg.vacuum_exact &&
                     involves_vacuum(static_cast<Source>(lr / 3),
                                     static_cast<Source>(lr % 3)))) {
            throw std::domain_error(
                "fluctuation: zero error count for non-vacuum pair");
        }
    }
    return g;
}

}  // namespace

BoundResult s11_lower_traditional(const BasisStatistics& stats,
                                  const CoefficientSet& coeff,
                                  const FluctuationConfig& cfg) {
    return compose_s11(trad_v1(stats, coeff, cfg), trad_v2(stats, coeff, cfg),
                       Method::traditional);
}

double e11_upper_traditional(const BasisStatistics& stats,
                             const CoefficientSet& coeff,
                             const FluctuationConfig& cfg, double s11_lower,
                             bool* zero_count_fallback) {
    if (s11_lower <= 0.0)
        throw std::domain_error("e11_upper_traditional: s11_lower must be > 0");
    using enum Source;
    const auto xx = tau_interval(stats, X, X, cfg);
    const auto oo = tau_interval(stats, O, O, cfg);
    const auto ox = tau_interval(stats, O, X, cfg);
    const auto xo = tau_interval(stats, X, O, cfg);
    if (zero_count_fallback)
        *zero_count_fallback = xx.fallback || oo.fallback || ox.fallback || xo.fallback;
    const double t_plus = xx.hi + coeff.a0 * coeff.b0 * oo.hi;
    const double t_minus = coeff.a0 * ox.lo + coeff.b0 * xo.lo;
    const double e = (t_plus - t_minus) / (coeff.a1 * coeff.b1 * s11_lower);
    return std::clamp(e, 0.0, 1.0);
}

BoundResult s11_lower_improved(const BasisStatistics& stats,
                               const CoefficientSet& coeff,
                               const FluctuationConfig& cfg) {
    return compose_s11(impr_f1(stats, coeff, cfg), impr_f2(stats, coeff, cfg),
                       Method::improved);
}

double e11_upper_improved(const BasisStatistics& stats,
                          const CoefficientSet& coeff,
                          const FluctuationConfig& cfg,
                          double s11_lower_improved,
                          bool* zero_count_fallback) {
    if (s11_lower_improved <= 0.0)
        throw std::domain_error("e11_upper_improved: s11_lower must be > 0");
    using enum Source;
    const auto plus = error_group(
        stats, cfg,
        {{1.0, pair_index(X, X)}, {coeff.a0 * coeff.b0, pair_index(O, O)}});
    const auto minus = error_group(
        stats, cfg,
        {{coeff.a0, pair_index(O, X)}, {coeff.b0, pair_index(X, O)}});
    if (zero_count_fallback) *zero_count_fallback = plus.fallback || minus.fallback;

    const double t_plus_hat =
        stats.T_at(X, X) + coeff.a0 * coeff.b0 * stats.T_at(O, O);
    const double t_minus_hat =
        coeff.a0 * stats.T_at(O, X) + coeff.b0 * stats.T_at(X, O);
    double t_plus = t_plus_hat + plus.absolute_extra;
    if (!plus.inst.alpha.empty()) t_plus += theorem1_extremum(plus.inst).f_max;
    double t_minus = t_minus_hat;  // zero-count terms already contribute 0
    if (!minus.inst.alpha.empty()) t_minus -= theorem1_extremum(minus.inst).f_max;

    const double e =
        (t_plus - t_minus) / (coeff.a1 * coeff.b1 * s11_lower_improved);
    return std::clamp(e, 0.0, 1.0);
}

}  // namespace mdiqkd
