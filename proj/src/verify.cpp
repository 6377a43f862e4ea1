#include "mdiqkd/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "mdiqkd/lp.hpp"

namespace mdiqkd {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

Theorem1Instance random_instance(std::mt19937_64& rng, int K, double beta_hi) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Theorem1Instance inst;
    inst.n0 = 10.0 * u(rng);
    for (int k = 0; k < K; ++k) {
        inst.alpha.push_back(u(rng));
        inst.beta.push_back(std::pow(10.0, std::log10(beta_hi) * u(rng)));
    }
    return inst;
}

double lp_extremum(const Theorem1Instance& inst) {
    const ConstraintSystem sys = enumerate_constraints(inst.beta, inst.n0);
    return lp_solve(inst.alpha, true, sys).optimum;
}

// worst absolute constraint violation of x over the full subset family,
// scaled by max(1, rhs)
double worst_violation(const Theorem1Instance& inst, const std::vector<double>& x) {
    const int K = static_cast<int>(inst.beta.size());
    double worst = 0.0;
    for (unsigned mask = 1; mask < (1u << K); ++mask) {
        double lhs = 0.0, wsum = 0.0;
        for (int k = 0; k < K; ++k) {
            if (mask & (1u << k)) {
                lhs += inst.beta[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(k)];
                wsum += inst.beta[static_cast<std::size_t>(k)];
            }
        }
        const double rhs = inst.n0 * std::sqrt(wsum);
        worst = std::max(worst, (std::abs(lhs) - rhs) / std::max(1.0, rhs));
    }
    return worst;
}

struct Instance {
    ChannelParams ch;
    ObservedStatistics stats;
    CoefficientSet coeff;
};

Instance simulate(double distance_km) {
    Instance inst;
    inst.ch.distance_km = distance_km;
    ProtocolParams proto;  // defaults
    const SourceTriple triple = coherent_triple(proto.mu_x, proto.mu_y);
    const CoefficientTensor tensor = two_pulse_coefficients(triple, triple, kDefaultKmax);
    inst.stats = observe_statistics(tensor, fock_yields(inst.ch, Basis::X),
                                    fock_yields(inst.ch, Basis::Z), proto);
    inst.coeff = g_coefficients(triple, triple);
    return inst;
}

VerifyCheck check_theorem1_vs_lp(unsigned seed) {
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int K = 2; K <= 4; ++K) {
        for (int i = 0; i < 100; ++i) {
            const Theorem1Instance inst = random_instance(rng, K, 1e12);
            const double closed = theorem1_extremum(inst).f_max;
            const double lp = lp_extremum(inst);
            worst = std::max(worst,
                             std::abs(closed - lp) / std::max(1e-300, std::abs(lp)));
        }
    }
    return {"theorem1-vs-lp", worst <= 1e-9, "worst rel err " + fmt(worst)};
}

VerifyCheck check_xstar_feasible(unsigned seed) {
    std::mt19937_64 rng(seed + 1);
    double worst = 0.0;
    for (int K = 2; K <= 4; ++K) {
        for (int i = 0; i < 200; ++i) {
            const Theorem1Instance inst = random_instance(rng, K, 1e12);
            const ExtremumResult r = theorem1_extremum(inst);
            worst = std::max(worst, worst_violation(inst, r.x_star));
        }
    }
    return {"xstar-feasibility", worst <= 1e-12, "worst scaled violation " + fmt(worst)};
}

VerifyCheck check_lemma1(unsigned seed) {
    std::mt19937_64 rng(seed + 2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int violations = 0;
    const int trials = 10000;
    for (int i = 0; i < trials; ++i) {
        const double c0 = 1e-6 + 100.0 * u(rng);
        const double y1 = c0 * u(rng), z1 = c0 * u(rng);
        const double y2 = c0 - y1, z2 = c0 - z1;
        const double sum_diff =
            (std::sqrt(z1) + std::sqrt(z2)) - (std::sqrt(y1) + std::sqrt(y2));
        const double gap_diff = std::abs(y1 - y2) - std::abs(z1 - z2);
        // skip numerical ties; the biconditional is about strict orderings
        if (std::abs(sum_diff) < 1e-12 * std::sqrt(c0) || std::abs(gap_diff) < 1e-12 * c0)
            continue;
        if ((sum_diff >= 0.0) != (gap_diff >= 0.0)) ++violations;
    }
    return {"lemma1-biconditional", violations == 0,
            std::to_string(violations) + " violations in " + std::to_string(trials)};
}

VerifyCheck check_closed_vs_lp() {
    FluctuationConfig cfg;
    double worst = 0.0;
    for (const double d : {10.0, 50.0, 100.0, 150.0}) {
        const Instance inst = simulate(d);
        for (const Basis b : {Basis::X, Basis::Z}) {
            const BasisStatistics& st = inst.stats.basis(b);
            const BoundResult cf = s11_lower_improved(st, inst.coeff, cfg);
            const BoundResult lp = bounds_via_lp(st, inst.coeff, cfg);
            worst = std::max(worst, std::abs(cf.s11_lower - lp.s11_lower) /
                                        std::max(1e-300, lp.s11_lower));
            if (b == Basis::X && cf.s11_lower > 0.0) {
                const double e_cf =
                    e11_upper_improved(st, inst.coeff, cfg, cf.s11_lower);
                worst = std::max(worst, std::abs(e_cf - lp.e11_upper) /
                                            std::max(1e-300, lp.e11_upper));
            }
        }
    }
    return {"closedform-vs-lp", worst <= 1e-3, "worst rel gap " + fmt(worst)};
}

VerifyCheck check_ordering() {
    FluctuationConfig cfg;
    int violations = 0;
    for (const double d : {10.0, 50.0, 100.0, 150.0}) {
        const Instance inst = simulate(d);
        for (const Basis b : {Basis::X, Basis::Z}) {
            const BasisStatistics& st = inst.stats.basis(b);
            const BoundResult tr = s11_lower_traditional(st, inst.coeff, cfg);
            const BoundResult im = s11_lower_improved(st, inst.coeff, cfg);
            if (tr.s11_lower > im.s11_lower * (1.0 + 1e-12)) ++violations;
            if (im.s11_lower > 0.0 && tr.s11_lower > 0.0) {
                const double e_im =
                    e11_upper_improved(st, inst.coeff, cfg, im.s11_lower);
                const double e_tr =
                    e11_upper_traditional(st, inst.coeff, cfg, tr.s11_lower);
                if (e_im > e_tr * (1.0 + 1e-12)) ++violations;
            }
        }
    }
    return {"bound-ordering", violations == 0,
            std::to_string(violations) + " violations"};
}

VerifyCheck check_asymptotic_consistency() {
    FluctuationConfig zero;
    zero.n_delta = 0.0;
    zero.n_tau = 0.0;
    double worst = 0.0;
    for (const double d : {10.0, 80.0, 150.0}) {
        const Instance inst = simulate(d);
        for (const Basis b : {Basis::X, Basis::Z}) {
            const BasisStatistics& st = inst.stats.basis(b);
            const double asym = std::max(s11_lower_v1(st, inst.coeff),
                                         s11_lower_v2(st, inst.coeff));
            for (const BoundResult& r : {s11_lower_traditional(st, inst.coeff, zero),
                                         s11_lower_improved(st, inst.coeff, zero)}) {
                worst = std::max(worst, std::abs(r.s11_lower - asym) /
                                            std::max(1e-300, asym));
            }
            if (asym > 0.0) {
                const double e_asym = e11_upper_asymptotic(st, asym, inst.coeff);
                const double e_tr = e11_upper_traditional(st, inst.coeff, zero, asym);
                const double e_im = e11_upper_improved(st, inst.coeff, zero, asym);
                worst = std::max(worst, std::abs(e_tr - e_asym) / std::max(1e-300, e_asym));
                worst = std::max(worst, std::abs(e_im - e_asym) / std::max(1e-300, e_asym));
            }
        }
    }
    return {"asymptotic-consistency", worst <= 1e-12, "worst rel err " + fmt(worst)};
}

}  // namespace

bool VerifyReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const VerifyCheck& c) { return c.passed; });
}

VerifyReport run_verification(unsigned seed) {
    VerifyReport rep;
    rep.checks.push_back(check_theorem1_vs_lp(seed));
    rep.checks.push_back(check_xstar_feasible(seed));
    rep.checks.push_back(check_lemma1(seed));
    rep.checks.push_back(check_closed_vs_lp());
    rep.checks.push_back(check_ordering());
    rep.checks.push_back(check_asymptotic_consistency());
    return rep;
}

std::string format_report(const VerifyReport& report) {
    std::ostringstream os;
    for (const VerifyCheck& c : report.checks)
        os << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    os << (report.all_passed() ? "verification passed" : "verification FAILED") << "\n";
    return os.str();
}

}  // namespace mdiqkd
