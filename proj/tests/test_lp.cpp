#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "mdiqkd/lp.hpp"

using namespace mdiqkd;

namespace {

struct Generated {
    ObservedStatistics stats;
    CoefficientSet coeff;
};

Generated generate(double distance_km, double N_t = 1e12) {
    Generated g;
    ChannelParams ch;
    ch.distance_km = distance_km;
    ProtocolParams proto;
    proto.N_t = N_t;
    const SourceTriple triple = coherent_triple(proto.mu_x, proto.mu_y);
    const CoefficientTensor tensor =
        two_pulse_coefficients(triple, triple, kDefaultKmax);
    g.stats = observe_statistics(tensor, fock_yields(ch, Basis::X),
                                 fock_yields(ch, Basis::Z), proto);
    g.coeff = g_coefficients(triple, triple);
    return g;
}

}  // namespace

TEST_CASE("enumerate_constraints: subset counts") {
    std::array<double, kNumPairs> w9;
    w9.fill(1.0);
    const ConstraintSystem s9 = enumerate_constraints(w9, 5.3);
    CHECK(s9.num_abs_constraints == 511);  // 502 joint + 9 boundary
    CHECK(s9.row_coeff.size() == 1022);    // two one-sided rows each
    CHECK_FALSE(s9.has_equality);

    const ConstraintSystem s4 =
        enumerate_constraints(std::vector<double>{1.0, 2.0, 3.0, 4.0}, 1.0);
    CHECK(s4.num_abs_constraints == 15);  // 11 joint + 4 boundary
    CHECK(s4.row_coeff.size() == 30);

    const ConstraintSystem s1 = enumerate_constraints(std::vector<double>{4.0}, 2.0);
    CHECK(s1.num_abs_constraints == 1);
    CHECK(s1.row_coeff.size() == 2);
    // |x| <= n / sqrt(w): the row bound is n sqrt(w) on w x
    CHECK(s1.rhs[0] == doctest::Approx(2.0 * std::sqrt(4.0)).epsilon(1e-14));
}

TEST_CASE("enumerate_constraints: zero-weight variables excluded from subsets") {
    std::array<double, kNumPairs> w;
    w.fill(0.0);
    w[0] = 1.0;
    w[4] = 2.0;
    w[8] = 3.0;
    const ConstraintSystem s = enumerate_constraints(w, 1.0);
    CHECK(s.num_abs_constraints == 7);  // 2^3 - 1
    CHECK(s.weight.size() == 3);
}

TEST_CASE("enumerate_constraints: optional equality row") {
    const ConstraintSystem s =
        enumerate_constraints(std::vector<double>{1.0, 2.0}, 1.0, true);
    CHECK(s.has_equality);
    CHECK(s.num_abs_constraints == 3);
}

TEST_CASE("lp_solve: trivial objectives") {
    const ConstraintSystem s =
        enumerate_constraints(std::vector<double>{4.0}, 2.0);
    CHECK(lp_solve({0.0}, true, s).optimum == 0.0);
    // single variable: optimum = n * alpha / sqrt(w)
    const LpResult r = lp_solve({0.8}, true, s);
    CHECK(r.optimum == doctest::Approx(2.0 * 0.8 / std::sqrt(4.0)).epsilon(1e-12));
    const LpResult rmin = lp_solve({0.8}, false, s);
    CHECK(rmin.optimum == doctest::Approx(-r.optimum).epsilon(1e-12));
}

TEST_CASE("lp_solve: determinism") {
    std::mt19937_64 rng(31415);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        std::vector<double> w, obj;
        for (int k = 0; k < 5; ++k) {
            w.push_back(std::pow(10.0, 10.0 * u(rng)));
            obj.push_back(u(rng));
        }
        const ConstraintSystem s = enumerate_constraints(w, 5.3);
        const LpResult a = lp_solve(obj, true, s);
        const LpResult b = lp_solve(obj, true, s);
        CHECK(a.optimum == b.optimum);  // bit identical
        CHECK(a.argpoint == b.argpoint);
    }
}

TEST_CASE("lp_solve: subset monotonicity") {
    // dropping the joint constraints (keeping only boundary rows) relaxes
    // the polytope, so the boxed optimum dominates the joint optimum
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        std::vector<double> w, obj;
        for (int k = 0; k < 4; ++k) {
            w.push_back(std::pow(10.0, 6.0 * u(rng)));
            obj.push_back(u(rng));
        }
        const double n = 5.3;
        const ConstraintSystem joint = enumerate_constraints(w, n);
        const double with_joint = lp_solve(obj, true, joint).optimum;
        double boxed = 0.0;  // per-variable worst case
        for (std::size_t k = 0; k < w.size(); ++k)
            boxed += obj[k] * n / std::sqrt(w[k]);
        CHECK(with_joint <= boxed * (1 + 1e-12));
    }
}

TEST_CASE("bounds_via_lp: zero-fluctuation limit equals asymptotic") {
    FluctuationConfig zero;
    zero.n_delta = 0.0;
    zero.n_tau = 0.0;
    for (const double d : {20.0, 80.0, 140.0}) {
        const Generated g = generate(d);
        for (const Basis b : {Basis::X, Basis::Z}) {
            const BasisStatistics& st = g.stats.basis(b);
            const double asym =
                std::max(s11_lower_v1(st, g.coeff), s11_lower_v2(st, g.coeff));
            const BoundResult lp = bounds_via_lp(st, g.coeff, zero);
            CAPTURE(d);
            CHECK(lp.s11_lower == doctest::Approx(asym).epsilon(1e-9));
            if (asym > 0.0 && b == Basis::X) {
                CHECK(lp.e11_upper ==
                      doctest::Approx(e11_upper_asymptotic(st, lp.s11_lower, g.coeff))
                          .epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("bounds_via_lp: agrees with the improved closed forms to 1e-9") {
    FluctuationConfig cfg;
    for (const double d : {10.0, 50.0, 100.0, 150.0}) {
        for (const double nt : {1e11, 1e12, 1e13}) {
            const Generated g = generate(d, nt);
            for (const Basis b : {Basis::X, Basis::Z}) {
                const BasisStatistics& st = g.stats.basis(b);
                const BoundResult cf = s11_lower_improved(st, g.coeff, cfg);
                const BoundResult lp = bounds_via_lp(st, g.coeff, cfg);
                CAPTURE(d);
                CAPTURE(nt);
                CHECK(lp.s11_lower ==
                      doctest::Approx(cf.s11_lower)
                          .epsilon(1e-9));
                if (cf.s11_lower > 0.0) {
                    const double e_cf =
                        e11_upper_improved(st, g.coeff, cfg, cf.s11_lower);
                    CHECK(lp.e11_upper == doctest::Approx(e_cf).epsilon(1e-9));
                }
            }
        }
    }
}

TEST_CASE("bounds_via_lp: never looser than traditional") {
    FluctuationConfig cfg;
    for (const double d : {20.0, 70.0, 130.0}) {
        const Generated g = generate(d);
        for (const Basis b : {Basis::X, Basis::Z}) {
            const BasisStatistics& st = g.stats.basis(b);
            const BoundResult tr = s11_lower_traditional(st, g.coeff, cfg);
            const BoundResult lp = bounds_via_lp(st, g.coeff, cfg);
            CHECK(tr.s11_lower <= lp.s11_lower * (1 + 1e-12) + 1e-300);
            if (tr.s11_lower > 0.0) {
                const double e_tr =
                    e11_upper_traditional(st, g.coeff, cfg, tr.s11_lower);
                CHECK(lp.e11_upper <= e_tr * (1 + 1e-9) + 1e-300);
            }
        }
    }
}

TEST_CASE("bounds_via_lp: effect of the optional zero-sum equality row") {
    // The equality adds information, so it can only tighten: raise the s11
    // minimum, lower the e11 maximum. In the fluctuation-dominated regime
    // (long distance) it does tighten slightly; at moderate distances the
    // optima coincide with the equality-free system to 1e-9.
    FluctuationConfig cfg;
    LpOptions with_eq;
    with_eq.include_equality = true;
    for (const double d : {30.0, 90.0, 150.0}) {
        const Generated g = generate(d);
        for (const Basis b : {Basis::X, Basis::Z}) {
            const BasisStatistics& st = g.stats.basis(b);
            const BoundResult off = bounds_via_lp(st, g.coeff, cfg);
            const BoundResult on = bounds_via_lp(st, g.coeff, cfg, with_eq);
            CAPTURE(d);
            CHECK(on.s11_lower >= off.s11_lower * (1 - 1e-9));
            CHECK(on.e11_upper <= off.e11_upper * (1 + 1e-9));
            if (d <= 90.0) {
                CHECK(on.s11_lower ==
                      doctest::Approx(off.s11_lower).epsilon(1e-9));
                CHECK(on.e11_upper ==
                      doctest::Approx(off.e11_upper).epsilon(1e-9));
            }
        }
    }
}
