#pragma once

#include "mdiqkd/channel.hpp"
#include "mdiqkd/sources.hpp"

namespace mdiqkd {

// Source coefficients entering the closed-form s11/e11 bounds.
// Convention: a_k / a'_k are Alice's decoy / signal photon-number
// coefficients, b_k / b'_k Bob's.
struct CoefficientSet {
    double a0, a1, a2, a0p, a1p, a2p;
    double b0, b1, b2, b0p, b1p, b2p;
    double a_tilde_12;  // a1 a2' - a1' a2
    double b_tilde_12;  // b1 b2' - b1' b2
    double a_tilde_02;  // a0 a2' - a0' a2
    double b_tilde_01;  // b0 b1' - b0' b1
    double g_xx, g_xy, g_yx, g_oy, g_yo, g_oo, g_ox, g_xo;
    double K_a;  // a1' b2' / (a1 b2)
    double K_b;  // a2' b1' / (a2 b1)

    // CoefficientSet with parties exchanged (a <-> b)
    CoefficientSet swapped() const;
};

// Throws when the decoy condition fails for either party.
CoefficientSet g_coefficients(const SourceTriple& alice, const SourceTriple& bob);

// Linear combinations used by both the asymptotic formulas and their
// fluctuation analogues. The z arguments are yields (or yield deviations)
// of the named source pairs.
double S_plus_1(const CoefficientSet& c, double z_xx, double z_oy, double z_yo,
                double z_oo);
double S_minus_1(const CoefficientSet& c, double z_yy, double z_ox, double z_xo);
double S_plus_2(const CoefficientSet& c, double z_xx, double z_oy, double z_yo,
                double z_oo);
double S_minus_2(const CoefficientSet& c, double z_xy, double z_yx, double z_ox,
                 double z_xo);

// Unclamped central values of the two formulas (callers must have resolved
// the K_a <= K_b branch; the clamped entry points below do this).
double s11_v1_raw(const BasisStatistics& stats, const CoefficientSet& coeff);
double s11_v2_raw(const BasisStatistics& stats, const CoefficientSet& coeff);

// Lower bound using the seven-source formula (all pairs except xy, yx).
// Requires K_a <= K_b; callers pass party-swapped inputs otherwise (the
// convenience overload below does this automatically).
double s11_lower_v1(const BasisStatistics& stats, const CoefficientSet& coeff);

// Lower bound using the eight-source formula (all pairs except yy).
double s11_lower_v2(const BasisStatistics& stats, const CoefficientSet& coeff);

// (T_xx + a0 b0 T_oo - a0 T_ox - b0 T_xo) / (a1 b1 s11_lower), clamped to [0,1].
double e11_upper_asymptotic(const BasisStatistics& stats, double s11_lower,
                            const CoefficientSet& coeff);

}  // namespace mdiqkd
