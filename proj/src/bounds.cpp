#include "mdiqkd/bounds.hpp"

#include <algorithm>
#include <stdexcept>

namespace mdiqkd {

namespace {

CoefficientSet derive(const CoefficientSet& base) {
    CoefficientSet c = base;
    c.a_tilde_12 = c.a1 * c.a2p - c.a1p * c.a2;
    c.b_tilde_12 = c.b1 * c.b2p - c.b1p * c.b2;
    c.a_tilde_02 = c.a0 * c.a2p - c.a0p * c.a2;
    c.b_tilde_01 = c.b0 * c.b1p - c.b0p * c.b1;
    c.g_xx = c.a1 * c.a2p * c.b1 * c.b2p - c.a1p * c.a2 * c.b1p * c.b2;
    c.g_xy = c.b1 * c.b2 * c.a_tilde_12;
    c.g_yx = c.a1 * c.a2 * c.b_tilde_12;
    c.g_oy = c.a0 * c.g_xy;
    c.g_yo = c.b0 * c.g_yx;
    c.g_oo = c.a0 * c.b0 * c.g_xx - c.a0 * c.b0p * c.g_xy - c.a0p * c.b0 * c.g_yx;
    c.g_ox = c.a0 * c.g_xx - c.a0p * c.g_yx;
    c.g_xo = c.b0 * c.g_xx - c.b0p * c.g_xy;
    c.K_a = c.a1p * c.b2p / (c.a1 * c.b2);
    c.K_b = c.a2p * c.b1p / (c.a2 * c.b1);
    return c;
}

}  // namespace

CoefficientSet CoefficientSet::swapped() const {
    CoefficientSet c = *this;
    std::swap(c.a0, c.b0);
    std::swap(c.a1, c.b1);
    std::swap(c.a2, c.b2);
    std::swap(c.a0p, c.b0p);
    std::swap(c.a1p, c.b1p);
    std::swap(c.a2p, c.b2p);
    return derive(c);
}

CoefficientSet g_coefficients(const SourceTriple& alice, const SourceTriple& bob) {
    if (!check_decoy_condition(alice.decoy, alice.signal) ||
        !check_decoy_condition(bob.decoy, bob.signal))
        throw std::invalid_argument("g_coefficients: decoy condition violated");
    CoefficientSet c{};
    c.a0 = alice.decoy[0];
    c.a1 = alice.decoy[1];
    c.a2 = alice.decoy[2];
    c.a0p = alice.signal[0];
    c.a1p = alice.signal[1];
    c.a2p = alice.signal[2];
    c.b0 = bob.decoy[0];
    c.b1 = bob.decoy[1];
    c.b2 = bob.decoy[2];
    c.b0p = bob.signal[0];
    c.b1p = bob.signal[1];
    c.b2p = bob.signal[2];
    return derive(c);
}

double S_plus_1(const CoefficientSet& c, double z_xx, double z_oy, double z_yo,
                double z_oo) {
    return c.a1p * c.b2p * z_xx + c.a1 * c.b2 * c.a0p * z_oy +
           c.a1 * c.b2 * c.b0p * z_yo +
           (c.a1p * c.b2p * c.a0 * c.b0 - c.a1 * c.b2 * c.a0p * c.b0p) * z_oo;
}

double S_minus_1(const CoefficientSet& c, double z_yy, double z_ox, double z_xo) {
    return c.a1 * c.b2 * z_yy + c.a1p * c.b2p * c.a0 * z_ox +
           c.a1p * c.b2p * c.b0 * z_xo;
}

double S_plus_2(const CoefficientSet& c, double z_xx, double z_oy, double z_yo,
                double z_oo) {
    return c.g_xx * z_xx + c.g_oy * z_oy + c.g_yo * z_yo + c.g_oo * z_oo;
}

double S_minus_2(const CoefficientSet& c, double z_xy, double z_yx, double z_ox,
                 double z_xo) {
    return c.g_xy * z_xy + c.g_yx * z_yx + c.g_ox * z_ox + c.g_xo * z_xo;
}

double s11_v1_raw(const BasisStatistics& stats, const CoefficientSet& coeff) {
    if (coeff.b_tilde_12 <= 0.0)
        throw std::domain_error("s11_v1: b_tilde_12 <= 0");
    using enum Source;
    const double sp = S_plus_1(coeff, stats.S_at(X, X), stats.S_at(O, Y),
                               stats.S_at(Y, O), stats.S_at(O, O));
    const double sn = S_minus_1(coeff, stats.S_at(Y, Y), stats.S_at(O, X),
                                stats.S_at(X, O));
    return (sp - sn) / (coeff.a1 * coeff.a1p * coeff.b_tilde_12);
}

double s11_v2_raw(const BasisStatistics& stats, const CoefficientSet& coeff) {
    if (coeff.a_tilde_12 * coeff.b_tilde_12 <= 0.0)
        throw std::domain_error("s11_v2: a_tilde_12 * b_tilde_12 <= 0");
    using enum Source;
    const double sp = S_plus_2(coeff, stats.S_at(X, X), stats.S_at(O, Y),
                               stats.S_at(Y, O), stats.S_at(O, O));
    const double sn = S_minus_2(coeff, stats.S_at(X, Y), stats.S_at(Y, X),
                                stats.S_at(O, X), stats.S_at(X, O));
    return (sp - sn) /
           (coeff.a1 * coeff.b1 * coeff.a_tilde_12 * coeff.b_tilde_12);
}

double s11_lower_v1(const BasisStatistics& stats, const CoefficientSet& coeff) {
    if (coeff.K_a > coeff.K_b)
        return s11_lower_v1(transposed(stats), coeff.swapped());
    return std::max(0.0, s11_v1_raw(stats, coeff));
}

double s11_lower_v2(const BasisStatistics& stats, const CoefficientSet& coeff) {
    return std::max(0.0, s11_v2_raw(stats, coeff));
}

double e11_upper_asymptotic(const BasisStatistics& stats, double s11_lower,
                            const CoefficientSet& coeff) {
    if (s11_lower <= 0.0)
        throw std::domain_error("e11_upper_asymptotic: s11_lower must be > 0");
    using enum Source;
    const double t_plus =
        stats.T_at(X, X) + coeff.a0 * coeff.b0 * stats.T_at(O, O);
    const double t_minus =
        coeff.a0 * stats.T_at(O, X) + coeff.b0 * stats.T_at(X, O);
    const double e = (t_plus - t_minus) / (coeff.a1 * coeff.b1 * s11_lower);
    return std::clamp(e, 0.0, 1.0);
}

}  // namespace mdiqkd
