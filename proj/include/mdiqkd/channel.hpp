#pragma once

#include <array>

#include "mdiqkd/sources.hpp"

namespace mdiqkd {

enum class Basis : int { X = 0, Z = 1 };

struct ChannelParams {
    double e0 = 0.5;            // background error rate
    double ed = 0.015;          // misalignment probability
    double ed_multi = 0.45;     // X-basis multi-photon coincidence error rate
    double pd = 6.02e-6;        // dark count rate per detector per gate
    double eta_d = 0.145;       // detector efficiency
    double alpha_db_per_km = 0.2;
    double distance_km = 0.0;   // total Alice-Bob fiber, relay at midpoint

    // per-arm transmittance including detector efficiency
    double arm_transmittance() const;
};

// Intensities and probabilities; symmetric protocol (Alice = Bob).
struct ProtocolParams {
    double mu_x = 0.1;
    double mu_y = 0.4;
    double p_x = 0.25;
    double p_y = 0.6;           // p_o = 1 - p_x - p_y
    double pX_given_o = 1.0;
    double pX_given_x = 0.7;
    double pX_given_y = 0.05;
    double N_t = 1e12;          // total pulse-pair count

    double p_o() const { return 1.0 - p_x - p_y; }
    double p_source(Source s) const;
    double pX_given(Source s) const;
    void validate() const;
};

// Yields s_mn and error rates e_mn per Fock pair |m,n>, one basis.
struct FockYieldTable {
    Basis basis = Basis::Z;
    int k_max = 0;
    std::vector<double> s;  // [m * (k_max+1) + n]
    std::vector<double> e;

    double yield(int m, int n) const {
        return s[static_cast<std::size_t>(m * (k_max + 1) + n)];
    }
    double error(int m, int n) const {
        return e[static_cast<std::size_t>(m * (k_max + 1) + n)];
    }
};

// Threshold-detector coincidence model, relay at the midpoint.
//
// Each arm has transmittance eta = eta_d * 10^(-alpha*(L/2)/10). A side with
// k incident photons clicks with probability 1 - (1-pd)(1-eta)^k; the relay
// announces success when both sides click, so
//   s_mn = [1 - (1-pd)(1-eta)^m] [1 - (1-pd)(1-eta)^n].
// The two-sided true-photon coincidence t_mn = [1-(1-eta)^m][1-(1-eta)^n]
// carries the signal; the remainder s_mn - t_mn is dark-assisted and errs
// at the background rate e0. Z-basis (key basis) true coincidences err at
// the misalignment rate ed for every photon number. In the X basis only
// the single-photon pair interferes with full visibility (error ed);
// multi-photon coincidences are nearly phase-uncorrelated and err at
// ed_multi (close to, but below, the fully random e0):
//   Z:  e_mn s_mn = ed * t_mn + e0 (s_mn - t_mn)
//   X:  e_11 s_11 = ed * t_11 + e0 (s_11 - t_11)
//       e_mn s_mn = ed_multi * t_mn + e0 (s_mn - t_mn)  otherwise
// The overall 1/2 on s_mn accounts for the Bell-state outcomes the relay
// cannot resolve with linear optics.
FockYieldTable fock_yields(const ChannelParams& ch, Basis basis,
                           int k_max = kDefaultKmax);

// Observed per-pair rates and counts for one basis.
struct BasisStatistics {
    Basis basis = Basis::Z;
    std::array<double, kNumPairs> S{};  // yields
    std::array<double, kNumPairs> T{};  // error yields
    std::array<double, kNumPairs> N{};  // pulse-pair counts

    double S_at(Source l, Source r) const { return S[static_cast<std::size_t>(pair_index(l, r))]; }
    double T_at(Source l, Source r) const { return T[static_cast<std::size_t>(pair_index(l, r))]; }
    double N_at(Source l, Source r) const { return N[static_cast<std::size_t>(pair_index(l, r))]; }
};

struct ObservedStatistics {
    BasisStatistics X;
    BasisStatistics Z;

    double S_yy_Z() const { return Z.S_at(Source::Y, Source::Y); }
    double E_yy_Z() const {
        const double s = S_yy_Z();
        return s > 0.0 ? Z.T_at(Source::Y, Source::Y) / s : 0.0;
    }
    const BasisStatistics& basis(Basis b) const { return b == Basis::X ? X : Z; }
};

// Party-swapped copy (S_lr <-> S_rl etc.).
BasisStatistics transposed(const BasisStatistics& s);

// Exact-expectation statistics: S_lr = sum c_mn s_mn, T_lr = sum c_mn s_mn e_mn,
// N_lr = N_t p_l p_r pB|l pB|r. Throws when no source pair has any events.
ObservedStatistics observe_statistics(const CoefficientTensor& tensor,
                                      const FockYieldTable& yields_X,
                                      const FockYieldTable& yields_Z,
                                      const ProtocolParams& proto);

}  // namespace mdiqkd
