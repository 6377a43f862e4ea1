#pragma once

#include <array>
#include <stdexcept>
#include <vector>

namespace mdiqkd {

// Truncated photon-number distribution of one source.
struct PhotonDistribution {
    double intensity = 0.0;
    std::vector<double> coeffs;  // coeffs[k] = P(k photons), k = 0..k_max

    int k_max() const { return static_cast<int>(coeffs.size()) - 1; }
    double operator[](int k) const {
        return k <= k_max() ? coeffs[static_cast<std::size_t>(k)] : 0.0;
    }
};

inline constexpr int kDefaultKmax = 15;
inline constexpr double kTruncationTol = 1e-10;

// coeffs[k] = e^{-mu} mu^k / k!
PhotonDistribution poisson_distribution(double mu, int k_max);

// Vacuum / decoy / signal triple for one party.
struct SourceTriple {
    PhotonDistribution vacuum;  // mu = 0
    PhotonDistribution decoy;   // intensity mu_x
    PhotonDistribution signal;  // intensity mu_y
};

SourceTriple coherent_triple(double mu_x, double mu_y, int k_max = kDefaultKmax);

// True iff signal[k]/decoy[k] >= signal[2]/decoy[2] >= signal[1]/decoy[1]
// for all k >= 2. Ratios with zero denominator count as +inf (satisfied).
bool check_decoy_condition(const PhotonDistribution& decoy,
                           const PhotonDistribution& signal);

enum class Source : int { O = 0, X = 1, Y = 2 };

inline constexpr int kNumPairs = 9;
inline constexpr int pair_index(Source l, Source r) {
    return 3 * static_cast<int>(l) + static_cast<int>(r);
}
constexpr const char* pair_name(int lr) {
    constexpr const char* names[kNumPairs] = {"oo", "ox", "oy", "xo", "xx",
                                              "xy", "yo", "yx", "yy"};
    return names[lr];
}

// c_mn^{lr} = (Alice source l coeff m) * (Bob source r coeff n).
struct CoefficientTensor {
    int k_max = 0;
    // [lr][m * (k_max+1) + n]
    std::array<std::vector<double>, kNumPairs> c;

    double at(int lr, int m, int n) const {
        return c[static_cast<std::size_t>(lr)]
                [static_cast<std::size_t>(m * (k_max + 1) + n)];
    }
};

CoefficientTensor two_pulse_coefficients(const SourceTriple& alice,
                                         const SourceTriple& bob, int k_max);

}  // namespace mdiqkd
