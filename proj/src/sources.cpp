#include "mdiqkd/sources.hpp"

#include <cmath>
#include <limits>

namespace mdiqkd {

PhotonDistribution poisson_distribution(double mu, int k_max) {
    if (mu < 0.0) throw std::invalid_argument("poisson_distribution: mu < 0");
    if (k_max < 2) throw std::invalid_argument("poisson_distribution: k_max < 2");
    PhotonDistribution d;
    d.intensity = mu;
    d.coeffs.resize(static_cast<std::size_t>(k_max) + 1);
    double term = std::exp(-mu);
    for (int k = 0; k <= k_max; ++k) {
        d.coeffs[static_cast<std::size_t>(k)] = term;
        term *= mu / (k + 1);
    }
    return d;
}

SourceTriple coherent_triple(double mu_x, double mu_y, int k_max) {
    SourceTriple t;
    t.vacuum = poisson_distribution(0.0, k_max);
    t.decoy = poisson_distribution(mu_x, k_max);
    t.signal = poisson_distribution(mu_y, k_max);
    return t;
}

bool check_decoy_condition(const PhotonDistribution& decoy,
                           const PhotonDistribution& signal) {
    if (decoy[1] <= 0.0 || decoy[2] <= 0.0)
        throw std::invalid_argument(
            "check_decoy_condition: decoy coeffs[1] and coeffs[2] must be > 0");
    const double inf = std::numeric_limits<double>::infinity();
    auto ratio = [&](int k) {
        return decoy[k] > 0.0 ? signal[k] / decoy[k] : inf;
    };
    const double r1 = ratio(1);
    const double r2 = ratio(2);
    if (r2 < r1) return false;
    const int kmax = std::min(decoy.k_max(), signal.k_max());
    for (int k = 3; k <= kmax; ++k)
        if (ratio(k) < r2) return false;
    return true;
}

CoefficientTensor two_pulse_coefficients(const SourceTriple& alice,
                                         const SourceTriple& bob, int k_max) {
    const std::array<const PhotonDistribution*, 3> a = {
        &alice.vacuum, &alice.decoy, &alice.signal};
    const std::array<const PhotonDistribution*, 3> b = {
        &bob.vacuum, &bob.decoy, &bob.signal};
    CoefficientTensor t;
    t.k_max = k_max;
    const int n1 = k_max + 1;
    for (int l = 0; l < 3; ++l) {
        for (int r = 0; r < 3; ++r) {
            auto& mat = t.c[static_cast<std::size_t>(3 * l + r)];
            mat.resize(static_cast<std::size_t>(n1 * n1));
            for (int m = 0; m < n1; ++m)
                for (int n = 0; n < n1; ++n)
                    mat[static_cast<std::size_t>(m * n1 + n)] =
                        (*a[static_cast<std::size_t>(l)])[m] *
                        (*b[static_cast<std::size_t>(r)])[n];
        }
    }
    return t;
}

}  // namespace mdiqkd
