#include "mdiqkd/keyrate.hpp"

#include <cmath>
#include <stdexcept>

namespace mdiqkd {

double binary_entropy(double e) {
    if (e < 0.0 || e > 1.0)
        throw std::invalid_argument("binary_entropy: argument outside [0,1]");
    if (e == 0.0 || e == 1.0) return 0.0;
    return -e * std::log2(e) - (1.0 - e) * std::log2(1.0 - e);
}

KeyRateResult key_rate(const KeyRateInputs& in) {
    if (in.f_e < 1.0) throw std::invalid_argument("key_rate: f_e < 1");
    // past e11 = 1/2 the single-photon pairs carry no extractable key;
    // without this cutoff 1 - H(e11) would rise again toward e11 = 1
    const double priv_frac =
        in.e11_X >= 0.5 ? 0.0 : 1.0 - binary_entropy(in.e11_X);
    const double privacy = 0.5 * in.p_y * in.p_y * in.pZ_given_y * in.pZ_given_y *
                           in.a1_prime * in.b1_prime * in.s11_Z * priv_frac;
    // error correction applies to the sifted yy Z-basis gain, so the same
    // p_y^2 pZ|y^2 selection prefactor multiplies the yield here
    const double correction = in.f_e * in.p_y * in.p_y * in.pZ_given_y *
                              in.pZ_given_y * in.S_yy_Z *
                              binary_entropy(in.E_yy_Z);
    KeyRateResult res;
    res.R_raw = privacy - correction;
    res.clamped = res.R_raw < 0.0;
    res.R = res.clamped ? 0.0 : res.R_raw;
    return res;
}

}  // namespace mdiqkd
