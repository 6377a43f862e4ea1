#pragma once

namespace mdiqkd {

// Shannon binary entropy, base 2; H(0) = H(1) = 0. Throws outside [0,1].
double binary_entropy(double e);

struct KeyRateInputs {
    double p_y = 0.0;
    double pZ_given_y = 0.0;
    double a1_prime = 0.0;  // Alice signal single-photon coefficient
    double b1_prime = 0.0;  // Bob signal single-photon coefficient
    double s11_Z = 0.0;     // lower-bounded single-photon-pair yield
    double e11_X = 0.0;     // upper-bounded single-photon-pair error rate
    double S_yy_Z = 0.0;
    double E_yy_Z = 0.0;
    double f_e = 1.16;      // error-correction inefficiency
};

struct KeyRateResult {
    double R = 0.0;      // clamped at 0
    double R_raw = 0.0;  // unclamped, kept for plot fidelity
    bool clamped = false;
};

// R = p_y^2 pZ|y^2 { 1/2 a1' b1' s11_Z [1 - H(e11_X)] - f_e S_yy_Z H(E_yy_Z) }
KeyRateResult key_rate(const KeyRateInputs& in);

}  // namespace mdiqkd
