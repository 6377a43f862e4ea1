#include "mdiqkd/pipeline.hpp"

#include <algorithm>

namespace mdiqkd {

Evaluation evaluate_protocol(const ChannelParams& ch, const ProtocolParams& proto,
                             Method method, const FluctuationConfig& cfg,
                             double f_e, int k_max, const LpOptions& lp_opts) {
    const SourceTriple triple = coherent_triple(proto.mu_x, proto.mu_y, k_max);
    const CoefficientTensor tensor = two_pulse_coefficients(triple, triple, k_max);
    const FockYieldTable yields_X = fock_yields(ch, Basis::X, k_max);
    const FockYieldTable yields_Z = fock_yields(ch, Basis::Z, k_max);
    const CoefficientSet coeff = g_coefficients(triple, triple);

    Evaluation ev;
    ev.method = method;
    ev.stats = observe_statistics(tensor, yields_X, yields_Z, proto);

    bool zc = false;
    switch (method) {
        case Method::asymptotic: {
            ev.s11_Z_lower = std::max(s11_lower_v1(ev.stats.Z, coeff),
                                      s11_lower_v2(ev.stats.Z, coeff));
            const double v1 = s11_lower_v1(ev.stats.X, coeff);
            const double v2 = s11_lower_v2(ev.stats.X, coeff);
            ev.s11_X_lower = std::max(v1, v2);
            ev.branch_used = v1 >= v2 ? Branch::v1 : Branch::v2;
            ev.e11_X_upper =
                ev.s11_X_lower > 0.0
                    ? e11_upper_asymptotic(ev.stats.X, ev.s11_X_lower, coeff)
                    : 1.0;
            break;
        }
        case Method::traditional: {
            const BoundResult z = s11_lower_traditional(ev.stats.Z, coeff, cfg);
            const BoundResult x = s11_lower_traditional(ev.stats.X, coeff, cfg);
            ev.s11_Z_lower = z.s11_lower;
            ev.s11_X_lower = x.s11_lower;
            ev.branch_used = z.branch_used;
            ev.clamp_flag = z.s11_clamped || x.s11_clamped;
            ev.e11_X_upper = x.s11_lower > 0.0
                                 ? e11_upper_traditional(ev.stats.X, coeff, cfg,
                                                         x.s11_lower, &zc)
                                 : 1.0;
            break;
        }
        case Method::improved: {
            const BoundResult z = s11_lower_improved(ev.stats.Z, coeff, cfg);
            const BoundResult x = s11_lower_improved(ev.stats.X, coeff, cfg);
            ev.s11_Z_lower = z.s11_lower;
            ev.s11_X_lower = x.s11_lower;
            ev.branch_used = z.branch_used;
            ev.clamp_flag = z.s11_clamped || x.s11_clamped;
            ev.e11_X_upper = x.s11_lower > 0.0
                                 ? e11_upper_improved(ev.stats.X, coeff, cfg,
                                                      x.s11_lower, &zc)
                                 : 1.0;
            break;
        }
        case Method::lp: {
            const BoundResult z = bounds_via_lp(ev.stats.Z, coeff, cfg, lp_opts);
            const BoundResult x = bounds_via_lp(ev.stats.X, coeff, cfg, lp_opts);
            ev.s11_Z_lower = z.s11_lower;
            ev.s11_X_lower = x.s11_lower;
            ev.branch_used = z.branch_used;
            ev.clamp_flag = z.s11_clamped || x.s11_clamped || x.e11_clamped;
            ev.e11_X_upper = x.e11_upper;
            zc = x.zero_count_fallback;
            break;
        }
    }
    ev.zero_count_flag = zc;

    KeyRateInputs kin;
    kin.p_y = proto.p_y;
    kin.pZ_given_y = 1.0 - proto.pX_given_y;
    kin.a1_prime = triple.signal[1];
    kin.b1_prime = triple.signal[1];
    kin.s11_Z = ev.s11_Z_lower;
    kin.e11_X = ev.e11_X_upper;
    kin.S_yy_Z = ev.stats.S_yy_Z();
    kin.E_yy_Z = ev.stats.E_yy_Z();
    kin.f_e = f_e;
    ev.rate = key_rate(kin);
    return ev;
}

}  // namespace mdiqkd
