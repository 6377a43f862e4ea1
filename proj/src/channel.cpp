#include "mdiqkd/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace mdiqkd {

double ChannelParams::arm_transmittance() const {
    return eta_d * std::pow(10.0, -alpha_db_per_km * (distance_km / 2.0) / 10.0);
}

double ProtocolParams::p_source(Source s) const {
    switch (s) {
        case Source::O: return p_o();
        case Source::X: return p_x;
        default: return p_y;
    }
}

double ProtocolParams::pX_given(Source s) const {
    switch (s) {
        case Source::O: return pX_given_o;
        case Source::X: return pX_given_x;
        default: return pX_given_y;
    }
}

void ProtocolParams::validate() const {
    auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!prob(p_x) || !prob(p_y) || p_x + p_y > 1.0)
        throw std::invalid_argument("ProtocolParams: invalid source probabilities");
    if (!prob(pX_given_o) || !prob(pX_given_x) || !prob(pX_given_y))
        throw std::invalid_argument("ProtocolParams: invalid basis probabilities");
    if (!(mu_x < mu_y) || mu_x < 0.0)
        throw std::invalid_argument("ProtocolParams: need 0 <= mu_x < mu_y");
    if (N_t <= 0.0) throw std::invalid_argument("ProtocolParams: N_t <= 0");
}

FockYieldTable fock_yields(const ChannelParams& ch, Basis basis, int k_max) {
    const double eta = ch.arm_transmittance();
    const int n1 = k_max + 1;
    FockYieldTable tab;
    tab.basis = basis;
    tab.k_max = k_max;
    tab.s.resize(static_cast<std::size_t>(n1 * n1));
    tab.e.resize(static_cast<std::size_t>(n1 * n1));

    // click[k] = P(side with k photons clicks), true_[k] without dark counts
    std::vector<double> click(static_cast<std::size_t>(n1));
    std::vector<double> true_(static_cast<std::size_t>(n1));
    double miss = 1.0;  // (1-eta)^k
    for (int k = 0; k < n1; ++k) {
        true_[static_cast<std::size_t>(k)] = 1.0 - miss;
        click[static_cast<std::size_t>(k)] = 1.0 - (1.0 - ch.pd) * miss;
        miss *= 1.0 - eta;
    }

    for (int m = 0; m < n1; ++m) {
        for (int n = 0; n < n1; ++n) {
            const std::size_t idx = static_cast<std::size_t>(m * n1 + n);
            const double s = click[static_cast<std::size_t>(m)] *
                             click[static_cast<std::size_t>(n)];
            const double t = true_[static_cast<std::size_t>(m)] *
                             true_[static_cast<std::size_t>(n)];
            // the relay resolves only half of the Bell-state outcomes
            tab.s[idx] = 0.5 * s;
            double te;  // error rate on the true-coincidence part
            if (basis == Basis::Z)
                te = ch.ed;
            else
                te = (m == 1 && n == 1) ? ch.ed : ch.ed_multi;
            tab.e[idx] = s > 0.0 ? (te * t + ch.e0 * (s - t)) / s : ch.e0;
        }
    }
    return tab;
}

BasisStatistics transposed(const BasisStatistics& s) {
    BasisStatistics t = s;
    for (int l = 0; l < 3; ++l) {
        for (int r = 0; r < 3; ++r) {
            const std::size_t lr = static_cast<std::size_t>(3 * l + r);
            const std::size_t rl = static_cast<std::size_t>(3 * r + l);
            t.S[lr] = s.S[rl];
            t.T[lr] = s.T[rl];
            t.N[lr] = s.N[rl];
        }
    }
    return t;
}

namespace {

void fill_basis(BasisStatistics& out, Basis b, const CoefficientTensor& tensor,
                const FockYieldTable& yields, const ProtocolParams& proto) {
    out.basis = b;
    const int n1 = tensor.k_max + 1;
    for (int l = 0; l < 3; ++l) {
        for (int r = 0; r < 3; ++r) {
            const std::size_t lr = static_cast<std::size_t>(3 * l + r);
            double S = 0.0, T = 0.0;
            const auto& c = tensor.c[lr];
            for (int m = 0; m < n1; ++m) {
                for (int n = 0; n < n1; ++n) {
                    const std::size_t idx = static_cast<std::size_t>(m * n1 + n);
                    const double w = c[idx];
                    S += w * yields.s[idx];
                    T += w * yields.s[idx] * yields.e[idx];
                }
            }
            const Source ls = static_cast<Source>(l);
            const Source rs = static_cast<Source>(r);
            const double pbl = b == Basis::X ? proto.pX_given(ls) : 1.0 - proto.pX_given(ls);
            const double pbr = b == Basis::X ? proto.pX_given(rs) : 1.0 - proto.pX_given(rs);
            out.S[lr] = S;
            out.T[lr] = T;
            out.N[lr] = proto.N_t * proto.p_source(ls) * proto.p_source(rs) * pbl * pbr;
        }
    }
}

}  // namespace

ObservedStatistics observe_statistics(const CoefficientTensor& tensor,
                                      const FockYieldTable& yields_X,
                                      const FockYieldTable& yields_Z,
                                      const ProtocolParams& proto) {
    proto.validate();
    if (yields_X.k_max != tensor.k_max || yields_Z.k_max != tensor.k_max)
        throw std::invalid_argument("observe_statistics: inconsistent k_max");
    ObservedStatistics stats;
    fill_basis(stats.X, Basis::X, tensor, yields_X, proto);
    fill_basis(stats.Z, Basis::Z, tensor, yields_Z, proto);
    double total = 0.0;
    for (int lr = 0; lr < kNumPairs; ++lr) {
        const std::size_t i = static_cast<std::size_t>(lr);
        total += stats.X.N[i] * stats.X.S[i] + stats.Z.N[i] * stats.Z.S[i];
    }
    if (total < 1.0)
        throw std::runtime_error("observe_statistics: no events");
    return stats;
}

}  // namespace mdiqkd
