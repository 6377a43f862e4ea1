#pragma once

#include "mdiqkd/keyrate.hpp"
#include "mdiqkd/lp.hpp"

namespace mdiqkd {

// One end-to-end evaluation: statistics generation, per-basis bounds, key
// rate. s11 for the key comes from the Z basis, e11 from the X basis (with
// the X-basis s11 lower bound in its denominator).
struct Evaluation {
    ObservedStatistics stats;
    double s11_Z_lower = 0.0;
    double s11_X_lower = 0.0;
    double e11_X_upper = 1.0;
    Method method = Method::asymptotic;
    Branch branch_used = Branch::max_of;
    KeyRateResult rate;
    bool clamp_flag = false;        // any bound clamped to its physical range
    bool zero_count_flag = false;   // absolute fallback used for zero error counts
};

Evaluation evaluate_protocol(const ChannelParams& ch, const ProtocolParams& proto,
                             Method method, const FluctuationConfig& cfg,
                             double f_e, int k_max = kDefaultKmax,
                             const LpOptions& lp_opts = {});

}  // namespace mdiqkd
