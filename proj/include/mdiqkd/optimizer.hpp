#pragma once

#include <vector>

#include "mdiqkd/pipeline.hpp"

namespace mdiqkd {

struct OptimizerOptions {
    double rel_tol = 1e-6;       // per-cycle relative improvement threshold
    int max_cycles = 200;
    double param_abs_tol = 1e-5; // golden-section tolerance on each parameter
    int grid_points = 33;
    unsigned seed = 0;           // 0: fixed start set; else seeded random starts
    int num_starts = 8;
    int k_max = kDefaultKmax;
    double f_e = 1.16;
    LpOptions lp;
};

struct OptimizerResult {
    ProtocolParams best;
    double R = 0.0;
    Evaluation eval;
    std::vector<double> trace;  // accepted R after each improving step
    bool feasible = false;      // some start produced R > 0
};

// Coordinate local search over (mu_x, mu_y, p_x, p_y, pX|x, pX|y) with the
// symmetric protocol and pX|o = 1 (exact vacuum), maximizing R for the given
// method; deterministic multi-start.
OptimizerResult optimize(const ChannelParams& ch, double N_t, Method method,
                         const FluctuationConfig& cfg,
                         const OptimizerOptions& opts = {});

}  // namespace mdiqkd
