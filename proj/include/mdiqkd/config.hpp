#pragma once

#include <string>

#include "mdiqkd/optimizer.hpp"

namespace mdiqkd {

// All run parameters in one place; every default is the reference
// experimental parameter set (e0 = 0.5, ed = 1.5%, pd = 6.02e-6,
// eta_d = 14.5%, f_e = 1.16, epsilon = 1e-7).
struct Config {
    ChannelParams channel;
    ProtocolParams protocol;
    FluctuationConfig fluctuation;
    OptimizerOptions optimizer;
};

// Parse an INI-style file:
//   [channel]  e0, ed, pd, eta_d, alpha_db_per_km, distance_km
//   [protocol] mu_x, mu_y, p_x, p_y, pX_given_o, pX_given_x, pX_given_y, N_t
//   [fluctuation] n_delta, n_tau, epsilon, vacuum_exact
//   [optimizer] rel_tol, max_cycles, param_abs_tol, grid_points, seed,
//               num_starts, k_max, f_e
//   [lp] include_equality
// Unknown sections or keys, or unparseable values, throw std::runtime_error.
Config load_config(const std::string& path);

// Parse from an in-memory string (same grammar).
Config parse_config(const std::string& text);

}  // namespace mdiqkd
