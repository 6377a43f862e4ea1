#include "mdiqkd/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mdiqkd {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0')
        throw std::runtime_error("config: bad number for " + key + ": " + value);
    return v;
}

int parse_int(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const long v = std::strtol(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0')
        throw std::runtime_error("config: bad integer for " + key + ": " + value);
    return static_cast<int>(v);
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw std::runtime_error("config: bad boolean for " + key + ": " + value);
}

}  // namespace

Config parse_config(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error("config: malformed section header at line " +
                                         std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            if (section != "channel" && section != "protocol" &&
                section != "fluctuation" && section != "optimizer" && section != "lp")
                throw std::runtime_error("config: unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: expected key = value at line " +
                                     std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string qual = section + "." + key;

        if (section == "channel") {
            if (key == "e0") cfg.channel.e0 = parse_double(qual, value);
            else if (key == "ed") cfg.channel.ed = parse_double(qual, value);
            else if (key == "ed_multi") cfg.channel.ed_multi = parse_double(qual, value);
            else if (key == "pd") cfg.channel.pd = parse_double(qual, value);
            else if (key == "eta_d") cfg.channel.eta_d = parse_double(qual, value);
            else if (key == "alpha_db_per_km") cfg.channel.alpha_db_per_km = parse_double(qual, value);
            else if (key == "distance_km") cfg.channel.distance_km = parse_double(qual, value);
            else throw std::runtime_error("config: unknown key " + qual);
        } else if (section == "protocol") {
            if (key == "mu_x") cfg.protocol.mu_x = parse_double(qual, value);
            else if (key == "mu_y") cfg.protocol.mu_y = parse_double(qual, value);
            else if (key == "p_x") cfg.protocol.p_x = parse_double(qual, value);
            else if (key == "p_y") cfg.protocol.p_y = parse_double(qual, value);
            else if (key == "pX_given_o") cfg.protocol.pX_given_o = parse_double(qual, value);
            else if (key == "pX_given_x") cfg.protocol.pX_given_x = parse_double(qual, value);
            else if (key == "pX_given_y") cfg.protocol.pX_given_y = parse_double(qual, value);
            else if (key == "N_t") cfg.protocol.N_t = parse_double(qual, value);
            else throw std::runtime_error("config: unknown key " + qual);
        } else if (section == "fluctuation") {
            if (key == "n_delta") cfg.fluctuation.n_delta = parse_double(qual, value);
            else if (key == "n_tau") cfg.fluctuation.n_tau = parse_double(qual, value);
            else if (key == "epsilon") cfg.fluctuation.epsilon = parse_double(qual, value);
            else if (key == "vacuum_exact") cfg.fluctuation.vacuum_exact = parse_bool(qual, value);
            else throw std::runtime_error("config: unknown key " + qual);
        } else if (section == "optimizer") {
            if (key == "rel_tol") cfg.optimizer.rel_tol = parse_double(qual, value);
            else if (key == "max_cycles") cfg.optimizer.max_cycles = parse_int(qual, value);
            else if (key == "param_abs_tol") cfg.optimizer.param_abs_tol = parse_double(qual, value);
            else if (key == "grid_points") cfg.optimizer.grid_points = parse_int(qual, value);
            else if (key == "seed") cfg.optimizer.seed = static_cast<unsigned>(parse_int(qual, value));
            else if (key == "num_starts") cfg.optimizer.num_starts = parse_int(qual, value);
            else if (key == "k_max") cfg.optimizer.k_max = parse_int(qual, value);
            else if (key == "f_e") cfg.optimizer.f_e = parse_double(qual, value);
            else throw std::runtime_error("config: unknown key " + qual);
        } else if (section == "lp") {
            if (key == "include_equality") cfg.optimizer.lp.include_equality = parse_bool(qual, value);
            else throw std::runtime_error("config: unknown key " + qual);
        } else {
            throw std::runtime_error("config: key outside any section at line " +
                                     std::to_string(lineno));
        }
    }
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("config: cannot open " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_config(buf.str());
}

}  // namespace mdiqkd
