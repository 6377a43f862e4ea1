// mdiqkd: finite-key rates for three-intensity decoy-state MDI-QKD.
//
// Commands:
//   evaluate  fixed-parameter statistics dump, bounds, and R per method
//   optimize  full protocol-parameter optimization at one distance
//   scan      distance grid of optimized rates (plot data)
//   verify    deterministic self-check suite
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <mutex>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "mdiqkd/config.hpp"
#include "mdiqkd/verify.hpp"

namespace {

using namespace mdiqkd;

constexpr const char* kCsvHeader =
    "distance_km,method,R,mu_x,mu_y,p_x,p_y,pX_x,pX_y,pX_o,s11_lower,e11_upper,branch";

std::string num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

Method parse_method(const std::string& name) {
    if (name == "asymptotic") return Method::asymptotic;
    if (name == "traditional") return Method::traditional;
    if (name == "improved") return Method::improved;
    if (name == "lp") return Method::lp;
    throw CLI::ValidationError("method", "unknown method: " + name);
}

std::vector<Method> parse_methods(const std::string& csv) {
    std::vector<Method> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(parse_method(item));
    if (out.empty()) throw CLI::ValidationError("methods", "no methods given");
    return out;
}

std::string csv_row(double distance_km, Method m, const ProtocolParams& p,
                    double R, const Evaluation& ev) {
    std::ostringstream os;
    os << num(distance_km) << ',' << method_name(m) << ',' << num(R) << ','
       << num(p.mu_x) << ',' << num(p.mu_y) << ',' << num(p.p_x) << ','
       << num(p.p_y) << ',' << num(p.pX_given_x) << ',' << num(p.pX_given_y)
       << ',' << num(p.pX_given_o) << ',' << num(ev.s11_Z_lower) << ','
       << num(ev.e11_X_upper) << ',' << branch_name(ev.branch_used);
    return os.str();
}

std::string flag_row(double distance_km, Method m, const Evaluation& ev) {
    if (!ev.clamp_flag && !ev.zero_count_flag) return "";
    std::ostringstream os;
    os << num(distance_km) << ',' << method_name(m) << ","
       << (ev.clamp_flag ? "clamped" : "") << ","
       << (ev.zero_count_flag ? "zero_count_fallback" : "");
    return os.str();
}

// One optimized scan point. The LP bounds track the improved closed forms to
// better than plot precision, so the LP column optimizes with the closed
// forms and re-scores the optimum with the full 502-constraint LP.
struct PointResult {
    std::string csv;
    std::string flags;
};

PointResult optimized_point(const Config& cfg, double distance_km, Method m) {
    ChannelParams ch = cfg.channel;
    ch.distance_km = distance_km;
    OptimizerOptions opts = cfg.optimizer;
    const Method opt_method = m == Method::lp ? Method::improved : m;
    const OptimizerResult r = optimize(ch, cfg.protocol.N_t, opt_method,
                                       cfg.fluctuation, opts);
    Evaluation ev = r.eval;
    double R = r.R;
    if (r.feasible && m == Method::lp) {
        ev = evaluate_protocol(ch, r.best, Method::lp, cfg.fluctuation,
                               opts.f_e, opts.k_max, opts.lp);
        R = ev.rate.R;
    }
    return {csv_row(distance_km, m, r.best, R, ev), flag_row(distance_km, m, ev)};
}

struct Output {
    std::ofstream file;
    std::string path;

    explicit Output(const std::string& out_path) : path(out_path) {
        if (!path.empty()) {
            file.open(path);
            if (!file) throw std::runtime_error("cannot open output file " + path);
        }
    }
    std::ostream& stream() { return path.empty() ? std::cout : file; }

    void write_flags(const std::vector<std::string>& flags) {
        if (flags.empty()) return;
        std::ostringstream body;
        body << "distance_km,method,clamp,zero_count\n";
        for (const std::string& f : flags) body << f << "\n";
        if (path.empty()) {
            std::cerr << "# flag report\n" << body.str();
        } else {
            std::ofstream side(path + ".flags");
            side << body.str();
        }
    }
};

int worker_count() {
    if (const char* env = std::getenv("MDIQKD_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

int cmd_evaluate(const Config& cfg, const std::string& out_path) {
    Output out(out_path);
    std::ostream& os = out.stream();
    const SourceTriple triple =
        coherent_triple(cfg.protocol.mu_x, cfg.protocol.mu_y, cfg.optimizer.k_max);
    const CoefficientTensor tensor =
        two_pulse_coefficients(triple, triple, cfg.optimizer.k_max);
    const ObservedStatistics stats = observe_statistics(
        tensor, fock_yields(cfg.channel, Basis::X, cfg.optimizer.k_max),
        fock_yields(cfg.channel, Basis::Z, cfg.optimizer.k_max), cfg.protocol);

    os << "# statistics at " << num(cfg.channel.distance_km) << " km\n";
    os << "basis,pair,S,T,N\n";
    for (const Basis b : {Basis::X, Basis::Z}) {
        const BasisStatistics& st = stats.basis(b);
        for (int lr = 0; lr < kNumPairs; ++lr)
            os << (b == Basis::X ? 'X' : 'Z') << ',' << pair_name(lr) << ','
               << num(st.S[static_cast<std::size_t>(lr)]) << ','
               << num(st.T[static_cast<std::size_t>(lr)]) << ','
               << num(st.N[static_cast<std::size_t>(lr)]) << "\n";
    }
    os << kCsvHeader << "\n";
    std::vector<std::string> flags;
    for (const Method m : {Method::asymptotic, Method::traditional,
                           Method::improved, Method::lp}) {
        const Evaluation ev =
            evaluate_protocol(cfg.channel, cfg.protocol, m, cfg.fluctuation,
                              cfg.optimizer.f_e, cfg.optimizer.k_max,
                              cfg.optimizer.lp);
        os << csv_row(cfg.channel.distance_km, m, cfg.protocol, ev.rate.R, ev)
           << "\n";
        const std::string f = flag_row(cfg.channel.distance_km, m, ev);
        if (!f.empty()) flags.push_back(f);
    }
    out.write_flags(flags);
    return 0;
}

int cmd_optimize(const Config& cfg, double distance_km, const std::string& method,
                 const std::string& out_path) {
    const PointResult r = optimized_point(cfg, distance_km, parse_method(method));
    Output out(out_path);
    out.stream() << kCsvHeader << "\n" << r.csv << "\n";
    if (!r.flags.empty()) out.write_flags({r.flags});
    return 0;
}

int cmd_scan(const Config& cfg, double from, double to, double step,
             const std::string& methods_csv, const std::string& out_path) {
    if (step <= 0.0) throw std::runtime_error("scan: step must be positive");
    const std::vector<Method> methods = parse_methods(methods_csv);
    struct Task {
        double distance;
        Method method;
    };
    std::vector<Task> tasks;
    for (double d = from; d <= to + 1e-9; d += step)
        for (const Method m : methods) tasks.push_back({d, m});

    std::vector<PointResult> results(tasks.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string error;
    std::mutex error_mutex;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size() || failed.load()) break;
            try {
                results[i] = optimized_point(cfg, tasks[i].distance, tasks[i].method);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                error = e.what();
                failed.store(true);
            }
        }
    };
    const int n_workers =
        std::min<int>(worker_count(), static_cast<int>(tasks.size()));
    std::vector<std::thread> pool;
    for (int i = 1; i < n_workers; ++i) pool.emplace_back(work);
    work();
    for (std::thread& t : pool) t.join();
    if (failed.load()) throw std::runtime_error("scan: " + error);

    // tasks were generated in (distance, method) order already
    Output out(out_path);
    std::ostream& os = out.stream();
    os << kCsvHeader << "\n";
    std::vector<std::string> flags;
    for (const PointResult& r : results) {
        os << r.csv << "\n";
        if (!r.flags.empty()) flags.push_back(r.flags);
    }
    out.write_flags(flags);
    return 0;
}

int cmd_verify(unsigned seed, const std::string& out_path) {
    const VerifyReport rep = run_verification(seed);
    Output out(out_path);
    out.stream() << format_report(rep);
    return rep.all_passed() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-key rates for three-intensity decoy-state MDI-QKD"};
    app.require_subcommand(1);

    std::string config_path, out_path;
    app.add_option("--config", config_path, "INI config file");
    app.add_option("--out", out_path, "output file (default: stdout)");

    double nt = -1.0, distance = -1.0, from = 0.0, to = 160.0, step = 5.0;
    unsigned seed = 0;
    bool seed_set = false;
    std::string method = "improved";
    std::string methods = "traditional,improved,lp";

    CLI::App* evaluate = app.add_subcommand("evaluate", "bounds and R at fixed parameters");
    evaluate->fallthrough();
    evaluate->add_option("--distance", distance, "distance in km");
    evaluate->add_option("--nt", nt, "total pulse-pair count");

    CLI::App* optimize = app.add_subcommand("optimize", "optimize protocol parameters");
    optimize->fallthrough();
    optimize->add_option("--distance", distance, "distance in km")->required();
    optimize->add_option("--nt", nt, "total pulse-pair count");
    optimize->add_option("--method", method, "asymptotic|traditional|improved|lp");
    optimize->add_option("--seed", seed, "optimizer start-set seed")
        ->each([&](const std::string&) { seed_set = true; });

    CLI::App* scan = app.add_subcommand("scan", "optimized rates over a distance grid");
    scan->fallthrough();
    scan->add_option("--from", from, "start distance, km");
    scan->add_option("--to", to, "end distance, km");
    scan->add_option("--step", step, "grid step, km");
    scan->add_option("--nt", nt, "total pulse-pair count");
    scan->add_option("--methods", methods, "comma-separated method list");
    scan->add_option("--seed", seed, "optimizer start-set seed")
        ->each([&](const std::string&) { seed_set = true; });

    CLI::App* verify = app.add_subcommand("verify", "run the self-check suite");
    verify->fallthrough();
    unsigned verify_seed = 20240901;
    verify->add_option("--seed", verify_seed, "random-instance seed");

    CLI11_PARSE(app, argc, argv);

    try {
        Config cfg = config_path.empty() ? Config{} : load_config(config_path);
        if (nt > 0.0) cfg.protocol.N_t = nt;
        if (seed_set) cfg.optimizer.seed = seed;
        if (distance >= 0.0) cfg.channel.distance_km = distance;

        if (evaluate->parsed()) return cmd_evaluate(cfg, out_path);
        if (optimize->parsed()) return cmd_optimize(cfg, distance, method, out_path);
        if (scan->parsed()) return cmd_scan(cfg, from, to, step, methods, out_path);
        return cmd_verify(verify_seed, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
