#include <cmath>
#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "qkdcal/json_io.hpp"
#include "qkdcal/keyrate.hpp"
#include "qkdcal/qubit.hpp"
#include "qkdcal/selfcheck.hpp"
#include "qkdcal/sim.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitIo = 4;

constexpr double kPi = 3.14159265358979323846;

json report_to_json(const qkdcal::KeyRateReport& r) {
    json j;
    j["mutual_info"] = r.mutual_info;
    j["adversary_bound"] = r.adversary_bound;
    j["rate"] = r.rate;
    j["rate_clamped"] = r.rate_clamped;
    j["qber"] = r.qber ? json(*r.qber) : json(nullptr);
    if (r.trace) {
        const auto& t = *r.trace;
        j["optimizer"] = {{"evaluations", t.evaluations},
                          {"iterations", t.iterations},
                          {"min_abs_corr", t.min_abs_corr},
                          {"feasibility_margin", t.feasibility_margin},
                          {"best",
                           {{"x1", t.best.x1()},
                            {"x2", t.best.x2()},
                            {"x3", t.best.x3()},
                            {"x4", t.best.x4()},
                            {"theta", t.best.theta()}}}};
    } else {
        j["optimizer"] = nullptr;
    }
    return j;
}

void print_report(const qkdcal::KeyRateReport& r, bool as_json) {
    if (as_json) {
        std::printf("%s\n", report_to_json(r).dump().c_str());
        return;
    }
    std::printf("mutual_info      %.6f\n", r.mutual_info);
    std::printf("adversary_bound  %.6f\n", r.adversary_bound);
    std::printf("rate             %.6f\n", r.rate);
    std::printf("rate_clamped     %.6f\n", r.rate_clamped);
    if (r.qber) std::printf("qber             %.6f\n", *r.qber);
    if (r.trace) {
        const auto& t = *r.trace;
        std::printf("optimizer        evaluations=%lld iterations=%d\n",
                    static_cast<long long>(t.evaluations), t.iterations);
        std::printf("optimizer_best   x1=%.6f x2=%.6f x3=%.6f x4=%.6f theta=%.6f\n",
                    t.best.x1(), t.best.x2(), t.best.x3(), t.best.x4(), t.best.theta());
        std::printf("optimizer_min    |E|=%.6f margin=%.6g\n", t.min_abs_corr,
                    t.feasibility_margin);
    }
    if (r.rate < 0.0) std::printf("note: no positive key rate guaranteed\n");
}

struct RateArgs {
    double qber = -1.0;
    std::string data_path;
    bool optimize = false;
    double xmax = 8.0;
    int grid = 33;
    bool as_json = false;
};

int cmd_rate(const RateArgs& a) {
    qkdcal::KeyRateReport report;
    if (!a.data_path.empty()) {
        const qkdcal::DataMatrix d =
            qkdcal::data_matrix_from_json(qkdcal::read_file(a.data_path));
        qkdcal::OptimizerOptions opts;
        opts.x_max = a.xmax;
        opts.grid_points = a.grid;
        opts.force_optimizer = a.optimize;
        report = qkdcal::rate_from_data(d, opts);
    } else {
        report = qkdcal::symmetric_rate(a.qber);
    }
    print_report(report, a.as_json);
    return kExitOk;
}

struct SweepArgs {
    double qmin = 0.0;
    double qmax = 0.5;
    int steps = 0;
    std::string out;
};

int cmd_sweep(const SweepArgs& a) {
    if (!(a.qmin >= 0.0 && a.qmin < a.qmax && a.qmax <= 0.5) || a.steps < 2) {
        throw std::domain_error("sweep: need 0 <= qber-min < qber-max <= 0.5 and steps >= 2");
    }
    std::string csv = "qber,mutual_info,adversary_bound,key_rate\n";
    char line[128];
    for (int i = 0; i < a.steps; ++i) {
        const double q = a.qmin + (a.qmax - a.qmin) * i / (a.steps - 1);
        const qkdcal::KeyRateReport r = qkdcal::symmetric_rate(q);
        std::snprintf(line, sizeof line, "%.6f,%.6f,%.6f,%.6f\n", q, r.mutual_info,
                      r.adversary_bound, r.rate);
        csv += line;
    }
    qkdcal::write_file(a.out, csv);
    return kExitOk;
}

struct SimArgs {
    double visibility = -1.0;
    std::string state_path;
    std::uint64_t rounds = 100000;
    std::uint64_t seed = 0;
    double eta_a = 1.0, bias_a = 0.0, eta_a2 = 1.0, bias_a2 = 0.0;
    double eta_b = 1.0, bias_b = 0.0, eta_b2 = 1.0, bias_b2 = 0.0;
    double theta_a = kPi / 2.0, theta_b = kPi / 2.0;
    std::string out;
    bool as_json = false;
};

int cmd_simulate(const SimArgs& a) {
    qkdcal::SimConfig cfg;
    if (!a.state_path.empty()) {
        cfg.state = qkdcal::state_from_json(qkdcal::read_file(a.state_path));
    } else {
        cfg.state = qkdcal::werner_state(a.visibility);
    }
    auto axis = [](double angle) {
        return qkdcal::Vec3{std::sin(angle), 0.0, std::cos(angle)};
    };
    cfg.alice[0] = {axis(0.0), a.eta_a, a.bias_a};
    cfg.alice[1] = {axis(a.theta_a), a.eta_a2, a.bias_a2};
    cfg.bob[0] = {axis(0.0), a.eta_b, a.bias_b};
    cfg.bob[1] = {axis(a.theta_b), a.eta_b2, a.bias_b2};
    cfg.rounds = a.rounds;
    cfg.seed = a.seed;

    const qkdcal::EstimatedDataMatrix est = qkdcal::run(cfg);
    if (!a.out.empty()) qkdcal::write_file(a.out, qkdcal::estimated_to_json(est));
    if (est.has_undefined()) {
        throw qkdcal::infeasible_error("estimated matrix has undefined cells (too few rounds)");
    }
    print_report(qkdcal::rate_from_data(est.d), a.as_json);
    return kExitOk;
}

int cmd_verify(bool deep) {
    bool all_ok = true;
    for (const qkdcal::CheckResult& c : qkdcal::run_self_checks(deep)) {
        std::printf("%s %.7f (%s) %s\n", c.name.c_str(), c.measured, c.criterion.c_str(),
                    c.pass ? "PASS" : "FAIL");
        all_ok = all_ok && c.pass;
    }
    return all_ok ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Calibration-robust BB84 key-rate bounds from correlation data"};
    app.require_subcommand(1);

    RateArgs rate_args;
    CLI::App* rate = app.add_subcommand("rate", "Key rate from a QBER or a data-matrix file");
    auto* opt_q = rate->add_option("--qber", rate_args.qber, "Symmetric QBER in [0, 1/2]");
    auto* opt_d = rate->add_option("--data", rate_args.data_path, "DataMatrix JSON file");
    rate->add_flag("--optimize", rate_args.optimize,
                   "Force the calibration-parameter optimizer (with diagnostics)");
    rate->add_option("--xmax", rate_args.xmax, "Optimizer search box for x2/x4");
    rate->add_option("--grid", rate_args.grid, "Optimizer grid resolution per coordinate");
    rate->add_flag("--json", rate_args.as_json, "Machine-readable output");
    opt_q->excludes(opt_d);
    opt_d->excludes(opt_q);

    SweepArgs sweep_args;
    CLI::App* sweep = app.add_subcommand("sweep", "CSV sweep of the symmetric rate over QBER");
    sweep->add_option("--qber-min", sweep_args.qmin, "Lower end of the QBER range")->required();
    sweep->add_option("--qber-max", sweep_args.qmax, "Upper end of the QBER range")->required();
    sweep->add_option("--steps", sweep_args.steps, "Number of rows (>= 2)")->required();
    sweep->add_option("--out", sweep_args.out, "Output CSV path")->required();

    SimArgs sim_args;
    CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo run of the measurement stage");
    auto* opt_v = sim->add_option("--visibility", sim_args.visibility,
                                  "Werner state visibility in [0,1]");
    auto* opt_s = sim->add_option("--state", sim_args.state_path, "Two-qubit state JSON file");
    sim->add_option("--rounds", sim_args.rounds, "Number of rounds");
    sim->add_option("--seed", sim_args.seed, "RNG seed");
    sim->add_option("--eta-a", sim_args.eta_a, "Alice first-measurement sharpness");
    sim->add_option("--bias-a", sim_args.bias_a, "Alice first-measurement bias");
    sim->add_option("--eta-a2", sim_args.eta_a2, "Alice second-measurement sharpness");
    sim->add_option("--bias-a2", sim_args.bias_a2, "Alice second-measurement bias");
    sim->add_option("--theta-a", sim_args.theta_a, "Angle of Alice's second axis (rad)");
    sim->add_option("--eta-b", sim_args.eta_b, "Bob first-measurement sharpness");
    sim->add_option("--bias-b", sim_args.bias_b, "Bob first-measurement bias");
    sim->add_option("--eta-b2", sim_args.eta_b2, "Bob second-measurement sharpness");
    sim->add_option("--bias-b2", sim_args.bias_b2, "Bob second-measurement bias");
    sim->add_option("--theta-b", sim_args.theta_b, "Angle of Bob's second axis (rad)");
    sim->add_option("--out", sim_args.out, "Write the estimated matrix JSON here");
    sim->add_flag("--json", sim_args.as_json, "Machine-readable rate report");
    opt_v->excludes(opt_s);
    opt_s->excludes(opt_v);

    bool deep = false;
    CLI::App* verify = app.add_subcommand("verify", "Run the built-in oracle suite");
    verify->add_flag("--deep", deep, "Enlarged grids and sample counts");

    try {
        app.parse(argc, argv);
        if (rate->parsed()) {
            if ((rate_args.qber >= 0.0) == !rate_args.data_path.empty()) {
                std::fprintf(stderr, "rate: exactly one of --qber or --data is required\n");
                return kExitBadInput;
            }
            return cmd_rate(rate_args);
        }
        if (sweep->parsed()) return cmd_sweep(sweep_args);
        if (sim->parsed()) {
            if (sim_args.state_path.empty() && sim_args.visibility < 0.0) {
                std::fprintf(stderr, "simulate: one of --visibility or --state is required\n");
                return kExitBadInput;
            }
            return cmd_simulate(sim_args);
        }
        if (verify->parsed()) return cmd_verify(deep);
        return kExitBadInput;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadInput;
    } catch (const qkdcal::io_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const qkdcal::infeasible_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitBadInput;
    }
}
