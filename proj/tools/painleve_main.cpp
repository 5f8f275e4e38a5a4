// Command-line surface for the coupled Painleve-II toolkit.
//
// Exit codes: 0 success, 2 validation/usage error, 3 numerical failure.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "painleve/connect.hpp"
#include "painleve/csv.hpp"
#include "painleve/fit.hpp"
#include "painleve/lax.hpp"
#include "painleve/model.hpp"
#include "painleve/ode.hpp"
#include "painleve/rng.hpp"
#include "painleve/stats.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace painleve;

constexpr double deg2rad = 0.017453292519943295;

struct OutputSink {
    std::ofstream file;
    std::ostream& stream(const std::string& path) {
        if (path.empty() || path == "-") return std::cout;
        file.open(path);
        if (!file) throw std::invalid_argument("cannot open output file: " + path);
        return file;
    }
};

Trajectory read_trajectory_csv(const std::string& path, double eps) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open trajectory file: " + path);
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("trajectory file is empty: " + path);
    const auto header = csv::split_csv_line(line);
    const std::vector<std::string> expect = {"x", "u1", "du1", "u2", "du2"};
    if (std::vector<std::string>(header.begin(), header.end()) != expect)
        throw std::invalid_argument("trajectory header must be x,u1,du1,u2,du2");

    Trajectory traj(EquationParams::two_mode(eps), 0.0, 0.0);
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = csv::split_csv_line(line);
        if (f.size() != 5)
            throw std::invalid_argument("trajectory line " + std::to_string(lineno) +
                                        ": expected 5 fields");
        const double row[5] = {std::stod(f[0]), std::stod(f[1]), std::stod(f[2]), std::stod(f[3]),
                               std::stod(f[4])};
        const double y[4] = {row[1], row[3], row[2], row[4]};
        traj.append(row[0], y);
    }
    if (traj.empty()) throw std::invalid_argument("trajectory file has no samples");
    return traj;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    csv::Writer w(os);
    w.header({"x", "u1", "du1", "u2", "du2"});
    for (std::size_t i = 0; i < traj.size(); ++i)
        w.field(traj.x(i)).field(traj.u(i, 0)).field(traj.du(i, 0)).field(traj.u(i, 1))
            .field(traj.du(i, 1)), w.end_row();
}

void write_fit_row(csv::Writer& w, double eps, const fit::FitReport& rep) {
    const FinalAsymptotics& f = rep.final;
    w.field(eps).field(f.sigma).field(f.I1).field(f.I2)
        .field(std::sin(f.phi1)).field(std::cos(f.phi1))
        .field(std::sin(f.phi2)).field(std::cos(f.phi2))
        .field(rep.rms_residual);
    w.end_row();
}

struct CommonInit {
    double eps = 1.0;
    double alpha1 = 0.9, alpha2 = 0.8;
    double phi1 = 1.5707963267948966, phi2 = 1.0471975511965976;

    void add_options(CLI::App* cmd) {
        cmd->add_option("--eps", eps, "symmetry-breaking offset (> 0)");
        cmd->add_option("--alpha1", alpha1, "initial amplitude of mode 1 (>= 0)");
        cmd->add_option("--alpha2", alpha2, "initial amplitude of mode 2 (>= 0)");
        cmd->add_option("--phi1", phi1, "initial phase of mode 1");
        cmd->add_option("--phi2", phi2, "initial phase of mode 2");
    }
    InitialAsymptotics init(bool degrees) const {
        const double s = degrees ? deg2rad : 1.0;
        return InitialAsymptotics(alpha1, alpha2, s * phi1, s * phi2);
    }
};

struct IntegrationCli {
    double x0 = -500.0, x1 = 500.0;
    ode::IntegrationOptions opts;

    void add_options(CLI::App* cmd) {
        cmd->add_option("--x0", x0, "start of the integration interval");
        cmd->add_option("--x1", x1, "end of the integration interval");
        cmd->add_option("--abs-tol", opts.abs_tol, "absolute tolerance (default 1e-11)");
        cmd->add_option("--rel-tol", opts.rel_tol, "relative tolerance (default 1e-11)");
        cmd->add_option("--max-step", opts.max_step, "step-size cap (default 10)");
        cmd->add_option("--dx", opts.dense_output_dx,
                        "dense output spacing; 0 keeps phase advance < pi/8 (default)");
        cmd->add_option("--record-from", opts.record_from, "store samples with x >= this");
    }
};

int dispatch(int argc, char** argv) {
    CLI::App app{"Coupled Painleve-II system: connection formulas, integration, Lax diagnostics"};
    app.set_config("--config", "", "read defaults from a key = value file");
    app.require_subcommand(1);
    app.fallthrough();

    int threads = 0;
    if (const char* env = std::getenv("PAINLEVE_THREADS")) threads = std::atoi(env);
    app.add_option("--threads", threads, "cap worker threads (env PAINLEVE_THREADS)");
    bool degrees = false;
    app.add_flag("--degrees", degrees, "interpret input angles as degrees");
    std::string output;
    app.add_option("-o,--output", output, "output file (default stdout)");

    // ---- connect ----
    auto* c_connect = app.add_subcommand("connect", "analytic map, prints one CSV row");
    CommonInit connect_init;
    connect_init.add_options(c_connect);

    // ---- simulate ----
    auto* c_sim = app.add_subcommand("simulate", "seed and integrate, writes trajectory CSV");
    CommonInit sim_init;
    IntegrationCli sim_int;
    sim_init.add_options(c_sim);
    sim_int.add_options(c_sim);

    // ---- fit ----
    auto* c_fit = app.add_subcommand("fit", "read trajectory CSV, write FitReport row");
    std::string fit_input;
    double fit_eps = 1.0;
    double fit_wlo = 0.0, fit_whi = 0.0;
    bool fit_no_corr = false;
    c_fit->add_option("--input", fit_input, "trajectory CSV (x,u1,du1,u2,du2)")->required();
    c_fit->add_option("--eps", fit_eps, "symmetry-breaking offset of the trajectory");
    c_fit->add_option("--window-lo", fit_wlo, "fit window start (default: last 20%)");
    c_fit->add_option("--window-hi", fit_whi, "fit window end (default: trajectory end)");
    c_fit->add_flag("--no-corrections", fit_no_corr, "fit the bare asymptotic model");

    // ---- scan ----
    auto* c_scan = app.add_subcommand("scan", "sweep eps/phi1/action, one CSV row per point");
    stats::ScanSpec scan_spec;
    std::string scan_sweep = "eps", scan_pipeline = "both";
    bool scan_no_corr = false;
    IntegrationCli scan_int;
    c_scan->add_option("--sweep", scan_sweep, "eps | phi1 | action")
        ->check(CLI::IsMember({"eps", "phi1", "action"}));
    c_scan->add_option("--lo", scan_spec.lo, "sweep range start");
    c_scan->add_option("--hi", scan_spec.hi, "sweep range end");
    c_scan->add_option("--count", scan_spec.count, "grid size");
    c_scan->add_option("--pipeline", scan_pipeline, "analytic | numeric | both")
        ->check(CLI::IsMember({"analytic", "numeric", "both"}));
    c_scan->add_option("--alpha1", scan_spec.alpha1, "fixed initial amplitude 1");
    c_scan->add_option("--alpha2", scan_spec.alpha2, "fixed initial amplitude 2");
    c_scan->add_option("--phi1", scan_spec.phi1, "fixed initial phase 1");
    c_scan->add_option("--phi2", scan_spec.phi2, "fixed initial phase 2");
    c_scan->add_option("--eps", scan_spec.eps, "fixed eps (for phi1/action sweeps)");
    c_scan->add_option("--window-fraction", scan_spec.window_fraction, "fit window fraction");
    c_scan->add_flag("--no-corrections", scan_no_corr, "fit the bare asymptotic model");
    scan_int.add_options(c_scan);

    // ---- average ----
    auto* c_avg = app.add_subcommand("average", "phase-averaged vacuum-decay actions");
    double avg_action = 1e-3, avg_eps = 1.0;
    long long avg_samples = 1'000'000;
    std::uint64_t avg_seed = 0;
    std::string avg_method = "mc", avg_pipeline = "analytic", avg_dump;
    IntegrationCli avg_int;
    c_avg->add_option("--action", avg_action, "initial adiabatic invariant calI (<= 0.1)");
    c_avg->add_option("--eps", avg_eps, "symmetry-breaking offset");
    c_avg->add_option("--samples", avg_samples, "sample count (or quadrature node budget)");
    c_avg->add_option("--seed", avg_seed, "RNG stream seed");
    c_avg->add_option("--method", avg_method, "mc | quadrature")
        ->check(CLI::IsMember({"mc", "quadrature"}));
    c_avg->add_option("--pipeline", avg_pipeline, "analytic | numeric")
        ->check(CLI::IsMember({"analytic", "numeric"}));
    c_avg->add_option("--dump", avg_dump, "also write per-sample (I1, I2) CSV here");
    avg_int.add_options(c_avg);

    // ---- lax-check ----
    auto* c_lax = app.add_subcommand("lax-check", "zero-curvature residuals over a trajectory");
    std::string lax_input;
    double lax_eps = 1.0, lax_tlo = -3.0, lax_thi = 3.0;
    long long lax_samples = 100;
    std::uint64_t lax_seed = 0;
    bool lax_per_point = false;
    c_lax->add_option("--input", lax_input, "trajectory CSV (x,u1,du1,u2,du2)")->required();
    c_lax->add_option("--eps", lax_eps, "symmetry-breaking offset of the trajectory");
    c_lax->add_option("--samples", lax_samples, "number of random (t, x) probes");
    c_lax->add_option("--t-lo", lax_tlo, "spectral-parameter range start");
    c_lax->add_option("--t-hi", lax_thi, "spectral-parameter range end");
    c_lax->add_option("--seed", lax_seed, "RNG stream seed");
    c_lax->add_flag("--per-point", lax_per_point, "emit one row per probe");

    // ---- spectrum ----
    auto* c_spec = app.add_subcommand("spectrum", "eigenvalue flow of the Lax Hamiltonian");
    double sp_x = -16.0, sp_tlo = -4.0, sp_thi = 4.0, sp_eps = 1.0;
    int sp_count = 801;
    bool sp_expose = false;
    std::string sp_dom = "none";
    CommonInit sp_init;
    sp_init.alpha1 = 0.1; sp_init.alpha2 = 0.1;
    sp_init.phi1 = 1.0471975511965976; sp_init.phi2 = 2.356194490192345;
    double sp_sigma = -1.0, sp_rho = 0.12, sp_A = 0.2, sp_f1 = 0.0, sp_f2 = 0.0;
    bool sp_from_final = false;
    c_spec->add_option("--x", sp_x, "evaluation point x");
    c_spec->add_option("--eps", sp_eps, "symmetry-breaking offset");
    c_spec->add_option("--t-lo", sp_tlo, "scan start");
    c_spec->add_option("--t-hi", sp_thi, "scan end");
    c_spec->add_option("--count", sp_count, "scan points");
    c_spec->add_flag("--expose-shift", sp_expose,
                     "add sqrt(x)(4t^2 + x) times identity (positive-x convention)");
    c_spec->add_option("--dom", sp_dom, "none | minus | plus: local crossing Hamiltonian")
        ->check(CLI::IsMember({"none", "minus", "plus"}));
    c_spec->add_option("--alpha1", sp_init.alpha1, "seed amplitude 1 (x < 0 source)");
    c_spec->add_option("--alpha2", sp_init.alpha2, "seed amplitude 2 (x < 0 source)");
    c_spec->add_option("--phi1", sp_init.phi1, "seed phase 1 (x < 0 source)");
    c_spec->add_option("--phi2", sp_init.phi2, "seed phase 2 (x < 0 source)");
    c_spec->add_flag("--from-final", sp_from_final, "build u, u' from the x -> +inf model");
    c_spec->add_option("--sigma", sp_sigma, "final-model sign (+1/-1)");
    c_spec->add_option("--rho", sp_rho, "final-model amplitude rho");
    c_spec->add_option("--amp", sp_A, "final-model amplitude A");
    c_spec->add_option("--phi1-f", sp_f1, "final-model phase 1");
    c_spec->add_option("--phi2-f", sp_f2, "final-model phase 2");

    // ---- c1 ----
    auto* c_c1 = app.add_subcommand("c1", "spanning-tree constant by tensor quadrature");
    int c1_res = 4096;
    bool c1_serial = false;
    c_c1->add_option("--resolution", c1_res, "grid points per axis (>= 8)");
    c_c1->add_flag("--serial", c1_serial, "use the serial reference implementation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return 2;
    }

#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif
    OutputSink sink;
    std::ostream& os = sink.stream(output);

    if (*c_connect) {
        const EquationParams params = EquationParams::two_mode(connect_init.eps);
        const InitialAsymptotics init = connect_init.init(degrees);
        const FinalAsymptotics fin = connect::connect_forward(init, params);
        csv::Writer w(os);
        w.header({"eps", "alpha1", "alpha2", "phi1", "phi2", "sigma", "I1", "I2", "phi1_f",
                  "phi2_f", "rho", "A", "flag"});
        w.field(connect_init.eps).field(init.alpha(0)).field(init.alpha(1))
            .field(init.phi(0)).field(init.phi(1)).field(fin.sigma).field(fin.I1).field(fin.I2)
            .field(fin.phi1).field(fin.phi2).field(fin.rho())
            .field(std::isfinite(fin.I2) ? fin.amplitude(connect_init.eps)
                                         : std::numeric_limits<double>::infinity())
            .field(std::string(fin.sigma_ambiguous ? "sigma_ambiguous" : ""));
        w.end_row();
        return 0;
    }

    if (*c_sim) {
        const EquationParams params = EquationParams::two_mode(sim_init.eps);
        if (sim_int.x0 > -50.0 && sim_int.x0 < 0.0)
            std::cerr << "warning: seeding at x0 = " << sim_int.x0
                      << " is close to the origin; the asymptotic seed degrades\n";
        const TrajectoryState s0 =
            ode::seed_initial_state(sim_init.init(degrees), params, sim_int.x0);
        const Trajectory traj = ode::integrate(s0, sim_int.x0, sim_int.x1, params, sim_int.opts);
        write_trajectory_csv(os, traj);
        return 0;
    }

    if (*c_fit) {
        const Trajectory traj = read_trajectory_csv(fit_input, fit_eps);
        const fit::CorrectionFlags cf =
            fit_no_corr ? fit::CorrectionFlags::none() : fit::CorrectionFlags::all();
        const fit::FitReport rep = (fit_wlo < fit_whi)
                                       ? fit::fit_tail(traj, fit_wlo, fit_whi, cf)
                                       : fit::fit_tail(traj, cf);
        csv::Writer w(os);
        w.header({"eps", "sigma", "I1", "I2", "sin_phi1", "cos_phi1", "sin_phi2", "cos_phi2",
                  "rms_residual"});
        write_fit_row(w, fit_eps, rep);
        return 0;
    }

    if (*c_scan) {
        scan_spec.sweep = scan_sweep == "eps" ? stats::SweepVariable::eps
                          : scan_sweep == "phi1" ? stats::SweepVariable::phi1
                                                 : stats::SweepVariable::action;
        scan_spec.pipeline = scan_pipeline == "analytic" ? stats::Pipeline::analytic
                             : scan_pipeline == "numeric" ? stats::Pipeline::numeric
                                                          : stats::Pipeline::both;
        if (degrees) { scan_spec.phi1 *= deg2rad; scan_spec.phi2 *= deg2rad; }
        scan_spec.corrections =
            scan_no_corr ? fit::CorrectionFlags::none() : fit::CorrectionFlags::all();
        scan_spec.x0 = scan_int.x0;
        scan_spec.x1 = scan_int.x1;
        scan_spec.integration = scan_int.opts;
        const std::vector<stats::ScanRow> rows = stats::run_scan(scan_spec);

        csv::Writer w(os);
        w.header({"sweep", "value", "sigma_an", "I1_an", "I2_an", "sin_phi1_an", "sin_phi2_an",
                  "sigma_num", "I1_num", "I2_num", "sin_phi1_num", "sin_phi2_num", "rms_residual",
                  "delta_I1", "delta_I2", "delta_sin_phi1", "delta_sin_phi2", "sigma_agree",
                  "flag"});
        long long singular = 0;
        for (const auto& r : rows) {
            if (!r.flag.empty()) ++singular;
            w.field(scan_sweep).field(r.sweep_value);
            if (r.analytic_ok)
                w.field(r.analytic.sigma).field(r.analytic.I1).field(r.analytic.I2)
                    .field(std::sin(r.analytic.phi1)).field(std::sin(r.analytic.phi2));
            else
                w.field("").field("").field("").field("").field("");
            if (r.numeric_ok)
                w.field(r.numeric.final.sigma).field(r.numeric.final.I1).field(r.numeric.final.I2)
                    .field(std::sin(r.numeric.final.phi1)).field(std::sin(r.numeric.final.phi2))
                    .field(r.numeric.rms_residual);
            else
                w.field("").field("").field("").field("").field("").field("");
            if (r.analytic_ok && r.numeric_ok)
                w.field(r.delta_I1).field(r.delta_I2).field(r.delta_sin_phi1)
                    .field(r.delta_sin_phi2).field(r.sigma_agree ? 1 : 0);
            else
                w.field("").field("").field("").field("").field("");
            w.field(r.flag);
            w.end_row();
        }
        if (singular > 0)
            std::cerr << "scan: " << singular << " of " << rows.size() << " rows flagged\n";
        return 0;
    }

    if (*c_avg) {
        stats::VacuumDecayOptions vopts;
        vopts.pipeline =
            avg_pipeline == "numeric" ? stats::Pipeline::numeric : stats::Pipeline::analytic;
        vopts.method = avg_method == "quadrature" ? AverageMethod::tensor_quadrature
                                                  : AverageMethod::monte_carlo;
        vopts.seed = avg_seed;
        vopts.x0 = avg_int.x0;
        vopts.x1 = avg_int.x1;
        vopts.integration = avg_int.opts;
        std::vector<std::pair<double, double>> dump;
        if (!avg_dump.empty()) vopts.sample_dump = &dump;
        const AverageReport rep = stats::run_vacuum_decay(avg_action, avg_eps, avg_samples, vopts);
        csv::Writer w(os);
        w.header({"action", "eps", "method", "pipeline", "n_samples", "n_singular", "mean_I1",
                  "std_err_I1", "mean_I2", "std_err_I2"});
        w.field(avg_action).field(avg_eps)
            .field(std::string(rep.method == AverageMethod::monte_carlo ? "mc" : "quadrature"))
            .field(avg_pipeline).field(rep.n_samples).field(rep.n_singular)
            .field(rep.mean_I1).field(rep.std_err_I1).field(rep.mean_I2).field(rep.std_err_I2);
        w.end_row();
        if (!avg_dump.empty()) {
            std::ofstream df(avg_dump);
            if (!df) throw std::invalid_argument("cannot open dump file: " + avg_dump);
            csv::Writer dw(df);
            dw.header({"I1", "I2"});
            for (const auto& [a, b] : dump) dw.field(a).field(b), dw.end_row();
        }
        return 0;
    }

    if (*c_lax) {
        const Trajectory traj = read_trajectory_csv(lax_input, lax_eps);
        if (lax_samples < 1) throw std::invalid_argument("lax-check: need >= 1 sample");
        csv::Writer w(os);
        if (lax_per_point) w.header({"t", "x", "frobenius", "max_entry"});
        double maxf = 0.0, sumf = 0.0, maxe = 0.0;
        for (long long i = 0; i < lax_samples; ++i) {
            const auto uv = rng::uniform_pair(lax_seed, static_cast<std::uint64_t>(i));
            const double t = lax_tlo + (lax_thi - lax_tlo) * uv[0];
            const std::size_t idx =
                std::min(traj.size() - 1, static_cast<std::size_t>(uv[1] * traj.size()));
            const TrajectoryState s = traj.state(idx);
            const lax::CurvatureResidual res =
                lax::zero_curvature_residual(t, s.x, s.u, s.du, traj.params());
            maxf = std::max(maxf, res.frobenius_norm);
            maxe = std::max(maxe, res.max_entry);
            sumf += res.frobenius_norm;
            if (lax_per_point)
                w.field(t).field(s.x).field(res.frobenius_norm).field(res.max_entry),
                    w.end_row();
        }
        if (!lax_per_point) {
            w.header({"n_points", "max_frobenius", "mean_frobenius", "max_entry"});
            w.field(lax_samples).field(maxf).field(sumf / lax_samples).field(maxe);
            w.end_row();
        }
        return 0;
    }

    if (*c_spec) {
        const EquationParams params = EquationParams::two_mode(sp_eps);
        if (sp_count < 2) throw std::invalid_argument("spectrum: need >= 2 scan points");

        std::vector<double> u(2), du(2);
        if (sp_from_final) {
            if (!(sp_x > 0)) throw std::domain_error("spectrum: final model requires x > 0");
            const FinalAsymptotics fin = FinalAsymptotics::from_amplitudes(
                static_cast<int>(sp_sigma), sp_rho, sp_A, sp_f1, sp_f2, sp_eps);
            const fit::ModelPoint m =
                fit::final_asymptote_model(sp_x, fin, params, fit::CorrectionFlags::none());
            u = {m.u1, m.u2};
            du = {m.du1, m.du2};
        } else {
            const TrajectoryState s =
                ode::seed_initial_state(sp_init.init(degrees), params, sp_x);
            u = s.u;
            du = s.du;
        }

        csv::Writer w(os);
        w.header({"t", "lambda1", "lambda2", "lambda3"});
        for (int i = 0; i < sp_count; ++i) {
            const double t = sp_tlo + i * (sp_thi - sp_tlo) / (sp_count - 1);
            std::vector<double> ev;
            if (sp_dom != "none") {
                const lax::CMatrix h = lax::build_dom_hamiltonian(
                    sp_dom == "plus" ? lax::DomSide::plus : lax::DomSide::minus, t, sp_x, u, du,
                    params);
                ev = lax::spectrum(h);
            } else {
                const lax::LaxPair lp = lax::build_lax_pair(t, sp_x, u, du, params);
                const double shift =
                    sp_expose ? std::sqrt(sp_x) * (4.0 * t * t + sp_x) : 0.0;
                ev = lax::spectrum(lp.H, shift);
            }
            w.field(t).field(ev[0]).field(ev[1]).field(ev[2]);
            w.end_row();
        }
        return 0;
    }

    if (*c_c1) {
        const double v = c1_serial ? connect::spanning_tree_constant_c1_serial(c1_res)
                                   : connect::spanning_tree_constant_c1(c1_res);
        csv::Writer w(os);
        w.header({"resolution", "c1"});
        w.field(c1_res).field(v);
        w.end_row();
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
