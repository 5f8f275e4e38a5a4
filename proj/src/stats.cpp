#include "painleve/stats.hpp"

#include <algorithm>
#include <cmath>

#include "painleve/connect.hpp"
#include "painleve/rng.hpp"

namespace painleve::stats {

namespace {

double sweep_value(const ScanSpec& spec, int i) {
    if (spec.count == 1) return spec.lo;
    return spec.lo + i * (spec.hi - spec.lo) / (spec.count - 1);
}

struct PointSetup {
    InitialAsymptotics init;
    EquationParams params;
};

PointSetup setup_point(const ScanSpec& spec, double v) {
    double a1 = spec.alpha1, a2 = spec.alpha2, f1 = spec.phi1, f2 = spec.phi2, eps = spec.eps;
    switch (spec.sweep) {
        case SweepVariable::eps: eps = v; break;
        case SweepVariable::phi1: f1 = v; break;
        case SweepVariable::action: a1 = a2 = std::sqrt(2.0 * v); break;
    }
    return PointSetup{InitialAsymptotics(a1, a2, f1, f2), EquationParams::two_mode(eps)};
}

ScanRow scan_point(const ScanSpec& spec, double v) {
    ScanRow row;
    row.sweep_value = v;
    PointSetup pt = setup_point(spec, v);

    if (spec.pipeline != Pipeline::numeric) {
        try {
            row.analytic = connect::connect_forward(pt.init, pt.params);
            row.analytic_ok = true;
        } catch (const std::runtime_error& e) {
            row.flag = std::string("analytic: ") + e.what();
        }
    }
    if (spec.pipeline != Pipeline::analytic) {
        try {
            const TrajectoryState s0 = ode::seed_initial_state(pt.init, pt.params, spec.x0);
            ode::IntegrationOptions opts = spec.integration;
            // only the fit window needs dense storage
            const double lo = std::max(spec.x0 + (1.0 - spec.window_fraction) * (spec.x1 - spec.x0),
                                       std::max(50.0, 10.0 * pt.params.eps2()));
            opts.record_from = lo - 1.0;
            const Trajectory traj = ode::integrate(s0, spec.x0, spec.x1, pt.params, opts);
            row.numeric = fit::fit_tail(traj, lo, spec.x1, spec.corrections);
            row.numeric_ok = true;
        } catch (const fit::fit_error& e) {
            row.numeric = e.best;
            row.flag += std::string("numeric: ") + e.what();
        } catch (const std::runtime_error& e) {
            row.flag += std::string("numeric: ") + e.what();
        }
    }
    if (row.analytic_ok && row.numeric_ok) {
        const FinalAsymptotics& a = row.analytic;
        const FinalAsymptotics& n = row.numeric.final;
        row.delta_I1 = std::abs(n.I1 - a.I1);
        row.delta_I2 = std::abs(n.I2 - a.I2);
        row.delta_sin_phi1 = std::abs(std::sin(n.phi1) - std::sin(a.phi1));
        row.delta_sin_phi2 = std::abs(std::sin(n.phi2) - std::sin(a.phi2));
        row.sigma_agree = a.sigma == n.sigma;
    }
    return row;
}

}  // namespace

void ScanSpec::validate() const {
    if (count < 1) throw std::invalid_argument("ScanSpec: count must be >= 1");
    if (!(lo <= hi)) throw std::invalid_argument("ScanSpec: require lo <= hi");
    if (sweep == SweepVariable::eps && !(lo >= 0.05))
        throw std::invalid_argument("ScanSpec: eps sweeps are restricted to eps >= 0.05");
    if (sweep != SweepVariable::eps && !(eps > 0))
        throw std::invalid_argument("ScanSpec: require eps > 0");
    if (!(x0 < x1)) throw std::invalid_argument("ScanSpec: require x0 < x1");
    if (!(window_fraction > 0) || window_fraction >= 1)
        throw std::invalid_argument("ScanSpec: window_fraction must lie in (0, 1)");
    if (alpha1 < 0 || alpha2 < 0)
        throw std::invalid_argument("ScanSpec: amplitudes must be >= 0");
}

std::vector<ScanRow> run_scan(const ScanSpec& spec) {
    spec.validate();
    std::vector<ScanRow> rows(static_cast<std::size_t>(spec.count));
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < spec.count; ++i)
        rows[static_cast<std::size_t>(i)] = scan_point(spec, sweep_value(spec, i));
    return rows;
}

AverageReport run_vacuum_decay(double action, double eps, long long n_samples,
                               const VacuumDecayOptions& opts) {
    if (!(action > 0) || action > 0.1)
        throw std::domain_error("run_vacuum_decay: require action in (0, 0.1]");
    const EquationParams params = EquationParams::two_mode(eps);

    if (opts.pipeline != Pipeline::numeric) {
        AverageReport rep =
            connect::averaged_actions(action, params, opts.method, n_samples, opts.seed);
        if (opts.sample_dump) opts.sample_dump->clear();
        return rep;
    }

    // numeric pipeline: one integration + fit per phase draw
    const double alpha = std::sqrt(2.0 * action);
    std::vector<double> I1(static_cast<std::size_t>(n_samples)),
        I2(static_cast<std::size_t>(n_samples));
    std::vector<char> ok(static_cast<std::size_t>(n_samples), 0);
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < n_samples; ++i) {
        const auto uv = rng::uniform_pair(opts.seed, static_cast<std::uint64_t>(i));
        try {
            const InitialAsymptotics init(alpha, alpha, two_pi * uv[0], two_pi * uv[1]);
            const TrajectoryState s0 = ode::seed_initial_state(init, params, opts.x0);
            ode::IntegrationOptions iopts = opts.integration;
            const double lo = std::max(opts.x0 + 0.8 * (opts.x1 - opts.x0),
                                       std::max(50.0, 10.0 * eps));
            iopts.record_from = lo - 1.0;
            const Trajectory traj = ode::integrate(s0, opts.x0, opts.x1, params, iopts);
            const fit::FitReport rep = fit::fit_tail(traj, lo, opts.x1, opts.corrections);
            I1[static_cast<std::size_t>(i)] = rep.final.I1;
            I2[static_cast<std::size_t>(i)] = rep.final.I2;
            ok[static_cast<std::size_t>(i)] = 1;
        } catch (const std::runtime_error&) {
            // singular draw or failed fit: skip
        }
    }

    AverageReport rep;
    rep.method = AverageMethod::monte_carlo;
    double s1 = 0, s2 = 0, q1 = 0, q2 = 0;
    for (long long i = 0; i < n_samples; ++i) {
        if (!ok[static_cast<std::size_t>(i)]) { ++rep.n_singular; continue; }
        const double a = I1[static_cast<std::size_t>(i)], b = I2[static_cast<std::size_t>(i)];
        s1 += a; s2 += b; q1 += a * a; q2 += b * b;
        ++rep.n_samples;
        if (opts.sample_dump) opts.sample_dump->push_back({a, b});
    }
    if (rep.n_samples == 0)
        throw std::runtime_error("run_vacuum_decay: every sample failed");
    rep.mean_I1 = s1 / rep.n_samples;
    rep.mean_I2 = s2 / rep.n_samples;
    if (rep.n_samples > 1) {
        rep.std_err_I1 = std::sqrt(std::max(0.0, q1 / rep.n_samples - rep.mean_I1 * rep.mean_I1) /
                                   (rep.n_samples - 1));
        rep.std_err_I2 = std::sqrt(std::max(0.0, q2 / rep.n_samples - rep.mean_I2 * rep.mean_I2) /
                                   (rep.n_samples - 1));
    }
    return rep;
}

}  // namespace painleve::stats
