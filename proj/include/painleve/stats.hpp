// Ensemble experiments: parameter scans through the analytic map and/or the
// full integrate-and-fit pipeline, and phase-averaged vacuum-decay runs.
#ifndef PAINLEVE_STATS_HPP
#define PAINLEVE_STATS_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "painleve/fit.hpp"
#include "painleve/model.hpp"
#include "painleve/ode.hpp"

namespace painleve::stats {

enum class SweepVariable { eps, phi1, action };
enum class Pipeline { analytic, numeric, both };

struct ScanSpec {
    SweepVariable sweep = SweepVariable::eps;
    double lo = 0.05, hi = 5.0;
    int count = 20;

    // fixed initial data (the swept entry is overridden per grid point)
    double alpha1 = 0.9, alpha2 = 0.8;
    double phi1 = 1.5707963267948966, phi2 = 1.0471975511965976;
    double eps = 1.0;

    Pipeline pipeline = Pipeline::both;
    double x0 = -500.0, x1 = 500.0;
    ode::IntegrationOptions integration;
    fit::CorrectionFlags corrections = fit::CorrectionFlags::all();
    // fit window: last `window_fraction` of the trajectory, clipped to
    // x >= max(50, 10 eps)
    double window_fraction = 0.2;

    void validate() const;
};

struct ScanRow {
    double sweep_value = 0.0;
    bool analytic_ok = false;
    bool numeric_ok = false;
    FinalAsymptotics analytic;
    fit::FitReport numeric;
    // |I1_num - I1_an|, |I2_num - I2_an|, |sin/cos phase deltas|
    double delta_I1 = 0.0, delta_I2 = 0.0;
    double delta_sin_phi1 = 0.0, delta_sin_phi2 = 0.0;
    bool sigma_agree = false;
    std::string flag;  // non-empty for singular/failed rows
};

// One row per grid point; rows never abort the scan, failures are flagged.
// Grid points are evaluated in parallel; the row order is the grid order.
std::vector<ScanRow> run_scan(const ScanSpec& spec);

struct VacuumDecayOptions {
    Pipeline pipeline = Pipeline::analytic;
    AverageMethod method = AverageMethod::monte_carlo;
    std::uint64_t seed = 0;
    // numeric-pipeline integration setup
    double x0 = -500.0, x1 = 500.0;
    ode::IntegrationOptions integration;
    fit::CorrectionFlags corrections = fit::CorrectionFlags::all();
    std::vector<std::pair<double, double>>* sample_dump = nullptr;  // optional (I1, I2) sink
};

// Phase-averaged final actions at calI_1 = calI_2 = action. The analytic
// pipeline delegates to connect::averaged_actions; the numeric pipeline runs
// seed -> integrate -> fit per sample (intended for n_samples <= 100).
AverageReport run_vacuum_decay(double action, double eps, long long n_samples,
                               const VacuumDecayOptions& opts = {});

}  // namespace painleve::stats

#endif
