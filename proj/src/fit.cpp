#include "painleve/fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "painleve/connect.hpp"

namespace painleve::fit {

namespace {

constexpr double sqrt2_23 = 0.94280904158206336587;  // 2 sqrt(2) / 3

struct ModelEval {
    double u1, u2;
    // partial derivatives wrt (rho, A, f1, f2)
    double d1[4];
    double d2[4];
};

// Model value and parameter Jacobian at one sample.
ModelEval eval_model(double x, double sigma, double rho, double A, double f1, double f2,
                     double eps, CorrectionFlags cf) {
    ModelEval m{};
    const double se = std::sqrt(eps);
    const double lx = std::log(x);

    const double th2 = se * x - 0.5 * A * A * se * lx + f2;
    const double c2 = std::cos(th2), s2 = std::sin(th2);
    m.u2 = sigma * A * c2;
    const double du2_dA = sigma * (c2 + A * A * se * lx * s2);
    const double du2_df2 = -sigma * A * s2;
    m.d2[0] = 0.0;
    m.d2[1] = du2_dA;
    m.d2[2] = 0.0;
    m.d2[3] = du2_df2;

    double th1 = sqrt2_23 * x * std::sqrt(x) - 1.5 * rho * rho * lx + f1;
    double dth1_dA = 0.0;
    if (cf.phase_shift) {
        const double I2 = 0.5 * A * A * se;
        th1 += connect::phase_shift_at(I2, eps, x);
        dth1_dA = -two_pi * std::sqrt(eps / (2.0 * x)) * A * se;
    }
    const double c1 = std::cos(th1), s1 = std::sin(th1);
    const double env = std::pow(2.0 * x, -0.25);

    double reg, dreg_dA = 0.0, dreg_df2 = 0.0;
    if (cf.renormalized_regular) {
        const double w = 0.5 * (x - 2.0 * m.u2 * m.u2);
        reg = std::sqrt(w);
        dreg_dA = -m.u2 * du2_dA / reg;
        dreg_df2 = -m.u2 * du2_df2 / reg;
    } else {
        reg = std::sqrt(0.5 * x);
    }

    m.u1 = sigma * (reg + rho * env * c1);
    m.d1[0] = sigma * env * (c1 + 3.0 * rho * rho * lx * s1);
    m.d1[1] = sigma * (dreg_dA - rho * env * s1 * dth1_dA);
    m.d1[2] = -sigma * rho * env * s1;
    m.d1[3] = sigma * dreg_df2;
    return m;
}

struct WindowData {
    std::vector<double> x, u1, u2;
};

double cost_of(const WindowData& w, double sigma, const double p[4], double eps,
               CorrectionFlags cf) {
    double c = 0.0;
    for (std::size_t i = 0; i < w.x.size(); ++i) {
        const ModelEval m = eval_model(w.x[i], sigma, p[0], p[1], p[2], p[3], eps, cf);
        const double r1 = m.u1 - w.u1[i];
        const double r2 = m.u2 - w.u2[i];
        c += r1 * r1 + r2 * r2;
    }
    return c;
}

struct LmResult {
    double p[4] = {0, 0, 0, 0};
    double cost = std::numeric_limits<double>::infinity();
    bool converged = false;
};

LmResult levenberg_marquardt(const WindowData& w, double sigma, const double p0[4], double eps,
                             CorrectionFlags cf) {
    LmResult res;
    double p[4] = {p0[0], p0[1], p0[2], p0[3]};
    double cost = cost_of(w, sigma, p, eps, cf);
    double lambda = 1e-6;
    bool done = false;

    for (int iter = 0; iter < 80 && !done; ++iter) {
        double jtj[4][4] = {};
        double jtr[4] = {};
        for (std::size_t i = 0; i < w.x.size(); ++i) {
            const ModelEval m = eval_model(w.x[i], sigma, p[0], p[1], p[2], p[3], eps, cf);
            const double r1 = m.u1 - w.u1[i];
            const double r2 = m.u2 - w.u2[i];
            for (int a = 0; a < 4; ++a) {
                jtr[a] += m.d1[a] * r1 + m.d2[a] * r2;
                for (int b = a; b < 4; ++b)
                    jtj[a][b] += m.d1[a] * m.d1[b] + m.d2[a] * m.d2[b];
            }
        }
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < a; ++b) jtj[a][b] = jtj[b][a];

        bool stepped = false;
        for (int attempt = 0; attempt < 40; ++attempt) {
            double aug[4][5];
            for (int a = 0; a < 4; ++a) {
                for (int b = 0; b < 4; ++b) aug[a][b] = jtj[a][b];
                aug[a][a] += lambda * std::max(jtj[a][a], 1e-12);
                aug[a][4] = -jtr[a];
            }
            // forward elimination + back substitution
            bool ok = true;
            for (int col = 0; col < 4 && ok; ++col) {
                int piv = col;
                for (int r = col + 1; r < 4; ++r)
                    if (std::abs(aug[r][col]) > std::abs(aug[piv][col])) piv = r;
                if (std::abs(aug[piv][col]) < 1e-300) { ok = false; break; }
                if (piv != col)
                    for (int c = col; c < 5; ++c) std::swap(aug[piv][c], aug[col][c]);
                for (int r = col + 1; r < 4; ++r) {
                    const double f = aug[r][col] / aug[col][col];
                    for (int c = col; c < 5; ++c) aug[r][c] -= f * aug[col][c];
                }
            }
            double delta[4];
            if (ok) {
                for (int r = 3; r >= 0; --r) {
                    double s = aug[r][4];
                    for (int c = r + 1; c < 4; ++c) s -= aug[r][c] * delta[c];
                    delta[r] = s / aug[r][r];
                }
            }
            if (!ok) { lambda *= 10.0; continue; }

            double pn[4];
            for (int a = 0; a < 4; ++a) pn[a] = p[a] + delta[a];
            const double cn = cost_of(w, sigma, pn, eps, cf);
            if (cn < cost) {
                double dn = 0.0;
                for (double d : delta) dn += d * d;
                const double rel = (cost - cn) / std::max(cost, 1e-300);
                std::copy(pn, pn + 4, p);
                const bool tiny = rel < 1e-14 || dn < 1e-28;
                cost = cn;
                lambda = std::max(lambda / 3.0, 1e-14);
                stepped = true;
                if (tiny) { res.converged = true; done = true; }
                break;
            }
            lambda *= 4.0;
            if (lambda > 1e12) break;
        }
        if (!stepped) { res.converged = cost < std::numeric_limits<double>::infinity(); break; }
    }
    std::copy(p, p + 4, res.p);
    res.cost = cost;
    return res;
}

}  // namespace

ModelPoint final_asymptote_model(double x, const FinalAsymptotics& fin,
                                 const EquationParams& params, CorrectionFlags cf) {
    const double eps = params.eps2();
    if (!(x > 0.0)) throw std::domain_error("final_asymptote_model: require x > 0");
    const double rho = fin.rho();
    const double A = fin.amplitude(eps);
    if (cf.renormalized_regular && !(x - 2.0 * A * A > 0.0))
        throw connection_domain_error("final_asymptote_model: x - 2 u2^2 can vanish");

    const double se = std::sqrt(eps);
    const double lx = std::log(x);
    const double sg = fin.sigma;

    const double th2 = se * x - fin.I2 * lx + fin.phi2;
    const double dth2 = se - fin.I2 / x;
    const double u2 = sg * A * std::cos(th2);
    const double du2 = -sg * A * std::sin(th2) * dth2;

    double th1 = sqrt2_23 * x * std::sqrt(x) - 3.0 * fin.I1 * lx + fin.phi1;
    double dth1 = std::sqrt(2.0 * x) - 3.0 * fin.I1 / x;
    if (cf.phase_shift) {
        th1 += connect::phase_shift_at(fin.I2, eps, x);
        dth1 += 3.14159265358979323846 * fin.I2 * std::sqrt(0.5 * eps) * std::pow(x, -1.5);
    }
    double reg, dreg;
    if (cf.renormalized_regular) {
        const double w = 0.5 * (x - 2.0 * u2 * u2);
        reg = std::sqrt(w);
        dreg = (1.0 - 4.0 * u2 * du2) / (4.0 * reg);
    } else {
        reg = std::sqrt(0.5 * x);
        dreg = 0.25 / reg;
    }
    const double env = std::pow(2.0 * x, -0.25);
    const double denv = -0.5 * std::pow(2.0 * x, -1.25);

    ModelPoint out;
    out.u2 = u2;
    out.du2 = du2;
    out.u1 = sg * (reg + rho * env * std::cos(th1));
    out.du1 = sg * (dreg + rho * (denv * std::cos(th1) - env * std::sin(th1) * dth1));
    return out;
}

int estimate_sigma(const Trajectory& traj, double x_lo, double x_hi) {
    double sum = 0.0, asum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double x = traj.x(i);
        if (x < x_lo || x > x_hi) continue;
        sum += traj.u(i, 0);
        asum += std::abs(traj.u(i, 0));
        ++count;
    }
    if (count < 8)
        throw std::invalid_argument("estimate_sigma: window holds fewer than 8 samples");
    if (std::abs(sum) < 0.1 * asum)
        throw ambiguous_sign_error("estimate_sigma: windowed mean below noise floor");
    return sum > 0 ? 1 : -1;
}

FitReport fit_tail(const Trajectory& traj, double x_lo, double x_hi, CorrectionFlags cf) {
    const EquationParams& params = traj.params();
    if (params.n() != 2)
        throw std::invalid_argument("fit_tail: two-mode system only");
    if (!(x_lo < x_hi))
        throw std::invalid_argument("fit_tail: require x_lo < x_hi");
    const double eps = params.eps2();
    const double se = std::sqrt(eps);

    WindowData w;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double x = traj.x(i);
        if (x < x_lo || x > x_hi) continue;
        w.x.push_back(x);
        w.u1.push_back(traj.u(i, 0));
        w.u2.push_back(traj.u(i, 1));
    }
    if (w.x.size() < 64)
        throw std::invalid_argument("fit_tail: window holds fewer than 64 samples");

    const int sigma = estimate_sigma(traj, x_lo, x_hi);

    // amplitude guesses from detrended RMS
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < w.x.size(); ++i) {
        const double d1 = (w.u1[i] - sigma * std::sqrt(0.5 * w.x[i])) * std::pow(2.0 * w.x[i], 0.25);
        s1 += d1 * d1;
        s2 += w.u2[i] * w.u2[i];
    }
    const double rho0 = std::sqrt(2.0 * s1 / w.x.size());
    const double A0 = std::sqrt(2.0 * s2 / w.x.size());

    // matched filter on a 64-point phase grid, per channel
    const auto best_phase = [&](bool first) {
        double best = 0.0, best_corr = -std::numeric_limits<double>::infinity();
        for (int g = 0; g < 64; ++g) {
            const double f = g * two_pi / 64.0;
            double corr = 0.0;
            for (std::size_t i = 0; i < w.x.size(); ++i) {
                const double x = w.x[i], lx = std::log(x);
                if (first) {
                    const double th = sqrt2_23 * x * std::sqrt(x) - 1.5 * rho0 * rho0 * lx + f;
                    const double d = (w.u1[i] - sigma * std::sqrt(0.5 * x)) * sigma;
                    corr += d * std::pow(2.0 * x, 0.25) * std::cos(th);
                } else {
                    const double th = se * x - 0.5 * A0 * A0 * se * lx + f;
                    corr += w.u2[i] * sigma * std::cos(th);
                }
            }
            if (corr > best_corr) { best_corr = corr; best = f; }
        }
        return best;
    };
    const double f1g = best_phase(true);
    const double f2g = best_phase(false);

    // restarts from 8 phase-grid corners around the matched-filter guess
    constexpr double half_pi = 1.5707963267948966;
    const std::array<std::array<double, 2>, 8> corners = {{{0.0, 0.0},
                                                           {3.14159265358979324, 0.0},
                                                           {0.0, 3.14159265358979324},
                                                           {3.14159265358979324, 3.14159265358979324},
                                                           {half_pi, half_pi},
                                                           {-half_pi, half_pi},
                                                           {half_pi, -half_pi},
                                                           {-half_pi, -half_pi}}};
    LmResult best;
    for (const auto& c : corners) {
        const double p0[4] = {rho0, A0, f1g + c[0], f2g + c[1]};
        const LmResult r = levenberg_marquardt(w, sigma, p0, eps, cf);
        if (r.cost < best.cost) best = r;
        if (best.cost / (2.0 * w.x.size()) < 1e-22) break;  // noiseless round-trip
    }

    FitReport rep;
    rep.x_lo = x_lo;
    rep.x_hi = x_hi;
    rep.corrections = cf;
    double rho = best.p[0], A = best.p[1], f1 = best.p[2], f2 = best.p[3];
    if (rho < 0) { rho = -rho; f1 += 3.14159265358979324; }
    if (A < 0) { A = -A; f2 += 3.14159265358979324; }
    rep.final = FinalAsymptotics::from_amplitudes(sigma, rho, A, f1, f2, eps);
    rep.rms_residual = std::sqrt(best.cost / (2.0 * w.x.size()));

    if (!std::isfinite(rep.rms_residual) || !best.converged)
        throw fit_error("fit_tail: minimizer failed to converge", rep);
    return rep;
}

FitReport fit_tail(const Trajectory& traj, CorrectionFlags cf) {
    if (traj.size() < 2) throw std::invalid_argument("fit_tail: empty trajectory");
    const double x0 = traj.x(0), x1 = traj.x(traj.size() - 1);
    const double eps = traj.params().eps2();
    const double lo = std::max(x0 + 0.8 * (x1 - x0), std::max(50.0, 10.0 * eps));
    if (!(lo < x1))
        throw std::invalid_argument("fit_tail: default window is empty for this trajectory");
    return fit_tail(traj, lo, x1, cf);
}

}  // namespace painleve::fit
