#include "painleve/connect.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include "painleve/rng.hpp"
#include "painleve/specfun.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace painleve::connect {

namespace {

constexpr double pi = 3.14159265358979323846;
constexpr double ln2 = 0.69314718055994530942;

double arg_gamma_or_limit(double y) {
    return y > 0.0 ? specfun::arg_gamma_imag(y) : specfun::arg_gamma_imag_zero_limit;
}

struct ActionPair {
    double D;
    double I1;
    double I2;
    std::complex<double> T;
    double sin_Phi1;
};

// Shared evaluation of D, I1, I2 for given (p, Phi); throws on the singular
// and out-of-domain configurations.
ActionPair action_pair(double p1, double p2, double Phi1, double Phi2) {
    ActionPair r;
    r.sin_Phi1 = std::sin(Phi1);
    if (std::abs(r.sin_Phi1) < separatrix_tol)
        throw separatrix_error("connect: sin Phi_1 vanishes (separatrix hit, I2 diverges)");
    const std::complex<double> e1 = std::polar(1.0, 2.0 * Phi1);
    const std::complex<double> e2 = std::polar(1.0, 2.0 * Phi2);
    r.T = 1.0 + (1.0 - p1) / p1 * e1 + (1.0 - p2) / (p1 * p2) * e2;
    r.D = 1.0 - p1 * p1 * p2 * p2 * std::norm(r.T);
    if (!(r.D > 0.0))
        throw connection_domain_error("connect: log argument D is not positive");
    r.I1 = -std::log(r.D) / (4.0 * pi);
    const double g = 2.0 * std::sqrt(p2 * p1 * (1.0 - p1)) * std::abs(r.sin_Phi1);
    r.I2 = -std::log(g) / pi - 2.0 * r.I1;
    return r;
}

}  // namespace

TransitionConstants transition_constants(const InitialAsymptotics& init,
                                         const EquationParams& params) {
    if (params.n() != 2 || init.n() != 2)
        throw std::invalid_argument("transition_constants: two-mode system only");
    const double eps = params.eps2();
    if (!(eps > 0.0))
        throw std::domain_error("transition_constants: require eps > 0");

    const double a1 = init.alpha(0), a2 = init.alpha(1);
    const double le = std::log(eps / 4.0);
    TransitionConstants tc;
    tc.p1 = std::exp(-pi * a1 * a1);
    tc.p2 = std::exp(-pi * a2 * a2);
    tc.Phi1 = pi / 4.0 + arg_gamma_or_limit(0.5 * a1 * a1) + init.phi(0) -
              1.5 * a1 * a1 * ln2 + 0.5 * a2 * a2 * le;
    tc.Phi2 = pi / 4.0 + arg_gamma_or_limit(0.5 * a2 * a2) + init.phi(1) -
              1.5 * a2 * a2 * ln2 + 0.5 * a1 * a1 * le;
    return tc;
}

FinalAsymptotics connect_forward(const InitialAsymptotics& init, const EquationParams& params) {
    const TransitionConstants tc = transition_constants(init, params);
    const double eps = params.eps2();

    FinalAsymptotics fin;
    if (init.alpha(0) == 0.0) {
        // Phi_1 then hinges on the phase of a zero-amplitude mode and the I2
        // logarithm degenerates; flag instead of guessing.
        fin.sigma_ambiguous = true;
        const double s = std::sin(tc.Phi1);
        fin.sigma = s >= 0 ? 1 : -1;
        const std::complex<double> e2 = std::polar(1.0, 2.0 * tc.Phi2);
        const double q2 = (1.0 - tc.p2) / tc.p2;
        const double D = 1.0 - tc.p2 * tc.p2 * std::norm(1.0 + q2 * e2);
        if (!(D > 0.0))
            throw connection_domain_error("connect: log argument D is not positive");
        fin.I1 = -std::log(D) / (4.0 * pi);
        fin.phi1 = wrap_angle(-0.75 * pi - fin.I1 * 7.0 * ln2 +
                              arg_gamma_or_limit(2.0 * fin.I1) -
                              std::arg(1.0 + q2 * e2));
        fin.I2 = std::numeric_limits<double>::infinity();
        fin.phi2 = 0.0;
        return fin;
    }

    const ActionPair ap = action_pair(tc.p1, tc.p2, tc.Phi1, tc.Phi2);
    fin.sigma = ap.sin_Phi1 > 0 ? 1 : -1;
    fin.I1 = ap.I1;
    fin.I2 = ap.I2;
    fin.phi1 = wrap_angle(-0.75 * pi - fin.I1 * 7.0 * ln2 + arg_gamma_or_limit(2.0 * fin.I1) -
                          std::arg(ap.T));
    const std::complex<double> bracket =
        std::polar(1.0, tc.Phi2) -
        std::polar(1.0, -tc.Phi2) *
            (tc.p1 + (1.0 - tc.p1) * std::polar(1.0, 2.0 * tc.Phi1));
    fin.phi2 = wrap_angle(0.75 * pi - (2.0 / 3.0) * eps * std::sqrt(eps) -
                          fin.I2 * std::log(4.0 * std::sqrt(eps)) +
                          arg_gamma_or_limit(fin.I2) -
                          std::arg(static_cast<double>(fin.sigma) * bracket));
    return fin;
}

ScalarConnection connect_forward_scalar(double alpha1, double phi1) {
    if (!(alpha1 > 0.0) || !std::isfinite(alpha1))
        throw std::domain_error("connect_forward_scalar: require alpha1 > 0");
    const double p1 = std::exp(-pi * alpha1 * alpha1);
    const double Phi1 = pi / 4.0 + arg_gamma_or_limit(0.5 * alpha1 * alpha1) + phi1 -
                        1.5 * alpha1 * alpha1 * ln2;
    const double s = std::sin(Phi1);
    if (std::abs(s) < separatrix_tol)
        throw separatrix_error("connect_forward_scalar: sin Phi_1 vanishes");

    ScalarConnection out;
    out.sigma = s > 0 ? 1 : -1;
    out.I1 = -std::log(4.0 * p1 * (1.0 - p1) * s * s) / (4.0 * pi);
    const std::complex<double> T = 1.0 + (1.0 - p1) / p1 * std::polar(1.0, 2.0 * Phi1);
    out.phi1 = wrap_angle(-0.75 * pi - out.I1 * 7.0 * ln2 + arg_gamma_or_limit(2.0 * out.I1) -
                          std::arg(T));
    return out;
}

CorrectionRecipe apply_corrections(const FinalAsymptotics& fin, const EquationParams& params,
                                   double x) {
    const double eps = params.eps2();
    if (!(eps > 0.0)) throw std::domain_error("apply_corrections: require eps > 0");
    if (!(x > 0.0)) throw std::domain_error("apply_corrections: require x > 0");
    const double A = fin.amplitude(eps);
    if (!(x - 2.0 * A * A > 0.0))
        throw connection_domain_error("apply_corrections: x - 2 u2^2 can vanish in the window");
    CorrectionRecipe r;
    r.renormalized_regular = true;
    r.phase_shift = phase_shift_at(fin.I2, eps, x);
    return r;
}

namespace {

double c1_row_sum(int m, int i, const std::vector<double>& cos2) {
    // compensated row sum of ln(4 - 2cos(2F_i) - 2cos(2F_j)); the grouped form
    // keeps the integrand exactly symmetric under i <-> j
    const double ci = cos2[i];
    double sum = 0.0, comp = 0.0;
    for (int j = 0; j < m; ++j) {
        const double v = std::log(4.0 - 2.0 * (ci + cos2[j]));
        const double t = sum + v;
        comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    return sum + comp;
}

double c1_reduce(int m, const std::vector<double>& rows) {
    double sum = 0.0, comp = 0.0;
    for (int i = 0; i < m; ++i) {
        const double t = sum + rows[i];
        comp += std::abs(sum) >= std::abs(rows[i]) ? (sum - t) + rows[i] : (rows[i] - t) + sum;
        sum = t;
    }
    return (sum + comp) / (static_cast<double>(m) * m);
}

std::vector<double> c1_nodes(int m) {
    std::vector<double> cos2(m);
    for (int i = 0; i < m; ++i) {
        const double F = (i + 0.5) * pi / m;
        cos2[i] = std::cos(2.0 * F);
    }
    return cos2;
}

}  // namespace

double spanning_tree_constant_c1(int m) {
    if (m < 8) throw std::invalid_argument("spanning_tree_constant_c1: need >= 8 points per axis");
    const std::vector<double> cos2 = c1_nodes(m);
    std::vector<double> rows(m);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < m; ++i) rows[i] = c1_row_sum(m, i, cos2);
    return c1_reduce(m, rows);
}

double spanning_tree_constant_c1_serial(int m) {
    if (m < 8) throw std::invalid_argument("spanning_tree_constant_c1: need >= 8 points per axis");
    const std::vector<double> cos2 = c1_nodes(m);
    std::vector<double> rows(m);
    for (int i = 0; i < m; ++i) rows[i] = c1_row_sum(m, i, cos2);
    return c1_reduce(m, rows);
}

namespace {

struct ChunkSums {
    double s1 = 0, c1 = 0;      // sum of I1 with compensation
    double s2 = 0, c2 = 0;      // sum of I2
    double q1 = 0, q2 = 0;      // sums of squares
    long long used = 0, singular = 0;

    void add(double I1, double I2) {
        double t = s1 + I1;
        c1 += std::abs(s1) >= std::abs(I1) ? (s1 - t) + I1 : (I1 - t) + s1;
        s1 = t;
        t = s2 + I2;
        c2 += std::abs(s2) >= std::abs(I2) ? (s2 - t) + I2 : (I2 - t) + s2;
        s2 = t;
        q1 += I1 * I1;
        q2 += I2 * I2;
        ++used;
    }
};

constexpr long long mc_chunk = 8192;

// The averaged actions depend on (Phi1, Phi2) only; uniform initial phases
// make the Phi's uniform mod 2pi, so sampling (or gridding) them directly is
// exact.
void mc_chunk_eval(long long begin, long long end, std::uint64_t seed, double p, ChunkSums& out) {
    for (long long i = begin; i < end; ++i) {
        const auto uv = rng::uniform_pair(seed, static_cast<std::uint64_t>(i));
        const double F1 = two_pi * uv[0];
        const double F2 = two_pi * uv[1];
        try {
            const ActionPair ap = action_pair(p, p, F1, F2);
            out.add(ap.I1, ap.I2);
        } catch (const std::runtime_error&) {
            ++out.singular;
        }
    }
}

AverageReport reduce_chunks(const std::vector<ChunkSums>& chunks, AverageMethod method) {
    ChunkSums tot;
    double q1 = 0, q2 = 0;
    for (const ChunkSums& c : chunks) {
        tot.s1 += c.s1 + c.c1;
        tot.s2 += c.s2 + c.c2;
        q1 += c.q1;
        q2 += c.q2;
        tot.used += c.used;
        tot.singular += c.singular;
    }
    if (tot.used == 0)
        throw std::runtime_error("averaged_actions: every sample was singular");
    AverageReport rep;
    rep.method = method;
    rep.n_samples = tot.used;
    rep.n_singular = tot.singular;
    rep.mean_I1 = tot.s1 / tot.used;
    rep.mean_I2 = tot.s2 / tot.used;
    if (tot.used > 1) {
        const double v1 = std::max(0.0, q1 / tot.used - rep.mean_I1 * rep.mean_I1);
        const double v2 = std::max(0.0, q2 / tot.used - rep.mean_I2 * rep.mean_I2);
        rep.std_err_I1 = std::sqrt(v1 / (tot.used - 1));
        rep.std_err_I2 = std::sqrt(v2 / (tot.used - 1));
    }
    return rep;
}

AverageReport quad_actions(double p, long long n_samples, bool parallel) {
    const int m = std::max(8, static_cast<int>(std::sqrt(static_cast<double>(n_samples))));
    const auto value = [&](int res) {
        std::vector<ChunkSums> rows(res);
#pragma omp parallel for schedule(static) if (parallel)
        for (int i = 0; i < res; ++i) {
            const double F1 = (i + 0.5) * two_pi / res;
            for (int j = 0; j < res; ++j) {
                const double F2 = (j + 0.5) * two_pi / res;
                try {
                    const ActionPair ap = action_pair(p, p, F1, F2);
                    rows[i].add(ap.I1, ap.I2);
                } catch (const std::runtime_error&) {
                    ++rows[i].singular;
                }
            }
        }
        return reduce_chunks(rows, AverageMethod::tensor_quadrature);
    };
    AverageReport fine = value(m);
    AverageReport coarse = value(m / 2);
    fine.std_err_I1 = std::abs(fine.mean_I1 - coarse.mean_I1);
    fine.std_err_I2 = std::abs(fine.mean_I2 - coarse.mean_I2);
    return fine;
}

AverageReport mc_actions(double p, long long n_samples, std::uint64_t seed, bool parallel) {
    const long long n_chunks = (n_samples + mc_chunk - 1) / mc_chunk;
    std::vector<ChunkSums> chunks(static_cast<std::size_t>(n_chunks));
#pragma omp parallel for schedule(dynamic, 4) if (parallel)
    for (long long c = 0; c < n_chunks; ++c) {
        const long long b = c * mc_chunk;
        mc_chunk_eval(b, std::min(b + mc_chunk, n_samples), seed, p,
                      chunks[static_cast<std::size_t>(c)]);
    }
    return reduce_chunks(chunks, AverageMethod::monte_carlo);
}

AverageReport averaged_actions_impl(double action, const EquationParams& params,
                                    AverageMethod method, long long n_samples,
                                    std::uint64_t seed, bool parallel) {
    if (!(action > 0.0))
        throw std::domain_error("averaged_actions: require action > 0");
    if (params.n() != 2 || !(params.eps2() > 0.0))
        throw std::domain_error("averaged_actions: two-mode system with eps > 0");
    if (n_samples < 1)
        throw std::invalid_argument("averaged_actions: need at least one sample");
    // alpha_1 = alpha_2 = sqrt(2*action); the Phi offsets drop out of a
    // phase-uniform average.
    const double p = std::exp(-two_pi * action);
    if (method == AverageMethod::tensor_quadrature) return quad_actions(p, n_samples, parallel);
    return mc_actions(p, n_samples, seed, parallel);
}

}  // namespace

AverageReport averaged_actions(double action, const EquationParams& params, AverageMethod method,
                               long long n_samples, std::uint64_t seed) {
    return averaged_actions_impl(action, params, method, n_samples, seed, true);
}

AverageReport averaged_actions_serial(double action, const EquationParams& params,
                                      AverageMethod method, long long n_samples,
                                      std::uint64_t seed) {
    return averaged_actions_impl(action, params, method, n_samples, seed, false);
}

}  // namespace painleve::connect
