#include "painleve/lax.hpp"

#include <algorithm>
#include <cmath>

#include "painleve/ode.hpp"

namespace painleve::lax {

double CMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const cplx& v : a_) s += std::norm(v);
    return std::sqrt(s);
}

double CMatrix::max_abs_entry() const {
    double m = 0.0;
    for (const cplx& v : a_) m = std::max(m, std::abs(v));
    return m;
}

double CMatrix::hermiticity_defect() const {
    double m = 0.0;
    for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j)
            m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return m;
}

CMatrix CMatrix::operator-(const CMatrix& o) const {
    CMatrix r(dim_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
    return r;
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) {
    const int n = a.dim();
    CMatrix r(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cplx s = 0.0;
            for (int l = 0; l < n; ++l) s += a(i, l) * b(l, j) - b(i, l) * a(l, j);
            r(i, j) = s;
        }
    return r;
}

namespace {

void check_sizes(const std::vector<double>& u, const std::vector<double>& du,
                 const EquationParams& params, const char* who) {
    if (static_cast<int>(u.size()) != params.n() || du.size() != u.size())
        throw std::invalid_argument(std::string(who) + ": u/du size must equal params.n()");
}

}  // namespace

LaxPair build_lax_pair(double t, double x, const std::vector<double>& u,
                       const std::vector<double>& du, const EquationParams& params) {
    check_sizes(u, du, params, "build_lax_pair");
    const int n = params.n();
    double su2 = 0.0;
    for (double v : u) su2 += v * v;

    LaxPair lp{CMatrix(n + 1), CMatrix(n + 1)};
    lp.H(0, 0) = 4.0 * t * t + x - 2.0 * su2;
    lp.H1(0, 0) = t;
    for (int k = 1; k <= n; ++k) {
        const double uk = u[k - 1], duk = du[k - 1];
        lp.H(k, k) = -(4.0 * t * t + x - 2.0 * params.eps(k - 1)) + 2.0 * uk * uk;
        lp.H(0, k) = cplx(-4.0 * t * uk, -2.0 * duk);
        lp.H(k, 0) = std::conj(lp.H(0, k));
        for (int j = 1; j <= n; ++j)
            if (j != k) lp.H(j, k) = 2.0 * u[j - 1] * uk;
        lp.H1(k, k) = -t;
        lp.H1(0, k) = -uk;
        lp.H1(k, 0) = -uk;
    }
    return lp;
}

CurvatureResidual zero_curvature_residual_with(double t, double x, const std::vector<double>& u,
                                               const std::vector<double>& du,
                                               const std::vector<double>& ddu,
                                               const EquationParams& params) {
    check_sizes(u, du, params, "zero_curvature_residual");
    if (ddu.size() != u.size())
        throw std::invalid_argument("zero_curvature_residual: ddu size mismatch");
    const int n = params.n();
    const LaxPair lp = build_lax_pair(t, x, u, du, params);

    // dH/dx: explicit x-dependence of A plus chain-rule terms through u (du)
    // and through u' (ddu); dH1/dt = diag(1, -1, ..., -1).
    CMatrix dHdx(n + 1);
    double sud = 0.0;
    for (int k = 0; k < n; ++k) sud += u[k] * du[k];
    dHdx(0, 0) = 1.0 - 4.0 * sud;
    for (int k = 1; k <= n; ++k) {
        dHdx(k, k) = -1.0 + 4.0 * u[k - 1] * du[k - 1];
        dHdx(0, k) = cplx(-4.0 * t * du[k - 1], -2.0 * ddu[k - 1]);
        dHdx(k, 0) = std::conj(dHdx(0, k));
        for (int j = 1; j <= n; ++j)
            if (j != k) dHdx(j, k) = 2.0 * (du[j - 1] * u[k - 1] + u[j - 1] * du[k - 1]);
    }

    CMatrix res = dHdx;
    res(0, 0) -= 1.0;
    for (int k = 1; k <= n; ++k) res(k, k) -= -1.0;

    const CMatrix comm = commutator(lp.H, lp.H1);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
            res(i, j) -= cplx(0.0, 1.0) * comm(i, j);

    CurvatureResidual out;
    out.frobenius_norm = res.frobenius_norm();
    out.max_entry = res.max_abs_entry();
    out.t = t;
    out.x = x;
    return out;
}

CurvatureResidual zero_curvature_residual(double t, double x, const std::vector<double>& u,
                                          const std::vector<double>& du,
                                          const EquationParams& params) {
    check_sizes(u, du, params, "zero_curvature_residual");
    const int n = params.n();
    std::vector<double> y(2 * n), dy(2 * n), ddu(n);
    for (int k = 0; k < n; ++k) { y[k] = u[k]; y[n + k] = du[k]; }
    ode::derivative(x, y.data(), dy.data(), params);
    for (int k = 0; k < n; ++k) ddu[k] = dy[n + k];
    return zero_curvature_residual_with(t, x, u, du, ddu, params);
}

std::vector<double> spectrum(const CMatrix& h, double shift) {
    const int n = h.dim();
    const double scale = std::max(1.0, h.max_abs_entry());
    if (h.hermiticity_defect() > 1e-10 * scale)
        throw std::invalid_argument("spectrum: matrix is not Hermitian");

    CMatrix a = h;
    for (int i = 0; i < n; ++i) {
        a(i, i) = cplx(a(i, i).real() + shift, 0.0);
        for (int j = i + 1; j < n; ++j) {
            // symmetrize rounding so the sweeps see an exactly Hermitian matrix
            const cplx v = 0.5 * (a(i, j) + std::conj(a(j, i)));
            a(i, j) = v;
            a(j, i) = std::conj(v);
        }
    }

    // cyclic-by-row complex Jacobi sweeps
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += std::norm(a(i, j));
        if (std::sqrt(off) <= 1e-15 * scale * n) break;

        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                if (std::abs(apq) <= 1e-18 * scale) continue;
                // phase that makes the pivot real, then a real rotation
                const cplx phase = apq / std::abs(apq);
                const double app = a(p, p).real(), aqq = a(q, q).real();
                const double theta = 0.5 * std::atan2(2.0 * std::abs(apq), app - aqq);
                const double c = std::cos(theta), s = std::sin(theta);
                const cplx sp = s * phase;

                for (int i = 0; i < n; ++i) {
                    const cplx aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip + std::conj(sp) * aiq;
                    a(i, q) = -sp * aip + c * aiq;
                }
                for (int i = 0; i < n; ++i) {
                    const cplx api = a(p, i), aqi = a(q, i);
                    a(p, i) = c * api + sp * aqi;
                    a(q, i) = -std::conj(sp) * api + c * aqi;
                }
            }
    }

    std::vector<double> ev(n);
    for (int i = 0; i < n; ++i) ev[i] = a(i, i).real();
    std::sort(ev.begin(), ev.end());
    return ev;
}

CMatrix build_dom_hamiltonian(DomSide side, double tau_local, double x,
                              const std::vector<double>& u, const std::vector<double>& du,
                              const EquationParams& params) {
    check_sizes(u, du, params, "build_dom_hamiltonian");
    if (params.n() != 2)
        throw std::invalid_argument("build_dom_hamiltonian: two-mode system only");
    if (!(x < 0.0))
        throw std::domain_error("build_dom_hamiltonian: local crossing models require x < 0");

    const double ax = -x;
    const double slope = 4.0 * ax * std::sqrt(ax) * tau_local;
    const double offset = 2.0 * std::sqrt(ax) * params.eps2();
    const double sgn = side == DomSide::plus ? 1.0 : -1.0;

    CMatrix h(3);
    h(0, 0) = sgn * slope;
    h(1, 1) = -sgn * slope;
    h(2, 2) = -sgn * slope + offset;
    for (int k = 0; k < 2; ++k) {
        const cplx g = side == DomSide::plus
                           ? cplx(-2.0 * ax * u[k], -2.0 * std::sqrt(ax) * du[k])
                           : cplx(2.0 * ax * u[k], -2.0 * std::sqrt(ax) * du[k]);
        h(0, k + 1) = g;
        h(k + 1, 0) = std::conj(g);
    }
    return h;
}

}  // namespace painleve::lax
