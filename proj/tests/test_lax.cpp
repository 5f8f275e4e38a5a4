#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "painleve/fit.hpp"
#include "painleve/lax.hpp"
#include "painleve/ode.hpp"
#include "painleve/rng.hpp"

using namespace painleve;
using lax::CMatrix;

namespace {

struct RandomPoint {
    double t, x;
    std::vector<double> u, du;
};

RandomPoint random_point(std::uint64_t seed, std::uint64_t i, int n) {
    RandomPoint p;
    const auto a = rng::uniform_pair(seed, 3 * i);
    const auto b = rng::uniform_pair(seed, 3 * i + 1);
    p.t = -3.0 + 6.0 * a[0];
    p.x = -10.0 + 20.0 * a[1];
    for (int k = 0; k < n; ++k) {
        const auto c = rng::uniform_pair(seed, 3 * i + 2 + 1000 * static_cast<std::uint64_t>(k));
        p.u.push_back(-2.0 + 4.0 * c[0]);
        p.du.push_back(-2.0 + 4.0 * c[1]);
    }
    (void)b;
    return p;
}

}  // namespace

TEST_CASE("decoupled diagonal case") {
    const EquationParams params = EquationParams::two_mode(1.0);
    const lax::LaxPair lp = lax::build_lax_pair(1.0, 2.0, {0.0, 0.0}, {0.0, 0.0}, params);
    CHECK(lp.H(0, 0) == lax::cplx(6.0));
    CHECK(lp.H(1, 1) == lax::cplx(-6.0));
    CHECK(lp.H(2, 2) == lax::cplx(-4.0));
    CHECK(lp.H(0, 1) == lax::cplx(0.0));
    CHECK(lp.H1(0, 0) == lax::cplx(1.0));
    CHECK(lp.H1(1, 1) == lax::cplx(-1.0));
    CHECK(lp.H1(2, 2) == lax::cplx(-1.0));

    const std::vector<double> ev = lax::spectrum(lp.H);
    CHECK(ev[0] == doctest::Approx(-6.0).epsilon(1e-14));
    CHECK(ev[1] == doctest::Approx(-4.0).epsilon(1e-14));
    CHECK(ev[2] == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("construction is exactly Hermitian; trace identities hold") {
    const EquationParams params = EquationParams::two_mode(1.7);
    for (int i = 0; i < 200; ++i) {
        const RandomPoint p = random_point(31, static_cast<std::uint64_t>(i), 2);
        const lax::LaxPair lp = lax::build_lax_pair(p.t, p.x, p.u, p.du, params);
        CHECK(lp.H.hermiticity_defect() == 0.0);
        CHECK(lp.H1.hermiticity_defect() == 0.0);

        // tr H1 = (1 - n) t exactly; tr H = tr A (B and C are traceless)
        CHECK(lp.H1(0, 0).real() + lp.H1(1, 1).real() + lp.H1(2, 2).real() ==
              doctest::Approx(-p.t).epsilon(1e-15));
        const double su2 = p.u[0] * p.u[0] + p.u[1] * p.u[1];
        const double trA = (4 * p.t * p.t + p.x - 2 * su2) +
                           (-(4 * p.t * p.t + p.x - 0.0) + 2 * p.u[0] * p.u[0]) +
                           (-(4 * p.t * p.t + p.x - 2 * 1.7) + 2 * p.u[1] * p.u[1]);
        const double trH = lp.H(0, 0).real() + lp.H(1, 1).real() + lp.H(2, 2).real();
        CHECK(trH == doctest::Approx(trA).epsilon(1e-14));
    }
}

TEST_CASE("zero-curvature identity at machine precision (n = 1, 2, 3)") {
    const EquationParams p1({0.0});
    const EquationParams p2 = EquationParams::two_mode(1.3);
    const EquationParams p3({0.0, 0.9, 2.4});
    for (int i = 0; i < 600; ++i) {
        for (const EquationParams* params : {&p1, &p2, &p3}) {
            const RandomPoint p =
                random_point(55 + params->n(), static_cast<std::uint64_t>(i), params->n());
            const lax::CurvatureResidual r =
                lax::zero_curvature_residual(p.t, p.x, p.u, p.du, *params);
            CHECK(r.frobenius_norm < 1e-12);
        }
    }
}

TEST_CASE("the curvature check is not vacuous: residual grows linearly in defects") {
    const EquationParams params = EquationParams::two_mode(1.0);
    const RandomPoint p = random_point(77, 3, 2);
    std::vector<double> y(4), dy(4);
    y = {p.u[0], p.u[1], p.du[0], p.du[1]};
    ode::derivative(p.x, y.data(), dy.data(), params);
    std::vector<double> ddu = {dy[2], dy[3]};

    double prev_ratio = 0.0;
    for (const double delta : {1e-6, 1e-5, 1e-4, 1e-3, 1e-2}) {
        std::vector<double> bad = ddu;
        bad[0] += delta;
        const lax::CurvatureResidual r =
            lax::zero_curvature_residual_with(p.t, p.x, p.u, p.du, bad, params);
        const double ratio = r.frobenius_norm / delta;
        if (prev_ratio != 0.0) CHECK(ratio == doctest::Approx(prev_ratio).epsilon(1e-6));
        prev_ratio = ratio;
    }
    CHECK(prev_ratio > 1.0);
}

TEST_CASE("residuals along an integrated trajectory stay at solver accuracy") {
    const EquationParams params = EquationParams::two_mode(1.0);
    const InitialAsymptotics init(0.9, 0.8, 1.5707963267948966, 1.0471975511965976);
    const TrajectoryState s0 = ode::seed_initial_state(init, params, -150.0);
    const Trajectory traj = ode::integrate(s0, -150.0, 150.0, params);
    for (long long i = 0; i < 100; ++i) {
        const auto u = rng::uniform_pair(4, static_cast<std::uint64_t>(i));
        const double t = -3.0 + 6.0 * u[0];
        const std::size_t idx =
            std::min(traj.size() - 1, static_cast<std::size_t>(u[1] * traj.size()));
        const TrajectoryState s = traj.state(idx);
        const lax::CurvatureResidual r =
            lax::zero_curvature_residual(t, s.x, s.u, s.du, params);
        CHECK(r.frobenius_norm < 1e3 * traj.rel_tol());
    }
}

TEST_CASE("spectrum: embedded two-level block and identity shift") {
    CMatrix h(3);
    h(0, 1) = lax::cplx(2.0);
    h(1, 0) = lax::cplx(2.0);
    h(2, 2) = lax::cplx(5.0);
    const std::vector<double> ev = lax::spectrum(h);
    CHECK(ev[0] == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(ev[1] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(ev[2] == doctest::Approx(5.0).epsilon(1e-14));

    const std::vector<double> shifted = lax::spectrum(h, 10.0);
    CHECK(shifted[0] == doctest::Approx(8.0).epsilon(1e-13));

    CMatrix bad(2);
    bad(0, 1) = lax::cplx(1.0, 0.0);
    bad(1, 0) = lax::cplx(0.5, 0.0);
    CHECK_THROWS_AS(lax::spectrum(bad), std::invalid_argument);
}

TEST_CASE("spectrum agrees with an external dense eigensolver reference") {
    // inputs from the x -> +inf model (sigma=-1, rho=0.12, A=0.2, eps=1.2, x=10)
    const EquationParams params = EquationParams::two_mode(1.2);
    const std::vector<double> u = {-2.2314978312374598, 0.018288466366494165};
    const std::vector<double> du = {-0.3647402058265809, -0.21773477957946291};
    const lax::LaxPair lp = lax::build_lax_pair(1.0, 10.0, u, du, params);
    const std::vector<double> ev = lax::spectrum(lp.H);
    CHECK(std::abs(ev[0] - (-11.638673059409143)) < 1e-10);
    CHECK(std::abs(ev[1] - (-9.7926594426947027)) < 1e-10);
    CHECK(std::abs(ev[2] - 9.8313325021038462) < 1e-10);
}

TEST_CASE("random Hermitian matrices: eigenvalues match the characteristic polynomial") {
    // trace and determinant cross-checks on 3x3 cases
    for (int i = 0; i < 100; ++i) {
        const auto a = rng::uniform_pair(8, 3 * static_cast<std::uint64_t>(i));
        const auto b = rng::uniform_pair(8, 3 * static_cast<std::uint64_t>(i) + 1);
        const auto c = rng::uniform_pair(8, 3 * static_cast<std::uint64_t>(i) + 2);
        CMatrix h(3);
        h(0, 0) = 2 * a[0] - 1;
        h(1, 1) = 2 * a[1] - 1;
        h(2, 2) = 2 * b[0] - 1;
        h(0, 1) = lax::cplx(b[1], c[0]);
        h(1, 0) = std::conj(h(0, 1));
        h(0, 2) = lax::cplx(c[1], -a[0]);
        h(2, 0) = std::conj(h(0, 2));
        h(1, 2) = lax::cplx(0.3, 0.7);
        h(2, 1) = std::conj(h(1, 2));
        const std::vector<double> ev = lax::spectrum(h);
        const double tr = h(0, 0).real() + h(1, 1).real() + h(2, 2).real();
        CHECK(ev[0] + ev[1] + ev[2] == doctest::Approx(tr).epsilon(1e-12));
        // det via cofactor expansion
        const lax::cplx det =
            h(0, 0) * (h(1, 1) * h(2, 2) - h(1, 2) * h(2, 1)) -
            h(0, 1) * (h(1, 0) * h(2, 2) - h(1, 2) * h(2, 0)) +
            h(0, 2) * (h(1, 0) * h(2, 1) - h(1, 1) * h(2, 0));
        CHECK(ev[0] * ev[1] * ev[2] == doctest::Approx(det.real()).epsilon(1e-10));
        CHECK(std::abs(det.imag()) < 1e-12);
        CHECK(ev[0] <= ev[1]);
        CHECK(ev[1] <= ev[2]);
    }
}

TEST_CASE("eigenvalue flow is continuous along a spectral-parameter scan") {
    const EquationParams params = EquationParams::two_mode(1.0);
    const InitialAsymptotics init(0.1, 0.1, 1.0471975511965976, 2.3561944901923449);
    const TrajectoryState s = ode::seed_initial_state(init, params, -16.0);

    std::vector<double> prev;
    const double dt = 1e-3;
    for (int i = 0; i <= 400; ++i) {
        const double t = -2.2 + i * dt;
        const std::vector<double> ev =
            lax::spectrum(lax::build_lax_pair(t, -16.0, s.u, s.du, params).H);
        if (!prev.empty()) {
            // Lipschitz bound: |dH/dt| <= 8|t|(max diag) + 4|B|
            CMatrix dh(3);
            dh(0, 0) = 8.0 * t;
            dh(1, 1) = -8.0 * t;
            dh(2, 2) = -8.0 * t;
            dh(0, 1) = -4.0 * s.u[0];
            dh(1, 0) = -4.0 * s.u[0];
            dh(0, 2) = -4.0 * s.u[1];
            dh(2, 0) = -4.0 * s.u[1];
            const double lip = dh.frobenius_norm() * dt * 1.01 + 1e-10;
            for (int k = 0; k < 3; ++k) CHECK(std::abs(ev[k] - prev[k]) <= lip);
        }
        prev = ev;
    }
}

TEST_CASE("resonance pattern of the incoming-side flow sits near t = +-sqrt(|x|)/2") {
    const EquationParams params = EquationParams::two_mode(1.0);
    const InitialAsymptotics init(0.1, 0.1, 1.0471975511965976, 2.3561944901923449);
    const TrajectoryState s = ode::seed_initial_state(init, params, -16.0);

    // locate local minima of the adjacent gaps over a t scan
    std::vector<double> ts, g01, g12;
    for (int i = 0; i <= 1600; ++i) {
        const double t = -4.0 + 8.0 * i / 1600.0;
        const std::vector<double> ev =
            lax::spectrum(lax::build_lax_pair(t, -16.0, s.u, s.du, params).H);
        ts.push_back(t);
        g01.push_back(ev[1] - ev[0]);
        g12.push_back(ev[2] - ev[1]);
    }
    const auto minima = [&](const std::vector<double>& g) {
        std::vector<double> out;
        for (std::size_t i = 1; i + 1 < g.size(); ++i)
            if (g[i] < g[i - 1] && g[i] < g[i + 1]) out.push_back(ts[i]);
        return out;
    };
    for (const auto& mins : {minima(g01), minima(g12)}) {
        REQUIRE(mins.size() == 2);
        CHECK(std::abs(std::abs(mins[0]) - 2.0) < 0.3);
        CHECK(std::abs(std::abs(mins[1]) - 2.0) < 0.3);
        CHECK(std::abs(mins[0] + mins[1]) < 1e-6);  // symmetric pair
    }
}

TEST_CASE("outgoing-side flow shows three avoided crossings") {
    // u, u' from the final asymptotic model: x=10, sigma=-1, rho=0.12, A=0.2, eps=1.2
    const EquationParams params = EquationParams::two_mode(1.2);
    FinalAsymptotics fin;
    fin.sigma = -1;
    fin.I1 = 0.5 * 0.12 * 0.12;
    fin.I2 = 0.5 * 0.2 * 0.2 * std::sqrt(1.2);
    fin.phi1 = 0.0;
    fin.phi2 = 0.0;
    const fit::ModelPoint m =
        fit::final_asymptote_model(10.0, fin, params, fit::CorrectionFlags::none());
    const std::vector<double> u = {m.u1, m.u2}, du = {m.du1, m.du2};

    std::vector<double> ts, g01, g12;
    for (int i = 0; i <= 3200; ++i) {
        const double t = -4.0 + 8.0 * i / 3200.0;
        // the identity shift exposes the spectrum without moving the gaps
        const std::vector<double> ev = lax::spectrum(
            lax::build_lax_pair(t, 10.0, u, du, params).H,
            std::sqrt(10.0) * (4.0 * t * t + 10.0));
        ts.push_back(t);
        g01.push_back(ev[1] - ev[0]);
        g12.push_back(ev[2] - ev[1]);
    }
    const auto minima = [&](const std::vector<double>& g) {
        std::vector<double> out;
        for (std::size_t i = 1; i + 1 < g.size(); ++i)
            if (g[i] < g[i - 1] && g[i] < g[i + 1]) out.push_back(ts[i]);
        return out;
    };
    const std::vector<double> outer = minima(g01);
    const std::vector<double> inner = minima(g12);
    REQUIRE(outer.size() == 2);
    REQUIRE(inner.size() == 1);
    CHECK(std::abs(inner[0]) < 0.05);                 // crossing at t0 = 0
    CHECK(std::abs(outer[0] + outer[1]) < 2.5e-3);    // symmetric outer pair
    const double tplus = std::abs(outer[1]);
    const double wkb = 10.0 / (4.0 * std::sqrt(1.2)); // rough estimate of the outer times
    CHECK(tplus > 0.5 * wkb);
    CHECK(tplus < 1.5 * wkb);
    CHECK(std::abs(tplus - 1.744) < 0.05);            // dense-eigensolver reference
}

TEST_CASE("local crossing Hamiltonians") {
    const EquationParams params = EquationParams::two_mode(1.0);
    const double x = -16.0;

    // zero fields: diagonal slopes only
    const CMatrix h0 =
        lax::build_dom_hamiltonian(lax::DomSide::minus, 0.25, x, {0.0, 0.0}, {0.0, 0.0}, params);
    const double slope = 4.0 * 16.0 * 4.0;  // 4 |x|^{3/2}
    CHECK(h0(0, 0).real() == doctest::Approx(-slope * 0.25));
    CHECK(h0(1, 1).real() == doctest::Approx(slope * 0.25));
    CHECK(h0(2, 2).real() == doctest::Approx(slope * 0.25 + 2.0 * 4.0 * 1.0));
    CHECK(h0(0, 1) == lax::cplx(0.0));

    // Hermiticity with random fields, both sides
    for (int i = 0; i < 50; ++i) {
        const auto a = rng::uniform_pair(13, static_cast<std::uint64_t>(i));
        const std::vector<double> u = {2 * a[0] - 1, 2 * a[1] - 1};
        const std::vector<double> du = {a[1], -a[0]};
        for (const auto side : {lax::DomSide::minus, lax::DomSide::plus}) {
            const CMatrix h = lax::build_dom_hamiltonian(side, 0.1, x, u, du, params);
            CHECK(h.hermiticity_defect() == 0.0);
        }
    }

    // eigenvalues approach the diabatic slopes as |tau| grows
    const std::vector<double> u = {0.2, -0.3}, du = {0.1, 0.4};
    const auto ev_at = [&](double tau) {
        return lax::spectrum(lax::build_dom_hamiltonian(lax::DomSide::plus, tau, x, u, du, params));
    };
    const std::vector<double> e10 = ev_at(10.0), e101 = ev_at(10.1);
    const double measured = (e101[2] - e10[2]) / 0.1;  // top branch slope
    CHECK(std::abs(measured - slope) / slope < 1e-3);

    CHECK_THROWS_AS(
        lax::build_dom_hamiltonian(lax::DomSide::plus, 0.0, 1.0, u, du, params),
        std::domain_error);
}
