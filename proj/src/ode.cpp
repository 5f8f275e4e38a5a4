#include "painleve/ode.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

namespace painleve::ode {

void derivative(double x, const double* y, double* dy, const EquationParams& params) {
    const int n = params.n();
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += y[k] * y[k];
    for (int k = 0; k < n; ++k) {
        dy[k] = y[n + k];
        dy[n + k] = (x - params.eps(k)) * y[k] - 2.0 * y[k] * s;
    }
}

TrajectoryState rhs(double x, const TrajectoryState& state, const EquationParams& params) {
    const int n = params.n();
    if (state.n() != n)
        throw std::invalid_argument("rhs: state dimension does not match params");
    std::vector<double> y(2 * n), dy(2 * n);
    for (int k = 0; k < n; ++k) { y[k] = state.u[k]; y[n + k] = state.du[k]; }
    derivative(x, y.data(), dy.data(), params);
    std::vector<double> u(n), du(n);
    for (int k = 0; k < n; ++k) { u[k] = dy[k]; du[k] = dy[n + k]; }
    return TrajectoryState(x, std::move(u), std::move(du));
}

TrajectoryState seed_initial_state(const InitialAsymptotics& init, const EquationParams& params,
                                   double x0) {
    if (params.n() != 2 || init.n() != 2)
        throw std::invalid_argument("seed_initial_state: two-mode system only");
    if (!(x0 < 0.0))
        throw std::domain_error("seed_initial_state: require x0 < 0");

    const double eps = params.eps2();
    const double a1 = init.alpha(0), a2 = init.alpha(1);
    const double mx = -x0;
    const double c1 = (3.0 * a1 * a1 + 2.0 * a2 * a2) / 4.0;
    const double c2 = (3.0 * a2 * a2 + 2.0 * a1 * a1) / 4.0;

    const double th1 = (2.0 / 3.0) * mx * std::sqrt(mx) + c1 * std::log(mx) + init.phi(0);
    const double mxe = mx + eps;
    const double th2 = (2.0 / 3.0) * mxe * std::sqrt(mxe) + c2 * std::log(mx) + init.phi(1);

    const double env1 = std::pow(mx, -0.25);
    const double env2 = std::pow(mxe, -0.25);
    // d/dx of the phases: the leading terms give -sqrt(-x) resp. -sqrt(-x+eps),
    // the logarithms give c/x.
    const double dth1 = -std::sqrt(mx) + c1 / x0;
    const double dth2 = -std::sqrt(mxe) + c2 / x0;

    std::vector<double> u(2), du(2);
    u[0] = a1 * env1 * std::sin(th1);
    u[1] = a2 * env2 * std::sin(th2);
    du[0] = a1 * (0.25 * std::pow(mx, -1.25) * std::sin(th1) + env1 * std::cos(th1) * dth1);
    du[1] = a2 * (0.25 * std::pow(mxe, -1.25) * std::sin(th2) + env2 * std::cos(th2) * dth2);
    return TrajectoryState(x0, std::move(u), std::move(du));
}

double hamiltonian_energy(const TrajectoryState& state, double x, const EquationParams& params) {
    const int n = params.n();
    if (state.n() != n)
        throw std::invalid_argument("hamiltonian_energy: state dimension mismatch");
    double p2 = 0.0, x2 = 0.0, br = 0.0;
    for (int k = 0; k < n; ++k) {
        p2 += state.du[k] * state.du[k];
        x2 += state.u[k] * state.u[k];
        br += params.eps(k) * state.u[k] * state.u[k];
    }
    return 0.5 * p2 - 0.5 * x * x2 + 0.5 * x2 * x2 + 0.5 * br;
}

namespace {

// Dormand-Prince 8(5,3) tableau (Hairer, Norsett, Wanner: Solving ODEs I).
constexpr double c2 = 0.526001519587677318785587544488e-01;
constexpr double c3 = 0.789002279381515978178381316732e-01;
constexpr double c4 = 0.118350341907227396726757197510e+00;
constexpr double c5 = 0.281649658092772603273242802490e+00;
constexpr double c6 = 0.333333333333333333333333333333e+00;
constexpr double c7 = 0.25e+00;
constexpr double c8 = 0.307692307692307692307692307692e+00;
constexpr double c9 = 0.651282051282051282051282051282e+00;
constexpr double c10 = 0.6e+00;
constexpr double c11 = 0.857142857142857142857142857142e+00;
constexpr double c14 = 0.1e+00;
constexpr double c15 = 0.2e+00;
constexpr double c16 = 0.777777777777777777777777777778e+00;

constexpr double a21 = 5.26001519587677318785587544488e-2;
constexpr double a31 = 1.97250569845378994544595329183e-2;
constexpr double a32 = 5.91751709536136983633785987549e-2;
constexpr double a41 = 2.95875854768068491816892993775e-2;
constexpr double a43 = 8.87627564304205475450678981324e-2;
constexpr double a51 = 2.41365134159266685502369798665e-1;
constexpr double a53 = -8.84549479328286085344864962717e-1;
constexpr double a54 = 9.24834003261792003115737966543e-1;
constexpr double a61 = 3.7037037037037037037037037037e-2;
constexpr double a64 = 1.70828608729473871279604482173e-1;
constexpr double a65 = 1.25467687566822425016691814123e-1;
constexpr double a71 = 3.7109375e-2;
constexpr double a74 = 1.70252211019544039314978060272e-1;
constexpr double a75 = 6.02165389804559606850219397283e-2;
constexpr double a76 = -1.7578125e-2;
constexpr double a81 = 3.70920001185047927108779319836e-2;
constexpr double a84 = 1.70383925712239993810214054705e-1;
constexpr double a85 = 1.07262030446373284651809199168e-1;
constexpr double a86 = -1.53194377486244017527936158236e-2;
constexpr double a87 = 8.27378916381402288758473766002e-3;
constexpr double a91 = 6.24110958716075717114429577812e-1;
constexpr double a94 = -3.36089262944694129406857109825e0;
constexpr double a95 = -8.68219346841726006818189891453e-1;
constexpr double a96 = 2.75920996994467083049415600797e1;
constexpr double a97 = 2.01540675504778934086186788979e1;
constexpr double a98 = -4.34898841810699588477366255144e1;
constexpr double a101 = 4.77662536438264365890433908527e-1;
constexpr double a104 = -2.48811461997166764192642586468e0;
constexpr double a105 = -5.90290826836842996371446475743e-1;
constexpr double a106 = 2.12300514481811942347288949897e1;
constexpr double a107 = 1.52792336328824235832596922938e1;
constexpr double a108 = -3.32882109689848629194453265587e1;
constexpr double a109 = -2.03312017085086261358222928593e-2;
constexpr double a111 = -9.3714243008598732571704021658e-1;
constexpr double a114 = 5.18637242884406370830023853209e0;
constexpr double a115 = 1.09143734899672957818500254654e0;
constexpr double a116 = -8.14978701074692612513997267357e0;
constexpr double a117 = -1.85200656599969598641566180701e1;
constexpr double a118 = 2.27394870993505042818970056734e1;
constexpr double a119 = 2.49360555267965238987089396762e0;
constexpr double a1110 = -3.0467644718982195003823669022e0;
constexpr double a121 = 2.27331014751653820792359768449e0;
constexpr double a124 = -1.05344954667372501984066689879e1;
constexpr double a125 = -2.00087205822486249909675718444e0;
constexpr double a126 = -1.79589318631187989172765950534e1;
constexpr double a127 = 2.79488845294199600508499808837e1;
constexpr double a128 = -2.85899827713502369474065508674e0;
constexpr double a129 = -8.87285693353062954433549289258e0;
constexpr double a1210 = 1.23605671757943030647266201528e1;
constexpr double a1211 = 6.43392746015763530355970484046e-1;

constexpr double a141 = 5.61675022830479523392909219681e-2;
constexpr double a147 = 2.53500210216624811088794765333e-1;
constexpr double a148 = -2.46239037470802489917441475441e-1;
constexpr double a149 = -1.24191423263816360469010140626e-1;
constexpr double a1410 = 1.5329179827876569731206322685e-1;
constexpr double a1411 = 8.20105229563468988491666602057e-3;
constexpr double a1412 = 7.56789766054569976138603589584e-3;
constexpr double a1413 = -8.298e-3;
constexpr double a151 = 3.18346481635021405060768473261e-2;
constexpr double a156 = 2.83009096723667755288322961402e-2;
constexpr double a157 = 5.35419883074385676223797384372e-2;
constexpr double a158 = -5.49237485713909884646569340306e-2;
constexpr double a1511 = -1.08347328697249322858509316994e-4;
constexpr double a1512 = 3.82571090835658412954920192323e-4;
constexpr double a1513 = -3.40465008687404560802977114492e-4;
constexpr double a1514 = 1.41312443674632500278074618366e-1;
constexpr double a161 = -4.28896301583791923408573538692e-1;
constexpr double a166 = -4.69762141536116384314449447206e0;
constexpr double a167 = 7.68342119606259904184240953878e0;
constexpr double a168 = 4.06898981839711007970213554331e0;
constexpr double a169 = 3.56727187455281109270669543021e-1;
constexpr double a1613 = -1.39902416515901462129418009734e-3;
constexpr double a1614 = 2.9475147891527723389556272149e0;
constexpr double a1615 = -9.15095847217987001081870187138e0;

constexpr double b1 = 5.42937341165687622380535766363e-2;
constexpr double b6 = 4.45031289275240888144113950566e0;
constexpr double b7 = 1.89151789931450038304281599044e0;
constexpr double b8 = -5.8012039600105847814672114227e0;
constexpr double b9 = 3.1116436695781989440891606237e-1;
constexpr double b10 = -1.52160949662516078556178806805e-1;
constexpr double b11 = 2.01365400804030348374776537501e-1;
constexpr double b12 = 4.47106157277725905176885569043e-2;

constexpr double bhh1 = 0.244094488188976377952755905512e+00;
constexpr double bhh2 = 0.733846688281611857341361741547e+00;
constexpr double bhh3 = 0.220588235294117647058823529412e-01;

constexpr double er1 = 0.1312004499419488073250102996e-01;
constexpr double er6 = -0.1225156446376204440720569753e+01;
constexpr double er7 = -0.4957589496572501915214079952e+00;
constexpr double er8 = 0.1664377182454986536961530415e+01;
constexpr double er9 = -0.3503288487499736816886487290e+00;
constexpr double er10 = 0.3341791187130174790297318841e+00;
constexpr double er11 = 0.8192320648511571246570742613e-01;
constexpr double er12 = -0.2235530786388629525884427845e-01;

constexpr double d41 = -0.84289382761090128651353491142e+01;
constexpr double d46 = 0.56671495351937776962531783590e+00;
constexpr double d47 = -0.30689499459498916912797304727e+01;
constexpr double d48 = 0.23846676565120698287728149680e+01;
constexpr double d49 = 0.21170345824450282767155149946e+01;
constexpr double d410 = -0.87139158377797299206789907490e+00;
constexpr double d411 = 0.22404374302607882758541771650e+01;
constexpr double d412 = 0.63157877876946881815570249290e+00;
constexpr double d413 = -0.88990336451333310820698117400e-01;
constexpr double d414 = 0.18148505520854727256656404962e+02;
constexpr double d415 = -0.91946323924783554000451984436e+01;
constexpr double d416 = -0.44360363875948939664310572000e+01;
constexpr double d51 = 0.10427508642579134603413151009e+02;
constexpr double d56 = 0.24228349177525818288430175319e+03;
constexpr double d57 = 0.16520045171727028198505394887e+03;
constexpr double d58 = -0.37454675472269020279518312152e+03;
constexpr double d59 = -0.22113666853125306036270938578e+02;
constexpr double d510 = 0.77334326684722638389603898808e+01;
constexpr double d511 = -0.30674084731089398182061213626e+02;
constexpr double d512 = -0.93321305264302278729567221706e+01;
constexpr double d513 = 0.15697238121770843886131091075e+02;
constexpr double d514 = -0.31139403219565177677282850411e+02;
constexpr double d515 = -0.93529243588444783865713862664e+01;
constexpr double d516 = 0.35816841486394083752465898540e+02;
constexpr double d61 = 0.19985053242002433820987653617e+02;
constexpr double d66 = -0.38703730874935176555105901742e+03;
constexpr double d67 = -0.18917813819516756882830838328e+03;
constexpr double d68 = 0.52780815920542364900561016686e+03;
constexpr double d69 = -0.11573902539959630126141871134e+02;
constexpr double d610 = 0.68812326946963000169666922661e+01;
constexpr double d611 = -0.10006050966910838403183860980e+01;
constexpr double d612 = 0.77771377980534432092869265740e+00;
constexpr double d613 = -0.27782057523535084065932004339e+01;
constexpr double d614 = -0.60196695231264120758267380846e+02;
constexpr double d615 = 0.84320405506677161018159903784e+02;
constexpr double d616 = 0.11992291136182789328035130030e+02;
constexpr double d71 = -0.25693933462703749003312586129e+02;
constexpr double d76 = -0.15418974869023643374053993627e+03;
constexpr double d77 = -0.23152937917604549567536039109e+03;
constexpr double d78 = 0.35763911791061412378285349910e+03;
constexpr double d79 = 0.93405324183624310003907691704e+02;
constexpr double d710 = -0.37458323136451633156875139351e+02;
constexpr double d711 = 0.10409964950896230045147246184e+03;
constexpr double d712 = 0.29840293426660503123344363579e+02;
constexpr double d713 = -0.43533456590011143754432175058e+02;
constexpr double d714 = 0.96324553959188282948394950600e+02;
constexpr double d715 = -0.39177261675615439165231486172e+02;
constexpr double d716 = -0.14972683625798562581422125276e+03;

class Dop853 {
public:
    Dop853(const EquationParams& params, const IntegrationOptions& opts, int dim)
        : params_(params), opts_(opts), dim_(dim) {
        for (auto* v : {&y_, &yw_, &ynew_, &fnew_}) v->resize(dim_);
        for (auto& k : k_) k.resize(dim_);
        for (auto& r : cont_) r.resize(dim_);
    }

    Trajectory run(const TrajectoryState& s0, double x0, double x1) {
        Trajectory traj(params_, opts_.abs_tol, opts_.rel_tol);
        const int n = params_.n();
        for (int k = 0; k < n; ++k) { y_[k] = s0.u[k]; y_[n + k] = s0.du[k]; }

        const double dir = x1 > x0 ? 1.0 : -1.0;
        double x = x0;
        derivative(x, y_.data(), k_[0].data(), params_);

        double next_record = x0;
        if (record_ok(x0)) { traj.append(x0, y_.data()); next_record = advance_record(x0, dir); }
        else next_record = opts_.record_from;

        double h = dir * initial_step(x);
        double err_old = 1e-4;
        bool rejected = false;
        long long steps = 0;

        while (dir * (x1 - x) > 0) {
            if (++steps > opts_.max_steps)
                throw integration_error("integrate: step budget exhausted", x);
            if (std::abs(h) < 16.0 * std::numeric_limits<double>::epsilon() * std::abs(x))
                throw integration_error("integrate: step size underflow", x);
            if (opts_.max_step > 0) h = dir * std::min(std::abs(h), opts_.max_step);
            if (dir * (x + h - x1) > 0) h = x1 - x;

            const double err = stages_and_error(x, h);

            // PI controller (order 8: exponent 1/8), limiter 1/3..6, safety 0.9.
            const double expo = 0.125, beta = 0.0, safe = 0.9;
            if (err <= 1.0) {
                double scale = err == 0.0 ? 6.0
                                          : safe * std::pow(err, -expo) * std::pow(err_old, beta);
                scale = std::clamp(scale, 1.0 / 3.0, 6.0);
                if (rejected) scale = std::min(scale, 1.0);
                err_old = std::max(err, 1e-4);
                rejected = false;

                const double x_new = x + h;
                derivative(x_new, ynew_.data(), fnew_.data(), params_);

                double amax = 0.0;
                for (int k = 0; k < n; ++k) amax = std::max(amax, std::abs(ynew_[k]));
                if (amax > opts_.blowup_limit)
                    throw integration_error("integrate: solution blow-up", x);

                // Emit dense samples that fall inside this step.
                if (dir * (x_new - next_record) >= 0 && record_ok(next_record)) {
                    prepare_dense(x, h);
                    while (dir * (x_new - next_record) >= 0 && record_ok(next_record)) {
                        interpolate(next_record, x, h, yw_.data());
                        traj.append(next_record, yw_.data());
                        next_record = advance_record(next_record, dir);
                    }
                }

                x = x_new;
                y_.swap(ynew_);
                k_[0].swap(fnew_);
                h *= scale;
            } else {
                rejected = true;
                h *= std::max(safe * std::pow(err, -expo), 1.0 / 3.0);
            }
        }

        // Land exactly on the requested endpoint.
        if (traj.empty() || traj.x(traj.size() - 1) != x) {
            if (record_ok(x)) traj.append(x, y_.data());
        }
        if (traj.empty())
            throw integration_error("integrate: nothing recorded (record_from past interval?)", x);
        return traj;
    }

private:
    bool record_ok(double x) const { return x >= opts_.record_from; }

    double advance_record(double x, double dir) const {
        double dx = opts_.dense_output_dx;
        if (dx <= 0) {
            // keep the fastest local phase advance under pi/8
            const double omega = std::sqrt(2.0 * std::abs(x) + 2.0 * params_.eps(params_.n() - 1)) + 1.0;
            dx = (0.39269908169872414) / omega;  // pi/8
        }
        return x + dir * dx;
    }

    double initial_step(double x) {
        // crude |y| / |y'| estimate, refined by the controller within a few steps
        double dn = 0.0, yn = 0.0;
        for (int i = 0; i < dim_; ++i) {
            const double sc = opts_.abs_tol + opts_.rel_tol * std::abs(y_[i]);
            dn += (k_[0][i] / sc) * (k_[0][i] / sc);
            yn += (y_[i] / sc) * (y_[i] / sc);
        }
        double h = (dn > 0 && yn > 0) ? 0.01 * std::sqrt(yn / dn) : 1e-6;
        h = std::min(h, opts_.max_step > 0 ? opts_.max_step : h);
        (void)x;
        return std::max(h, 1e-10);
    }

    // Twelve stages; fills k_ and ynew_, returns the blended 5th/3rd order
    // error estimate normalized to 1.
    double stages_and_error(double x, double h) {
        const auto f = [&](double c, std::vector<double>& out) {
            derivative(x + c * h, yw_.data(), out.data(), params_);
        };
        const int m = dim_;
        const auto& k1 = k_[0];

        for (int i = 0; i < m; ++i) yw_[i] = y_[i] + h * a21 * k1[i];
        f(c2, k_[1]);
        for (int i = 0; i < m; ++i) yw_[i] = y_[i] + h * (a31 * k1[i] + a32 * k_[1][i]);
        f(c3, k_[2]);
        for (int i = 0; i < m; ++i) yw_[i] = y_[i] + h * (a41 * k1[i] + a43 * k_[2][i]);
        f(c4, k_[3]);
        for (int i = 0; i < m; ++i)
            yw_[i] = y_[i] + h * (a51 * k1[i] + a53 * k_[2][i] + a54 * k_[3][i]);
        f(c5, k_[4]);
        for (int i = 0; i < m; ++i)
            yw_[i] = y_[i] + h * (a61 * k1[i] + a64 * k_[3][i] + a65 * k_[4][i]);
        f(c6, k_[5]);
        for (int i = 0; i < m; ++i)
            yw_[i] = y_[i] + h * (a71 * k1[i] + a74 * k_[3][i] + a75 * k_[4][i] + a76 * k_[5][i]);
        f(c7, k_[6]);
        for (int i = 0; i < m; ++i)
            yw_[i] = y_[i] + h * (a81 * k1[i] + a84 * k_[3][i] + a85 * k_[4][i] + a86 * k_[5][i] +
                                  a87 * k_[6][i]);
        f(c8, k_[7]);
        for (int i = 0; i < m; ++i)
            yw_[i] = y_[i] + h * (a91 * k1[i] + a94 * k_[3][i] + a95 * k_[4][i] + a96 * k_[5][i] +
                                  a97 * k_[6][i] + a98 * k_[7][i]);
        f(c9, k_[8]);
        for (int i = 0; i < m; ++i)
            yw_[i] = y_[i] + h * (a101 * k1[i] + a104 * k_[3][i] + a105 * k_[4][i] +
                                  a106 * k_[5][i] + a107 * k_[6][i] + a108 * k_[7][i] +
                                  a109 * k_[8][i]);
        f(c10, k_[9]);
        for (int i = 0; i < m; ++i)
            yw_[i] = y_[i] + h * (a111 * k1[i] + a114 * k_[3][i] + a115 * k_[4][i] +
                                  a116 * k_[5][i] + a117 * k_[6][i] + a118 * k_[7][i] +
                                  a119 * k_[8][i] + a1110 * k_[9][i]);
        f(c11, k_[10]);
        for (int i = 0; i < m; ++i)
            yw_[i] = y_[i] + h * (a121 * k1[i] + a124 * k_[3][i] + a125 * k_[4][i] +
                                  a126 * k_[5][i] + a127 * k_[6][i] + a128 * k_[7][i] +
                                  a129 * k_[8][i] + a1210 * k_[9][i] + a1211 * k_[10][i]);
        f(1.0, k_[11]);

        double err5 = 0.0, err3 = 0.0;
        for (int i = 0; i < m; ++i) {
            const double bsum = b1 * k1[i] + b6 * k_[5][i] + b7 * k_[6][i] + b8 * k_[7][i] +
                                b9 * k_[8][i] + b10 * k_[9][i] + b11 * k_[10][i] + b12 * k_[11][i];
            ynew_[i] = y_[i] + h * bsum;
            const double sc =
                opts_.abs_tol + opts_.rel_tol * std::max(std::abs(y_[i]), std::abs(ynew_[i]));
            const double e3 = bsum - bhh1 * k1[i] - bhh2 * k_[8][i] - bhh3 * k_[11][i];
            const double e5 = er1 * k1[i] + er6 * k_[5][i] + er7 * k_[6][i] + er8 * k_[7][i] +
                              er9 * k_[8][i] + er10 * k_[9][i] + er11 * k_[10][i] +
                              er12 * k_[11][i];
            err3 += (e3 / sc) * (e3 / sc);
            err5 += (e5 / sc) * (e5 / sc);
        }
        double deno = err5 + 0.01 * err3;
        if (deno <= 0.0) deno = 1.0;
        return std::abs(h) * err5 * std::sqrt(1.0 / (m * deno));
    }

    // Extra stages 14-16 and the eight interpolation coefficient vectors.
    // Requires fnew_ = f(x+h, ynew_) (stage 13).
    void prepare_dense(double x, double h) {
        const int m = dim_;
        const auto& k1 = k_[0];
        const auto& k13 = fnew_;

        for (int i = 0; i < m; ++i) {
            cont_[0][i] = y_[i];
            cont_[1][i] = ynew_[i] - y_[i];
            cont_[2][i] = h * k1[i] - cont_[1][i];
            cont_[3][i] = cont_[1][i] - h * k13[i] - cont_[2][i];
            cont_[4][i] = d41 * k1[i] + d46 * k_[5][i] + d47 * k_[6][i] + d48 * k_[7][i] +
                          d49 * k_[8][i] + d410 * k_[9][i] + d411 * k_[10][i] + d412 * k_[11][i];
            cont_[5][i] = d51 * k1[i] + d56 * k_[5][i] + d57 * k_[6][i] + d58 * k_[7][i] +
                          d59 * k_[8][i] + d510 * k_[9][i] + d511 * k_[10][i] + d512 * k_[11][i];
            cont_[6][i] = d61 * k1[i] + d66 * k_[5][i] + d67 * k_[6][i] + d68 * k_[7][i] +
                          d69 * k_[8][i] + d610 * k_[9][i] + d611 * k_[10][i] + d612 * k_[11][i];
            cont_[7][i] = d71 * k1[i] + d76 * k_[5][i] + d77 * k_[6][i] + d78 * k_[7][i] +
                          d79 * k_[8][i] + d710 * k_[9][i] + d711 * k_[10][i] + d712 * k_[11][i];
        }
        for (int i = 0; i < m; ++i)
            yw_[i] = y_[i] + h * (a141 * k1[i] + a147 * k_[6][i] + a148 * k_[7][i] +
                                  a149 * k_[8][i] + a1410 * k_[9][i] + a1411 * k_[10][i] +
                                  a1412 * k_[11][i] + a1413 * k13[i]);
        derivative(x + c14 * h, yw_.data(), k_[1].data(), params_);
        for (int i = 0; i < m; ++i)
            yw_[i] = y_[i] + h * (a151 * k1[i] + a156 * k_[5][i] + a157 * k_[6][i] +
                                  a158 * k_[7][i] + a1511 * k_[10][i] + a1512 * k_[11][i] +
                                  a1513 * k13[i] + a1514 * k_[1][i]);
        derivative(x + c15 * h, yw_.data(), k_[2].data(), params_);
        for (int i = 0; i < m; ++i)
            yw_[i] = y_[i] + h * (a161 * k1[i] + a166 * k_[5][i] + a167 * k_[6][i] +
                                  a168 * k_[7][i] + a169 * k_[8][i] + a1613 * k13[i] +
                                  a1614 * k_[1][i] + a1615 * k_[2][i]);
        derivative(x + c16 * h, yw_.data(), k_[3].data(), params_);

        for (int i = 0; i < m; ++i) {
            cont_[4][i] = h * (cont_[4][i] + d413 * k13[i] + d414 * k_[1][i] + d415 * k_[2][i] +
                               d416 * k_[3][i]);
            cont_[5][i] = h * (cont_[5][i] + d513 * k13[i] + d514 * k_[1][i] + d515 * k_[2][i] +
                               d516 * k_[3][i]);
            cont_[6][i] = h * (cont_[6][i] + d613 * k13[i] + d614 * k_[1][i] + d615 * k_[2][i] +
                               d616 * k_[3][i]);
            cont_[7][i] = h * (cont_[7][i] + d713 * k13[i] + d714 * k_[1][i] + d715 * k_[2][i] +
                               d716 * k_[3][i]);
        }
        // stages 2-4 were overwritten; only k1 survives for the next step
    }

    void interpolate(double xq, double x_old, double h, double* out) const {
        const double s = (xq - x_old) / h;
        const double s1 = 1.0 - s;
        for (int i = 0; i < dim_; ++i) {
            const double a6 = cont_[6][i] + s * cont_[7][i];
            const double a5 = cont_[5][i] + s1 * a6;
            const double a4 = cont_[4][i] + s * a5;
            const double a3 = cont_[3][i] + s1 * a4;
            const double a2 = cont_[2][i] + s * a3;
            const double a1 = cont_[1][i] + s1 * a2;
            out[i] = cont_[0][i] + s * a1;
        }
    }

    const EquationParams& params_;
    const IntegrationOptions& opts_;
    int dim_;
    std::vector<double> y_, yw_, ynew_, fnew_;
    std::vector<double> k_[12];
    std::vector<double> cont_[8];
};

}  // namespace

Trajectory integrate(const TrajectoryState& state0, double x0, double x1,
                     const EquationParams& params, const IntegrationOptions& opts) {
    if (state0.n() != params.n())
        throw std::invalid_argument("integrate: state dimension does not match params");
    if (!(x0 != x1) || !std::isfinite(x0) || !std::isfinite(x1))
        throw std::invalid_argument("integrate: invalid interval");
    if (!(opts.abs_tol > 0) || opts.abs_tol > 1e-3 || !(opts.rel_tol > 0) || opts.rel_tol > 1e-3)
        throw std::invalid_argument("integrate: tolerances must lie in (0, 1e-3]");
    if (opts.dense_output_dx < 0)
        throw std::invalid_argument("integrate: dense_output_dx must be >= 0");
    Dop853 solver(params, opts, 2 * params.n());
    return solver.run(state0, x0, x1);
}

}  // namespace painleve::ode
