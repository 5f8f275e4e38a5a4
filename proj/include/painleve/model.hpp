// Domain types shared by all modules of the coupled Painleve-II toolkit.
#ifndef PAINLEVE_MODEL_HPP
#define PAINLEVE_MODEL_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace painleve {

constexpr double two_pi = 6.283185307179586476925286766559;

// Reduce an angle to [0, 2*pi).
inline double wrap_angle(double a) {
    a = std::fmod(a, two_pi);
    return a < 0 ? a + two_pi : a;
}

// Signed wrap to (-pi, pi]; useful for comparing phases.
inline double wrap_signed(double a) {
    a = std::fmod(a, two_pi);
    if (a > 0.5 * two_pi) a -= two_pi;
    if (a <= -0.5 * two_pi) a += two_pi;
    return a;
}

// Numerical failures that are not precondition violations.
struct integration_error : std::runtime_error {
    double last_good_x;
    integration_error(const std::string& msg, double x)
        : std::runtime_error(msg), last_good_x(x) {}
};

struct separatrix_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct connection_domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ambiguous_sign_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Equation parameters: dimension n and offsets eps_1 <= ... <= eps_n.
// Construction shifts the spectrum so eps_1 = 0. Ties are allowed (the
// degenerate eps = 0 pair is the symmetric system); distinct offsets must
// increase.
class EquationParams {
public:
    explicit EquationParams(std::vector<double> offsets) : eps_(std::move(offsets)) {
        if (eps_.empty())
            throw std::invalid_argument("EquationParams: need at least one offset");
        const double e0 = eps_[0];
        for (double& e : eps_) {
            if (!std::isfinite(e))
                throw std::invalid_argument("EquationParams: non-finite offset");
            e -= e0;
        }
        for (std::size_t k = 1; k < eps_.size(); ++k)
            if (eps_[k] < eps_[k - 1])
                throw std::invalid_argument("EquationParams: offsets must be non-decreasing");
    }

    static EquationParams two_mode(double eps) {
        if (!(eps >= 0.0))
            throw std::invalid_argument("EquationParams: two-mode eps must be >= 0");
        return EquationParams({0.0, eps});
    }

    int n() const { return static_cast<int>(eps_.size()); }
    const std::vector<double>& eps() const { return eps_; }
    double eps(int k) const { return eps_.at(static_cast<std::size_t>(k)); }

    // The single symmetry-breaking offset of the two-mode system.
    double eps2() const {
        if (n() != 2) throw std::invalid_argument("EquationParams: eps2 requires n = 2");
        return eps_[1];
    }

private:
    std::vector<double> eps_;
};

// Amplitudes and phases of the x -> -infty asymptotic solution.
class InitialAsymptotics {
public:
    InitialAsymptotics(std::vector<double> amplitudes, std::vector<double> phases)
        : alpha_(std::move(amplitudes)), phi_(std::move(phases)) {
        if (alpha_.size() != phi_.size() || alpha_.empty())
            throw std::invalid_argument("InitialAsymptotics: amplitude/phase size mismatch");
        for (double a : alpha_)
            if (!(a >= 0) || !std::isfinite(a))
                throw std::invalid_argument("InitialAsymptotics: amplitudes must be >= 0");
        for (double& p : phi_) {
            if (!std::isfinite(p))
                throw std::invalid_argument("InitialAsymptotics: non-finite phase");
            p = wrap_angle(p);
        }
    }

    InitialAsymptotics(double a1, double a2, double f1, double f2)
        : InitialAsymptotics(std::vector<double>{a1, a2}, std::vector<double>{f1, f2}) {}

    int n() const { return static_cast<int>(alpha_.size()); }
    double alpha(int k) const { return alpha_.at(static_cast<std::size_t>(k)); }
    double phi(int k) const { return phi_.at(static_cast<std::size_t>(k)); }
    const std::vector<double>& alpha() const { return alpha_; }
    const std::vector<double>& phi() const { return phi_; }

    // Adiabatic invariant of mode k at x -> -infty.
    double action(int k) const { double a = alpha(k); return 0.5 * a * a; }

private:
    std::vector<double> alpha_, phi_;
};

// p_k = exp(-pi alpha_k^2) and the combined phases Phi_1, Phi_2 (two-mode system).
struct TransitionConstants {
    double p1 = 1.0, p2 = 1.0;
    double Phi1 = 0.0, Phi2 = 0.0;
};

// Sign, actions and phases of the x -> +infty asymptotic solution (two-mode system).
struct FinalAsymptotics {
    int sigma = 1;            // sign of the regular part
    double I1 = 0.0;          // rho^2 / 2
    double I2 = 0.0;          // A^2 sqrt(eps) / 2
    double phi1 = 0.0;        // in [0, 2*pi)
    double phi2 = 0.0;        // in [0, 2*pi)
    bool sigma_ambiguous = false;  // set when alpha_1 = 0 made Phi_1 unphysical

    double rho() const { return std::sqrt(2.0 * I1); }
    double amplitude(double eps) const {
        if (!(eps > 0)) throw std::domain_error("FinalAsymptotics: eps must be > 0");
        return std::sqrt(2.0 * I2 / std::sqrt(eps));
    }

    static FinalAsymptotics from_amplitudes(int sigma, double rho, double A,
                                            double phi1, double phi2, double eps) {
        if (!(eps > 0)) throw std::domain_error("FinalAsymptotics: eps must be > 0");
        if (rho < 0 || A < 0)
            throw std::invalid_argument("FinalAsymptotics: amplitudes must be >= 0");
        FinalAsymptotics f;
        f.sigma = sigma >= 0 ? 1 : -1;
        f.I1 = 0.5 * rho * rho;
        f.I2 = 0.5 * A * A * std::sqrt(eps);
        f.phi1 = wrap_angle(phi1);
        f.phi2 = wrap_angle(phi2);
        return f;
    }
};

// One sample of the integrated system: position, coordinates, velocities.
struct TrajectoryState {
    double x = 0.0;
    std::vector<double> u, du;

    TrajectoryState() = default;
    TrajectoryState(double x_, std::vector<double> u_, std::vector<double> du_)
        : x(x_), u(std::move(u_)), du(std::move(du_)) {
        if (u.size() != du.size())
            throw std::invalid_argument("TrajectoryState: u/du size mismatch");
        for (double v : u)
            if (!std::isfinite(v)) throw std::invalid_argument("TrajectoryState: non-finite u");
        for (double v : du)
            if (!std::isfinite(v)) throw std::invalid_argument("TrajectoryState: non-finite du");
    }
    int n() const { return static_cast<int>(u.size()); }
};

// Densely sampled solution. Samples are stored flattened, 2n doubles per row
// (u_1..u_n, u_1'..u_n'), with strictly monotone x.
class Trajectory {
public:
    Trajectory(EquationParams params, double abs_tol, double rel_tol)
        : params_(std::move(params)), abs_tol_(abs_tol), rel_tol_(rel_tol) {}

    void append(double x, const double* y) {
        if (xs_.size() == 1) increasing_ = x > xs_.back();
        if (!xs_.empty() && !(increasing_ ? x > xs_.back() : x < xs_.back()))
            throw std::invalid_argument("Trajectory: x samples must be strictly monotone");
        xs_.push_back(x);
        data_.insert(data_.end(), y, y + 2 * params_.n());
    }

    const EquationParams& params() const { return params_; }
    std::size_t size() const { return xs_.size(); }
    bool empty() const { return xs_.empty(); }
    double x(std::size_t i) const { return xs_[i]; }
    const std::vector<double>& xs() const { return xs_; }
    double u(std::size_t i, int k) const { return data_[2 * params_.n() * i + k]; }
    double du(std::size_t i, int k) const { return data_[2 * params_.n() * i + params_.n() + k]; }
    double abs_tol() const { return abs_tol_; }
    double rel_tol() const { return rel_tol_; }

    TrajectoryState state(std::size_t i) const {
        const int n = params_.n();
        std::vector<double> u(n), du(n);
        for (int k = 0; k < n; ++k) { u[k] = this->u(i, k); du[k] = this->du(i, k); }
        return TrajectoryState(xs_[i], std::move(u), std::move(du));
    }

private:
    EquationParams params_;
    std::vector<double> xs_;
    std::vector<double> data_;
    double abs_tol_, rel_tol_;
    bool increasing_ = true;
};

// Phase-averaged final actions with Monte Carlo (or quadrature refinement) errors.
enum class AverageMethod { monte_carlo, tensor_quadrature };

struct AverageReport {
    double mean_I1 = 0.0, mean_I2 = 0.0;
    double std_err_I1 = 0.0, std_err_I2 = 0.0;
    long long n_samples = 0;
    long long n_singular = 0;
    AverageMethod method = AverageMethod::monte_carlo;
};

}  // namespace painleve

#endif
