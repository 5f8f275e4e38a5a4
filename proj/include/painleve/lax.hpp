// Lax pair of the coupled system, zero-curvature residual, spectra and the
// local three-level crossing Hamiltonians.
#ifndef PAINLEVE_LAX_HPP
#define PAINLEVE_LAX_HPP

#include <complex>
#include <vector>

#include "painleve/model.hpp"

namespace painleve::lax {

using cplx = std::complex<double>;

// Small dense complex matrix, row-major.
class CMatrix {
public:
    CMatrix() = default;
    explicit CMatrix(int dim) : dim_(dim), a_(static_cast<std::size_t>(dim) * dim) {}

    int dim() const { return dim_; }
    cplx& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * dim_ + j]; }
    const cplx& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * dim_ + j]; }

    double frobenius_norm() const;
    double max_abs_entry() const;
    // largest |a_ij - conj(a_ji)|
    double hermiticity_defect() const;

    CMatrix operator-(const CMatrix& o) const;
    friend CMatrix commutator(const CMatrix& a, const CMatrix& b);

private:
    int dim_ = 0;
    std::vector<cplx> a_;
};

struct LaxPair {
    CMatrix H;
    CMatrix H1;
};

struct CurvatureResidual {
    double frobenius_norm = 0.0;
    double max_entry = 0.0;
    double t = 0.0, x = 0.0;
};

// H = A - 4t B + 2C and H1 at a point (t, x), (n+1)x(n+1), exactly Hermitian:
//   A_00 = 4t^2 + x - 2 sum u_k^2,   A_kk = -(4t^2 + x - 2 eps_k) + 2 u_k^2,
//   A_jk = 2 u_j u_k (j != k >= 1),  B_0k = u_k,  C_0k = -i u_k',
//   H1 = diag(t, -t, ..., -t) with H1_0k = -u_k.
LaxPair build_lax_pair(double t, double x, const std::vector<double>& u,
                       const std::vector<double>& du, const EquationParams& params);

// Residual of (dH/dx - dH1/dt) - i[H, H1] with u'' substituted from the
// equations of motion; vanishes identically when the substitution is exact.
CurvatureResidual zero_curvature_residual(double t, double x, const std::vector<double>& u,
                                          const std::vector<double>& du,
                                          const EquationParams& params);

// Same, with an explicit second-derivative vector replacing the substitution
// (used to certify that the check is not vacuous).
CurvatureResidual zero_curvature_residual_with(double t, double x, const std::vector<double>& u,
                                               const std::vector<double>& du,
                                               const std::vector<double>& ddu,
                                               const EquationParams& params);

// Ascending eigenvalues of a Hermitian matrix (cyclic Jacobi sweeps), with an
// optional multiple of the identity added first. Throws std::invalid_argument
// if the Hermiticity defect exceeds 1e-10 * scale.
std::vector<double> spectrum(const CMatrix& h, double shift = 0.0);

enum class DomSide { minus, plus };

// Local three-level crossing Hamiltonian near tau = -1/2 (minus) or +1/2
// (plus) of the rescaled evolution at large negative x:
//   diagonal slopes -+4|x|^{3/2} tau, third level offset by 2 sqrt(|x|) eps,
//   couplings g_k = +-2(|x| u_k -+ i sqrt(|x|) u_k').
CMatrix build_dom_hamiltonian(DomSide side, double tau_local, double x,
                              const std::vector<double>& u, const std::vector<double>& du,
                              const EquationParams& params);

}  // namespace painleve::lax

#endif
