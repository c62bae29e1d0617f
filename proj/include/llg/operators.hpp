#pragma once

#include <span>
#include <vector>

#include "llg/errors.hpp"
#include "llg/grid.hpp"

namespace llg {

/// Controls for the iterative Helmholtz solve. The 1D path is a direct
/// tridiagonal factorization and ignores these.
struct HelmholtzOptions {
    double rel_tol = 1e-12;
    int max_iter = 0;  // 0 selects the default 10 * n * dim
};

/// Second-order central Laplacian, component-wise, axis contributions summed.
/// Neumann closure by mirror ghosts (u_{-1} := u_1), periodic by index wrap.
VectorField laplacian(const VectorField& u);

/// Neighbor-sum stencil (u_{i-1} + u_{i+1})/h^2 per axis: the Laplacian
/// without its diagonal term, same boundary closure.
VectorField offdiag_laplacian(const VectorField& u);

/// Solves (I - dt Lap_h) g = m component-wise. dt = 0 returns a copy.
/// 1D grids are solved exactly (Neumann-modified or cyclic tridiagonal);
/// 3D grids by conjugate gradients on the weighted-SPD operator to relative
/// residual <= rel_tol. Throws SolverError when the target is not met.
VectorField helmholtz_solve(const VectorField& m, double dt,
                            const HelmholtzOptions& opts = {});

// Scalar-field variants, used for the per-component refreshes of the
// fractional scheme.
std::vector<double> laplacian_scalar(const Grid& g, std::span<const double> u);
std::vector<double> helmholtz_solve_scalar(const Grid& g, std::span<const double> m,
                                           double dt, const HelmholtzOptions& opts = {});

}  // namespace llg
