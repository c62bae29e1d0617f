#pragma once

#include "llg/grid.hpp"
#include "llg/schemes.hpp"

namespace llg {

/// Closed-form benchmark problem: a unit-norm exact solution together with
/// the forcing that makes it solve the damped equation exactly.
struct ManufacturedProblem {
    int dim = 1;
    double alpha = 0.01;
    double final_time = 0.1;
};

/// Exact solution. 1D: (cos(cos(pi x)) sin t, sin(cos(pi x)) sin t, cos t);
/// 3D: the same with cos(pi x) replaced by X(x)Y(y)Z(z), X(s)=s^2(1-s)^2.
/// |m| = 1 everywhere; the normal derivative vanishes on the domain faces.
Vec3 exact_solution(const Vec3& x, double t, int dim);

Vec3 exact_time_derivative(const Vec3& x, double t, int dim);

/// Closed-form spatial Laplacian of the exact solution.
Vec3 exact_laplacian(const Vec3& x, double t, int dim);

/// f = dm/dt + m x Lap m + alpha m x (m x Lap m) evaluated on the exact
/// solution.
Vec3 forcing(const Vec3& x, double t, double alpha, int dim);

VectorField sample_exact(const Grid& g, double t);
VectorField sample_forcing(const Grid& g, double t, double alpha);

struct RunOutcome {
    NormTriple errors;
    double max_norm_deviation = 0.0;  // max over all steps
};

/// Integrates from the exact initial data with forcing and compares against
/// the exact solution at the final time. Requires n_steps * cfg.dt to match
/// problem.final_time.
RunOutcome run_manufactured(const ManufacturedProblem& problem, const Grid& g,
                            const SchemeConfig& cfg, int n_steps);

/// Error norms of a forced run (the errors part of run_manufactured).
NormTriple evaluate_run(const ManufacturedProblem& problem, const Grid& g,
                        const SchemeConfig& cfg, int n_steps);

}  // namespace llg
