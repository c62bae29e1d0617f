#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "llg/grid.hpp"
#include "llg/operators.hpp"

namespace llg {

enum class SchemeKind { ExplicitRegularized, FractionalGS, CNMidpoint, CNTrapezoidal };

struct SchemeConfig {
    SchemeKind kind = SchemeKind::FractionalGS;
    double dt = 1e-3;           // time step, the tables' k
    double alpha = 0.0;         // Gilbert damping
    double picard_tol = 1e-12;  // nonlinear schemes: L-inf change between sweeps
    int picard_max = 200;
    HelmholtzOptions helmholtz{};
};

struct StepDiagnostics {
    double norm_deviation = 0.0;  // max | |m_i| - 1 | after the step
    double energy = 0.0;          // discrete exchange energy after the step
    std::optional<int> picard_iters{};
};

struct StepResult {
    VectorField m;
    StepDiagnostics diag;
};

// One time step each. f, when present, is the forcing field already sampled
// at the midpoint time of the step.

/// Regularized semi-implicit step with every g evaluated at t_n: one nodal
/// Cayley solve with effective field Lap_h g^n (+ alpha m^n x Lap_h g^n).
StepResult step_explicit_regularized(const VectorField& m, const SchemeConfig& cfg,
                                     const VectorField* f = nullptr);

/// Three-stage Gauss-Seidel step. Stage 1 solves the triangular system
/// (rows 2,3 identity, row 1 back-substitutes) and refreshes g_1; stage 2
/// solves the 2x2 block for components 1,2 and refreshes g_2; stage 3 solves
/// the full system with the mixed coefficients (g_1^{n+1}, g_2^{n+1}, g_3^n),
/// which is of Cayley form and so preserves nodal norms.
StepResult step_fractional(const VectorField& m, const SchemeConfig& cfg,
                           const VectorField* f = nullptr);

/// Midpoint Crank-Nicolson, Picard iteration freezing the effective field at
/// the latest iterate's midpoint average.
StepResult step_cn_midpoint(const VectorField& m, const SchemeConfig& cfg,
                            const VectorField* f = nullptr);

/// Trapezoidal Crank-Nicolson, Picard iteration on the cancelled form: the
/// frozen coefficients use the neighbor-sum stencil (the diagonal parts of
/// the torque differences cancel algebraically).
StepResult step_cn_trapezoidal(const VectorField& m, const SchemeConfig& cfg,
                               const VectorField* f = nullptr);

/// Dispatch on cfg.kind.
StepResult step(const VectorField& m, const SchemeConfig& cfg,
                const VectorField* f = nullptr);

struct Trajectory {
    VectorField m;
    std::vector<StepDiagnostics> diagnostics;  // one entry per step
};

/// Samples the forcing field at a given time; an empty function means no
/// forcing.
using ForcingSampler = std::function<VectorField(double t)>;

/// Composes n_steps of the configured scheme from t = 0. Forcing is sampled
/// at the midpoint times (s + 1/2) dt. Step failures are rethrown with the
/// failing step index.
Trajectory integrate(const VectorField& m0, const SchemeConfig& cfg, int n_steps,
                     const ForcingSampler& forcing = {});

}  // namespace llg
