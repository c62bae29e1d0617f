#include "llg/schemes.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "llg/nodal_algebra.hpp"

namespace llg {

namespace {

void validate(const SchemeConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("SchemeConfig: dt must be > 0");
    if (cfg.alpha < 0.0) throw std::invalid_argument("SchemeConfig: alpha must be >= 0");
    if (!(cfg.picard_tol > 0.0)) throw std::invalid_argument("SchemeConfig: picard_tol must be > 0");
    if (cfg.picard_max < 1) throw std::invalid_argument("SchemeConfig: picard_max must be >= 1");
}

StepDiagnostics diagnostics(const VectorField& m, std::optional<int> picard = {}) {
    check_finite(m, "scheme step");
    return StepDiagnostics{max_unit_norm_deviation(m), exchange_energy(m), picard};
}

// Right-hand side of one fractional stage: b = m - (k/2) m x G
// - alpha (k/2) m x (m x G) + k f, with G carrying whichever components the
// stage has already refreshed. Componentwise this matches the printed b_i
// lists of the damped steps; alpha = 0 reduces bit-identically to the
// undamped right-hand side.
inline Vec3 stage_rhs(const Vec3& m, const Vec3& G, double alpha, double k, const Vec3* f) {
    const double beta = 0.5 * k;
    const Vec3 w = cross(m, G);
    Vec3 b = m - beta * w - (alpha * beta) * cross(m, w);
    if (f) b += k * (*f);
    return b;
}

const Vec3* forcing_at(const VectorField* f, std::size_t i) {
    return f ? &f->data[i] : nullptr;
}

}  // namespace

StepResult step_explicit_regularized(const VectorField& m, const SchemeConfig& cfg,
                                     const VectorField* f) {
    validate(cfg);
    const double k = cfg.dt;
    const VectorField g = helmholtz_solve(m, k, cfg.helmholtz);
    const VectorField G = laplacian(g);
    VectorField out = make_field(m.grid);
    for (std::size_t i = 0; i < m.data.size(); ++i) {
        Vec3 H = G.data[i];
        if (cfg.alpha != 0.0) H += cfg.alpha * cross(m.data[i], G.data[i]);
        out.data[i] = f ? cayley_step(H, k, m.data[i], k * f->data[i])
                        : cayley_step(H, k, m.data[i]);
    }
    StepDiagnostics diag = diagnostics(out);
    return {std::move(out), diag};
}

StepResult step_fractional(const VectorField& m, const SchemeConfig& cfg,
                           const VectorField* f) {
    validate(cfg);
    const Grid& grid = m.grid;
    const double k = cfg.dt;
    const double al = cfg.alpha;
    const double beta = 0.5 * k;
    const std::size_t N = m.data.size();

    const VectorField g = helmholtz_solve(m, k, cfg.helmholtz);
    const VectorField G = laplacian(g);

    // Stage 1: rows 2 and 3 are the identity; row 1 back-substitutes. Only
    // the first component survives into the g_1 refresh.
    std::vector<double> stage1_m1(N);
    for (std::size_t i = 0; i < N; ++i) {
        const Vec3& mi = m.data[i];
        const Vec3& Gi = G.data[i];
        const double h2 = Gi[1] + al * (mi[2] * Gi[0] - mi[0] * Gi[2]);
        const double h3 = Gi[2] + al * (mi[0] * Gi[1] - mi[1] * Gi[0]);
        const Vec3 b = stage_rhs(mi, Gi, al, k, forcing_at(f, i));
        stage1_m1[i] = b[0] - beta * h3 * b[1] + beta * h2 * b[2];
    }
    const std::vector<double> g1 = helmholtz_solve_scalar(grid, stage1_m1, k, cfg.helmholtz);
    const std::vector<double> G1 = laplacian_scalar(grid, g1);

    // Stage 2: 2x2 block for components 1,2; component 3 straight from the
    // right-hand side. g_1 is refreshed inside the rhs and in h_1; the
    // h_2, h_3 coefficients keep the old g_1 exactly as printed.
    std::vector<double> stage2_m2(N);
    for (std::size_t i = 0; i < N; ++i) {
        const Vec3& mi = m.data[i];
        const Vec3& Gi = G.data[i];
        const Vec3 Gv{G1[i], Gi[1], Gi[2]};
        const double h1 = G1[i] + al * (mi[1] * Gi[2] - mi[2] * Gi[1]);
        const double h2 = Gi[1] + al * (mi[2] * Gi[0] - mi[0] * Gi[2]);
        const double h3 = Gi[2] + al * (mi[0] * Gi[1] - mi[1] * Gi[0]);
        const Vec3 b = stage_rhs(mi, Gv, al, k, forcing_at(f, i));
        const double c = beta * h3;
        const double r1 = b[0] + beta * h2 * b[2];
        const double r2 = b[1] - beta * h1 * b[2];
        stage2_m2[i] = (r2 + c * r1) / (1.0 + c * c);
    }
    const std::vector<double> g2 = helmholtz_solve_scalar(grid, stage2_m2, k, cfg.helmholtz);
    const std::vector<double> G2 = laplacian_scalar(grid, g2);

    // Stage 3: the full system with mixed coefficients (g_1^{n+1}, g_2^{n+1},
    // g_3^n). The right-hand side equals (I - K) m^n with the same K, so the
    // solve is of Cayley form and preserves nodal norms.
    VectorField out = make_field(grid);
    for (std::size_t i = 0; i < N; ++i) {
        const Vec3& mi = m.data[i];
        const Vec3& Gi = G.data[i];
        const Vec3 Gv{G1[i], G2[i], Gi[2]};
        const double h1 = G1[i] + al * (mi[1] * Gi[2] - mi[2] * G2[i]);
        const double h2 = G2[i] + al * (mi[2] * G1[i] - mi[0] * Gi[2]);
        const double h3 = Gi[2] + al * (mi[0] * G2[i] - mi[1] * G1[i]);
        const Vec3 b = stage_rhs(mi, Gv, al, k, forcing_at(f, i));
        out.data[i] = solve3_cramer(Coeffs3{beta * h1, beta * h2, beta * h3}, b);
    }
    StepDiagnostics diag = diagnostics(out);
    return {std::move(out), diag};
}

StepResult step_cn_midpoint(const VectorField& m, const SchemeConfig& cfg,
                            const VectorField* f) {
    validate(cfg);
    const double k = cfg.dt;
    const std::size_t N = m.data.size();
    VectorField cur = m;
    VectorField mid = make_field(m.grid);
    double change = 0.0;
    for (int it = 1; it <= cfg.picard_max; ++it) {
        for (std::size_t i = 0; i < N; ++i) mid.data[i] = 0.5 * (cur.data[i] + m.data[i]);
        const VectorField L = laplacian(mid);
        change = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            Vec3 H = L.data[i];
            if (cfg.alpha != 0.0) H += cfg.alpha * cross(mid.data[i], L.data[i]);
            const Vec3 next = f ? cayley_step(H, k, m.data[i], k * f->data[i])
                                : cayley_step(H, k, m.data[i]);
            change = std::max(change, norm(next - cur.data[i]));
            cur.data[i] = next;
        }
        if (change <= cfg.picard_tol) {
            StepDiagnostics diag = diagnostics(cur, it);
            return {std::move(cur), diag};
        }
    }
    throw SolverError("step_cn_midpoint: Picard iteration not converged, last change " +
                          std::to_string(change),
                      change, cfg.picard_max);
}

StepResult step_cn_trapezoidal(const VectorField& m, const SchemeConfig& cfg,
                               const VectorField* f) {
    validate(cfg);
    const double k = cfg.dt;
    const double beta = 0.5 * k;
    const std::size_t N = m.data.size();

    const VectorField L = laplacian(m);
    std::vector<Vec3> rhs(N);
    for (std::size_t i = 0; i < N; ++i) {
        const Vec3 torque = cross(m.data[i], L.data[i]);
        rhs[i] = m.data[i] - beta * torque -
                 (cfg.alpha * beta) * cross(m.data[i], torque);
        if (f) rhs[i] += k * f->data[i];
    }

    VectorField cur = m;
    double change = 0.0;
    for (int it = 1; it <= cfg.picard_max; ++it) {
        const VectorField Lt = offdiag_laplacian(cur);
        change = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            Vec3 H = Lt.data[i];
            if (cfg.alpha != 0.0) H += cfg.alpha * cross(cur.data[i], Lt.data[i]);
            const Vec3 next =
                solve3_cramer(Coeffs3{beta * H[0], beta * H[1], beta * H[2]}, rhs[i]);
            change = std::max(change, norm(next - cur.data[i]));
            cur.data[i] = next;
        }
        if (change <= cfg.picard_tol) {
            StepDiagnostics diag = diagnostics(cur, it);
            return {std::move(cur), diag};
        }
    }
    throw SolverError("step_cn_trapezoidal: Picard iteration not converged, last change " +
                          std::to_string(change),
                      change, cfg.picard_max);
}

StepResult step(const VectorField& m, const SchemeConfig& cfg, const VectorField* f) {
    switch (cfg.kind) {
        case SchemeKind::ExplicitRegularized: return step_explicit_regularized(m, cfg, f);
        case SchemeKind::FractionalGS: return step_fractional(m, cfg, f);
        case SchemeKind::CNMidpoint: return step_cn_midpoint(m, cfg, f);
        case SchemeKind::CNTrapezoidal: return step_cn_trapezoidal(m, cfg, f);
    }
    throw std::invalid_argument("step: unknown scheme kind");
}

Trajectory integrate(const VectorField& m0, const SchemeConfig& cfg, int n_steps,
                     const ForcingSampler& forcing) {
    validate(cfg);
    if (n_steps < 0) throw std::invalid_argument("integrate: n_steps must be >= 0");
    Trajectory traj{m0, {}};
    traj.diagnostics.reserve(static_cast<std::size_t>(n_steps));
    for (int s = 0; s < n_steps; ++s) {
        const VectorField* fp = nullptr;
        VectorField fs;
        if (forcing) {
            fs = forcing((s + 0.5) * cfg.dt);
            fp = &fs;
        }
        try {
            StepResult r = step(traj.m, cfg, fp);
            traj.m = std::move(r.m);
            traj.diagnostics.push_back(r.diag);
        } catch (const SolverError& e) {
            throw SolverError("step " + std::to_string(s) + ": " + e.what(),
                              e.achieved_residual(), e.iterations());
        } catch (const NumericalError& e) {
            throw NumericalError("step " + std::to_string(s) + ": " + e.what());
        }
    }
    return traj;
}

}  // namespace llg
