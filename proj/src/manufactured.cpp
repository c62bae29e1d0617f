#include "llg/manufactured.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace llg {

namespace {

constexpr double kPi = std::numbers::pi;

// 1D phase q(x) = cos(pi x); q'(0) = q'(1) = 0, so the exact solution
// satisfies the homogeneous Neumann condition.
struct Phase1D {
    double q, dq, d2q;
    explicit Phase1D(double x)
        : q(std::cos(kPi * x)),
          dq(-kPi * std::sin(kPi * x)),
          d2q(-kPi * kPi * std::cos(kPi * x)) {}
};

// 3D phase u(x,y,z) = X(x) Y(y) Z(z) with X(s) = s^2 (1-s)^2; X'(0)=X'(1)=0.
inline double poly(double s) { return s * s * (1.0 - s) * (1.0 - s); }
inline double dpoly(double s) { return 2.0 * s - 6.0 * s * s + 4.0 * s * s * s; }
inline double d2poly(double s) { return 2.0 - 12.0 * s + 12.0 * s * s; }

struct Phase3D {
    double u;
    double grad2;  // |grad u|^2
    double lap;    // Lap u
    explicit Phase3D(const Vec3& x) {
        const double X = poly(x[0]), Y = poly(x[1]), Z = poly(x[2]);
        const double ux = dpoly(x[0]) * Y * Z;
        const double uy = X * dpoly(x[1]) * Z;
        const double uz = X * Y * dpoly(x[2]);
        u = X * Y * Z;
        grad2 = ux * ux + uy * uy + uz * uz;
        lap = d2poly(x[0]) * Y * Z + X * d2poly(x[1]) * Z + X * Y * d2poly(x[2]);
    }
};

void require_dim(int dim) {
    if (dim != 1 && dim != 3) throw std::invalid_argument("manufactured: dim must be 1 or 3");
}

Vec3 grid_point(const Grid& g, int i, int j, int k) {
    return {g.coord(i), g.coord(j), g.coord(k)};
}

template <class F>
VectorField sample(const Grid& g, F&& eval) {
    VectorField out = make_field(g);
    if (g.dim == 1) {
        for (int i = 0; i < g.n; ++i) out.data[i] = eval(grid_point(g, i, 0, 0));
        return out;
    }
    for (int k = 0; k < g.n; ++k)
        for (int j = 0; j < g.n; ++j)
            for (int i = 0; i < g.n; ++i)
                out.data[g.index(i, j, k)] = eval(grid_point(g, i, j, k));
    return out;
}

}  // namespace

Vec3 exact_solution(const Vec3& x, double t, int dim) {
    require_dim(dim);
    const double phase = dim == 1 ? Phase1D(x[0]).q : Phase3D(x).u;
    const double st = std::sin(t);
    return {std::cos(phase) * st, std::sin(phase) * st, std::cos(t)};
}

Vec3 exact_time_derivative(const Vec3& x, double t, int dim) {
    require_dim(dim);
    const double phase = dim == 1 ? Phase1D(x[0]).q : Phase3D(x).u;
    const double ct = std::cos(t);
    return {std::cos(phase) * ct, std::sin(phase) * ct, -std::sin(t)};
}

Vec3 exact_laplacian(const Vec3& x, double t, int dim) {
    require_dim(dim);
    // d2/dx2 of cos(u), sin(u) through the chain rule:
    //   (cos u)'' = -cos(u) |grad u|^2 - sin(u) Lap u
    //   (sin u)'' = -sin(u) |grad u|^2 + cos(u) Lap u
    double u, grad2, lap;
    if (dim == 1) {
        const Phase1D p(x[0]);
        u = p.q;
        grad2 = p.dq * p.dq;
        lap = p.d2q;
    } else {
        const Phase3D p(x);
        u = p.u;
        grad2 = p.grad2;
        lap = p.lap;
    }
    const double st = std::sin(t);
    return {(-std::cos(u) * grad2 - std::sin(u) * lap) * st,
            (-std::sin(u) * grad2 + std::cos(u) * lap) * st, 0.0};
}

Vec3 forcing(const Vec3& x, double t, double alpha, int dim) {
    const Vec3 m = exact_solution(x, t, dim);
    const Vec3 lap = exact_laplacian(x, t, dim);
    const Vec3 torque = cross(m, lap);
    return exact_time_derivative(x, t, dim) + torque + alpha * cross(m, torque);
}

VectorField sample_exact(const Grid& g, double t) {
    return sample(g, [&](const Vec3& x) { return exact_solution(x, t, g.dim); });
}

VectorField sample_forcing(const Grid& g, double t, double alpha) {
    return sample(g, [&](const Vec3& x) { return forcing(x, t, alpha, g.dim); });
}

RunOutcome run_manufactured(const ManufacturedProblem& problem, const Grid& g,
                            const SchemeConfig& cfg, int n_steps) {
    if (n_steps < 0) throw std::invalid_argument("run_manufactured: n_steps must be >= 0");
    if (n_steps > 0) {
        const double span = n_steps * cfg.dt;
        if (std::abs(span - problem.final_time) >
            1e-9 * std::max(1.0, std::abs(problem.final_time))) {
            throw std::invalid_argument("run_manufactured: n_steps * dt does not match final_time");
        }
    }
    const VectorField m0 = sample_exact(g, 0.0);
    ForcingSampler sampler;
    if (n_steps > 0) {
        sampler = [&g, &problem](double t) { return sample_forcing(g, t, problem.alpha); };
    }
    const Trajectory traj = integrate(m0, cfg, n_steps, sampler);

    const double t_final = n_steps * cfg.dt;
    const VectorField ref = sample_exact(g, t_final);
    VectorField err = make_field(g);
    for (std::size_t i = 0; i < err.data.size(); ++i) {
        err.data[i] = traj.m.data[i] - ref.data[i];
    }
    RunOutcome out;
    out.errors = error_norms(err);
    for (const StepDiagnostics& d : traj.diagnostics) {
        out.max_norm_deviation = std::max(out.max_norm_deviation, d.norm_deviation);
    }
    return out;
}

NormTriple evaluate_run(const ManufacturedProblem& problem, const Grid& g,
                        const SchemeConfig& cfg, int n_steps) {
    return run_manufactured(problem, g, cfg, n_steps).errors;
}

}  // namespace llg
