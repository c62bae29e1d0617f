#include "llg/operators.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace llg {

namespace {

inline double cdot(double a, double b) { return a * b; }
inline double cdot(const Vec3& a, const Vec3& b) { return dot(a, b); }

// Neighbor index along one axis with the grid's closure: index wrap for
// periodic, mirror ghost (u_{-1} := u_1) for Neumann.
inline int neighbor(int i, int d, int n, Boundary bc) {
    int j = i + d;
    if (bc == Boundary::Periodic) {
        if (j < 0) j += n;
        if (j >= n) j -= n;
    } else {
        if (j < 0) j = 1;
        if (j >= n) j = n - 2;
    }
    return j;
}

template <class T>
void apply_stencil(const Grid& g, const T* u, T* out, bool with_diagonal) {
    const int n = g.n;
    const double ih2 = 1.0 / (g.h * g.h);
    if (g.dim == 1) {
        for (int i = 0; i < n; ++i) {
            T s = u[neighbor(i, -1, n, g.bc)] + u[neighbor(i, +1, n, g.bc)];
            if (with_diagonal) s -= 2.0 * u[i];
            out[i] = ih2 * s;
        }
        return;
    }
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                const std::size_t c = g.index(i, j, k);
                T s = u[g.index(neighbor(i, -1, n, g.bc), j, k)] +
                      u[g.index(neighbor(i, +1, n, g.bc), j, k)] +
                      u[g.index(i, neighbor(j, -1, n, g.bc), k)] +
                      u[g.index(i, neighbor(j, +1, n, g.bc), k)] +
                      u[g.index(i, j, neighbor(k, -1, n, g.bc))] +
                      u[g.index(i, j, neighbor(k, +1, n, g.bc))];
                if (with_diagonal) s -= 6.0 * u[c];
                out[c] = ih2 * s;
            }
        }
    }
}

// Thomas algorithm for a tridiagonal system with per-row coefficients.
// Diagonally dominant here, no pivoting needed.
template <class T>
std::vector<T> thomas(std::span<const double> lower, std::span<const double> diag,
                      std::span<const double> upper, std::span<const T> rhs) {
    const std::size_t n = rhs.size();
    std::vector<double> cp(n);
    std::vector<T> dp(n);
    cp[0] = upper[0] / diag[0];
    dp[0] = (1.0 / diag[0]) * rhs[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double den = diag[i] - lower[i] * cp[i - 1];
        cp[i] = upper[i] / den;
        dp[i] = (1.0 / den) * (rhs[i] - lower[i] * dp[i - 1]);
    }
    std::vector<T> x(n);
    x[n - 1] = dp[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = dp[i] - cp[i] * x[i + 1];
    return x;
}

// Direct solve of (I - dt Lap_h) on a 1D Neumann grid. The mirror closure
// doubles the off-diagonal entries of the boundary rows.
template <class T>
std::vector<T> solve_tridiag_neumann(std::span<const T> rhs, double sig) {
    const std::size_t n = rhs.size();
    const double d = 1.0 + 2.0 * sig;
    std::vector<double> lower(n, -sig), diag(n, d), upper(n, -sig);
    upper[0] = -2.0 * sig;
    lower[n - 1] = -2.0 * sig;
    return thomas<T>(lower, diag, upper, rhs);
}

// Cyclic tridiagonal solve via the Sherman-Morrison rank-one correction.
template <class T>
std::vector<T> solve_tridiag_cyclic(std::span<const T> rhs, double sig) {
    const std::size_t n = rhs.size();
    const double d = 1.0 + 2.0 * sig;
    const double off = -sig;
    const double gamma = -d;
    std::vector<double> lower(n, off), diag(n, d), upper(n, off);
    diag[0] = d - gamma;
    diag[n - 1] = d - off * off / gamma;
    std::vector<T> y = thomas<T>(lower, diag, upper, rhs);
    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = off;
    std::vector<double> z = thomas<double>(lower, diag, upper, u);
    // v = (1, 0, ..., 0, off/gamma)
    const T vy = y[0] + (off / gamma) * y[n - 1];
    const double vz = z[0] + (off / gamma) * z[n - 1];
    std::vector<T> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] - (z[i] / (1.0 + vz)) * vy;
    return x;
}

// Unpreconditioned conjugate gradients on (I - dt Lap_h), self-adjoint
// positive definite in the trapezoid-weighted pairing; all reductions are
// sequential so results are bit-reproducible.
template <class T>
std::vector<T> solve_cg(const Grid& g, std::span<const T> b, double dt,
                        const HelmholtzOptions& opts) {
    const std::size_t N = b.size();
    const std::vector<double> w = node_weights(g);
    auto wdot = [&](const std::vector<T>& p, const std::vector<T>& q) {
        double s = 0.0;
        for (std::size_t i = 0; i < N; ++i) s += w[i] * cdot(p[i], q[i]);
        return s;
    };
    std::vector<T> scratch(N);
    auto apply = [&](const std::vector<T>& in, std::vector<T>& out) {
        apply_stencil<T>(g, in.data(), scratch.data(), true);
        for (std::size_t i = 0; i < N; ++i) out[i] = in[i] - dt * scratch[i];
    };

    const int max_iter = opts.max_iter > 0 ? opts.max_iter : 10 * g.n * g.dim;
    std::vector<T> x(N, T{});
    std::vector<T> r(b.begin(), b.end());
    const double b2 = wdot(r, r);
    if (b2 == 0.0) return x;
    const double target = opts.rel_tol * opts.rel_tol * b2;
    double rz = b2;
    if (rz <= target) return x;
    std::vector<T> p = r;
    std::vector<T> Ap(N);
    for (int it = 0; it < max_iter; ++it) {
        apply(p, Ap);
        const double pAp = wdot(p, Ap);
        const double alpha = rz / pAp;
        for (std::size_t i = 0; i < N; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
        }
        const double rz_new = wdot(r, r);
        if (rz_new <= target) return x;
        const double beta = rz_new / rz;
        for (std::size_t i = 0; i < N; ++i) p[i] = r[i] + beta * p[i];
        rz = rz_new;
    }
    throw SolverError("helmholtz_solve: residual target " + std::to_string(opts.rel_tol) +
                          " not met after " + std::to_string(max_iter) + " iterations",
                      std::sqrt(rz / b2), max_iter);
}

template <class T>
std::vector<T> helmholtz_impl(const Grid& g, std::span<const T> m, double dt,
                              const HelmholtzOptions& opts) {
    if (dt < 0.0) throw std::invalid_argument("helmholtz_solve: dt must be >= 0");
    if (!(opts.rel_tol > 0.0)) throw std::invalid_argument("helmholtz_solve: rel_tol must be > 0");
    if (opts.max_iter < 0) throw std::invalid_argument("helmholtz_solve: max_iter must be >= 1");
    if (dt == 0.0) return std::vector<T>(m.begin(), m.end());
    if (g.dim == 1) {
        const double sig = dt / (g.h * g.h);
        return g.bc == Boundary::Neumann ? solve_tridiag_neumann<T>(m, sig)
                                         : solve_tridiag_cyclic<T>(m, sig);
    }
    return solve_cg<T>(g, m, dt, opts);
}

}  // namespace

VectorField laplacian(const VectorField& u) {
    VectorField out = make_field(u.grid);
    apply_stencil<Vec3>(u.grid, u.data.data(), out.data.data(), true);
    return out;
}

VectorField offdiag_laplacian(const VectorField& u) {
    VectorField out = make_field(u.grid);
    apply_stencil<Vec3>(u.grid, u.data.data(), out.data.data(), false);
    return out;
}

VectorField helmholtz_solve(const VectorField& m, double dt, const HelmholtzOptions& opts) {
    VectorField out{m.grid, helmholtz_impl<Vec3>(m.grid, m.data, dt, opts)};
    return out;
}

std::vector<double> laplacian_scalar(const Grid& g, std::span<const double> u) {
    std::vector<double> out(u.size());
    apply_stencil<double>(g, u.data(), out.data(), true);
    return out;
}

std::vector<double> helmholtz_solve_scalar(const Grid& g, std::span<const double> m,
                                           double dt, const HelmholtzOptions& opts) {
    return helmholtz_impl<double>(g, m, dt, opts);
}

}  // namespace llg
