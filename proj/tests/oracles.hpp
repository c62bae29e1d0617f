// Test-only reference implementations: dense linear algebra, independently
// assembled stencil matrices, high-order finite differences, quadrature.
// These must stay independent of the production solve paths they check.

#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "llg/grid.hpp"
#include "llg/nodal_algebra.hpp"

namespace oracles {

using llg::operator+;
using llg::operator-;
using llg::operator*;
using llg::operator+=;
using llg::operator-=;

// ---------------------------------------------------------------------------
// dense matrices

struct Dense {
    std::size_t n = 0;
    std::vector<double> a;  // row-major

    explicit Dense(std::size_t size) : n(size), a(size * size, 0.0) {}
    double& at(std::size_t r, std::size_t c) { return a[r * n + c]; }
    double at(std::size_t r, std::size_t c) const { return a[r * n + c]; }
};

// Gaussian elimination with partial pivoting.
inline std::vector<double> dense_solve(Dense m, std::vector<double> b) {
    const std::size_t n = m.n;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(m.at(r, col)) > std::abs(m.at(pivot, col))) pivot = r;
        }
        if (m.at(pivot, col) == 0.0) throw std::runtime_error("dense_solve: singular matrix");
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(m.at(col, c), m.at(pivot, c));
            std::swap(b[col], b[pivot]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = m.at(r, col) / m.at(col, col);
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) m.at(r, c) -= f * m.at(col, c);
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t r = n; r-- > 0;) {
        double s = b[r];
        for (std::size_t c = r + 1; c < n; ++c) s -= m.at(r, c) * x[c];
        x[r] = s / m.at(r, r);
    }
    return x;
}

inline double det3(const std::array<std::array<double, 3>, 3>& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

inline std::array<std::array<double, 3>, 3> step_matrix(const llg::Coeffs3& k) {
    return {{{1.0, k.c, -k.b}, {-k.c, 1.0, k.a}, {k.b, -k.a, 1.0}}};
}

inline llg::Vec3 solve3_dense(const std::array<std::array<double, 3>, 3>& m,
                              const llg::Vec3& rhs) {
    Dense d(3);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) d.at(r, c) = m[r][c];
    const std::vector<double> x = dense_solve(d, {rhs[0], rhs[1], rhs[2]});
    return {x[0], x[1], x[2]};
}

// ---------------------------------------------------------------------------
// independently assembled stencil matrices (accumulation over neighbor
// visits, so mirrored ghosts fold into interior columns)

inline int closure(int i, int n, llg::Boundary bc) {
    if (bc == llg::Boundary::Periodic) return (i + n) % n;
    if (i < 0) return -i;            // mirror: u_{-1} = u_1
    if (i >= n) return 2 * n - 2 - i;  // mirror: u_n = u_{n-2}
    return i;
}

inline Dense assemble_laplacian(const llg::Grid& g) {
    const int n = g.n;
    const double ih2 = 1.0 / (g.h * g.h);
    Dense m(g.node_count());
    auto visit1d = [&](std::size_t row, int i) {
        m.at(row, static_cast<std::size_t>(closure(i - 1, n, g.bc))) += ih2;
        m.at(row, static_cast<std::size_t>(closure(i + 1, n, g.bc))) += ih2;
        m.at(row, row) -= 2.0 * ih2;
    };
    if (g.dim == 1) {
        for (int i = 0; i < n; ++i) visit1d(static_cast<std::size_t>(i), i);
        return m;
    }
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                const std::size_t row = g.index(i, j, k);
                m.at(row, g.index(closure(i - 1, n, g.bc), j, k)) += ih2;
                m.at(row, g.index(closure(i + 1, n, g.bc), j, k)) += ih2;
                m.at(row, g.index(i, closure(j - 1, n, g.bc), k)) += ih2;
                m.at(row, g.index(i, closure(j + 1, n, g.bc), k)) += ih2;
                m.at(row, g.index(i, j, closure(k - 1, n, g.bc))) += ih2;
                m.at(row, g.index(i, j, closure(k + 1, n, g.bc))) += ih2;
                m.at(row, row) -= 6.0 * ih2;
            }
        }
    }
    return m;
}

inline Dense assemble_helmholtz(const llg::Grid& g, double dt) {
    Dense m = assemble_laplacian(g);
    for (std::size_t r = 0; r < m.n; ++r) {
        for (std::size_t c = 0; c < m.n; ++c) m.at(r, c) *= -dt;
        m.at(r, r) += 1.0;
    }
    return m;
}

// ---------------------------------------------------------------------------
// differentiation and quadrature

// Fourth-order central second derivative of a scalar callable.
inline double fd_second_derivative(const std::function<double(double)>& f, double x,
                                   double delta) {
    return (-f(x - 2 * delta) + 16.0 * f(x - delta) - 30.0 * f(x) + 16.0 * f(x + delta) -
            f(x + 2 * delta)) /
           (12.0 * delta * delta);
}

// Fourth-order central first derivative.
inline double fd_first_derivative(const std::function<double(double)>& f, double x,
                                  double delta) {
    return (f(x - 2 * delta) - 8.0 * f(x - delta) + 8.0 * f(x + delta) - f(x + 2 * delta)) /
           (12.0 * delta);
}

// Composite trapezoid rule on a fine uniform grid.
inline double quadrature(const std::function<double(double)>& f, double a, double b,
                         int panels) {
    double s = 0.5 * (f(a) + f(b));
    const double dx = (b - a) / panels;
    for (int i = 1; i < panels; ++i) s += f(a + i * dx);
    return s * dx;
}

// ---------------------------------------------------------------------------
// random helpers

inline llg::Vec3 random_vec3(std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    return {d(rng), d(rng), d(rng)};
}

inline llg::Vec3 random_unit_vec3(std::mt19937_64& rng) {
    std::normal_distribution<double> d(0.0, 1.0);
    for (;;) {
        const llg::Vec3 v{d(rng), d(rng), d(rng)};
        const double r = llg::norm(v);
        if (r > 1e-3) return (1.0 / r) * v;
    }
}

inline llg::VectorField random_field(const llg::Grid& g, std::mt19937_64& rng, double lo = -1.0,
                                     double hi = 1.0) {
    llg::VectorField f = llg::make_field(g);
    for (auto& v : f.data) v = random_vec3(rng, lo, hi);
    return f;
}

inline llg::VectorField random_unit_field(const llg::Grid& g, std::mt19937_64& rng) {
    llg::VectorField f = llg::make_field(g);
    for (auto& v : f.data) v = random_unit_vec3(rng);
    return f;
}

// Rodrigues rotation about a unit axis.
inline llg::Vec3 rotate(const llg::Vec3& v, const llg::Vec3& axis, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return c * v + s * llg::cross(axis, v) + ((1.0 - c) * llg::dot(axis, v)) * axis;
}

}  // namespace oracles
