#include "llg/nodal_algebra.hpp"

#include <cmath>

namespace llg {

Vec3 solve3_cramer(const Coeffs3& k, const Vec3& rhs) {
    const double a = k.a, b = k.b, c = k.c;
    const double det = 1.0 + a * a + b * b + c * c;
    const double r1 = rhs[0], r2 = rhs[1], r3 = rhs[2];
    return {(r1 * (1.0 + a * a) - r2 * (c - a * b) + r3 * (a * c + b)) / det,
            (r1 * (a * b + c) + r2 * (1.0 + b * b) - r3 * (a - b * c)) / det,
            (r1 * (a * c - b) + r2 * (a + b * c) + r3 * (1.0 + c * c)) / det};
}

namespace {

// (I - K) m for K = [[0, c, -b], [-c, 0, a], [b, -a, 0]].
inline Vec3 apply_i_minus_k(const Coeffs3& k, const Vec3& m) {
    return {m[0] - (k.c * m[1] - k.b * m[2]),
            m[1] - (-k.c * m[0] + k.a * m[2]),
            m[2] - (k.b * m[0] - k.a * m[1])};
}

}  // namespace

Vec3 cayley_step(const Vec3& H, double dt, const Vec3& m) {
    const Coeffs3 k{0.5 * dt * H[0], 0.5 * dt * H[1], 0.5 * dt * H[2]};
    return solve3_cramer(k, apply_i_minus_k(k, m));
}

Vec3 cayley_step(const Vec3& H, double dt, const Vec3& m, const Vec3& rhs_extra) {
    const Coeffs3 k{0.5 * dt * H[0], 0.5 * dt * H[1], 0.5 * dt * H[2]};
    return solve3_cramer(k, apply_i_minus_k(k, m) + rhs_extra);
}

Propagator3 constant_field_propagator(const Vec3& a_vec, double dt) {
    // Cayley transform of the skew matrix: a proper rotation,
    // A = [(1-|w|^2) I + 2 w w^T + 2 [w]_x] / (1+|w|^2) with w = (dt/2) a.
    const Vec3 w = 0.5 * dt * a_vec;
    const double w2 = dot(w, w);
    const double s = 1.0 / (1.0 + w2);
    const double d = 1.0 - w2;
    Propagator3 A;
    A.m = {s * (d + 2.0 * w[0] * w[0]), s * (2.0 * w[0] * w[1] - 2.0 * w[2]),
           s * (2.0 * w[0] * w[2] + 2.0 * w[1]),
           s * (2.0 * w[0] * w[1] + 2.0 * w[2]), s * (d + 2.0 * w[1] * w[1]),
           s * (2.0 * w[1] * w[2] - 2.0 * w[0]),
           s * (2.0 * w[0] * w[2] - 2.0 * w[1]), s * (2.0 * w[1] * w[2] + 2.0 * w[0]),
           s * (d + 2.0 * w[2] * w[2])};
    return A;
}

std::array<double, 3> iteration_spectrum(const Coeffs3& k, StepMatrixShape shape) {
    switch (shape) {
        case StepMatrixShape::Full: {
            const double r = 1.0 / std::sqrt(1.0 + k.a * k.a + k.b * k.b + k.c * k.c);
            return {1.0, r, r};
        }
        case StepMatrixShape::Step2: {
            const double s = 1.0 / std::sqrt(1.0 + k.c * k.c);
            return {1.0, s, s};
        }
        case StepMatrixShape::Step1:
            return {1.0, 1.0, 1.0};
    }
    return {1.0, 1.0, 1.0};
}

}  // namespace llg
