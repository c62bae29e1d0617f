#pragma once

#include <array>

#include "llg/vec3.hpp"

namespace llg {

/// Entries of the skew matrix K = [[0, c, -b], [-c, 0, a], [b, -a, 0]],
/// with (a,b,c) = (dt/2) * effective-field components in the step systems.
struct Coeffs3 {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

/// Row-major 3x3 matrix.
struct Propagator3 {
    std::array<double, 9> m{};

    double operator()(int r, int c) const { return m[3 * r + c]; }
    Vec3 apply(const Vec3& v) const {
        return {m[0] * v[0] + m[1] * v[1] + m[2] * v[2],
                m[3] * v[0] + m[4] * v[1] + m[5] * v[2],
                m[6] * v[0] + m[7] * v[1] + m[8] * v[2]};
    }
};

/// x solving (I + K) x = rhs via the closed-form determinant and adjugate
/// expressions; det = 1 + a^2 + b^2 + c^2 >= 1, never singular.
Vec3 solve3_cramer(const Coeffs3& k, const Vec3& rhs);

/// One Cayley update (I + K) m' = (I - K) m with K built from (dt/2) H.
/// Preserves |m| to roundoff.
Vec3 cayley_step(const Vec3& H, double dt, const Vec3& m);

/// Cayley update with an extra additive right-hand-side term (forcing,
/// already scaled by the caller).
Vec3 cayley_step(const Vec3& H, double dt, const Vec3& m, const Vec3& rhs_extra);

/// Closed-form propagator for a constant effective field: the rotation
/// (I + K)^{-1} (I - K) with K from (dt/2) a_vec. A.apply(m) reproduces
/// cayley_step(a_vec, dt, m) for every m.
Propagator3 constant_field_propagator(const Vec3& a_vec, double dt);

enum class StepMatrixShape { Full, Step2, Step1 };

/// Magnitudes of the eigenvalues of the inverse step matrix, descending:
///   Full:  {1, r, r},  r = 1/sqrt(1 + a^2 + b^2 + c^2)
///   Step2: {1, s, s},  s = 1/sqrt(1 + c^2)
///   Step1: {1, 1, 1}
std::array<double, 3> iteration_spectrum(const Coeffs3& k, StepMatrixShape shape);

}  // namespace llg
