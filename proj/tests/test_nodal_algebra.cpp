#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "llg/nodal_algebra.hpp"
#include "oracles.hpp"

using namespace llg;

TEST_CASE("cross product identities") {
    CHECK(cross({1, 0, 0}, {0, 1, 0}) == Vec3{0, 0, 1});
    CHECK(cross({1, 2, 3}, {4, 5, 6}) == Vec3{-3, 6, -3});
    std::mt19937_64 rng(31);
    for (int i = 0; i < 100; ++i) {
        const Vec3 u = oracles::random_vec3(rng, -5, 5);
        const Vec3 v = oracles::random_vec3(rng, -5, 5);
        CHECK(norm(cross(u, u)) == 0.0);
        CHECK(std::abs(dot(cross(u, v), u)) <= 1e-13 * (1.0 + norm(u) * norm(u) * norm(v)));
        // determinant oracle: u . (v x w) = det[u; v; w]
        const Vec3 w = oracles::random_vec3(rng, -5, 5);
        const double det = oracles::det3({{{u[0], u[1], u[2]},
                                           {v[0], v[1], v[2]},
                                           {w[0], w[1], w[2]}}});
        CHECK(dot(u, cross(v, w)) == doctest::Approx(det).epsilon(1e-12));
    }
}

TEST_CASE("solve3_cramer closed form") {
    SUBCASE("identity system") {
        const Vec3 rhs{0.3, -1.2, 2.5};
        CHECK(solve3_cramer(Coeffs3{}, rhs) == rhs);
    }
    SUBCASE("determinant of the step matrix") {
        const double det = oracles::det3(oracles::step_matrix(Coeffs3{1, 2, 3}));
        CHECK(det == 15.0);
    }
    SUBCASE("matches dense elimination") {
        const Coeffs3 k{1, 2, 3};
        const Vec3 rhs{1, 0, 0};
        const Vec3 got = solve3_cramer(k, rhs);
        const Vec3 ref = oracles::solve3_dense(oracles::step_matrix(k), rhs);
        CHECK(norm(got - ref) <= 1e-14 * std::max(1.0, norm(ref)));
    }
    SUBCASE("random systems vs dense oracle") {
        std::mt19937_64 rng(32);
        double worst = 0.0;
        for (int i = 0; i < 100000; ++i) {
            const Coeffs3 k{oracles::random_vec3(rng, -5, 5)[0],
                            oracles::random_vec3(rng, -5, 5)[1],
                            oracles::random_vec3(rng, -5, 5)[2]};
            const Vec3 rhs = oracles::random_vec3(rng, -1, 1);
            const Vec3 got = solve3_cramer(k, rhs);
            const Vec3 ref = oracles::solve3_dense(oracles::step_matrix(k), rhs);
            worst = std::max(worst, norm(got - ref) / std::max(1e-30, norm(ref)));
        }
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("cayley_step") {
    std::mt19937_64 rng(33);
    SUBCASE("no torque, no motion") {
        const Vec3 m{0.1, 0.2, -0.4};
        CHECK(cayley_step(Vec3{0, 0, 0}, 0.3, m) == m);
    }
    SUBCASE("m parallel to H is a fixed point") {
        for (int i = 0; i < 50; ++i) {
            const Vec3 H = oracles::random_vec3(rng, -4, 4);
            const Vec3 m = 2.5 * H;
            const Vec3 out = cayley_step(H, 0.37, m);
            CHECK(norm(out - m) <= 1e-13 * std::max(1.0, norm(m)));
        }
    }
    SUBCASE("norm preserved to a few ulps on random inputs") {
        const double eps = std::numeric_limits<double>::epsilon();
        std::uniform_real_distribution<double> dts(1e-4, 1.0);
        double worst = 0.0;
        for (int i = 0; i < 10000; ++i) {
            const Vec3 H = oracles::random_vec3(rng, -20, 20);
            const Vec3 m = oracles::random_vec3(rng, -2, 2);
            const Vec3 out = cayley_step(H, dts(rng), m);
            const double nm = norm(m);
            worst = std::max(worst, std::abs(norm(out) - nm) / std::max(1e-300, nm));
        }
        CHECK(worst <= 8.0 * eps);
    }
}

TEST_CASE("constant_field_propagator") {
    std::mt19937_64 rng(34);
    SUBCASE("zero field gives the identity") {
        const Propagator3 A = constant_field_propagator(Vec3{0, 0, 0}, 0.5);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) CHECK(A(r, c) == (r == c ? 1.0 : 0.0));
    }
    SUBCASE("orthogonal with unit determinant, reproduces cayley_step") {
        std::uniform_real_distribution<double> dts(1e-3, 2.0);
        for (int i = 0; i < 200; ++i) {
            const Vec3 a = oracles::random_vec3(rng, -5, 5);
            const double dt = dts(rng);
            const Propagator3 A = constant_field_propagator(a, dt);

            // A^T A = I
            for (int r = 0; r < 3; ++r) {
                for (int c = 0; c < 3; ++c) {
                    double s = 0.0;
                    for (int k = 0; k < 3; ++k) s += A(k, r) * A(k, c);
                    CHECK(std::abs(s - (r == c ? 1.0 : 0.0)) <= 1e-14);
                }
            }
            // det = +1
            const double det = oracles::det3({{{A(0, 0), A(0, 1), A(0, 2)},
                                               {A(1, 0), A(1, 1), A(1, 2)},
                                               {A(2, 0), A(2, 1), A(2, 2)}}});
            CHECK(det == doctest::Approx(1.0).epsilon(1e-12));

            const Vec3 m = oracles::random_vec3(rng, -2, 2);
            CHECK(norm(A.apply(m) - cayley_step(a, dt, m)) <= 1e-13 * std::max(1.0, norm(m)));
        }
    }
    SUBCASE("axis-aligned field matches the dense inverse product") {
        const Vec3 a{0.0, 0.0, 1.7};
        const double dt = 0.6;
        const Propagator3 A = constant_field_propagator(a, dt);
        // dense (I+K)^{-1}(I-K): solve (I+K) x = (I-K) e_j column by column
        const Coeffs3 k{0.5 * dt * a[0], 0.5 * dt * a[1], 0.5 * dt * a[2]};
        const auto IK = oracles::step_matrix(k);
        for (int col = 0; col < 3; ++col) {
            Vec3 e{0, 0, 0};
            e[col] = 1.0;
            const Vec3 rhs{e[0] - (k.c * e[1] - k.b * e[2]),
                           e[1] - (-k.c * e[0] + k.a * e[2]),
                           e[2] - (k.b * e[0] - k.a * e[1])};
            const Vec3 x = oracles::solve3_dense(IK, rhs);
            for (int r = 0; r < 3; ++r) CHECK(A(r, col) == doctest::Approx(x[r]).epsilon(1e-14));
        }
    }
}

TEST_CASE("iteration_spectrum closed forms") {
    SUBCASE("reference values") {
        const auto id = iteration_spectrum(Coeffs3{}, StepMatrixShape::Full);
        CHECK(id == std::array<double, 3>{1.0, 1.0, 1.0});

        const auto full = iteration_spectrum(Coeffs3{1, 2, 3}, StepMatrixShape::Full);
        CHECK(full[0] == 1.0);
        CHECK(full[1] == doctest::Approx(1.0 / std::sqrt(15.0)).epsilon(1e-15));
        CHECK(full[2] == full[1]);

        const auto s2 = iteration_spectrum(Coeffs3{5, 7, 1}, StepMatrixShape::Step2);
        CHECK(s2[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));

        const auto s1 = iteration_spectrum(Coeffs3{5, 7, 1}, StepMatrixShape::Step1);
        CHECK(s1 == std::array<double, 3>{1.0, 1.0, 1.0});
    }
    SUBCASE("magnitudes from matrix invariants") {
        // the nontrivial eigenpair magnitude satisfies r = 1/sqrt(det), and
        // lambda = 1 is always an eigenvalue (det(A - I) = 0)
        std::mt19937_64 rng(35);
        for (int i = 0; i < 1000; ++i) {
            const Vec3 v = oracles::random_vec3(rng, -3, 3);
            const Coeffs3 k{v[0], v[1], v[2]};
            auto full_matrix = oracles::step_matrix(k);
            auto step2_matrix = full_matrix;
            step2_matrix[2] = {0.0, 0.0, 1.0};

            for (auto shape : {StepMatrixShape::Full, StepMatrixShape::Step2}) {
                const auto& M = shape == StepMatrixShape::Full ? full_matrix : step2_matrix;
                const auto spec = iteration_spectrum(k, shape);
                CHECK(spec[0] == 1.0);
                CHECK(spec[1] == spec[2]);
                CHECK(spec[1] <= 1.0);
                CHECK(std::abs(spec[1] - 1.0 / std::sqrt(oracles::det3(M))) <= 1e-14);
                auto shifted = M;
                for (int d = 0; d < 3; ++d) shifted[d][d] -= 1.0;
                CHECK(std::abs(oracles::det3(shifted)) <= 1e-12);
            }
        }
    }
}
