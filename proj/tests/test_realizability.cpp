/// @file test_realizability.cpp
/// @brief Barycentric map, eigendecomposition and perturbation contracts.
///
/// The hand-derived anchors: the three limiting-state eigenvalue triples and
/// their vertices, one interior triple worked out on paper
/// (lambda = (1/3, 0, -1/3) -> weights (1/6, 1/3, 1/2)), and small linear
/// interpolation / distance examples. Everything else is property-based over
/// seeded random draws.

#include "doctest.h"
#include "test_support.hpp"

#include "turbuq/errors.hpp"
#include "turbuq/realizability.hpp"

#include <array>
#include <cmath>

using namespace turbuq;
using turbuq::test::random_realizable_point;
using turbuq::test::random_realizable_stress;
using turbuq::test::random_rotation;
using turbuq::test::random_symmetric;

namespace {

constexpr double kSqrt3Over2 = 0.8660254037844386;

double weight_distance(const BarycentricPoint& a, const BarycentricPoint& b) {
    double m = 0.0;
    for (int i = 0; i < 3; ++i) m = std::max(m, std::abs(a.weights()[i] - b.weights()[i]));
    return m;
}

/// Smallest eigenvalue estimate via the characteristic polynomial roots of
/// the reconstructed matrix; used only for PSD checks.
double min_eigenvalue(const SymmetricTensor3& t) {
    return eigendecompose(t).eigenvalues[2];
}

} // namespace

TEST_SUITE("realizability") {

TEST_CASE("triangle vertices form a unit equilateral triangle") {
    const auto v1 = vertex_position(Vertex::OneComponent);
    const auto v2 = vertex_position(Vertex::TwoComponent);
    const auto v3 = vertex_position(Vertex::ThreeComponent);
    CHECK(v1 == TriangleGeometry::vertex_1c);
    CHECK(v2 == TriangleGeometry::vertex_2c);
    CHECK(v3 == TriangleGeometry::vertex_3c);

    auto dist = [](const std::array<double, 2>& a, const std::array<double, 2>& b) {
        return std::hypot(a[0] - b[0], a[1] - b[1]);
    };
    CHECK(std::abs(dist(v1, v2) - 1.0) < 1e-15);
    CHECK(std::abs(dist(v2, v3) - 1.0) < 1e-15);
    CHECK(std::abs(dist(v3, v1) - 1e0) < 1e-15);
}

TEST_CASE("anisotropy of limiting stresses") {
    SUBCASE("isotropic stress has zero anisotropy") {
        const auto a = anisotropy_from_stress(SymmetricTensor3::diagonal(2.0 / 3, 2.0 / 3, 2.0 / 3));
        CHECK(a.max_abs() < 1e-15);
    }
    SUBCASE("one-component stress") {
        const auto a = anisotropy_from_stress(SymmetricTensor3::diagonal(2.0, 0.0, 0.0));
        CHECK(a.xx == doctest::Approx(4.0 / 3).epsilon(1e-14));
        CHECK(a.yy == doctest::Approx(-2.0 / 3).epsilon(1e-14));
        CHECK(a.zz == doctest::Approx(-2.0 / 3).epsilon(1e-14));
        CHECK(std::abs(a.xy) + std::abs(a.xz) + std::abs(a.yz) == 0.0);
    }
    SUBCASE("energy below the floor maps to the isotropic convention") {
        const auto a = anisotropy_from_stress(SymmetricTensor3::diagonal(1e-14, 0.0, 0.0));
        CHECK(a.max_abs() == 0.0);
    }
    SUBCASE("negative turbulence energy is rejected") {
        CHECK_THROWS_AS(anisotropy_from_stress(SymmetricTensor3::diagonal(-1.0, 0.0, 0.0)),
                        data_error);
    }
    SUBCASE("anisotropy is traceless for random realizable stresses") {
        SplitMix64 rng(7001);
        for (int i = 0; i < 100; ++i) {
            const auto tau = random_realizable_stress(rng, 3.0);
            const auto a = anisotropy_from_stress(tau);
            CHECK(std::abs(a.trace()) < 1e-12);
        }
    }
}

TEST_CASE("eigendecomposition reconstructs and orders") {
    SUBCASE("diagonal input") {
        const auto ed = eigendecompose(SymmetricTensor3::diagonal(0.5, 0.0, -0.5));
        CHECK(ed.eigenvalues[0] == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(ed.eigenvalues[1] == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(ed.eigenvalues[2] == doctest::Approx(-0.5).epsilon(1e-14));
        // Eigenvectors of a diagonal matrix are the coordinate axes; compare
        // through the reconstruction since column signs are conventional.
        CHECK(max_abs_difference(ed.reconstruct(), SymmetricTensor3::diagonal(0.5, 0.0, -0.5)) <
              1e-14);
    }
    SUBCASE("zero tensor") {
        const auto ed = eigendecompose(SymmetricTensor3{});
        for (double l : ed.eigenvalues) CHECK(l == 0.0);
        // Eigenvector matrix must still be orthonormal.
        const Mat3 vtv = ed.eigenvectors.transposed() * ed.eigenvectors;
        CHECK((vtv - Mat3::identity()).max_abs() < 1e-14);
    }
    SUBCASE("random symmetric tensors") {
        SplitMix64 rng(7002);
        for (int i = 0; i < 300; ++i) {
            const auto t = random_symmetric(rng, 2.0);
            const auto ed = eigendecompose(t);
            CHECK(ed.eigenvalues[0] >= ed.eigenvalues[1]);
            CHECK(ed.eigenvalues[1] >= ed.eigenvalues[2]);
            CHECK(max_abs_difference(ed.reconstruct(), t) < 1e-10);
            const Mat3 vtv = ed.eigenvectors.transposed() * ed.eigenvectors;
            CHECK((vtv - Mat3::identity()).max_abs() < 1e-12);
        }
    }
    SUBCASE("deterministic column signs") {
        SplitMix64 rng(7003);
        for (int i = 0; i < 50; ++i) {
            const auto ed = eigendecompose(random_symmetric(rng));
            for (int c = 0; c < 3; ++c) {
                for (int r = 0; r < 3; ++r) {
                    const double v = ed.eigenvectors(r, c);
                    if (std::abs(v) > 1e-8) {
                        CHECK(v > 0.0);
                        break;
                    }
                }
            }
        }
    }
    SUBCASE("near-degenerate spectra still reconstruct") {
        // Two eigenvalues 1e-13 apart; closed-form root solvers lose digits
        // here, the Jacobi sweep must not.
        SymmetricTensor3 t = SymmetricTensor3::diagonal(1.0, 1.0 + 1e-13, -2.0 - 1e-13);
        t.xy = 1e-14;
        const auto ed = eigendecompose(t);
        CHECK(max_abs_difference(ed.reconstruct(), t) < 1e-12);
    }
}

TEST_CASE("forward barycentric map hits the anchors") {
    SUBCASE("three-component isotropic") {
        const auto p = to_barycentric({0.0, 0.0, 0.0});
        CHECK(std::abs(p.x() - 0.5) < 1e-15);
        CHECK(std::abs(p.y() - kSqrt3Over2) < 1e-15);
    }
    SUBCASE("one-component limit") {
        const auto p = to_barycentric({4.0 / 3, -2.0 / 3, -2.0 / 3});
        CHECK(std::abs(p.x() - 1.0) < 1e-15);
        CHECK(std::abs(p.y()) < 1e-15);
    }
    SUBCASE("two-component isotropic limit") {
        const auto p = to_barycentric({1.0 / 3, 1.0 / 3, -2.0 / 3});
        CHECK(std::abs(p.x()) < 1e-15);
        CHECK(std::abs(p.y()) < 1e-15);
    }
    SUBCASE("interior point worked out by hand") {
        // lambda = (1/3, 0, -1/3): w1 = (1/3)/2 = 1/6, w2 = 1/3,
        // w3 = 1 - 1/2 = 1/2; x = 1/6 + 1/2 * 1/2 = 5/12, y = sqrt(3)/4.
        const auto p = to_barycentric({1.0 / 3, 0.0, -1.0 / 3});
        CHECK(p.w1c() == doctest::Approx(1.0 / 6).epsilon(1e-14));
        CHECK(p.w2c() == doctest::Approx(1.0 / 3).epsilon(1e-14));
        CHECK(p.w3c() == doctest::Approx(1.0 / 2).epsilon(1e-14));
        CHECK(p.x() == doctest::Approx(5.0 / 12).epsilon(1e-14));
        CHECK(p.y() == doctest::Approx(std::sqrt(3.0) / 4).epsilon(1e-14));
        CHECK(p.realizable());
    }
    SUBCASE("unordered eigenvalues are rejected") {
        CHECK_THROWS_AS(to_barycentric({0.0, 0.2, -0.2}), std::invalid_argument);
    }
    SUBCASE("non-traceless eigenvalues are rejected") {
        CHECK_THROWS_AS(to_barycentric({0.5, 0.0, -0.4}), std::invalid_argument);
    }
}

TEST_CASE("inverse barycentric map") {
    SUBCASE("vertices map back to the limiting spectra") {
        const auto l3 = from_barycentric(BarycentricPoint::from_weights(0, 0, 1));
        for (double l : l3) CHECK(std::abs(l) < 1e-15);
        const auto l1 = from_barycentric(BarycentricPoint::from_weights(1, 0, 0));
        CHECK(l1[0] == doctest::Approx(4.0 / 3).epsilon(1e-14));
        CHECK(l1[1] == doctest::Approx(-2.0 / 3).epsilon(1e-14));
        CHECK(l1[2] == doctest::Approx(-2.0 / 3).epsilon(1e-14));
    }
    SUBCASE("hand-computed interior point") {
        const auto l = from_barycentric(BarycentricPoint::from_cartesian(5.0 / 12, std::sqrt(3.0) / 4));
        CHECK(l[0] == doctest::Approx(1.0 / 3).epsilon(1e-12));
        CHECK(std::abs(l[1]) < 1e-12);
        CHECK(l[2] == doctest::Approx(-1.0 / 3).epsilon(1e-12));
    }
    SUBCASE("points outside the triangle are rejected") {
        CHECK_THROWS_AS(from_barycentric(BarycentricPoint::from_cartesian(2.0, 0.0)),
                        std::invalid_argument);
    }
}

TEST_CASE("barycentric weights are consistent with the cartesian position") {
    SplitMix64 rng(7010);
    for (int i = 0; i < 200; ++i) {
        const auto p = random_realizable_point(rng);
        CHECK(std::abs(p.w1c() + p.w2c() + p.w3c() - 1.0) < 1e-12);
        const double x = p.w1c() * TriangleGeometry::vertex_1c[0] +
                         p.w2c() * TriangleGeometry::vertex_2c[0] +
                         p.w3c() * TriangleGeometry::vertex_3c[0];
        const double y = p.w1c() * TriangleGeometry::vertex_1c[1] +
                         p.w2c() * TriangleGeometry::vertex_2c[1] +
                         p.w3c() * TriangleGeometry::vertex_3c[1];
        CHECK(std::abs(p.x() - x) < 1e-12);
        CHECK(std::abs(p.y() - y) < 1e-12);
    }
}

TEST_CASE("from_weights re-closes noisy sums and clamps noise") {
    // A slightly open sum is renormalized back to exactly one.
    const auto p = BarycentricPoint::from_weights(0.5 + 1e-13, 0.25, 0.25);
    CHECK(p.w1c() + p.w2c() + p.w3c() == 1.0);
    CHECK(p.w1c() == doctest::Approx(0.5).epsilon(1e-12));

    const auto q = BarycentricPoint::from_weights(1.0 + 5e-13, -5e-13, 0.0);
    CHECK(q.realizable());
    CHECK(q.w2c() == 0.0);

    const auto outside = BarycentricPoint::from_weights(1.5, -0.5, 0.0);
    CHECK_FALSE(outside.realizable());

    // Weights that are not a mildly perturbed partition of one are a
    // caller bug, not noise.
    CHECK_THROWS_AS(BarycentricPoint::from_weights(2.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(BarycentricPoint::from_weights(0.1, 0.1, 0.1), std::invalid_argument);
}

TEST_CASE("roundtrip through both map directions") {
    SplitMix64 rng(7020);
    for (int i = 0; i < 200; ++i) {
        const auto p = random_realizable_point(rng);
        const auto lambda = from_barycentric(p);
        CHECK(std::abs(lambda[0] + lambda[1] + lambda[2]) < 1e-12);
        const auto back = to_barycentric(lambda);
        CHECK(std::hypot(back.x() - p.x(), back.y() - p.y()) < 1e-10);
        CHECK(weight_distance(back, p) < 1e-10);
    }
}

TEST_CASE("perturbation toward a vertex") {
    SUBCASE("zero strength is the identity") {
        const auto p = BarycentricPoint::from_cartesian(0.4, 0.3);
        const auto q = perturb_toward_vertex(p, Vertex::OneComponent, 0.0);
        CHECK(q.x() == p.x());
        CHECK(q.y() == p.y());
    }
    SUBCASE("unit strength lands on the vertex") {
        const auto p = BarycentricPoint::from_cartesian(0.4, 0.3);
        const auto q = perturb_toward_vertex(p, Vertex::TwoComponent, 1.0);
        CHECK(std::abs(q.x()) < 1e-15);
        CHECK(std::abs(q.y()) < 1e-15);
    }
    SUBCASE("midpoint interpolation") {
        const auto p = BarycentricPoint::from_cartesian(0.5, 0.2);
        const auto q = perturb_toward_vertex(p, Vertex::OneComponent, 0.5);
        CHECK(q.x() == doctest::Approx(0.75).epsilon(1e-14));
        CHECK(q.y() == doctest::Approx(0.1).epsilon(1e-14));
    }
    SUBCASE("strength outside [0, 1] is rejected") {
        const auto p = BarycentricPoint::from_cartesian(0.5, 0.2);
        CHECK_THROWS_AS(perturb_toward_vertex(p, Vertex::OneComponent, -0.01),
                        std::invalid_argument);
        CHECK_THROWS_AS(perturb_toward_vertex(p, Vertex::OneComponent, 1.01),
                        std::invalid_argument);
    }
    SUBCASE("convexity: perturbed points stay realizable") {
        SplitMix64 rng(7030);
        const Vertex targets[] = {Vertex::OneComponent, Vertex::TwoComponent,
                                  Vertex::ThreeComponent};
        for (int i = 0; i < 300; ++i) {
            const auto p = random_realizable_point(rng);
            const auto target = targets[rng.next_below(3)];
            const auto q = perturb_toward_vertex(p, target, rng.next_double());
            CHECK(q.realizable());
        }
    }
}

TEST_CASE("perturbation strength is the barycentric distance") {
    const auto a = BarycentricPoint::from_cartesian(0.3, 0.1);
    const auto b = BarycentricPoint::from_cartesian(0.6, 0.5);
    CHECK(perturbation_strength(a, a) == 0.0);
    CHECK(perturbation_strength(a, b) == doctest::Approx(0.5).epsilon(1e-14));

    const auto v1 = BarycentricPoint::from_weights(1, 0, 0);
    const auto v2 = BarycentricPoint::from_weights(0, 1, 0);
    CHECK(perturbation_strength(v1, v2) == doctest::Approx(1.0).epsilon(1e-14));

    SplitMix64 rng(7040);
    for (int i = 0; i < 200; ++i) {
        const auto p = random_realizable_point(rng);
        const auto q = random_realizable_point(rng);
        const auto r = random_realizable_point(rng);
        const double pq = perturbation_strength(p, q);
        CHECK(pq == perturbation_strength(q, p));
        CHECK(pq >= 0.0);
        CHECK(pq <= 1.0);
        CHECK(pq <= perturbation_strength(p, r) + perturbation_strength(r, q) + 1e-14);
    }
}

TEST_CASE("stress reconstruction from a perturbed spectrum") {
    SUBCASE("isotropic spectrum gives the isotropic stress") {
        const auto tau = reconstruct_perturbed_stress(1.0, Mat3::identity(), {0.0, 0.0, 0.0});
        CHECK(max_abs_difference(tau, SymmetricTensor3::diagonal(2.0 / 3, 2.0 / 3, 2.0 / 3)) <
              1e-15);
    }
    SUBCASE("zero energy gives the zero tensor") {
        const auto tau =
            reconstruct_perturbed_stress(0.0, Mat3::identity(), {4.0 / 3, -2.0 / 3, -2.0 / 3});
        CHECK(tau.max_abs() == 0.0);
    }
    SUBCASE("one-component spectrum in the lab frame") {
        const auto tau =
            reconstruct_perturbed_stress(1.0, Mat3::identity(), {4.0 / 3, -2.0 / 3, -2.0 / 3});
        CHECK(max_abs_difference(tau, SymmetricTensor3::diagonal(2.0, 0.0, 0.0)) < 1e-14);
    }
    SUBCASE("non-realizable spectra are rejected") {
        CHECK_THROWS_AS(reconstruct_perturbed_stress(1.0, Mat3::identity(), {2.0, -1.0, -1.0}),
                        std::invalid_argument);
        CHECK_THROWS_AS(reconstruct_perturbed_stress(-1.0, Mat3::identity(), {0.0, 0.0, 0.0}),
                        std::invalid_argument);
    }
    SUBCASE("trace and positive semidefiniteness on random inputs") {
        SplitMix64 rng(7050);
        for (int i = 0; i < 200; ++i) {
            const double k = 0.1 + 2.0 * rng.next_double();
            const auto lambda = from_barycentric(random_realizable_point(rng));
            const auto v = random_rotation(rng);
            const auto tau = reconstruct_perturbed_stress(k, v, lambda);
            CHECK(std::abs(tau.trace() - 2.0 * k) < 1e-10);
            CHECK(min_eigenvalue(tau) > -1e-10);
        }
    }
}

TEST_CASE("full chain recovers a realizable stress") {
    // stress -> anisotropy -> spectrum -> triangle -> spectrum -> stress with
    // zero perturbation must be the identity.
    SplitMix64 rng(7060);
    for (int i = 0; i < 100; ++i) {
        const auto tau = random_realizable_stress(rng, 2.0);
        const double k = 0.5 * tau.trace();
        const auto a = anisotropy_from_stress(tau);
        const auto ed = eigendecompose(a);
        const auto p = to_barycentric(ed.eigenvalues);
        const auto p0 = perturb_toward_vertex(p, Vertex::OneComponent, 0.0);
        const auto lambda = from_barycentric(p0);
        const auto tau_back = reconstruct_perturbed_stress(k, ed.eigenvectors, lambda);
        CHECK(max_abs_difference(tau_back, tau) < 1e-9);
    }
}

TEST_CASE("barycentric state of a stress tensor") {
    SplitMix64 rng(7070);
    for (int i = 0; i < 100; ++i) {
        const auto p = random_realizable_point(rng);
        const auto lambda = from_barycentric(p);
        const auto v = random_rotation(rng);
        const auto tau = reconstruct_perturbed_stress(1.3, v, lambda);
        const auto q = barycentric_of_stress(tau);
        CHECK(std::hypot(q.x() - p.x(), q.y() - p.y()) < 1e-9);
    }
    // Vanishing energy maps to the isotropic vertex.
    const auto q = barycentric_of_stress(SymmetricTensor3::diagonal(1e-13, 1e-13, 1e-13));
    CHECK(std::abs(q.x() - 0.5) < 1e-15);
    CHECK(std::abs(q.y() - kSqrt3Over2) < 1e-15);
}

} // TEST_SUITE
