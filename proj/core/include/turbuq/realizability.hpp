#pragma once

#include "turbuq/types.hpp"

#include <array>

namespace turbuq {

/// Geometry of the barycentric realizability triangle: an equilateral
/// triangle with edge length one whose vertices are the limiting turbulence
/// states (one-component, two-component isotropic, three-component isotropic).
struct TriangleGeometry {
    static constexpr std::array<double, 2> vertex_1c{1.0, 0.0};
    static constexpr std::array<double, 2> vertex_2c{0.0, 0.0};
    static constexpr std::array<double, 2> vertex_3c{0.5, 0.8660254037844386};
};

enum class Vertex { OneComponent, TwoComponent, ThreeComponent };

std::array<double, 2> vertex_position(Vertex v);

/// Tolerance below which slightly negative barycentric weights are treated as
/// floating-point noise and clamped to zero.
inline constexpr double kRealizabilityTol = 1e-12;

/// A point of the barycentric triangle: 2-D Cartesian coordinates in the
/// triangle plane plus the three barycentric weights. Points outside the
/// triangle are representable (realizable() reports false); weights always
/// sum to one.
class BarycentricPoint {
public:
    /// Construct from raw weights. The weights are renormalized so the stored
    /// sum is exactly one and negative noise above -kRealizabilityTol is
    /// clamped to zero; the Cartesian position is derived from the cleaned
    /// weights. Feeding a constructed point's weights back in reproduces it
    /// bit for bit. A sum farther than 0.5 from one is a caller bug and is
    /// rejected.
    static BarycentricPoint from_weights(double w1c, double w2c, double w3c);

    /// Construct from a Cartesian position by inverting the affine vertex map.
    static BarycentricPoint from_cartesian(double x, double y);

    double x() const { return x_; }
    double y() const { return y_; }
    double w1c() const { return w_[0]; }
    double w2c() const { return w_[1]; }
    double w3c() const { return w_[2]; }
    const std::array<double, 3>& weights() const { return w_; }

    /// True when all weights are >= -kRealizabilityTol, i.e. the point lies
    /// inside the triangle up to floating-point noise.
    bool realizable() const;

private:
    BarycentricPoint() = default;
    double x_ = 0.0, y_ = 0.0;
    std::array<double, 3> w_{};
};

/// Eigendecomposition of a symmetric 3x3 tensor. Eigenvalues are sorted in
/// descending order; column i of the orthonormal eigenvector matrix pairs
/// with eigenvalue i. Sign convention: the first component of each column
/// with magnitude > 1e-8 is nonnegative.
struct EigenDecomposition {
    std::array<double, 3> eigenvalues{};
    Mat3 eigenvectors;

    /// v * diag(lambda) * v^T
    SymmetricTensor3 reconstruct() const;
};

/// a_ij = tau_ij / k - (2/3) delta_ij with k = tau_ii / 2.
/// Below k_floor the turbulence energy is treated as vanished and the zero
/// (three-component isotropic) anisotropy is returned. Throws on
/// trace(tau) < -1e-12.
SymmetricTensor3 anisotropy_from_stress(const SymmetricTensor3& tau, double k_floor = 1e-10);

/// Cyclic Jacobi eigensolver for symmetric 3x3 tensors. Unconditionally
/// robust, including for (nearly) degenerate eigenvalues.
EigenDecomposition eigendecompose(const SymmetricTensor3& a);

/// Maps ordered traceless anisotropy eigenvalues to the barycentric triangle:
/// weights ((l1-l2)/2, l2-l3, 3 l3/2 + 1). Throws on unordered or
/// non-traceless input (tolerance 1e-10).
BarycentricPoint to_barycentric(const std::array<double, 3>& lambda);

/// Inverse barycentric map. Requires a realizable point; returns eigenvalues
/// sorted descending with zero trace.
std::array<double, 3> from_barycentric(const BarycentricPoint& p);

/// Linear shift towards a limiting state: x* = x + delta_b (x_t - x) with
/// delta_b in [0, 1]. Realizability is preserved by convexity.
BarycentricPoint perturb_toward_vertex(const BarycentricPoint& p, Vertex target, double delta_b);

/// Euclidean distance between two barycentric positions; bounded by the
/// triangle edge length, so the result lies in [0, 1] for realizable inputs.
double perturbation_strength(const BarycentricPoint& a, const BarycentricPoint& b);

/// tau* = k (v diag(lambda*) v^T + (2/3) I). lambda* must be ordered,
/// traceless and realizable; the result has trace 2k and is positive
/// semidefinite.
SymmetricTensor3 reconstruct_perturbed_stress(double k, const Mat3& eigenvectors,
                                              const std::array<double, 3>& lambda_star);

/// Barycentric state of a Reynolds stress tensor: anisotropy, spectrum,
/// triangle position in one step. Degenerate k maps to the 3C vertex.
BarycentricPoint barycentric_of_stress(const SymmetricTensor3& tau, double k_floor = 1e-10);

} // namespace turbuq
