/// @file realizability.cpp
/// @brief Eigenspace perturbation mathematics: spectral decomposition,
/// barycentric mapping and its inverse, eigenvalue perturbation and
/// perturbed-stress reconstruction.

#include "turbuq/realizability.hpp"

#include "turbuq/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace turbuq {

namespace {

constexpr double kTraceTol = 1e-10;
constexpr double kOrderTol = 1e-10;

std::string triple_to_string(const std::array<double, 3>& l) {
    std::ostringstream os;
    os << "(" << l[0] << ", " << l[1] << ", " << l[2] << ")";
    return os.str();
}

} // namespace

std::array<double, 2> vertex_position(Vertex v) {
    switch (v) {
    case Vertex::OneComponent: return TriangleGeometry::vertex_1c;
    case Vertex::TwoComponent: return TriangleGeometry::vertex_2c;
    case Vertex::ThreeComponent: return TriangleGeometry::vertex_3c;
    }
    throw std::invalid_argument("unknown triangle vertex");
}

BarycentricPoint BarycentricPoint::from_weights(double w1c, double w2c, double w3c) {
    const double sum = w1c + w2c + w3c;
    if (!(std::abs(sum - 1.0) < 0.5)) {
        std::ostringstream os;
        os << "barycentric weights must sum to 1, got sum = " << sum;
        throw std::invalid_argument(os.str());
    }
    BarycentricPoint p;
    p.w_ = {w1c / sum, w2c / sum, w3c / sum};
    for (double& w : p.w_) {
        if (w < 0.0 && w >= -kRealizabilityTol) w = 0.0;
    }
    // Close the triple through the third weight so the stored sum is exactly
    // one. Renormalizing by division alone leaves the sum a rounding step
    // away from one, and that residue would keep a zero-magnitude
    // perturbation from being a bit-exact identity.
    p.w_[2] = 1.0 - (p.w_[0] + p.w_[1]);

    p.x_ = p.w_[0] * TriangleGeometry::vertex_1c[0] + p.w_[1] * TriangleGeometry::vertex_2c[0] +
           p.w_[2] * TriangleGeometry::vertex_3c[0];
    p.y_ = p.w_[0] * TriangleGeometry::vertex_1c[1] + p.w_[1] * TriangleGeometry::vertex_2c[1] +
           p.w_[2] * TriangleGeometry::vertex_3c[1];
    return p;
}

BarycentricPoint BarycentricPoint::from_cartesian(double x, double y) {
    // Invert x = w1 (1,0) + w2 (0,0) + w3 (1/2, sqrt(3)/2), sum(w) = 1.
    const double sqrt3 = 1.7320508075688772;
    const double w3 = 2.0 * y / sqrt3;
    const double w1 = x - y / sqrt3;
    const double w2 = 1.0 - w1 - w3;
    return from_weights(w1, w2, w3);
}

bool BarycentricPoint::realizable() const {
    return w_[0] >= -kRealizabilityTol && w_[1] >= -kRealizabilityTol && w_[2] >= -kRealizabilityTol;
}

SymmetricTensor3 EigenDecomposition::reconstruct() const {
    Mat3 lam;
    lam(0, 0) = eigenvalues[0];
    lam(1, 1) = eigenvalues[1];
    lam(2, 2) = eigenvalues[2];
    return SymmetricTensor3::from_matrix(eigenvectors * lam * eigenvectors.transposed());
}

SymmetricTensor3 anisotropy_from_stress(const SymmetricTensor3& tau, double k_floor) {
    const double trace = tau.trace();
    if (trace < -1e-12) {
        std::ostringstream os;
        os << "Reynolds stress has negative trace " << trace << " (negative turbulence energy)";
        throw data_error(os.str());
    }
    const double k = 0.5 * trace;
    if (k < k_floor) {
        // Vanishing turbulence energy: three-component isotropic convention.
        return SymmetricTensor3{};
    }
    SymmetricTensor3 a;
    a.xx = tau.xx / k - 2.0 / 3.0;
    a.yy = tau.yy / k - 2.0 / 3.0;
    a.zz = tau.zz / k - 2.0 / 3.0;
    a.xy = tau.xy / k;
    a.xz = tau.xz / k;
    a.yz = tau.yz / k;
    return a;
}

EigenDecomposition eigendecompose(const SymmetricTensor3& a) {
    EigenDecomposition dec;
    dec.eigenvectors = Mat3::identity();

    const double scale = a.max_abs();
    if (scale == 0.0) {
        return dec; // zero tensor: lambda = 0, v = I
    }

    // Work on the rescaled tensor so the convergence threshold is relative.
    Mat3 m = (1.0 / scale) * a.to_matrix();
    Mat3& v = dec.eigenvectors;

    constexpr double kOffDiagTol = 1e-13;
    constexpr int kMaxSweeps = 100;

    int sweep = 0;
    for (; sweep < kMaxSweeps; ++sweep) {
        const double off = std::max({std::abs(m(0, 1)), std::abs(m(0, 2)), std::abs(m(1, 2))});
        if (off < kOffDiagTol) break;

        static constexpr int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
        for (const auto& pq : pairs) {
            const int p = pq[0], q = pq[1];
            const double apq = m(p, q);
            if (apq == 0.0) continue;

            const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
            const double t = (theta >= 0.0) ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                                            : -1.0 / (-theta + std::sqrt(1.0 + theta * theta));
            const double c = 1.0 / std::sqrt(1.0 + t * t);
            const double s = t * c;

            const double app = m(p, p), aqq = m(q, q);
            m(p, p) = app - t * apq;
            m(q, q) = aqq + t * apq;
            m(p, q) = m(q, p) = 0.0;
            for (int r = 0; r < 3; ++r) {
                if (r == p || r == q) continue;
                const double arp = m(r, p), arq = m(r, q);
                m(r, p) = m(p, r) = c * arp - s * arq;
                m(r, q) = m(q, r) = s * arp + c * arq;
            }
            for (int r = 0; r < 3; ++r) {
                const double vrp = v(r, p), vrq = v(r, q);
                v(r, p) = c * vrp - s * vrq;
                v(r, q) = s * vrp + c * vrq;
            }
        }
    }
    if (sweep == kMaxSweeps) {
        throw numeric_error("Jacobi eigensolver failed to converge within 100 sweeps");
    }

    std::array<int, 3> order{0, 1, 2};
    const std::array<double, 3> diag{m(0, 0), m(1, 1), m(2, 2)};
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return diag[static_cast<std::size_t>(i)] > diag[static_cast<std::size_t>(j)]; });

    Mat3 sorted_v;
    for (int col = 0; col < 3; ++col) {
        const int src = order[static_cast<std::size_t>(col)];
        dec.eigenvalues[static_cast<std::size_t>(col)] = diag[static_cast<std::size_t>(src)] * scale;

        // Deterministic sign: first component with magnitude > 1e-8 is nonnegative.
        double sign = 1.0;
        for (int r = 0; r < 3; ++r) {
            if (std::abs(v(r, src)) > 1e-8) {
                sign = (v(r, src) < 0.0) ? -1.0 : 1.0;
                break;
            }
        }
        for (int r = 0; r < 3; ++r) sorted_v(r, col) = sign * v(r, src);
    }
    dec.eigenvectors = sorted_v;
    return dec;
}

BarycentricPoint to_barycentric(const std::array<double, 3>& lambda) {
    const double l1 = lambda[0], l2 = lambda[1], l3 = lambda[2];
    if (l1 < l2 - kOrderTol || l2 < l3 - kOrderTol) {
        throw std::invalid_argument("anisotropy eigenvalues must be sorted descending, got " +
                                    triple_to_string(lambda));
    }
    const double trace = l1 + l2 + l3;
    if (std::abs(trace) > kTraceTol) {
        std::ostringstream os;
        os << "anisotropy eigenvalues must be traceless, got trace = " << trace;
        throw std::invalid_argument(os.str());
    }
    const double w1 = 0.5 * (l1 - l2);
    const double w2 = l2 - l3;
    const double w3 = 1.5 * l3 + 1.0;
    return BarycentricPoint::from_weights(w1, w2, w3);
}

std::array<double, 3> from_barycentric(const BarycentricPoint& p) {
    if (!p.realizable()) {
        std::ostringstream os;
        os << "barycentric point outside the realizability triangle: weights (" << p.w1c() << ", "
           << p.w2c() << ", " << p.w3c() << ")";
        throw std::invalid_argument(os.str());
    }
    const double l3 = 2.0 * (p.w3c() - 1.0) / 3.0;
    const double l2 = p.w2c() + l3;
    const double l1 = 2.0 * p.w1c() + l2;
    return {l1, l2, l3};
}

BarycentricPoint perturb_toward_vertex(const BarycentricPoint& p, Vertex target, double delta_b) {
    if (!(delta_b >= 0.0 && delta_b <= 1.0)) {
        std::ostringstream os;
        os << "perturbation magnitude must lie in [0, 1], got " << delta_b;
        throw std::invalid_argument(os.str());
    }
    if (!p.realizable()) {
        throw std::invalid_argument("perturbation requires a realizable barycentric point");
    }
    std::array<double, 3> target_w{};
    switch (target) {
    case Vertex::OneComponent: target_w = {1.0, 0.0, 0.0}; break;
    case Vertex::TwoComponent: target_w = {0.0, 1.0, 0.0}; break;
    case Vertex::ThreeComponent: target_w = {0.0, 0.0, 1.0}; break;
    }
    const auto& w = p.weights();
    return BarycentricPoint::from_weights(w[0] + delta_b * (target_w[0] - w[0]),
                                          w[1] + delta_b * (target_w[1] - w[1]),
                                          w[2] + delta_b * (target_w[2] - w[2]));
}

double perturbation_strength(const BarycentricPoint& a, const BarycentricPoint& b) {
    const double d = std::hypot(a.x() - b.x(), a.y() - b.y());
    // Realizable states are at most one edge length apart; clip float overshoot.
    return std::min(d, 1.0);
}

SymmetricTensor3 reconstruct_perturbed_stress(double k, const Mat3& eigenvectors,
                                              const std::array<double, 3>& lambda_star) {
    if (!(k >= 0.0)) {
        std::ostringstream os;
        os << "turbulent kinetic energy must be nonnegative, got " << k;
        throw std::invalid_argument(os.str());
    }
    // to_barycentric validates ordering and tracelessness as a side effect.
    const BarycentricPoint p = to_barycentric(lambda_star);
    if (!p.realizable()) {
        throw std::invalid_argument("perturbed eigenvalues are not realizable: " +
                                    triple_to_string(lambda_star));
    }
    Mat3 lam;
    lam(0, 0) = lambda_star[0];
    lam(1, 1) = lambda_star[1];
    lam(2, 2) = lambda_star[2];
    const Mat3 a = eigenvectors * lam * eigenvectors.transposed();

    SymmetricTensor3 tau = SymmetricTensor3::from_matrix(a);
    tau.xx = k * (tau.xx + 2.0 / 3.0);
    tau.yy = k * (tau.yy + 2.0 / 3.0);
    tau.zz = k * (tau.zz + 2.0 / 3.0);
    tau.xy *= k;
    tau.xz *= k;
    tau.yz *= k;
    return tau;
}

BarycentricPoint barycentric_of_stress(const SymmetricTensor3& tau, double k_floor) {
    const SymmetricTensor3 a = anisotropy_from_stress(tau, k_floor);
    const EigenDecomposition dec = eigendecompose(a);
    return to_barycentric(dec.eigenvalues);
}

} // namespace turbuq
