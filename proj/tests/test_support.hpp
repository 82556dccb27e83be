/// @file test_support.hpp
/// @brief Shared fixtures for the unit tests: seeded random tensors and
/// rotations, a Gaussian sampler, and a self-cleaning temp directory.

#pragma once

#include "turbuq/flow_record.hpp"
#include "turbuq/realizability.hpp"
#include "turbuq/rng.hpp"
#include "turbuq/types.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>

namespace turbuq::test {

/// Standard normal deviate via Box-Muller (uses only the library RNG so test
/// data is platform-independent).
inline double gaussian(SplitMix64& rng) {
    const double u1 = 1.0 - rng.next_double(); // (0, 1]
    const double u2 = rng.next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

inline SymmetricTensor3 random_symmetric(SplitMix64& rng, double scale = 1.0) {
    SymmetricTensor3 t;
    t.xx = scale * gaussian(rng);
    t.yy = scale * gaussian(rng);
    t.zz = scale * gaussian(rng);
    t.xy = scale * gaussian(rng);
    t.xz = scale * gaussian(rng);
    t.yz = scale * gaussian(rng);
    return t;
}

/// Uniformly distributed rotation matrix from a random unit quaternion.
inline Mat3 random_rotation(SplitMix64& rng) {
    double q[4];
    double norm_sq = 0.0;
    for (double& c : q) {
        c = gaussian(rng);
        norm_sq += c * c;
    }
    const double inv = 1.0 / std::sqrt(norm_sq);
    const double w = q[0] * inv, x = q[1] * inv, y = q[2] * inv, z = q[3] * inv;

    Mat3 r;
    r(0, 0) = 1.0 - 2.0 * (y * y + z * z);
    r(0, 1) = 2.0 * (x * y - w * z);
    r(0, 2) = 2.0 * (x * z + w * y);
    r(1, 0) = 2.0 * (x * y + w * z);
    r(1, 1) = 1.0 - 2.0 * (x * x + z * z);
    r(1, 2) = 2.0 * (y * z - w * x);
    r(2, 0) = 2.0 * (x * z - w * y);
    r(2, 1) = 2.0 * (y * z + w * x);
    r(2, 2) = 1.0 - 2.0 * (x * x + y * y);
    return r;
}

/// Random point of the realizability triangle: barycentric weights drawn as
/// normalized exponentials (uniform over the simplex).
inline BarycentricPoint random_realizable_point(SplitMix64& rng) {
    double w[3];
    double sum = 0.0;
    for (double& c : w) {
        c = -std::log(1.0 - rng.next_double());
        sum += c;
    }
    return BarycentricPoint::from_weights(w[0] / sum, w[1] / sum, w[2] / sum);
}

/// Realizable Reynolds stress with a random orientation, spectrum and energy.
inline SymmetricTensor3 random_realizable_stress(SplitMix64& rng, double k_scale = 1.0) {
    const BarycentricPoint p = random_realizable_point(rng);
    const std::array<double, 3> lambda = from_barycentric(p);
    const Mat3 v = random_rotation(rng);
    const double k = k_scale * (0.1 + rng.next_double());
    return reconstruct_perturbed_stress(k, v, lambda);
}

/// Physically plausible random mesh-point state: positive density,
/// viscosity and omega, nonnegative k and wall distance, O(1)..O(100)
/// magnitudes so the normalized features exercise their full range.
inline FlowRecord random_flow_record(SplitMix64& rng, std::int64_t point_id = 1) {
    FlowRecord rec;
    rec.point_id = point_id;
    rec.position = {rng.next_double(), rng.next_double(), 0.0};
    rec.rho = 0.5 + rng.next_double();
    for (auto& c : rec.velocity) c = 20.0 * (rng.next_double() - 0.5);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) rec.grad_velocity(i, j) = 200.0 * (rng.next_double() - 0.5);
    rec.pressure = 1e5 + 1e3 * (rng.next_double() - 0.5);
    for (auto& c : rec.grad_pressure) c = 1e3 * (rng.next_double() - 0.5);
    rec.k = 0.01 + rng.next_double();
    for (auto& c : rec.grad_k) c = 10.0 * (rng.next_double() - 0.5);
    rec.omega = 10.0 + 100.0 * rng.next_double();
    rec.mu = 1e-5 * (1.0 + rng.next_double());
    rec.mu_t = rec.mu * 100.0 * rng.next_double();
    rec.wall_distance = 0.01 * rng.next_double();
    rec.mach = 0.3 * rng.next_double();
    rec.tau_model = random_realizable_stress(rng, rec.k);
    return rec;
}

/// Temp directory that removes itself (and its contents) on scope exit.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        std::ostringstream os;
        os << "turbuq_" << tag << "_" << std::hex << rd() << rd();
        path_ = std::filesystem::temp_directory_path() / os.str();
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

} // namespace turbuq::test
