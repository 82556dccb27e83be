#pragma once

#include "turbuq/types.hpp"

#include <cstdint>

namespace turbuq {

/// One mesh point of a RANS solution: the raw state every feature is built
/// from. Any self-consistent unit system works; all downstream features are
/// nondimensionalized.
struct FlowRecord {
    std::int64_t point_id = 0;
    Vec3 position{};          ///< x, y, z (2-D cases store z = 0)
    double rho = 0.0;         ///< density
    Vec3 velocity{};          ///< U
    Mat3 grad_velocity;       ///< (i,j) = dU_i/dx_j
    double pressure = 0.0;
    Vec3 grad_pressure{};
    double k = 0.0;           ///< turbulent kinetic energy
    Vec3 grad_k{};
    double omega = 0.0;       ///< specific dissipation rate
    double mu = 0.0;          ///< molecular dynamic viscosity
    double mu_t = 0.0;        ///< eddy viscosity
    double wall_distance = 0.0;
    double mach = 0.0;
    SymmetricTensor3 tau_model; ///< modeled Reynolds stress

    double nu() const { return mu / rho; }

    Mat3 strain_rate() const {
        Mat3 s;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) s(i, j) = 0.5 * (grad_velocity(i, j) + grad_velocity(j, i));
        return s;
    }

    Mat3 rotation_rate() const {
        Mat3 w;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) w(i, j) = 0.5 * (grad_velocity(i, j) - grad_velocity(j, i));
        return w;
    }
};

} // namespace turbuq
