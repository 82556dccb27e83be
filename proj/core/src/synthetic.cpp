#include "turbuq/synthetic.hpp"

#include "turbuq/errors.hpp"
#include "turbuq/realizability.hpp"
#include "turbuq/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace turbuq {

namespace {

constexpr double kPi = std::numbers::pi;

/// Parameter family shared by all kinds; each kind instantiates it with a
/// distinct point so cross-case generalization is nontrivial.
struct Family {
    double u0;        // streamwise speed scale
    double v_amp;     // vertical velocity amplitude
    double shear;     // wall-normal shear scale
    double height;    // wall-normal extent
    double k0;        // turbulent kinetic energy scale
    double omega0;    // specific dissipation scale
    double mach0, mach_amp;
    double theta0, theta_amp; // eigenvector rotation angle profile
    double phase1, phase2;    // barycentric walk phases
    double freq2;             // second walk frequency
};

Family base_family(SyntheticKind kind) {
    switch (kind) {
    case SyntheticKind::ChannelLike:
        return {12.0, 0.0, 900.0, 2.5e-3, 0.50, 260.0, 0.08, 0.10, 0.15, 0.30, 0.4, 1.3, 1.0};
    case SyntheticKind::HillLike:
        return {9.0, 1.8, 600.0, 3.5e-3, 0.80, 180.0, 0.12, 0.14, 0.55, 0.45, 1.7, 0.2, 2.0};
    case SyntheticKind::WavyLike:
        return {7.0, 1.2, 450.0, 2.0e-3, 0.35, 320.0, 0.06, 0.08, 0.95, 0.35, 2.9, 2.1, 3.0};
    case SyntheticKind::ConvdivLike:
        return {15.0, 2.5, 1200.0, 3.0e-3, 1.10, 220.0, 0.10, 0.20, 0.35, 0.60, 0.9, 2.6, 1.0};
    }
    throw std::invalid_argument("unknown synthetic kind");
}

/// Smooth bump vanishing at both ends of [0, 1].
double bump(double s) { return 4.0 * s * (1.0 - s); }

double squared_distance(const std::array<double, 2>& a, const BarycentricPoint& p) {
    const double dx = a[0] - p.x();
    const double dy = a[1] - p.y();
    return dx * dx + dy * dy;
}

Vertex farthest_vertex(const BarycentricPoint& p) {
    Vertex best = Vertex::OneComponent;
    double best_sq = squared_distance(TriangleGeometry::vertex_1c, p);
    const double sq2 = squared_distance(TriangleGeometry::vertex_2c, p);
    if (sq2 > best_sq) {
        best = Vertex::TwoComponent;
        best_sq = sq2;
    }
    const double sq3 = squared_distance(TriangleGeometry::vertex_3c, p);
    if (sq3 > best_sq) best = Vertex::ThreeComponent;
    return best;
}

Mat3 rotation_about_z(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    Mat3 v;
    v(0, 0) = c;
    v(0, 1) = -s;
    v(1, 0) = s;
    v(1, 1) = c;
    v(2, 2) = 1.0;
    return v;
}

} // namespace

const std::vector<std::string>& synthetic_kind_names() {
    static const std::vector<std::string> names = {"channel-like", "hill-like", "wavy-like",
                                                   "convdiv-like"};
    return names;
}

const char* synthetic_kind_name(SyntheticKind kind) {
    return synthetic_kind_names()[static_cast<std::size_t>(kind)].c_str();
}

SyntheticKind synthetic_kind_from_name(const std::string& name) {
    const auto& names = synthetic_kind_names();
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return static_cast<SyntheticKind>(i);
    }
    throw data_error("unknown synthetic case kind '" + name + "' (expected one of: channel-like, "
                     "hill-like, wavy-like, convdiv-like)");
}

SyntheticCase generate_synthetic_case(SyntheticKind kind, std::size_t n_points, std::uint64_t seed,
                                      const SyntheticProfileParams& params) {
    if (n_points < 10) {
        throw std::invalid_argument("generate_synthetic_case: n_points must be >= 10, got " +
                                    std::to_string(n_points));
    }
    if (!(params.perturbation_scale >= 0.0 && params.perturbation_scale <= 1.0)) {
        throw std::invalid_argument("generate_synthetic_case: perturbation_scale outside [0, 1]");
    }
    if (!(params.anisotropy_amplitude >= 0.0 && params.anisotropy_amplitude <= 1.0)) {
        throw std::invalid_argument("generate_synthetic_case: anisotropy_amplitude outside [0, 1]");
    }

    Family fam = base_family(kind);
    SplitMix64 rng(derive_stream(seed, static_cast<std::uint64_t>(kind)));
    fam.u0 *= 0.95 + 0.1 * rng.next_double();
    fam.k0 *= 0.9 + 0.2 * rng.next_double();
    fam.phase1 += 0.4 * (rng.next_double() - 0.5);
    fam.phase2 += 0.4 * (rng.next_double() - 0.5);
    fam.theta0 += 0.2 * (rng.next_double() - 0.5);
    fam.mach0 *= 0.9 + 0.2 * rng.next_double();

    const double rho = 1.2;
    const double mu = 1.8e-5;
    const double nu = mu / rho;
    const double length = 0.1; // streamwise extent
    const double amp = params.anisotropy_amplitude;

    SyntheticCase out;
    out.flow.name = synthetic_kind_name(kind);
    out.flow.reynolds_tag =
        "Re=" + std::to_string(static_cast<long>(std::lround(fam.u0 * fam.height / nu)));
    out.flow.records.reserve(n_points);
    out.flow.hifi_stress.reserve(n_points);
    out.p_true.reserve(n_points);

    for (std::size_t i = 0; i < n_points; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(n_points - 1);
        FlowRecord rec;
        rec.point_id = static_cast<std::int64_t>(i) + 1;

        const double y = fam.height * s;
        rec.position = {length * s, y, 0.0};
        rec.wall_distance = fam.height * std::min(s, 1.0 - s);

        const double u = fam.u0 * (0.25 + 0.75 * bump(s));
        const double du_ds = fam.u0 * 0.75 * 4.0 * (1.0 - 2.0 * s);
        const double v = fam.v_amp * std::sin(kPi * s);
        const double dv_ds = fam.v_amp * kPi * std::cos(kPi * s);
        rec.velocity = {u, v, 0.0};
        // The shear profile is shaped independently of du/ds so the velocity
        // gradient is not self-similar along the line; otherwise every
        // scale-invariant gradient feature would collapse to a constant.
        const double shear_shape =
            0.25 + 0.375 * (1.0 + std::sin(2.0 * kPi * fam.freq2 * s + fam.phase2));
        rec.grad_velocity(0, 0) = du_ds / length;
        rec.grad_velocity(0, 1) = fam.shear * shear_shape;
        rec.grad_velocity(1, 0) = dv_ds / length;
        rec.grad_velocity(1, 1) = -du_ds / length; // near-solenoidal in-plane field
        rec.rho = rho;
        rec.mu = mu;

        rec.k = fam.k0 * (0.15 + 0.85 * bump(s));
        const double dk_ds = fam.k0 * 0.85 * 4.0 * (1.0 - 2.0 * s);
        rec.grad_k = {0.2 * dk_ds / length, dk_ds / fam.height, 0.0};

        rec.omega = fam.omega0 * (0.35 + 0.65 * (1.0 - bump(s)) * (1.0 - bump(s)));
        rec.mu_t = rho * rec.k / rec.omega;

        rec.pressure = 101325.0 - 0.5 * rho * u * u;
        rec.grad_pressure = {-rho * u * du_ds / length, 0.08 * rho * fam.u0 * fam.u0 / fam.height,
                             0.0};
        rec.mach = fam.mach0 + fam.mach_amp * bump(s);

        // Modeled anisotropy state: a smooth interior walk of the triangle.
        const double w1 = 0.24 + amp * 0.20 * std::sin(2.0 * kPi * s + fam.phase1);
        const double w2 = 0.30 + amp * 0.18 * std::cos(2.0 * kPi * fam.freq2 * s + fam.phase2);
        const BarycentricPoint x_rans = BarycentricPoint::from_weights(w1, w2, 1.0 - w1 - w2);
        const Mat3 eigvec =
            rotation_about_z(fam.theta0 + fam.theta_amp * std::sin(2.0 * kPi * s + fam.phase1));
        rec.tau_model = reconstruct_perturbed_stress(rec.k, eigvec, from_barycentric(x_rans));

        // Closed-form label: a smooth function of the wall-distance Reynolds
        // number and the Mach number, both of which the feature pipeline
        // exposes. Bounded by 0.55, below the shortest possible distance to
        // the farthest vertex (the triangle circumradius, 1/sqrt(3)), so the
        // shifted state always stays inside the triangle.
        const double re_d = std::min(std::sqrt(rec.k) * rec.wall_distance / (50.0 * nu), 2.0);
        const double p_raw = 0.04 + 0.32 * 0.5 * (1.0 - std::cos(kPi * re_d / 2.0)) + 0.16 * rec.mach;
        const double p = params.perturbation_scale * std::clamp(p_raw, 0.02, 0.55);

        const Vertex target = farthest_vertex(x_rans);
        const double dist = std::sqrt(squared_distance(vertex_position(target), x_rans));
        const BarycentricPoint x_data = perturb_toward_vertex(x_rans, target, p / dist);

        out.flow.records.push_back(rec);
        out.flow.hifi_stress.push_back(
            {rec.point_id, reconstruct_perturbed_stress(rec.k, eigvec, from_barycentric(x_data))});
        out.p_true.push_back(perturbation_strength(x_rans, x_data));
    }
    return out;
}

} // namespace turbuq
