/// @file features.cpp
/// @brief Physics-informed input features: normalized raw tensors, the
/// 47-invariant integrity basis and the nine physical features q1..q9.

#include "turbuq/features.hpp"

#include "turbuq/csv.hpp"
#include "turbuq/errors.hpp"
#include "turbuq/parallel.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace turbuq {

namespace {

constexpr double kSymmetryTol = 1e-10;

double frobenius(const Mat3& m) {
    double s = 0.0;
    for (double x : m.m) s += x * x;
    return std::sqrt(s);
}

double trace_product(const Mat3& a, const Mat3& b) {
    // tr(A B) without forming the product.
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s += a(i, j) * b(j, i);
    return s;
}

void require_symmetric(const Mat3& m, const char* name) {
    const double scale = std::max(1.0, m.max_abs());
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            if (std::abs(m(i, j) - m(j, i)) > kSymmetryTol * scale) {
                std::ostringstream os;
                os << name << " must be symmetric (max asymmetry exceeds tolerance)";
                throw std::invalid_argument(os.str());
            }
        }
}

void require_antisymmetric(const Mat3& m, const char* name) {
    const double scale = std::max(1.0, m.max_abs());
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            if (std::abs(m(i, j) + m(j, i)) > kSymmetryTol * scale) {
                std::ostringstream os;
                os << name << " must be antisymmetric";
                throw std::invalid_argument(os.str());
            }
        }
}

Mat3 normalize_tensor(const Mat3& t, double beta) {
    Mat3 out;
    for (std::size_t i = 0; i < 9; ++i) out.m[i] = normalize_element(t.m[i], beta);
    return out;
}

Vec3 normalize_vector(const Vec3& v, double beta) {
    return {normalize_element(v[0], beta), normalize_element(v[1], beta),
            normalize_element(v[2], beta)};
}

} // namespace

const std::vector<std::string>& feature_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        n.reserve(kNumFeatures);
        for (std::size_t i = 1; i <= kNumInvariantFeatures; ++i) n.push_back("inv_" + std::to_string(i));
        for (std::size_t i = 1; i <= kNumPhysicalFeatures; ++i) n.push_back("q" + std::to_string(i));
        return n;
    }();
    return names;
}

std::size_t feature_index(const std::string& name) {
    const auto& names = feature_names();
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return i;
    }
    throw data_error("unknown feature name '" + name + "' (expected inv_1..inv_47 or q1..q9)");
}

double normalize_element(double alpha, double beta) {
    const double denom = std::abs(alpha) + std::abs(beta);
    if (denom < 1e-300) return 0.0;
    return alpha / denom;
}

Mat3 antisymmetric_dual(const Vec3& v) {
    Mat3 a;
    a(0, 1) = -v[2];
    a(0, 2) = v[1];
    a(1, 0) = v[2];
    a(1, 2) = -v[0];
    a(2, 0) = -v[1];
    a(2, 1) = v[0];
    return a;
}

NormalizedTensors build_normalized_tensors(const FlowRecord& rec) {
    const Mat3 s = rec.strain_rate();
    const Mat3 w = rec.rotation_rate();

    NormalizedTensors out;
    out.s_hat = normalize_tensor(s, rec.omega);
    out.omega_hat = normalize_tensor(w, frobenius(w));

    // Convective acceleration (U . grad) U scales the pressure gradient.
    const Vec3 conv = rec.grad_velocity * rec.velocity;
    out.grad_p_hat = antisymmetric_dual(normalize_vector(rec.grad_pressure, rec.rho * norm(conv)));
    out.grad_k_hat = antisymmetric_dual(normalize_vector(rec.grad_k, rec.omega * std::sqrt(rec.k)));
    return out;
}

std::array<double, kNumInvariantFeatures> integrity_invariants(const Mat3& s, const Mat3& w1,
                                                               const Mat3& w2, const Mat3& w3) {
    require_symmetric(s, "S");
    require_antisymmetric(w1, "W1");
    require_antisymmetric(w2, "W2");
    require_antisymmetric(w3, "W3");

    const Mat3 s2 = s * s;
    const std::array<const Mat3*, 3> w{&w1, &w2, &w3};
    std::array<Mat3, 3> wsq;
    for (std::size_t i = 0; i < 3; ++i) wsq[i] = (*w[i]) * (*w[i]);

    std::array<double, kNumInvariantFeatures> inv{};
    std::size_t n = 0;

    // {tr(S^2), tr(S^3)}
    inv[n++] = s2.trace();
    inv[n++] = trace_product(s2, s);

    // {tr(Wi^2)}
    for (std::size_t i = 0; i < 3; ++i) inv[n++] = wsq[i].trace();

    // per Wi: {tr(Wi^2 S), tr(Wi^2 S^2), tr(Wi^2 S Wi S^2)}
    for (std::size_t i = 0; i < 3; ++i) {
        inv[n++] = trace_product(wsq[i], s);
        inv[n++] = trace_product(wsq[i], s2);
        inv[n++] = trace_product(wsq[i] * s, (*w[i]) * s2);
    }

    // per pair i<j: {tr(Wi Wj)}
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j) inv[n++] = trace_product(*w[i], *w[j]);

    // per pair i<j: eight mixed invariants
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j) {
            const Mat3& wi = *w[i];
            const Mat3& wj = *w[j];
            inv[n++] = trace_product(wi * wj, s);
            inv[n++] = trace_product(wi * wj, s2);
            inv[n++] = trace_product(wsq[i] * wj, s);
            inv[n++] = trace_product(wsq[i] * wj, s2);
            inv[n++] = trace_product(wsq[j] * wi, s);
            inv[n++] = trace_product(wsq[j] * wi, s2);
            inv[n++] = trace_product(wsq[i] * s, wj * s2);
            inv[n++] = trace_product(wsq[j] * s, wi * s2);
        }

    // {tr(W1 W2 W3)}
    inv[n++] = trace_product(w1 * w2, w3);

    // triple products with S
    inv[n++] = trace_product(w1 * w2, w3 * s);
    inv[n++] = trace_product(w1 * w3, w2 * s);
    inv[n++] = trace_product(w1 * w2, w3 * s2);
    inv[n++] = trace_product(w1 * w3, w2 * s2);
    inv[n++] = trace_product(w1 * w2 * s, w3 * s2);

    return inv;
}

std::array<double, kNumPhysicalFeatures> physical_features(const FlowRecord& rec) {
    const Mat3 s = rec.strain_rate();
    const Mat3 w = rec.rotation_rate();
    const double s_norm = frobenius(s);
    const double w_norm = frobenius(w);
    const double u_sq = rec.velocity[0] * rec.velocity[0] + rec.velocity[1] * rec.velocity[1] +
                        rec.velocity[2] * rec.velocity[2];

    std::array<double, kNumPhysicalFeatures> q{};

    // q1: rotation/strain balance
    q[0] = normalize_element(0.5 * (w_norm * w_norm - s_norm * s_norm), s_norm * s_norm);

    // q2: turbulence intensity
    q[1] = normalize_element(rec.k, 0.5 * u_sq);

    // q3: wall-distance Reynolds number, clipped at 2
    q[2] = std::min(std::sqrt(rec.k) * rec.wall_distance / (50.0 * rec.nu()), 2.0);

    // q4: pressure gradient along a streamline
    const double u_dot_gradp = rec.velocity[0] * rec.grad_pressure[0] +
                               rec.velocity[1] * rec.grad_pressure[1] +
                               rec.velocity[2] * rec.grad_pressure[2];
    const double gradp_sq = rec.grad_pressure[0] * rec.grad_pressure[0] +
                            rec.grad_pressure[1] * rec.grad_pressure[1] +
                            rec.grad_pressure[2] * rec.grad_pressure[2];
    q[3] = normalize_element(u_dot_gradp, std::sqrt(gradp_sq * u_sq));

    // q5: turbulence/strain timescale ratio. A vanished omega means an
    // infinite turbulence timescale; the normalization saturates at 1.
    if (rec.omega < 1e-300) {
        q[4] = 1.0;
    } else {
        q[4] = normalize_element(1.0 / rec.omega, 1.0 / s_norm);
    }

    // q6: production/dissipation ratio with Boussinesq production
    const double divergence = rec.grad_velocity.trace();
    const double production =
        2.0 * (rec.mu_t / rec.rho) * trace_product(s, s) - (2.0 / 3.0) * rec.k * divergence;
    q[5] = normalize_element(production, rec.k * rec.omega);

    // q7: local Mach number (no normalization)
    q[6] = rec.mach;

    // q8: eddy/molecular viscosity ratio
    q[7] = normalize_element(rec.mu_t, rec.mu);

    // q9: magnitude of the modeled Reynolds stress
    q[8] = normalize_element(rec.tau_model.frobenius_norm(), rec.k);

    return q;
}

std::array<double, kNumFeatures> extract_features(const FlowRecord& rec) {
    const NormalizedTensors t = build_normalized_tensors(rec);
    const auto inv = integrity_invariants(t.s_hat, t.omega_hat, t.grad_p_hat, t.grad_k_hat);
    const auto q = physical_features(rec);

    std::array<double, kNumFeatures> out{};
    std::size_t n = 0;
    for (double v : inv) out[n++] = v;
    for (double v : q) out[n++] = v;
    return out;
}

FeatureTable extract_features(const std::vector<FlowRecord>& records, int threads) {
    FeatureTable table;
    table.point_ids.resize(records.size());
    table.values = Matrix(records.size(), kNumFeatures);
    parallel_for(records.size(), threads, [&](std::size_t i) {
        table.point_ids[i] = records[i].point_id;
        const auto row = extract_features(records[i]);
        double* dst = table.values.row(i);
        for (std::size_t j = 0; j < kNumFeatures; ++j) dst[j] = row[j];
    });
    return table;
}

void write_features_csv(std::ostream& out, const FeatureTable& table) {
    out << "point_id";
    for (const std::string& name : feature_names()) out << ',' << name;
    out << '\n';
    for (std::size_t i = 0; i < table.size(); ++i) {
        out << table.point_ids[i];
        const double* row = table.values.row(i);
        for (std::size_t j = 0; j < kNumFeatures; ++j) out << ',' << csv::format_double(row[j]);
        out << '\n';
    }
}

FeatureTable read_features_csv(std::istream& in, const std::string& origin) {
    const csv::Table raw = csv::read_stream(in, origin);
    std::vector<std::string> required = {"point_id"};
    required.insert(required.end(), feature_names().begin(), feature_names().end());
    csv::require_columns(raw, required, origin);

    const int id_col = raw.column("point_id");
    std::vector<int> cols(kNumFeatures);
    for (std::size_t j = 0; j < kNumFeatures; ++j) cols[j] = raw.column(feature_names()[j]);

    FeatureTable table;
    table.point_ids.resize(raw.rows.size());
    table.values = Matrix(raw.rows.size(), kNumFeatures);
    for (std::size_t i = 0; i < raw.rows.size(); ++i) {
        table.point_ids[i] = csv::parse_int(raw, i, id_col, origin);
        for (std::size_t j = 0; j < kNumFeatures; ++j) {
            table.values(i, j) = csv::parse_double(raw, i, cols[j], origin);
        }
    }
    return table;
}

FeatureTable read_features_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open '" + path.string() + "'");
    return read_features_csv(in, path.filename().string());
}

} // namespace turbuq
