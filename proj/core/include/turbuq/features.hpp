#pragma once

#include "turbuq/flow_record.hpp"
#include "turbuq/types.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace turbuq {

inline constexpr std::size_t kNumInvariantFeatures = 47;
inline constexpr std::size_t kNumPhysicalFeatures = 9;
inline constexpr std::size_t kNumFeatures = kNumInvariantFeatures + kNumPhysicalFeatures;

/// Canonical feature names: inv_1 .. inv_47, q1 .. q9. The order is the
/// serialization contract for feature CSVs and trained models.
const std::vector<std::string>& feature_names();

/// Index of a feature name in the canonical order; throws on unknown names.
std::size_t feature_index(const std::string& name);

/// Element-wise normalization a / (|a| + |b|); maps into [-1, 1] and returns
/// 0 when both magnitudes vanish.
double normalize_element(double alpha, double beta);

/// The four normalized input tensors of the invariant basis: strain rate,
/// rotation rate and the antisymmetric duals of the pressure- and
/// k-gradient vectors.
struct NormalizedTensors {
    Mat3 s_hat;        ///< symmetric
    Mat3 omega_hat;    ///< antisymmetric
    Mat3 grad_p_hat;   ///< antisymmetric dual of the normalized pressure gradient
    Mat3 grad_k_hat;   ///< antisymmetric dual of the normalized k gradient
};

/// Maps a vector to its antisymmetric dual (A_v)_ij = -eps_ijk v_k.
Mat3 antisymmetric_dual(const Vec3& v);

NormalizedTensors build_normalized_tensors(const FlowRecord& rec);

/// The 47 minimal-integrity-basis invariants of one symmetric tensor and
/// three antisymmetric tensors, in the fixed canonical order. Inputs are
/// validated for (anti)symmetry to 1e-10.
std::array<double, kNumInvariantFeatures> integrity_invariants(const Mat3& s, const Mat3& w1,
                                                               const Mat3& w2, const Mat3& w3);

/// The nine physical features q1 .. q9.
std::array<double, kNumPhysicalFeatures> physical_features(const FlowRecord& rec);

/// Full 56-entry feature vector of one record (pre-standardization).
std::array<double, kNumFeatures> extract_features(const FlowRecord& rec);

/// Feature table: one row of 56 features per point, plus point ids.
struct FeatureTable {
    std::vector<std::int64_t> point_ids;
    Matrix values; ///< point_ids.size() x kNumFeatures

    std::size_t size() const { return point_ids.size(); }
};

/// Extracts features for every record; parallelizes over records.
FeatureTable extract_features(const std::vector<FlowRecord>& records, int threads = 0);

/// Feature CSV: point_id plus the 56 canonical feature columns.
void write_features_csv(std::ostream& out, const FeatureTable& table);
FeatureTable read_features_csv(std::istream& in, const std::string& origin);
FeatureTable read_features_csv(const std::filesystem::path& path);

} // namespace turbuq
