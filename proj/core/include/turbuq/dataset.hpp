#pragma once

#include "turbuq/flow_record.hpp"
#include "turbuq/types.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace turbuq {

/// A high-fidelity Reynolds stress sample co-located with a RANS point.
struct HifiStress {
    std::int64_t point_id = 0;
    SymmetricTensor3 tau;
};

/// One flow case: a RANS table plus (optionally) matched high-fidelity
/// stresses used to derive perturbation-strength labels.
struct FlowCase {
    std::string name;
    std::string reynolds_tag;
    std::filesystem::path rans_path;
    std::filesystem::path hifi_path;
    std::vector<FlowRecord> records;
    std::vector<HifiStress> hifi_stress;
};

/// Per-point training targets p in [0, 1] with provenance.
struct LabeledDataset {
    std::vector<std::int64_t> point_ids;
    std::vector<double> targets;
    std::string case_name;
};

/// Column order of the flow CSV schema.
const std::vector<std::string>& flow_csv_columns();

std::vector<FlowRecord> read_flow_csv(const std::filesystem::path& path);
std::vector<FlowRecord> read_flow_csv(std::istream& in, const std::string& origin);
void write_flow_csv(std::ostream& out, const std::vector<FlowRecord>& records);

std::vector<HifiStress> read_hifi_csv(const std::filesystem::path& path);
std::vector<HifiStress> read_hifi_csv(std::istream& in, const std::string& origin);
void write_hifi_csv(std::ostream& out, const std::vector<HifiStress>& stresses);

/// Labels CSV: point_id,p_true.
void write_labels_csv(std::ostream& out, const std::vector<std::int64_t>& ids,
                      const std::vector<double>& targets);
LabeledDataset read_labels_csv(const std::filesystem::path& path);

/// Loads both tables of a case from its file paths.
FlowCase load_case(const std::string& name, const std::filesystem::path& rans_path,
                   const std::filesystem::path& hifi_path);

/// Computes p per point by mapping the modeled and the high-fidelity stress
/// into the barycentric triangle and taking the Cartesian distance. Requires
/// matched point ids; rejects unphysical stresses with the offending id.
LabeledDataset compute_labels(const FlowCase& flow_case);

} // namespace turbuq
