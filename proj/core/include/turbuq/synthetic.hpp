#pragma once

#include "turbuq/dataset.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace turbuq {

enum class SyntheticKind { ChannelLike, HillLike, WavyLike, ConvdivLike };

const std::vector<std::string>& synthetic_kind_names();
const char* synthetic_kind_name(SyntheticKind kind);
SyntheticKind synthetic_kind_from_name(const std::string& name);

/// Knobs of the analytic profile families behind the generated cases.
struct SyntheticProfileParams {
    /// Scales the closed-form perturbation strength field, in [0, 1].
    /// 1 keeps p within [0.02, 0.55]; 0 makes the high-fidelity stress equal
    /// the modeled one so every label is zero.
    double perturbation_scale = 1.0;
    /// Scales how far the modeled anisotropy state wanders around the
    /// triangle interior, in [0, 1].
    double anisotropy_amplitude = 1.0;
};

/// A generated case together with the closed-form labels it was built from.
struct SyntheticCase {
    FlowCase flow;
    std::vector<double> p_true;
};

/// Deterministic analytic flow case of the requested family. The modeled and
/// the high-fidelity stress are built from a prescribed smooth walk through
/// the barycentric triangle, so the perturbation strength of every point is
/// known in closed form and recomputing labels from the two stress tables
/// must reproduce p_true. Each kind uses a distinct profile family; the seed
/// jitters phases and amplitudes within the family.
SyntheticCase generate_synthetic_case(SyntheticKind kind, std::size_t n_points, std::uint64_t seed,
                                      const SyntheticProfileParams& params = {});

} // namespace turbuq
