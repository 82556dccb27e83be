#pragma once

#include "turbuq/dataset.hpp"
#include "turbuq/errors.hpp"
#include "turbuq/features.hpp"
#include "turbuq/forest.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace turbuq {

/// Raised by pearson() when an input vector is constant and the correlation
/// is therefore undefined.
class constant_input_error : public numeric_error {
public:
    using numeric_error::numeric_error;
};

/// Sample Pearson correlation coefficient, clamped into [-1, 1] against
/// floating-point overshoot. Requires equal lengths >= 2 and two
/// non-constant inputs.
double pearson(const std::vector<double>& a, const std::vector<double>& b);

/// Feature/target bundle of one case as consumed by training, evaluation and
/// the leave-one-case-out search.
struct CaseData {
    std::string name;
    FeatureTable features;
    std::vector<double> targets;
    std::vector<std::array<double, 2>> positions; ///< x, y per point, for reports
};

/// Extracts features and labels from a loaded case.
CaseData case_data_from(const FlowCase& flow_case, int threads = 0);

enum class CaseRole { Train, Test, Both };

const char* case_role_name(CaseRole role);
CaseRole case_role_from_name(const std::string& name);

struct ScenarioCase {
    std::string name;
    std::filesystem::path rans_path;
    std::filesystem::path hifi_path;
    CaseRole role = CaseRole::Train;
};

/// One train/test split over a set of cases. A case with role `both`
/// contributes to training and is evaluated as well.
struct ScenarioConfig {
    std::string scenario;
    std::uint64_t seed = 42;
    ForestHyperparameters hyperparameters{};
    std::vector<std::string> kde_features; ///< empty selects the default subset
    int importance_repeats = 10;
    std::vector<ScenarioCase> cases;

    /// Validates: at least one training and one test case, unique names.
    void validate() const;

    static ScenarioConfig from_json_text(const std::string& text, const std::string& origin);
    static ScenarioConfig from_json_file(const std::filesystem::path& path);
    std::string to_json_text() const;
};

struct PerPointRow {
    std::int64_t point_id = 0;
    double x = 0.0, y = 0.0;
    double p_true = 0.0, p_pred = 0.0, abs_error = 0.0, d_kde = 0.0;
};

struct EvaluationReport {
    std::string scenario;
    std::uint64_t seed = 42;
    ForestHyperparameters hyperparameters{};
    std::vector<std::string> train_cases;
    std::vector<std::string> test_cases;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    double rmse = 0.0;
    /// RMSE of the constant mean-of-training predictor on the same test
    /// points; anchors how much the forest actually learned.
    double baseline_rmse = 0.0;
    /// Correlation between d_KDE and per-point absolute error; absent when
    /// either side is constant.
    std::optional<double> pearson_r;
    std::vector<std::string> kde_features;
    std::vector<FeatureImportance> importance;
    std::vector<PerPointRow> per_point;
    std::string toolkit_version;

    std::string to_json_text() const;
    static EvaluationReport from_json_text(const std::string& text, const std::string& origin);
    void write_json(const std::filesystem::path& path) const;
    static EvaluationReport from_json_file(const std::filesystem::path& path);

    /// Plot-ready per-point table: point_id,x,y,p_true,p_pred,abs_error,d_kde.
    void write_points_csv(std::ostream& out) const;
};

/// Runs the full pipeline for one scenario: load cases, label, extract
/// features, train on the training split, predict and score the test split,
/// rank features by permutation importance, and attach the KDE extrapolation
/// metric per test point. Deterministic given the config.
EvaluationReport run_scenario(const ScenarioConfig& cfg, int threads = 0);

/// Case-by-scenario membership grid with an RMSE row, in the shape used to
/// compare scenario accuracies side by side.
struct ScenarioTable {
    std::vector<std::string> scenario_ids;        ///< columns
    std::vector<std::string> case_names;          ///< rows, first-appearance order
    std::vector<std::vector<std::string>> cells;  ///< [case][scenario]: "x", "o", "xo" or ""
    std::vector<double> rmse;                     ///< per scenario

    void write_csv(std::ostream& out) const;
    void write_text(std::ostream& out) const;
};

ScenarioTable scenario_table(const std::vector<EvaluationReport>& reports);

/// Hyperparameter values to sweep; the cross product of the four lists is
/// evaluated. Each list defaults to the corresponding default value.
struct HyperparameterGrid {
    std::vector<int> n_trees{ForestHyperparameters{}.n_trees};
    std::vector<int> max_depth{ForestHyperparameters{}.max_depth};
    std::vector<int> min_samples_split{ForestHyperparameters{}.min_samples_split};
    std::vector<int> max_split_features{ForestHyperparameters{}.max_split_features};
};

struct GridSearchEntry {
    ForestHyperparameters hyperparameters{};
    double mean_rmse = 0.0;
    std::vector<double> fold_rmse; ///< one per held-out case, in case order
};

struct GridSearchResult {
    ForestHyperparameters best{};
    std::vector<GridSearchEntry> entries;
};

/// Leave-one-case-out search: every grid point is scored by the mean RMSE
/// over folds in which one case is held out and the rest train. Ties go to
/// fewer trees, then to shallower depth.
GridSearchResult loco_grid_search(const std::vector<CaseData>& cases,
                                  const HyperparameterGrid& grid, std::uint64_t seed,
                                  int threads = 0);

} // namespace turbuq
