#pragma once

#include "turbuq/scaler.hpp"
#include "turbuq/types.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace turbuq {

/// Random-forest hyperparameters. The defaults are the fitted values used
/// throughout: 30 trees, depth 15, split threshold 10 samples, 7 candidate
/// features per split.
struct ForestHyperparameters {
    int n_trees = 30;
    int max_depth = 15;
    int min_samples_split = 10;
    int max_split_features = 7;
    std::uint64_t seed = 42;
    bool bootstrap = true; ///< classic bagging; disabled only by tests

    void validate() const;
    bool operator==(const ForestHyperparameters&) const = default;
};

/// One node of a regression tree. feature < 0 marks a leaf; samples with
/// value <= threshold go left.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0; ///< leaf mean target
    int n_samples = 0;
};

/// CART regression tree with variance-reduction splits.
struct RegressionTree {
    std::vector<TreeNode> nodes; ///< nodes[0] is the root

    double predict_row(const double* row) const;
};

/// Trained ensemble: trees plus everything needed to reproduce predictions
/// (hyperparameters, feature order, standardization statistics).
struct ForestModel {
    ForestHyperparameters hyperparameters;
    std::vector<RegressionTree> trees;
    std::vector<std::string> feature_names;
    FeatureScaler scaler;

    std::size_t feature_dimension() const { return feature_names.size(); }
};

/// Trains a bagged forest on raw (pre-standardization) features. The scaler
/// is fitted here and stored in the model; every tree draws its bootstrap
/// sample and split-candidate features from an RNG stream derived from
/// (seed, tree index), so training is bit-reproducible for any thread count.
ForestModel train_forest(const Matrix& features, const std::vector<double>& targets,
                         const ForestHyperparameters& hp,
                         const std::vector<std::string>& names = {}, int threads = 0);

/// Ensemble-mean predictions, clamped to [0, 1] (the perturbation strength
/// range). Input rows are raw features; the model's scaler is applied.
std::vector<double> predict(const ForestModel& model, const Matrix& features, int threads = 0);

/// Root mean squared error between two equal-length sequences.
double rmse(const std::vector<double>& predictions, const std::vector<double>& truth);

struct FeatureImportance {
    int feature = 0;
    std::string name;
    double delta_rmse = 0.0; ///< mean RMSE increase over repeats when shuffled
};

/// Permutation feature importance: per feature, the mean increase in RMSE
/// over `repeats` seeded column shuffles, sorted descending (ties broken by
/// feature index).
std::vector<FeatureImportance> permutation_importance(const ForestModel& model,
                                                      const Matrix& features,
                                                      const std::vector<double>& targets,
                                                      int repeats = 10, std::uint64_t seed = 42,
                                                      int threads = 0);

/// Model (de)serialization: versioned JSON, numbers at 17 significant
/// digits so reloaded models predict bit-identically.
void save_model(const ForestModel& model, std::ostream& out);
void save_model(const ForestModel& model, const std::filesystem::path& path);
ForestModel load_model(std::istream& in, const std::string& origin);
ForestModel load_model(const std::filesystem::path& path);

} // namespace turbuq
