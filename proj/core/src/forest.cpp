/// @file forest.cpp
/// @brief From-scratch random-forest regressor: bagged CART trees with
/// sum-of-squared-error splits and permutation feature importance.

#include "turbuq/forest.hpp"

#include "turbuq/errors.hpp"
#include "turbuq/parallel.hpp"
#include "turbuq/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace turbuq {

namespace {

/// Builds one CART tree on the (standardized) sample set given by `samples`
/// (row indices into X, possibly with repeats from the bootstrap).
class TreeBuilder {
public:
    TreeBuilder(const Matrix& x, const std::vector<double>& y, const ForestHyperparameters& hp,
                SplitMix64& rng)
        : x_(x), y_(y), hp_(hp), rng_(rng),
          max_split_features_(std::min<std::size_t>(
              static_cast<std::size_t>(hp.max_split_features), x.cols())) {}

    RegressionTree build(std::vector<std::size_t> samples) {
        tree_.nodes.clear();
        grow(std::move(samples), 0);
        return std::move(tree_);
    }

private:
    struct Split {
        bool found = false;
        std::size_t feature = 0;
        double threshold = 0.0;
        double total_sse = 0.0;
    };

    static double node_sse(double sum, double sum_sq, std::size_t n) {
        return sum_sq - sum * sum / static_cast<double>(n);
    }

    int make_leaf(const std::vector<std::size_t>& samples) {
        double sum = 0.0;
        for (std::size_t i : samples) sum += y_[i];
        TreeNode node;
        node.value = sum / static_cast<double>(samples.size());
        node.n_samples = static_cast<int>(samples.size());
        tree_.nodes.push_back(node);
        return static_cast<int>(tree_.nodes.size() - 1);
    }

    /// Best split over the drawn candidate features. Candidates are scanned
    /// in ascending feature order with ascending thresholds, and a strictly
    /// smaller SSE is required to replace the incumbent, which yields the
    /// (lower feature index, lower threshold) tie-break.
    Split find_best_split(const std::vector<std::size_t>& samples) {
        std::vector<std::size_t> candidates = draw_candidate_features();
        std::sort(candidates.begin(), candidates.end());

        const std::size_t n = samples.size();
        Split best;

        std::vector<std::size_t> order(n);
        std::vector<double> values(n);
        std::vector<double> prefix_sum(n + 1), prefix_sum_sq(n + 1);

        for (std::size_t feature : candidates) {
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return x_(samples[a], feature) < x_(samples[b], feature);
            });
            for (std::size_t i = 0; i < n; ++i) values[i] = x_(samples[order[i]], feature);
            if (values.front() == values.back()) continue; // constant feature

            prefix_sum[0] = prefix_sum_sq[0] = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double yi = y_[samples[order[i]]];
                prefix_sum[i + 1] = prefix_sum[i] + yi;
                prefix_sum_sq[i + 1] = prefix_sum_sq[i] + yi * yi;
            }
            const double total_sum = prefix_sum[n];
            const double total_sum_sq = prefix_sum_sq[n];

            for (std::size_t i = 1; i < n; ++i) {
                if (values[i] == values[i - 1]) continue;
                const double sse_left = node_sse(prefix_sum[i], prefix_sum_sq[i], i);
                const double sse_right = node_sse(total_sum - prefix_sum[i],
                                                  total_sum_sq - prefix_sum_sq[i], n - i);
                const double total = sse_left + sse_right;
                if (!best.found || total < best.total_sse) {
                    best.found = true;
                    best.feature = feature;
                    best.threshold = 0.5 * (values[i - 1] + values[i]);
                    best.total_sse = total;
                }
            }
        }
        return best;
    }

    std::vector<std::size_t> draw_candidate_features() {
        const std::size_t d = x_.cols();
        if (max_split_features_ >= d) {
            std::vector<std::size_t> all(d);
            std::iota(all.begin(), all.end(), std::size_t{0});
            return all;
        }
        // Partial Fisher-Yates over the feature indices.
        std::vector<std::size_t> pool(d);
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        std::vector<std::size_t> drawn;
        drawn.reserve(max_split_features_);
        for (std::size_t i = 0; i < max_split_features_; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng_.next_below(d - i));
            std::swap(pool[i], pool[j]);
            drawn.push_back(pool[i]);
        }
        return drawn;
    }

    int grow(std::vector<std::size_t> samples, int depth) {
        const std::size_t n = samples.size();

        double sum = 0.0, sum_sq = 0.0;
        for (std::size_t i : samples) {
            sum += y_[i];
            sum_sq += y_[i] * y_[i];
        }
        const double sse_here = node_sse(sum, sum_sq, n);

        if (static_cast<int>(n) < hp_.min_samples_split || depth >= hp_.max_depth) {
            return make_leaf(samples);
        }

        const Split split = find_best_split(samples);
        if (!split.found || !(split.total_sse < sse_here)) {
            return make_leaf(samples); // no split reduces the SSE
        }

        std::vector<std::size_t> left, right;
        left.reserve(n);
        right.reserve(n);
        for (std::size_t i : samples) {
            (x_(i, split.feature) <= split.threshold ? left : right).push_back(i);
        }

        const int index = static_cast<int>(tree_.nodes.size());
        TreeNode node;
        node.feature = static_cast<int>(split.feature);
        node.threshold = split.threshold;
        node.n_samples = static_cast<int>(n);
        tree_.nodes.push_back(node);

        samples.clear();
        samples.shrink_to_fit();
        tree_.nodes[static_cast<std::size_t>(index)].left = grow(std::move(left), depth + 1);
        tree_.nodes[static_cast<std::size_t>(index)].right = grow(std::move(right), depth + 1);
        return index;
    }

    const Matrix& x_;
    const std::vector<double>& y_;
    const ForestHyperparameters& hp_;
    SplitMix64& rng_;
    const std::size_t max_split_features_;
    RegressionTree tree_;
};

double forest_mean(const ForestModel& model, const double* standardized_row) {
    double sum = 0.0;
    for (const auto& tree : model.trees) sum += tree.predict_row(standardized_row);
    const double mean = sum / static_cast<double>(model.trees.size());
    return std::clamp(mean, 0.0, 1.0);
}

std::vector<double> predict_standardized(const ForestModel& model, const Matrix& standardized,
                                         int threads) {
    std::vector<double> out(standardized.rows());
    parallel_for(standardized.rows(), threads,
                 [&](std::size_t i) { out[i] = forest_mean(model, standardized.row(i)); });
    return out;
}

} // namespace

void ForestHyperparameters::validate() const {
    std::ostringstream os;
    if (n_trees < 1) {
        os << "n_trees must be >= 1, got " << n_trees;
        throw std::invalid_argument(os.str());
    }
    if (max_depth < 1) {
        os << "max_depth must be >= 1, got " << max_depth;
        throw std::invalid_argument(os.str());
    }
    if (min_samples_split < 2) {
        os << "min_samples_split must be >= 2, got " << min_samples_split;
        throw std::invalid_argument(os.str());
    }
    if (max_split_features < 1) {
        os << "max_split_features must be >= 1, got " << max_split_features;
        throw std::invalid_argument(os.str());
    }
}

double RegressionTree::predict_row(const double* row) const {
    std::size_t node = 0;
    while (nodes[node].feature >= 0) {
        const TreeNode& n = nodes[node];
        node = static_cast<std::size_t>(row[n.feature] <= n.threshold ? n.left : n.right);
    }
    return nodes[node].value;
}

ForestModel train_forest(const Matrix& features, const std::vector<double>& targets,
                         const ForestHyperparameters& hp, const std::vector<std::string>& names,
                         int threads) {
    hp.validate();
    const std::size_t n = features.rows();
    if (n == 0) throw data_error("cannot train a forest on an empty dataset");
    if (targets.size() != n) {
        std::ostringstream os;
        os << "feature/target length mismatch: " << n << " rows vs " << targets.size()
           << " targets";
        throw data_error(os.str());
    }
    if (static_cast<int>(n) < hp.min_samples_split) {
        std::ostringstream os;
        os << "need at least min_samples_split = " << hp.min_samples_split << " rows, got " << n;
        throw data_error(os.str());
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(targets[i])) {
            std::ostringstream os;
            os << "non-finite target at row " << i;
            throw data_error(os.str());
        }
    }
    if (!names.empty() && names.size() != features.cols()) {
        throw std::invalid_argument("feature name count does not match feature dimension");
    }

    ForestModel model;
    model.hyperparameters = hp;
    model.feature_names = names;
    if (model.feature_names.empty()) {
        for (std::size_t j = 0; j < features.cols(); ++j) {
            model.feature_names.push_back("f" + std::to_string(j));
        }
    }
    model.scaler = FeatureScaler::fit(features);
    const Matrix standardized = model.scaler.transform(features);

    model.trees.resize(static_cast<std::size_t>(hp.n_trees));
    parallel_for(static_cast<std::size_t>(hp.n_trees), threads, [&](std::size_t t) {
        SplitMix64 rng(derive_stream(hp.seed, t));
        std::vector<std::size_t> samples(n);
        if (hp.bootstrap) {
            for (std::size_t i = 0; i < n; ++i) {
                samples[i] = static_cast<std::size_t>(rng.next_below(n));
            }
        } else {
            std::iota(samples.begin(), samples.end(), std::size_t{0});
        }
        TreeBuilder builder(standardized, targets, hp, rng);
        model.trees[t] = builder.build(std::move(samples));
    });
    return model;
}

std::vector<double> predict(const ForestModel& model, const Matrix& features, int threads) {
    if (features.cols() != model.feature_dimension()) {
        std::ostringstream os;
        os << "feature dimension mismatch: model expects " << model.feature_dimension()
           << " features, got " << features.cols();
        throw data_error(os.str());
    }
    const Matrix standardized = model.scaler.transform(features);
    return predict_standardized(model, standardized, threads);
}

double rmse(const std::vector<double>& predictions, const std::vector<double>& truth) {
    if (predictions.empty()) throw std::invalid_argument("rmse of empty sequences");
    if (predictions.size() != truth.size()) {
        std::ostringstream os;
        os << "rmse length mismatch: " << predictions.size() << " vs " << truth.size();
        throw std::invalid_argument(os.str());
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double e = predictions[i] - truth[i];
        sum += e * e;
    }
    return std::sqrt(sum / static_cast<double>(predictions.size()));
}

std::vector<FeatureImportance> permutation_importance(const ForestModel& model,
                                                      const Matrix& features,
                                                      const std::vector<double>& targets,
                                                      int repeats, std::uint64_t seed,
                                                      int threads) {
    if (features.rows() < 2) throw data_error("permutation importance needs at least 2 rows");
    if (features.rows() != targets.size()) {
        throw data_error("permutation importance: feature/target length mismatch");
    }
    if (repeats < 1) throw std::invalid_argument("repeats must be >= 1");

    const std::vector<double> base_pred = predict(model, features, threads);
    const double base_rmse = rmse(base_pred, targets);
    const std::size_t n = features.rows();
    const std::size_t d = features.cols();

    std::vector<FeatureImportance> importances(d);
    parallel_for(d, threads, [&](std::size_t f) {
        double delta_sum = 0.0;
        Matrix shuffled = features;
        std::vector<double> column(n);
        for (int rep = 0; rep < repeats; ++rep) {
            for (std::size_t i = 0; i < n; ++i) column[i] = features(i, f);
            SplitMix64 rng(derive_stream(seed, f, static_cast<std::uint64_t>(rep)));
            shuffle(column, rng);
            for (std::size_t i = 0; i < n; ++i) shuffled(i, f) = column[i];
            const std::vector<double> pred = predict(model, shuffled, 1);
            delta_sum += rmse(pred, targets) - base_rmse;
        }
        importances[f].feature = static_cast<int>(f);
        importances[f].name = model.feature_names[f];
        importances[f].delta_rmse = delta_sum / repeats;
    });

    std::stable_sort(importances.begin(), importances.end(),
                     [](const FeatureImportance& a, const FeatureImportance& b) {
                         if (a.delta_rmse != b.delta_rmse) return a.delta_rmse > b.delta_rmse;
                         return a.feature < b.feature;
                     });
    return importances;
}

} // namespace turbuq
