/// @file bench_toolkit.cpp
/// @brief Microbenchmarks of the hot paths: spectral analysis, feature
/// extraction, forest training and prediction, KDE evaluation. All inputs
/// come from the synthetic case generator, so the numbers reflect realistic
/// feature distributions.

#include <benchmark/benchmark.h>

#include "turbuq/features.hpp"
#include "turbuq/forest.hpp"
#include "turbuq/kde.hpp"
#include "turbuq/realizability.hpp"
#include "turbuq/synthetic.hpp"

#include <cstdint>
#include <vector>

namespace {

using namespace turbuq;

const SyntheticCase& channel_case() {
    static const SyntheticCase sc = generate_synthetic_case(SyntheticKind::ChannelLike, 512, 42);
    return sc;
}

const FeatureTable& channel_features() {
    static const FeatureTable table = extract_features(channel_case().flow.records, 1);
    return table;
}

const ForestModel& trained_model() {
    static const ForestModel model = [] {
        ForestHyperparameters hp;
        hp.n_trees = 30;
        return train_forest(channel_features().values, channel_case().p_true, hp,
                            feature_names());
    }();
    return model;
}

std::vector<std::size_t> kde_columns() {
    std::vector<std::size_t> cols;
    for (const std::string& name : default_kde_features()) cols.push_back(feature_index(name));
    return cols;
}

void BM_Eigendecompose(benchmark::State& state) {
    const auto& records = channel_case().flow.records;
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(eigendecompose(records[i].tau_model));
        i = (i + 1) % records.size();
    }
}
BENCHMARK(BM_Eigendecompose);

void BM_BarycentricOfStress(benchmark::State& state) {
    const auto& records = channel_case().flow.records;
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(barycentric_of_stress(records[i].tau_model));
        i = (i + 1) % records.size();
    }
}
BENCHMARK(BM_BarycentricOfStress);

void BM_ExtractFeaturesRecord(benchmark::State& state) {
    const auto& records = channel_case().flow.records;
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(extract_features(records[i]));
        i = (i + 1) % records.size();
    }
}
BENCHMARK(BM_ExtractFeaturesRecord);

void BM_ExtractFeaturesBatch(benchmark::State& state) {
    const auto& records = channel_case().flow.records;
    const int threads = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(extract_features(records, threads));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(records.size()));
}
BENCHMARK(BM_ExtractFeaturesBatch)->Arg(1)->Arg(4);

void BM_TrainForest(benchmark::State& state) {
    const FeatureTable& features = channel_features();
    ForestHyperparameters hp;
    hp.n_trees = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            train_forest(features.values, channel_case().p_true, hp, {}, 1));
    }
}
BENCHMARK(BM_TrainForest)->Arg(1)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_Predict(benchmark::State& state) {
    const ForestModel& model = trained_model();
    const Matrix& queries = channel_features().values;
    for (auto _ : state) {
        benchmark::DoNotOptimize(predict(model, queries, 1));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(queries.rows()));
}
BENCHMARK(BM_Predict);

void BM_KdeDensity(benchmark::State& state) {
    const auto cols = kde_columns();
    const KdeTrainingSet kde = build_kde(channel_features().values, cols);
    const SyntheticCase hill = generate_synthetic_case(SyntheticKind::HillLike, 64, 7);
    const FeatureTable queries = extract_features(hill.flow.records, 1);
    std::vector<double> query(cols.size());
    std::size_t i = 0;
    for (auto _ : state) {
        for (std::size_t j = 0; j < cols.size(); ++j) query[j] = queries.values(i, cols[j]);
        benchmark::DoNotOptimize(kde.density(query));
        i = (i + 1) % queries.size();
    }
}
BENCHMARK(BM_KdeDensity);

void BM_KdeEvaluateBatch(benchmark::State& state) {
    const auto cols = kde_columns();
    const KdeTrainingSet kde = build_kde(channel_features().values, cols);
    const SyntheticCase hill = generate_synthetic_case(SyntheticKind::HillLike, 512, 7);
    const FeatureTable features = extract_features(hill.flow.records, 1);
    Matrix queries(features.size(), cols.size());
    for (std::size_t i = 0; i < features.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) queries(i, j) = features.values(i, cols[j]);

    std::vector<double> density, distance;
    for (auto _ : state) {
        kde.evaluate(queries, density, distance, 1);
        benchmark::DoNotOptimize(distance.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(queries.rows()));
}
BENCHMARK(BM_KdeEvaluateBatch);

} // namespace

BENCHMARK_MAIN();
