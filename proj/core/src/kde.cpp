#include "turbuq/kde.hpp"

#include "turbuq/errors.hpp"
#include "turbuq/parallel.hpp"
#include "turbuq/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace turbuq {

double scott_bandwidth(std::size_t n, std::size_t d) {
    if (n == 0 || d == 0) throw std::invalid_argument("scott_bandwidth: n and d must be positive");
    return std::pow(static_cast<double>(n), -1.0 / (static_cast<double>(d) + 4.0));
}

const std::vector<std::string>& default_kde_features() {
    static const std::vector<std::string> names = {"q8", "q3", "q7", "q2", "q1"};
    return names;
}

void KdeTrainingSet::finalize() {
    const auto n = static_cast<double>(data_.rows());
    const auto d = static_cast<double>(data_.cols());
    bandwidth_ = scott_bandwidth(data_.rows(), data_.cols());
    norm_ = 1.0 / (n * std::pow(bandwidth_, d) * std::pow(2.0 * std::numbers::pi, d / 2.0));
}

namespace {

/// Bounding-box volume of the rows in their own coordinates; a degenerate
/// (constant) column contributes a nominal 1e-12 so the volume stays
/// positive.
double bounding_box_volume(const Matrix& rows) {
    double volume = 1.0;
    for (std::size_t j = 0; j < rows.cols(); ++j) {
        double lo = rows(0, j);
        double hi = lo;
        for (std::size_t i = 1; i < rows.rows(); ++i) {
            lo = std::min(lo, rows(i, j));
            hi = std::max(hi, rows(i, j));
        }
        double range = hi - lo;
        if (range == 0.0) range = 1e-12;
        volume *= range;
    }
    return volume;
}

} // namespace

KdeTrainingSet KdeTrainingSet::from_standardized(Matrix rows) {
    const double volume = rows.empty() ? 1.0 : bounding_box_volume(rows);
    return from_standardized(std::move(rows), 1.0 / volume);
}

KdeTrainingSet KdeTrainingSet::from_standardized(Matrix rows, double inverse_volume) {
    if (rows.rows() == 0 || rows.cols() == 0) {
        throw std::invalid_argument("KdeTrainingSet: training matrix is empty");
    }
    if (!(inverse_volume > 0.0)) {
        throw std::invalid_argument("KdeTrainingSet: inverse_volume must be positive");
    }
    KdeTrainingSet kde;
    kde.data_ = std::move(rows);
    kde.inv_volume_ = inverse_volume;
    kde.standardize_ = false;
    kde.finalize();
    return kde;
}

KdeTrainingSet build_kde(const Matrix& features, const std::vector<std::size_t>& columns,
                         std::size_t max_train_points, std::uint64_t seed) {
    if (columns.empty()) throw std::invalid_argument("build_kde: empty column subset");
    for (std::size_t c : columns) {
        if (c >= features.cols()) throw std::invalid_argument("build_kde: column index out of range");
    }
    if (features.rows() < 2) {
        throw data_error("KDE training set needs at least 2 rows, got " +
                         std::to_string(features.rows()));
    }

    std::vector<std::size_t> rows(features.rows());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    if (max_train_points >= 2 && max_train_points < features.rows()) {
        SplitMix64 rng(seed);
        for (std::size_t i = 0; i < max_train_points; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.next_below(
                                          static_cast<std::uint64_t>(rows.size() - i)));
            std::swap(rows[i], rows[j]);
        }
        rows.resize(max_train_points);
        std::sort(rows.begin(), rows.end());
    }

    Matrix subset(rows.size(), columns.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double* src = features.row(rows[i]);
        double* dst = subset.row(i);
        for (std::size_t j = 0; j < columns.size(); ++j) dst[j] = src[columns[j]];
    }

    KdeTrainingSet kde;
    kde.scaler_ = FeatureScaler::fit(subset);
    kde.data_ = kde.scaler_.transform(subset);
    // The box volume lives in the same standardized space as the kernel, so
    // 1/A is commensurable with the density.
    kde.inv_volume_ = 1.0 / bounding_box_volume(kde.data_);
    kde.standardize_ = true;
    kde.finalize();
    return kde;
}

double KdeTrainingSet::density(const double* raw_row) const {
    const std::size_t d = data_.cols();
    std::vector<double> x(raw_row, raw_row + d);
    if (standardize_) scaler_.transform_row_inplace(x.data());

    // Per training point, one exp of the summed squared scaled distances:
    // equal to the per-dimension Gaussian kernel product, at a third the cost.
    const double inv_h = 1.0 / bandwidth_;
    double sum = 0.0;
    for (std::size_t i = 0; i < data_.rows(); ++i) {
        const double* p = data_.row(i);
        double sq = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double t = (x[j] - p[j]) * inv_h;
            sq += t * t;
        }
        sum += std::exp(-0.5 * sq);
    }
    return norm_ * sum;
}

double KdeTrainingSet::density(const std::vector<double>& raw_row) const {
    if (raw_row.size() != data_.cols()) {
        throw std::invalid_argument("KdeTrainingSet::density: query dimension mismatch");
    }
    return density(raw_row.data());
}

double KdeTrainingSet::distance_from_density(double f) const {
    if (!(f >= 0.0)) throw numeric_error("KDE density is negative or NaN");
    return 1.0 - f / (f + inv_volume_);
}

void KdeTrainingSet::evaluate(const Matrix& raw_rows, std::vector<double>& density_out,
                              std::vector<double>& distance_out, int threads) const {
    if (raw_rows.cols() != data_.cols()) {
        throw std::invalid_argument("KdeTrainingSet::evaluate: query dimension mismatch");
    }
    density_out.assign(raw_rows.rows(), 0.0);
    distance_out.assign(raw_rows.rows(), 0.0);
    parallel_for(raw_rows.rows(), threads, [&](std::size_t i) {
        const double f = density(raw_rows.row(i));
        density_out[i] = f;
        distance_out[i] = distance_from_density(f);
    });
}

} // namespace turbuq
