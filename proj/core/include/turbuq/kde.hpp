#pragma once

#include "turbuq/scaler.hpp"
#include "turbuq/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace turbuq {

class KdeTrainingSet;

/// Builds the density estimate over the given columns of a feature table.
/// When max_train_points > 0 and the table is larger, a uniform subsample of
/// that size (drawn with the given seed) keeps evaluation cost bounded.
KdeTrainingSet build_kde(const Matrix& features, const std::vector<std::size_t>& columns,
                         std::size_t max_train_points = 0, std::uint64_t seed = 42);

/// Gaussian-kernel density estimate over a low-dimensional feature subset,
/// used to score how far a query point sits from the training distribution.
class KdeTrainingSet {
public:
    /// Density at a query point given in raw (unstandardized) subset
    /// coordinates. Queries are standardized with the training scaler first.
    double density(const double* raw_row) const;
    double density(const std::vector<double>& raw_row) const;

    /// Extrapolation metric 1 - f / (f + 1/A) where A is the training
    /// bounding-box volume (product of per-feature ranges in evaluation
    /// space): near 0 well inside the training data, approaching 1 far
    /// outside it.
    double distance_from_density(double f) const;

    /// Density and distance for every row of a raw query table.
    void evaluate(const Matrix& raw_rows, std::vector<double>& density_out,
                  std::vector<double>& distance_out, int threads = 0) const;

    double bandwidth() const { return bandwidth_; }
    double inverse_volume() const { return inv_volume_; }
    std::size_t dimension() const { return data_.cols(); }
    std::size_t size() const { return data_.rows(); }
    const FeatureScaler& scaler() const { return scaler_; }

    /// Treats the rows as evaluation-space coordinates directly, skipping
    /// standardization. Intended for tests and data of known scale; this
    /// variant also admits n = 1. The bounding-box volume is taken from the
    /// rows unless overridden.
    static KdeTrainingSet from_standardized(Matrix rows);
    static KdeTrainingSet from_standardized(Matrix rows, double inverse_volume);

    friend KdeTrainingSet build_kde(const Matrix&, const std::vector<std::size_t>&, std::size_t,
                                    std::uint64_t);

private:
    FeatureScaler scaler_;
    Matrix data_;            // training rows in evaluation space
    double bandwidth_ = 1.0; // Scott's rule, n^(-1/(d+4))
    double inv_volume_ = 1.0;
    double norm_ = 1.0; // 1 / (n sigma^d (2 pi)^(d/2))
    bool standardize_ = true;

    void finalize();
};

double scott_bandwidth(std::size_t n, std::size_t d);

/// Feature subset the extrapolation metric defaults to.
const std::vector<std::string>& default_kde_features();

} // namespace turbuq
