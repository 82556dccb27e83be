#pragma once

#include "turbuq/types.hpp"

#include <vector>

namespace turbuq {

/// Per-column standardization statistics (population mean / standard
/// deviation), fitted on training data and reapplied verbatim to test data.
/// Columns with std below 1e-12 are treated as constant and map to zero.
class FeatureScaler {
public:
    FeatureScaler() = default;
    FeatureScaler(std::vector<double> mean, std::vector<double> std);

    /// Fit population statistics (divide by n) on a table with >= 2 rows.
    static FeatureScaler fit(const Matrix& table);

    std::size_t dimension() const { return mean_.size(); }
    const std::vector<double>& mean() const { return mean_; }
    const std::vector<double>& std() const { return std_; }

    /// (x - mean) / std column-wise; constant columns map to 0.
    Matrix transform(const Matrix& table) const;
    void transform_row_inplace(double* row) const;

    /// x * std + mean; the inverse of transform for non-constant columns.
    Matrix inverse_transform(const Matrix& table) const;

    /// Scaler restricted to a subset of columns (used for KDE feature subsets).
    FeatureScaler restrict_to(const std::vector<std::size_t>& columns) const;

private:
    std::vector<double> mean_;
    std::vector<double> std_;
};

inline constexpr double kConstantFeatureStdTol = 1e-12;

} // namespace turbuq
