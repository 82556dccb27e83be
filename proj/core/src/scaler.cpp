#include "turbuq/scaler.hpp"

#include "turbuq/errors.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace turbuq {

FeatureScaler::FeatureScaler(std::vector<double> mean, std::vector<double> std)
    : mean_(std::move(mean)), std_(std::move(std)) {
    if (mean_.size() != std_.size()) {
        throw std::invalid_argument("scaler mean and std must have the same length");
    }
}

FeatureScaler FeatureScaler::fit(const Matrix& table) {
    const std::size_t n = table.rows();
    const std::size_t d = table.cols();
    if (n < 2) {
        std::ostringstream os;
        os << "scaler fit requires at least 2 rows, got " << n;
        throw data_error(os.str());
    }

    FeatureScaler s;
    s.mean_.assign(d, 0.0);
    s.std_.assign(d, 0.0);

    // Two-pass reduction in fixed row order for reproducibility.
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = table.row(i);
        for (std::size_t j = 0; j < d; ++j) s.mean_[j] += row[j];
    }
    for (std::size_t j = 0; j < d; ++j) s.mean_[j] /= static_cast<double>(n);

    for (std::size_t i = 0; i < n; ++i) {
        const double* row = table.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            const double dev = row[j] - s.mean_[j];
            s.std_[j] += dev * dev;
        }
    }
    for (std::size_t j = 0; j < d; ++j) {
        s.std_[j] = std::sqrt(s.std_[j] / static_cast<double>(n));
    }
    return s;
}

void FeatureScaler::transform_row_inplace(double* row) const {
    for (std::size_t j = 0; j < mean_.size(); ++j) {
        row[j] = (std_[j] < kConstantFeatureStdTol) ? 0.0 : (row[j] - mean_[j]) / std_[j];
    }
}

Matrix FeatureScaler::transform(const Matrix& table) const {
    if (table.cols() != dimension()) {
        throw std::invalid_argument("scaler dimension mismatch");
    }
    Matrix out = table;
    for (std::size_t i = 0; i < out.rows(); ++i) transform_row_inplace(out.row(i));
    return out;
}

Matrix FeatureScaler::inverse_transform(const Matrix& table) const {
    if (table.cols() != dimension()) {
        throw std::invalid_argument("scaler dimension mismatch");
    }
    Matrix out = table;
    for (std::size_t i = 0; i < out.rows(); ++i) {
        double* row = out.row(i);
        for (std::size_t j = 0; j < mean_.size(); ++j) {
            row[j] = (std_[j] < kConstantFeatureStdTol) ? mean_[j] : row[j] * std_[j] + mean_[j];
        }
    }
    return out;
}

FeatureScaler FeatureScaler::restrict_to(const std::vector<std::size_t>& columns) const {
    FeatureScaler s;
    s.mean_.reserve(columns.size());
    s.std_.reserve(columns.size());
    for (std::size_t c : columns) {
        if (c >= dimension()) {
            throw std::invalid_argument("scaler column index out of range");
        }
        s.mean_.push_back(mean_[c]);
        s.std_.push_back(std_[c]);
    }
    return s;
}

} // namespace turbuq
