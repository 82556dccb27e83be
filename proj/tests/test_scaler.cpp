/// @file test_scaler.cpp
/// @brief Standardization statistics: population moments, constant-column
/// convention, inverse transform, column restriction.

#include "doctest.h"
#include "test_support.hpp"

#include "turbuq/errors.hpp"
#include "turbuq/scaler.hpp"

#include <cmath>
#include <vector>

using namespace turbuq;

namespace {

Matrix column_matrix(const std::vector<double>& values) {
    Matrix m(values.size(), 1);
    for (std::size_t i = 0; i < values.size(); ++i) m(i, 0) = values[i];
    return m;
}

} // namespace

TEST_SUITE("scaler") {

TEST_CASE("population statistics on a hand-checked column") {
    // (1, 2, 3): mean 2, population std sqrt(2/3), scaled values
    // -+1.2247448713915890 and 0.
    const auto s = FeatureScaler::fit(column_matrix({1.0, 2.0, 3.0}));
    CHECK(s.mean()[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(s.std()[0] == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-15));

    const Matrix scaled = s.transform(column_matrix({1.0, 2.0, 3.0}));
    CHECK(scaled(0, 0) == doctest::Approx(-1.2247448713915890).epsilon(1e-12));
    CHECK(scaled(1, 0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(scaled(2, 0) == doctest::Approx(1.2247448713915890).epsilon(1e-12));
}

TEST_CASE("constant columns map to zero both ways") {
    const auto s = FeatureScaler::fit(column_matrix({5.0, 5.0, 5.0}));
    const Matrix scaled = s.transform(column_matrix({5.0, 5.0, 5.0}));
    for (std::size_t i = 0; i < 3; ++i) CHECK(scaled(i, 0) == 0.0);
    // Descaling a constant column restores the fitted mean.
    const Matrix back = s.inverse_transform(scaled);
    for (std::size_t i = 0; i < 3; ++i) CHECK(back(i, 0) == 5.0);
}

TEST_CASE("self-transform yields zero mean and unit variance") {
    SplitMix64 rng(8101);
    Matrix table(50, 4);
    for (auto& v : table.data()) v = 10.0 * (rng.next_double() - 0.3);

    const auto s = FeatureScaler::fit(table);
    const Matrix scaled = s.transform(table);
    for (std::size_t j = 0; j < scaled.cols(); ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < scaled.rows(); ++i) mean += scaled(i, j);
        mean /= static_cast<double>(scaled.rows());
        double var = 0.0;
        for (std::size_t i = 0; i < scaled.rows(); ++i) {
            var += (scaled(i, j) - mean) * (scaled(i, j) - mean);
        }
        var /= static_cast<double>(scaled.rows());
        CHECK(std::abs(mean) < 1e-12);
        CHECK(std::abs(var - 1.0) < 1e-10);
    }
}

TEST_CASE("inverse transform undoes scaling") {
    SplitMix64 rng(8102);
    Matrix table(20, 3);
    for (auto& v : table.data()) v = 100.0 * (rng.next_double() - 0.5);

    const auto s = FeatureScaler::fit(table);
    const Matrix roundtrip = s.inverse_transform(s.transform(table));
    for (std::size_t i = 0; i < table.rows(); ++i)
        for (std::size_t j = 0; j < table.cols(); ++j)
            CHECK(std::abs(roundtrip(i, j) - table(i, j)) < 1e-12);
}

TEST_CASE("row-wise transform matches the matrix overload") {
    SplitMix64 rng(8103);
    Matrix table(10, 5);
    for (auto& v : table.data()) v = rng.next_double();
    const auto s = FeatureScaler::fit(table);
    const Matrix scaled = s.transform(table);
    for (std::size_t i = 0; i < table.rows(); ++i) {
        std::vector<double> row(table.row(i), table.row(i) + table.cols());
        s.transform_row_inplace(row.data());
        for (std::size_t j = 0; j < table.cols(); ++j) CHECK(row[j] == scaled(i, j));
    }
}

TEST_CASE("column restriction keeps the right statistics") {
    Matrix table(4, 3);
    for (std::size_t i = 0; i < 4; ++i) {
        table(i, 0) = static_cast<double>(i);
        table(i, 1) = 10.0 * static_cast<double>(i);
        table(i, 2) = -static_cast<double>(i);
    }
    const auto s = FeatureScaler::fit(table);
    const auto sub = s.restrict_to({2, 0});
    REQUIRE(sub.dimension() == 2);
    CHECK(sub.mean()[0] == s.mean()[2]);
    CHECK(sub.std()[0] == s.std()[2]);
    CHECK(sub.mean()[1] == s.mean()[0]);
    CHECK(sub.std()[1] == s.std()[0]);
    CHECK_THROWS_AS(s.restrict_to({3}), std::invalid_argument);
}

TEST_CASE("contract violations") {
    CHECK_THROWS_AS(FeatureScaler::fit(Matrix(1, 2)), data_error);
    CHECK_THROWS_AS(FeatureScaler::fit(Matrix()), data_error);
    const auto s = FeatureScaler::fit(column_matrix({0.0, 1.0}));
    CHECK_THROWS_AS(s.transform(Matrix(2, 3)), std::invalid_argument);
    CHECK_THROWS_AS(s.inverse_transform(Matrix(2, 3)), std::invalid_argument);
    CHECK_THROWS_AS(FeatureScaler({1.0, 2.0}, {1.0}), std::invalid_argument);
}

} // TEST_SUITE
