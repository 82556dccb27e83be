/// @file oracles.hpp
/// @brief Naive reference implementations shared by the unit tests and the
/// acceptance harness: trace-chain invariants, exhaustive CART growth and
/// direct kernel-product density summation.
///
/// Everything here is written for clarity over speed and deliberately avoids
/// the library's fused or incremental code paths, so agreement with the
/// library is a two-route check rather than a tautology.

#pragma once

#include "turbuq/features.hpp"
#include "turbuq/forest.hpp"
#include "turbuq/types.hpp"

#include <array>
#include <cmath>
#include <initializer_list>
#include <memory>
#include <set>
#include <stdexcept>
#include <vector>

namespace turbuq::test {

// ---------------------------------------------------------------------------
// invariant oracle

/// Local textbook multiply; the oracle must not share the library's fused
/// trace_product path.
inline Mat3 mul(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += a(i, k) * b(k, j);
            r(i, j) = s;
        }
    return r;
}

inline double tr(const Mat3& a) { return a(0, 0) + a(1, 1) + a(2, 2); }

inline double chain_trace(std::initializer_list<const Mat3*> factors) {
    auto it = factors.begin();
    Mat3 acc = **it;
    for (++it; it != factors.end(); ++it) acc = mul(acc, **it);
    return tr(acc);
}

inline Mat3 rotate(const Mat3& q, const Mat3& a) { return mul(mul(q, a), q.transposed()); }

/// The 47 invariants in canonical order, assembled naively from the grouped
/// product list.
inline std::array<double, kNumInvariantFeatures> oracle_invariants(const Mat3& s, const Mat3& w1,
                                                                   const Mat3& w2,
                                                                   const Mat3& w3) {
    const std::array<const Mat3*, 3> w{&w1, &w2, &w3};
    std::array<double, kNumInvariantFeatures> inv{};
    std::size_t n = 0;

    inv[n++] = chain_trace({&s, &s});
    inv[n++] = chain_trace({&s, &s, &s});

    for (const Mat3* wi : w) inv[n++] = chain_trace({wi, wi});

    for (const Mat3* wi : w) {
        inv[n++] = chain_trace({wi, wi, &s});
        inv[n++] = chain_trace({wi, wi, &s, &s});
        inv[n++] = chain_trace({wi, wi, &s, wi, &s, &s});
    }

    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j) inv[n++] = chain_trace({w[i], w[j]});

    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j) {
            const Mat3* wi = w[i];
            const Mat3* wj = w[j];
            inv[n++] = chain_trace({wi, wj, &s});
            inv[n++] = chain_trace({wi, wj, &s, &s});
            inv[n++] = chain_trace({wi, wi, wj, &s});
            inv[n++] = chain_trace({wi, wi, wj, &s, &s});
            inv[n++] = chain_trace({wj, wj, wi, &s});
            inv[n++] = chain_trace({wj, wj, wi, &s, &s});
            inv[n++] = chain_trace({wi, wi, &s, wj, &s, &s});
            inv[n++] = chain_trace({wj, wj, &s, wi, &s, &s});
        }

    inv[n++] = chain_trace({&w1, &w2, &w3});

    inv[n++] = chain_trace({&w1, &w2, &w3, &s});
    inv[n++] = chain_trace({&w1, &w3, &w2, &s});
    inv[n++] = chain_trace({&w1, &w2, &w3, &s, &s});
    inv[n++] = chain_trace({&w1, &w3, &w2, &s, &s});
    inv[n++] = chain_trace({&w1, &w2, &s, &w3, &s, &s});

    if (n != kNumInvariantFeatures) throw std::logic_error("invariant oracle count drifted");
    return inv;
}

// ---------------------------------------------------------------------------
// CART split oracle

struct OracleNode {
    int feature = -1;
    double threshold = 0.0;
    double value = 0.0;
    int n_samples = 0;
    std::unique_ptr<OracleNode> left, right;
};

inline double subset_sse(const std::vector<double>& y, const std::vector<std::size_t>& samples) {
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i : samples) {
        sum += y[i];
        sum_sq += y[i] * y[i];
    }
    return sum_sq - sum * sum / static_cast<double>(samples.size());
}

/// Reference tree growth: per node every (feature, midpoint) candidate is
/// enumerated naively with both child SSEs recomputed by looping the
/// samples, scanning features and thresholds in ascending order and
/// replacing the best only on strictly smaller SSE.
inline std::unique_ptr<OracleNode> oracle_grow(const Matrix& x, const std::vector<double>& y,
                                               const std::vector<std::size_t>& samples, int depth,
                                               const ForestHyperparameters& hp) {
    auto node = std::make_unique<OracleNode>();
    node->n_samples = static_cast<int>(samples.size());
    double sum = 0.0;
    for (std::size_t i : samples) sum += y[i];
    node->value = sum / static_cast<double>(samples.size());

    if (static_cast<int>(samples.size()) < hp.min_samples_split || depth >= hp.max_depth) {
        return node;
    }

    bool found = false;
    std::size_t best_feature = 0;
    double best_threshold = 0.0;
    double best_sse = 0.0;
    for (std::size_t f = 0; f < x.cols(); ++f) {
        std::set<double> distinct;
        for (std::size_t i : samples) distinct.insert(x(i, f));
        std::vector<double> values(distinct.begin(), distinct.end());
        for (std::size_t v = 1; v < values.size(); ++v) {
            const double threshold = 0.5 * (values[v - 1] + values[v]);
            std::vector<std::size_t> left, right;
            for (std::size_t i : samples) {
                (x(i, f) <= threshold ? left : right).push_back(i);
            }
            const double total = subset_sse(y, left) + subset_sse(y, right);
            if (!found || total < best_sse) {
                found = true;
                best_feature = f;
                best_threshold = threshold;
                best_sse = total;
            }
        }
    }

    if (!found || !(best_sse < subset_sse(y, samples))) return node;

    std::vector<std::size_t> left, right;
    for (std::size_t i : samples) {
        (x(i, best_feature) <= best_threshold ? left : right).push_back(i);
    }
    node->feature = static_cast<int>(best_feature);
    node->threshold = best_threshold;
    node->left = oracle_grow(x, y, left, depth + 1, hp);
    node->right = oracle_grow(x, y, right, depth + 1, hp);
    return node;
}

// ---------------------------------------------------------------------------
// KDE density oracle

constexpr double kInvSqrt2Pi = 0.3989422804014327;

/// Naive product-of-kernels density in evaluation space.
inline double naive_density(const Matrix& train, double sigma, const std::vector<double>& query) {
    double sum = 0.0;
    for (std::size_t i = 0; i < train.rows(); ++i) {
        double product = 1.0;
        for (std::size_t j = 0; j < train.cols(); ++j) {
            const double t = (query[j] - train(i, j)) / sigma;
            product *= std::exp(-0.5 * t * t) * kInvSqrt2Pi;
        }
        sum += product;
    }
    const double d = static_cast<double>(train.cols());
    return sum / (static_cast<double>(train.rows()) * std::pow(sigma, d));
}

inline double relative_difference(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

} // namespace turbuq::test
