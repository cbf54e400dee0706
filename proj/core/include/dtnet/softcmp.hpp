#pragma once

#include <span>
#include <vector>

#include "dtnet/matrix.hpp"
#include "dtnet/tree.hpp"

namespace dtnet {

enum class SoftCmpMode { scaled_sigmoid, power };

struct SoftCmpParams {
    SoftCmpMode mode = SoftCmpMode::scaled_sigmoid;
    double alpha = 8.0;      // sigmoid sharpness
    int k = 10;              // power-mode exponent
    double alpha_max = 1e4;  // clamp for data-derived alphas
};

// 1 / (1 + exp(-alpha (a - b))): smooth stand-in for [a > b].
double scaled_sigmoid_cmp(double a, double b, double alpha);

// a^k / (a^k + b^k) for positive a, b.
double power_cmp(double a, double b, int k);

// Sharpness needed for the sigmoid comparator to saturate at every internal
// node of the tree against every representative point: the max over
// (node, point) pairs of 8 / |threshold - feature value|, skipping exact
// coincidences, clamped to alpha_max.
double select_alpha(const DecisionTree& tree, const Matrix& X, double alpha_max);

// Per-class scores from evaluating the tree with soft branch weights: the
// comparator scores the go-right side (feature >= threshold) and each leaf
// contributes the product of its path weights. Scores sum to 1.
std::vector<double> soft_tree_eval(const DecisionTree& tree, std::span<const double> x,
                                   const SoftCmpParams& params);

struct CostModelParams {
    int n_trees = 100;
    int n_threads = 32;
    int tree_depth = 5;
    int bootstraps_low = 5;
    int bootstraps_high = 10;
    double bootstrap_time_s = 0.01;
};

struct CostEstimate {
    double low_s = 0.0;
    double high_s = 0.0;
};

// Amortized seconds per point for evaluating the ensemble with bootstrapped
// soft comparators: (2^depth - 1) comparisons per tree, each costing
// bootstraps * bootstrap_time, times ceil(trees / threads) sequential batches.
CostEstimate cost_estimate(const CostModelParams& p);

}  // namespace dtnet
