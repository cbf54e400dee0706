#pragma once

#include <cstdint>
#include <vector>

#include "dtnet/matrix.hpp"
#include "dtnet/tree.hpp"

namespace dtnet {

struct AdaBoostModel {
    std::vector<DecisionTree> trees;
    std::vector<double> alphas;
    int n_classes = 0;
};

struct EnsemblePrediction {
    std::vector<int> labels;
    Matrix scores;  // n x c, score(k) = sum of alphas of trees voting k
};

struct GridSearchSpec {
    std::vector<double> learning_rates;
    std::vector<int> n_estimators_options;
    int folds = 4;
};

struct GridCell {
    double learning_rate = 0.0;
    int n_estimators = 0;
    double mean_accuracy = 0.0;
};

struct GridSearchResult {
    double best_learning_rate = 0.0;
    int best_n_estimators = 0;
    std::vector<GridCell> table;  // declaration order: learning rate outer, size inner
};

// Estimator weight for one boosting round:
//   eta * (ln((1 - err) / err) + ln(c - 1))
double samme_alpha(double err, int n_classes, double learning_rate);

// Multiclass AdaBoost (SAMME) over depth-limited CART trees. A round with
// weighted error >= 1 - 1/c is rejected and boosting stops; a perfect round
// keeps its tree with a large finite alpha and stops.
AdaBoostModel train_adaboost(const Matrix& X, const std::vector<int>& y, int n_estimators,
                             double learning_rate, int max_depth, std::uint64_t seed);

EnsemblePrediction ensemble_predict(const AdaBoostModel& m, const Matrix& X);

// Mean validation accuracy per grid cell over seeded k-fold splits; the best
// cell is the argmax, first in declaration order on ties.
GridSearchResult grid_search_cv(const Matrix& X, const std::vector<int>& y,
                                const GridSearchSpec& spec, int max_depth, std::uint64_t seed);

}  // namespace dtnet
