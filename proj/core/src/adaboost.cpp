#include "dtnet/adaboost.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dtnet/errors.hpp"
#include "dtnet/rng.hpp"

namespace dtnet {

double samme_alpha(double err, int n_classes, double learning_rate) {
    return learning_rate * (std::log((1.0 - err) / err) + std::log(static_cast<double>(n_classes - 1)));
}

AdaBoostModel train_adaboost(const Matrix& X, const std::vector<int>& y, int n_estimators,
                             double learning_rate, int max_depth, std::uint64_t seed) {
    if (n_estimators < 1) throw InputError("train_adaboost: n_estimators must be >= 1");
    if (X.rows() == 0 || X.rows() != y.size()) throw InputError("train_adaboost: bad X/y shapes");
    int n_classes = 1 + *std::max_element(y.begin(), y.end());
    if (n_classes < 2) throw InputError("train_adaboost: need at least two classes");

    const std::size_t n = X.rows();
    std::vector<double> w(n, 1.0 / static_cast<double>(n));

    AdaBoostModel model;
    model.n_classes = n_classes;

    for (int m = 0; m < n_estimators; ++m) {
        DecisionTree tree = train_tree(X, y, w, max_depth, split_seed(seed, static_cast<std::uint64_t>(m)));
        tree.n_classes = n_classes;

        double err = 0.0;
        std::vector<int> pred(n);
        for (std::size_t i = 0; i < n; ++i) {
            pred[i] = tree.predict(X.row(i));
            if (pred[i] != y[i]) err += w[i];
        }

        if (err <= 0.0) {
            // perfect round: keep the tree with a large finite weight and stop
            model.trees.push_back(std::move(tree));
            model.alphas.push_back(learning_rate *
                                   (std::log(1e10) + std::log(static_cast<double>(n_classes - 1))));
            break;
        }
        if (err >= 1.0 - 1.0 / static_cast<double>(n_classes)) break;  // round rejected

        double alpha = samme_alpha(err, n_classes, learning_rate);
        model.trees.push_back(std::move(tree));
        model.alphas.push_back(alpha);

        double wsum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (pred[i] != y[i]) w[i] *= std::exp(alpha);
            wsum += w[i];
        }
        for (double& wi : w) wi /= wsum;
    }

    if (model.trees.empty())
        throw InputError("train_adaboost: first round was rejected, no usable estimator");
    return model;
}

EnsemblePrediction ensemble_predict(const AdaBoostModel& m, const Matrix& X) {
    if (m.trees.empty()) throw InputError("ensemble_predict: empty model");
    EnsemblePrediction out;
    out.scores = Matrix(X.rows(), static_cast<std::size_t>(m.n_classes));
    out.labels.resize(X.rows());
    for (std::size_t i = 0; i < X.rows(); ++i) {
        auto x = X.row(i);
        for (std::size_t t = 0; t < m.trees.size(); ++t) {
            int k = m.trees[t].predict(x);
            out.scores(i, static_cast<std::size_t>(k)) += m.alphas[t];
        }
        out.labels[i] = static_cast<int>(argmax(out.scores.row(i)));
    }
    return out;
}

namespace {

Matrix gather_rows(const Matrix& X, const std::vector<std::size_t>& idx) {
    Matrix out(idx.size(), X.cols());
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < X.cols(); ++j) out(i, j) = X(idx[i], j);
    return out;
}

double fold_accuracy(const Matrix& X, const std::vector<int>& y,
                     const std::vector<std::size_t>& train_idx,
                     const std::vector<std::size_t>& val_idx, double lr, int n_estimators,
                     int max_depth, std::uint64_t seed) {
    Matrix Xt = gather_rows(X, train_idx);
    std::vector<int> yt(train_idx.size());
    for (std::size_t i = 0; i < train_idx.size(); ++i) yt[i] = y[train_idx[i]];
    AdaBoostModel model = train_adaboost(Xt, yt, n_estimators, lr, max_depth, seed);
    auto pred = ensemble_predict(model, gather_rows(X, val_idx));
    std::size_t hits = 0;
    for (std::size_t i = 0; i < val_idx.size(); ++i)
        if (pred.labels[i] == y[val_idx[i]]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(val_idx.size());
}

}  // namespace

GridSearchResult grid_search_cv(const Matrix& X, const std::vector<int>& y,
                                const GridSearchSpec& spec, int max_depth, std::uint64_t seed) {
    if (spec.folds < 2) throw InputError("grid_search_cv: folds must be >= 2");
    if (static_cast<std::size_t>(spec.folds) > X.rows())
        throw InputError("grid_search_cv: more folds than samples");
    if (spec.learning_rates.empty() || spec.n_estimators_options.empty())
        throw InputError("grid_search_cv: empty grid");

    // seeded fold assignment shared by every grid cell
    std::vector<std::size_t> order(X.rows());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(order);
    std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(spec.folds));
    for (std::size_t i = 0; i < order.size(); ++i)
        folds[i % static_cast<std::size_t>(spec.folds)].push_back(order[i]);

    GridSearchResult result;
    double best_acc = -1.0;
    for (double lr : spec.learning_rates) {
        for (int ne : spec.n_estimators_options) {
            double acc_sum = 0.0;
            for (std::size_t f = 0; f < folds.size(); ++f) {
                std::vector<std::size_t> train_idx;
                for (std::size_t g = 0; g < folds.size(); ++g)
                    if (g != f) train_idx.insert(train_idx.end(), folds[g].begin(), folds[g].end());
                acc_sum += fold_accuracy(X, y, train_idx, folds[f], lr, ne, max_depth,
                                         split_seed(seed, f));
            }
            GridCell cell{lr, ne, acc_sum / static_cast<double>(folds.size())};
            result.table.push_back(cell);
            if (cell.mean_accuracy > best_acc) {
                best_acc = cell.mean_accuracy;
                result.best_learning_rate = lr;
                result.best_n_estimators = ne;
            }
        }
    }
    return result;
}

}  // namespace dtnet
