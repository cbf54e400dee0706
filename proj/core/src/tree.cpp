#include "dtnet/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dtnet/errors.hpp"

namespace dtnet {

int DecisionTree::predict(std::span<const double> x) const {
    int node = 0;
    while (!nodes[node].is_leaf()) {
        const TreeNode& nd = nodes[node];
        node = x[static_cast<std::size_t>(nd.feature)] < nd.threshold ? nd.left : nd.right;
    }
    return nodes[node].cls;
}

std::vector<int> DecisionTree::predict(const Matrix& X) const {
    std::vector<int> out(X.rows());
    for (std::size_t i = 0; i < X.rows(); ++i) out[i] = predict(X.row(i));
    return out;
}

int DecisionTree::depth() const {
    // iterative DFS over (node, depth)
    int best = 0;
    std::vector<std::pair<int, int>> stack{{0, 0}};
    while (!stack.empty()) {
        auto [node, d] = stack.back();
        stack.pop_back();
        const TreeNode& nd = nodes[static_cast<std::size_t>(node)];
        if (nd.is_leaf()) {
            best = std::max(best, d);
        } else {
            stack.emplace_back(nd.left, d + 1);
            stack.emplace_back(nd.right, d + 1);
        }
    }
    return best;
}

namespace {

struct Partition {
    std::vector<std::size_t> idx;
    int depth = 0;
    int node = 0;
};

double gini(std::span<const double> class_weights, double total) {
    if (total <= 0.0) return 0.0;
    double acc = 0.0;
    for (double cw : class_weights) {
        double p = cw / total;
        acc += p * p;
    }
    return 1.0 - acc;
}

int majority_class(std::span<const double> class_weights) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < class_weights.size(); ++k)
        if (class_weights[k] > class_weights[best]) best = k;
    return static_cast<int>(best);
}

struct SplitChoice {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double impurity = std::numeric_limits<double>::infinity();  // weighted child Gini sum
};

}  // namespace

DecisionTree train_tree(const Matrix& X, const std::vector<int>& y, const std::vector<double>& w,
                        int max_depth, std::uint64_t /*seed*/) {
    if (X.rows() == 0) throw InputError("train_tree: empty input");
    if (X.rows() != y.size() || X.rows() != w.size())
        throw InputError("train_tree: X, y, w size mismatch");
    if (max_depth < 1) throw InputError("train_tree: max_depth must be >= 1");
    double wsum = 0.0;
    for (double wi : w) {
        if (wi < 0.0) throw InputError("train_tree: negative sample weight");
        wsum += wi;
    }
    if (wsum <= 0.0) throw InputError("train_tree: all sample weights are zero");
    if (*std::min_element(y.begin(), y.end()) < 0) throw InputError("train_tree: negative label");

    int n_classes = 1 + *std::max_element(y.begin(), y.end());

    DecisionTree tree;
    tree.max_depth = max_depth;
    tree.n_classes = n_classes;

    std::vector<Partition> work;
    {
        Partition root;
        root.idx.resize(X.rows());
        std::iota(root.idx.begin(), root.idx.end(), 0);
        tree.nodes.emplace_back();
        work.push_back(std::move(root));
    }

    std::vector<std::size_t> order;
    while (!work.empty()) {
        Partition part = std::move(work.back());
        work.pop_back();

        std::vector<double> class_w(static_cast<std::size_t>(n_classes), 0.0);
        double total = 0.0;
        for (std::size_t i : part.idx) {
            class_w[static_cast<std::size_t>(y[i])] += w[i];
            total += w[i];
        }
        double node_gini = gini(class_w, total);

        TreeNode& node = tree.nodes[static_cast<std::size_t>(part.node)];
        if (part.depth >= max_depth || node_gini == 0.0 || total <= 0.0) {
            node.cls = majority_class(class_w);
            continue;
        }

        SplitChoice best;
        for (std::size_t f = 0; f < X.cols(); ++f) {
            order = part.idx;
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return X(a, f) < X(b, f);
            });
            std::vector<double> left_w(static_cast<std::size_t>(n_classes), 0.0);
            double left_total = 0.0;
            for (std::size_t pos = 0; pos + 1 < order.size(); ++pos) {
                std::size_t i = order[pos];
                left_w[static_cast<std::size_t>(y[i])] += w[i];
                left_total += w[i];
                double a = X(i, f), b = X(order[pos + 1], f);
                if (a == b) continue;  // need distinct consecutive values
                double t = a + 0.5 * (b - a);
                if (!(a < t) || !(t <= b)) continue;  // adjacent doubles, midpoint degenerate
                double right_total = total - left_total;
                if (left_total <= 0.0 || right_total <= 0.0) continue;
                double right_gini_acc = 0.0, left_gini_acc = 0.0;
                for (std::size_t k = 0; k < class_w.size(); ++k) {
                    double lw = left_w[k], rw = class_w[k] - left_w[k];
                    left_gini_acc += lw * lw;
                    right_gini_acc += rw * rw;
                }
                double impurity = (left_total - left_gini_acc / left_total) +
                                  (right_total - right_gini_acc / right_total);
                if (impurity < best.impurity - 1e-15) {
                    best.found = true;
                    best.feature = static_cast<int>(f);
                    best.threshold = t;
                    best.impurity = impurity;
                }
            }
        }

        // accept only impurity-reducing splits
        if (!best.found || best.impurity >= total * node_gini - 1e-15) {
            node.cls = majority_class(class_w);
            continue;
        }

        Partition left, right;
        left.depth = right.depth = part.depth + 1;
        for (std::size_t i : part.idx) {
            if (X(i, static_cast<std::size_t>(best.feature)) < best.threshold)
                left.idx.push_back(i);
            else
                right.idx.push_back(i);
        }
        node.feature = best.feature;
        node.threshold = best.threshold;
        node.left = static_cast<int>(tree.nodes.size());
        node.right = node.left + 1;
        left.node = node.left;
        right.node = node.right;
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();
        work.push_back(std::move(right));
        work.push_back(std::move(left));
    }
    return tree;
}

}  // namespace dtnet
