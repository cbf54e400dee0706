#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dtnet/matrix.hpp"

namespace dtnet {

// Node of a binary decision tree stored in a flat array. Internal nodes route
// left iff x[feature] < threshold; leaves carry the predicted class.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int cls = -1;

    bool is_leaf() const { return feature < 0; }
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
    int max_depth = 0;
    int n_classes = 0;

    int predict(std::span<const double> x) const;
    std::vector<int> predict(const Matrix& X) const;
    // Longest root-to-leaf edge count actually present in the tree.
    int depth() const;
};

// Greedy CART on weighted Gini impurity. Split thresholds are midpoints
// between consecutive distinct sorted values; growth stops at max_depth, on a
// pure node, or when no split reduces impurity. Leaves predict the
// weighted-majority class (lowest index on ties).
DecisionTree train_tree(const Matrix& X, const std::vector<int>& y, const std::vector<double>& w,
                        int max_depth, std::uint64_t seed = 0);

}  // namespace dtnet
