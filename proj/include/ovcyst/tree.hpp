#pragma once

#include "ovcyst/types.hpp"

#include <algorithm>
#include <vector>

namespace ovcyst {

// Flat binary tree; node 0 is the root. A sample goes left when
// x[feature] <= threshold.
template <typename Leaf>
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    Leaf leaf{};

    bool is_leaf() const noexcept { return feature < 0; }

    friend bool operator==(const TreeNode& a, const TreeNode& b) {
        return a.feature == b.feature && a.threshold == b.threshold && a.left == b.left && a.right == b.right &&
               a.leaf == b.leaf;
    }
};

template <typename Leaf>
class BinaryTree {
public:
    using Node = TreeNode<Leaf>;

    std::vector<Node> nodes;

    template <typename Derived>
    int leaf_index(const Eigen::MatrixBase<Derived>& x) const {
        int i = 0;
        while (!nodes[static_cast<std::size_t>(i)].is_leaf()) {
            const Node& node = nodes[static_cast<std::size_t>(i)];
            i = x(node.feature) <= node.threshold ? node.left : node.right;
        }
        return i;
    }

    template <typename Derived>
    const Leaf& evaluate(const Eigen::MatrixBase<Derived>& x) const {
        return nodes[static_cast<std::size_t>(leaf_index(x))].leaf;
    }

    std::size_t leaf_count() const {
        return static_cast<std::size_t>(
            std::count_if(nodes.begin(), nodes.end(), [](const Node& n) { return n.is_leaf(); }));
    }

    int depth() const { return nodes.empty() ? 0 : depth_from(0); }

    bool operator==(const BinaryTree&) const = default;

private:
    int depth_from(int i) const {
        const Node& node = nodes[static_cast<std::size_t>(i)];
        if (node.is_leaf()) return 0;
        return 1 + std::max(depth_from(node.left), depth_from(node.right));
    }
};

// Leaves hold a class distribution.
using ClassificationTree = BinaryTree<ClassProbabilities>;
// Leaves hold a real-valued weight.
using RegressionTree = BinaryTree<double>;

}  // namespace ovcyst
