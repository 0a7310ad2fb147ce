#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "root13/dataset.hpp"

namespace root13 {

inline constexpr char kForestMagic[] = "ROOT13F";
inline constexpr std::uint32_t kForestFormatVersion = 1;

struct ForestParams {
  std::uint32_t n_trees = 100;
  std::uint32_t m_try = 0;     // 0 = floor(log2 K) + 1 for K features
  std::uint32_t min_leaf = 1;
  std::uint32_t max_depth = 0;  // 0 = unlimited
  std::uint64_t seed = 0;

  bool operator==(const ForestParams&) const = default;
};

// CART-style node. feature < 0 marks a leaf; a split routes
// value <= threshold left, > threshold right. The threshold is the largest
// training value sent left, so any strictly increasing per-column transform
// applied to train and test alike leaves every routing decision unchanged.
// Leaves carry the class counts of the bootstrap samples that reached them.
struct TreeNode {
  std::int32_t feature = -1;
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::array<std::uint32_t, 3> counts{};
};

struct Tree {
  std::vector<TreeNode> nodes;  // preorder, root at index 0
};

struct ForestModel {
  ForestParams params;  // echo; m_try holds the effective value
  std::vector<std::string> columns;
  std::vector<Label> classes;  // always the three canonical labels
  std::vector<Tree> trees;
};

// Gini impurity 1 - sum p_k^2 of a label multiset. Throws EmptySet.
double gini(std::span<const Label> labels);

struct SplitChoice {
  std::int32_t feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

// Exhaustively evaluates every boundary between consecutive distinct values
// of each candidate feature and returns the split with maximal Gini gain.
// Ties break on lowest feature index, then lowest threshold; nullopt when no
// split has positive gain (or none leaves min_leaf samples on both sides).
std::optional<SplitChoice> best_split(
    const std::vector<std::vector<double>>& rows,
    const std::vector<Label>& labels,
    const std::vector<std::int32_t>& candidate_features,
    std::uint32_t min_leaf = 1);

// Bagged CART training. Tree i draws its bootstrap sample and per-node
// feature subsets from a generator seeded with mix_seed(params.seed, i), so
// results do not depend on how trees are scheduled across threads.
ForestModel train_forest(const std::vector<std::vector<double>>& rows,
                         const std::vector<Label>& labels,
                         const std::vector<std::string>& columns,
                         const ForestParams& params);

// Trains on the table's normalized vectors over all 14 columns.
ForestModel train_forest(const FeatureTable& table, const ForestParams& params);

struct Prediction {
  Label label = Label::kHyper;
  std::array<std::uint32_t, 3> votes{};  // indexed by canonical label order
};

// Majority vote across trees; each tree votes its leaf's modal class. All
// ties break by canonical label order.
Prediction predict(const ForestModel& model, std::span<const double> values);
Prediction predict(const ForestModel& model, const FeatureVector& fv);

void save_forest(const ForestModel& model, std::ostream& out);
ForestModel load_forest(std::istream& in);
void save_forest(const ForestModel& model, const std::string& path);
ForestModel load_forest(const std::string& path);

}  // namespace root13
