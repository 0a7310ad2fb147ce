#include "root13/forest.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>

#include "root13/binio.hpp"
#include "root13/parallel.hpp"
#include "root13/rng.hpp"

namespace root13 {

namespace {

constexpr std::size_t kNumClasses = 3;

double gini_from_counts(const std::array<std::uint32_t, kNumClasses>& counts,
                        std::uint32_t total) {
  double sum = 0.0;
  for (std::uint32_t c : counts) {
    double p = static_cast<double>(c) / static_cast<double>(total);
    sum += p * p;
  }
  return 1.0 - sum;
}

// Row-major matrix wrapper used during training.
struct MatrixView {
  const double* data = nullptr;
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  double at(std::size_t r, std::size_t c) const { return data[r * n_cols + c]; }
};

// Core split search over a sample-index multiset. Equal gains keep the
// earlier candidate; candidates are visited in ascending feature order and,
// within a feature, ascending threshold order, which realizes the documented
// tie-break. Gains are computed from label counts only, so any strictly
// increasing per-column transform of the data leaves every comparison
// bit-identical.
std::optional<SplitChoice> best_split_core(
    const MatrixView& m, const std::vector<Label>& labels,
    std::span<const std::uint32_t> samples,
    std::span<const std::int32_t> candidates, std::uint32_t min_leaf) {
  std::size_t n = samples.size();
  if (n < 2) return std::nullopt;

  std::array<std::uint32_t, kNumClasses> parent_counts{};
  for (auto s : samples) ++parent_counts[static_cast<std::size_t>(labels[s])];
  double parent_gini = gini_from_counts(parent_counts, static_cast<std::uint32_t>(n));

  SplitChoice best;
  bool found = false;
  std::vector<std::pair<double, Label>> vals(n);

  for (std::int32_t f : candidates) {
    for (std::size_t i = 0; i < n; ++i) {
      vals[i] = {m.at(samples[i], static_cast<std::size_t>(f)), labels[samples[i]]};
    }
    std::sort(vals.begin(), vals.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    std::array<std::uint32_t, kNumClasses> left{};
    for (std::size_t i = 0; i + 1 < n; ++i) {
      ++left[static_cast<std::size_t>(vals[i].second)];
      if (vals[i].first == vals[i + 1].first) continue;
      std::uint32_t nl = static_cast<std::uint32_t>(i + 1);
      std::uint32_t nr = static_cast<std::uint32_t>(n) - nl;
      if (nl < min_leaf || nr < min_leaf) continue;

      std::array<std::uint32_t, kNumClasses> right{};
      for (std::size_t k = 0; k < kNumClasses; ++k)
        right[k] = parent_counts[k] - left[k];
      double child_gini =
          (static_cast<double>(nl) * gini_from_counts(left, nl) +
           static_cast<double>(nr) * gini_from_counts(right, nr)) /
          static_cast<double>(n);
      double gain = parent_gini - child_gini;
      if (!found || gain > best.gain) {
        // The threshold is the largest value routed left, not the gap's
        // midpoint: an order statistic keeps routing decisions invariant
        // under strictly increasing per-column transforms, midpoints do not.
        best = {f, vals[i].first, gain};
        found = true;
      }
    }
  }
  if (!found || !(best.gain > 0.0)) return std::nullopt;
  return best;
}

struct TreeGrower {
  const MatrixView& m;
  const std::vector<Label>& labels;
  std::uint32_t m_try;
  std::uint32_t min_leaf;
  std::uint32_t max_depth;
  std::mt19937_64 rng;
  std::vector<TreeNode> nodes;
  std::vector<std::int32_t> feature_pool;

  TreeGrower(const MatrixView& m_, const std::vector<Label>& labels_,
             std::uint32_t m_try_, std::uint32_t min_leaf_,
             std::uint32_t max_depth_, std::uint64_t seed)
      : m(m_), labels(labels_), m_try(m_try_), min_leaf(min_leaf_),
        max_depth(max_depth_), rng(seed) {
    feature_pool.resize(m.n_cols);
    std::iota(feature_pool.begin(), feature_pool.end(), 0);
  }

  // Partial Fisher-Yates, then sort so candidates are visited in ascending
  // feature order regardless of draw order.
  std::vector<std::int32_t> sample_features() {
    for (std::uint32_t i = 0; i < m_try; ++i) {
      std::size_t j = i + bounded(rng, feature_pool.size() - i);
      std::swap(feature_pool[i], feature_pool[j]);
    }
    std::vector<std::int32_t> out(feature_pool.begin(),
                                  feature_pool.begin() + m_try);
    std::sort(out.begin(), out.end());
    return out;
  }

  std::int32_t grow(std::vector<std::uint32_t>& samples, std::uint32_t depth) {
    std::int32_t idx = static_cast<std::int32_t>(nodes.size());
    nodes.emplace_back();
    auto& counts = nodes[idx].counts;
    for (auto s : samples) ++counts[static_cast<std::size_t>(labels[s])];

    bool pure = false;
    for (std::uint32_t c : counts) {
      if (c == samples.size()) pure = true;
    }
    if (pure || samples.size() < 2 * min_leaf ||
        (max_depth > 0 && depth >= max_depth)) {
      return idx;
    }

    auto candidates = sample_features();
    auto split = best_split_core(m, labels, samples, candidates, min_leaf);
    if (!split) return idx;

    std::vector<std::uint32_t> left_samples, right_samples;
    left_samples.reserve(samples.size());
    for (auto s : samples) {
      if (m.at(s, static_cast<std::size_t>(split->feature)) <= split->threshold)
        left_samples.push_back(s);
      else
        right_samples.push_back(s);
    }
    samples.clear();
    samples.shrink_to_fit();

    nodes[idx].feature = split->feature;
    nodes[idx].threshold = split->threshold;
    std::int32_t l = grow(left_samples, depth + 1);
    std::int32_t r = grow(right_samples, depth + 1);
    nodes[idx].left = l;
    nodes[idx].right = r;
    return idx;
  }
};

// floor(log2 K) + 1, the pinned default for the number of features tried
// per node; 4 for the full 14-column set.
std::uint32_t effective_m_try(std::uint32_t m_try, std::size_t n_cols) {
  if (m_try != 0) return m_try;
  return static_cast<std::uint32_t>(std::bit_width(n_cols));
}

void validate_params(const ForestParams& params, std::size_t n_cols) {
  if (params.n_trees < 1) throw BadParams("n_trees must be >= 1");
  if (params.min_leaf < 1) throw BadParams("min_leaf must be >= 1");
  if (n_cols == 0) throw BadParams("no feature columns");
  if (params.m_try > n_cols)
    throw BadParams("m_try exceeds feature count");
}

const TreeNode& descend(const Tree& tree, std::span<const double> values) {
  const TreeNode* node = &tree.nodes[0];
  while (node->feature >= 0) {
    node = values[static_cast<std::size_t>(node->feature)] <= node->threshold
               ? &tree.nodes[node->left]
               : &tree.nodes[node->right];
  }
  return *node;
}

std::size_t argmax_canonical(const std::array<std::uint32_t, kNumClasses>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < kNumClasses; ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

void save_node(std::ostream& out, const Tree& tree, std::int32_t idx) {
  const TreeNode& node = tree.nodes[idx];
  if (node.feature < 0) {
    binio::write_u8(out, 0);
    for (auto c : node.counts) binio::write_u32(out, c);
  } else {
    binio::write_u8(out, 1);
    binio::write_u32(out, static_cast<std::uint32_t>(node.feature));
    binio::write_f64(out, node.threshold);
    save_node(out, tree, node.left);
    save_node(out, tree, node.right);
  }
}

std::int32_t load_node(std::istream& in, Tree& tree) {
  std::uint8_t tag = binio::read_u8(in);
  std::int32_t idx = static_cast<std::int32_t>(tree.nodes.size());
  tree.nodes.emplace_back();
  if (tag == 0) {
    for (auto& c : tree.nodes[idx].counts) c = binio::read_u32(in);
  } else if (tag == 1) {
    std::uint32_t feature = binio::read_u32(in);
    double threshold = binio::read_f64(in);
    std::int32_t l = load_node(in, tree);
    std::int32_t r = load_node(in, tree);
    auto& node = tree.nodes[idx];
    node.feature = static_cast<std::int32_t>(feature);
    node.threshold = threshold;
    node.left = l;
    node.right = r;
  } else {
    throw Error("corrupt forest file: bad node tag");
  }
  return idx;
}

}  // namespace

double gini(std::span<const Label> labels) {
  if (labels.empty()) throw EmptySet();
  std::array<std::uint32_t, kNumClasses> counts{};
  for (Label l : labels) ++counts[static_cast<std::size_t>(l)];
  return gini_from_counts(counts, static_cast<std::uint32_t>(labels.size()));
}

std::optional<SplitChoice> best_split(
    const std::vector<std::vector<double>>& rows,
    const std::vector<Label>& labels,
    const std::vector<std::int32_t>& candidate_features,
    std::uint32_t min_leaf) {
  if (rows.size() != labels.size())
    throw BadParams("rows and labels differ in length");
  if (rows.size() < 2) return std::nullopt;
  std::size_t n_cols = rows.front().size();

  std::vector<double> flat;
  flat.reserve(rows.size() * n_cols);
  for (const auto& r : rows) {
    if (r.size() != n_cols) throw DimensionMismatch(n_cols, r.size());
    flat.insert(flat.end(), r.begin(), r.end());
  }
  MatrixView m{flat.data(), rows.size(), n_cols};
  std::vector<std::uint32_t> samples(rows.size());
  std::iota(samples.begin(), samples.end(), 0);
  return best_split_core(m, labels, samples, candidate_features, min_leaf);
}

ForestModel train_forest(const std::vector<std::vector<double>>& rows,
                         const std::vector<Label>& labels,
                         const std::vector<std::string>& columns,
                         const ForestParams& params) {
  if (rows.empty()) throw EmptyTable("cannot train on an empty table");
  if (rows.size() != labels.size())
    throw BadParams("rows and labels differ in length");
  std::size_t n_cols = columns.size();
  validate_params(params, n_cols);

  std::vector<double> flat;
  flat.reserve(rows.size() * n_cols);
  for (const auto& r : rows) {
    if (r.size() != n_cols) throw DimensionMismatch(n_cols, r.size());
    flat.insert(flat.end(), r.begin(), r.end());
  }
  MatrixView m{flat.data(), rows.size(), n_cols};

  ForestModel model;
  model.params = params;
  model.params.m_try = effective_m_try(params.m_try, n_cols);
  model.columns = columns;
  model.classes.assign(kAllLabels.begin(), kAllLabels.end());
  model.trees.resize(params.n_trees);

  std::size_t n = rows.size();
  parallel_for(params.n_trees, [&](std::size_t i) {
    TreeGrower grower(m, labels, model.params.m_try, params.min_leaf,
                      params.max_depth, mix_seed(params.seed, i));
    // Bootstrap of size n, drawn before any node-level sampling.
    std::vector<std::uint32_t> samples(n);
    for (auto& s : samples)
      s = static_cast<std::uint32_t>(bounded(grower.rng, n));
    grower.grow(samples, 0);
    model.trees[i].nodes = std::move(grower.nodes);
  });
  return model;
}

ForestModel train_forest(const FeatureTable& table, const ForestParams& params) {
  std::vector<std::vector<double>> rows;
  rows.reserve(table.size());
  std::vector<Label> labels;
  labels.reserve(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    auto v = table.rows[i].values();
    rows.emplace_back(v.begin(), v.end());
    labels.push_back(table.pairs[i].label);
  }
  const auto& names = FeatureVector::column_names();
  return train_forest(rows, labels,
                      std::vector<std::string>(names.begin(), names.end()),
                      params);
}

Prediction predict(const ForestModel& model, std::span<const double> values) {
  if (values.size() != model.columns.size())
    throw DimensionMismatch(model.columns.size(), values.size());

  Prediction pred;
  for (const auto& tree : model.trees) {
    const TreeNode& leaf = descend(tree, values);
    ++pred.votes[argmax_canonical(leaf.counts)];
  }
  pred.label = static_cast<Label>(argmax_canonical(pred.votes));
  return pred;
}

Prediction predict(const ForestModel& model, const FeatureVector& fv) {
  auto v = fv.values();
  return predict(model, std::span<const double>(v.data(), v.size()));
}

void save_forest(const ForestModel& model, std::ostream& out) {
  out.write(kForestMagic, 7);
  binio::write_u32(out, kForestFormatVersion);
  binio::write_u32(out, model.params.n_trees);
  binio::write_u32(out, model.params.m_try);
  binio::write_u32(out, model.params.min_leaf);
  binio::write_u32(out, model.params.max_depth);
  binio::write_u64(out, model.params.seed);
  binio::write_u32(out, static_cast<std::uint32_t>(model.columns.size()));
  for (const auto& c : model.columns) binio::write_string(out, c);
  binio::write_u32(out, static_cast<std::uint32_t>(model.classes.size()));
  for (Label l : model.classes) binio::write_string(out, label_name(l));
  binio::write_u32(out, static_cast<std::uint32_t>(model.trees.size()));
  for (const auto& tree : model.trees) save_node(out, tree, 0);
  if (!out) throw Error("write failure while saving forest");
}

ForestModel load_forest(std::istream& in) {
  char magic[7];
  if (!in.read(magic, 7)) throw TruncatedFile();
  if (std::string_view(magic, 7) != kForestMagic) throw BadMagic();
  std::uint32_t version = binio::read_u32(in);
  if (version != kForestFormatVersion) throw UnsupportedVersion(version);

  ForestModel model;
  model.params.n_trees = binio::read_u32(in);
  model.params.m_try = binio::read_u32(in);
  model.params.min_leaf = binio::read_u32(in);
  model.params.max_depth = binio::read_u32(in);
  model.params.seed = binio::read_u64(in);
  std::uint32_t n_columns = binio::read_u32(in);
  for (std::uint32_t i = 0; i < n_columns; ++i)
    model.columns.push_back(binio::read_string(in));
  std::uint32_t n_classes = binio::read_u32(in);
  if (n_classes != kNumClasses)
    throw Error("corrupt forest file: unexpected class count");
  for (std::uint32_t i = 0; i < n_classes; ++i) {
    auto label = parse_label(binio::read_string(in));
    if (!label) throw Error("corrupt forest file: unknown class name");
    model.classes.push_back(*label);
  }
  std::uint32_t n_trees = binio::read_u32(in);
  model.trees.resize(n_trees);
  for (auto& tree : model.trees) load_node(in, tree);
  return model;
}

void save_forest(const ForestModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path);
  save_forest(model, out);
}

ForestModel load_forest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open: " + path);
  return load_forest(in);
}

}  // namespace root13
