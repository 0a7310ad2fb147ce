#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "root13/forest.hpp"

namespace root13 {

// Pooled gold-by-predicted counts over the classes present in the evaluated
// table, in canonical label order.
struct ConfusionMatrix {
  std::vector<Label> classes;
  std::vector<std::uint64_t> counts;  // row-major, rows = gold

  std::uint64_t& at(std::size_t gold, std::size_t pred) {
    return counts[gold * classes.size() + pred];
  }
  std::uint64_t at(std::size_t gold, std::size_t pred) const {
    return counts[gold * classes.size() + pred];
  }
  std::uint64_t total() const;
};

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t support = 0;
};

struct EvalReport {
  std::vector<Label> classes;
  std::vector<ClassMetrics> per_class;
  double macro_f1 = 0.0;     // unweighted mean of per-class F1 (the headline)
  double weighted_f1 = 0.0;  // weighted by gold-class support
  double accuracy = 0.0;
  ConfusionMatrix confusion;
  std::uint64_t skipped_pairs = 0;
  ForestParams params;
  std::uint64_t seed = 0;
  std::uint32_t folds = 0;
  std::vector<std::string> columns;
  std::vector<std::string> warnings;
};

struct FoldAssignment {
  std::vector<std::uint32_t> fold;  // row index -> fold id
  std::vector<std::string> warnings;
};

// Shuffles each class's rows with the seeded generator, then deals them
// round-robin, so per-class fold sizes differ by at most one. Classes with
// fewer than k rows get a DegenerateClass warning and best-effort dealing.
FoldAssignment stratified_folds(const FeatureTable& table, std::uint32_t k,
                                std::uint64_t seed);

// Precision/recall/F1 per class (0 where the denominator is 0), macro and
// support-weighted aggregates, accuracy. Throws EmptyConfusion on zero total.
EvalReport metrics(const ConfusionMatrix& confusion);

// k-fold cross-validation restricted to the named feature columns: trains on
// out-of-fold rows, predicts the fold, pools one confusion matrix.
// Deterministic given (table, params, k, seed, columns).
EvalReport cross_validate(const FeatureTable& table, const ForestParams& params,
                          std::uint32_t k, std::uint64_t seed,
                          const std::vector<std::string>& columns);
EvalReport cross_validate(const FeatureTable& table, const ForestParams& params,
                          std::uint32_t k, std::uint64_t seed);

struct AblationStep {
  std::string label;
  bool add = true;  // false = remove
  std::vector<std::string> columns;
};

// The incremental schedule: cosine baseline, then one feature group per
// step, and finally cosine removed from the full set.
std::vector<AblationStep> default_ablation_steps();

// Step file: `label<TAB>+name[,name...]` or `label<TAB>-name[,name...]`.
std::vector<AblationStep> load_ablation_steps(std::istream& in);

struct AblationRow {
  std::string label;
  std::vector<std::string> feature_set;        // canonical column order
  std::array<EvalReport, 4> reports;           // indexed by kAllTasks order
};

struct AblationReport {
  std::vector<AblationRow> rows;
  std::uint32_t folds = 0;
  std::uint64_t seed = 0;
};

// Evaluates every step on all four tasks. Steps must never add a present
// column or remove an absent one.
AblationReport run_ablation(const FeatureTable& table,
                            const std::vector<AblationStep>& steps,
                            const ForestParams& params, std::uint32_t k,
                            std::uint64_t seed);

void write_eval_tsv(std::ostream& out, const EvalReport& report);
void write_eval_text(std::ostream& out, const EvalReport& report);

// One row per step, one column per task, headline F1 x 100 with one decimal.
void write_ablation_tsv(std::ostream& out, const AblationReport& report);

}  // namespace root13
