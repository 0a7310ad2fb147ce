#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "root13/corpus.hpp"
#include "root13/features.hpp"

namespace root13 {

// Canonical label order is fixed: it breaks prediction ties and orders
// every report.
enum class Label : std::uint8_t { kHyper = 0, kCoord = 1, kRandom = 2 };

inline constexpr std::array<Label, 3> kAllLabels = {Label::kHyper, Label::kCoord,
                                                    Label::kRandom};

const std::string& label_name(Label label);
std::optional<Label> parse_label(std::string text);  // case-insensitive

enum class Task : std::uint8_t { kAll = 0, kHyperCoord, kHyperRandom, kCoordRandom };

inline constexpr std::array<Task, 4> kAllTasks = {
    Task::kAll, Task::kHyperCoord, Task::kHyperRandom, Task::kCoordRandom};

const std::string& task_name(Task task);
std::optional<Task> parse_task(std::string text);
std::vector<Label> task_labels(Task task);

struct LabeledPair {
  std::string w1;
  std::string w2;
  Label label = Label::kRandom;

  bool operator==(const LabeledPair&) const = default;
};

struct PairsFile {
  std::vector<LabeledPair> pairs;
  std::size_t duplicate_count = 0;  // repeated identical lines, kept
};

// Reads `w1<TAB>w2<TAB>label` lines; blank lines are skipped. Throws
// MalformedLine / BadLabel with 1-based line numbers.
PairsFile load_pairs(std::istream& in);
PairsFile load_pairs(const std::string& path);
void write_pairs(std::ostream& out, const std::vector<LabeledPair>& pairs);

// Keeps only the task's labels, preserving order.
std::vector<LabeledPair> filter_task(const std::vector<LabeledPair>& pairs,
                                     Task task);

// Appends one (w2, w1, RANDOM) per HYPER row, skipping triples already
// present in the input or generated earlier in the same run.
std::vector<LabeledPair> augment_switched(const std::vector<LabeledPair>& pairs);

enum class OovPolicy { kSkip, kStrict };

struct SkippedPair {
  LabeledPair pair;
  std::string reason;
};

struct FeatureTable {
  std::vector<LabeledPair> pairs;    // aligned with raw/rows
  std::vector<FeatureVector> raw;
  std::vector<FeatureVector> rows;   // normalized
  Normalizer normalizer;
  std::vector<SkippedPair> skipped;

  std::size_t size() const { return pairs.size(); }
  static const std::array<std::string, FeatureVector::kCount>& column_names() {
    return FeatureVector::column_names();
  }
};

// Extracts raw vectors for every pair, fits the normalizer on the extracted
// rows, stores both. Under kSkip, out-of-vocabulary pairs land in `skipped`
// with the missing word named; under kStrict the first one aborts.
FeatureTable build_feature_table(const CoocModel& model,
                                 const std::vector<LabeledPair>& pairs,
                                 std::uint32_t n = kDefaultTopN,
                                 OovPolicy policy = OovPolicy::kSkip);

// Row filter at the table level; skipped list and normalizer are carried over.
FeatureTable filter_task(const FeatureTable& table, Task task);

// TSV: header `w1 w2 <14 columns> label`, values with 6 decimal places.
void write_feature_table(std::ostream& out, const FeatureTable& table,
                         bool raw_values = false);
FeatureTable load_feature_table(std::istream& in);
FeatureTable load_feature_table(const std::string& path);

// Skipped-pairs report TSV: `w1 w2 reason`.
void write_skipped_report(std::ostream& out, const FeatureTable& table);

}  // namespace root13
