#include "root13/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "root13/rng.hpp"

namespace root13 {

namespace {

std::string format6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string format_percent(double f1) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", 100.0 * f1);
  return buf;
}

std::vector<Label> present_classes(const FeatureTable& table) {
  std::array<bool, 3> seen{};
  for (const auto& p : table.pairs) seen[static_cast<std::size_t>(p.label)] = true;
  std::vector<Label> classes;
  for (Label l : kAllLabels) {
    if (seen[static_cast<std::size_t>(l)]) classes.push_back(l);
  }
  return classes;
}

std::vector<std::size_t> resolve_columns(const std::vector<std::string>& names) {
  if (names.empty()) throw BadParams("column list must be non-empty");
  std::vector<std::size_t> idx;
  idx.reserve(names.size());
  for (const auto& name : names) {
    auto i = column_index(name);
    if (!i) throw UnknownColumn(name);
    idx.push_back(*i);
  }
  return idx;
}

std::string join(const std::vector<std::string>& items, char sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

}  // namespace

std::uint64_t ConfusionMatrix::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

FoldAssignment stratified_folds(const FeatureTable& table, std::uint32_t k,
                                std::uint64_t seed) {
  if (k < 2) throw BadK("k must be >= 2");
  if (k > table.size()) throw BadK("k exceeds row count");

  FoldAssignment out;
  out.fold.assign(table.size(), 0);
  std::mt19937_64 gen(seed);

  // Classes are processed in canonical order, consuming one generator
  // stream; the assignment is a pure function of (table, k, seed).
  for (Label label : kAllLabels) {
    std::vector<std::uint32_t> members;
    for (std::size_t i = 0; i < table.size(); ++i) {
      if (table.pairs[i].label == label)
        members.push_back(static_cast<std::uint32_t>(i));
    }
    if (members.empty()) continue;
    if (members.size() < k) {
      out.warnings.push_back("DegenerateClass: class " + label_name(label) +
                             " has " + std::to_string(members.size()) +
                             " rows for " + std::to_string(k) + " folds");
    }
    seeded_shuffle(members, gen);
    for (std::size_t pos = 0; pos < members.size(); ++pos) {
      out.fold[members[pos]] = static_cast<std::uint32_t>(pos % k);
    }
  }
  return out;
}

EvalReport metrics(const ConfusionMatrix& confusion) {
  std::uint64_t total = confusion.total();
  if (total == 0) throw EmptyConfusion();

  std::size_t n = confusion.classes.size();
  EvalReport report;
  report.classes = confusion.classes;
  report.confusion = confusion;

  std::uint64_t diagonal = 0;
  double f1_sum = 0.0, weighted_sum = 0.0;
  std::uint64_t support_sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t tp = confusion.at(i, i);
    std::uint64_t fp = 0, fn = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      fp += confusion.at(j, i);
      fn += confusion.at(i, j);
    }
    ClassMetrics cm;
    cm.support = tp + fn;
    cm.precision = (tp + fp) ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    cm.recall = (tp + fn) ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    cm.f1 = (cm.precision + cm.recall > 0.0)
                ? 2.0 * cm.precision * cm.recall / (cm.precision + cm.recall)
                : 0.0;
    report.per_class.push_back(cm);
    diagonal += tp;
    f1_sum += cm.f1;
    weighted_sum += static_cast<double>(cm.support) * cm.f1;
    support_sum += cm.support;
  }
  report.macro_f1 = f1_sum / static_cast<double>(n);
  report.weighted_f1 = weighted_sum / static_cast<double>(support_sum);
  report.accuracy = static_cast<double>(diagonal) / static_cast<double>(total);
  return report;
}

EvalReport cross_validate(const FeatureTable& table, const ForestParams& params,
                          std::uint32_t k, std::uint64_t seed,
                          const std::vector<std::string>& columns) {
  auto col_idx = resolve_columns(columns);
  auto assignment = stratified_folds(table, k, seed);

  // Restricted views of every row, built once.
  std::vector<std::vector<double>> restricted(table.size());
  std::vector<Label> labels(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    restricted[i].reserve(col_idx.size());
    for (auto c : col_idx) restricted[i].push_back(table.rows[i][c]);
    labels[i] = table.pairs[i].label;
  }

  ConfusionMatrix confusion;
  confusion.classes = present_classes(table);
  confusion.counts.assign(confusion.classes.size() * confusion.classes.size(), 0);
  std::array<std::size_t, 3> class_pos{};
  for (std::size_t i = 0; i < confusion.classes.size(); ++i)
    class_pos[static_cast<std::size_t>(confusion.classes[i])] = i;

  for (std::uint32_t f = 0; f < k; ++f) {
    std::vector<std::vector<double>> train_rows;
    std::vector<Label> train_labels;
    std::vector<std::uint32_t> test_rows;
    for (std::size_t i = 0; i < table.size(); ++i) {
      if (assignment.fold[i] == f) {
        test_rows.push_back(static_cast<std::uint32_t>(i));
      } else {
        train_rows.push_back(restricted[i]);
        train_labels.push_back(labels[i]);
      }
    }
    if (test_rows.empty()) continue;

    ForestParams fold_params = params;
    fold_params.seed = mix_seed(params.seed, f);
    ForestModel model = train_forest(train_rows, train_labels, columns, fold_params);

    for (auto i : test_rows) {
      Prediction pred = predict(model, restricted[i]);
      confusion.at(class_pos[static_cast<std::size_t>(labels[i])],
                   class_pos[static_cast<std::size_t>(pred.label)])++;
    }
  }

  EvalReport report = metrics(confusion);
  report.skipped_pairs = table.skipped.size();
  report.params = params;
  report.seed = seed;
  report.folds = k;
  report.columns = columns;
  report.warnings = assignment.warnings;
  return report;
}

EvalReport cross_validate(const FeatureTable& table, const ForestParams& params,
                          std::uint32_t k, std::uint64_t seed) {
  const auto& names = FeatureVector::column_names();
  return cross_validate(table, params, k, seed,
                        std::vector<std::string>(names.begin(), names.end()));
}

std::vector<AblationStep> default_ablation_steps() {
  return {
      {"Cos (Baseline)", true, {"cos"}},
      {"+ Cooc", true, {"cooc"}},
      {"+ Shared", true, {"shared"}},
      {"+ Diff Freqs", true, {"diff_freq"}},
      {"+ Diff Entrs", true, {"diff_entr"}},
      {"+ APSyn", true, {"apsyn"}},
      {"+ Freq 1, 2", true, {"freq1", "freq2"}},
      {"+ Entr 1, 2", true, {"entr1", "entr2"}},
      {"+ C-Entr 1, 2", true, {"centr1", "centr2"}},
      {"+ C-Freq 1, 2", true, {"cfreq1", "cfreq2"}},
      {"- Cos", false, {"cos"}},
  };
}

std::vector<AblationStep> load_ablation_steps(std::istream& in) {
  std::vector<AblationStep> steps;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw MalformedLine(line_no, "expected label<TAB>+cols or -cols");
    AblationStep step;
    step.label = line.substr(0, tab);
    std::string op = line.substr(tab + 1);
    if (op.size() < 2 || (op[0] != '+' && op[0] != '-'))
      throw MalformedLine(line_no, "operation must start with + or -");
    step.add = op[0] == '+';
    std::stringstream cols(op.substr(1));
    std::string name;
    while (std::getline(cols, name, ',')) {
      if (!name.empty()) step.columns.push_back(name);
    }
    if (step.columns.empty())
      throw MalformedLine(line_no, "no columns in step");
    steps.push_back(std::move(step));
  }
  return steps;
}

AblationReport run_ablation(const FeatureTable& table,
                            const std::vector<AblationStep>& steps,
                            const ForestParams& params, std::uint32_t k,
                            std::uint64_t seed) {
  std::array<FeatureTable, 4> task_tables;
  for (std::size_t t = 0; t < kAllTasks.size(); ++t)
    task_tables[t] = filter_task(table, kAllTasks[t]);

  AblationReport report;
  report.folds = k;
  report.seed = seed;

  std::array<bool, FeatureVector::kCount> active{};
  for (const auto& step : steps) {
    for (const auto& name : step.columns) {
      auto idx = column_index(name);
      if (!idx) throw UnknownColumn(name);
      if (step.add && active[*idx])
        throw BadStep("\"" + step.label + "\" adds already-present column " + name);
      if (!step.add && !active[*idx])
        throw BadStep("\"" + step.label + "\" removes absent column " + name);
      active[*idx] = step.add;
    }

    AblationRow row;
    row.label = step.label;
    const auto& names = FeatureVector::column_names();
    for (std::size_t i = 0; i < FeatureVector::kCount; ++i) {
      if (active[i]) row.feature_set.push_back(names[i]);
    }
    if (row.feature_set.empty())
      throw BadStep("\"" + step.label + "\" leaves an empty feature set");

    for (std::size_t t = 0; t < kAllTasks.size(); ++t) {
      row.reports[t] =
          cross_validate(task_tables[t], params, k, seed, row.feature_set);
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

void write_eval_tsv(std::ostream& out, const EvalReport& report) {
  out << "metric\tclass\tvalue\n";
  for (std::size_t i = 0; i < report.classes.size(); ++i) {
    const auto& name = label_name(report.classes[i]);
    const auto& cm = report.per_class[i];
    out << "precision\t" << name << '\t' << format6(cm.precision) << '\n';
    out << "recall\t" << name << '\t' << format6(cm.recall) << '\n';
    out << "f1\t" << name << '\t' << format6(cm.f1) << '\n';
    out << "support\t" << name << '\t' << cm.support << '\n';
  }
  out << "accuracy\t-\t" << format6(report.accuracy) << '\n';
  out << "macro_f1\t-\t" << format6(report.macro_f1) << '\n';
  out << "weighted_f1\t-\t" << format6(report.weighted_f1) << '\n';
  out << "skipped_pairs\t-\t" << report.skipped_pairs << '\n';
  out << "folds\t-\t" << report.folds << '\n';
  out << "seed\t-\t" << report.seed << '\n';
  out << "trees\t-\t" << report.params.n_trees << '\n';
  out << "mtry\t-\t" << report.params.m_try << '\n';
  out << "min_leaf\t-\t" << report.params.min_leaf << '\n';
  out << "max_depth\t-\t" << report.params.max_depth << '\n';
  out << "columns\t-\t" << join(report.columns, ',') << '\n';
  for (std::size_t g = 0; g < report.classes.size(); ++g) {
    for (std::size_t p = 0; p < report.classes.size(); ++p) {
      out << "confusion\t" << label_name(report.classes[g]) << '>'
          << label_name(report.classes[p]) << '\t' << report.confusion.at(g, p)
          << '\n';
    }
  }
  for (const auto& w : report.warnings) out << "warning\t-\t" << w << '\n';
}

void write_eval_text(std::ostream& out, const EvalReport& report) {
  out << "rows: " << report.confusion.total() << "  folds: " << report.folds
      << "  seed: " << report.seed << "  trees: " << report.params.n_trees
      << "  skipped: " << report.skipped_pairs << '\n';
  out << "columns: " << join(report.columns, ',') << '\n';
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-8s %10s %10s %10s %8s", "class",
                "precision", "recall", "f1", "support");
  out << buf << '\n';
  for (std::size_t i = 0; i < report.classes.size(); ++i) {
    const auto& cm = report.per_class[i];
    std::snprintf(buf, sizeof buf, "%-8s %10.4f %10.4f %10.4f %8llu",
                  label_name(report.classes[i]).c_str(), cm.precision,
                  cm.recall, cm.f1,
                  static_cast<unsigned long long>(cm.support));
    out << buf << '\n';
  }
  std::snprintf(buf, sizeof buf,
                "accuracy %.4f  macro_f1 %.4f  weighted_f1 %.4f",
                report.accuracy, report.macro_f1, report.weighted_f1);
  out << buf << '\n';
  out << "confusion (gold rows x predicted columns):\n";
  std::snprintf(buf, sizeof buf, "%-8s", "");
  out << buf;
  for (Label l : report.classes) {
    std::snprintf(buf, sizeof buf, " %8s", label_name(l).c_str());
    out << buf;
  }
  out << '\n';
  for (std::size_t g = 0; g < report.classes.size(); ++g) {
    std::snprintf(buf, sizeof buf, "%-8s", label_name(report.classes[g]).c_str());
    out << buf;
    for (std::size_t p = 0; p < report.classes.size(); ++p) {
      std::snprintf(buf, sizeof buf, " %8llu",
                    static_cast<unsigned long long>(report.confusion.at(g, p)));
      out << buf;
    }
    out << '\n';
  }
  for (const auto& w : report.warnings) out << "warning: " << w << '\n';
}

void write_ablation_tsv(std::ostream& out, const AblationReport& report) {
  out << "step";
  for (Task t : kAllTasks) out << '\t' << task_name(t);
  out << '\n';
  for (const auto& row : report.rows) {
    out << row.label;
    for (std::size_t t = 0; t < kAllTasks.size(); ++t)
      out << '\t' << format_percent(row.reports[t].macro_f1);
    out << '\n';
  }
}

}  // namespace root13
