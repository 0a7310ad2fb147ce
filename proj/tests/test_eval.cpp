#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "root13/eval.hpp"
#include "support/gen.hpp"

using namespace root13;

namespace {

std::string report_tsv(const EvalReport& report) {
  std::ostringstream out;
  write_eval_tsv(out, report);
  return out.str();
}

ConfusionMatrix binary_confusion(std::uint64_t aa, std::uint64_t ab,
                                 std::uint64_t ba, std::uint64_t bb) {
  ConfusionMatrix m;
  m.classes = {Label::kHyper, Label::kCoord};
  m.counts = {aa, ab, ba, bb};
  return m;
}

}  // namespace

TEST_CASE("stratified_folds: balanced 30-row table with k=10") {
  auto table = gen::synthetic_table(10, 0.0, 201);
  auto assignment = stratified_folds(table, 10, 42);
  CHECK(assignment.warnings.empty());

  // Every fold holds exactly one row of each class.
  std::map<std::pair<std::uint32_t, Label>, int> bucket;
  for (std::size_t i = 0; i < table.size(); ++i) {
    CHECK(assignment.fold[i] < 10);
    ++bucket[{assignment.fold[i], table.pairs[i].label}];
  }
  CHECK(bucket.size() == 30);
  for (const auto& [key, n] : bucket) CHECK(n == 1);
}

TEST_CASE("stratified_folds: k bounds") {
  auto table = gen::synthetic_table(4, 0.0, 203);
  CHECK_THROWS_AS(stratified_folds(table, 1, 0), BadK);
  CHECK_THROWS_AS(stratified_folds(table, 0, 0), BadK);
  CHECK_THROWS_AS(stratified_folds(table, 13, 0), BadK);
  CHECK_NOTHROW(stratified_folds(table, 12, 0));
}

TEST_CASE("stratified_folds: deterministic by seed") {
  auto table = gen::synthetic_table(12, 0.1, 205);
  auto a = stratified_folds(table, 5, 99);
  auto b = stratified_folds(table, 5, 99);
  CHECK(a.fold == b.fold);
  auto c = stratified_folds(table, 5, 100);
  CHECK(a.fold != c.fold);
}

TEST_CASE("stratified_folds: per-class fold sizes differ by at most one") {
  auto table = gen::synthetic_table(17, 0.0, 207);  // 17 is not divisible by 5
  std::uint32_t k = 5;
  auto assignment = stratified_folds(table, k, 7);
  for (Label label : kAllLabels) {
    std::vector<int> sizes(k, 0);
    for (std::size_t i = 0; i < table.size(); ++i) {
      if (table.pairs[i].label == label) ++sizes[assignment.fold[i]];
    }
    int lo = *std::min_element(sizes.begin(), sizes.end());
    int hi = *std::max_element(sizes.begin(), sizes.end());
    CHECK(hi - lo <= 1);
  }
}

TEST_CASE("stratified_folds: degenerate class warns but assigns") {
  auto table = gen::synthetic_table(20, 0.0, 209);
  // Leave only 3 coord rows, then ask for 5 folds.
  FeatureTable small;
  small.normalizer = table.normalizer;
  int coord_kept = 0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table.pairs[i].label == Label::kCoord && ++coord_kept > 3) continue;
    small.pairs.push_back(table.pairs[i]);
    small.raw.push_back(table.raw[i]);
    small.rows.push_back(table.rows[i]);
  }
  auto assignment = stratified_folds(small, 5, 3);
  REQUIRE(assignment.warnings.size() == 1);
  CHECK(assignment.warnings[0].find("DegenerateClass") != std::string::npos);
  CHECK(assignment.warnings[0].find("coord") != std::string::npos);
}

TEST_CASE("metrics: perfect diagonal") {
  ConfusionMatrix m;
  m.classes = {Label::kHyper, Label::kCoord, Label::kRandom};
  m.counts = {10, 0, 0, 0, 10, 0, 0, 0, 10};
  auto report = metrics(m);
  CHECK(report.macro_f1 == 1.0);
  CHECK(report.weighted_f1 == 1.0);
  CHECK(report.accuracy == 1.0);
}

TEST_CASE("metrics: balanced binary, everything predicted as one class") {
  auto report = metrics(binary_confusion(50, 0, 50, 0));
  CHECK(report.per_class[0].precision == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(report.per_class[0].recall == 1.0);
  CHECK(report.per_class[0].f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(report.per_class[1].f1 == 0.0);
  CHECK(report.macro_f1 == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(report.weighted_f1 == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(report.accuracy == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("metrics: empty confusion") {
  ConfusionMatrix m;
  m.classes = {Label::kHyper};
  m.counts = {0};
  CHECK_THROWS_AS(metrics(m), EmptyConfusion);
}

TEST_CASE("metrics: macro and weighted F1 coincide on balanced tables") {
  auto report = metrics(binary_confusion(37, 13, 21, 29));
  double expected_macro =
      (report.per_class[0].f1 + report.per_class[1].f1) / 2.0;
  CHECK(report.macro_f1 == doctest::Approx(expected_macro).epsilon(1e-15));
  CHECK(std::fabs(report.macro_f1 - report.weighted_f1) <= 1e-12);
}

TEST_CASE("cross_validate: clean separable table scores at least 0.95") {
  auto table = gen::synthetic_table(100, 0.0, 211);
  ForestParams params;
  params.seed = 42;
  auto report = cross_validate(table, params, 10, 42);
  CHECK(report.macro_f1 >= 0.95);
  CHECK(report.confusion.total() == table.size());
  CHECK(report.folds == 10);
}

TEST_CASE("cross_validate: pooled confusion covers every row") {
  auto table = gen::synthetic_table(15, 0.3, 213);
  ForestParams params;
  params.n_trees = 10;
  auto report = cross_validate(table, params, 5, 9);
  CHECK(report.confusion.total() == 45);
  std::uint64_t support = 0;
  for (const auto& cm : report.per_class) support += cm.support;
  CHECK(support == 45);
}

TEST_CASE("cross_validate: byte-identical reports for the same seed") {
  auto table = gen::synthetic_table(12, 0.2, 215);
  ForestParams params;
  params.n_trees = 20;
  params.seed = 5;
  auto a = cross_validate(table, params, 4, 5);
  auto b = cross_validate(table, params, 4, 5);
  CHECK(report_tsv(a) == report_tsv(b));
}

TEST_CASE("cross_validate: unknown column and bad k") {
  auto table = gen::synthetic_table(6, 0.0, 217);
  ForestParams params;
  params.n_trees = 5;
  CHECK_THROWS_AS(cross_validate(table, params, 3, 0, {"nope"}), UnknownColumn);
  CHECK_THROWS_AS(cross_validate(table, params, 1, 0), BadK);
  CHECK_THROWS_AS(cross_validate(table, params, 3, 0, {}), BadParams);
}

TEST_CASE("cross_validate: cosine-only baseline runs") {
  auto table = gen::synthetic_table(20, 0.0, 219);
  ForestParams params;
  params.n_trees = 25;
  params.seed = 13;
  auto report = cross_validate(table, params, 5, 13, {"cos"});
  CHECK(report.columns == std::vector<std::string>{"cos"});
  // Column 0 is informative in the generator, so even alone it should beat
  // random guessing by a wide margin.
  CHECK(report.macro_f1 > 0.6);
}

TEST_CASE("cross_validate: excluded columns are inert") {
  auto table = gen::synthetic_table(15, 0.1, 221);
  std::vector<std::string> columns = {"cos", "entr1", "shared", "apsyn"};
  ForestParams params;
  params.n_trees = 15;
  params.seed = 3;
  auto before = cross_validate(table, params, 5, 3, columns);

  auto mutated = table;
  std::mt19937_64 g(999);
  for (auto& fv : mutated.rows) fv.cooc = gen::uniform01(g) * 100.0;
  auto after = cross_validate(mutated, params, 5, 3, columns);
  CHECK(report_tsv(before) == report_tsv(after));
}

TEST_CASE("run_ablation: the default schedule has the expected shape") {
  auto table = gen::synthetic_table(15, 0.1, 223);
  ForestParams params;
  params.n_trees = 10;
  params.seed = 17;
  auto report = run_ablation(table, default_ablation_steps(), params, 3, 17);

  REQUIRE(report.rows.size() == 11);
  const std::vector<std::string> expected_labels = {
      "Cos (Baseline)", "+ Cooc",        "+ Shared",     "+ Diff Freqs",
      "+ Diff Entrs",   "+ APSyn",       "+ Freq 1, 2",  "+ Entr 1, 2",
      "+ C-Entr 1, 2",  "+ C-Freq 1, 2", "- Cos"};
  for (std::size_t i = 0; i < 11; ++i)
    CHECK(report.rows[i].label == expected_labels[i]);

  CHECK(report.rows[0].feature_set == std::vector<std::string>{"cos"});

  // Each +step extends the previous set by its group.
  for (std::size_t i = 1; i < 10; ++i) {
    CHECK(report.rows[i].feature_set.size() >
          report.rows[i - 1].feature_set.size());
  }

  // Final set is all columns except cos.
  const auto& names = FeatureVector::column_names();
  std::vector<std::string> all_minus_cos(names.begin() + 1, names.end());
  CHECK(report.rows[10].feature_set == all_minus_cos);
  CHECK(report.rows[10].feature_set.size() == 13);
}

TEST_CASE("run_ablation: malformed steps are rejected") {
  auto table = gen::synthetic_table(10, 0.0, 227);
  ForestParams params;
  params.n_trees = 5;
  std::vector<AblationStep> dup_add = {{"base", true, {"cos"}},
                                       {"again", true, {"cos"}}};
  CHECK_THROWS_AS(run_ablation(table, dup_add, params, 3, 0), BadStep);

  std::vector<AblationStep> absent_remove = {{"base", true, {"cos"}},
                                             {"drop", false, {"apsyn"}}};
  CHECK_THROWS_AS(run_ablation(table, absent_remove, params, 3, 0), BadStep);

  std::vector<AblationStep> unknown = {{"base", true, {"wat"}}};
  CHECK_THROWS_AS(run_ablation(table, unknown, params, 3, 0), UnknownColumn);

  std::vector<AblationStep> empty_set = {{"base", true, {"cos"}},
                                         {"drop", false, {"cos"}}};
  CHECK_THROWS_AS(run_ablation(table, empty_set, params, 3, 0), BadStep);
}

TEST_CASE("run_ablation: a single baseline step equals cross_validate") {
  auto table = gen::synthetic_table(12, 0.1, 229);
  ForestParams params;
  params.n_trees = 12;
  params.seed = 23;
  std::vector<AblationStep> steps = {{"Cos (Baseline)", true, {"cos"}}};
  auto report = run_ablation(table, steps, params, 4, 23);
  REQUIRE(report.rows.size() == 1);

  for (std::size_t t = 0; t < kAllTasks.size(); ++t) {
    auto direct = cross_validate(filter_task(table, kAllTasks[t]), params, 4,
                                 23, {"cos"});
    CHECK(report_tsv(report.rows[0].reports[t]) == report_tsv(direct));
  }
}

TEST_CASE("load_ablation_steps parses the step file format") {
  std::istringstream in(
      "Cos (Baseline)\t+cos\n"
      "+ Freq 1, 2\t+freq1,freq2\n"
      "- Cos\t-cos\n");
  auto steps = load_ablation_steps(in);
  REQUIRE(steps.size() == 3);
  CHECK(steps[0].label == "Cos (Baseline)");
  CHECK(steps[0].add);
  CHECK(steps[1].columns == std::vector<std::string>{"freq1", "freq2"});
  CHECK_FALSE(steps[2].add);

  std::istringstream bad("no tab here\n");
  CHECK_THROWS_AS(load_ablation_steps(bad), MalformedLine);
  std::istringstream bad_op("label\t*cos\n");
  CHECK_THROWS_AS(load_ablation_steps(bad_op), MalformedLine);
}

TEST_CASE("ablation TSV: one row per step, percentages with one decimal") {
  auto table = gen::synthetic_table(10, 0.0, 233);
  ForestParams params;
  params.n_trees = 8;
  params.seed = 29;
  std::vector<AblationStep> steps = {{"Cos (Baseline)", true, {"cos"}},
                                     {"+ Shared", true, {"shared"}}};
  auto report = run_ablation(table, steps, params, 3, 29);
  std::ostringstream out;
  write_ablation_tsv(out, report);
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "step\tall\thyper_coord\thyper_random\tcoord_random");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    auto first_tab = line.find('\t');
    REQUIRE(first_tab != std::string::npos);
    std::string rest = line.substr(first_tab + 1);
    std::istringstream fields(rest);
    std::string field;
    int n_fields = 0;
    while (std::getline(fields, field, '\t')) {
      ++n_fields;
      double v = std::stod(field);
      CHECK(v >= 0.0);
      CHECK(v <= 100.0);
      CHECK(field.find('.') == field.size() - 2);  // one decimal place
    }
    CHECK(n_fields == 4);
  }
  CHECK(rows == 2);
}

TEST_CASE("eval TSV includes the confusion matrix and parameter echo") {
  auto table = gen::synthetic_table(8, 0.0, 237);
  ForestParams params;
  params.n_trees = 6;
  params.seed = 31;
  auto report = cross_validate(table, params, 4, 31, {"cos", "shared"});
  auto text = report_tsv(report);
  CHECK(text.find("metric\tclass\tvalue\n") == 0);
  CHECK(text.find("macro_f1\t-\t") != std::string::npos);
  CHECK(text.find("confusion\thyper>hyper\t") != std::string::npos);
  CHECK(text.find("columns\t-\tcos,shared\n") != std::string::npos);
  CHECK(text.find("folds\t-\t4\n") != std::string::npos);
  CHECK(text.find("seed\t-\t31\n") != std::string::npos);
}
