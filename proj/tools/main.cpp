#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "root13/corpus.hpp"
#include "root13/dataset.hpp"
#include "root13/eval.hpp"
#include "root13/features.hpp"
#include "root13/forest.hpp"
#include "root13/parallel.hpp"
#include "root13/stats.hpp"

namespace {

using namespace root13;

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Task require_task(const std::string& name) {
  auto task = parse_task(name);
  if (!task) throw BadParams("unknown task: " + name);
  return *task;
}

std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw Error("cannot open for writing: " + path);
  return out;
}

std::vector<std::string> all_columns() {
  const auto& names = FeatureVector::column_names();
  return {names.begin(), names.end()};
}

struct BuildArgs {
  std::string corpus_path;
  std::string output;
  std::uint32_t window = 5;
  std::uint32_t min_count = 1;
  std::string prefixes = "N,V,J";
};

int run_build(const BuildArgs& args) {
  CorpusConfig config;
  config.window_half_size = args.window;
  config.min_term_count = args.min_count;
  config.content_pos_prefixes.clear();
  for (const auto& p : split_commas(args.prefixes))
    config.content_pos_prefixes.insert(p);

  std::ifstream in(args.corpus_path);
  if (!in) throw Error("cannot open: " + args.corpus_path);
  auto sentences = parse_corpus(in, config);
  auto model = build_cooc_model(sentences, config);
  save_model(model, args.output);
  std::cerr << "model: " << model.vocab_size() << " terms, pair mass "
            << model.pair_mass << ", " << model.token_count << " tokens\n";
  return 0;
}

struct FeaturesArgs {
  std::string model_path;
  std::string pairs_path;
  std::string output;
  std::string normalizer_out;
  std::string skipped_out;
  std::uint32_t top_n = 1000;
  std::string oov = "skip";
  bool raw = false;
};

int run_features(const FeaturesArgs& args) {
  auto model = load_model(args.model_path);
  auto pairs_file = load_pairs(args.pairs_path);
  if (pairs_file.duplicate_count > 0) {
    std::cerr << "warning: " << pairs_file.duplicate_count
              << " duplicated pair lines kept\n";
  }
  auto policy = args.oov == "strict" ? OovPolicy::kStrict : OovPolicy::kSkip;
  auto table = build_feature_table(model, pairs_file.pairs, args.top_n, policy);

  {
    auto out = open_out(args.output);
    write_feature_table(out, table, args.raw);
  }
  std::string norm_path = args.normalizer_out.empty()
                              ? args.output + ".norm.json"
                              : args.normalizer_out;
  save_normalizer(table.normalizer, norm_path);
  if (!args.skipped_out.empty()) {
    auto out = open_out(args.skipped_out);
    write_skipped_report(out, table);
  }
  std::cerr << "features: " << table.size() << " rows, "
            << table.skipped.size() << " skipped\n";
  return 0;
}

struct AugmentArgs {
  std::string pairs_path;
  std::string output;
};

int run_augment(const AugmentArgs& args) {
  auto pairs_file = load_pairs(args.pairs_path);
  auto augmented = augment_switched(pairs_file.pairs);
  if (args.output.empty()) {
    write_pairs(std::cout, augmented);
  } else {
    auto out = open_out(args.output);
    write_pairs(out, augmented);
  }
  std::cerr << "augment: " << pairs_file.pairs.size() << " -> "
            << augmented.size() << " pairs\n";
  return 0;
}

struct TrainArgs {
  std::string features_path;
  std::string output;
  ForestParams params;
  std::string task = "all";
  std::string columns;
};

int run_train(const TrainArgs& args) {
  auto table = load_feature_table(args.features_path);
  auto task = require_task(args.task);
  if (task != Task::kAll) table = filter_task(table, task);
  if (table.size() == 0) throw EmptyTable("no rows left after task filter");

  ForestModel model;
  if (args.columns.empty()) {
    model = train_forest(table, args.params);
  } else {
    auto columns = split_commas(args.columns);
    std::vector<std::vector<double>> rows;
    std::vector<Label> labels;
    for (std::size_t i = 0; i < table.size(); ++i) {
      std::vector<double> row;
      for (const auto& name : columns) {
        auto idx = column_index(name);
        if (!idx) throw UnknownColumn(name);
        row.push_back(table.rows[i][*idx]);
      }
      rows.push_back(std::move(row));
      labels.push_back(table.pairs[i].label);
    }
    model = train_forest(rows, labels, columns, args.params);
  }
  auto out = open_out(args.output, true);
  save_forest(model, out);
  std::cerr << "forest: " << model.trees.size() << " trees on "
            << table.size() << " rows\n";
  return 0;
}

struct EvaluateArgs {
  std::string features_path;
  std::string output;
  ForestParams params;
  std::uint32_t folds = 10;
  std::uint64_t seed = 42;
  std::string task = "all";
  std::string columns;
};

int run_evaluate(const EvaluateArgs& args) {
  auto table = load_feature_table(args.features_path);
  auto task = require_task(args.task);
  if (task != Task::kAll) table = filter_task(table, task);
  if (table.size() == 0) throw EmptyTable("no rows left after task filter");

  ForestParams params = args.params;
  params.seed = args.seed;
  auto columns = args.columns.empty() ? all_columns() : split_commas(args.columns);
  auto report = cross_validate(table, params, args.folds, args.seed, columns);

  if (args.output.empty()) {
    write_eval_tsv(std::cout, report);
  } else {
    auto out = open_out(args.output);
    write_eval_tsv(out, report);
  }
  write_eval_text(std::cerr, report);
  return 0;
}

struct AblateArgs {
  std::string features_path;
  std::string output;
  std::string steps_path;
  ForestParams params;
  std::uint32_t folds = 10;
  std::uint64_t seed = 42;
};

int run_ablate(const AblateArgs& args) {
  auto table = load_feature_table(args.features_path);
  std::vector<AblationStep> steps;
  if (args.steps_path.empty()) {
    steps = default_ablation_steps();
  } else {
    std::ifstream in(args.steps_path);
    if (!in) throw Error("cannot open: " + args.steps_path);
    steps = load_ablation_steps(in);
  }
  ForestParams params = args.params;
  params.seed = args.seed;
  auto report = run_ablation(table, steps, params, args.folds, args.seed);
  if (args.output.empty()) {
    write_ablation_tsv(std::cout, report);
  } else {
    auto out = open_out(args.output);
    write_ablation_tsv(out, report);
  }
  return 0;
}

void add_forest_options(CLI::App* cmd, ForestParams& params) {
  cmd->add_option("--trees", params.n_trees, "number of trees");
  cmd->add_option("--mtry", params.m_try,
                  "features tried per node (0 = floor(log2 K) + 1)");
  cmd->add_option("--min-leaf", params.min_leaf, "minimum samples per leaf");
  cmd->add_option("--max-depth", params.max_depth, "depth cap (0 = unlimited)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "root13: window-based distributional model, pair features, random "
      "forest, cross-validated evaluation"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "worker thread cap (0 = hardware)");

  BuildArgs build_args;
  auto* build = app.add_subcommand("build", "build a co-occurrence model from a tagged corpus");
  build->add_option("corpus", build_args.corpus_path, "corpus file (lemma<TAB>pos lines)")->required();
  build->add_option("-o,--output", build_args.output, "model file to write")->required();
  build->add_option("--window", build_args.window, "content words counted on each side");
  build->add_option("--min-count", build_args.min_count, "prune terms rarer than this");
  build->add_option("--content-prefixes", build_args.prefixes, "comma-separated POS prefixes");

  FeaturesArgs features_args;
  auto* features = app.add_subcommand("features", "extract per-pair feature vectors");
  features->add_option("--model", features_args.model_path, "model file")->required();
  features->add_option("--pairs", features_args.pairs_path, "pairs TSV")->required();
  features->add_option("-o,--output", features_args.output, "feature table TSV to write")->required();
  features->add_option("--top-n", features_args.top_n, "context profile size");
  features->add_option("--oov", features_args.oov, "out-of-vocabulary policy")
      ->check(CLI::IsMember({"skip", "strict"}));
  features->add_flag("--raw", features_args.raw, "write raw values instead of normalized");
  features->add_option("--normalizer-out", features_args.normalizer_out,
                       "normalizer sidecar path (default <output>.norm.json)");
  features->add_option("--skipped-out", features_args.skipped_out, "skipped-pairs report TSV");

  AugmentArgs augment_args;
  auto* augment = app.add_subcommand("augment", "append switched hypernyms labeled random");
  augment->add_option("--pairs", augment_args.pairs_path, "pairs TSV")->required();
  augment->add_option("-o,--output", augment_args.output, "output TSV (default stdout)");

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "train a random forest on a feature table");
  train->add_option("--features", train_args.features_path, "feature table TSV")->required();
  train->add_option("-o,--output", train_args.output, "forest file to write")->required();
  add_forest_options(train, train_args.params);
  train->add_option("--seed", train_args.params.seed, "training seed");
  train->add_option("--task", train_args.task, "label subset")
      ->check(CLI::IsMember({"all", "hyper_coord", "hyper_random", "coord_random"}));
  train->add_option("--columns", train_args.columns, "comma-separated feature subset");

  EvaluateArgs evaluate_args;
  auto* evaluate = app.add_subcommand("evaluate", "stratified k-fold cross-validation");
  evaluate->add_option("--features", evaluate_args.features_path, "feature table TSV")->required();
  evaluate->add_option("-o,--output", evaluate_args.output, "report TSV (default stdout)");
  add_forest_options(evaluate, evaluate_args.params);
  evaluate->add_option("--folds", evaluate_args.folds, "number of folds");
  evaluate->add_option("--seed", evaluate_args.seed, "fold and training seed");
  evaluate->add_option("--task", evaluate_args.task, "label subset")
      ->check(CLI::IsMember({"all", "hyper_coord", "hyper_random", "coord_random"}));
  evaluate->add_option("--columns", evaluate_args.columns, "comma-separated feature subset");

  AblateArgs ablate_args;
  auto* ablate = app.add_subcommand("ablate", "incremental feature contribution study");
  ablate->add_option("--features", ablate_args.features_path, "feature table TSV")->required();
  ablate->add_option("-o,--output", ablate_args.output, "report TSV (default stdout)");
  add_forest_options(ablate, ablate_args.params);
  ablate->add_option("--folds", ablate_args.folds, "number of folds");
  ablate->add_option("--seed", ablate_args.seed, "fold and training seed");
  ablate->add_option("--steps", ablate_args.steps_path, "step file overriding the default schedule");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    set_worker_threads(threads);
    if (build->parsed()) return run_build(build_args);
    if (features->parsed()) return run_features(features_args);
    if (augment->parsed()) return run_augment(augment_args);
    if (train->parsed()) return run_train(train_args);
    if (evaluate->parsed()) return run_evaluate(evaluate_args);
    if (ablate->parsed()) return run_ablate(ablate_args);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
