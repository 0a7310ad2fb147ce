#include "root13/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "root13/parallel.hpp"

namespace root13 {

namespace {

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string format6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    auto tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

using PairKey = std::tuple<std::string, std::string, Label>;

PairKey key_of(const LabeledPair& p) { return {p.w1, p.w2, p.label}; }

}  // namespace

const std::string& label_name(Label label) {
  static const std::array<std::string, 3> names = {"hyper", "coord", "random"};
  return names[static_cast<std::size_t>(label)];
}

std::optional<Label> parse_label(std::string text) {
  text = lower(std::move(text));
  if (text == "hyper") return Label::kHyper;
  if (text == "coord") return Label::kCoord;
  if (text == "random") return Label::kRandom;
  return std::nullopt;
}

const std::string& task_name(Task task) {
  static const std::array<std::string, 4> names = {"all", "hyper_coord",
                                                   "hyper_random", "coord_random"};
  return names[static_cast<std::size_t>(task)];
}

std::optional<Task> parse_task(std::string text) {
  text = lower(std::move(text));
  std::replace(text.begin(), text.end(), '-', '_');
  if (text == "all") return Task::kAll;
  if (text == "hyper_coord") return Task::kHyperCoord;
  if (text == "hyper_random") return Task::kHyperRandom;
  if (text == "coord_random") return Task::kCoordRandom;
  return std::nullopt;
}

std::vector<Label> task_labels(Task task) {
  switch (task) {
    case Task::kAll:
      return {Label::kHyper, Label::kCoord, Label::kRandom};
    case Task::kHyperCoord:
      return {Label::kHyper, Label::kCoord};
    case Task::kHyperRandom:
      return {Label::kHyper, Label::kRandom};
    case Task::kCoordRandom:
      return {Label::kCoord, Label::kRandom};
  }
  return {};
}

PairsFile load_pairs(std::istream& in) {
  PairsFile out;
  std::map<PairKey, std::size_t> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_tabs(line);
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty())
      throw MalformedLine(line_no, "expected w1<TAB>w2<TAB>label");
    auto label = parse_label(fields[2]);
    if (!label) throw BadLabel(line_no, fields[2]);
    LabeledPair pair{fields[0], fields[1], *label};
    if (++seen[key_of(pair)] > 1) ++out.duplicate_count;
    out.pairs.push_back(std::move(pair));
  }
  return out;
}

PairsFile load_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open: " + path);
  return load_pairs(in);
}

void write_pairs(std::ostream& out, const std::vector<LabeledPair>& pairs) {
  for (const auto& p : pairs) {
    out << p.w1 << '\t' << p.w2 << '\t' << label_name(p.label) << '\n';
  }
}

std::vector<LabeledPair> filter_task(const std::vector<LabeledPair>& pairs,
                                     Task task) {
  auto labels = task_labels(task);
  std::vector<LabeledPair> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    if (std::find(labels.begin(), labels.end(), p.label) != labels.end())
      out.push_back(p);
  }
  return out;
}

std::vector<LabeledPair> augment_switched(const std::vector<LabeledPair>& pairs) {
  std::set<PairKey> present;
  for (const auto& p : pairs) present.insert(key_of(p));

  std::vector<LabeledPair> out = pairs;
  for (const auto& p : pairs) {
    if (p.label != Label::kHyper) continue;
    LabeledPair switched{p.w2, p.w1, Label::kRandom};
    if (present.insert(key_of(switched)).second) out.push_back(std::move(switched));
  }
  return out;
}

FeatureTable build_feature_table(const CoocModel& model,
                                 const std::vector<LabeledPair>& pairs,
                                 std::uint32_t n, OovPolicy policy) {
  if (pairs.empty()) throw EmptyTable("no pairs to extract features for");

  // One profile per distinct in-vocabulary word, computed in parallel.
  std::vector<std::string> words;
  std::unordered_map<std::string, std::size_t> word_slot;
  for (const auto& p : pairs) {
    for (const auto* w : {&p.w1, &p.w2}) {
      if (word_slot.emplace(*w, words.size()).second) words.push_back(*w);
    }
  }
  std::vector<std::optional<TermId>> ids(words.size());
  std::vector<ContextProfile> profiles(words.size());
  parallel_for(words.size(), [&](std::size_t i) {
    ids[i] = model.find(words[i]);
    if (ids[i]) profiles[i] = top_contexts(model, words[i], n);
  });

  FeatureTable table;
  struct RowResult {
    bool ok = false;
    FeatureVector raw;
    std::string missing;
  };
  std::vector<RowResult> results(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t i) {
    const auto& p = pairs[i];
    std::size_t s1 = word_slot.at(p.w1);
    std::size_t s2 = word_slot.at(p.w2);
    if (!ids[s1] || !ids[s2]) {
      results[i].missing = !ids[s1] ? p.w1 : p.w2;
      return;
    }
    results[i].raw = detail::assemble_features(model, *ids[s1], *ids[s2],
                                               profiles[s1], profiles[s2]);
    results[i].ok = true;
  });

  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (results[i].ok) {
      table.pairs.push_back(pairs[i]);
      table.raw.push_back(results[i].raw);
    } else if (policy == OovPolicy::kStrict) {
      throw UnknownTerm(results[i].missing);
    } else {
      table.skipped.push_back(
          {pairs[i], "unknown term: " + results[i].missing});
    }
  }
  if (table.raw.empty())
    throw EmptyTable("all pairs were skipped as out-of-vocabulary");

  table.normalizer = fit_normalizer(table.raw);
  table.rows.reserve(table.raw.size());
  for (const auto& raw : table.raw)
    table.rows.push_back(apply_normalizer(table.normalizer, raw));
  return table;
}

FeatureTable filter_task(const FeatureTable& table, Task task) {
  auto labels = task_labels(task);
  FeatureTable out;
  out.normalizer = table.normalizer;
  out.skipped = table.skipped;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (std::find(labels.begin(), labels.end(), table.pairs[i].label) ==
        labels.end())
      continue;
    out.pairs.push_back(table.pairs[i]);
    out.raw.push_back(table.raw[i]);
    out.rows.push_back(table.rows[i]);
  }
  return out;
}

void write_feature_table(std::ostream& out, const FeatureTable& table,
                         bool raw_values) {
  out << "w1\tw2";
  for (const auto& name : FeatureVector::column_names()) out << '\t' << name;
  out << "\tlabel\n";
  const auto& vectors = raw_values ? table.raw : table.rows;
  for (std::size_t i = 0; i < table.size(); ++i) {
    out << table.pairs[i].w1 << '\t' << table.pairs[i].w2;
    for (std::size_t c = 0; c < FeatureVector::kCount; ++c)
      out << '\t' << format6(vectors[i][c]);
    out << '\t' << label_name(table.pairs[i].label) << '\n';
  }
}

FeatureTable load_feature_table(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw EmptyTable("empty feature table file");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<std::string> expected = {"w1", "w2"};
  for (const auto& name : FeatureVector::column_names()) expected.push_back(name);
  expected.push_back("label");
  auto header = split_tabs(line);
  if (header != expected)
    throw MalformedLine(1, "feature table header does not match");

  FeatureTable table;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_tabs(line);
    if (fields.size() != expected.size())
      throw MalformedLine(line_no, "wrong field count");
    auto label = parse_label(fields.back());
    if (!label) throw BadLabel(line_no, fields.back());
    LabeledPair pair{fields[0], fields[1], *label};
    FeatureVector fv;
    for (std::size_t c = 0; c < FeatureVector::kCount; ++c) {
      try {
        fv[c] = std::stod(fields[2 + c]);
      } catch (const std::exception&) {
        throw MalformedLine(line_no, "bad number in column " + expected[2 + c]);
      }
    }
    table.pairs.push_back(std::move(pair));
    table.raw.push_back(fv);
    table.rows.push_back(fv);
  }
  if (table.pairs.empty()) throw EmptyTable("feature table has no rows");

  // Values in the file are taken as-is; record a pass-through transform.
  for (const auto& name : FeatureVector::column_names())
    table.normalizer.columns.push_back({name, Normalizer::Kind::kIdentity, 0, 0});
  return table;
}

FeatureTable load_feature_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open: " + path);
  return load_feature_table(in);
}

void write_skipped_report(std::ostream& out, const FeatureTable& table) {
  out << "w1\tw2\treason\n";
  for (const auto& s : table.skipped) {
    out << s.pair.w1 << '\t' << s.pair.w2 << '\t' << s.reason << '\n';
  }
}

}  // namespace root13
