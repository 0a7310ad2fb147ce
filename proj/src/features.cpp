#include "root13/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace root13 {

namespace {

constexpr double FeatureVector::* kFields[FeatureVector::kCount] = {
    &FeatureVector::cos,       &FeatureVector::cooc,
    &FeatureVector::freq1,     &FeatureVector::freq2,
    &FeatureVector::entr1,     &FeatureVector::entr2,
    &FeatureVector::shared,    &FeatureVector::apsyn,
    &FeatureVector::diff_freq, &FeatureVector::diff_entr,
    &FeatureVector::cfreq1,    &FeatureVector::cfreq2,
    &FeatureVector::centr1,    &FeatureVector::centr2,
};

// Columns that get log2(1+x) + min-max; the rest are already in [0,1].
bool is_count_column(std::size_t i) {
  switch (i) {
    case 1:   // cooc
    case 2:   // freq1
    case 3:   // freq2
    case 8:   // diff_freq
    case 10:  // cfreq1
    case 11:  // cfreq2
      return true;
    default:
      return false;
  }
}

void check_same_n(const ContextProfile& p1, const ContextProfile& p2) {
  if (p1.requested_n != p2.requested_n)
    throw MismatchedN(p1.requested_n, p2.requested_n);
}

}  // namespace

const std::array<std::string, FeatureVector::kCount>&
FeatureVector::column_names() {
  static const std::array<std::string, kCount> names = {
      "cos",       "cooc",      "freq1",  "freq2",  "entr1",  "entr2",
      "shared",    "apsyn",     "diff_freq", "diff_entr",
      "cfreq1",    "cfreq2",    "centr1", "centr2"};
  return names;
}

double FeatureVector::operator[](std::size_t i) const { return this->*kFields[i]; }
double& FeatureVector::operator[](std::size_t i) { return this->*kFields[i]; }

std::array<double, FeatureVector::kCount> FeatureVector::values() const {
  std::array<double, kCount> out;
  for (std::size_t i = 0; i < kCount; ++i) out[i] = (*this)[i];
  return out;
}

std::optional<std::size_t> column_index(const std::string& name) {
  const auto& names = FeatureVector::column_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  return std::nullopt;
}

double shared_ratio(const ContextProfile& p1, const ContextProfile& p2) {
  check_same_n(p1, p2);
  if (p1.entries.empty() || p2.entries.empty()) return 0.0;

  std::unordered_set<TermId> contexts;
  contexts.reserve(p1.entries.size());
  for (const auto& e : p1.entries) contexts.insert(e.context);
  std::size_t inter = 0;
  for (const auto& e : p2.entries) inter += contexts.count(e.context);

  std::size_t m = std::min(p1.entries.size(), p2.entries.size());
  return static_cast<double>(inter) / static_cast<double>(m);
}

double apsyn(const ContextProfile& p1, const ContextProfile& p2) {
  check_same_n(p1, p2);
  if (p1.entries.empty() || p2.entries.empty()) return 0.0;

  std::unordered_map<TermId, std::uint32_t> rank2;
  rank2.reserve(p2.entries.size());
  for (const auto& e : p2.entries) rank2.emplace(e.context, e.rank);

  // Summing over sorted average ranks makes the result independent of
  // argument order (exact symmetry) and lines the terms up with the harmonic
  // loop below, so identical profiles score exactly 1.
  std::vector<double> avg_ranks;
  for (const auto& e : p1.entries) {
    auto it = rank2.find(e.context);
    if (it == rank2.end()) continue;
    avg_ranks.push_back((static_cast<double>(e.rank) +
                         static_cast<double>(it->second)) / 2.0);
  }
  std::sort(avg_ranks.begin(), avg_ranks.end());
  double raw = 0.0;
  for (double r : avg_ranks) raw += 1.0 / r;

  std::size_t m = std::min(p1.entries.size(), p2.entries.size());
  double harmonic = 0.0;
  for (std::size_t i = 1; i <= m; ++i) harmonic += 1.0 / static_cast<double>(i);
  return std::clamp(raw / harmonic, 0.0, 1.0);
}

std::pair<double, double> context_profile_stats(const CoocModel& model,
                                                const ContextProfile& p) {
  if (p.term >= model.vocab_size()) throw ForeignProfile();
  if (p.entries.empty()) return {0.0, 0.0};

  double freq_sum = 0.0, entropy_sum = 0.0;
  for (const auto& e : p.entries) {
    if (e.context >= model.vocab_size()) throw ForeignProfile();
    freq_sum += static_cast<double>(model.freq[e.context]);
    entropy_sum += entropy_by_id(model, e.context);
  }
  double n = static_cast<double>(p.entries.size());
  return {freq_sum / n, entropy_sum / n};
}

namespace detail {

// Shared by extract_features and the table builder (which caches profiles
// per distinct word).
FeatureVector assemble_features(const CoocModel& model, TermId t1, TermId t2,
                                const ContextProfile& p1,
                                const ContextProfile& p2) {
  FeatureVector fv;
  fv.cos = (t1 == t2) ? (model.rows[t1].empty() ? 0.0 : 1.0)
                      : cosine(model, model.lemmas[t1], model.lemmas[t2]);
  fv.cooc = static_cast<double>(model.cooc(t1, t2));
  fv.freq1 = static_cast<double>(model.freq[t1]);
  fv.freq2 = static_cast<double>(model.freq[t2]);
  fv.entr1 = entropy_by_id(model, t1);
  fv.entr2 = entropy_by_id(model, t2);
  fv.shared = shared_ratio(p1, p2);
  fv.apsyn = apsyn(p1, p2);
  fv.diff_freq = std::abs(fv.freq1 - fv.freq2);
  fv.diff_entr = std::abs(fv.entr1 - fv.entr2);
  auto [cf1, ce1] = context_profile_stats(model, p1);
  auto [cf2, ce2] = context_profile_stats(model, p2);
  fv.cfreq1 = cf1;
  fv.centr1 = ce1;
  fv.cfreq2 = cf2;
  fv.centr2 = ce2;
  return fv;
}

}  // namespace detail

FeatureVector extract_features(const CoocModel& model, const std::string& w1,
                               const std::string& w2, std::uint32_t n) {
  TermId t1 = model.require(w1);
  TermId t2 = model.require(w2);
  ContextProfile p1 = top_contexts(model, w1, n);
  ContextProfile p2 = (t1 == t2) ? p1 : top_contexts(model, w2, n);
  return detail::assemble_features(model, t1, t2, p1, p2);
}

Normalizer fit_normalizer(const std::vector<FeatureVector>& rows) {
  if (rows.empty()) throw EmptyTable("fit_normalizer over zero rows");

  Normalizer norm;
  const auto& names = FeatureVector::column_names();
  for (std::size_t i = 0; i < FeatureVector::kCount; ++i) {
    Normalizer::Column col;
    col.name = names[i];
    if (is_count_column(i)) {
      col.kind = Normalizer::Kind::kLogMinMax;
      double lo = std::log2(1.0 + rows.front()[i]);
      double hi = lo;
      for (const auto& row : rows) {
        double y = std::log2(1.0 + row[i]);
        lo = std::min(lo, y);
        hi = std::max(hi, y);
      }
      col.lo = lo;
      col.hi = hi;
    }
    norm.columns.push_back(std::move(col));
  }
  return norm;
}

FeatureVector apply_normalizer(const Normalizer& norm, const FeatureVector& fv) {
  FeatureVector out;
  for (std::size_t i = 0; i < FeatureVector::kCount; ++i) {
    const auto& col = norm.columns[i];
    double v = fv[i];
    if (col.kind == Normalizer::Kind::kLogMinMax) {
      double y = std::log2(1.0 + v);
      v = (col.hi > col.lo) ? (y - col.lo) / (col.hi - col.lo) : 0.0;
    }
    out[i] = std::clamp(v, 0.0, 1.0);
  }
  return out;
}

void save_normalizer(const Normalizer& norm, std::ostream& out) {
  nlohmann::json cols = nlohmann::json::array();
  for (const auto& col : norm.columns) {
    nlohmann::json j;
    j["name"] = col.name;
    if (col.kind == Normalizer::Kind::kLogMinMax) {
      j["kind"] = "log_minmax";
      j["lo"] = col.lo;
      j["hi"] = col.hi;
    } else {
      j["kind"] = "identity";
    }
    cols.push_back(std::move(j));
  }
  nlohmann::json doc;
  doc["columns"] = std::move(cols);
  out << doc.dump(2) << '\n';
}

Normalizer load_normalizer(std::istream& in) {
  nlohmann::json doc = nlohmann::json::parse(in);
  Normalizer norm;
  for (const auto& j : doc.at("columns")) {
    Normalizer::Column col;
    col.name = j.at("name").get<std::string>();
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "log_minmax") {
      col.kind = Normalizer::Kind::kLogMinMax;
      col.lo = j.at("lo").get<double>();
      col.hi = j.at("hi").get<double>();
    } else if (kind == "identity") {
      col.kind = Normalizer::Kind::kIdentity;
    } else {
      throw Error("unknown normalizer kind: " + kind);
    }
    norm.columns.push_back(std::move(col));
  }
  if (norm.columns.size() != FeatureVector::kCount)
    throw Error("normalizer column count mismatch");
  return norm;
}

void save_normalizer(const Normalizer& norm, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  save_normalizer(norm, out);
}

Normalizer load_normalizer(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open: " + path);
  return load_normalizer(in);
}

}  // namespace root13
