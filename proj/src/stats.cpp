#include "root13/stats.hpp"

#include <algorithm>
#include <cmath>

namespace root13 {

std::uint64_t term_frequency(const CoocModel& model, const std::string& lemma) {
  return model.freq[model.require(lemma)];
}

double entropy_by_id(const CoocModel& model, TermId t) {
  const auto& row = model.rows[t];
  std::size_t d = row.size();
  if (d <= 1) return 0.0;

  // Uniform rows hit the maximum by definition; returning 1.0 directly keeps
  // the analytic identity exact instead of within an ulp.
  bool uniform = true;
  for (const auto& [c, n] : row) {
    if (n != row.front().second) {
      uniform = false;
      break;
    }
  }
  if (uniform) return 1.0;

  double total = static_cast<double>(model.rowsum[t]);
  double h = 0.0;
  for (const auto& [c, n] : row) {
    double p = static_cast<double>(n) / total;
    h -= p * std::log2(p);
  }
  double norm = h / std::log2(static_cast<double>(d));
  return std::clamp(norm, 0.0, 1.0);
}

double term_entropy(const CoocModel& model, const std::string& lemma) {
  return entropy_by_id(model, model.require(lemma));
}

double lmi(const CoocModel& model, TermId t, TermId c) {
  std::uint64_t joint = model.cooc(t, c);
  if (joint == 0) throw NoCooccurrence();
  double observed_expected = (static_cast<double>(joint) *
                              static_cast<double>(model.pair_mass)) /
                             (static_cast<double>(model.rowsum[t]) *
                              static_cast<double>(model.rowsum[c]));
  return static_cast<double>(joint) * std::log2(observed_expected);
}

ContextProfile top_contexts(const CoocModel& model, const std::string& lemma,
                            std::uint32_t n) {
  if (n < 1) throw BadParams("top_contexts requires n >= 1");
  TermId t = model.require(lemma);

  ContextProfile profile;
  profile.term = t;
  profile.requested_n = n;
  profile.entries.reserve(model.rows[t].size());
  for (const auto& [c, count] : model.rows[t]) {
    profile.entries.push_back({c, lmi(model, t, c), 0});
  }
  std::sort(profile.entries.begin(), profile.entries.end(),
            [](const ContextProfile::Entry& a, const ContextProfile::Entry& b) {
              if (a.lmi != b.lmi) return a.lmi > b.lmi;
              return a.context < b.context;
            });
  if (profile.entries.size() > n) profile.entries.resize(n);
  for (std::size_t i = 0; i < profile.entries.size(); ++i) {
    profile.entries[i].rank = static_cast<std::uint32_t>(i + 1);
  }
  return profile;
}

double cosine(const CoocModel& model, const std::string& w1,
              const std::string& w2) {
  TermId t1 = model.require(w1);
  TermId t2 = model.require(w2);
  const auto& r1 = model.rows[t1];
  const auto& r2 = model.rows[t2];
  if (r1.empty() || r2.empty()) return 0.0;
  if (t1 == t2) return 1.0;

  double dot = 0.0, n1 = 0.0, n2 = 0.0;
  for (const auto& [c, v] : r1) n1 += static_cast<double>(v) * static_cast<double>(v);
  for (const auto& [c, v] : r2) n2 += static_cast<double>(v) * static_cast<double>(v);
  std::size_t i = 0, j = 0;
  while (i < r1.size() && j < r2.size()) {
    if (r1[i].first < r2[j].first) {
      ++i;
    } else if (r2[j].first < r1[i].first) {
      ++j;
    } else {
      dot += static_cast<double>(r1[i].second) * static_cast<double>(r2[j].second);
      ++i;
      ++j;
    }
  }
  return std::clamp(dot / (std::sqrt(n1) * std::sqrt(n2)), 0.0, 1.0);
}

}  // namespace root13
