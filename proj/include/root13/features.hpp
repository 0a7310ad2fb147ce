#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "root13/corpus.hpp"
#include "root13/stats.hpp"

namespace root13 {

// The per-pair feature set, in canonical column order. The same struct holds
// raw values (counts unbounded) and normalized values (everything in [0,1]).
struct FeatureVector {
  double cos = 0.0;
  double cooc = 0.0;
  double freq1 = 0.0;
  double freq2 = 0.0;
  double entr1 = 0.0;
  double entr2 = 0.0;
  double shared = 0.0;
  double apsyn = 0.0;
  double diff_freq = 0.0;
  double diff_entr = 0.0;
  double cfreq1 = 0.0;
  double cfreq2 = 0.0;
  double centr1 = 0.0;
  double centr2 = 0.0;

  static constexpr std::size_t kCount = 14;
  static const std::array<std::string, kCount>& column_names();

  double operator[](std::size_t i) const;
  double& operator[](std::size_t i);
  std::array<double, kCount> values() const;
};

// Index of a canonical column name, or nullopt.
std::optional<std::size_t> column_index(const std::string& name);

// |contexts(p1) ∩ contexts(p2)| / min(|p1|, |p2|). Zero when either profile
// is empty. Profiles must share requested_n.
double shared_ratio(const ContextProfile& p1, const ContextProfile& p2);

// Sum over shared contexts of 1 / mean(rank1, rank2), normalized by the
// harmonic number H_m with m = min(|p1|, |p2|) so identical profiles score
// exactly 1.
double apsyn(const ContextProfile& p1, const ContextProfile& p2);

// Arithmetic means of term frequency and normalized entropy over the
// profile's contexts; (0, 0) for an empty profile.
std::pair<double, double> context_profile_stats(const CoocModel& model,
                                                const ContextProfile& p);

// The full 14-scalar vector for an ordered pair. Context profiles are built
// with top_contexts(·, n).
FeatureVector extract_features(const CoocModel& model, const std::string& w1,
                               const std::string& w2,
                               std::uint32_t n = kDefaultTopN);

namespace detail {
// Assembly step shared with the table builder, which caches one profile per
// distinct word instead of recomputing per pair.
FeatureVector assemble_features(const CoocModel& model, TermId t1, TermId t2,
                                const ContextProfile& p1,
                                const ContextProfile& p2);
}  // namespace detail

// Per-column transform fitted on a feature table: heavy-tailed count columns
// (cooc, freq1, freq2, diff_freq, cfreq1, cfreq2) get log2(1+x) followed by
// min-max; everything else is already in [0,1] and passes through.
// Application clamps to [0,1], so out-of-sample rows stay in range.
struct Normalizer {
  enum class Kind { kIdentity, kLogMinMax };
  struct Column {
    std::string name;
    Kind kind = Kind::kIdentity;
    double lo = 0.0;
    double hi = 0.0;
  };
  std::vector<Column> columns;
};

Normalizer fit_normalizer(const std::vector<FeatureVector>& rows);
FeatureVector apply_normalizer(const Normalizer& norm, const FeatureVector& fv);

// JSON sidecar, so train and test share one transform.
void save_normalizer(const Normalizer& norm, std::ostream& out);
Normalizer load_normalizer(std::istream& in);
void save_normalizer(const Normalizer& norm, const std::string& path);
Normalizer load_normalizer(const std::string& path);

}  // namespace root13
