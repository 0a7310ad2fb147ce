#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "root13/corpus.hpp"

namespace root13 {

inline constexpr std::uint32_t kDefaultTopN = 1000;

// A term's top-N contexts ranked by Local Mutual Information, descending.
// Ties break on ascending term id; ranks are contiguous 1..k.
struct ContextProfile {
  struct Entry {
    TermId context = 0;
    double lmi = 0.0;
    std::uint32_t rank = 0;
  };
  TermId term = 0;
  std::vector<Entry> entries;
  std::uint32_t requested_n = kDefaultTopN;
};

// Corpus occurrence count of a term. Lemma matching is exact and
// case-sensitive; pruned terms are unknown.
std::uint64_t term_frequency(const CoocModel& model, const std::string& lemma);

// Normalized Shannon entropy of the term's context distribution:
// H(t) = -sum p(c|t) log2 p(c|t), divided by log2(#distinct contexts).
// Returns 0 for one or zero contexts, exactly 1 for uniform distributions.
double term_entropy(const CoocModel& model, const std::string& lemma);
double entropy_by_id(const CoocModel& model, TermId t);

// Local Mutual Information of a stored pair:
// cooc(t,c) * log2(cooc(t,c) * pair_mass / (rowsum(t) * rowsum(c))).
// Marginals come from the co-occurrence matrix itself. May be negative.
double lmi(const CoocModel& model, TermId t, TermId c);

ContextProfile top_contexts(const CoocModel& model, const std::string& lemma,
                            std::uint32_t n = kDefaultTopN);

// Cosine of the raw co-occurrence count rows, in [0, 1]. A zero row gives 0;
// the identity pair gives exactly 1.
double cosine(const CoocModel& model, const std::string& w1,
              const std::string& w2);

}  // namespace root13
