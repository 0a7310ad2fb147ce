#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "root13/errors.hpp"

namespace root13 {

using TermId = std::uint32_t;

struct Token {
  std::string lemma;
  std::string pos;
  bool is_content = false;
};

using Sentence = std::vector<Token>;

struct CorpusConfig {
  // Contexts are the up-to-window_half_size nearest content words on each
  // side of a target, inside one sentence.
  std::uint32_t window_half_size = 5;
  std::set<std::string> content_pos_prefixes = {"N", "V", "J"};
  std::uint32_t min_term_count = 1;

  bool operator==(const CorpusConfig&) const = default;
};

inline constexpr char kModelMagic[] = "ROOT13M";
inline constexpr std::uint32_t kModelFormatVersion = 1;

// Window-based distributional model: vocabulary, term frequencies and the
// sparse symmetric co-occurrence matrix. Immutable once built; reads are
// safe from any number of threads.
struct CoocModel {
  CorpusConfig config;
  std::uint32_t format_version = kModelFormatVersion;

  // Term ids are positions in `lemmas`, which is lexicographically sorted.
  // This makes the model independent of sentence order and chunking.
  std::vector<std::string> lemmas;
  std::vector<std::uint64_t> freq;  // corpus occurrence count per term

  // Full symmetric adjacency; rows[t] is sorted by context id.
  std::vector<std::vector<std::pair<TermId, std::uint64_t>>> rows;
  std::vector<std::uint64_t> rowsum;  // cached sum of rows[t] counts
  std::uint64_t pair_mass = 0;        // sum over all stored (t, c) entries
  std::uint64_t token_count = 0;      // all tokens seen at build time

  std::size_t vocab_size() const { return lemmas.size(); }
  std::optional<TermId> find(const std::string& lemma) const;
  TermId require(const std::string& lemma) const;  // throws UnknownTerm
  std::uint64_t cooc(TermId t, TermId c) const;    // 0 when absent
};

// Reads the corpus format: one `lemma<TAB>pos` per non-blank line, blank
// line ends a sentence. Throws MalformedLine / EncodingError.
std::vector<Sentence> parse_corpus(std::istream& in, const CorpusConfig& config);

// Counts co-occurrences between content tokens whose distance in the
// sentence's content-token subsequence is at most window_half_size.
// Non-content tokens neither receive counts nor consume window slots.
// Terms rarer than min_term_count are dropped from vocab and matrix after
// counting. Throws EmptyCorpus when nothing survives.
CoocModel build_cooc_model(const std::vector<Sentence>& sentences,
                           const CorpusConfig& config);

void save_model(const CoocModel& model, std::ostream& out);
CoocModel load_model(std::istream& in);
void save_model(const CoocModel& model, const std::string& path);
CoocModel load_model(const std::string& path);

}  // namespace root13
