#include "support/gen.hpp"

#include <array>

namespace gen {

using root13::bounded;
using root13::FeatureVector;
using root13::Label;
using root13::LabeledPair;
using root13::Sentence;
using root13::Token;

std::vector<Sentence> random_corpus(std::uint64_t seed,
                                    std::size_t n_sentences,
                                    std::size_t max_len) {
  std::mt19937_64 g(seed);

  std::vector<Token> pool;
  for (int i = 0; i < 18; ++i)
    pool.push_back({"n" + std::to_string(i), "NN", true});
  for (int i = 0; i < 9; ++i)
    pool.push_back({"v" + std::to_string(i), "VVZ", true});
  for (int i = 0; i < 6; ++i)
    pool.push_back({"j" + std::to_string(i), "JJ", true});
  const std::array<Token, 4> function_words = {
      Token{"the", "DT", false}, Token{"of", "IN", false},
      Token{"and", "CC", false}, Token{"very", "RB", false}};

  std::vector<Sentence> sentences;
  for (std::size_t s = 0; s < n_sentences; ++s) {
    std::size_t len = 1 + bounded(g, max_len);
    Sentence sentence;
    for (std::size_t t = 0; t < len; ++t) {
      if (bounded(g, 4) == 0) {
        sentence.push_back(function_words[bounded(g, function_words.size())]);
      } else {
        sentence.push_back(pool[bounded(g, pool.size())]);
      }
    }
    sentences.push_back(std::move(sentence));
  }
  return sentences;
}

std::string corpus_text(const std::vector<Sentence>& sentences) {
  std::string out;
  for (const auto& sentence : sentences) {
    for (const auto& tok : sentence) {
      out += tok.lemma;
      out += '\t';
      out += tok.pos;
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

root13::FeatureTable synthetic_table(std::size_t rows_per_class,
                                     double noise_fraction,
                                     std::uint64_t seed) {
  std::mt19937_64 g(seed);

  // Informative columns get tight, well-separated ranges per class.
  const std::array<std::size_t, 4> informative = {0, 4, 6, 7};
  const std::array<std::pair<double, double>, 3> ranges = {
      std::pair{0.00, 0.22}, std::pair{0.39, 0.61}, std::pair{0.78, 1.00}};

  root13::FeatureTable table;
  std::size_t row_id = 0;
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t r = 0; r < rows_per_class; ++r, ++row_id) {
      FeatureVector fv;
      for (std::size_t col = 0; col < FeatureVector::kCount; ++col)
        fv[col] = uniform01(g);
      auto [lo, hi] = ranges[c];
      for (std::size_t col : informative)
        fv[col] = lo + uniform01(g) * (hi - lo);

      Label label = static_cast<Label>(c);
      table.pairs.push_back({"w" + std::to_string(row_id),
                             "v" + std::to_string(row_id), label});
      table.raw.push_back(fv);
      table.rows.push_back(fv);
    }
  }

  // Flip a deterministic sample of labels to one of the other classes.
  std::size_t n = table.size();
  std::size_t n_noise = static_cast<std::size_t>(noise_fraction * static_cast<double>(n));
  std::vector<std::uint32_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<std::uint32_t>(i);
  root13::seeded_shuffle(order, g);
  for (std::size_t i = 0; i < n_noise; ++i) {
    auto& label = table.pairs[order[i]].label;
    std::size_t shift = 1 + bounded(g, 2);
    label = static_cast<Label>((static_cast<std::size_t>(label) + shift) % 3);
  }

  for (const auto& name : FeatureVector::column_names())
    table.normalizer.columns.push_back(
        {name, root13::Normalizer::Kind::kIdentity, 0, 0});
  return table;
}

std::vector<LabeledPair> random_pairs(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 g(seed);
  std::vector<LabeledPair> pairs;
  for (std::size_t i = 0; i < count; ++i) {
    LabeledPair p;
    p.w1 = "w" + std::to_string(bounded(g, 25));
    p.w2 = "w" + std::to_string(bounded(g, 25));
    p.label = static_cast<Label>(bounded(g, 3));
    pairs.push_back(std::move(p));
  }
  return pairs;
}

}  // namespace gen
