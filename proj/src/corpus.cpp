#include "root13/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string_view>
#include <unordered_map>

#include "root13/binio.hpp"

namespace root13 {

namespace {

bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    std::size_t extra;
    if (c < 0x80) {
      extra = 0;
    } else if ((c & 0xE0) == 0xC0) {
      if (c < 0xC2) return false;  // overlong
      extra = 1;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
    } else if ((c & 0xF8) == 0xF0) {
      if (c > 0xF4) return false;  // above U+10FFFF
      extra = 3;
    } else {
      return false;
    }
    if (i + extra >= s.size()) return false;
    for (std::size_t k = 1; k <= extra; ++k) {
      if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return false;
    }
    if (c == 0xE0 && (static_cast<unsigned char>(s[i + 1]) & 0xE0) == 0x80)
      return false;  // overlong 3-byte
    if (c == 0xED && (static_cast<unsigned char>(s[i + 1]) & 0xE0) == 0xA0)
      return false;  // UTF-16 surrogate range
    i += extra + 1;
  }
  return true;
}

bool is_content_pos(const std::string& pos, const CorpusConfig& config) {
  for (const auto& prefix : config.content_pos_prefixes) {
    if (pos.compare(0, prefix.size(), prefix) == 0) return true;
  }
  return false;
}

void validate_config(const CorpusConfig& config) {
  if (config.window_half_size < 1)
    throw BadParams("window_half_size must be >= 1");
  if (config.content_pos_prefixes.empty())
    throw BadParams("content_pos_prefixes must be non-empty");
  if (config.min_term_count < 1)
    throw BadParams("min_term_count must be >= 1");
}

}  // namespace

std::optional<TermId> CoocModel::find(const std::string& lemma) const {
  auto it = std::lower_bound(lemmas.begin(), lemmas.end(), lemma);
  if (it == lemmas.end() || *it != lemma) return std::nullopt;
  return static_cast<TermId>(it - lemmas.begin());
}

TermId CoocModel::require(const std::string& lemma) const {
  auto id = find(lemma);
  if (!id) throw UnknownTerm(lemma);
  return *id;
}

std::uint64_t CoocModel::cooc(TermId t, TermId c) const {
  const auto& row = rows[t];
  auto it = std::lower_bound(
      row.begin(), row.end(), c,
      [](const std::pair<TermId, std::uint64_t>& e, TermId key) {
        return e.first < key;
      });
  if (it == row.end() || it->first != c) return 0;
  return it->second;
}

std::vector<Sentence> parse_corpus(std::istream& in,
                                   const CorpusConfig& config) {
  validate_config(config);
  std::vector<Sentence> sentences;
  Sentence current;
  std::string line;
  std::size_t line_no = 0;

  auto flush = [&] {
    if (!current.empty()) {
      sentences.push_back(std::move(current));
      current.clear();
    }
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!valid_utf8(line)) throw EncodingError(line_no);
    if (line.empty()) {
      flush();
      continue;
    }
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw MalformedLine(line_no, "missing tab");
    if (tab == 0) throw MalformedLine(line_no, "empty lemma");
    Token tok;
    tok.lemma = line.substr(0, tab);
    auto next_tab = line.find('\t', tab + 1);  // extra columns are ignored
    tok.pos = line.substr(tab + 1, next_tab == std::string::npos
                                       ? std::string::npos
                                       : next_tab - tab - 1);
    tok.is_content = is_content_pos(tok.pos, config);
    current.push_back(std::move(tok));
  }
  flush();
  return sentences;
}

CoocModel build_cooc_model(const std::vector<Sentence>& sentences,
                           const CorpusConfig& config) {
  validate_config(config);

  // Pass 1: occurrence counts over content tokens. std::map keeps lemmas
  // sorted, which fixes the term-id assignment.
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t token_count = 0;
  for (const auto& sentence : sentences) {
    for (const auto& tok : sentence) {
      ++token_count;
      if (tok.is_content) ++counts[tok.lemma];
    }
  }

  CoocModel model;
  model.config = config;
  model.token_count = token_count;
  for (const auto& [lemma, n] : counts) {
    if (n >= config.min_term_count) {
      model.lemmas.push_back(lemma);
      model.freq.push_back(n);
    }
  }
  if (model.lemmas.empty()) throw EmptyCorpus();

  // Pass 2: windows slide over the content-token subsequence of each
  // sentence. Pruned rare terms still occupy their slot (counts are taken
  // first, then their rows and columns are dropped), so min_term_count
  // never widens anyone's window.
  std::size_t vocab = model.lemmas.size();
  std::vector<std::unordered_map<TermId, std::uint64_t>> acc(vocab);
  std::vector<std::optional<TermId>> content_ids;
  for (const auto& sentence : sentences) {
    content_ids.clear();
    for (const auto& tok : sentence) {
      if (tok.is_content) content_ids.push_back(model.find(tok.lemma));
    }
    std::size_t m = content_ids.size();
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t hi = std::min(m, i + config.window_half_size + 1);
      for (std::size_t j = i + 1; j < hi; ++j) {
        if (!content_ids[i] || !content_ids[j]) continue;
        TermId a = *content_ids[i];
        TermId b = *content_ids[j];
        ++acc[a][b];
        ++acc[b][a];  // a == b lands on the diagonal twice, one per direction
      }
    }
  }

  model.rows.resize(vocab);
  model.rowsum.assign(vocab, 0);
  for (std::size_t t = 0; t < vocab; ++t) {
    auto& row = model.rows[t];
    row.assign(acc[t].begin(), acc[t].end());
    std::sort(row.begin(), row.end());
    for (const auto& [c, n] : row) {
      model.rowsum[t] += n;
    }
    model.pair_mass += model.rowsum[t];
  }
  return model;
}

void save_model(const CoocModel& model, std::ostream& out) {
  out.write(kModelMagic, 7);
  binio::write_u32(out, model.format_version);
  binio::write_u32(out, model.config.window_half_size);
  binio::write_u32(out, model.config.min_term_count);
  binio::write_u32(out,
                   static_cast<std::uint32_t>(model.config.content_pos_prefixes.size()));
  for (const auto& p : model.config.content_pos_prefixes)
    binio::write_string(out, p);
  binio::write_u64(out, model.token_count);
  binio::write_u32(out, static_cast<std::uint32_t>(model.lemmas.size()));
  for (const auto& lemma : model.lemmas) binio::write_string(out, lemma);
  for (auto f : model.freq) binio::write_u64(out, f);

  // Upper triangle only; the mirror is rebuilt on load.
  std::uint64_t entries = 0;
  for (std::size_t t = 0; t < model.rows.size(); ++t) {
    for (const auto& [c, n] : model.rows[t]) {
      if (c >= t) ++entries;
    }
  }
  binio::write_u64(out, entries);
  for (std::size_t t = 0; t < model.rows.size(); ++t) {
    for (const auto& [c, n] : model.rows[t]) {
      if (c < t) continue;
      binio::write_u32(out, static_cast<std::uint32_t>(t));
      binio::write_u32(out, c);
      binio::write_u64(out, n);
    }
  }
  if (!out) throw Error("write failure while saving model");
}

CoocModel load_model(std::istream& in) {
  char magic[7];
  if (!in.read(magic, 7)) throw TruncatedFile();
  if (std::string_view(magic, 7) != kModelMagic) throw BadMagic();

  CoocModel model;
  model.format_version = binio::read_u32(in);
  if (model.format_version != kModelFormatVersion)
    throw UnsupportedVersion(model.format_version);

  model.config.window_half_size = binio::read_u32(in);
  model.config.min_term_count = binio::read_u32(in);
  std::uint32_t n_prefixes = binio::read_u32(in);
  model.config.content_pos_prefixes.clear();
  for (std::uint32_t i = 0; i < n_prefixes; ++i)
    model.config.content_pos_prefixes.insert(binio::read_string(in));
  model.token_count = binio::read_u64(in);

  std::uint32_t vocab = binio::read_u32(in);
  model.lemmas.reserve(vocab);
  for (std::uint32_t i = 0; i < vocab; ++i)
    model.lemmas.push_back(binio::read_string(in));
  model.freq.reserve(vocab);
  for (std::uint32_t i = 0; i < vocab; ++i)
    model.freq.push_back(binio::read_u64(in));

  model.rows.resize(vocab);
  std::uint64_t entries = binio::read_u64(in);
  for (std::uint64_t e = 0; e < entries; ++e) {
    std::uint32_t t = binio::read_u32(in);
    std::uint32_t c = binio::read_u32(in);
    std::uint64_t n = binio::read_u64(in);
    if (t >= vocab || c >= vocab || t > c)
      throw Error("corrupt model file: bad co-occurrence entry");
    model.rows[t].emplace_back(c, n);
    if (c != t) model.rows[c].emplace_back(t, n);
  }

  model.rowsum.assign(vocab, 0);
  model.pair_mass = 0;
  for (std::uint32_t t = 0; t < vocab; ++t) {
    auto& row = model.rows[t];
    std::sort(row.begin(), row.end());
    for (const auto& [c, n] : row) model.rowsum[t] += n;
    model.pair_mass += model.rowsum[t];
  }
  return model;
}

void save_model(const CoocModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path);
  save_model(model, out);
}

CoocModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open: " + path);
  return load_model(in);
}

}  // namespace root13
