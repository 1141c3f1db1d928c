#include "semharq/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "semharq/error.hpp"
#include "semharq/rng.hpp"

namespace semharq {

namespace {

constexpr int kVocabVersion = 1;

const char* const kSpecialNames[4] = {"<s>", "</s>", "<pad>", "<unk>"};

}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> tokens, SpecialTokens special)
    : tokens_(std::move(tokens)), special_(special) {
  const TokenId ids[4] = {special_.bos, special_.eos, special_.pad, special_.unk};
  for (int i = 0; i < 4; ++i) {
    if (ids[i] < 0 || static_cast<std::size_t>(ids[i]) >= tokens_.size()) {
      throw InvalidArgument("special token index out of range");
    }
    for (int j = 0; j < i; ++j) {
      if (ids[i] == ids[j]) throw InvalidArgument("special token indices must be distinct");
    }
  }
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], static_cast<TokenId>(i)).second) {
      throw InvalidArgument("duplicate vocabulary token '" + tokens_[i] + "'");
    }
  }
}

bool Vocabulary::is_special(TokenId id) const {
  return id == special_.bos || id == special_.eos || id == special_.pad || id == special_.unk;
}

bool Vocabulary::contains(std::string_view word) const {
  auto it = index_.find(std::string(word));
  return it != index_.end() && !is_special(it->second);
}

TokenId Vocabulary::index_of(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end() || is_special(it->second)) return special_.unk;
  return it->second;
}

const std::string& Vocabulary::token(TokenId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
    throw InvalidArgument("token id " + std::to_string(id) + " outside vocabulary of size " +
                          std::to_string(tokens_.size()));
  }
  return tokens_[static_cast<std::size_t>(id)];
}

std::string Vocabulary::to_json() const {
  nlohmann::json j;
  j["version"] = kVocabVersion;
  j["tokens"] = tokens_;
  j["specials"] = {{"bos", special_.bos}, {"eos", special_.eos},
                   {"pad", special_.pad}, {"unk", special_.unk}};
  return j.dump();
}

Vocabulary Vocabulary::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    if (j.at("version").get<int>() != kVocabVersion) {
      throw FormatError("unsupported vocabulary version " + j.at("version").dump());
    }
    SpecialTokens special;
    const auto& s = j.at("specials");
    special.bos = s.at("bos").get<TokenId>();
    special.eos = s.at("eos").get<TokenId>();
    special.pad = s.at("pad").get<TokenId>();
    special.unk = s.at("unk").get<TokenId>();
    return Vocabulary(j.at("tokens").get<std::vector<std::string>>(), special);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed vocabulary: ") + e.what());
  }
}

void Vocabulary::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << to_json() << '\n';
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

std::size_t TokenizedSentence::framed_length(const SpecialTokens& special) const {
  auto it = std::find(ids.begin(), ids.end(), special.eos);
  return it == ids.end() ? ids.size() : static_cast<std::size_t>(it - ids.begin()) + 1;
}

std::span<const TokenId> TokenizedSentence::words(const SpecialTokens& special) const {
  std::size_t begin = (!ids.empty() && ids.front() == special.bos) ? 1 : 0;
  std::size_t end = begin;
  while (end < ids.size() && ids[end] != special.eos && ids[end] != special.pad) ++end;
  return std::span<const TokenId>(ids).subspan(begin, end - begin);
}

bool TokenizedSentence::well_framed(const SpecialTokens& special) const {
  if (ids.size() < 2 || ids.front() != special.bos) return false;
  std::size_t i = 1;
  for (; i < ids.size(); ++i) {
    if (ids[i] == special.eos) break;
    if (ids[i] == special.pad || ids[i] == special.bos) return false;
  }
  if (i == ids.size()) return false;
  for (++i; i < ids.size(); ++i) {
    if (ids[i] != special.pad) return false;
  }
  return true;
}

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> words;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) words.push_back(std::move(current));
    current.clear();
  };
  for (char raw : text) {
    auto c = static_cast<unsigned char>(raw);
    if (std::isspace(c)) {
      flush();
    } else if (std::ispunct(c)) {
      flush();
      words.emplace_back(1, static_cast<char>(c));
    } else {
      current.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  flush();
  return words;
}

Vocabulary build_vocab(std::span<const std::string> sentences, std::size_t max_size) {
  if (sentences.empty()) throw InvalidArgument("build_vocab: empty corpus");
  if (max_size < 4) throw InvalidArgument("build_vocab: max_size must leave room for 4 specials");

  struct Entry {
    std::size_t count = 0;
    std::size_t first_seen = 0;
  };
  std::unordered_map<std::string, Entry> stats;
  std::vector<std::string> order;
  for (const auto& sentence : sentences) {
    for (auto& word : split_words(sentence)) {
      auto [it, inserted] = stats.try_emplace(word);
      if (inserted) {
        it->second.first_seen = order.size();
        order.push_back(word);
      }
      ++it->second.count;
    }
  }
  std::stable_sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
    return stats[a].count > stats[b].count;
  });

  std::vector<std::string> tokens(kSpecialNames, kSpecialNames + 4);
  for (const auto& word : order) {
    if (tokens.size() >= max_size) break;
    if (std::find(tokens.begin(), tokens.begin() + 4, word) != tokens.begin() + 4) continue;
    tokens.push_back(word);
  }
  return Vocabulary(std::move(tokens));
}

TokenizedSentence tokenize(std::string_view text, const Vocabulary& vocab, std::size_t max_len) {
  if (max_len < 3) throw InvalidArgument("tokenize: max_len must be at least 3");
  const auto& sp = vocab.special();
  TokenizedSentence out;
  out.ids.reserve(max_len);
  out.ids.push_back(sp.bos);
  for (const auto& word : split_words(text)) {
    if (out.ids.size() + 1 >= max_len) break;
    out.ids.push_back(vocab.index_of(word));
  }
  out.ids.push_back(sp.eos);
  out.ids.resize(max_len, sp.pad);
  return out;
}

std::string detokenize(const TokenizedSentence& sentence, const Vocabulary& vocab) {
  const auto& sp = vocab.special();
  std::string text;
  for (TokenId id : sentence.ids) {
    const std::string& tok = vocab.token(id);
    if (id == sp.eos) break;
    if (id == sp.bos || id == sp.pad) continue;
    if (!text.empty()) text.push_back(' ');
    text += tok;
  }
  return text;
}

CorpusSplit split_corpus(std::span<const std::string> sentences,
                         const std::array<double, 3>& ratios, std::uint64_t seed) {
  for (double r : ratios) {
    if (r < 0.0) throw InvalidArgument("split_corpus: negative ratio");
  }
  if (std::abs(ratios[0] + ratios[1] + ratios[2] - 1.0) > 1e-9) {
    throw InvalidArgument("split_corpus: ratios must sum to 1");
  }
  std::vector<std::size_t> order(sentences.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(seed, 0x5eed));
  // Fisher-Yates with an explicit draw so the permutation does not depend on
  // the standard library's shuffle implementation.
  for (std::size_t i = order.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }

  const double n = static_cast<double>(sentences.size());
  auto n_val = static_cast<std::size_t>(std::floor(n * ratios[1] + 1e-9));
  auto n_test = static_cast<std::size_t>(std::floor(n * ratios[2] + 1e-9));
  std::size_t n_train = sentences.size() - n_val - n_test;

  CorpusSplit split;
  split.ratios = ratios;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& s = sentences[order[i]];
    if (i < n_train) {
      split.train.push_back(s);
    } else if (i < n_train + n_val) {
      split.validation.push_back(s);
    } else {
      split.test.push_back(s);
    }
  }
  return split;
}

std::vector<std::string> load_sentences(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read corpus " + path.string());
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
    std::size_t start = 0;
    while (start < line.size() && std::isspace(static_cast<unsigned char>(line[start]))) ++start;
    if (start == line.size()) continue;
    out.push_back(line.substr(start));
  }
  return out;
}

std::vector<std::string> filter_by_length(std::span<const std::string> sentences,
                                          std::size_t min_words, std::size_t max_words) {
  std::vector<std::string> out;
  for (const auto& s : sentences) {
    // Punctuation tokens do not count as words.
    std::size_t n = 0;
    for (const auto& w : split_words(s)) {
      if (!(w.size() == 1 && std::ispunct(static_cast<unsigned char>(w[0])))) ++n;
    }
    if (n >= min_words && n <= max_words) out.push_back(s);
  }
  return out;
}

std::filesystem::path bundled_corpus_path() {
  if (const char* dir = std::getenv("SEMHARQ_DATA")) {
    return std::filesystem::path(dir) / "corpus.txt";
  }
  return std::filesystem::path(SEMHARQ_DATA_DIR) / "corpus.txt";
}

}  // namespace semharq
