#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace semharq {

using TokenId = std::int32_t;

/// Index positions of the four reserved tokens. build_vocab always places
/// them first, in this order.
struct SpecialTokens {
  TokenId bos = 0;  // <s>
  TokenId eos = 1;  // </s>
  TokenId pad = 2;  // <pad>
  TokenId unk = 3;  // <unk>
};

class Vocabulary {
 public:
  Vocabulary() = default;

  /// `tokens` must start with the four specials at the indices named in
  /// `special`. Throws InvalidArgument on duplicates or bad indices.
  Vocabulary(std::vector<std::string> tokens, SpecialTokens special = {});

  std::size_t size() const { return tokens_.size(); }
  const SpecialTokens& special() const { return special_; }
  const std::vector<std::string>& tokens() const { return tokens_; }

  bool is_special(TokenId id) const;
  bool contains(std::string_view word) const;

  /// Unknown words map to the <unk> index.
  TokenId index_of(std::string_view word) const;
  /// Throws InvalidArgument when `id` is out of range.
  const std::string& token(TokenId id) const;

  std::string to_json() const;
  static Vocabulary from_json(const std::string& text);
  void save(const std::filesystem::path& path) const;
  static Vocabulary load(const std::filesystem::path& path);

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.tokens_ == b.tokens_ && a.special_.bos == b.special_.bos &&
           a.special_.eos == b.special_.eos && a.special_.pad == b.special_.pad &&
           a.special_.unk == b.special_.unk;
  }

 private:
  std::vector<std::string> tokens_;
  SpecialTokens special_;
  std::unordered_map<std::string, TokenId> index_;
};

/// Framed token sequence: <s> w1 ... wn </s> <pad> ...
struct TokenizedSentence {
  std::vector<TokenId> ids;

  /// Number of positions up to and including </s> (or all, if missing).
  std::size_t framed_length(const SpecialTokens& special) const;
  /// Word ids strictly between <s> and the first </s>.
  std::span<const TokenId> words(const SpecialTokens& special) const;
  /// Checks the framing invariant: starts with <s>, exactly one </s> before
  /// padding, no <pad> before </s>, everything after </s> is <pad>.
  bool well_framed(const SpecialTokens& special) const;

  friend bool operator==(const TokenizedSentence&, const TokenizedSentence&) = default;
};

struct CorpusSplit {
  std::vector<std::string> train;
  std::vector<std::string> validation;
  std::vector<std::string> test;
  std::array<double, 3> ratios{0.8, 0.1, 0.1};
};

/// Lowercases and splits on whitespace; every ASCII punctuation character
/// becomes its own token.
std::vector<std::string> split_words(std::string_view text);

/// Keeps the max_size - 4 most frequent words (ties by first occurrence)
/// plus the four specials.
Vocabulary build_vocab(std::span<const std::string> sentences, std::size_t max_size);

/// Total: out-of-vocabulary words become <unk>, sentences longer than
/// max_len - 2 words are truncated, the result is padded to max_len.
TokenizedSentence tokenize(std::string_view text, const Vocabulary& vocab,
                           std::size_t max_len);

/// Strips <s>, </s> and <pad>, stops at the first </s>, joins with spaces.
std::string detokenize(const TokenizedSentence& sentence, const Vocabulary& vocab);

/// Deterministic shuffle then floor-sized validation/test sets; the
/// remainder goes to train.
CorpusSplit split_corpus(std::span<const std::string> sentences,
                         const std::array<double, 3>& ratios, std::uint64_t seed);

/// One sentence per line, blank lines skipped, trailing whitespace trimmed.
std::vector<std::string> load_sentences(const std::filesystem::path& path);

/// Keeps sentences whose word count is within [min_words, max_words].
std::vector<std::string> filter_by_length(std::span<const std::string> sentences,
                                          std::size_t min_words, std::size_t max_words);

/// Path of the bundled corpus shipped under data/.
std::filesystem::path bundled_corpus_path();

}  // namespace semharq
