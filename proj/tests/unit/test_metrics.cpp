#include <algorithm>
#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "semharq/error.hpp"
#include "semharq/metrics.hpp"
#include "support.hpp"

using namespace semharq;

namespace {

using Words = std::vector<std::string>;

// Plain reimplementation: count every n-gram by linear scan.
double bleu_oracle(const Words& c, const Words& r, int n, bool smooth, bool bp_on) {
  if (c.empty()) return 0.0;
  auto grams = [](const Words& w, std::size_t k) {
    std::vector<Words> out;
    for (std::size_t i = 0; i + k <= w.size(); ++i) out.emplace_back(w.begin() + i, w.begin() + i + k);
    return out;
  };
  double logp = 0.0;
  for (int i = 1; i <= n; ++i) {
    auto cg = grams(c, i), rg = grams(r, i);
    std::vector<bool> used(rg.size(), false);
    int hit = 0;
    for (const auto& g : cg) {
      for (std::size_t j = 0; j < rg.size(); ++j) {
        if (!used[j] && rg[j] == g) {
          used[j] = true;
          ++hit;
          break;
        }
      }
    }
    double p;
    if (hit > 0) p = static_cast<double>(hit) / cg.size();
    else if (smooth && i >= 2) p = 1.0 / (cg.size() + 1.0);
    else return 0.0;
    logp += std::log(p) / n;
  }
  double bp = 1.0;
  if (bp_on && c.size() < r.size()) bp = std::exp(1.0 - static_cast<double>(r.size()) / c.size());
  return bp * std::exp(logp);
}

Words random_words(Rng& rng, std::size_t lo, std::size_t hi, int alphabet) {
  std::uniform_int_distribution<std::size_t> len(lo, hi);
  std::uniform_int_distribution<int> sym(0, alphabet - 1);
  Words w(len(rng));
  for (auto& x : w) x = std::string(1, static_cast<char>('a' + sym(rng)));
  return w;
}

}  // namespace

TEST(Bleu, Examples) {
  Words x{"the", "cat", "sat", "down"};
  EXPECT_EQ(bleu(x, x, 4, false).value, 1.0);
  EXPECT_NEAR(bleu(Words{"a", "b", "b"}, Words{"a", "b", "c"}, 1, false).value, 2.0 / 3.0, 1e-12);
  EXPECT_EQ(bleu(Words{"a", "b"}, Words{"c", "d"}, 1, true).value, 0.0);
  EXPECT_EQ(bleu(Words{"a", "b"}, Words{"c", "d"}, 4, true).value, 0.0);
  EXPECT_EQ(bleu(Words{}, x, 4, true).value, 0.0);
  EXPECT_THROW(bleu(x, x, 0, false), InvalidArgument);
}

TEST(Bleu, BrevityPenalty) {
  auto s = bleu(Words{"a", "b"}, Words{"a", "b", "c", "d"}, 1, false);
  EXPECT_TRUE(s.brevity_penalty_applied);
  EXPECT_NEAR(s.value, std::exp(1.0 - 2.0), 1e-12);
  EXPECT_EQ(bleu(Words{"a", "b"}, Words{"a", "b", "c", "d"}, 1, false, false).value, 1.0);
}

TEST(Bleu, SelfScoreIsOne) {
  Rng rng(1);
  for (int i = 0; i < 500; ++i) {
    auto x = random_words(rng, 1, 12, 6);
    for (int n = 1; n <= static_cast<int>(std::min<std::size_t>(4, x.size())); ++n) {
      ASSERT_DOUBLE_EQ(bleu(x, x, n, false).value, 1.0);
    }
  }
}

TEST(Bleu, MatchesOracle) {
  Rng rng(2);
  for (int i = 0; i < 5000; ++i) {
    auto c = random_words(rng, 0, 10, 4);
    auto r = random_words(rng, 1, 10, 4);
    for (int n : {1, 2, 4}) {
      for (bool smooth : {false, true}) {
        ASSERT_NEAR(bleu(c, r, n, smooth).value, bleu_oracle(c, r, n, smooth, true), 1e-12);
      }
    }
  }
}

TEST(Bleu, ExactMatchExtensionNeverDecreasesUnigram) {
  Rng rng(3);
  for (int i = 0; i < 5000; ++i) {
    auto r = random_words(rng, 1, 8, 5);
    auto c = random_words(rng, r.size(), r.size() + 4, 5);
    const double before = bleu(c, r, 1, false).value;
    // A reference token still unmatched by the candidate.
    auto left = r;
    for (const auto& w : c) {
      auto it = std::find(left.begin(), left.end(), w);
      if (it != left.end()) left.erase(it);
    }
    if (left.empty()) continue;
    auto extended = c;
    extended.push_back(left.front());
    ASSERT_GE(bleu(extended, r, 1, false).value, before - 1e-15);
  }
}

TEST(Jaccard, Examples) {
  EXPECT_EQ(jaccard(Words{"a", "b"}, Words{"b", "a"}).value, 1.0);
  EXPECT_NEAR(jaccard(Words{"a", "b"}, Words{"b", "c"}).value, 1.0 / 3.0, 1e-15);
  EXPECT_EQ(jaccard(Words{}, Words{}).value, 1.0);
  EXPECT_EQ(jaccard(Words{"a"}, Words{"b"}).value, 0.0);
}

TEST(Jaccard, SymmetricBoundedAndExact) {
  Rng rng(4);
  for (int i = 0; i < 5000; ++i) {
    auto a = random_words(rng, 0, 6, 5);
    auto b = random_words(rng, 0, 6, 5);
    const double j = jaccard(a, b).value;
    ASSERT_EQ(j, jaccard(b, a).value);
    ASSERT_GE(j, 0.0);
    ASSERT_LE(j, 1.0);
    const bool same_sets = std::set<std::string>(a.begin(), a.end()) ==
                           std::set<std::string>(b.begin(), b.end());
    ASSERT_EQ(j == 1.0, same_sets);
  }
}

TEST(Cosine, Properties) {
  Eigen::VectorXd v(3), u(3);
  v << 1.0, -2.0, 0.5;
  u << 0.3, 0.1, -4.0;
  EXPECT_NEAR(cosine(v, -v), -1.0, 1e-15);
  EXPECT_NEAR(cosine(v, v), 1.0, 1e-15);
  EXPECT_EQ(cosine(v, Eigen::VectorXd::Zero(3)), 0.0);
  for (double a : {1e-3, 0.5, 7.0, 1e4}) EXPECT_NEAR(cosine(a * u, v), cosine(u, v), 1e-12);
  EXPECT_THROW(cosine(v, Eigen::VectorXd::Zero(2)), DimensionMismatch);
}

TEST(CosineSimilarity, SameSentenceIsOne) {
  auto vae = fixtures::random_codec(6, 5);
  auto s = cosine_similarity("a b c", "a b c", vae);
  EXPECT_EQ(s.kind, SimilarityKind::cosine);
  EXPECT_NEAR(s.value, 1.0, 1e-12);
}

TEST(SentenceBleu, UsesTokenizer) {
  EXPECT_EQ(sentence_bleu4("A dog runs, fast.", "a dog runs , fast ."), 1.0);
}
