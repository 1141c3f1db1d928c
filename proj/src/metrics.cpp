#include "semharq/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "semharq/error.hpp"

namespace semharq {

namespace {

std::map<std::string, int> ngram_counts(std::span<const std::string> tokens, std::size_t order) {
  std::map<std::string, int> counts;
  if (tokens.size() < order) return counts;
  for (std::size_t i = 0; i + order <= tokens.size(); ++i) {
    std::string key;
    for (std::size_t k = 0; k < order; ++k) {
      if (k) key.push_back('\x1f');
      key += tokens[i + k];
    }
    ++counts[key];
  }
  return counts;
}

}  // namespace

BleuScore bleu(std::span<const std::string> candidate, std::span<const std::string> reference,
               int n, bool smoothing, bool brevity_penalty) {
  if (n < 1) throw InvalidArgument("bleu: order must be >= 1");
  BleuScore out;
  out.order = n;
  if (candidate.empty()) return out;

  double log_precision = 0.0;
  for (int i = 1; i <= n; ++i) {
    const auto order = static_cast<std::size_t>(i);
    const auto cand = ngram_counts(candidate, order);
    const auto ref = ngram_counts(reference, order);
    int matched = 0;
    for (const auto& [gram, count] : cand) {
      auto it = ref.find(gram);
      if (it != ref.end()) matched += std::min(count, it->second);
    }
    const int total = candidate.size() >= order ? static_cast<int>(candidate.size() - order + 1) : 0;
    double p = 0.0;
    if (matched > 0) {
      p = static_cast<double>(matched) / total;
    } else if (smoothing && i >= 2) {
      p = 1.0 / (total + 1.0);
    } else {
      return out;
    }
    log_precision += std::log(p) / n;
  }

  double bp = 1.0;
  if (brevity_penalty && candidate.size() < reference.size()) {
    bp = std::exp(1.0 - static_cast<double>(reference.size()) / candidate.size());
    out.brevity_penalty_applied = true;
  }
  out.value = std::clamp(bp * std::exp(log_precision), 0.0, 1.0);
  return out;
}

double sentence_bleu4(std::string_view candidate, std::string_view reference) {
  const auto c = split_words(candidate);
  const auto r = split_words(reference);
  return bleu(c, r, 4, true).value;
}

SimilarityScore jaccard(std::span<const std::string> a, std::span<const std::string> b) {
  std::set<std::string_view> sa(a.begin(), a.end());
  std::set<std::string_view> sb(b.begin(), b.end());
  SimilarityScore out;
  out.kind = SimilarityKind::jaccard;
  if (sa.empty() && sb.empty()) {
    out.value = 1.0;
    return out;
  }
  std::size_t common = 0;
  for (const auto& x : sa) common += sb.count(x);
  const std::size_t uni = sa.size() + sb.size() - common;
  out.value = static_cast<double>(common) / static_cast<double>(uni);
  return out;
}

double cosine(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  if (u.size() != v.size()) throw DimensionMismatch("cosine: vectors differ in length");
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0.0 || nv == 0.0) return 0.0;
  return std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0);
}

SimilarityScore cosine_similarity(std::string_view s1, std::string_view s2,
                                  const SemanticCodec& codec) {
  SimilarityScore out;
  out.kind = SimilarityKind::cosine;
  out.value = cosine(codec.encode_text(s1).mu, codec.encode_text(s2).mu);
  return out;
}

}  // namespace semharq
