#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "semharq/codec.hpp"

namespace semharq {

struct BleuScore {
  double value = 0.0;
  int order = 4;
  /// True when the candidate was shorter than the reference and the
  /// penalty was enabled.
  bool brevity_penalty_applied = false;
};

/// Sentence BLEU-n: geometric mean of clipped i-gram precisions times the
/// brevity penalty exp(1 - |ref|/|cand|) when |cand| < |ref|. With
/// smoothing, zero match counts at orders >= 2 become 1/(total + 1); a
/// zero unigram match always scores 0. Empty candidate scores 0.
BleuScore bleu(std::span<const std::string> candidate, std::span<const std::string> reference,
               int n, bool smoothing, bool brevity_penalty = true);

/// Smoothed BLEU-4 of two raw sentences after split_words().
double sentence_bleu4(std::string_view candidate, std::string_view reference);

enum class SimilarityKind { cosine, jaccard };

struct SimilarityScore {
  double value = 0.0;
  SimilarityKind kind = SimilarityKind::jaccard;
};

/// |set(a) & set(b)| / |set(a) | set(b)|; two empty lists score 1.
SimilarityScore jaccard(std::span<const std::string> a, std::span<const std::string> b);

/// Cosine of two vectors; 0 when either has zero norm.
double cosine(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// Cosine of the encoder means of two sentences under `codec`.
SimilarityScore cosine_similarity(std::string_view s1, std::string_view s2,
                                  const SemanticCodec& codec);

}  // namespace semharq
