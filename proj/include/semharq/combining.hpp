#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semharq/codec.hpp"
#include "semharq/quality.hpp"

namespace semharq {

struct ReceivedAttempt {
  LatentVector latent;
  QualityScore quality;
  /// 1-based attempt index.
  std::size_t index = 1;
};

enum class CombinerMethod { weighted_avg, best_only, mrc, iterative, chase };

inline constexpr CombinerMethod kAllCombiners[] = {CombinerMethod::chase,
                                                   CombinerMethod::weighted_avg,
                                                   CombinerMethod::best_only,
                                                   CombinerMethod::mrc,
                                                   CombinerMethod::iterative};

/// How the iterative combiner's running quality evolves.
enum class IterativeUpdate {
  accumulate,  // q(t+1) = q(t) + q_k
  max,         // q(t+1) = max(q(t), q_k)
};

/// Accepts weighted_avg / weighted-avg, best_only / best-only, mrc,
/// iterative, chase.
CombinerMethod parse_combiner(std::string_view name);
std::string to_string(CombinerMethod method);
IterativeUpdate parse_iterative_update(std::string_view name);
std::string to_string(IterativeUpdate update);

struct CombinerSpec {
  CombinerMethod method = CombinerMethod::weighted_avg;
  IterativeUpdate iterative_update = IterativeUpdate::accumulate;
};

struct CombineResult {
  LatentVector latent;
  /// Set when mrc saw all-zero qualities and used the plain mean.
  bool zero_quality_fallback = false;
};

/// Softmax of the qualities (max-shifted).
std::vector<double> softmax_weights(std::span<const ReceivedAttempt> attempts);
/// q_k^2 / sum q^2, or uniform when every q is 0.
std::vector<double> mrc_weights(std::span<const ReceivedAttempt> attempts);
/// Index of the highest quality; ties go to the earliest attempt.
std::size_t best_attempt(std::span<const ReceivedAttempt> attempts);

LatentVector combine_weighted_avg(std::span<const ReceivedAttempt> attempts);
LatentVector combine_best_only(std::span<const ReceivedAttempt> attempts);
CombineResult combine_mrc(std::span<const ReceivedAttempt> attempts);
LatentVector combine_iterative(std::span<const ReceivedAttempt> attempts,
                               IterativeUpdate update = IterativeUpdate::accumulate);
LatentVector combine_chase(std::span<const ReceivedAttempt> attempts);

/// Throws InvalidArgument on an empty attempt list and DimensionMismatch
/// when latents differ in length.
LatentVector combine(std::span<const ReceivedAttempt> attempts, const CombinerSpec& spec);

}  // namespace semharq
