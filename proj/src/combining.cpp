#include "semharq/combining.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "semharq/error.hpp"

namespace semharq {

namespace {

void check_attempts(std::span<const ReceivedAttempt> attempts) {
  if (attempts.empty()) throw InvalidArgument("combine: no attempts");
  const auto dim = attempts.front().latent.values.size();
  for (const auto& a : attempts) {
    if (a.latent.values.size() != dim) {
      throw DimensionMismatch("combine: attempts have different latent dimensions");
    }
  }
}

// z_1 + sum_k w_k (z_k - z_1): exact for K = 1 and for identical inputs.
LatentVector weighted_sum(std::span<const ReceivedAttempt> attempts, const std::vector<double>& w) {
  const Eigen::VectorXd& base = attempts.front().latent.values;
  Eigen::VectorXd out = base;
  for (std::size_t k = 1; k < attempts.size(); ++k) {
    out.noalias() += w[k] * (attempts[k].latent.values - base);
  }
  return LatentVector(std::move(out));
}

}  // namespace

CombinerMethod parse_combiner(std::string_view name) {
  std::string s(name);
  std::replace(s.begin(), s.end(), '-', '_');
  if (s == "weighted_avg") return CombinerMethod::weighted_avg;
  if (s == "best_only") return CombinerMethod::best_only;
  if (s == "mrc") return CombinerMethod::mrc;
  if (s == "iterative") return CombinerMethod::iterative;
  if (s == "chase") return CombinerMethod::chase;
  throw InvalidArgument("unknown combiner '" + std::string(name) + "'");
}

std::string to_string(CombinerMethod method) {
  switch (method) {
    case CombinerMethod::weighted_avg: return "weighted_avg";
    case CombinerMethod::best_only: return "best_only";
    case CombinerMethod::mrc: return "mrc";
    case CombinerMethod::iterative: return "iterative";
    case CombinerMethod::chase: return "chase";
  }
  return "?";
}

IterativeUpdate parse_iterative_update(std::string_view name) {
  if (name == "accumulate") return IterativeUpdate::accumulate;
  if (name == "max") return IterativeUpdate::max;
  throw InvalidArgument("unknown iterative update '" + std::string(name) + "'");
}

std::string to_string(IterativeUpdate update) {
  return update == IterativeUpdate::accumulate ? "accumulate" : "max";
}

std::vector<double> softmax_weights(std::span<const ReceivedAttempt> attempts) {
  check_attempts(attempts);
  double top = attempts.front().quality.value;
  for (const auto& a : attempts) top = std::max(top, a.quality.value);
  std::vector<double> w;
  w.reserve(attempts.size());
  for (const auto& a : attempts) w.push_back(std::exp(a.quality.value - top));
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= sum;
  return w;
}

std::vector<double> mrc_weights(std::span<const ReceivedAttempt> attempts) {
  check_attempts(attempts);
  std::vector<double> w;
  w.reserve(attempts.size());
  for (const auto& a : attempts) w.push_back(a.quality.value * a.quality.value);
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  if (sum == 0.0) {
    std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(w.size()));
  } else {
    for (double& x : w) x /= sum;
  }
  return w;
}

std::size_t best_attempt(std::span<const ReceivedAttempt> attempts) {
  check_attempts(attempts);
  std::size_t best = 0;
  for (std::size_t k = 1; k < attempts.size(); ++k) {
    if (attempts[k].quality.value > attempts[best].quality.value) best = k;
  }
  return best;
}

LatentVector combine_weighted_avg(std::span<const ReceivedAttempt> attempts) {
  return weighted_sum(attempts, softmax_weights(attempts));
}

LatentVector combine_best_only(std::span<const ReceivedAttempt> attempts) {
  return attempts[best_attempt(attempts)].latent;
}

CombineResult combine_mrc(std::span<const ReceivedAttempt> attempts) {
  check_attempts(attempts);
  bool all_zero = std::all_of(attempts.begin(), attempts.end(),
                              [](const auto& a) { return a.quality.value == 0.0; });
  return {weighted_sum(attempts, mrc_weights(attempts)), all_zero};
}

LatentVector combine_iterative(std::span<const ReceivedAttempt> attempts, IterativeUpdate update) {
  check_attempts(attempts);
  std::vector<std::size_t> order(attempts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return attempts[a].quality.value > attempts[b].quality.value;
  });
  Eigen::VectorXd z = attempts[order.front()].latent.values;
  double q = attempts[order.front()].quality.value;
  for (std::size_t i = 1; i < order.size(); ++i) {
    const auto& next = attempts[order[i]];
    const double qk = next.quality.value;
    const double denom = q + qk;
    const double alpha = denom == 0.0 ? 0.5 : q / denom;
    z.noalias() += (1.0 - alpha) * (next.latent.values - z);
    q = update == IterativeUpdate::accumulate ? q + qk : std::max(q, qk);
  }
  return LatentVector(std::move(z));
}

LatentVector combine_chase(std::span<const ReceivedAttempt> attempts) {
  check_attempts(attempts);
  return weighted_sum(attempts,
                      std::vector<double>(attempts.size(), 1.0 / static_cast<double>(attempts.size())));
}

LatentVector combine(std::span<const ReceivedAttempt> attempts, const CombinerSpec& spec) {
  switch (spec.method) {
    case CombinerMethod::weighted_avg: return combine_weighted_avg(attempts);
    case CombinerMethod::best_only: return combine_best_only(attempts);
    case CombinerMethod::mrc: return combine_mrc(attempts).latent;
    case CombinerMethod::iterative: return combine_iterative(attempts, spec.iterative_update);
    case CombinerMethod::chase: return combine_chase(attempts);
  }
  throw InvalidArgument("combine: unknown combiner method");
}

}  // namespace semharq
