#pragma once

#include <filesystem>
#include <string>

#include "semharq/corpus.hpp"
#include "semharq/linear_vae.hpp"

namespace semharq {

inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
  int version = kCheckpointVersion;
  Vocabulary vocab;
  CodecConfig config;
  VaeParameters params;
  std::size_t epoch = 0;
  double validation_bleu4 = 0.0;
  double validation_similarity = 0.0;

  static Checkpoint from_model(const LinearVae& model, std::size_t epoch, double bleu4,
                               double similarity);
  LinearVae model() const;
};

/// JSON text; floats use shortest round-trip formatting, so load(save(c))
/// reproduces every parameter bit-for-bit.
std::string checkpoint_to_json(const Checkpoint& c);
Checkpoint checkpoint_from_json(const std::string& text);

void save_checkpoint(const Checkpoint& c, const std::filesystem::path& path);
/// Throws FormatError on unreadable/corrupt files or unsupported versions,
/// DimensionMismatch when declared dimensions disagree with the arrays.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace semharq
