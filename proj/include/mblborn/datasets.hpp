#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mblborn/born.hpp"
#include "mblborn/chain.hpp"

namespace mblborn {

/// Normalized non-negative pixel/probability vector over 2^{L_v} outcomes;
/// interchangeable with VisibleDistribution. Image interpretation reshapes
/// it row-major to 2^{L_v/2} x 2^{L_v/2}.
using Pattern = VisibleDistribution;

struct GrayImage {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> pixels;  ///< row-major
};

struct LabeledImageSet {
  std::vector<GrayImage> images;
  std::vector<std::uint8_t> labels;
};

/// Parses the big-endian IDX pair (image magic 2051, label magic 2049,
/// 28x28 pixels). Malformed input raises FormatError with a byte offset.
LabeledImageSet load_mnist_idx(const std::string& images_path,
                               const std::string& labels_path);

/// Class-mean digit pattern: zero-pad 28->32, mean-pool 4x4 down to 8x8,
/// average over the class, normalize to unit sum, flatten row-major.
/// Requires L_v = 6 (the 8x8 target grid).
Pattern toy_digit_pattern(const std::vector<GrayImage>& class_images, int n_visible);

/// Uniform distribution over the even-parity bitstrings.
Pattern parity_dataset(int n_visible);

/// Born distribution of an all-visible chain after one quench of duration T
/// with fields at strength h_d. `spec.n_sites` is overridden by n_visible.
Pattern quantum_target(int n_visible, double h_d, ChainSpec spec, double quench_time,
                       Rng& rng);

/// Entrywise sum of patterns, renormalized.
Pattern superpose_patterns(const std::vector<Pattern>& patterns);

/// Zeroes the masked pixels and renormalizes; the unmasked remainder must
/// retain positive mass.
Pattern corrupt_pattern(const Pattern& xi, const std::vector<int>& mask);

/// Pattern CSV row format: label, then the 2^{L_v} decimal entries.
struct LabeledPattern {
  std::string label;
  Pattern values;
};

std::vector<LabeledPattern> load_pattern_csv(const std::string& path);
void save_pattern_csv(const std::string& path,
                      const std::vector<LabeledPattern>& patterns);

/// Looks up one row by label; throws FormatError when absent.
Pattern pattern_by_label(const std::vector<LabeledPattern>& patterns,
                         const std::string& label);

}  // namespace mblborn
