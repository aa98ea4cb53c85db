#include "mblborn/datasets.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mblborn/dynamics.hpp"
#include "mblborn/errors.hpp"
#include "mblborn/trainer.hpp"

namespace mblborn {

namespace {

std::uint32_t read_be32(std::istream& in, const std::string& path,
                        std::size_t offset) {
  std::array<unsigned char, 4> buf{};
  in.read(reinterpret_cast<char*>(buf.data()), 4);
  if (!in) {
    std::ostringstream msg;
    msg << path << ": truncated at byte " << offset;
    throw FormatError(msg.str());
  }
  return (std::uint32_t(buf[0]) << 24) | (std::uint32_t(buf[1]) << 16) |
         (std::uint32_t(buf[2]) << 8) | std::uint32_t(buf[3]);
}

}  // namespace

LabeledImageSet load_mnist_idx(const std::string& images_path,
                               const std::string& labels_path) {
  std::ifstream img(images_path, std::ios::binary);
  if (!img) throw FormatError(images_path + ": cannot open");
  if (read_be32(img, images_path, 0) != 2051)
    throw FormatError(images_path + ": bad image magic at byte 0 (want 2051)");
  const std::uint32_t n_images = read_be32(img, images_path, 4);
  const std::uint32_t rows = read_be32(img, images_path, 8);
  const std::uint32_t cols = read_be32(img, images_path, 12);
  if (rows != 28 || cols != 28)
    throw FormatError(images_path + ": expected 28x28 pixels at byte 8");

  std::ifstream lab(labels_path, std::ios::binary);
  if (!lab) throw FormatError(labels_path + ": cannot open");
  if (read_be32(lab, labels_path, 0) != 2049)
    throw FormatError(labels_path + ": bad label magic at byte 0 (want 2049)");
  const std::uint32_t n_labels = read_be32(lab, labels_path, 4);
  if (n_labels != n_images)
    throw FormatError(labels_path + ": label count does not match image count");

  LabeledImageSet set;
  set.images.reserve(n_images);
  set.labels.resize(n_labels);
  for (std::uint32_t k = 0; k < n_images; ++k) {
    GrayImage image;
    image.rows = 28;
    image.cols = 28;
    image.pixels.resize(28 * 28);
    img.read(reinterpret_cast<char*>(image.pixels.data()), 28 * 28);
    if (!img) {
      std::ostringstream msg;
      msg << images_path << ": truncated at byte " << (16 + std::size_t(k) * 784);
      throw FormatError(msg.str());
    }
    set.images.push_back(std::move(image));
  }
  lab.read(reinterpret_cast<char*>(set.labels.data()), n_labels);
  if (!lab) throw FormatError(labels_path + ": truncated at byte 8");
  return set;
}

Pattern toy_digit_pattern(const std::vector<GrayImage>& class_images,
                          int n_visible) {
  if (class_images.empty()) throw InvalidSpec("digit class is empty");
  if (n_visible != 6)
    throw InvalidSpec("toy digit patterns target an 8x8 grid (L_v = 6)");
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(64);
  for (const auto& image : class_images) {
    if (image.rows != 28 || image.cols != 28)
      throw DimensionError("toy digit pipeline expects 28x28 images");
    // zero-pad to 32x32 (2 pixels each side), then 4x4 mean pooling
    for (int br = 0; br < 8; ++br) {
      for (int bc = 0; bc < 8; ++bc) {
        double acc = 0.0;
        for (int r = br * 4; r < br * 4 + 4; ++r) {
          for (int c = bc * 4; c < bc * 4 + 4; ++c) {
            const int sr = r - 2;
            const int sc = c - 2;
            if (sr >= 0 && sr < 28 && sc >= 0 && sc < 28)
              acc += image.pixels[sr * 28 + sc];
          }
        }
        mean[br * 8 + bc] += acc / 16.0;
      }
    }
  }
  mean /= static_cast<double>(class_images.size());
  const double total = mean.sum();
  if (!(total > 0.0)) throw NumericError("digit class has zero total intensity");
  return mean / total;
}

Pattern parity_dataset(int n_visible) {
  if (n_visible < 1) throw InvalidSpec("need at least one visible site");
  const Eigen::Index dim = Eigen::Index(1) << n_visible;
  Pattern xi = Pattern::Zero(dim);
  const double w = 1.0 / static_cast<double>(dim / 2 > 0 ? dim / 2 : 1);
  for (Eigen::Index z = 0; z < dim; ++z)
    if (std::popcount(static_cast<std::uint32_t>(z)) % 2 == 0) xi[z] = w;
  return xi;
}

Pattern quantum_target(int n_visible, double h_d, ChainSpec spec,
                       double quench_time, Rng& rng) {
  spec.n_sites = n_visible;
  TrainConfig probe;
  probe.chain = spec;
  probe.partition = Partition::contiguous(n_visible, 0);
  const PureState psi0 = make_initial_state(probe);
  const FieldVector h = sample_fields(h_d, n_visible, rng);
  const auto table = SectorTable::build(n_visible);
  const PureState psi =
      evolve_blocked(block_eigendecompose(table, spec, h), psi0, quench_time);
  return born_distribution(psi);
}

Pattern superpose_patterns(const std::vector<Pattern>& patterns) {
  if (patterns.empty()) throw InvalidSpec("need at least one pattern");
  Pattern sum = patterns.front();
  for (std::size_t k = 1; k < patterns.size(); ++k) {
    if (patterns[k].size() != sum.size())
      throw DimensionError("pattern length mismatch");
    sum += patterns[k];
  }
  const double total = sum.sum();
  if (!(total > 0.0)) throw NumericError("patterns sum to zero mass");
  return sum / total;
}

Pattern corrupt_pattern(const Pattern& xi, const std::vector<int>& mask) {
  Pattern out = xi;
  for (int idx : mask) {
    if (idx < 0 || idx >= xi.size()) throw InvalidSpec("mask index out of range");
    out[idx] = 0.0;
  }
  const double total = out.sum();
  if (!(total > 0.0))
    throw InvalidSpec("corruption mask removes all probability mass");
  return out / total;
}

std::vector<LabeledPattern> load_pattern_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path + ": cannot open");
  std::vector<LabeledPattern> patterns;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    if (!std::getline(row, cell, ',')) throw FormatError(path + ": empty row");
    LabeledPattern p;
    p.label = cell;
    std::vector<double> values;
    while (std::getline(row, cell, ',')) values.push_back(std::stod(cell));
    if (values.empty()) throw FormatError(path + ": row without values");
    p.values = Eigen::Map<Eigen::VectorXd>(values.data(),
                                           static_cast<Eigen::Index>(values.size()));
    patterns.push_back(std::move(p));
  }
  return patterns;
}

void save_pattern_csv(const std::string& path,
                      const std::vector<LabeledPattern>& patterns) {
  std::ofstream out(path);
  if (!out) throw FormatError(path + ": cannot open for writing");
  char buf[40];
  for (const auto& p : patterns) {
    out << p.label;
    for (Eigen::Index i = 0; i < p.values.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", p.values[i]);
      out << ',' << buf;
    }
    out << '\n';
  }
}

Pattern pattern_by_label(const std::vector<LabeledPattern>& patterns,
                         const std::string& label) {
  for (const auto& p : patterns)
    if (p.label == label) return p.values;
  throw FormatError("pattern with label '" + label + "' not found");
}

}  // namespace mblborn
