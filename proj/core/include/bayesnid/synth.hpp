#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace bayesnid {

/// Gaussian class clouds shaped like flow-feature tables.
///
/// Feature j of class c is drawn from N(offset_j + separation * scale_j * pos_j(c), scale_j^2)
/// where scale_j spans several orders of magnitude. The first
/// `ordered_fraction` of the features place classes in id order (so they
/// correlate with the class id); the rest use a seeded permutation.
struct SynthConfig {
  std::size_t rows_per_class = 100;
  std::size_t features = 20;
  std::size_t classes = 6;
  std::uint64_t seed = 42;
  double separation = 1.0;
  double ordered_fraction = 0.5;
  /// Fraction of feature cells written as an absent token (NaN / Infinity / empty).
  double defect_rate = 0.0;
  /// Fraction of present feature cells whose sign is flipped.
  double negative_rate = 0.0;
  std::string label_column = "Label";
};

/// Class names: the six traffic classes first, then class_6, class_7, ...
std::vector<std::string> synth_class_names(std::size_t classes);

/// Throws InvalidArgument for zero features or classes.
void write_synthetic_csv(const SynthConfig& config, std::ostream& out);

}  // namespace bayesnid
