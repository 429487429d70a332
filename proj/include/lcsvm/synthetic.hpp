#pragma once

#include <cstdint>

#include "lcsvm/raster.hpp"

namespace lcsvm {

// Seeded stand-in for a real multispectral scene: Gaussian class blobs for
// training plus a striped raster drawn from the same distributions.
struct SyntheticSpec {
    std::uint64_t seed = 42;
    std::size_t classes = 5;
    std::size_t bands = 6;
    std::size_t samples_per_class = 60;
    std::size_t rows = 64;
    std::size_t cols = 64;
    double mean_spread = 2.5;  // class means drawn uniform in [-spread, spread]
    double noise_std = 1.0;
};

struct SyntheticScene {
    SampleSet samples;
    Raster raster;
    ClassRaster reference;
    FeatureMatrix class_means;  // classes x bands, for tests
};

SyntheticScene gen_synthetic(const SyntheticSpec& spec);

}  // namespace lcsvm
