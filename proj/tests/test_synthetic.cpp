#include <doctest.h>

#include <cmath>

#include "lcsvm/synthetic.hpp"

using namespace lcsvm;

TEST_SUITE("synthetic") {

TEST_CASE("the same seed reproduces the scene exactly") {
    const SyntheticScene a = gen_synthetic(SyntheticSpec{});
    const SyntheticScene b = gen_synthetic(SyntheticSpec{});
    CHECK(a.samples.features == b.samples.features);
    CHECK(a.samples.labels == b.samples.labels);
    CHECK(a.raster == b.raster);
    CHECK(a.reference == b.reference);

    SyntheticSpec other;
    other.seed = 43;
    const SyntheticScene c = gen_synthetic(other);
    CHECK(c.raster.data != a.raster.data);
}

TEST_CASE("zero noise collapses samples onto the class means") {
    SyntheticSpec spec;
    spec.noise_std = 0.0;
    spec.samples_per_class = 5;
    spec.rows = spec.cols = 8;
    const SyntheticScene scene = gen_synthetic(spec);
    for (std::size_t i = 0; i < scene.samples.size(); ++i) {
        const auto mean = scene.class_means.row(
            static_cast<std::size_t>(scene.samples.labels[i]));
        const auto row = scene.samples.features.row(i);
        for (std::size_t b = 0; b < row.size(); ++b) CHECK(row[b] == mean[b]);
    }
}

TEST_CASE("per-class sample means approach the configured means") {
    const SyntheticSpec spec;  // seed 42, n = 60 per class
    const SyntheticScene scene = gen_synthetic(spec);
    const double tolerance =
        4.0 * spec.noise_std / std::sqrt(static_cast<double>(spec.samples_per_class));
    const auto by_class = scene.samples.indices_by_class();
    for (std::size_t c = 0; c < spec.classes; ++c) {
        const auto mean = scene.class_means.row(c);
        for (std::size_t b = 0; b < spec.bands; ++b) {
            double sum = 0.0;
            for (std::size_t idx : by_class[c])
                sum += scene.samples.features.row(idx)[b];
            const double sample_mean =
                sum / static_cast<double>(by_class[c].size());
            CHECK(std::abs(sample_mean - mean[b]) <= tolerance);
        }
    }
}

TEST_CASE("reference stripes cover every class") {
    const SyntheticScene scene = gen_synthetic(SyntheticSpec{});
    std::vector<std::size_t> counts(6, 0);
    for (std::uint8_t v : scene.reference.values) ++counts[v];
    CHECK(counts[0] == 0);
    for (std::size_t c = 1; c <= 5; ++c) CHECK(counts[c] > 0);
    // Stripes are column-constant.
    for (std::size_t c = 0; c < scene.reference.cols; ++c)
        for (std::size_t r = 1; r < scene.reference.rows; ++r)
            CHECK(scene.reference.at(r, c) == scene.reference.at(0, c));
}

TEST_CASE("invalid parameters are rejected") {
    SyntheticSpec spec;
    spec.classes = 1;
    CHECK_THROWS_AS(gen_synthetic(spec), InputError);
    spec = SyntheticSpec{};
    spec.cols = 2;  // fewer columns than classes
    CHECK_THROWS_AS(gen_synthetic(spec), InputError);
    spec = SyntheticSpec{};
    spec.mean_spread = 0.0;
    CHECK_THROWS_AS(gen_synthetic(spec), InputError);
}

}  // TEST_SUITE
