#include "lcsvm/synthetic.hpp"

#include "lcsvm/rng.hpp"

namespace lcsvm {

namespace {

const char* kClassNames[] = {"water", "builtup", "thickswamp", "lightswamp",
                             "vegetation"};

std::string class_name(std::size_t c) {
    if (c < std::size(kClassNames)) return kClassNames[c];
    return "class_" + std::to_string(c + 1);
}

}  // namespace

SyntheticScene gen_synthetic(const SyntheticSpec& spec) {
    if (spec.classes < 2 || spec.bands == 0 || spec.samples_per_class == 0 ||
        spec.rows == 0 || spec.cols == 0)
        throw InputError("synthetic scene parameters must be positive (>= 2 classes)");
    if (spec.classes > 255)
        throw InputError("class rasters support at most 255 classes");
    if (!(spec.mean_spread > 0.0) || !(spec.noise_std >= 0.0))
        throw InputError("spread must be positive and noise nonnegative");
    if (spec.cols < spec.classes)
        throw InputError("raster needs at least one column per class stripe");

    Rng rng(spec.seed);
    SyntheticScene scene;

    scene.class_means = FeatureMatrix(spec.bands);
    std::vector<double> row(spec.bands);
    for (std::size_t c = 0; c < spec.classes; ++c) {
        for (std::size_t b = 0; b < spec.bands; ++b)
            row[b] = rng.uniform(-spec.mean_spread, spec.mean_spread);
        scene.class_means.push_row(row);
    }

    scene.samples.features = FeatureMatrix(spec.bands);
    for (std::size_t c = 0; c < spec.classes; ++c) {
        scene.samples.classes.push_back({static_cast<int>(c), class_name(c)});
        const auto mean = scene.class_means.row(c);
        for (std::size_t s = 0; s < spec.samples_per_class; ++s) {
            for (std::size_t b = 0; b < spec.bands; ++b)
                row[b] = rng.normal(mean[b], spec.noise_std);
            scene.samples.features.push_row(row);
            scene.samples.labels.push_back(static_cast<int>(c));
        }
    }
    for (std::size_t b = 0; b < spec.bands; ++b)
        scene.samples.band_names.push_back("b" + std::to_string(b + 1));
    scene.samples.validate();

    // Vertical class stripes; pixels drawn from the stripe's distribution.
    scene.raster.rows = spec.rows;
    scene.raster.cols = spec.cols;
    scene.raster.bands = spec.bands;
    scene.raster.data.assign(spec.rows * spec.cols * spec.bands, 0.0F);
    scene.reference.rows = spec.rows;
    scene.reference.cols = spec.cols;
    scene.reference.classes = scene.samples.classes;
    scene.reference.values.assign(spec.rows * spec.cols, 0);

    for (std::size_t r = 0; r < spec.rows; ++r) {
        for (std::size_t c = 0; c < spec.cols; ++c) {
            const std::size_t cls = c * spec.classes / spec.cols;
            scene.reference.at(r, c) = static_cast<std::uint8_t>(cls + 1);
            const auto mean = scene.class_means.row(cls);
            for (std::size_t b = 0; b < spec.bands; ++b)
                scene.raster.at(b, r, c) =
                    static_cast<float>(rng.normal(mean[b], spec.noise_std));
        }
    }
    return scene;
}

}  // namespace lcsvm
