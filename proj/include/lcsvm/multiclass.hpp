#pragma once

#include "lcsvm/raster.hpp"
#include "lcsvm/svm.hpp"

namespace lcsvm {

// One-vs-one member: the binary model was trained with class `positive`
// mapped to +1 and class `negative` to -1.
struct PairModel {
    int positive = 0;
    int negative = 0;
    BinaryModel model;
};

// One-vs-one committee over k classes. The scaler travels with the model so
// raw pixel vectors can be classified directly.
struct MulticlassModel {
    std::vector<ClassLabel> classes;
    std::vector<PairModel> pairs;  // k(k-1)/2, trained order (0,1),(0,2),...
    Scaler scaler;
    KernelSpec kernel;

    std::size_t feature_dim() const { return scaler.dim(); }
    std::size_t class_count() const { return classes.size(); }
    void validate() const;
};

// Fits the scaler on `samples`, then trains one binary model per class pair.
// Solver failures are rethrown with the class pair named.
MulticlassModel train_multiclass(const SampleSet& samples, const KernelSpec& kernel,
                                 double cost, const SolverSettings& settings = {});

// Pairwise vote; ties go to the larger summed |decision value| over the
// class's contests, then to the lower class index. Returns the class index.
int predict_index(const MulticlassModel& model, std::span<const double> x);

const ClassLabel& predict_one(const MulticlassModel& model,
                              std::span<const double> x);

struct ClassifyStats {
    std::size_t unclassified = 0;  // non-finite or nodata pixels
};

// Per-pixel classification. Pixels with non-finite (or nodata) bands get the
// reserved code 0 and are tallied in `stats`. Parallel over pixels; output is
// identical to classify_raster_serial.
ClassRaster classify_raster(const MulticlassModel& model, const Raster& raster,
                            ClassifyStats* stats = nullptr);
ClassRaster classify_raster_serial(const MulticlassModel& model,
                                   const Raster& raster,
                                   ClassifyStats* stats = nullptr);

}  // namespace lcsvm
