#include "lcsvm/multiclass.hpp"

#include <cmath>
#include <cstdint>
#include <exception>

namespace lcsvm {

void MulticlassModel::validate() const {
    const std::size_t k = classes.size();
    if (k < 2) throw InputError("multiclass model needs at least 2 classes");
    if (pairs.size() != k * (k - 1) / 2)
        throw InputError("multiclass model has " + std::to_string(pairs.size()) +
                         " pair models, expected " + std::to_string(k * (k - 1) / 2));
    // Every unordered pair exactly once; orientation is free so swapped-role
    // variants remain representable.
    std::vector<bool> seen(k * k, false);
    for (const auto& pair : pairs) {
        if (pair.positive < 0 || pair.negative < 0 ||
            pair.positive >= static_cast<int>(k) ||
            pair.negative >= static_cast<int>(k) || pair.positive == pair.negative)
            throw InputError("pair model references an invalid class index");
        const std::size_t a = std::min(pair.positive, pair.negative);
        const std::size_t b = std::max(pair.positive, pair.negative);
        if (seen[a * k + b]) throw InputError("duplicate class pair in model");
        seen[a * k + b] = true;
        if (pair.model.support_vectors.dim != scaler.dim())
            throw InputError("pair model dimension does not match scaler");
    }
}

MulticlassModel train_multiclass(const SampleSet& samples, const KernelSpec& kernel,
                                 double cost, const SolverSettings& settings) {
    samples.validate();
    validate(kernel);
    const std::size_t k = samples.classes.size();
    if (k < 2) throw InputError("training needs at least 2 classes");

    const auto by_class = samples.indices_by_class();
    for (std::size_t c = 0; c < k; ++c)
        if (by_class[c].empty())
            throw InputError("class '" + samples.classes[c].name +
                             "' has no training samples");

    MulticlassModel model;
    model.classes = samples.classes;
    model.kernel = kernel;
    model.scaler = fit_scaler(samples.features);

    FeatureMatrix scaled = samples.features;
    model.scaler.apply_in_place(scaled);

    struct PairTask {
        int i;
        int j;
    };
    std::vector<PairTask> tasks;
    for (int i = 0; i < static_cast<int>(k); ++i)
        for (int j = i + 1; j < static_cast<int>(k); ++j) tasks.push_back({i, j});

    model.pairs.resize(tasks.size());
    std::vector<std::exception_ptr> failures(tasks.size());

    // Pair problems are independent; each trains deterministically, so the
    // schedule cannot change the models.
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t t = 0; t < static_cast<std::int64_t>(tasks.size()); ++t) {
        const auto [ci, cj] = tasks[static_cast<std::size_t>(t)];
        try {
            BinaryProblem problem;
            problem.kernel = kernel;
            problem.cost = cost;
            problem.features = FeatureMatrix(scaled.dim);
            for (std::size_t idx : by_class[static_cast<std::size_t>(ci)]) {
                problem.features.push_row(scaled.row(idx));
                problem.labels.push_back(+1);
            }
            for (std::size_t idx : by_class[static_cast<std::size_t>(cj)]) {
                problem.features.push_row(scaled.row(idx));
                problem.labels.push_back(-1);
            }
            model.pairs[static_cast<std::size_t>(t)] =
                PairModel{ci, cj, train_binary(problem, settings)};
        } catch (const ConvergenceError& e) {
            failures[static_cast<std::size_t>(t)] =
                std::make_exception_ptr(ConvergenceError(
                    "pair (" + samples.classes[static_cast<std::size_t>(ci)].name +
                        " vs " + samples.classes[static_cast<std::size_t>(cj)].name +
                        "): " + e.what(),
                    e.residual()));
        } catch (...) {
            failures[static_cast<std::size_t>(t)] = std::current_exception();
        }
    }
    for (const auto& failure : failures)
        if (failure) std::rethrow_exception(failure);

    model.validate();
    return model;
}

namespace {

// Vote tally on an already-scaled vector.
int vote_scaled(const MulticlassModel& model, std::span<const double> x) {
    const std::size_t k = model.classes.size();
    std::vector<int> votes(k, 0);
    std::vector<double> magnitude(k, 0.0);
    for (const auto& pair : model.pairs) {
        const double value = decision_value(pair.model, x);
        const int winner = value >= 0.0 ? pair.positive : pair.negative;
        votes[static_cast<std::size_t>(winner)] += 1;
        // Both contestants accumulate the contest's confidence.
        magnitude[static_cast<std::size_t>(pair.positive)] += std::abs(value);
        magnitude[static_cast<std::size_t>(pair.negative)] += std::abs(value);
    }
    int best = 0;
    for (std::size_t c = 1; c < k; ++c) {
        if (votes[c] > votes[best] ||
            (votes[c] == votes[best] && magnitude[c] > magnitude[best]))
            best = static_cast<int>(c);
    }
    return best;
}

}  // namespace

int predict_index(const MulticlassModel& model, std::span<const double> x) {
    return vote_scaled(model, model.scaler.apply(x));
}

const ClassLabel& predict_one(const MulticlassModel& model,
                              std::span<const double> x) {
    return model.classes[static_cast<std::size_t>(predict_index(model, x))];
}

namespace {

template <bool Parallel>
ClassRaster classify(const MulticlassModel& model, const Raster& raster,
                     ClassifyStats* stats) {
    raster.validate();
    model.validate();
    if (raster.bands != model.feature_dim())
        throw DimensionError("raster has " + std::to_string(raster.bands) +
                             " bands, model expects " +
                             std::to_string(model.feature_dim()));

    ClassRaster out;
    out.rows = raster.rows;
    out.cols = raster.cols;
    out.classes = model.classes;
    out.values.assign(raster.rows * raster.cols, 0);

    const std::int64_t pixel_count =
        static_cast<std::int64_t>(raster.rows * raster.cols);
    std::size_t unclassified = 0;

#pragma omp parallel for schedule(static) reduction(+ : unclassified) if (Parallel)
    for (std::int64_t p = 0; p < pixel_count; ++p) {
        const std::size_t r = static_cast<std::size_t>(p) / raster.cols;
        const std::size_t c = static_cast<std::size_t>(p) % raster.cols;
        FeatureVector x(raster.bands);
        raster.pixel(r, c, x);
        bool usable = true;
        for (double v : x) {
            if (!std::isfinite(v) ||
                (raster.nodata && v == static_cast<double>(*raster.nodata))) {
                usable = false;
                break;
            }
        }
        if (!usable) {
            ++unclassified;
            continue;  // stays 0
        }
        out.values[static_cast<std::size_t>(p)] =
            static_cast<std::uint8_t>(predict_index(model, x) + 1);
    }
    if (stats) stats->unclassified = unclassified;
    return out;
}

}  // namespace

ClassRaster classify_raster(const MulticlassModel& model, const Raster& raster,
                            ClassifyStats* stats) {
    return classify<true>(model, raster, stats);
}

ClassRaster classify_raster_serial(const MulticlassModel& model,
                                   const Raster& raster, ClassifyStats* stats) {
    return classify<false>(model, raster, stats);
}

}  // namespace lcsvm
