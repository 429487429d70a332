#include <doctest.h>

#include <algorithm>
#include <set>

#include <json.hpp>

#include "lcsvm/evaluation.hpp"
#include "lcsvm/model_selection.hpp"
#include "lcsvm/rng.hpp"
#include "lcsvm/synthetic.hpp"

using namespace lcsvm;

namespace {

SampleSet balanced_samples(std::uint64_t seed, std::size_t classes,
                           std::size_t per_class, double separation = 6.0) {
    Rng rng(seed);
    SampleSet samples;
    samples.features = FeatureMatrix(2);
    for (std::size_t c = 0; c < classes; ++c) {
        samples.classes.push_back({static_cast<int>(c), "c" + std::to_string(c)});
        for (std::size_t s = 0; s < per_class; ++s) {
            samples.features.push_row(std::vector<double>{
                rng.normal(separation * static_cast<double>(c), 1.0),
                rng.normal(0.0, 1.0)});
            samples.labels.push_back(static_cast<int>(c));
        }
    }
    return samples;
}

void check_partition(const SampleSet& samples, const std::vector<Fold>& folds) {
    // Disjoint cover of all indices by the validation sets.
    std::set<std::size_t> seen;
    std::size_t covered = 0;
    for (const auto& fold : folds) {
        for (std::size_t idx : fold.validation) {
            CHECK(seen.insert(idx).second);
            ++covered;
        }
        // train + validation = everything, disjoint.
        CHECK(fold.train.size() + fold.validation.size() == samples.size());
        std::set<std::size_t> train(fold.train.begin(), fold.train.end());
        for (std::size_t idx : fold.validation) CHECK(train.count(idx) == 0);
    }
    CHECK(covered == samples.size());

    // Per-class fold counts differ by at most one.
    for (std::size_t c = 0; c < samples.classes.size(); ++c) {
        std::size_t lowest = samples.size(), highest = 0;
        for (const auto& fold : folds) {
            std::size_t count = 0;
            for (std::size_t idx : fold.validation)
                if (samples.labels[idx] == static_cast<int>(c)) ++count;
            lowest = std::min(lowest, count);
            highest = std::max(highest, count);
        }
        CHECK(highest - lowest <= 1);
    }
}

}  // namespace

TEST_SUITE("model_selection") {

TEST_CASE("two balanced classes split 5-fold give one of each per fold") {
    const SampleSet samples = balanced_samples(1, 2, 5);
    const auto folds = stratified_kfold(samples, 5, 7);
    REQUIRE(folds.size() == 5);
    for (const auto& fold : folds) {
        CHECK(fold.validation.size() == 2);
        int per_class[2] = {0, 0};
        for (std::size_t idx : fold.validation)
            ++per_class[samples.labels[idx]];
        CHECK(per_class[0] == 1);
        CHECK(per_class[1] == 1);
    }
    check_partition(samples, folds);
}

TEST_CASE("leave-one-out on balanced data gives singleton validation sets") {
    SampleSet samples = balanced_samples(2, 1, 5);
    const auto folds = stratified_kfold(samples, 5, 3);
    REQUIRE(folds.size() == 5);
    for (const auto& fold : folds) CHECK(fold.validation.size() == 1);
    check_partition(samples, folds);
}

TEST_CASE("the same seed reproduces the partition exactly") {
    const SampleSet samples = balanced_samples(3, 3, 12);
    const auto first = stratified_kfold(samples, 4, 99);
    const auto second = stratified_kfold(samples, 4, 99);
    REQUIRE(first.size() == second.size());
    for (std::size_t f = 0; f < first.size(); ++f) {
        CHECK(first[f].train == second[f].train);
        CHECK(first[f].validation == second[f].validation);
    }
    const auto other = stratified_kfold(samples, 4, 100);
    bool any_difference = false;
    for (std::size_t f = 0; f < first.size(); ++f)
        if (other[f].validation != first[f].validation) any_difference = true;
    CHECK(any_difference);
}

TEST_CASE("a class smaller than the fold count is rejected by name") {
    SampleSet samples = balanced_samples(4, 2, 4);
    samples.classes[0].name = "sparse";
    CHECK_THROWS_WITH_AS(stratified_kfold(samples, 5, 0),
                         doctest::Contains("sparse"), InputError);
}

TEST_CASE("partition postconditions hold across seeds and shapes") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::size_t classes = 2 + seed % 4;
        const std::size_t per_class = 6 + seed % 9;
        const SampleSet samples = balanced_samples(seed + 50, classes, per_class);
        const std::size_t folds_n = 2 + seed % 4;
        check_partition(samples, stratified_kfold(samples, folds_n, seed));
    }
}

TEST_CASE("single-cell grid selects that cell") {
    const SampleSet samples = balanced_samples(5, 2, 10);
    GridSpec grid;
    grid.c_values = {7.0};
    grid.folds = 2;
    const CvResult result = grid_search_cv(samples, KernelFamily::Linear, grid);
    REQUIRE(result.cells.size() == 1);
    CHECK(result.best_index == 0);
    CHECK(result.best().cost == 7.0);
    CHECK(result.best().mean_kappa.has_value());
}

TEST_CASE("equal mean kappas prefer the smaller C") {
    // Widely separated classes: every cell reaches kappa 1 exactly.
    const SampleSet samples = balanced_samples(6, 2, 10, 40.0);
    GridSpec grid;
    grid.c_values = {10.0, 1.0};
    grid.folds = 2;
    const CvResult result = grid_search_cv(samples, KernelFamily::Linear, grid);
    REQUIRE(result.cells.size() == 2);
    CHECK(result.best().mean_kappa.value() == 1.0);
    CHECK(result.best().cost == 1.0);
}

TEST_CASE("tie ladder falls back to the smoothness parameter") {
    std::vector<CvCell> cells;
    cells.push_back({10.0, 1.0, std::nullopt, 0.9, 0.0, ""});
    cells.push_back({10.0, 0.1, std::nullopt, 0.9, 0.0, ""});
    cells.push_back({10.0, 0.5, std::nullopt, 0.8, 0.0, ""});
    CHECK(select_best_cell(cells) == 1);

    // Failed cells are excluded even with the best would-be score.
    cells.push_back({1.0, 0.05, std::nullopt, std::nullopt, 0.0, "diverged"});
    CHECK(select_best_cell(cells) == 1);

    std::vector<CvCell> all_failed;
    all_failed.push_back({1.0, std::nullopt, std::nullopt, std::nullopt, 0.0, "x"});
    CHECK_THROWS_AS(select_best_cell(all_failed), Error);
}

TEST_CASE("every cell failing raises a search error") {
    const SampleSet samples = balanced_samples(7, 2, 8, 1.0);
    GridSpec grid;
    grid.c_values = {1.0, 10.0};
    grid.folds = 2;
    SolverSettings settings;
    settings.max_passes = 1;  // nothing can converge in one update
    CHECK_THROWS_AS(
        grid_search_cv(samples, KernelFamily::Linear, grid, settings), Error);
}

TEST_CASE("reported cell means are reproducible from the partition") {
    const SampleSet samples = balanced_samples(8, 3, 12, 4.0);
    GridSpec grid;
    grid.c_values = {10.0};
    grid.gamma_values = {0.5};
    grid.folds = 3;
    grid.seed = 5;
    const CvResult result = grid_search_cv(samples, KernelFamily::Rbf, grid);

    const auto folds = stratified_kfold(samples, grid.folds, grid.seed);
    double mean = 0.0;
    for (const auto& fold : folds) {
        const SampleSet train = samples.subset(fold.train);
        const SampleSet validation = samples.subset(fold.validation);
        const MulticlassModel model =
            train_multiclass(train, RbfKernel{0.5}, 10.0);
        std::vector<int> predicted(validation.size());
        for (std::size_t v = 0; v < validation.size(); ++v)
            predicted[v] = predict_index(model, validation.features.row(v));
        mean += kappa(
            build_error_matrix(validation.labels, predicted, validation.classes));
    }
    mean /= static_cast<double>(folds.size());
    CHECK(result.best().mean_kappa.value() ==
          doctest::Approx(mean).epsilon(1e-12));
}

TEST_CASE("rbf grid on the seeded synthetic set freezes its best cell") {
    SyntheticSpec spec;
    spec.samples_per_class = 25;  // keep the 3x3 grid fast
    const SyntheticScene scene = gen_synthetic(spec);
    GridSpec grid;
    grid.c_values = {1.0, 10.0, 100.0};
    grid.gamma_values = {0.1, 1.0, 10.0};
    grid.folds = 5;
    grid.seed = 42;
    const CvResult result = grid_search_cv(scene.samples, KernelFamily::Rbf, grid);
    REQUIRE(result.cells.size() == 9);
    // Frozen under seed 42.
    CHECK(result.best().cost == 1.0);
    CHECK(result.best().gamma.value() == 0.1);
    CHECK(result.best().mean_kappa.value() == doctest::Approx(0.92).epsilon(1e-12));
}

TEST_CASE("grids must cover the applicable kernel") {
    const SampleSet samples = balanced_samples(9, 2, 8);
    GridSpec grid;
    grid.c_values = {1.0};
    grid.gamma_values = {};
    CHECK_THROWS_AS(grid_search_cv(samples, KernelFamily::Rbf, grid), InputError);
    grid.coef0_values = {};
    CHECK_THROWS_AS(grid_search_cv(samples, KernelFamily::Polynomial, grid),
                    InputError);
    GridSpec empty;
    empty.c_values = {};
    CHECK_THROWS_AS(grid_search_cv(samples, KernelFamily::Linear, empty),
                    InputError);
}

TEST_CASE("cv reports render both ways") {
    const SampleSet samples = balanced_samples(10, 2, 10, 20.0);
    GridSpec grid;
    grid.c_values = {1.0, 10.0};
    grid.folds = 2;
    const CvResult result = grid_search_cv(samples, KernelFamily::Linear, grid);
    const std::string text = format_cv_report(result);
    CHECK(text.find("mean kappa") != std::string::npos);
    CHECK(text.find("<- best") != std::string::npos);
    const nlohmann::json j = cv_report_json(result);
    CHECK(j["cells"].size() == 2);
    CHECK(j["best"]["c"].get<double>() == result.best().cost);
}

}  // TEST_SUITE
