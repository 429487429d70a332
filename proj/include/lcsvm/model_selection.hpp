#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "lcsvm/multiclass.hpp"

#include <json.hpp>

namespace lcsvm {

enum class KernelFamily { Linear, Rbf, Polynomial };

KernelFamily family_of(const KernelSpec& spec);
std::string family_name(KernelFamily family);

// Search grid. gamma_values applies to RBF, coef0_values to the polynomial
// family (degree and scale stay fixed over the search).
struct GridSpec {
    std::vector<double> c_values;
    std::vector<double> gamma_values;
    std::vector<double> coef0_values;
    int degree = 2;
    double scale = 1.0;
    std::size_t folds = 5;
    std::uint64_t seed = 0;
};

struct Fold {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
};

// Deterministic stratified partitions: per-class counts across folds differ
// by at most 1; validation sets are disjoint and cover every index. Throws
// naming any class smaller than the fold count.
std::vector<Fold> stratified_kfold(const SampleSet& samples, std::size_t folds,
                                   std::uint64_t seed);

struct CvCell {
    double cost = 0.0;
    std::optional<double> gamma;   // RBF family only
    std::optional<double> coef0;   // polynomial family only
    std::optional<double> mean_kappa;  // nullopt: every fold failed to converge
    double std_kappa = 0.0;
    std::string failure;  // first solver message when the cell failed

    KernelSpec kernel(const GridSpec& grid, KernelFamily family) const;
};

struct CvResult {
    KernelFamily family = KernelFamily::Linear;
    GridSpec grid;
    std::vector<CvCell> cells;
    std::size_t best_index = 0;

    const CvCell& best() const { return cells[best_index]; }
};

// Mean validation kappa per grid cell; the scaler is refitted inside each
// training fold (train_multiclass owns it). Failed cells are excluded from
// the argmax; ties prefer smaller C, then smaller gamma/coef0.
CvResult grid_search_cv(const SampleSet& samples, KernelFamily family,
                        const GridSpec& grid, const SolverSettings& settings = {});

// Argmax with the documented tie ladder; exposed so the selection rule is
// testable on synthetic tables. Throws when every cell failed.
std::size_t select_best_cell(const std::vector<CvCell>& cells);

std::string format_cv_report(const CvResult& result);
nlohmann::json cv_report_json(const CvResult& result);

}  // namespace lcsvm
