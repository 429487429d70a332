#include "lcsvm/model_selection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "lcsvm/evaluation.hpp"
#include "lcsvm/rng.hpp"

namespace lcsvm {

KernelFamily family_of(const KernelSpec& spec) {
    if (std::holds_alternative<LinearKernel>(spec)) return KernelFamily::Linear;
    if (std::holds_alternative<RbfKernel>(spec)) return KernelFamily::Rbf;
    return KernelFamily::Polynomial;
}

std::string family_name(KernelFamily family) {
    switch (family) {
        case KernelFamily::Linear: return "linear";
        case KernelFamily::Rbf: return "rbf";
        case KernelFamily::Polynomial: return "polynomial";
    }
    return "unknown";
}

std::vector<Fold> stratified_kfold(const SampleSet& samples, std::size_t folds,
                                   std::uint64_t seed) {
    samples.validate();
    if (folds < 2) throw InputError("fold count must be at least 2");

    const auto by_class = samples.indices_by_class();
    for (std::size_t c = 0; c < by_class.size(); ++c)
        if (by_class[c].size() < folds)
            throw InputError("class '" + samples.classes[c].name + "' has " +
                             std::to_string(by_class[c].size()) +
                             " samples, fewer than " + std::to_string(folds) +
                             " folds");

    Rng rng(seed);
    std::vector<std::vector<std::size_t>> validation(folds);
    for (auto indices : by_class) {
        rng.shuffle(indices);
        // Round-robin deal keeps per-class fold counts within 1.
        for (std::size_t t = 0; t < indices.size(); ++t)
            validation[t % folds].push_back(indices[t]);
    }

    std::vector<Fold> out(folds);
    for (std::size_t f = 0; f < folds; ++f) {
        std::sort(validation[f].begin(), validation[f].end());
        out[f].validation = validation[f];
        for (std::size_t g = 0; g < folds; ++g) {
            if (g == f) continue;
            out[f].train.insert(out[f].train.end(), validation[g].begin(),
                                validation[g].end());
        }
        std::sort(out[f].train.begin(), out[f].train.end());
    }
    return out;
}

KernelSpec CvCell::kernel(const GridSpec& grid, KernelFamily family) const {
    switch (family) {
        case KernelFamily::Linear: return LinearKernel{};
        case KernelFamily::Rbf: return RbfKernel{gamma.value()};
        case KernelFamily::Polynomial:
            return PolynomialKernel{grid.degree, grid.scale, coef0.value()};
    }
    throw InputError("unknown kernel family");
}

std::size_t select_best_cell(const std::vector<CvCell>& cells) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (!cells[i].mean_kappa) continue;
        if (!best) {
            best = i;
            continue;
        }
        const CvCell& challenger = cells[i];
        const CvCell& incumbent = cells[*best];
        if (challenger.mean_kappa > incumbent.mean_kappa) {
            best = i;
        } else if (challenger.mean_kappa == incumbent.mean_kappa) {
            // Prefer the simpler / smoother model.
            if (challenger.cost < incumbent.cost) {
                best = i;
            } else if (challenger.cost == incumbent.cost) {
                const double ca = challenger.gamma.value_or(
                    challenger.coef0.value_or(0.0));
                const double cb = incumbent.gamma.value_or(
                    incumbent.coef0.value_or(0.0));
                if (ca < cb) best = i;
            }
        }
    }
    if (!best) throw Error("grid search failed: every cell failed to train");
    return *best;
}

CvResult grid_search_cv(const SampleSet& samples, KernelFamily family,
                        const GridSpec& grid, const SolverSettings& settings) {
    if (grid.c_values.empty()) throw InputError("grid has no C values");
    for (double c : grid.c_values)
        if (!(c > 0.0)) throw InputError("grid C values must be positive");
    if (family == KernelFamily::Rbf) {
        if (grid.gamma_values.empty())
            throw InputError("rbf grid has no gamma values");
        for (double g : grid.gamma_values)
            if (!(g > 0.0)) throw InputError("grid gamma values must be positive");
    }
    if (family == KernelFamily::Polynomial) {
        if (grid.coef0_values.empty())
            throw InputError("polynomial grid has no coef0 values");
        for (double c : grid.coef0_values)
            if (!(c >= 0.0)) throw InputError("grid coef0 values must be >= 0");
    }

    CvResult result;
    result.family = family;
    result.grid = grid;
    for (double cost : grid.c_values) {
        switch (family) {
            case KernelFamily::Linear:
                result.cells.push_back({cost, std::nullopt, std::nullopt, {}, 0, ""});
                break;
            case KernelFamily::Rbf:
                for (double gamma : grid.gamma_values)
                    result.cells.push_back({cost, gamma, std::nullopt, {}, 0, ""});
                break;
            case KernelFamily::Polynomial:
                for (double coef0 : grid.coef0_values)
                    result.cells.push_back({cost, std::nullopt, coef0, {}, 0, ""});
                break;
        }
    }

    const auto folds = stratified_kfold(samples, grid.folds, grid.seed);

    struct Task {
        std::size_t cell;
        std::size_t fold;
    };
    std::vector<Task> tasks;
    for (std::size_t c = 0; c < result.cells.size(); ++c)
        for (std::size_t f = 0; f < folds.size(); ++f) tasks.push_back({c, f});

    std::vector<std::optional<double>> fold_kappa(tasks.size());
    std::vector<std::string> fold_failure(tasks.size());
    std::vector<std::exception_ptr> hard_failures(tasks.size());

    // (cell, fold) runs are independent; results land in fixed slots, so the
    // table is identical however the loop is scheduled.
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t t = 0; t < static_cast<std::int64_t>(tasks.size()); ++t) {
        const auto [cell_idx, fold_idx] = tasks[static_cast<std::size_t>(t)];
        try {
            const KernelSpec kernel =
                result.cells[cell_idx].kernel(grid, family);
            const SampleSet train = samples.subset(folds[fold_idx].train);
            const SampleSet validation = samples.subset(folds[fold_idx].validation);
            const MulticlassModel model = train_multiclass(
                train, kernel, result.cells[cell_idx].cost, settings);
            std::vector<int> predicted(validation.size());
            for (std::size_t v = 0; v < validation.size(); ++v)
                predicted[v] = predict_index(model, validation.features.row(v));
            const ErrorMatrix matrix = build_error_matrix(
                validation.labels, predicted, validation.classes);
            fold_kappa[static_cast<std::size_t>(t)] = kappa(matrix);
        } catch (const ConvergenceError& e) {
            fold_failure[static_cast<std::size_t>(t)] = e.what();
        } catch (...) {
            hard_failures[static_cast<std::size_t>(t)] = std::current_exception();
        }
    }
    for (const auto& failure : hard_failures)
        if (failure) std::rethrow_exception(failure);

    for (std::size_t c = 0; c < result.cells.size(); ++c) {
        std::vector<double> kappas;
        std::string failure;
        for (std::size_t t = 0; t < tasks.size(); ++t) {
            if (tasks[t].cell != c) continue;
            if (fold_kappa[t])
                kappas.push_back(*fold_kappa[t]);
            else if (failure.empty())
                failure = fold_failure[t];
        }
        CvCell& cell = result.cells[c];
        if (kappas.size() < folds.size()) {
            // A cell is only scored when every fold trained.
            cell.mean_kappa = std::nullopt;
            cell.failure = failure;
            continue;
        }
        double mean = 0.0;
        for (double k : kappas) mean += k;
        mean /= static_cast<double>(kappas.size());
        double var = 0.0;
        for (double k : kappas) var += (k - mean) * (k - mean);
        cell.mean_kappa = mean;
        cell.std_kappa = std::sqrt(var / static_cast<double>(kappas.size()));
    }

    result.best_index = select_best_cell(result.cells);
    return result;
}

std::string format_cv_report(const CvResult& result) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(4);
    out << "Cross-validation (" << family_name(result.family) << ", "
        << result.grid.folds << " folds, seed " << result.grid.seed << ")\n";
    out << std::setw(12) << "C";
    if (result.family == KernelFamily::Rbf) out << std::setw(12) << "gamma";
    if (result.family == KernelFamily::Polynomial) out << std::setw(12) << "coef0";
    out << std::setw(14) << "mean kappa" << std::setw(12) << "std" << "\n";
    for (std::size_t i = 0; i < result.cells.size(); ++i) {
        const CvCell& cell = result.cells[i];
        out << std::setw(12) << cell.cost;
        if (cell.gamma) out << std::setw(12) << *cell.gamma;
        if (cell.coef0) out << std::setw(12) << *cell.coef0;
        if (cell.mean_kappa)
            out << std::setw(14) << *cell.mean_kappa << std::setw(12)
                << cell.std_kappa;
        else
            out << std::setw(14) << "failed" << std::setw(12) << "-";
        if (i == result.best_index) out << "  <- best";
        out << "\n";
    }
    const CvCell& best = result.best();
    out << "Best: C = " << best.cost;
    if (best.gamma) out << ", gamma = " << *best.gamma;
    if (best.coef0) out << ", coef0 = " << *best.coef0;
    out << ", mean kappa = " << *best.mean_kappa << "\n";
    return out.str();
}

nlohmann::json cv_report_json(const CvResult& result) {
    nlohmann::json j;
    j["kernel"] = family_name(result.family);
    j["folds"] = result.grid.folds;
    j["seed"] = result.grid.seed;
    j["cells"] = nlohmann::json::array();
    for (std::size_t i = 0; i < result.cells.size(); ++i) {
        const CvCell& cell = result.cells[i];
        nlohmann::json entry;
        entry["c"] = cell.cost;
        if (cell.gamma) entry["gamma"] = *cell.gamma;
        if (cell.coef0) entry["coef0"] = *cell.coef0;
        if (cell.mean_kappa) {
            entry["mean_kappa"] = *cell.mean_kappa;
            entry["std_kappa"] = cell.std_kappa;
        } else {
            entry["mean_kappa"] = nullptr;
            entry["failure"] = cell.failure;
        }
        entry["best"] = (i == result.best_index);
        j["cells"].push_back(entry);
    }
    const CvCell& best = result.best();
    j["best"] = {{"c", best.cost}, {"mean_kappa", *best.mean_kappa}};
    if (best.gamma) j["best"]["gamma"] = *best.gamma;
    if (best.coef0) j["best"]["coef0"] = *best.coef0;
    return j;
}

}  // namespace lcsvm
