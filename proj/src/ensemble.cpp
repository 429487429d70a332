#include "lcsvm/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace lcsvm {

void EnsembleModel::validate() const {
    if (members.size() < 2) throw InputError("ensemble needs at least 2 members");
    const auto& first = members.front().model;
    for (const auto& member : members) {
        member.model.validate();
        if (member.model.classes != first.classes)
            throw InputError("ensemble member '" + member.name +
                             "' has a different class table");
        if (member.model.feature_dim() != first.feature_dim())
            throw InputError("ensemble member '" + member.name +
                             "' has a different feature dimension");
    }
    if (!weights.empty()) {
        if (weights.size() != members.size())
            throw InputError("ensemble has " + std::to_string(members.size()) +
                             " members but " + std::to_string(weights.size()) +
                             " weights");
        for (double w : weights)
            if (!(w > 0.0) || !std::isfinite(w))
                throw InputError("ensemble weights must be positive and finite");
    }
}

std::vector<MemberSpec> default_member_specs(double cost, double gamma,
                                             double coef0) {
    return {
        {"linear", LinearKernel{}, cost},
        {"rbf", RbfKernel{gamma}, cost},
        {"quadratic", PolynomialKernel{2, 1.0, coef0}, cost},
    };
}

EnsembleModel train_ensemble(const SampleSet& samples,
                             std::span<const MemberSpec> member_specs,
                             const SolverSettings& settings) {
    if (member_specs.size() < 2)
        throw InputError("ensemble needs at least 2 member specs");
    EnsembleModel ensemble;
    for (const auto& spec : member_specs) {
        try {
            ensemble.members.push_back(
                {spec.name, train_multiclass(samples, spec.kernel, spec.cost,
                                             settings)});
        } catch (const ConvergenceError& e) {
            throw ConvergenceError("member '" + spec.name + "': " + e.what(),
                                   e.residual());
        } catch (const Error& e) {
            throw InputError("member '" + spec.name + "': " + e.what());
        }
    }
    ensemble.validate();
    return ensemble;
}

VoteRecord vote_record(std::span<const int> predictions,
                       std::span<const double> weights, TieBreak tie_break) {
    (void)tie_break;  // single policy
    if (predictions.empty()) throw InputError("vote requires at least one prediction");
    if (!weights.empty()) {
        if (weights.size() != predictions.size())
            throw InputError("vote got " + std::to_string(predictions.size()) +
                             " predictions but " + std::to_string(weights.size()) +
                             " weights");
        for (double w : weights)
            if (!(w > 0.0) || !std::isfinite(w))
                throw InputError("vote weights must be positive and finite");
    }

    std::map<int, double> tally;
    for (std::size_t m = 0; m < predictions.size(); ++m)
        tally[predictions[m]] += weights.empty() ? 1.0 : weights[m];

    double top = 0.0;
    for (const auto& [label, score] : tally) top = std::max(top, score);
    std::size_t contenders = 0;
    for (const auto& [label, score] : tally)
        if (score == top) ++contenders;

    VoteRecord record;
    record.per_member.assign(predictions.begin(), predictions.end());
    record.was_tie = contenders > 1;
    // FirstListedMember: the earliest member whose prediction carries the top
    // score; with a single contender this is simply that class.
    for (std::size_t m = 0; m < predictions.size(); ++m) {
        if (tally[predictions[m]] == top) {
            record.winner = predictions[m];
            break;
        }
    }
    return record;
}

int vote_simple(std::span<const int> predictions, TieBreak tie_break) {
    return vote_record(predictions, {}, tie_break).winner;
}

int vote_weighted(std::span<const int> predictions, std::span<const double> weights,
                  TieBreak tie_break) {
    if (weights.empty()) throw InputError("vote_weighted requires weights");
    return vote_record(predictions, weights, tie_break).winner;
}

EnsemblePrediction predict_ensemble(const EnsembleModel& ensemble,
                                    const Raster& raster) {
    ensemble.validate();
    raster.validate();
    if (raster.bands != ensemble.members.front().model.feature_dim())
        throw DimensionError(
            "raster has " + std::to_string(raster.bands) +
            " bands, ensemble expects " +
            std::to_string(ensemble.members.front().model.feature_dim()));

    EnsemblePrediction out;
    ClassifyStats stats;
    for (const auto& member : ensemble.members) {
        out.member_maps.push_back(classify_raster(member.model, raster, &stats));
    }
    out.unclassified = stats.unclassified;  // identical pixels for every member

    const auto voted = vote_maps(out.member_maps, ensemble.weights,
                                 ensemble.tie_break);
    out.final_map = voted.map;
    out.tie_pixels = voted.tie_pixels;
    return out;
}

VoteMapsResult vote_maps(std::span<const ClassRaster> maps,
                         std::span<const double> weights, TieBreak tie_break) {
    if (maps.size() < 2) throw InputError("vote needs at least 2 class maps");
    const std::size_t rows = maps.front().rows;
    const std::size_t cols = maps.front().cols;
    for (const auto& map : maps)
        if (map.rows != rows || map.cols != cols)
            throw DimensionError("class maps have mismatched dimensions");

    VoteMapsResult out;
    out.map.rows = rows;
    out.map.cols = cols;
    out.map.classes = maps.front().classes;
    out.map.values.assign(rows * cols, 0);

    std::vector<int> predictions(maps.size());
    for (std::size_t p = 0; p < rows * cols; ++p) {
        for (std::size_t m = 0; m < maps.size(); ++m)
            predictions[m] = maps[m].values[p];
        const VoteRecord record = vote_record(predictions, weights, tie_break);
        out.map.values[p] = static_cast<std::uint8_t>(record.winner);
        if (record.was_tie) ++out.tie_pixels;
    }
    return out;
}

Matrix disagreement(std::span<const ClassRaster> maps) {
    if (maps.empty()) throw InputError("disagreement needs at least one map");
    const std::size_t rows = maps.front().rows;
    const std::size_t cols = maps.front().cols;
    for (const auto& map : maps)
        if (map.rows != rows || map.cols != cols)
            throw DimensionError("class maps have mismatched dimensions");

    const std::size_t pixels = rows * cols;
    Matrix out(maps.size(), maps.size());
    for (std::size_t a = 0; a < maps.size(); ++a) {
        for (std::size_t b = a + 1; b < maps.size(); ++b) {
            std::size_t differing = 0;
            for (std::size_t p = 0; p < pixels; ++p)
                if (maps[a].values[p] != maps[b].values[p]) ++differing;
            const double fraction =
                static_cast<double>(differing) / static_cast<double>(pixels);
            out.at(a, b) = fraction;
            out.at(b, a) = fraction;
        }
    }
    return out;
}

}  // namespace lcsvm
