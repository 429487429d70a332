#pragma once

#include "lcsvm/multiclass.hpp"

namespace lcsvm {

enum class TieBreak {
    FirstListedMember,
};

struct EnsembleMember {
    std::string name;
    MulticlassModel model;
};

// Ordered committee of multiclass classifiers sharing one class table.
// Empty weights = simple majority vote.
struct EnsembleModel {
    std::vector<EnsembleMember> members;
    std::vector<double> weights;
    TieBreak tie_break = TieBreak::FirstListedMember;

    void validate() const;
};

struct MemberSpec {
    std::string name;
    KernelSpec kernel;
    double cost = 10.0;
};

// The default committee: linear, RBF and quadratic, in that order.
std::vector<MemberSpec> default_member_specs(double cost = 10.0,
                                             double gamma = 0.5,
                                             double coef0 = 1.0);

// Trains every member independently on the same samples; member failures are
// rethrown with the member name attached.
EnsembleModel train_ensemble(const SampleSet& samples,
                             std::span<const MemberSpec> member_specs,
                             const SolverSettings& settings = {});

struct VoteRecord {
    std::vector<int> per_member;
    int winner = 0;
    bool was_tie = false;
};

// Majority vote over per-member predictions (any integer label domain).
// Ties go to the earliest-listed member whose prediction is among the tied
// labels.
int vote_simple(std::span<const int> predictions,
                TieBreak tie_break = TieBreak::FirstListedMember);

// Weighted variant; weights must be positive. Equal weights reduce to
// vote_simple on every input.
int vote_weighted(std::span<const int> predictions, std::span<const double> weights,
                  TieBreak tie_break = TieBreak::FirstListedMember);

// Full tally, exposing whether the top count was tied. Empty weights = simple.
VoteRecord vote_record(std::span<const int> predictions,
                       std::span<const double> weights = {},
                       TieBreak tie_break = TieBreak::FirstListedMember);

struct EnsemblePrediction {
    ClassRaster final_map;
    std::vector<ClassRaster> member_maps;  // one per member, member order
    std::size_t tie_pixels = 0;
    std::size_t unclassified = 0;
};

// Each member classifies every pixel; the final map is the per-pixel vote
// (weighted when the model carries weights).
EnsemblePrediction predict_ensemble(const EnsembleModel& ensemble,
                                    const Raster& raster);

struct VoteMapsResult {
    ClassRaster map;
    std::size_t tie_pixels = 0;
};

// Late fusion of already-classified maps (the CLI `vote` path). Class code 0
// participates as an ordinary value, so unanimity and majority laws stay
// total.
VoteMapsResult vote_maps(std::span<const ClassRaster> maps,
                         std::span<const double> weights = {},
                         TieBreak tie_break = TieBreak::FirstListedMember);

// Pairwise fraction of pixels where two maps differ; symmetric, zero
// diagonal.
Matrix disagreement(std::span<const ClassRaster> maps);

}  // namespace lcsvm
