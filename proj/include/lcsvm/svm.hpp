#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "lcsvm/kernels.hpp"

namespace lcsvm {

// Two-class soft-margin training problem. Labels are strictly -1 / +1.
struct BinaryProblem {
    FeatureMatrix features;
    std::vector<int> labels;
    double cost = 1.0;
    KernelSpec kernel;
};

struct SolverSettings {
    double kkt_tolerance = 1e-3;
    double min_alpha_step = 1e-12;
    // nullopt: max(1000000, 100 * n) pairwise updates.
    std::optional<std::uint64_t> max_passes;
    // Test hook, called with the full alpha vector after every successful
    // pairwise update.
    std::function<void(std::span<const double>)> on_update;
};

// Trained classifier: f(x) = sum_i coefficients[i] * k(sv_i, x) + bias.
// coefficients[i] = alpha_i * y_i; zero-alpha points are dropped.
struct BinaryModel {
    FeatureMatrix support_vectors;
    std::vector<double> coefficients;
    double bias = 0.0;
    KernelSpec kernel;
};

// Solves the dual QP with SMO (maximal-violating-pair selection). The result
// satisfies max KKT violation <= settings.kkt_tolerance. Throws InputError on
// single-class or non-finite input, ConvergenceError when the pass budget is
// exhausted.
BinaryModel train_binary(const BinaryProblem& problem,
                         const SolverSettings& settings = {});

double decision_value(const BinaryModel& model, std::span<const double> x);

// Sign of the decision value; exactly 0 predicts +1.
int predict_binary(const BinaryModel& model, std::span<const double> x);

// W(alpha) = sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j k(x_i, x_j).
// Throws InputError when alpha leaves the box [0, C].
double dual_objective(const BinaryProblem& problem,
                      std::span<const double> alphas);

// Largest violation of the KKT optimality conditions at (alphas, bias);
// 0 at an exact optimum.
double max_kkt_violation(const BinaryProblem& problem,
                         std::span<const double> alphas, double bias);

}  // namespace lcsvm
