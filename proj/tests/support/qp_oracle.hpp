#pragma once

// Brute-force reference solver for the soft-margin SVM dual:
//
//   maximize  W(a) = sum(a) - 1/2 sum_ij a_i a_j y_i y_j K(x_i, x_j)
//   s.t.      0 <= a_i <= C,  sum_i a_i y_i = 0
//
// Projected gradient with FISTA momentum, followed by an exact solve on the
// identified active set. Written independently of the library's SMO path:
// it has its own kernel evaluation, its own gradient, its own KKT measure.
// Test-only code.

#include <cstdint>
#include <span>
#include <vector>

#include "lcsvm/kernels.hpp"

namespace lcsvm::testing {

struct OracleProblem {
    std::vector<std::vector<double>> points;
    std::vector<int> labels;  // -1 / +1
    double cost = 1.0;
    KernelSpec kernel;
};

struct OracleSolution {
    std::vector<double> alphas;
    double objective = 0.0;
    double kkt_gap = 0.0;  // m(alpha) - M(alpha) at the solution
};

// Kernel value computed by the oracle's own formulas (std::pow based).
double oracle_kernel(const KernelSpec& spec, std::span<const double> x,
                     std::span<const double> y);

double oracle_objective(const OracleProblem& problem,
                        std::span<const double> alphas);

// Euclidean projection onto {0 <= a <= C, y.a = 0} by bisection on the
// equality multiplier.
std::vector<double> project_feasible(std::span<const double> point,
                                     std::span<const int> labels, double cost);

OracleSolution solve_dual(const OracleProblem& problem,
                          std::size_t max_iterations = 200000,
                          double kkt_tolerance = 1e-10);

// Deterministic feasible point for optimality probes.
std::vector<double> random_feasible(std::span<const int> labels, double cost,
                                    std::uint64_t seed);

}  // namespace lcsvm::testing
