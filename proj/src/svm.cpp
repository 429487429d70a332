#include "lcsvm/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lcsvm {

namespace {

constexpr double kTau = 1e-12;  // floor for non-positive curvature

void validate_problem(const BinaryProblem& problem) {
    const std::size_t n = problem.features.size();
    if (n == 0) throw InputError("binary problem has no training points");
    if (problem.labels.size() != n)
        throw InputError("binary problem has " + std::to_string(n) +
                         " feature rows but " +
                         std::to_string(problem.labels.size()) + " labels");
    if (!(problem.cost > 0.0) || !std::isfinite(problem.cost))
        throw InputError("cost C must be positive and finite");
    validate(problem.kernel);

    bool has_pos = false, has_neg = false;
    for (int y : problem.labels) {
        if (y == 1)
            has_pos = true;
        else if (y == -1)
            has_neg = true;
        else
            throw InputError("labels must be -1 or +1");
    }
    if (!has_pos || !has_neg)
        throw InputError("unsolvable problem: training data contains a single class");
    for (double v : problem.features.values)
        if (!std::isfinite(v)) throw InputError("non-finite feature value");
}

// Working-set selection state over the gradient of
// f(alpha) = 1/2 alpha^T Q alpha - e^T alpha, Q_ij = y_i y_j K_ij.
struct Selection {
    std::size_t i = 0;     // argmax over I_up of -y G
    std::size_t j = 0;     // argmin over I_low of -y G
    double up = 0.0;       // m(alpha)
    double low = 0.0;      // M(alpha)
    double violation() const { return up - low; }
};

Selection select_pair(const std::vector<double>& alpha,
                      const std::vector<int>& y,
                      const std::vector<double>& grad, double cost) {
    const std::size_t n = alpha.size();
    Selection sel;
    double best_up = -std::numeric_limits<double>::infinity();
    double best_low = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
        const double score = -static_cast<double>(y[t]) * grad[t];
        const bool in_up = (y[t] == 1) ? alpha[t] < cost : alpha[t] > 0.0;
        const bool in_low = (y[t] == 1) ? alpha[t] > 0.0 : alpha[t] < cost;
        if (in_up && score > best_up) {
            best_up = score;
            sel.i = t;
        }
        if (in_low && score < best_low) {
            best_low = score;
            sel.j = t;
        }
    }
    sel.up = best_up;
    sel.low = best_low;
    return sel;
}

// Analytic two-variable solution clipped to the box, in the standard
// minimization form.
void update_pair(std::size_t i, std::size_t j, const std::vector<int>& y,
                 const Matrix& K, const std::vector<double>& grad, double cost,
                 std::vector<double>& alpha) {
    const double qii = K.at(i, i);
    const double qjj = K.at(j, j);
    const double kij = K.at(i, j);

    // Curvature along the feasible direction is the same in both branches:
    // Q_ii + Q_jj -/+ 2 Q_ij collapses to K_ii + K_jj - 2 K_ij.
    double quad = qii + qjj - 2.0 * kij;
    if (quad <= 0.0) quad = kTau;

    if (y[i] != y[j]) {
        const double delta = (-grad[i] - grad[j]) / quad;
        const double diff = alpha[i] - alpha[j];
        alpha[i] += delta;
        alpha[j] += delta;
        if (diff > 0.0) {
            if (alpha[j] < 0.0) {
                alpha[j] = 0.0;
                alpha[i] = diff;
            }
        } else {
            if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
        }
        if (diff > 0.0) {
            if (alpha[i] > cost) {
                alpha[i] = cost;
                alpha[j] = cost - diff;
            }
        } else {
            if (alpha[j] > cost) {
                alpha[j] = cost;
                alpha[i] = cost + diff;
            }
        }
    } else {
        const double delta = (grad[i] - grad[j]) / quad;
        const double sum = alpha[i] + alpha[j];
        alpha[i] -= delta;
        alpha[j] += delta;
        if (sum > cost) {
            if (alpha[i] > cost) {
                alpha[i] = cost;
                alpha[j] = sum - cost;
            }
        } else {
            if (alpha[j] < 0.0) {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
        }
        if (sum > cost) {
            if (alpha[j] > cost) {
                alpha[j] = cost;
                alpha[i] = sum - cost;
            }
        } else {
            if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }
    }
}

void refresh_gradient(const std::vector<double>& alpha,
                      const std::vector<int>& y, const Matrix& K,
                      std::vector<double>& grad) {
    const std::size_t n = alpha.size();
    for (std::size_t t = 0; t < n; ++t) {
        double g = -1.0;
        for (std::size_t s = 0; s < n; ++s) {
            if (alpha[s] != 0.0)
                g += static_cast<double>(y[t]) * y[s] * K.at(t, s) * alpha[s];
        }
        grad[t] = g;
    }
}

}  // namespace

BinaryModel train_binary(const BinaryProblem& problem,
                         const SolverSettings& settings) {
    validate_problem(problem);
    if (!(settings.kkt_tolerance > 0.0) || !(settings.min_alpha_step > 0.0))
        throw InputError("solver settings must be positive");

    const std::size_t n = problem.features.size();
    const std::vector<int>& y = problem.labels;
    const double cost = problem.cost;
    const double tol = settings.kkt_tolerance;
    // The automatic budget is a safety valve, not a tuning knob; pair
    // selection on ill-conditioned polynomial Gram matrices can take a few
    // hundred updates per point before the gap closes.
    const std::uint64_t max_passes = settings.max_passes.value_or(
        std::max<std::uint64_t>(1000000, 100 * static_cast<std::uint64_t>(n)));
    if (max_passes == 0) throw InputError("max_passes must be positive");

    const Matrix K = kernel_matrix(problem.kernel, problem.features);

    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0);

    bool refreshed = false;  // one exact-gradient recheck per apparent stop
    double residual = 0.0;
    bool converged = false;

    for (std::uint64_t pass = 0; pass < max_passes; ++pass) {
        Selection sel = select_pair(alpha, y, grad, cost);
        if (sel.violation() <= tol) {
            if (!refreshed) {
                refresh_gradient(alpha, y, K, grad);
                refreshed = true;
                sel = select_pair(alpha, y, grad, cost);
            }
            if (sel.violation() <= tol) {
                converged = true;
                break;
            }
        }
        residual = sel.violation();

        const std::size_t i = sel.i;
        const std::size_t j = sel.j;
        const double old_i = alpha[i];
        const double old_j = alpha[j];
        update_pair(i, j, y, K, grad, cost, alpha);
        const double delta_i = alpha[i] - old_i;
        const double delta_j = alpha[j] - old_j;

        if (std::max(std::abs(delta_i), std::abs(delta_j)) < settings.min_alpha_step) {
            // Stalled pair. Retry once on an exact gradient, then give up.
            alpha[i] = old_i;
            alpha[j] = old_j;
            if (!refreshed) {
                refresh_gradient(alpha, y, K, grad);
                refreshed = true;
                continue;
            }
            throw ConvergenceError("solver stalled below min_alpha_step (residual "
                                   "violation " + std::to_string(residual) + ")",
                                   residual);
        }
        refreshed = false;

        for (std::size_t t = 0; t < n; ++t) {
            grad[t] += static_cast<double>(y[t]) *
                       (y[i] * K.at(t, i) * delta_i + y[j] * K.at(t, j) * delta_j);
        }
        if (settings.on_update) settings.on_update(alpha);
    }

    if (!converged) {
        refresh_gradient(alpha, y, K, grad);
        const Selection sel = select_pair(alpha, y, grad, cost);
        if (sel.violation() > tol)
            throw ConvergenceError("solver exhausted max_passes (residual violation " +
                                       std::to_string(sel.violation()) + ")",
                                   sel.violation());
    }

    // Bias from free support vectors: mean of y_i - sum_j coeff_j K(x_j, x_i);
    // recomputed from the final alphas rather than the incremental gradient.
    double bias_sum = 0.0;
    std::size_t bias_count = 0;
    for (std::size_t t = 0; t < n; ++t) {
        if (alpha[t] > 0.0 && alpha[t] < cost) {
            double u = 0.0;
            for (std::size_t s = 0; s < n; ++s)
                if (alpha[s] != 0.0) u += alpha[s] * y[s] * K.at(t, s);
            bias_sum += static_cast<double>(y[t]) - u;
            ++bias_count;
        }
    }
    double bias;
    if (bias_count > 0) {
        bias = bias_sum / static_cast<double>(bias_count);
    } else {
        // No free vector: midpoint of the KKT-derived interval [M, m].
        refresh_gradient(alpha, y, K, grad);
        const Selection sel = select_pair(alpha, y, grad, cost);
        bias = 0.5 * (sel.up + sel.low);
    }

    BinaryModel model;
    model.kernel = problem.kernel;
    model.bias = bias;
    model.support_vectors = FeatureMatrix(problem.features.dim);
    for (std::size_t t = 0; t < n; ++t) {
        if (alpha[t] > 0.0) {
            model.support_vectors.push_row(problem.features.row(t));
            model.coefficients.push_back(alpha[t] * y[t]);
        }
    }
    return model;
}

double decision_value(const BinaryModel& model, std::span<const double> x) {
    if (x.size() != model.support_vectors.dim)
        throw DimensionError("query has dimension " + std::to_string(x.size()) +
                             ", model expects " +
                             std::to_string(model.support_vectors.dim));
    double value = model.bias;
    for (std::size_t i = 0; i < model.support_vectors.size(); ++i)
        value += model.coefficients[i] *
                 kernel_eval(model.kernel, model.support_vectors.row(i), x);
    return value;
}

int predict_binary(const BinaryModel& model, std::span<const double> x) {
    return decision_value(model, x) >= 0.0 ? 1 : -1;
}

namespace {

void check_box(const BinaryProblem& problem, std::span<const double> alphas) {
    if (alphas.size() != problem.features.size())
        throw InputError("alpha vector has length " + std::to_string(alphas.size()) +
                         ", expected " + std::to_string(problem.features.size()));
    for (double a : alphas)
        if (!(a >= 0.0) || !(a <= problem.cost))
            throw InputError("alpha outside the box [0, C]");
}

}  // namespace

double dual_objective(const BinaryProblem& problem,
                      std::span<const double> alphas) {
    check_box(problem, alphas);
    const std::size_t n = alphas.size();
    const Matrix K = kernel_matrix(problem.kernel, problem.features);
    double linear = 0.0;
    double quadratic = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        linear += alphas[i];
        if (alphas[i] == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (alphas[j] == 0.0) continue;
            quadratic += alphas[i] * alphas[j] * problem.labels[i] *
                         problem.labels[j] * K.at(i, j);
        }
    }
    return linear - 0.5 * quadratic;
}

double max_kkt_violation(const BinaryProblem& problem,
                         std::span<const double> alphas, double bias) {
    check_box(problem, alphas);
    const std::size_t n = alphas.size();
    const Matrix K = kernel_matrix(problem.kernel, problem.features);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double f = bias;
        for (std::size_t j = 0; j < n; ++j)
            if (alphas[j] != 0.0)
                f += alphas[j] * problem.labels[j] * K.at(i, j);
        const double margin = problem.labels[i] * f;
        double violation;
        if (alphas[i] == 0.0)
            violation = std::max(0.0, 1.0 - margin);
        else if (alphas[i] == problem.cost)
            violation = std::max(0.0, margin - 1.0);
        else
            violation = std::abs(1.0 - margin);
        worst = std::max(worst, violation);
    }
    return worst;
}

}  // namespace lcsvm
