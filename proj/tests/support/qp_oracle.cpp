#include "support/qp_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lcsvm/rng.hpp"

namespace lcsvm::testing {

namespace {

double clip(double v, double lo, double hi) {
    return std::min(std::max(v, lo), hi);
}

// Q matrix of the minimization form f(a) = 1/2 a'Qa - e'a.
std::vector<double> build_q(const OracleProblem& problem) {
    const std::size_t n = problem.points.size();
    std::vector<double> q(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            q[i * n + j] = problem.labels[i] * problem.labels[j] *
                           oracle_kernel(problem.kernel, problem.points[i],
                                         problem.points[j]);
    return q;
}

std::vector<double> gradient(const std::vector<double>& q,
                             std::span<const double> a) {
    const std::size_t n = a.size();
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = -1.0;
        for (std::size_t j = 0; j < n; ++j) sum += q[i * n + j] * a[j];
        g[i] = sum;
    }
    return g;
}

// Violating-pair gap m(a) - M(a); <= 0 at an exact optimum.
double kkt_gap(std::span<const double> g, std::span<const int> y,
               std::span<const double> a, double cost) {
    double up = -std::numeric_limits<double>::infinity();
    double low = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < a.size(); ++t) {
        const double score = -static_cast<double>(y[t]) * g[t];
        if ((y[t] == 1 ? a[t] < cost : a[t] > 0.0)) up = std::max(up, score);
        if ((y[t] == 1 ? a[t] > 0.0 : a[t] < cost)) low = std::min(low, score);
    }
    return up - low;
}

// Exact equality-constrained solve on the free set; returns false when the
// system is near-singular or the solution leaves the box.
bool polish(const OracleProblem& problem, const std::vector<double>& q,
            std::vector<double>& a) {
    const std::size_t n = a.size();
    const double cost = problem.cost;
    const double margin = 1e-7 * std::max(1.0, cost);

    std::vector<std::size_t> free_set;
    std::vector<double> fixed = a;
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] <= margin)
            fixed[i] = 0.0;
        else if (a[i] >= cost - margin)
            fixed[i] = cost;
        else
            free_set.push_back(i);
    }
    if (free_set.empty()) return false;

    // KKT system [Q_FF y_F; y_F' 0][a_F; nu] = [e_F - Q_FB a_B; -y_B' a_B]
    const std::size_t m = free_set.size() + 1;
    std::vector<double> lhs(m * m, 0.0);
    std::vector<double> rhs(m, 0.0);
    for (std::size_t r = 0; r + 1 < m; ++r) {
        const std::size_t i = free_set[r];
        rhs[r] = 1.0;
        for (std::size_t c = 0; c + 1 < m; ++c)
            lhs[r * m + c] = q[i * n + free_set[c]];
        lhs[r * m + (m - 1)] = problem.labels[i];
        for (std::size_t b = 0; b < n; ++b) {
            bool is_free = false;
            for (std::size_t f : free_set)
                if (f == b) {
                    is_free = true;
                    break;
                }
            if (!is_free && fixed[b] != 0.0) rhs[r] -= q[i * n + b] * fixed[b];
        }
    }
    double bound_mass = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
        bool is_free = false;
        for (std::size_t f : free_set)
            if (f == b) {
                is_free = true;
                break;
            }
        if (!is_free) bound_mass += problem.labels[b] * fixed[b];
    }
    for (std::size_t c = 0; c + 1 < m; ++c)
        lhs[(m - 1) * m + c] = problem.labels[free_set[c]];
    rhs[m - 1] = -bound_mass;

    // Gaussian elimination with partial pivoting.
    std::vector<std::size_t> perm(m);
    for (std::size_t i = 0; i < m; ++i) perm[i] = i;
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < m; ++r)
            if (std::abs(lhs[perm[r] * m + col]) >
                std::abs(lhs[perm[pivot] * m + col]))
                pivot = r;
        std::swap(perm[col], perm[pivot]);
        const double diag = lhs[perm[col] * m + col];
        if (std::abs(diag) < 1e-12) return false;
        for (std::size_t r = col + 1; r < m; ++r) {
            const double factor = lhs[perm[r] * m + col] / diag;
            if (factor == 0.0) continue;
            for (std::size_t c = col; c < m; ++c)
                lhs[perm[r] * m + c] -= factor * lhs[perm[col] * m + c];
            rhs[perm[r]] -= factor * rhs[perm[col]];
        }
    }
    std::vector<double> solution(m);
    for (std::size_t step = m; step-- > 0;) {
        double value = rhs[perm[step]];
        for (std::size_t c = step + 1; c < m; ++c)
            value -= lhs[perm[step] * m + c] * solution[c];
        solution[step] = value / lhs[perm[step] * m + step];
    }

    std::vector<double> candidate = fixed;
    for (std::size_t r = 0; r + 1 < m; ++r) {
        const double v = solution[r];
        if (v < -1e-9 || v > cost + 1e-9) return false;
        candidate[free_set[r]] = clip(v, 0.0, cost);
    }
    if (oracle_objective(problem, candidate) >= oracle_objective(problem, a)) {
        a = candidate;
        return true;
    }
    return false;
}

}  // namespace

double oracle_kernel(const KernelSpec& spec, std::span<const double> x,
                     std::span<const double> y) {
    double dot = 0.0;
    double dist = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        dot += x[i] * y[i];
        dist += (x[i] - y[i]) * (x[i] - y[i]);
    }
    if (std::holds_alternative<LinearKernel>(spec)) return dot;
    if (const auto* rbf = std::get_if<RbfKernel>(&spec))
        return std::exp(-rbf->gamma * dist);
    const auto& poly = std::get<PolynomialKernel>(spec);
    return std::pow(poly.scale * dot + poly.coef0, poly.degree);
}

double oracle_objective(const OracleProblem& problem,
                        std::span<const double> alphas) {
    const std::size_t n = alphas.size();
    double linear = 0.0;
    double quadratic = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        linear += alphas[i];
        for (std::size_t j = 0; j < n; ++j)
            quadratic += alphas[i] * alphas[j] * problem.labels[i] *
                         problem.labels[j] *
                         oracle_kernel(problem.kernel, problem.points[i],
                                       problem.points[j]);
    }
    return linear - 0.5 * quadratic;
}

std::vector<double> project_feasible(std::span<const double> point,
                                     std::span<const int> labels, double cost) {
    double bound = cost + 1.0;
    for (double v : point) bound = std::max(bound, std::abs(v) + cost + 1.0);
    double lo = -bound;
    double hi = bound;
    const auto balance = [&](double lambda) {
        double sum = 0.0;
        for (std::size_t i = 0; i < point.size(); ++i)
            sum += labels[i] * clip(point[i] - lambda * labels[i], 0.0, cost);
        return sum;
    };
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (balance(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    const double lambda = 0.5 * (lo + hi);
    std::vector<double> out(point.size());
    for (std::size_t i = 0; i < point.size(); ++i)
        out[i] = clip(point[i] - lambda * labels[i], 0.0, cost);
    return out;
}

OracleSolution solve_dual(const OracleProblem& problem,
                          std::size_t max_iterations, double kkt_tolerance) {
    const std::size_t n = problem.points.size();
    const auto q = build_q(problem);

    // Step from the infinity-norm bound on Q's spectrum.
    double lipschitz = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += std::abs(q[i * n + j]);
        lipschitz = std::max(lipschitz, row);
    }
    const double step = 1.0 / std::max(lipschitz, 1e-12);

    std::vector<double> current(n, 0.0);
    std::vector<double> previous(n, 0.0);
    double momentum = 1.0;
    double gap = std::numeric_limits<double>::infinity();

    for (std::size_t iter = 0; iter < max_iterations; ++iter) {
        // FISTA extrapolation.
        const double next_momentum =
            0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
        const double beta = (momentum - 1.0) / next_momentum;
        std::vector<double> probe(n);
        for (std::size_t i = 0; i < n; ++i)
            probe[i] = current[i] + beta * (current[i] - previous[i]);

        const auto g = gradient(q, probe);
        std::vector<double> moved(n);
        for (std::size_t i = 0; i < n; ++i) moved[i] = probe[i] - step * g[i];
        auto next = project_feasible(moved, problem.labels, problem.cost);

        // Restart momentum when the step fights the descent direction.
        double alignment = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            alignment += (probe[i] - next[i]) * (next[i] - current[i]);
        if (alignment > 0.0) {
            momentum = 1.0;
        } else {
            momentum = next_momentum;
        }
        previous = current;
        current = std::move(next);

        if (iter % 64 == 0) {
            const auto exact = gradient(q, current);
            gap = kkt_gap(exact, problem.labels, current, problem.cost);
            if (gap <= kkt_tolerance) break;
        }
    }

    polish(problem, q, current);

    OracleSolution solution;
    const auto g = gradient(q, current);
    solution.kkt_gap = kkt_gap(g, problem.labels, current, problem.cost);
    solution.alphas = current;
    solution.objective = oracle_objective(problem, current);
    return solution;
}

std::vector<double> random_feasible(std::span<const int> labels, double cost,
                                    std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> raw(labels.size());
    for (double& v : raw) v = rng.uniform(0.0, cost);
    return project_feasible(raw, labels, cost);
}

}  // namespace lcsvm::testing
