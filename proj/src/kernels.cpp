#include "lcsvm/kernels.hpp"

#include <cmath>
#include <cstdint>

namespace lcsvm {

namespace {

void check_same_dim(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw DimensionError("kernel arguments have dimensions " +
                             std::to_string(x.size()) + " and " +
                             std::to_string(y.size()));
}

double dot(std::span<const double> x, std::span<const double> y) {
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) sum += x[i] * y[i];
    return sum;
}

double squared_distance(std::span<const double> x, std::span<const double> y) {
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        sum += d * d;
    }
    return sum;
}

// Integer power by repeated squaring; deterministic, no libm pow.
double powi(double base, int exponent) {
    double result = 1.0;
    double factor = base;
    for (int e = exponent; e > 0; e /= 2) {
        if (e % 2 == 1) result *= factor;
        factor *= factor;
    }
    return result;
}

}  // namespace

void validate(const KernelSpec& spec) {
    std::visit(
        [](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, RbfKernel>) {
                if (!(k.gamma > 0.0) || !std::isfinite(k.gamma))
                    throw InputError("rbf gamma must be positive and finite");
            } else if constexpr (std::is_same_v<K, PolynomialKernel>) {
                if (k.degree < 1)
                    throw InputError("polynomial degree must be >= 1");
                if (!(k.scale > 0.0) || !std::isfinite(k.scale))
                    throw InputError("polynomial scale must be positive and finite");
                if (!(k.coef0 >= 0.0) || !std::isfinite(k.coef0))
                    throw InputError("polynomial coef0 must be >= 0 and finite");
            }
        },
        spec);
}

std::string describe(const KernelSpec& spec) {
    return std::visit(
        [](const auto& k) -> std::string {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, LinearKernel>) {
                return "linear";
            } else if constexpr (std::is_same_v<K, RbfKernel>) {
                return "rbf(gamma=" + std::to_string(k.gamma) + ")";
            } else {
                return "polynomial(degree=" + std::to_string(k.degree) +
                       ", scale=" + std::to_string(k.scale) +
                       ", coef0=" + std::to_string(k.coef0) + ")";
            }
        },
        spec);
}

double kernel_eval(const KernelSpec& spec, std::span<const double> x,
                   std::span<const double> y) {
    check_same_dim(x, y);
    return std::visit(
        [&](const auto& k) -> double {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, LinearKernel>) {
                return dot(x, y);
            } else if constexpr (std::is_same_v<K, RbfKernel>) {
                return std::exp(-k.gamma * squared_distance(x, y));
            } else {
                return powi(k.scale * dot(x, y) + k.coef0, k.degree);
            }
        },
        spec);
}

namespace {

template <bool Parallel>
Matrix gram(const KernelSpec& spec, const FeatureMatrix& X) {
    validate(spec);
    if (X.empty()) throw InputError("kernel matrix requires a nonempty point set");

    const std::size_t n = X.size();
    Matrix out(n, n);

    // Upper triangle only; entries are independent, so the schedule cannot
    // change the result.
#pragma omp parallel for schedule(dynamic, 8) if (Parallel)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
        const auto xi = X.row(static_cast<std::size_t>(i));
        for (std::size_t j = static_cast<std::size_t>(i); j < n; ++j) {
            out.at(static_cast<std::size_t>(i), j) = kernel_eval(spec, xi, X.row(j));
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) out.at(i, j) = out.at(j, i);
    return out;
}

}  // namespace

Matrix kernel_matrix(const KernelSpec& spec, const FeatureMatrix& X) {
    return gram<true>(spec, X);
}

Matrix kernel_matrix_serial(const KernelSpec& spec, const FeatureMatrix& X) {
    return gram<false>(spec, X);
}

}  // namespace lcsvm
