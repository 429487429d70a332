#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "lcsvm/errors.hpp"

namespace lcsvm {

using FeatureVector = std::vector<double>;

// Row-major store of n feature rows of uniform dimension.
struct FeatureMatrix {
    std::size_t dim = 0;
    std::vector<double> values;

    FeatureMatrix() = default;
    explicit FeatureMatrix(std::size_t dimension) : dim(dimension) {}

    std::size_t size() const { return dim == 0 ? 0 : values.size() / dim; }
    bool empty() const { return values.empty(); }

    std::span<const double> row(std::size_t i) const {
        return {values.data() + i * dim, dim};
    }

    void push_row(std::span<const double> x) {
        if (x.size() != dim)
            throw DimensionError("feature row has dimension " +
                                 std::to_string(x.size()) + ", expected " +
                                 std::to_string(dim));
        values.insert(values.end(), x.begin(), x.end());
    }

    bool operator==(const FeatureMatrix&) const = default;
};

// Dense row-major matrix of reals (Gram matrices, disagreement tables).
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

    double& at(std::size_t i, std::size_t j) { return values[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }

    bool operator==(const Matrix&) const = default;
};

struct LinearKernel {
    bool operator==(const LinearKernel&) const = default;
};

struct RbfKernel {
    double gamma = 0.5;
    bool operator==(const RbfKernel&) const = default;
};

// Inhomogeneous by default (coef0 = 1) so degree 2 carries the linear terms.
struct PolynomialKernel {
    int degree = 2;
    double scale = 1.0;
    double coef0 = 1.0;
    bool operator==(const PolynomialKernel&) const = default;
};

using KernelSpec = std::variant<LinearKernel, RbfKernel, PolynomialKernel>;

// Throws InputError when parameters are out of range.
void validate(const KernelSpec& spec);

// Short human-readable form, e.g. "rbf(gamma=0.5)".
std::string describe(const KernelSpec& spec);

double kernel_eval(const KernelSpec& spec, std::span<const double> x,
                   std::span<const double> y);

// Gram matrix over the rows of X: out[i][j] = k(X[i], X[j]). The upper
// triangle is computed and mirrored, so the result is exactly symmetric and
// bitwise independent of the parallel schedule.
Matrix kernel_matrix(const KernelSpec& spec, const FeatureMatrix& X);

// Single-threaded reference used by the tests and the benchmark.
Matrix kernel_matrix_serial(const KernelSpec& spec, const FeatureMatrix& X);

}  // namespace lcsvm
