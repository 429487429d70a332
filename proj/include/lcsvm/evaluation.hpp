#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "lcsvm/raster.hpp"

#include <json.hpp>

namespace lcsvm {

// Predictions may carry this to mean "excluded from the matrix".
inline constexpr int kUnclassifiedIndex = -1;

// Contingency counts: rows = reference class, columns = predicted class.
struct ErrorMatrix {
    std::vector<ClassLabel> classes;
    std::vector<std::uint64_t> counts;  // k*k, row-major
    std::uint64_t total = 0;
    std::uint64_t excluded_unclassified = 0;

    std::size_t class_count() const { return classes.size(); }
    std::uint64_t at(std::size_t reference, std::size_t predicted) const {
        return counts[reference * classes.size() + predicted];
    }
    std::uint64_t& at(std::size_t reference, std::size_t predicted) {
        return counts[reference * classes.size() + predicted];
    }
};

// Tally of 0-based class indices. Unclassified predictions are excluded and
// counted separately; an unclassified reference label is an error. Throws if
// nothing remains after exclusion (total must be positive).
ErrorMatrix build_error_matrix(std::span<const int> reference,
                               std::span<const int> predicted,
                               const std::vector<ClassLabel>& classes);

// Raster form: code 0 in the predicted map is excluded, codes 1..k map to
// classes. Dimensions and class tables must agree.
ErrorMatrix build_error_matrix(const ClassRaster& reference,
                               const ClassRaster& predicted);

// Cohen's kappa: with N = total, d = sum of the diagonal and
// m = sum_i rowsum_i * colsum_i, kappa = (N*d - m) / (N^2 - m).
// Throws when N^2 = m (chance agreement is total).
double kappa(const ErrorMatrix& matrix);

double overall_accuracy(const ErrorMatrix& matrix);

// Producer's accuracy = diagonal / row sum, user's = diagonal / column sum;
// empty marginals are reported as nullopt, never as 0.
struct AccuracyReport {
    double overall_accuracy = 0.0;
    double kappa = 0.0;
    std::vector<std::optional<double>> producers;
    std::vector<std::optional<double>> users;
};

AccuracyReport accuracy_report(const ErrorMatrix& matrix);

// Aligned-text report, 4 decimal places, marginals labeled.
std::string format_report(const ErrorMatrix& matrix);

// Same content machine-readable.
nlohmann::json report_json(const ErrorMatrix& matrix);

}  // namespace lcsvm
