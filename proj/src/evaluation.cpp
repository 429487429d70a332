#include "lcsvm/evaluation.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace lcsvm {

ErrorMatrix build_error_matrix(std::span<const int> reference,
                               std::span<const int> predicted,
                               const std::vector<ClassLabel>& classes) {
    if (reference.size() != predicted.size())
        throw InputError("reference and predicted label counts differ (" +
                         std::to_string(reference.size()) + " vs " +
                         std::to_string(predicted.size()) + ")");
    if (reference.empty()) throw InputError("no labels to tally");
    const int k = static_cast<int>(classes.size());
    if (k == 0) throw InputError("empty class table");

    ErrorMatrix matrix;
    matrix.classes = classes;
    matrix.counts.assign(static_cast<std::size_t>(k) * k, 0);

    for (std::size_t t = 0; t < reference.size(); ++t) {
        const int ref = reference[t];
        const int pred = predicted[t];
        if (ref < 0 || ref >= k)
            throw InputError("unknown reference label " + std::to_string(ref) +
                             " at position " + std::to_string(t));
        if (pred == kUnclassifiedIndex) {
            ++matrix.excluded_unclassified;
            continue;
        }
        if (pred < 0 || pred >= k)
            throw InputError("unknown predicted label " + std::to_string(pred) +
                             " at position " + std::to_string(t));
        ++matrix.at(static_cast<std::size_t>(ref), static_cast<std::size_t>(pred));
        ++matrix.total;
    }
    if (matrix.total == 0)
        throw InputError("every prediction was unclassified; empty error matrix");
    return matrix;
}

ErrorMatrix build_error_matrix(const ClassRaster& reference,
                               const ClassRaster& predicted) {
    if (reference.rows != predicted.rows || reference.cols != predicted.cols)
        throw DimensionError("reference and predicted maps have different sizes");
    if (reference.classes != predicted.classes)
        throw InputError("reference and predicted maps have different class tables");

    std::vector<int> ref_idx(reference.values.size());
    std::vector<int> pred_idx(predicted.values.size());
    for (std::size_t p = 0; p < reference.values.size(); ++p) {
        const int ref = static_cast<int>(reference.values[p]) - 1;
        if (ref < 0)
            throw InputError("reference map contains unclassified pixels");
        ref_idx[p] = ref;
        pred_idx[p] = static_cast<int>(predicted.values[p]) - 1;  // 0 -> -1
    }
    return build_error_matrix(ref_idx, pred_idx, reference.classes);
}

namespace {

struct Marginals {
    double n = 0.0;
    double diagonal = 0.0;
    double chance = 0.0;  // sum_i rowsum_i * colsum_i
};

Marginals marginals_of(const ErrorMatrix& matrix) {
    const std::size_t k = matrix.class_count();
    Marginals m;
    m.n = static_cast<double>(matrix.total);
    for (std::size_t i = 0; i < k; ++i) {
        m.diagonal += static_cast<double>(matrix.at(i, i));
        double row = 0.0, col = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            row += static_cast<double>(matrix.at(i, j));
            col += static_cast<double>(matrix.at(j, i));
        }
        m.chance += row * col;
    }
    return m;
}

}  // namespace

double kappa(const ErrorMatrix& matrix) {
    if (matrix.total == 0) throw InputError("empty error matrix");
    const Marginals m = marginals_of(matrix);
    const double denominator = m.n * m.n - m.chance;
    if (denominator == 0.0)
        throw InputError("degenerate marginals: chance agreement is total");
    return (m.n * m.diagonal - m.chance) / denominator;
}

double overall_accuracy(const ErrorMatrix& matrix) {
    if (matrix.total == 0) throw InputError("empty error matrix");
    const Marginals m = marginals_of(matrix);
    return m.diagonal / m.n;
}

AccuracyReport accuracy_report(const ErrorMatrix& matrix) {
    const std::size_t k = matrix.class_count();
    AccuracyReport report;
    report.overall_accuracy = overall_accuracy(matrix);
    report.kappa = kappa(matrix);
    report.producers.resize(k);
    report.users.resize(k);
    for (std::size_t c = 0; c < k; ++c) {
        std::uint64_t row = 0, col = 0;
        for (std::size_t j = 0; j < k; ++j) {
            row += matrix.at(c, j);
            col += matrix.at(j, c);
        }
        if (row > 0)
            report.producers[c] =
                static_cast<double>(matrix.at(c, c)) / static_cast<double>(row);
        if (col > 0)
            report.users[c] =
                static_cast<double>(matrix.at(c, c)) / static_cast<double>(col);
    }
    return report;
}

std::string format_report(const ErrorMatrix& matrix) {
    const AccuracyReport report = accuracy_report(matrix);
    const std::size_t k = matrix.class_count();

    std::size_t name_width = 12;
    for (const auto& label : matrix.classes)
        name_width = std::max(name_width, label.name.size() + 2);
    std::size_t cell_width = 8;
    for (const auto& label : matrix.classes)
        cell_width = std::max(cell_width, label.name.size() + 2);

    std::ostringstream out;
    out << std::fixed << std::setprecision(4);
    out << "Error matrix (rows = reference, columns = predicted)\n";
    out << std::setw(static_cast<int>(name_width)) << "";
    for (const auto& label : matrix.classes)
        out << std::setw(static_cast<int>(cell_width)) << label.name;
    out << "\n";
    for (std::size_t i = 0; i < k; ++i) {
        out << std::setw(static_cast<int>(name_width)) << matrix.classes[i].name;
        for (std::size_t j = 0; j < k; ++j)
            out << std::setw(static_cast<int>(cell_width)) << matrix.at(i, j);
        out << "\n";
    }
    out << "Overall accuracy: " << report.overall_accuracy << "\n";
    out << "Kappa: " << report.kappa << "\n";
    out << std::setw(static_cast<int>(name_width)) << "Class"
        << std::setw(12) << "Producer's" << std::setw(12) << "User's" << "\n";
    for (std::size_t c = 0; c < k; ++c) {
        out << std::setw(static_cast<int>(name_width)) << matrix.classes[c].name;
        for (const auto& value : {report.producers[c], report.users[c]}) {
            if (value)
                out << std::setw(12) << *value;
            else
                out << std::setw(12) << "undefined";
        }
        out << "\n";
    }
    out << "Unclassified pixels excluded: " << matrix.excluded_unclassified << "\n";
    return out.str();
}

nlohmann::json report_json(const ErrorMatrix& matrix) {
    const AccuracyReport report = accuracy_report(matrix);
    const std::size_t k = matrix.class_count();

    nlohmann::json j;
    j["rows"] = "reference";
    j["columns"] = "predicted";
    j["classes"] = nlohmann::json::array();
    for (const auto& label : matrix.classes) j["classes"].push_back(label.name);
    j["counts"] = nlohmann::json::array();
    for (std::size_t i = 0; i < k; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t c = 0; c < k; ++c) row.push_back(matrix.at(i, c));
        j["counts"].push_back(row);
    }
    j["total"] = matrix.total;
    j["excluded_unclassified"] = matrix.excluded_unclassified;
    j["overall_accuracy"] = report.overall_accuracy;
    j["kappa"] = report.kappa;
    auto optional_array = [](const std::vector<std::optional<double>>& values) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& v : values) {
            if (v)
                arr.push_back(*v);
            else
                arr.push_back(nullptr);
        }
        return arr;
    };
    j["producers_accuracy"] = optional_array(report.producers);
    j["users_accuracy"] = optional_array(report.users);
    return j;
}

}  // namespace lcsvm
