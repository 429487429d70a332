#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lcsvm/kernels.hpp"

namespace lcsvm {

struct ClassLabel {
    int index = 0;
    std::string name;
    bool operator==(const ClassLabel&) const = default;
};

// Labeled training pixels. labels[i] indexes into classes.
struct SampleSet {
    FeatureMatrix features;
    std::vector<int> labels;
    std::vector<ClassLabel> classes;
    std::vector<std::string> band_names;  // optional, empty when unknown

    std::size_t size() const { return labels.size(); }
    std::size_t dim() const { return features.dim; }
    void validate() const;  // throws InputError

    // Index lists per class, in dataset order.
    std::vector<std::vector<std::size_t>> indices_by_class() const;

    SampleSet subset(const std::vector<std::size_t>& indices) const;
};

// CSV with header "b1,...,bd,label"; the last column is the class name.
// Class indices follow first appearance order. Parse failures carry line
// numbers.
SampleSet read_samples_csv(const std::filesystem::path& path);
void write_samples_csv(const SampleSet& samples, const std::filesystem::path& path);

// Per-band z-score parameters (population std; constant bands keep std = 1).
struct Scaler {
    std::vector<double> means;
    std::vector<double> stds;

    std::size_t dim() const { return means.size(); }
    FeatureVector apply(std::span<const double> x) const;
    void apply_in_place(FeatureMatrix& features) const;
    bool operator==(const Scaler&) const = default;
};

Scaler fit_scaler(const FeatureMatrix& features);

}  // namespace lcsvm
