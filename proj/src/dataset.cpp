#include "lcsvm/dataset.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace lcsvm {

void SampleSet::validate() const {
    if (labels.size() != features.size())
        throw InputError("sample set has " + std::to_string(features.size()) +
                         " feature rows but " + std::to_string(labels.size()) +
                         " labels");
    for (std::size_t i = 0; i < classes.size(); ++i) {
        if (classes[i].index != static_cast<int>(i))
            throw InputError("class indices must be contiguous from 0");
        for (std::size_t j = 0; j < i; ++j)
            if (classes[j].name == classes[i].name)
                throw InputError("duplicate class name '" + classes[i].name + "'");
    }
    for (int label : labels)
        if (label < 0 || label >= static_cast<int>(classes.size()))
            throw InputError("sample label " + std::to_string(label) +
                             " outside the class table");
    if (!band_names.empty() && band_names.size() != features.dim)
        throw InputError("band name count does not match feature dimension");
}

std::vector<std::vector<std::size_t>> SampleSet::indices_by_class() const {
    std::vector<std::vector<std::size_t>> out(classes.size());
    for (std::size_t i = 0; i < labels.size(); ++i)
        out[static_cast<std::size_t>(labels[i])].push_back(i);
    return out;
}

SampleSet SampleSet::subset(const std::vector<std::size_t>& indices) const {
    SampleSet out;
    out.classes = classes;
    out.band_names = band_names;
    out.features = FeatureMatrix(features.dim);
    out.labels.reserve(indices.size());
    for (std::size_t i : indices) {
        out.features.push_row(features.row(i));
        out.labels.push_back(labels[i]);
    }
    return out;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream stream(line);
    while (std::getline(stream, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_feature(const std::string& raw, std::size_t line_no) {
    const std::string text = trim(raw);
    if (text.empty()) throw ParseError("empty feature field", line_no);
    errno = 0;
    char* end = nullptr;
    const double value = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || errno != 0)
        throw ParseError("non-numeric feature value '" + text + "'", line_no);
    if (!std::isfinite(value))
        throw ParseError("non-finite feature value '" + text + "'", line_no);
    return value;
}

}  // namespace

SampleSet read_samples_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open sample file " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty sample file", 1);
    const auto header = split_fields(line);
    if (header.size() < 2 || trim(header.back()) != "label")
        throw ParseError("header must be band columns followed by 'label'", 1);

    SampleSet samples;
    samples.features = FeatureMatrix(header.size() - 1);
    for (std::size_t b = 0; b + 1 < header.size(); ++b)
        samples.band_names.push_back(trim(header[b]));

    std::map<std::string, int> class_index;
    std::vector<double> row(samples.features.dim);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) throw ParseError("blank data row", line_no);
        const auto fields = split_fields(line);
        if (fields.size() != header.size())
            throw ParseError("row has " + std::to_string(fields.size()) +
                                 " fields, expected " + std::to_string(header.size()),
                             line_no);
        for (std::size_t b = 0; b < row.size(); ++b)
            row[b] = parse_feature(fields[b], line_no);
        const std::string name = trim(fields.back());
        if (name.empty()) throw ParseError("empty class label", line_no);

        auto [it, inserted] =
            class_index.try_emplace(name, static_cast<int>(samples.classes.size()));
        if (inserted)
            samples.classes.push_back({it->second, name});
        samples.features.push_row(row);
        samples.labels.push_back(it->second);
    }
    if (samples.labels.empty())
        throw ParseError("sample file contains no data rows", line_no);
    samples.validate();
    return samples;
}

void write_samples_csv(const SampleSet& samples, const std::filesystem::path& path) {
    samples.validate();
    std::ofstream out(path);
    if (!out) throw IoError("cannot write sample file " + path.string());
    out.precision(17);
    for (std::size_t b = 0; b < samples.dim(); ++b) {
        if (b) out << ',';
        out << (samples.band_names.empty() ? "b" + std::to_string(b + 1)
                                           : samples.band_names[b]);
    }
    out << ",label\n";
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto row = samples.features.row(i);
        for (double v : row) out << v << ',';
        out << samples.classes[static_cast<std::size_t>(samples.labels[i])].name
            << '\n';
    }
    if (!out) throw IoError("failed writing sample file " + path.string());
}

FeatureVector Scaler::apply(std::span<const double> x) const {
    if (x.size() != means.size())
        throw DimensionError("scaler expects dimension " +
                             std::to_string(means.size()) + ", got " +
                             std::to_string(x.size()));
    FeatureVector out(x.size());
    for (std::size_t b = 0; b < x.size(); ++b)
        out[b] = (x[b] - means[b]) / stds[b];
    return out;
}

void Scaler::apply_in_place(FeatureMatrix& features) const {
    if (features.dim != means.size())
        throw DimensionError("scaler expects dimension " +
                             std::to_string(means.size()) + ", got " +
                             std::to_string(features.dim));
    const std::size_t n = features.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t b = 0; b < features.dim; ++b) {
            double& v = features.values[i * features.dim + b];
            v = (v - means[b]) / stds[b];
        }
}

Scaler fit_scaler(const FeatureMatrix& features) {
    const std::size_t n = features.size();
    if (n == 0) throw InputError("cannot fit scaler on an empty sample set");
    Scaler scaler;
    scaler.means.assign(features.dim, 0.0);
    scaler.stds.assign(features.dim, 1.0);
    for (std::size_t b = 0; b < features.dim; ++b) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            sum += features.values[i * features.dim + b];
        const double mean = sum / static_cast<double>(n);
        double varsum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = features.values[i * features.dim + b] - mean;
            varsum += d * d;
        }
        const double std = std::sqrt(varsum / static_cast<double>(n));
        scaler.means[b] = mean;
        // Constant bands keep std = 1; the threshold is relative because a
        // constant column can still produce a tiny nonzero variance.
        scaler.stds[b] = (std <= 1e-12 * (1.0 + std::abs(mean))) ? 1.0 : std;
    }
    return scaler;
}

}  // namespace lcsvm
