#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "lcsvm/dataset.hpp"

using namespace lcsvm;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("lcsvm_dataset_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path file(const std::string& name) const { return path / name; }
};

fs::path write_text(const TempDir& dir, const std::string& name,
                    const std::string& content) {
    const fs::path p = dir.file(name);
    std::ofstream out(p);
    out << content;
    return p;
}

}  // namespace

TEST_SUITE("dataset") {

TEST_CASE("minimal two-row file") {
    TempDir dir;
    const auto p = write_text(dir, "ok.csv",
                              "b1,b2,label\n"
                              "1.0,2.0,water\n"
                              "3.0,4.5,water\n");
    const SampleSet samples = read_samples_csv(p);
    CHECK(samples.size() == 2);
    CHECK(samples.dim() == 2);
    CHECK(samples.classes.size() == 1);
    CHECK(samples.classes[0].name == "water");
    CHECK(samples.features.row(1)[1] == 4.5);
    CHECK(samples.band_names == std::vector<std::string>{"b1", "b2"});
}

TEST_CASE("class indices follow first appearance") {
    TempDir dir;
    const auto p = write_text(dir, "order.csv",
                              "b1,label\n"
                              "0,water\n"
                              "1,builtup\n"
                              "2,water\n");
    const SampleSet samples = read_samples_csv(p);
    REQUIRE(samples.classes.size() == 2);
    CHECK(samples.classes[0] == ClassLabel{0, "water"});
    CHECK(samples.classes[1] == ClassLabel{1, "builtup"});
    CHECK(samples.labels == std::vector<int>{0, 1, 0});
}

TEST_CASE("malformed files are rejected with line numbers") {
    TempDir dir;

    const auto check_line = [](const fs::path& p, std::size_t expected_line) {
        try {
            read_samples_csv(p);
            FAIL("expected a parse error for ", p.filename().string());
        } catch (const ParseError& e) {
            CHECK(e.line() == expected_line);
        }
    };

    check_line(write_text(dir, "empty.csv", ""), 1);
    check_line(write_text(dir, "header_only.csv", "b1,label\n"), 1);
    check_line(write_text(dir, "no_label_column.csv", "b1,b2\n1,2\n"), 1);
    check_line(write_text(dir, "no_bands.csv", "label\nwater\n"), 1);
    check_line(write_text(dir, "short_row.csv", "b1,b2,label\n1.0,water\n"), 2);
    check_line(write_text(dir, "long_row.csv", "b1,label\n1.0,2.0,water\n"), 2);
    check_line(
        write_text(dir, "bad_number.csv", "b1,label\n1.0,water\nx7,water\n"), 3);
    check_line(write_text(dir, "nan_feature.csv", "b1,label\nnan,water\n"), 2);
    check_line(write_text(dir, "inf_feature.csv", "b1,label\ninf,water\n"), 2);
    check_line(write_text(dir, "blank_row.csv", "b1,label\n1.0,water\n\n2.0,water\n"),
               3);
    check_line(write_text(dir, "empty_label.csv", "b1,label\n1.0,\n"), 2);
    check_line(write_text(dir, "empty_feature.csv", "b1,b2,label\n1.0,,water\n"), 2);
}

TEST_CASE("missing file raises an io error") {
    CHECK_THROWS_AS(read_samples_csv("/nonexistent/samples.csv"), IoError);
}

TEST_CASE("samples roundtrip through csv") {
    TempDir dir;
    SampleSet samples;
    samples.features = FeatureMatrix(2);
    samples.features.push_row(std::vector<double>{0.125, -3.5});
    samples.features.push_row(std::vector<double>{1e-9, 42.0});
    samples.labels = {0, 1};
    samples.classes = {{0, "water"}, {1, "builtup"}};
    const auto p = dir.file("roundtrip.csv");
    write_samples_csv(samples, p);
    const SampleSet back = read_samples_csv(p);
    CHECK(back.features == samples.features);
    CHECK(back.labels == samples.labels);
    CHECK(back.classes == samples.classes);
}

TEST_CASE("scaler on {1,3} gives mean 2 and population std 1") {
    FeatureMatrix features(1);
    features.push_row(std::vector<double>{1.0});
    features.push_row(std::vector<double>{3.0});
    const Scaler scaler = fit_scaler(features);
    CHECK(scaler.means[0] == 2.0);
    CHECK(scaler.stds[0] == 1.0);
    CHECK(scaler.apply(std::vector<double>{1.0})[0] == -1.0);
    CHECK(scaler.apply(std::vector<double>{3.0})[0] == 1.0);
}

TEST_CASE("constant bands scale to zero") {
    FeatureMatrix features(1);
    for (int i = 0; i < 3; ++i) features.push_row(std::vector<double>{5.0});
    const Scaler scaler = fit_scaler(features);
    CHECK(scaler.stds[0] == 1.0);
    CHECK(scaler.apply(std::vector<double>{5.0})[0] == 0.0);
}

TEST_CASE("a constant band with non-representable mean still scales to zero") {
    FeatureMatrix features(1);
    for (int i = 0; i < 7; ++i) features.push_row(std::vector<double>{0.1});
    const Scaler scaler = fit_scaler(features);
    CHECK(scaler.stds[0] == 1.0);
    CHECK(std::abs(scaler.apply(std::vector<double>{0.1})[0]) <= 1e-15);
}

TEST_CASE("applying the scaler to the mean vector yields zeros") {
    FeatureMatrix features(2);
    features.push_row(std::vector<double>{1.0, 10.0});
    features.push_row(std::vector<double>{2.0, 20.0});
    features.push_row(std::vector<double>{3.0, 30.0});
    const Scaler scaler = fit_scaler(features);
    const auto zeros = scaler.apply(scaler.means);
    for (double v : zeros) CHECK(v == 0.0);
}

TEST_CASE("fitted scaler standardizes the training set") {
    FeatureMatrix features(3);
    for (int i = 0; i < 40; ++i)
        features.push_row(std::vector<double>{0.3 * i, 100.0 - i, 7.0});
    const Scaler scaler = fit_scaler(features);
    FeatureMatrix scaled = features;
    scaler.apply_in_place(scaled);
    for (std::size_t b = 0; b < 3; ++b) {
        double mean = 0.0;
        for (std::size_t i = 0; i < scaled.size(); ++i) mean += scaled.row(i)[b];
        mean /= static_cast<double>(scaled.size());
        CHECK(std::abs(mean) <= 1e-9);
        double var = 0.0;
        for (std::size_t i = 0; i < scaled.size(); ++i)
            var += (scaled.row(i)[b] - mean) * (scaled.row(i)[b] - mean);
        const double std = std::sqrt(var / static_cast<double>(scaled.size()));
        if (b == 2)
            CHECK(std == 0.0);  // constant band
        else
            CHECK(std::abs(std - 1.0) <= 1e-9);
    }
}

TEST_CASE("scaler rejects dimension mismatches") {
    FeatureMatrix features(2);
    features.push_row(std::vector<double>{1.0, 2.0});
    const Scaler scaler = fit_scaler(features);
    CHECK_THROWS_AS(scaler.apply(std::vector<double>{1.0}), DimensionError);
}

}  // TEST_SUITE
