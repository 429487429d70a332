#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "lcsvm/dataset.hpp"

namespace lcsvm {

// Multi-band image, band-sequential, 32-bit float samples.
struct Raster {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t bands = 0;
    std::vector<float> data;  // bands * rows * cols, band-sequential
    std::optional<float> nodata;

    float at(std::size_t band, std::size_t row, std::size_t col) const {
        return data[(band * rows + row) * cols + col];
    }
    float& at(std::size_t band, std::size_t row, std::size_t col) {
        return data[(band * rows + row) * cols + col];
    }

    // Band vector of one pixel, as doubles.
    void pixel(std::size_t row, std::size_t col, std::span<double> out) const;

    void validate() const;
    bool operator==(const Raster&) const = default;
};

// Per-pixel class codes: 0 = unclassified, 1..k = classes[c-1].
struct ClassRaster {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint8_t> values;
    std::vector<ClassLabel> classes;

    std::uint8_t at(std::size_t row, std::size_t col) const {
        return values[row * cols + col];
    }
    std::uint8_t& at(std::size_t row, std::size_t col) {
        return values[row * cols + col];
    }

    void validate() const;
    bool operator==(const ClassRaster&) const = default;
};

// ENVI-style text header + raw little-endian data file. The header path ends
// in ".hdr"; the data file is the same path without that extension. Only
// data types 1 (uint8) and 4 (float32), interleave bsq and byte order 0 are
// supported; anything else raises an explicit unsupported-feature error.
Raster read_raster(const std::filesystem::path& header_path);
void write_raster(const Raster& raster, const std::filesystem::path& header_path);

ClassRaster read_class_raster(const std::filesystem::path& header_path);
void write_class_raster(const ClassRaster& raster,
                        const std::filesystem::path& header_path);

// colors[0] renders unclassified pixels, colors[c] class code c.
struct ClassPalette {
    std::vector<std::array<std::uint8_t, 3>> colors;
};

// Text palette, one "classname R G B" entry per line; the name
// "unclassified" supplies colors[0]. Missing entries raise InputError.
ClassPalette read_palette(const std::filesystem::path& path,
                          const std::vector<ClassLabel>& classes);

// Deterministic fallback colors for class_count classes.
ClassPalette default_palette(std::size_t class_count);

// Binary PPM (P6), one RGB triple per pixel, row-major.
void render_ppm(const ClassRaster& raster, const ClassPalette& palette,
                const std::filesystem::path& path);

}  // namespace lcsvm
