#include "lcsvm/raster.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace lcsvm {

void Raster::validate() const {
    if (rows == 0 || cols == 0 || bands == 0)
        throw InputError("raster dimensions must be positive");
    if (data.size() != rows * cols * bands)
        throw InputError("raster data length " + std::to_string(data.size()) +
                         " does not match " + std::to_string(rows) + "x" +
                         std::to_string(cols) + "x" + std::to_string(bands));
}

void Raster::pixel(std::size_t row, std::size_t col, std::span<double> out) const {
    for (std::size_t b = 0; b < bands; ++b)
        out[b] = static_cast<double>(at(b, row, col));
}

void ClassRaster::validate() const {
    if (rows == 0 || cols == 0)
        throw InputError("class raster dimensions must be positive");
    if (values.size() != rows * cols)
        throw InputError("class raster value count does not match dimensions");
    const std::uint8_t k = static_cast<std::uint8_t>(classes.size());
    for (std::uint8_t v : values)
        if (v > k)
            throw InputError("class code " + std::to_string(v) +
                             " exceeds class count " + std::to_string(k));
}

namespace {

struct EnviHeader {
    std::size_t samples = 0;  // cols
    std::size_t lines = 0;    // rows
    std::size_t bands = 0;
    int data_type = 0;  // 1 = uint8, 4 = float32
    std::string interleave = "bsq";
    int byte_order = 0;
    std::optional<float> ignore_value;
    std::vector<std::string> class_names;
};

std::filesystem::path data_path_for(const std::filesystem::path& header_path) {
    if (header_path.extension() != ".hdr")
        throw IoError("raster header path must end in .hdr: " + header_path.string());
    std::filesystem::path p = header_path;
    p.replace_extension();
    return p;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::string strip(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// "class names = {a, b, c}" may span lines in ENVI; we write it on one line
// and accept only that form.
std::vector<std::string> parse_name_list(const std::string& value) {
    std::string body = strip(value);
    if (body.size() < 2 || body.front() != '{' || body.back() != '}')
        throw IoError("malformed class names list in raster header");
    body = body.substr(1, body.size() - 2);
    std::vector<std::string> names;
    std::stringstream stream(body);
    std::string item;
    while (std::getline(stream, item, ',')) names.push_back(strip(item));
    return names;
}

EnviHeader read_header(const std::filesystem::path& header_path) {
    std::ifstream in(header_path);
    if (!in) throw IoError("cannot open raster header " + header_path.string());
    std::string line;
    EnviHeader h;
    bool magic_seen = false;
    while (std::getline(in, line)) {
        const std::string text = strip(line);
        if (text.empty()) continue;
        if (!magic_seen && lower(text) == "envi") {
            magic_seen = true;
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) continue;  // tolerate unknown syntax
        const std::string key = lower(strip(text.substr(0, eq)));
        const std::string value = strip(text.substr(eq + 1));
        try {
            if (key == "samples") h.samples = std::stoul(value);
            else if (key == "lines") h.lines = std::stoul(value);
            else if (key == "bands") h.bands = std::stoul(value);
            else if (key == "data type") h.data_type = std::stoi(value);
            else if (key == "interleave") h.interleave = lower(value);
            else if (key == "byte order") h.byte_order = std::stoi(value);
            else if (key == "data ignore value") h.ignore_value = std::stof(value);
            else if (key == "class names") h.class_names = parse_name_list(value);
        } catch (const std::logic_error&) {
            throw IoError("malformed value for '" + key + "' in " +
                          header_path.string());
        }
    }
    if (h.samples == 0 || h.lines == 0 || h.bands == 0)
        throw IoError("raster header missing samples/lines/bands: " +
                      header_path.string());
    if (h.interleave != "bsq")
        throw IoError("unsupported interleave '" + h.interleave +
                      "' (only bsq is supported)");
    if (h.byte_order != 0)
        throw IoError("unsupported byte order " + std::to_string(h.byte_order) +
                      " (only little-endian 0 is supported)");
    if (h.data_type != 1 && h.data_type != 4)
        throw IoError("unsupported data type " + std::to_string(h.data_type) +
                      " (only 1 = uint8 and 4 = float32 are supported)");
    return h;
}

std::vector<char> read_data_file(const std::filesystem::path& path,
                                 std::size_t expected_bytes) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open raster data file " + path.string());
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
    if (bytes.size() != expected_bytes)
        throw IoError("raster data file " + path.string() + " holds " +
                      std::to_string(bytes.size()) + " bytes, header implies " +
                      std::to_string(expected_bytes));
    return bytes;
}

void write_header(const std::filesystem::path& header_path, const EnviHeader& h) {
    std::ofstream out(header_path);
    if (!out) throw IoError("cannot write raster header " + header_path.string());
    out << "ENVI\n";
    out << "samples = " << h.samples << "\n";
    out << "lines = " << h.lines << "\n";
    out << "bands = " << h.bands << "\n";
    out << "data type = " << h.data_type << "\n";
    out << "interleave = bsq\n";
    out << "byte order = 0\n";
    if (h.ignore_value) {
        out.precision(9);
        out << "data ignore value = " << *h.ignore_value << "\n";
    }
    if (!h.class_names.empty()) {
        out << "classes = " << h.class_names.size() + 1 << "\n";
        out << "class names = {unclassified";
        for (const auto& name : h.class_names) out << ", " << name;
        out << "}\n";
    }
    if (!out) throw IoError("failed writing raster header " + header_path.string());
}

void write_bytes(const std::filesystem::path& path, const void* data,
                 std::size_t size) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write raster data file " + path.string());
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
    if (!out) throw IoError("failed writing raster data file " + path.string());
}

}  // namespace

Raster read_raster(const std::filesystem::path& header_path) {
    const EnviHeader h = read_header(header_path);
    if (h.data_type != 4)
        throw IoError("expected data type 4 (float32) for a feature raster");
    Raster raster;
    raster.rows = h.lines;
    raster.cols = h.samples;
    raster.bands = h.bands;
    raster.nodata = h.ignore_value;
    const std::size_t count = raster.rows * raster.cols * raster.bands;
    const auto bytes = read_data_file(data_path_for(header_path), count * 4);
    raster.data.resize(count);
    std::memcpy(raster.data.data(), bytes.data(), bytes.size());
    return raster;
}

void write_raster(const Raster& raster, const std::filesystem::path& header_path) {
    raster.validate();
    EnviHeader h;
    h.samples = raster.cols;
    h.lines = raster.rows;
    h.bands = raster.bands;
    h.data_type = 4;
    h.ignore_value = raster.nodata;
    write_header(header_path, h);
    write_bytes(data_path_for(header_path), raster.data.data(),
                raster.data.size() * 4);
}

ClassRaster read_class_raster(const std::filesystem::path& header_path) {
    const EnviHeader h = read_header(header_path);
    if (h.data_type != 1 || h.bands != 1)
        throw IoError("class raster must be data type 1 with a single band");
    ClassRaster raster;
    raster.rows = h.lines;
    raster.cols = h.samples;
    const std::size_t count = raster.rows * raster.cols;
    const auto bytes = read_data_file(data_path_for(header_path), count);
    raster.values.resize(count);
    std::memcpy(raster.values.data(), bytes.data(), count);

    if (!h.class_names.empty()) {
        // First entry in the written list is "unclassified".
        for (std::size_t c = 1; c < h.class_names.size(); ++c)
            raster.classes.push_back({static_cast<int>(c - 1), h.class_names[c]});
    } else {
        const std::uint8_t k =
            raster.values.empty()
                ? 0
                : *std::max_element(raster.values.begin(), raster.values.end());
        for (std::uint8_t c = 1; c <= k; ++c)
            raster.classes.push_back({c - 1, "class_" + std::to_string(c)});
    }
    raster.validate();
    return raster;
}

void write_class_raster(const ClassRaster& raster,
                        const std::filesystem::path& header_path) {
    raster.validate();
    EnviHeader h;
    h.samples = raster.cols;
    h.lines = raster.rows;
    h.bands = 1;
    h.data_type = 1;
    for (const auto& label : raster.classes) h.class_names.push_back(label.name);
    write_header(header_path, h);
    write_bytes(data_path_for(header_path), raster.values.data(),
                raster.values.size());
}

ClassPalette read_palette(const std::filesystem::path& path,
                          const std::vector<ClassLabel>& classes) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open palette file " + path.string());
    std::map<std::string, std::array<std::uint8_t, 3>> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = strip(line);
        if (text.empty() || text[0] == '#') continue;
        std::stringstream stream(text);
        std::string name;
        int r = -1, g = -1, b = -1;
        stream >> name >> r >> g >> b;
        if (stream.fail() || r < 0 || r > 255 || g < 0 || g > 255 || b < 0 || b > 255)
            throw ParseError("palette entries are 'classname R G B'", line_no);
        entries[name] = {static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                         static_cast<std::uint8_t>(b)};
    }

    ClassPalette palette;
    const auto unclassified = entries.find("unclassified");
    if (unclassified == entries.end())
        throw InputError("palette is missing the 'unclassified' entry");
    palette.colors.push_back(unclassified->second);
    for (const auto& label : classes) {
        const auto it = entries.find(label.name);
        if (it == entries.end())
            throw InputError("palette is missing class '" + label.name + "'");
        palette.colors.push_back(it->second);
    }
    return palette;
}

ClassPalette default_palette(std::size_t class_count) {
    // Fixed land-cover-ish cycle; unclassified is black.
    static constexpr std::array<std::array<std::uint8_t, 3>, 10> cycle = {{
        {31, 119, 255},   // blue
        {214, 39, 40},    // red
        {44, 160, 44},    // green
        {148, 103, 189},  // purple
        {255, 127, 14},   // orange
        {23, 190, 207},   // cyan
        {188, 189, 34},   // olive
        {227, 119, 194},  // pink
        {140, 86, 75},    // brown
        {127, 127, 127},  // grey
    }};
    ClassPalette palette;
    palette.colors.push_back({0, 0, 0});
    for (std::size_t c = 0; c < class_count; ++c)
        palette.colors.push_back(cycle[c % cycle.size()]);
    return palette;
}

void render_ppm(const ClassRaster& raster, const ClassPalette& palette,
                const std::filesystem::path& path) {
    raster.validate();
    if (palette.colors.size() < raster.classes.size() + 1)
        throw InputError("palette covers " + std::to_string(palette.colors.size()) +
                         " codes, class raster needs " +
                         std::to_string(raster.classes.size() + 1));
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write image " + path.string());
    out << "P6\n" << raster.cols << " " << raster.rows << "\n255\n";
    std::vector<std::uint8_t> scanline(raster.cols * 3);
    for (std::size_t r = 0; r < raster.rows; ++r) {
        for (std::size_t c = 0; c < raster.cols; ++c) {
            const auto& rgb = palette.colors[raster.at(r, c)];
            scanline[c * 3 + 0] = rgb[0];
            scanline[c * 3 + 1] = rgb[1];
            scanline[c * 3 + 2] = rgb[2];
        }
        out.write(reinterpret_cast<const char*>(scanline.data()),
                  static_cast<std::streamsize>(scanline.size()));
    }
    if (!out) throw IoError("failed writing image " + path.string());
}

}  // namespace lcsvm
