#include "crlscore/mask_io.hpp"

#include <png.h>

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

#include <nlohmann/json.hpp>

#include "crlscore/errors.hpp"

namespace crlscore {

namespace {

constexpr const char* kMaskSuffix = ".mask.png";
constexpr const char* kFrameSuffix = ".frame.png";
constexpr const char* kMetaSuffix = ".meta.json";

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// Reads a PNG, requiring exactly the 8-bit single-channel grayscale layout.
// Anything else (palette, RGB, alpha, 16-bit, sub-byte gray) is rejected:
// silently coercing a mask would corrupt labels.
std::vector<std::uint8_t> read_gray8_png(const std::filesystem::path& path,
                                         int& width, int& height) {
    FilePtr file(std::fopen(path.string().c_str(), "rb"));
    if (!file) throw DecodeError("cannot open " + path.string());

    unsigned char sig[8];
    if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8))
        throw DecodeError(path.string() + " is not a PNG file");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                             nullptr, nullptr);
    if (!png) throw DecodeError("libpng allocation failure");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw DecodeError("libpng allocation failure");
    }

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DecodeError("failed to decode " + path.string());
    }

    png_init_io(png, file.get());
    png_set_sig_bytes(png, 8);
    png_read_png(png, info, PNG_TRANSFORM_IDENTITY, nullptr);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    const int depth = png_get_bit_depth(png, info);
    const int color = png_get_color_type(png, info);

    if (color != PNG_COLOR_TYPE_GRAY || depth != 8) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DecodeError(path.string() +
                          ": expected single-channel 8-bit grayscale PNG");
    }

    png_bytepp rows = png_get_rows(png, info);
    std::vector<std::uint8_t> pixels(static_cast<std::size_t>(w) * h);
    for (png_uint_32 y = 0; y < h; ++y)
        std::copy_n(rows[y], w, pixels.begin() + static_cast<std::size_t>(y) * w);

    png_destroy_read_struct(&png, &info, nullptr);
    width = static_cast<int>(w);
    height = static_cast<int>(h);
    return pixels;
}

void write_gray8_png(const std::filesystem::path& path, int width, int height,
                     const std::vector<std::uint8_t>& pixels) {
    FilePtr file(std::fopen(path.string().c_str(), "wb"));
    if (!file) throw DecodeError("cannot open " + path.string() + " for writing");

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                              nullptr, nullptr);
    if (!png) throw DecodeError("libpng allocation failure");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw DecodeError("libpng allocation failure");
    }

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw DecodeError("failed to encode " + path.string());
    }

    png_init_io(png, file.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(width),
                 static_cast<png_uint_32>(height), 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    std::vector<png_bytep> rows(static_cast<std::size_t>(height));
    for (int y = 0; y < height; ++y)
        rows[y] = const_cast<png_bytep>(pixels.data() +
                                        static_cast<std::size_t>(y) * width);
    png_write_image(png, rows.data());
    png_write_end(png, info);
    png_destroy_write_struct(&png, &info);
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

CasePaths case_paths(const std::filesystem::path& dir, const std::string& id) {
    return {dir / (id + kMaskSuffix), dir / (id + kFrameSuffix),
            dir / (id + kMetaSuffix)};
}

std::vector<std::string> discover_case_ids(const std::filesystem::path& dir) {
    std::vector<std::string> ids;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (ends_with(name, kMaskSuffix))
            ids.push_back(name.substr(0, name.size() - std::strlen(kMaskSuffix)));
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

LabelMask load_mask(const std::filesystem::path& path) {
    int w = 0, h = 0;
    std::vector<std::uint8_t> pixels = read_gray8_png(path, w, h);
    try {
        return LabelMask(w, h, std::move(pixels));
    } catch (const LabelError& e) {
        throw LabelError(path.string() + ": " + e.what());
    }
}

GrayImage load_frame(const std::filesystem::path& path) {
    int w = 0, h = 0;
    std::vector<std::uint8_t> pixels = read_gray8_png(path, w, h);
    return GrayImage(w, h, std::move(pixels));
}

ImageMeta load_meta(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DecodeError("cannot open " + path.string());

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw DecodeError(path.string() + ": " + e.what());
    }
    if (!doc.is_object())
        throw DecodeError(path.string() + ": metadata must be a JSON object");

    ImageMeta meta;
    for (const auto& [key, value] : doc.items()) {
        if (key == "image_id") {
            if (!value.is_string())
                throw DecodeError(path.string() + ": image_id must be a string");
            meta.image_id = value.get<std::string>();
        } else if (key == "pixel_spacing_mm") {
            if (!value.is_number())
                throw DecodeError(path.string() +
                                  ": pixel_spacing_mm must be a number");
            const double spacing = value.get<double>();
            if (!(spacing > 0.0))
                throw DecodeError(path.string() +
                                  ": pixel_spacing_mm must be positive");
            meta.pixel_spacing_mm = spacing;
        } else if (key == "expected_face") {
            if (!value.is_string())
                throw DecodeError(path.string() +
                                  ": expected_face must be a string");
            const auto face = parse_expected_face(value.get<std::string>());
            if (!face)
                throw DecodeError(path.string() +
                                  ": expected_face must be up, down or either");
            meta.expected_face = *face;
        } else {
            throw DecodeError(path.string() + ": unknown metadata key \"" +
                              key + "\"");
        }
    }
    return meta;
}

Case load_case(const CasePaths& paths) {
    Case c;
    c.mask = load_mask(paths.mask);

    if (std::filesystem::exists(paths.frame)) {
        GrayImage frame = load_frame(paths.frame);
        if (frame.width() != c.mask.width() || frame.height() != c.mask.height())
            throw DimensionMismatch(
                paths.frame.string() + ": frame " +
                std::to_string(frame.width()) + "x" +
                std::to_string(frame.height()) + " does not match mask " +
                std::to_string(c.mask.width()) + "x" +
                std::to_string(c.mask.height()));
        c.frame = std::move(frame);
    }

    if (std::filesystem::exists(paths.meta)) c.meta = load_meta(paths.meta);

    if (c.meta.image_id.empty()) {
        std::string name = paths.mask.filename().string();
        if (ends_with(name, kMaskSuffix))
            name = name.substr(0, name.size() - std::strlen(kMaskSuffix));
        c.meta.image_id = name;
    }
    return c;
}

void save_mask(const LabelMask& mask, const std::filesystem::path& path) {
    write_gray8_png(path, mask.width(), mask.height(), mask.labels());
}

void save_frame(const GrayImage& frame, const std::filesystem::path& path) {
    write_gray8_png(path, frame.width(), frame.height(), frame.pixels());
}

void save_meta(const ImageMeta& meta, const std::filesystem::path& path) {
    std::ostringstream out;
    out << "{\n  \"image_id\": " << nlohmann::json(meta.image_id).dump();
    if (meta.pixel_spacing_mm) {
        out << ",\n  \"pixel_spacing_mm\": "
            << nlohmann::json(*meta.pixel_spacing_mm).dump();
    }
    out << ",\n  \"expected_face\": \"" << to_string(meta.expected_face)
        << "\"\n}\n";

    std::ofstream file(path, std::ios::binary);
    if (!file) throw DecodeError("cannot open " + path.string() + " for writing");
    file << out.str();
}

}  // namespace crlscore
