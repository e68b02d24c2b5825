#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crlscore/errors.hpp"

namespace crlscore {

inline constexpr std::uint8_t kBackgroundLabel = 0;
inline constexpr std::uint8_t kHeadLabel = 1;
inline constexpr std::uint8_t kBodyLabel = 2;
inline constexpr std::uint8_t kPalateLabel = 3;
inline constexpr std::uint8_t kMaxLabel = 3;

// Integer pixel coordinate, x to the right, y downward (image convention).
struct PixelPoint {
    int x = 0;
    int y = 0;

    friend constexpr auto operator<=>(const PixelPoint&,
                                      const PixelPoint&) = default;
};

// Subpixel coordinate in the same frame as PixelPoint.
struct RealPoint {
    double x = 0.0;
    double y = 0.0;
};

// Dense per-pixel class map.  Valid values are the four region labels;
// construction rejects anything else.
class LabelMask {
public:
    LabelMask() = default;

    LabelMask(int width, int height, std::vector<std::uint8_t> labels);

    static LabelMask filled(int width, int height,
                            std::uint8_t value = kBackgroundLabel);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

    bool inside(int x, int y) const noexcept {
        return x >= 0 && x < width_ && y >= 0 && y < height_;
    }

    std::uint8_t at(int x, int y) const {
        return labels_[static_cast<std::size_t>(y) * width_ + x];
    }

    void set(int x, int y, std::uint8_t value) {
        labels_[static_cast<std::size_t>(y) * width_ + x] = value;
    }

    const std::vector<std::uint8_t>& labels() const noexcept { return labels_; }

    std::size_t count_label(std::uint8_t value) const noexcept;
    bool has_label(std::uint8_t value) const noexcept;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> labels_;
};

// Single-channel 8-bit grayscale image.
class GrayImage {
public:
    GrayImage() = default;

    GrayImage(int width, int height, std::vector<std::uint8_t> pixels);

    static GrayImage filled(int width, int height, std::uint8_t value = 0);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

    bool inside(int x, int y) const noexcept {
        return x >= 0 && x < width_ && y >= 0 && y < height_;
    }

    std::uint8_t at(int x, int y) const {
        return pixels_[static_cast<std::size_t>(y) * width_ + x];
    }

    void set(int x, int y, std::uint8_t value) {
        pixels_[static_cast<std::size_t>(y) * width_ + x] = value;
    }

    const std::vector<std::uint8_t>& pixels() const noexcept { return pixels_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

// Which way the fetal face is expected to point in a correctly acquired
// plane; Either disables the check direction-wise.
enum class ExpectedFace { Up, Down, Either };

// Observed face direction relative to the crown-rump baseline.
enum class FaceTag { Up, Down, OnLine };

const char* to_string(ExpectedFace face) noexcept;
const char* to_string(FaceTag tag) noexcept;
std::optional<ExpectedFace> parse_expected_face(const std::string& text);

// Per-case sidecar metadata; every field has a usable default so cases
// without a sidecar file still score.
struct ImageMeta {
    std::string image_id;
    std::optional<double> pixel_spacing_mm;  // > 0 when present
    ExpectedFace expected_face = ExpectedFace::Either;
};

}  // namespace crlscore
