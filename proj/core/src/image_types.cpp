#include "crlscore/image_types.hpp"

#include <algorithm>
#include <stdexcept>

namespace crlscore {

namespace {

void check_dims(int width, int height, std::size_t size) {
    if (width <= 0 || height <= 0)
        throw std::invalid_argument("image dimensions must be positive");
    if (size != static_cast<std::size_t>(width) * height)
        throw std::invalid_argument("pixel buffer size does not match dimensions");
}

}  // namespace

LabelMask::LabelMask(int width, int height, std::vector<std::uint8_t> labels)
    : width_(width), height_(height), labels_(std::move(labels)) {
    check_dims(width, height, labels_.size());
    for (std::uint8_t v : labels_) {
        if (v > kMaxLabel)
            throw LabelError("label value " + std::to_string(v) +
                             " outside supported range 0..3");
    }
}

LabelMask LabelMask::filled(int width, int height, std::uint8_t value) {
    return LabelMask(width, height,
                     std::vector<std::uint8_t>(
                         static_cast<std::size_t>(width) * height, value));
}

std::size_t LabelMask::count_label(std::uint8_t value) const noexcept {
    return static_cast<std::size_t>(
        std::count(labels_.begin(), labels_.end(), value));
}

bool LabelMask::has_label(std::uint8_t value) const noexcept {
    return std::find(labels_.begin(), labels_.end(), value) != labels_.end();
}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    check_dims(width, height, pixels_.size());
}

GrayImage GrayImage::filled(int width, int height, std::uint8_t value) {
    return GrayImage(width, height,
                     std::vector<std::uint8_t>(
                         static_cast<std::size_t>(width) * height, value));
}

const char* to_string(ExpectedFace face) noexcept {
    switch (face) {
        case ExpectedFace::Up: return "up";
        case ExpectedFace::Down: return "down";
        case ExpectedFace::Either: return "either";
    }
    return "either";
}

const char* to_string(FaceTag tag) noexcept {
    switch (tag) {
        case FaceTag::Up: return "up";
        case FaceTag::Down: return "down";
        case FaceTag::OnLine: return "on_line";
    }
    return "on_line";
}

std::optional<ExpectedFace> parse_expected_face(const std::string& text) {
    if (text == "up") return ExpectedFace::Up;
    if (text == "down") return ExpectedFace::Down;
    if (text == "either") return ExpectedFace::Either;
    return std::nullopt;
}

}  // namespace crlscore
