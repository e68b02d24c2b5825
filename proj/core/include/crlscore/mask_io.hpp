#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "crlscore/image_types.hpp"

namespace crlscore {

// One scoring case on disk: <id>.mask.png is required, frame and metadata
// sidecars are optional.
struct CasePaths {
    std::filesystem::path mask;
    std::filesystem::path frame;
    std::filesystem::path meta;
};

CasePaths case_paths(const std::filesystem::path& dir, const std::string& id);

// Sorted ids of every *.mask.png in `dir` (non-recursive).
std::vector<std::string> discover_case_ids(const std::filesystem::path& dir);

struct Case {
    LabelMask mask;
    std::optional<GrayImage> frame;
    ImageMeta meta;
};

// Loads a label mask from a single-channel 8-bit PNG whose pixel values are
// the region labels.  Multi-channel or 16-bit files are rejected rather than
// coerced.  Throws DecodeError / LabelError.
LabelMask load_mask(const std::filesystem::path& path);

// Loads a grayscale frame; same strictness as load_mask.
GrayImage load_frame(const std::filesystem::path& path);

// Loads the JSON sidecar.  Missing optional keys fall back to defaults;
// malformed JSON, wrong types, unknown keys or non-positive spacing throw
// DecodeError.
ImageMeta load_meta(const std::filesystem::path& path);

// Loads mask plus whichever sidecars exist next to it.  A frame that does
// not match the mask size throws DimensionMismatch.  When the metadata file
// is absent the image id defaults to the mask filename stem.
Case load_case(const CasePaths& paths);

void save_mask(const LabelMask& mask, const std::filesystem::path& path);
void save_frame(const GrayImage& frame, const std::filesystem::path& path);
void save_meta(const ImageMeta& meta, const std::filesystem::path& path);

}  // namespace crlscore
