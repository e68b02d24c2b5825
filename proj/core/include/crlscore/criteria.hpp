#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>

#include "crlscore/geometry.hpp"
#include "crlscore/image_types.hpp"

namespace crlscore {

// Tunable thresholds for the seven plane-quality criteria.  Defaults encode
// the clinical protocol; a JSON config may override any subset of keys.
struct CriteriaConfig {
    double neutral_low_deg = 144.64;        // inclusive flexion band
    double neutral_high_deg = 162.88;
    double horizontal_limit_deg = 15.0;     // |alpha| <= limit passes
    double magnification_threshold = 0.60;  // strictly greater passes
    int palate_min_pixels = 5;
    int caliper_box_w = 10;
    int caliper_box_h = 5;
    int caliper_black_max_intensity = 0;    // <= counts as black

    void validate() const;  // throws DecodeError on out-of-range values

    static CriteriaConfig from_json_text(const std::string& text);
    static CriteriaConfig from_json_file(const std::filesystem::path& path);
};

// c1: neck flexion within the neutral band (inclusive on both edges).
bool eval_neutral(double beta_deg, const CriteriaConfig& cfg);

// c2: baseline within the horizontal tolerance (inclusive).
bool eval_horizontal(double alpha_deg, const CriteriaConfig& cfg);

// c3: palate region large enough to witness a midsagittal section.
bool eval_midsagittal(const LabelMask& mask, const CriteriaConfig& cfg);

// c4: baseline horizontal extent as a fraction of image width; passes when
// strictly greater than the threshold.
struct Magnification {
    bool passed = false;
    double fraction = 0.0;
};
Magnification eval_magnification(const RealPoint& a, const RealPoint& b,
                                 int image_width, const CriteriaConfig& cfg);

// c5/c6: majority-black sample box just beyond a baseline endpoint, on its
// outward horizontal side.  nullopt when the box lies fully outside the
// frame (criterion unevaluable).
std::optional<bool> eval_caliper_visibility(const PixelPoint& endpoint,
                                            const RealPoint& outward,
                                            const GrayImage& frame,
                                            const CriteriaConfig& cfg);

// c7: observed face side against the expectation.  With Either, any
// off-line side passes.
struct FaceEval {
    bool passed = false;
    FaceTag tag = FaceTag::OnLine;
};
FaceEval eval_face(int face_side, ExpectedFace expected);

// Full per-image outcome.  Criteria 5/6 are tri-state: disengaged entries
// (no frame, box off-image) count as failed in the score but are reported
// distinctly.
struct ScoreCard {
    std::string image_id;

    bool c1_neutral = false;
    bool c2_horizontal = false;
    bool c3_midsagittal = false;
    bool c4_magnification = false;
    std::optional<bool> c5_left_caliper;
    std::optional<bool> c6_right_caliper;
    bool c7_face = false;

    int score = 0;            // 0..7
    bool acceptable = false;  // score >= kAcceptanceThreshold

    double crl_px = 0.0;
    std::optional<double> crl_mm;
    double alpha_deg = 0.0;
    double beta_deg = 0.0;
    double magnification_fraction = 0.0;
    FaceTag face_tag = FaceTag::OnLine;

    // Recomputes score and acceptable from the seven criterion slots.
    void finalize();

    std::array<bool, 7> criteria_bits() const;
};

inline constexpr int kAcceptanceThreshold = 4;

// Scores one case end to end.  `frame` may be null (calipers unevaluable).
// Throws DimensionMismatch when frame and mask sizes differ, and the
// geometry errors for structurally deficient masks.
ScoreCard score_image(const LabelMask& mask, const GrayImage* frame,
                      const ImageMeta& meta, const CriteriaConfig& cfg);

}  // namespace crlscore
