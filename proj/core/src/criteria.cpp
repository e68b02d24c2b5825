#include "crlscore/criteria.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "crlscore/errors.hpp"

namespace crlscore {

namespace {

double require_number(const nlohmann::json& value, const char* key) {
    if (!value.is_number())
        throw DecodeError(std::string("config key \"") + key +
                          "\" must be a number");
    return value.get<double>();
}

int require_int(const nlohmann::json& value, const char* key) {
    if (!value.is_number_integer())
        throw DecodeError(std::string("config key \"") + key +
                          "\" must be an integer");
    return value.get<int>();
}

}  // namespace

void CriteriaConfig::validate() const {
    if (!(neutral_low_deg < neutral_high_deg))
        throw DecodeError("neutral band is empty: low must be below high");
    if (neutral_low_deg < 0.0 || neutral_high_deg > 180.0)
        throw DecodeError("neutral band must lie within [0, 180] degrees");
    if (!(horizontal_limit_deg > 0.0) || horizontal_limit_deg > 90.0)
        throw DecodeError("horizontal limit must be in (0, 90] degrees");
    if (!(magnification_threshold > 0.0) || magnification_threshold >= 1.0)
        throw DecodeError("magnification threshold must be in (0, 1)");
    if (palate_min_pixels < 1)
        throw DecodeError("palate_min_pixels must be at least 1");
    if (caliper_box_w < 1 || caliper_box_h < 1)
        throw DecodeError("caliper box dimensions must be at least 1");
    if (caliper_black_max_intensity < 0 || caliper_black_max_intensity > 255)
        throw DecodeError("caliper_black_max_intensity must be in [0, 255]");
}

CriteriaConfig CriteriaConfig::from_json_text(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DecodeError(std::string("config: ") + e.what());
    }
    if (!doc.is_object()) throw DecodeError("config must be a JSON object");

    CriteriaConfig cfg;
    for (const auto& [key, value] : doc.items()) {
        if (key == "neutral_low_deg")
            cfg.neutral_low_deg = require_number(value, key.c_str());
        else if (key == "neutral_high_deg")
            cfg.neutral_high_deg = require_number(value, key.c_str());
        else if (key == "horizontal_limit_deg")
            cfg.horizontal_limit_deg = require_number(value, key.c_str());
        else if (key == "magnification_threshold")
            cfg.magnification_threshold = require_number(value, key.c_str());
        else if (key == "palate_min_pixels")
            cfg.palate_min_pixels = require_int(value, key.c_str());
        else if (key == "caliper_box_w")
            cfg.caliper_box_w = require_int(value, key.c_str());
        else if (key == "caliper_box_h")
            cfg.caliper_box_h = require_int(value, key.c_str());
        else if (key == "caliper_black_max_intensity")
            cfg.caliper_black_max_intensity = require_int(value, key.c_str());
        else
            throw DecodeError("unknown config key \"" + key + "\"");
    }
    cfg.validate();
    return cfg;
}

CriteriaConfig CriteriaConfig::from_json_file(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DecodeError("cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return from_json_text(text);
}

bool eval_neutral(double beta_deg, const CriteriaConfig& cfg) {
    return beta_deg >= cfg.neutral_low_deg && beta_deg <= cfg.neutral_high_deg;
}

bool eval_horizontal(double alpha_deg, const CriteriaConfig& cfg) {
    return std::abs(alpha_deg) <= cfg.horizontal_limit_deg;
}

bool eval_midsagittal(const LabelMask& mask, const CriteriaConfig& cfg) {
    return mask.count_label(kPalateLabel) >=
           static_cast<std::size_t>(cfg.palate_min_pixels);
}

Magnification eval_magnification(const RealPoint& a, const RealPoint& b,
                                 int image_width, const CriteriaConfig& cfg) {
    Magnification m;
    m.fraction = std::abs(a.x - b.x) / image_width;
    m.passed = m.fraction > cfg.magnification_threshold;
    return m;
}

std::optional<bool> eval_caliper_visibility(const PixelPoint& endpoint,
                                            const RealPoint& outward,
                                            const GrayImage& frame,
                                            const CriteriaConfig& cfg) {
    // The box sits on the outward horizontal side of the endpoint, one
    // pixel beyond it, vertically centred on the endpoint row.
    const int side = outward.x >= 0.0 ? 1 : -1;
    const int x0 = side > 0 ? endpoint.x + 1 : endpoint.x - cfg.caliper_box_w;
    const int x1 = side > 0 ? endpoint.x + cfg.caliper_box_w : endpoint.x - 1;
    const int y0 = endpoint.y - cfg.caliper_box_h / 2;
    const int y1 = y0 + cfg.caliper_box_h - 1;

    long sampled = 0;
    long black = 0;
    for (int y = std::max(y0, 0); y <= std::min(y1, frame.height() - 1); ++y) {
        for (int x = std::max(x0, 0); x <= std::min(x1, frame.width() - 1);
             ++x) {
            ++sampled;
            if (frame.at(x, y) <= cfg.caliper_black_max_intensity) ++black;
        }
    }
    if (sampled == 0) return std::nullopt;  // box fully outside the frame
    return 2 * black > sampled;
}

FaceEval eval_face(int face_side, ExpectedFace expected) {
    // The junction midpoint sits on the dorsal side, so the face points the
    // other way: side +1 (C display-upper) means the face looks down.
    FaceEval e;
    e.tag = face_side > 0 ? FaceTag::Down
                          : (face_side < 0 ? FaceTag::Up : FaceTag::OnLine);
    switch (expected) {
        case ExpectedFace::Up:
            e.passed = e.tag == FaceTag::Up;
            break;
        case ExpectedFace::Down:
            e.passed = e.tag == FaceTag::Down;
            break;
        case ExpectedFace::Either:
            e.passed = e.tag != FaceTag::OnLine;
            break;
    }
    return e;
}

void ScoreCard::finalize() {
    score = static_cast<int>(c1_neutral) + static_cast<int>(c2_horizontal) +
            static_cast<int>(c3_midsagittal) +
            static_cast<int>(c4_magnification) +
            static_cast<int>(c5_left_caliper.value_or(false)) +
            static_cast<int>(c6_right_caliper.value_or(false)) +
            static_cast<int>(c7_face);
    acceptable = score >= kAcceptanceThreshold;
}

std::array<bool, 7> ScoreCard::criteria_bits() const {
    return {c1_neutral,
            c2_horizontal,
            c3_midsagittal,
            c4_magnification,
            c5_left_caliper.value_or(false),
            c6_right_caliper.value_or(false),
            c7_face};
}

ScoreCard score_image(const LabelMask& mask, const GrayImage* frame,
                      const ImageMeta& meta, const CriteriaConfig& cfg) {
    if (frame &&
        (frame->width() != mask.width() || frame->height() != mask.height()))
        throw DimensionMismatch("frame size does not match mask size");

    const std::vector<Contour> contours = extract_contours(mask);
    const LandmarkSet lm = measure_landmarks(mask, contours);

    ScoreCard card;
    card.image_id = meta.image_id;
    card.crl_px = lm.crl_px;
    if (meta.pixel_spacing_mm) card.crl_mm = lm.crl_px * *meta.pixel_spacing_mm;
    card.alpha_deg = lm.alpha_deg;
    card.beta_deg = lm.beta_deg;

    card.c1_neutral = eval_neutral(lm.beta_deg, cfg);
    card.c2_horizontal = eval_horizontal(lm.alpha_deg, cfg);
    card.c3_midsagittal = eval_midsagittal(mask, cfg);

    const Magnification mag =
        eval_magnification(lm.crown_a, lm.rump_b, mask.width(), cfg);
    card.c4_magnification = mag.passed;
    card.magnification_fraction = mag.fraction;

    if (frame) {
        // Left caliper belongs to the endpoint with the smaller x (smaller
        // y on ties); each box opens away from the other endpoint.
        const PixelPoint a{static_cast<int>(lm.crown_a.x),
                           static_cast<int>(lm.crown_a.y)};
        const PixelPoint b{static_cast<int>(lm.rump_b.x),
                           static_cast<int>(lm.rump_b.y)};
        const PixelPoint left = a < b ? a : b;
        const PixelPoint right = a < b ? b : a;
        const RealPoint left_out{static_cast<double>(left.x - right.x),
                                 static_cast<double>(left.y - right.y)};
        const RealPoint right_out{static_cast<double>(right.x - left.x),
                                  static_cast<double>(right.y - left.y)};
        card.c5_left_caliper =
            eval_caliper_visibility(left, left_out, *frame, cfg);
        card.c6_right_caliper =
            eval_caliper_visibility(right, right_out, *frame, cfg);
    }

    const FaceEval face = eval_face(lm.face_side, meta.expected_face);
    card.c7_face = face.passed;
    card.face_tag = face.tag;

    card.finalize();
    return card;
}

}  // namespace crlscore
