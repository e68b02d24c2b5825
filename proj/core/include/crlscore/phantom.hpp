#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crlscore/image_types.hpp"

namespace crlscore {

enum class Face { Up, Down };

// Parametric description of a synthetic scoring case: a head disc joined by
// a neck to a body ellipse, with an optional palate marker.  The flexion
// angle, baseline tilt and baseline span are hit by construction.
struct PhantomSpec {
    int width = 768;
    int height = 560;

    double head_radius = 62.0;
    double body_semi_major = 100.0;
    double body_semi_minor = 62.0;

    double beta_target_deg = 153.81;  // flexion angle at the junction
    double alpha_target_deg = 5.0;    // baseline tilt vs horizontal
    double span_fraction = 0.70;      // baseline x-extent / image width

    bool palate = true;
    Face face = Face::Up;

    std::uint8_t margin_intensity = 0;
    std::uint8_t body_intensity = 190;
    bool speckle = false;        // deterministic texture inside the fetus
    std::uint32_t seed = 1;
};

// The values the generator constructed the image to have; measurement on
// the rendered mask should reproduce them within raster tolerance.
struct GroundTruth {
    RealPoint crown_a;
    RealPoint rump_b;
    RealPoint junction_c;
    double alpha_deg = 0.0;
    double beta_deg = 0.0;
    double crl_px = 0.0;
    double span_fraction = 0.0;
    Face face = Face::Up;
    bool palate = false;
};

struct PhantomCase {
    LabelMask mask;
    GrayImage frame;
    ImageMeta meta;
    GroundTruth truth;
};

// Renders one case.  Throws GeometryInfeasible when the requested
// configuration cannot be realised (parts overlap, image too small, angles
// out of range).  Identical specs render identical cases.
PhantomCase render(const PhantomSpec& spec,
                   const std::string& image_id = "phantom");

// Copies of `base` with the named numeric parameter set to each value in
// turn.  Parameter names match the PhantomSpec field names.  Throws
// std::invalid_argument for unknown names.
std::vector<PhantomSpec> sweep(const PhantomSpec& base,
                               const std::string& parameter,
                               const std::vector<double>& values);

// A randomised spec drawn from ranges that are feasible by construction
// (same spec for the same seed).
PhantomSpec random_spec(std::uint32_t seed);

// render(random_spec(seed)) with bounded deterministic retries on derived
// seeds, for bulk corpus generation where every draw must yield a case.
PhantomCase render_random(std::uint32_t seed, const std::string& image_id);

}  // namespace crlscore
