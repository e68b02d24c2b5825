#pragma once

#include <cstdint>
#include <vector>

#include "crlscore/image_types.hpp"

namespace crlscore {

// Outer boundary of one labelled region: all pixels that do NOT carry the
// class label but have an 8-neighbour that does.  Points are listed in image
// scan order (top-to-bottom, left-to-right).
struct Contour {
    std::uint8_t class_label = 0;
    std::vector<PixelPoint> points;
};

// Outer contours of every region class present in the mask, ordered by
// class label.  Throws MissingStructure when neither head nor body exists.
std::vector<Contour> extract_contours(const LabelMask& mask);

// nullptr when no contour of that class exists.
const Contour* find_contour(const std::vector<Contour>& contours,
                            std::uint8_t class_label);

// Crown-rump baseline: the two farthest-apart points over the union of head
// and body contours (exhaustive over integer squared distances, determinism
// guaranteed by lexicographic tie-breaking).  The endpoint closer to the
// head contour centroid becomes the crown.
struct CrlLine {
    PixelPoint crown_a;
    PixelPoint rump_b;
    double length_px = 0.0;
};

CrlLine crl_endpoints(const Contour& head, const Contour& body);

// Centroid of the head-side junction band: head pixels with an 8-adjacent
// body pixel.  Throws NoJunction when the regions never touch.
RealPoint junction_midpoint(const LabelMask& mask);

// Signed angle of segment AB against the horizontal, folded into
// (-90, 90] degrees; positive when B sits below A on screen.
double horizontal_angle(const RealPoint& a, const RealPoint& b);

// Angle at vertex C of triangle A-C-B in degrees, [0, 180] (law of
// cosines).  Throws DegenerateGeometry when C coincides with A or B.
double flexion_angle(const RealPoint& a, const RealPoint& c,
                     const RealPoint& b);

// Side of directed line A->B the point C lies on: +1 above the line in
// display terms (smaller y), -1 below, 0 when within half a pixel of it.
int face_sign(const RealPoint& a, const RealPoint& b, const RealPoint& c);

// Everything downstream criteria need from one mask.
struct LandmarkSet {
    RealPoint crown_a;
    RealPoint rump_b;
    RealPoint junction_c;
    double crl_px = 0.0;
    double alpha_deg = 0.0;  // baseline vs horizontal
    double beta_deg = 0.0;   // neck flexion at the junction
    int face_side = 0;       // +1 / -1 / 0, see face_sign
};

// Runs the full landmark pipeline.  Throws MissingStructure when head or
// body has no contour, plus whatever the individual steps throw.
LandmarkSet measure_landmarks(const LabelMask& mask,
                              const std::vector<Contour>& contours);

}  // namespace crlscore
