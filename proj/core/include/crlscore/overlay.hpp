#pragma once

#include <string>

#include "crlscore/criteria.hpp"
#include "crlscore/image_types.hpp"

namespace crlscore {

// Renders a QA overlay as a standalone SVG 1.1 document: region contours,
// the crown-rump baseline (id "crl"), the three landmarks A/B/C with text
// labels, the perpendicular from the junction onto the baseline, both
// caliper sample boxes, and the measured angle annotations.  Landmark and
// endpoint coordinates match the measurement pipeline exactly.  Throws the
// usual geometry errors when the mask cannot be scored.
std::string overlay_svg(const LabelMask& mask, const CriteriaConfig& cfg);

}  // namespace crlscore
