#include "crlscore/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "crlscore/errors.hpp"

namespace crlscore {

namespace {

constexpr int kNeighborDx[8] = {-1, 0, 1, -1, 1, -1, 0, 1};
constexpr int kNeighborDy[8] = {-1, -1, -1, 0, 0, 1, 1, 1};

std::int64_t squared_distance(const PixelPoint& p, const PixelPoint& q) {
    const std::int64_t dx = p.x - q.x;
    const std::int64_t dy = p.y - q.y;
    return dx * dx + dy * dy;
}

// Integer contour centroid kept as (sum, count) so comparisons stay exact.
struct CentroidSum {
    std::int64_t sx = 0;
    std::int64_t sy = 0;
    std::int64_t n = 0;
};

CentroidSum centroid_sum(const Contour& contour) {
    CentroidSum c;
    for (const PixelPoint& p : contour.points) {
        c.sx += p.x;
        c.sy += p.y;
    }
    c.n = static_cast<std::int64_t>(contour.points.size());
    return c;
}

// Compares |p - centroid| against |q - centroid| exactly: the squared
// distances scaled by n^2 are (n*px - sx)^2 + (n*py - sy)^2, which fits in
// 128-bit arithmetic for any realistic image.
int compare_centroid_distance(const PixelPoint& p, const PixelPoint& q,
                              const CentroidSum& c) {
    auto scaled = [&](const PixelPoint& r) {
        const __int128 dx = static_cast<__int128>(c.n) * r.x - c.sx;
        const __int128 dy = static_cast<__int128>(c.n) * r.y - c.sy;
        return dx * dx + dy * dy;
    };
    const __int128 dp = scaled(p);
    const __int128 dq = scaled(q);
    if (dp < dq) return -1;
    if (dp > dq) return 1;
    return 0;
}

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

}  // namespace

std::vector<Contour> extract_contours(const LabelMask& mask) {
    const int w = mask.width();
    const int h = mask.height();

    if (!mask.has_label(kHeadLabel) && !mask.has_label(kBodyLabel))
        throw MissingStructure("mask contains neither head nor body region");

    std::vector<Contour> contours;
    std::vector<std::uint8_t> boundary(static_cast<std::size_t>(w) * h);

    for (std::uint8_t label = 1; label <= kMaxLabel; ++label) {
        if (!mask.has_label(label)) continue;

        std::fill(boundary.begin(), boundary.end(), 0);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                if (mask.at(x, y) != label) continue;
                for (int k = 0; k < 8; ++k) {
                    const int nx = x + kNeighborDx[k];
                    const int ny = y + kNeighborDy[k];
                    if (!mask.inside(nx, ny)) continue;
                    if (mask.at(nx, ny) != label)
                        boundary[static_cast<std::size_t>(ny) * w + nx] = 1;
                }
            }
        }

        Contour contour;
        contour.class_label = label;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                if (boundary[static_cast<std::size_t>(y) * w + x])
                    contour.points.push_back({x, y});
        contours.push_back(std::move(contour));
    }
    return contours;
}

const Contour* find_contour(const std::vector<Contour>& contours,
                            std::uint8_t class_label) {
    for (const Contour& c : contours)
        if (c.class_label == class_label) return &c;
    return nullptr;
}

CrlLine crl_endpoints(const Contour& head, const Contour& body) {
    std::vector<PixelPoint> merged;
    merged.reserve(head.points.size() + body.points.size());
    merged.insert(merged.end(), head.points.begin(), head.points.end());
    merged.insert(merged.end(), body.points.begin(), body.points.end());
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

    if (merged.size() < 2)
        throw DegenerateGeometry("fewer than two distinct contour points");

    // Exhaustive farthest pair on integer squared distances; ties resolve
    // to the lexicographically smallest ordered pair so reruns are stable.
    std::int64_t best = -1;
    PixelPoint best_p, best_q;
    for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
        for (std::size_t j = i + 1; j < merged.size(); ++j) {
            const std::int64_t d = squared_distance(merged[i], merged[j]);
            if (d > best) {
                best = d;
                best_p = merged[i];
                best_q = merged[j];
            }
        }
    }
    if (best <= 0) throw DegenerateGeometry("all contour points coincide");

    // Crown is the endpoint nearer the head contour centroid; if that is a
    // tie, the endpoint nearer the body centroid is the rump; if still
    // tied, contour membership decides; a pair equal under all three rules
    // has no defensible orientation.
    const CentroidSum head_c = centroid_sum(head);
    const CentroidSum body_c = centroid_sum(body);

    PixelPoint crown, rump;
    const int by_head = compare_centroid_distance(best_p, best_q, head_c);
    if (by_head != 0) {
        crown = by_head < 0 ? best_p : best_q;
        rump = by_head < 0 ? best_q : best_p;
    } else {
        const int by_body = compare_centroid_distance(best_p, best_q, body_c);
        if (by_body != 0) {
            rump = by_body < 0 ? best_p : best_q;
            crown = by_body < 0 ? best_q : best_p;
        } else {
            auto contains = [](const Contour& c, const PixelPoint& p) {
                return std::find(c.points.begin(), c.points.end(), p) !=
                       c.points.end();
            };
            const bool p_head_only = contains(head, best_p) && !contains(body, best_p);
            const bool q_head_only = contains(head, best_q) && !contains(body, best_q);
            if (p_head_only && !q_head_only) {
                crown = best_p;
                rump = best_q;
            } else if (q_head_only && !p_head_only) {
                crown = best_q;
                rump = best_p;
            } else {
                throw DegenerateGeometry(
                    "farthest pair cannot be oriented: equidistant from both "
                    "centroids and same contour membership");
            }
        }
    }

    return {crown, rump, std::sqrt(static_cast<double>(best))};
}

RealPoint junction_midpoint(const LabelMask& mask) {
    std::int64_t sx = 0, sy = 0, n = 0;
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (mask.at(x, y) != kHeadLabel) continue;
            bool touches_body = false;
            for (int k = 0; k < 8 && !touches_body; ++k) {
                const int nx = x + kNeighborDx[k];
                const int ny = y + kNeighborDy[k];
                touches_body = mask.inside(nx, ny) &&
                               mask.at(nx, ny) == kBodyLabel;
            }
            if (touches_body) {
                sx += x;
                sy += y;
                ++n;
            }
        }
    }
    if (n == 0)
        throw NoJunction("head and body regions are not adjacent");
    return {static_cast<double>(sx) / n, static_cast<double>(sy) / n};
}

double horizontal_angle(const RealPoint& a, const RealPoint& b) {
    double dx = b.x - a.x;
    double dy = b.y - a.y;
    if (dx == 0.0 && dy == 0.0)
        throw DegenerateGeometry("horizontal angle of a zero-length segment");

    // Fold the direction into the right half-plane so the result does not
    // depend on endpoint order; a vertical segment maps to exactly 90.
    if (dx < 0.0) {
        dx = -dx;
        dy = -dy;
    }
    if (dx == 0.0) return 90.0;
    return std::atan2(dy, dx) * kRadToDeg;
}

double flexion_angle(const RealPoint& a, const RealPoint& c,
                     const RealPoint& b) {
    const double ca2 = (a.x - c.x) * (a.x - c.x) + (a.y - c.y) * (a.y - c.y);
    const double cb2 = (b.x - c.x) * (b.x - c.x) + (b.y - c.y) * (b.y - c.y);
    const double ab2 = (b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y);
    if (ca2 == 0.0 || cb2 == 0.0)
        throw DegenerateGeometry("flexion vertex coincides with an endpoint");

    double arg = (ca2 + cb2 - ab2) / (2.0 * std::sqrt(ca2) * std::sqrt(cb2));
    arg = std::clamp(arg, -1.0, 1.0);
    return std::acos(arg) * kRadToDeg;
}

int face_sign(const RealPoint& a, const RealPoint& b, const RealPoint& c) {
    const double abx = b.x - a.x;
    const double aby = b.y - a.y;
    const double length = std::hypot(abx, aby);
    if (length == 0.0)
        throw DegenerateGeometry("face side of a zero-length baseline");

    const double cross = abx * (c.y - a.y) - aby * (c.x - a.x);
    if (std::abs(cross) / length < 0.5) return 0;
    // In image coordinates y grows downward, so a negative cross product
    // puts C on the display-upper side.
    return cross < 0.0 ? 1 : -1;
}

LandmarkSet measure_landmarks(const LabelMask& mask,
                              const std::vector<Contour>& contours) {
    const Contour* head = find_contour(contours, kHeadLabel);
    const Contour* body = find_contour(contours, kBodyLabel);
    if (!head || head->points.empty())
        throw MissingStructure("mask has no head region");
    if (!body || body->points.empty())
        throw MissingStructure("mask has no body region");

    const CrlLine line = crl_endpoints(*head, *body);
    const RealPoint a{static_cast<double>(line.crown_a.x),
                      static_cast<double>(line.crown_a.y)};
    const RealPoint b{static_cast<double>(line.rump_b.x),
                      static_cast<double>(line.rump_b.y)};
    const RealPoint c = junction_midpoint(mask);

    LandmarkSet lm;
    lm.crown_a = a;
    lm.rump_b = b;
    lm.junction_c = c;
    lm.crl_px = line.length_px;
    lm.alpha_deg = horizontal_angle(a, b);
    lm.beta_deg = flexion_angle(a, c, b);
    lm.face_side = face_sign(a, b, c);
    return lm;
}

}  // namespace crlscore
