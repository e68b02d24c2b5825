#include "crlscore/overlay.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <unordered_set>

#include "crlscore/geometry.hpp"

namespace crlscore {

namespace {

std::string fmt2(double v) {
    if (v == 0.0) v = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

// Chains scan-ordered contour points into drawable polylines by greedy
// 8-neighbour walking; purely cosmetic, measurement never uses this order.
std::vector<std::vector<PixelPoint>> chain_points(
    const std::vector<PixelPoint>& points, int width) {
    std::unordered_set<long long> unused;
    unused.reserve(points.size() * 2);
    auto key = [width](const PixelPoint& p) {
        return static_cast<long long>(p.y) * width + p.x;
    };
    for (const PixelPoint& p : points) unused.insert(key(p));

    std::vector<std::vector<PixelPoint>> chains;
    for (const PixelPoint& start : points) {
        if (!unused.count(key(start))) continue;
        std::vector<PixelPoint> chain{start};
        unused.erase(key(start));
        PixelPoint cur = start;
        for (;;) {
            bool advanced = false;
            for (int dy = -1; dy <= 1 && !advanced; ++dy) {
                for (int dx = -1; dx <= 1 && !advanced; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    const PixelPoint next{cur.x + dx, cur.y + dy};
                    auto it = unused.find(key(next));
                    if (it != unused.end()) {
                        unused.erase(it);
                        chain.push_back(next);
                        cur = next;
                        advanced = true;
                    }
                }
            }
            if (!advanced) break;
        }
        chains.push_back(std::move(chain));
    }
    return chains;
}

const char* contour_color(std::uint8_t label) {
    switch (label) {
        case kHeadLabel: return "#4fc3f7";
        case kBodyLabel: return "#81c784";
        case kPalateLabel: return "#ffb74d";
    }
    return "#9e9e9e";
}

struct Box {
    int x0, y0, x1, y1;
};

Box caliper_box(const PixelPoint& endpoint, const PixelPoint& other,
                const CriteriaConfig& cfg) {
    const int side = endpoint.x - other.x >= 0 ? 1 : -1;
    const int x0 = side > 0 ? endpoint.x + 1 : endpoint.x - cfg.caliper_box_w;
    const int y0 = endpoint.y - cfg.caliper_box_h / 2;
    return {x0, y0, x0 + cfg.caliper_box_w - 1, y0 + cfg.caliper_box_h - 1};
}

}  // namespace

std::string overlay_svg(const LabelMask& mask, const CriteriaConfig& cfg) {
    const std::vector<Contour> contours = extract_contours(mask);
    const LandmarkSet lm = measure_landmarks(mask, contours);

    const Contour* head = find_contour(contours, kHeadLabel);
    const Contour* body = find_contour(contours, kBodyLabel);
    const CrlLine line = crl_endpoints(*head, *body);

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
        << "width=\"" << mask.width() << "\" height=\"" << mask.height()
        << "\" viewBox=\"0 0 " << mask.width() << ' ' << mask.height()
        << "\">\n";
    out << " <rect width=\"" << mask.width() << "\" height=\""
        << mask.height() << "\" fill=\"#111418\"/>\n";

    for (const Contour& contour : contours) {
        const char* color = contour_color(contour.class_label);
        for (const auto& chain : chain_points(contour.points, mask.width())) {
            if (chain.size() < 2) {
                out << " <circle class=\"contour\" cx=\""
                    << fmt2(chain[0].x) << "\" cy=\"" << fmt2(chain[0].y)
                    << "\" r=\"0.50\" fill=\"" << color << "\"/>\n";
                continue;
            }
            out << " <polyline class=\"contour\" fill=\"none\" stroke=\""
                << color << "\" stroke-width=\"1\" points=\"";
            for (std::size_t i = 0; i < chain.size(); ++i) {
                if (i) out << ' ';
                out << fmt2(chain[i].x) << ',' << fmt2(chain[i].y);
            }
            out << "\"/>\n";
        }
    }

    // Baseline, drawn at the exact measured endpoint coordinates.
    out << " <line id=\"crl\" x1=\"" << fmt2(line.crown_a.x) << "\" y1=\""
        << fmt2(line.crown_a.y) << "\" x2=\"" << fmt2(line.rump_b.x)
        << "\" y2=\"" << fmt2(line.rump_b.y)
        << "\" stroke=\"#2979ff\" stroke-width=\"2\"/>\n";

    // Perpendicular from the junction midpoint onto the baseline.
    const double abx = lm.rump_b.x - lm.crown_a.x;
    const double aby = lm.rump_b.y - lm.crown_a.y;
    const double ab2 = abx * abx + aby * aby;
    const double t = ((lm.junction_c.x - lm.crown_a.x) * abx +
                      (lm.junction_c.y - lm.crown_a.y) * aby) /
                     ab2;
    const double fx = lm.crown_a.x + t * abx;
    const double fy = lm.crown_a.y + t * aby;
    out << " <line class=\"perp\" x1=\"" << fmt2(lm.junction_c.x)
        << "\" y1=\"" << fmt2(lm.junction_c.y) << "\" x2=\"" << fmt2(fx)
        << "\" y2=\"" << fmt2(fy)
        << "\" stroke=\"#f5f5f5\" stroke-width=\"1\" "
           "stroke-dasharray=\"4 3\"/>\n";

    // Caliper sample boxes at both endpoints.
    const PixelPoint a = line.crown_a;
    const PixelPoint b = line.rump_b;
    for (const Box& box : {caliper_box(a, b, cfg), caliper_box(b, a, cfg)}) {
        out << " <rect class=\"caliper\" x=\"" << fmt2(box.x0) << "\" y=\""
            << fmt2(box.y0) << "\" width=\"" << box.x1 - box.x0 + 1
            << "\" height=\"" << box.y1 - box.y0 + 1
            << "\" fill=\"none\" stroke=\"#e57373\" stroke-width=\"1\"/>\n";
    }

    // Landmarks with text labels.
    const struct {
        const char* name;
        RealPoint p;
    } landmarks[] = {{"A", lm.crown_a}, {"B", lm.rump_b}, {"C", lm.junction_c}};
    for (const auto& mark : landmarks) {
        out << " <circle class=\"landmark\" id=\"" << mark.name << "\" cx=\""
            << fmt2(mark.p.x) << "\" cy=\"" << fmt2(mark.p.y)
            << "\" r=\"3\" fill=\"#ffffff\"/>\n"
            << " <text class=\"landmark-label\" x=\"" << fmt2(mark.p.x + 6.0)
            << "\" y=\"" << fmt2(mark.p.y - 6.0)
            << "\" fill=\"#ffffff\" font-size=\"14\">" << mark.name
            << "</text>\n";
    }

    // Angle annotations near the baseline midpoint and the junction.
    char alpha_text[64], beta_text[64];
    std::snprintf(alpha_text, sizeof(alpha_text), "alpha = %.2f&#176;",
                  lm.alpha_deg);
    std::snprintf(beta_text, sizeof(beta_text), "beta = %.2f&#176;",
                  lm.beta_deg);
    out << " <text class=\"angle-label\" id=\"alpha-label\" x=\""
        << fmt2((lm.crown_a.x + lm.rump_b.x) / 2.0 + 8.0) << "\" y=\""
        << fmt2((lm.crown_a.y + lm.rump_b.y) / 2.0 - 8.0)
        << "\" fill=\"#ffd54f\" font-size=\"14\">" << alpha_text
        << "</text>\n";
    out << " <text class=\"angle-label\" id=\"beta-label\" x=\""
        << fmt2(lm.junction_c.x + 8.0) << "\" y=\""
        << fmt2(lm.junction_c.y + 18.0)
        << "\" fill=\"#ffd54f\" font-size=\"14\">" << beta_text
        << "</text>\n";

    out << "</svg>\n";
    return out.str();
}

}  // namespace crlscore
