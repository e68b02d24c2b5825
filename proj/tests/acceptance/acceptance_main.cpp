// Release-gate checks.  Each numbered criterion prints exactly one
// [PASS]/[FAIL] line; the process exits non-zero if any of them fail.
//
// Usage: acceptance <cli-binary> <fixture-data-dir>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "crlscore/agreement.hpp"
#include "crlscore/criteria.hpp"
#include "crlscore/geometry.hpp"
#include "crlscore/mask_io.hpp"
#include "crlscore/overlay.hpp"
#include "crlscore/phantom.hpp"
#include "crlscore/report.hpp"

namespace fs = std::filesystem;
using namespace crlscore;
using nlohmann::json;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion,
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

int run_command(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    if (status == -1 || !WIFEXITED(status)) return -1;
    return WEXITSTATUS(status);
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

// Reference farthest-pair search, deliberately independent of the library:
// merged, sorted, de-duplicated points, first strictly-better pair wins.
void brute_far_pair(std::vector<PixelPoint> pts, PixelPoint& a,
                    PixelPoint& b) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    long long best = -1;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const long long dx = pts[i].x - pts[j].x;
            const long long dy = pts[i].y - pts[j].y;
            const long long d2 = dx * dx + dy * dy;
            if (d2 > best) {
                best = d2;
                a = pts[i];
                b = pts[j];
            }
        }
}

// ---------------------------------------------------------------- 1 ------

void criterion_1_geometry_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    double alpha_max = 0.0, beta_max = 0.0, crl_max_pct = 0.0;
    int mismatches = 0;
    std::string first_error;

    for (std::uint32_t i = 0; i < 200; ++i) {
        char id[32];
        std::snprintf(id, sizeof(id), "phantom_%03u", i);
        const PhantomCase pc = render_random(1000 + i, id);

        const auto contours = extract_contours(pc.mask);
        const Contour* head = find_contour(contours, kHeadLabel);
        const Contour* body = find_contour(contours, kBodyLabel);
        const CrlLine line = crl_endpoints(*head, *body);

        std::vector<PixelPoint> merged = head->points;
        merged.insert(merged.end(), body->points.begin(), body->points.end());
        PixelPoint a{}, b{};
        brute_far_pair(std::move(merged), a, b);
        PixelPoint la = line.crown_a, lb = line.rump_b;
        if (lb < la) std::swap(la, lb);
        if (!(la == a && lb == b)) {
            ++mismatches;
            if (first_error.empty()) first_error = std::string(id);
        }

        const LandmarkSet lm = measure_landmarks(pc.mask, contours);
        alpha_max = std::max(alpha_max,
                             std::abs(lm.alpha_deg - pc.truth.alpha_deg));
        beta_max =
            std::max(beta_max, std::abs(lm.beta_deg - pc.truth.beta_deg));
        crl_max_pct = std::max(
            crl_max_pct,
            100.0 * std::abs(lm.crl_px - pc.truth.crl_px) / pc.truth.crl_px);
    }

    const double secs =
        std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - t0)
            .count() /
        1000.0;

    const bool ok = mismatches == 0 && alpha_max <= 1.0 && beta_max <= 2.0 &&
                    crl_max_pct <= 2.0 && secs < 30.0;
    std::ostringstream detail;
    detail << "200 cases, farthest-pair mismatches " << mismatches
           << ", max |alpha err| " << fixed2(alpha_max)
           << " deg (limit 1.00), max |beta err| " << fixed2(beta_max)
           << " deg (limit 2.00), max CRL err " << fixed2(crl_max_pct)
           << "% (limit 2.00), " << fixed2(secs) << "s (limit 30)";
    if (!first_error.empty()) detail << ", first mismatch " << first_error;
    report(1, ok, detail.str());
}

// ---------------------------------------------------------------- 2 ------

struct SweepOutcome {
    int flips = 0;
    bool bracketed = false;  // measured values straddle the threshold
    bool ran = true;
    std::string note;
};

// Sweeps one generator parameter, scores each rendered case, and inspects
// how the given criterion bit evolves along the sweep.
template <typename CriterionBit, typename Measured>
SweepOutcome run_sweep(const std::string& parameter,
                       const std::vector<double>& values, double threshold,
                       CriterionBit bit, Measured measured) {
    SweepOutcome out;
    const CriteriaConfig cfg;
    std::vector<int> bits;
    std::vector<double> meas;
    try {
        for (const PhantomSpec& s : sweep(PhantomSpec{}, parameter, values)) {
            const PhantomCase pc = render(s);
            const ScoreCard card =
                score_image(pc.mask, &pc.frame, pc.meta, cfg);
            bits.push_back(bit(card) ? 1 : 0);
            meas.push_back(measured(card, pc));
        }
    } catch (const std::exception& e) {
        out.ran = false;
        out.note = e.what();
        return out;
    }

    for (std::size_t i = 1; i < bits.size(); ++i)
        if (bits[i] != bits[i - 1]) {
            ++out.flips;
            const double before = meas[i - 1];
            const double after = meas[i];
            const double lo = std::min(before, after);
            const double hi = std::max(before, after);
            out.bracketed = lo <= threshold && threshold <= hi;
        }
    return out;
}

void criterion_2_threshold_sweeps() {
    const CriteriaConfig cfg;

    // Flexion: step 2.5 ladders straddling each band edge at +-1.25.
    std::vector<double> beta_low, beta_high;
    for (double b = cfg.neutral_low_deg - 6.25;
         b <= cfg.neutral_low_deg + 6.3; b += 2.5)
        beta_low.push_back(b);
    for (double b = cfg.neutral_high_deg - 6.25;
         b <= cfg.neutral_high_deg + 6.3; b += 2.5)
        beta_high.push_back(b);

    auto c1_bit = [](const ScoreCard& c) { return c.c1_neutral; };
    auto beta_meas = [](const ScoreCard& c, const PhantomCase&) {
        return c.beta_deg;
    };
    const SweepOutcome low = run_sweep("beta_target_deg", beta_low,
                                       cfg.neutral_low_deg, c1_bit, beta_meas);
    const SweepOutcome high = run_sweep("beta_target_deg", beta_high,
                                        cfg.neutral_high_deg, c1_bit,
                                        beta_meas);

    // Tilt: step 2.0 ladder straddling the +-15 degree limit.
    const SweepOutcome tilt = run_sweep(
        "alpha_target_deg", {11.0, 13.0, 15.0, 17.0, 19.0},
        cfg.horizontal_limit_deg,
        [](const ScoreCard& c) { return c.c2_horizontal; },
        [](const ScoreCard& c, const PhantomCase&) {
            return std::abs(c.alpha_deg);
        });

    // Span: step 0.01 ladder across the magnification threshold.
    std::vector<double> spans;
    for (double v = 0.50; v <= 0.7201; v += 0.01) spans.push_back(v);
    const SweepOutcome span = run_sweep(
        "span_fraction", spans, cfg.magnification_threshold,
        [](const ScoreCard& c) { return c.c4_magnification; },
        [](const ScoreCard& c, const PhantomCase&) {
            return c.magnification_fraction;
        });

    const bool ok = low.ran && high.ran && tilt.ran && span.ran &&
                    low.flips == 1 && high.flips == 1 && tilt.flips == 1 &&
                    span.flips == 1 && low.bracketed && high.bracketed &&
                    tilt.bracketed && span.bracketed;
    std::ostringstream detail;
    detail << "flips at thresholds: c1 lower edge " << low.flips
           << ", c1 upper edge " << high.flips << ", c2 tilt " << tilt.flips
           << ", c4 span " << span.flips
           << " (1 each required, measured values straddle each threshold: "
           << (low.bracketed && high.bracketed && tilt.bracketed &&
                       span.bracketed
                   ? "yes"
                   : "no")
           << ")";
    if (!low.ran) detail << "; lower-edge sweep failed: " << low.note;
    if (!high.ran) detail << "; upper-edge sweep failed: " << high.note;
    if (!tilt.ran) detail << "; tilt sweep failed: " << tilt.note;
    if (!span.ran) detail << "; span sweep failed: " << span.note;
    report(2, ok, detail.str());
}

// ---------------------------------------------------------------- 3 ------

void criterion_3_acceptance_rule() {
    int checked = 0;
    bool ok = true;
    for (int bits = 0; bits < 128; ++bits) {
        ScoreCard card;
        card.c1_neutral = bits & 1;
        card.c2_horizontal = bits & 2;
        card.c3_midsagittal = bits & 4;
        card.c4_magnification = bits & 8;
        card.c5_left_caliper = static_cast<bool>(bits & 16);
        card.c6_right_caliper = static_cast<bool>(bits & 32);
        card.c7_face = bits & 64;
        card.finalize();

        const int expected_score = std::popcount(static_cast<unsigned>(bits));
        if (card.score != expected_score ||
            card.acceptable != (expected_score >= 4))
            ok = false;

        // Disengaged calipers must behave exactly like failed ones.
        if (!(bits & 16) && !(bits & 32)) {
            ScoreCard tri = card;
            tri.c5_left_caliper.reset();
            tri.c6_right_caliper.reset();
            tri.finalize();
            if (tri.score != expected_score ||
                tri.acceptable != card.acceptable)
                ok = false;
        }
        ++checked;
    }
    std::ostringstream detail;
    detail << checked
           << " criterion combinations: acceptable <=> score >= 4"
           << (ok ? "" : " VIOLATED");
    report(3, ok, detail.str());
}

// ---------------------------------------------------------------- 4 ------

double diff_or_inf(double a, double b) {
    const double d = std::abs(a - b);
    return std::isfinite(d) ? d : std::numeric_limits<double>::infinity();
}

void criterion_4_statistics_oracle(const fs::path& data_dir) {
    json oracle;
    try {
        std::ifstream in(data_dir / "stats_oracle.json");
        oracle = json::parse(in);
    } catch (const std::exception& e) {
        report(4, false, std::string("cannot load statistics fixtures: ") +
                             e.what());
        return;
    }

    double worst = 0.0;
    int fixtures = 0;
    bool ok = true;
    std::string first_bad;

    for (const json& fix : oracle.at("kappa")) {
        const std::vector<int> gt = fix.at("gt").get<std::vector<int>>();
        const std::vector<int> pred = fix.at("pred").get<std::vector<int>>();
        const int k = fix.at("k").get<int>();
        const json& exp = fix.at("expected");
        try {
            const KappaResult r = weighted_kappa(gt, pred, k);
            const double d = std::max(
                {diff_or_inf(r.kappa, exp.at("kappa").get<double>()),
                 diff_or_inf(r.ci_low, exp.at("ci_low").get<double>()),
                 diff_or_inf(r.ci_high, exp.at("ci_high").get<double>()),
                 diff_or_inf(r.p_value, exp.at("p_value").get<double>())});
            worst = std::max(worst, d);
            if (d > 1e-9 && first_bad.empty())
                first_bad = fix.at("name").get<std::string>();
        } catch (const std::exception&) {
            ok = false;
            if (first_bad.empty())
                first_bad = fix.at("name").get<std::string>();
        }
        ++fixtures;
    }

    for (const json& fix : oracle.at("alpha")) {
        std::vector<std::array<bool, kCriterionCount>> rows;
        for (const json& row : fix.at("matrix")) {
            std::array<bool, kCriterionCount> r{};
            for (int j = 0; j < kCriterionCount; ++j)
                r[j] = row.at(j).get<int>() != 0;
            rows.push_back(r);
        }
        const json& exp = fix.at("expected");
        try {
            const AlphaResult r = cronbach_alpha(rows);
            double d =
                diff_or_inf(r.alpha_all, exp.at("alpha_all").get<double>());
            const json& deleted = exp.at("alpha_if_deleted");
            for (int j = 0; j < kCriterionCount; ++j) {
                if (deleted.at(j).is_null()) {
                    if (r.alpha_if_deleted[j].has_value())
                        d = std::numeric_limits<double>::infinity();
                } else if (!r.alpha_if_deleted[j].has_value()) {
                    d = std::numeric_limits<double>::infinity();
                } else {
                    d = std::max(d, diff_or_inf(*r.alpha_if_deleted[j],
                                                deleted.at(j).get<double>()));
                }
            }
            worst = std::max(worst, d);
            if (d > 1e-9 && first_bad.empty())
                first_bad = fix.at("name").get<std::string>();
        } catch (const std::exception&) {
            ok = false;
            if (first_bad.empty())
                first_bad = fix.at("name").get<std::string>();
        }
        ++fixtures;
    }

    // Exact closed-form anchors.
    std::vector<int> t, p;
    for (int i = 0; i < 40; ++i) {
        t.push_back(0);
        p.push_back(0);
    }
    for (int i = 0; i < 60; ++i) {
        t.push_back(1);
        p.push_back(1);
    }
    const bool perfect_exact = weighted_kappa(t, p, 2).kappa == 1.0;

    t.clear();
    p.clear();
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int i = 0; i < 25; ++i) {
                t.push_back(a);
                p.push_back(b);
            }
    const bool chance_exact = weighted_kappa(t, p, 2).kappa == 0.0;

    ok = ok && worst <= 1e-9 && perfect_exact && chance_exact;
    std::ostringstream detail;
    detail << fixtures << " reference fixtures, worst deviation "
           << std::scientific << worst << " (limit 1e-09); perfect table "
           << (perfect_exact ? "== 1.0" : "!= 1.0") << ", chance table "
           << (chance_exact ? "== 0.0" : "!= 0.0");
    if (!first_bad.empty()) detail << "; first failing fixture " << first_bad;
    report(4, ok, detail.str());
}

// ---------------------------------------------------------------- 5 ------

bool close9(double a, double b) { return std::abs(a - b) <= 1e-9; }

bool match_optional(const json& expected, const std::optional<double>& got) {
    if (expected.is_null()) return !got.has_value();
    return got.has_value() && close9(expected.get<double>(), *got);
}

void criterion_5_table_reproduction(const fs::path& cli,
                                    const fs::path& data_dir,
                                    const fs::path& scratch) {
    json oracle;
    AgreementReport rep;
    try {
        std::ifstream in(data_dir / "compare_oracle.json");
        oracle = json::parse(in);
        const RaterTable cand =
            RaterTable::from_csv(data_dir / "fixture_ai.csv", "ai");
        const RaterTable ref =
            RaterTable::from_csv(data_dir / "fixture_expert.csv", "expert");
        rep = compare_tables(cand, ref);
    } catch (const std::exception& e) {
        report(5, false, std::string("comparison failed: ") + e.what());
        return;
    }

    bool numbers_ok = rep.n_images == oracle.at("n_images").get<long>() &&
                      rep.candidate_accepted ==
                          oracle.at("accepted_ai").get<long>() &&
                      rep.reference_accepted ==
                          oracle.at("accepted_expert").get<long>();

    const json& rows = oracle.at("rows");
    for (std::size_t j = 0; j < rep.rows.size() && numbers_ok; ++j) {
        const CriterionAgreement& row = rep.rows[j];
        const json& exp = rows.at(j);
        numbers_ok = row.label == exp.at("label").get<std::string>() &&
                     row.cm.tp == exp.at("tp").get<long>() &&
                     row.cm.fp == exp.at("fp").get<long>() &&
                     row.cm.fn == exp.at("fn").get<long>() &&
                     row.cm.tn == exp.at("tn").get<long>() &&
                     close9(row.m.accuracy,
                            exp.at("accuracy").get<double>()) &&
                     match_optional(exp.at("precision"), row.m.precision) &&
                     match_optional(exp.at("recall"), row.m.recall);
        if (!numbers_ok) break;
        if (exp.at("kappa").is_null()) {
            numbers_ok = !row.kappa.has_value();
        } else {
            const json& ek = exp.at("kappa");
            numbers_ok =
                row.kappa.has_value() &&
                close9(row.kappa->kappa, ek.at("kappa").get<double>()) &&
                close9(row.kappa->ci_low, ek.at("ci_low").get<double>()) &&
                close9(row.kappa->ci_high, ek.at("ci_high").get<double>()) &&
                close9(row.kappa->p_value, ek.at("p_value").get<double>());
        }
    }

    auto alpha_matches = [&](const char* key,
                             const std::optional<AlphaResult>& got) {
        const json& exp = oracle.at(key);
        if (exp.is_null()) return !got.has_value();
        if (!got.has_value()) return false;
        if (!close9(exp.at("alpha_all").get<double>(), got->alpha_all))
            return false;
        for (int j = 0; j < kCriterionCount; ++j)
            if (!match_optional(exp.at("alpha_if_deleted").at(j),
                                got->alpha_if_deleted[j]))
                return false;
        return true;
    };
    numbers_ok = numbers_ok && alpha_matches("alpha_ai", rep.candidate_alpha) &&
                 alpha_matches("alpha_expert", rep.reference_alpha);

    // The fixture was built so criterion 2 has fn = tn = 0, forcing the
    // characteristic accuracy == precision, recall == 1 metric pattern.
    const CriterionAgreement& c2 = rep.rows[1];
    const bool pattern_ok = c2.cm.fn == 0 && c2.cm.tn == 0 &&
                            c2.m.precision.has_value() &&
                            c2.m.accuracy == *c2.m.precision &&
                            c2.m.recall.has_value() && *c2.m.recall == 1.0;

    // Structural shape of the rendered report, via the real CLI.
    const fs::path out_dir = scratch / "cmp";
    const std::string cmd =
        "\"" + cli.string() + "\" compare \"" +
        (data_dir / "fixture_ai.csv").string() + "\" \"" +
        (data_dir / "fixture_expert.csv").string() + "\" --output \"" +
        out_dir.string() + "\" > /dev/null 2>&1";
    bool structure_ok = run_command(cmd) == 0;
    std::string md;
    if (structure_ok) {
        md = read_file(out_dir / "agreement.md");
        auto count = [&md](const std::string& needle) {
            std::size_t n = 0;
            for (std::size_t pos = md.find(needle); pos != std::string::npos;
                 pos = md.find(needle, pos + needle.size()))
                ++n;
            return n;
        };
        structure_ok =
            count("\n## ") == 3 &&
            md.find("| Criterion | Accuracy (%) | Precision (%) | Recall "
                    "(%) |") != std::string::npos &&
            md.find("| Criterion | Kappa [95% CI] | p-value |") !=
                std::string::npos &&
            md.find("## Internal consistency (Cronbach's alpha)") !=
                std::string::npos &&
            count("(if deleted)") == 7 &&
            md.find("Alpha coefficient for all seven items") !=
                std::string::npos;
        for (int j = 0; j < kCriterionCount + 1 && structure_ok; ++j)
            structure_ok = count(kCriterionLabels[j]) >= 2;
    }

    const bool ok = numbers_ok && pattern_ok && structure_ok;
    std::ostringstream detail;
    detail << "197-row fixture vs reference analysis: numbers "
           << (numbers_ok ? "match to 1e-09" : "DIFFER")
           << "; fn=tn=0 row gives accuracy == precision and recall == 1: "
           << (pattern_ok ? "yes" : "no") << "; report structure (3 tables, "
           << "8 criterion rows, kappa/CI/alpha columns): "
           << (structure_ok ? "ok" : "BROKEN");
    report(5, ok, detail.str());
}

// ---------------------------------------------------------------- 6 ------

void criterion_6_determinism(const fs::path& cli, const fs::path& scratch) {
    const fs::path corpus = scratch / "corpus";
    const fs::path out1 = scratch / "det1";
    const fs::path out2 = scratch / "det2";

    const std::string gen = "\"" + cli.string() + "\" phantom --output \"" +
                            corpus.string() +
                            "\" --count 200 --seed 1000 --spacing 0.08 "
                            "> /dev/null 2>&1";
    if (run_command(gen) != 0) {
        report(6, false, "corpus generation failed");
        return;
    }

    auto score_cmd = [&](const fs::path& out) {
        return "\"" + cli.string() + "\" score --input \"" + corpus.string() +
               "\" --output \"" + out.string() +
               "\" --jobs 8 > /dev/null 2>&1";
    };
    const bool ran =
        run_command(score_cmd(out1)) == 0 && run_command(score_cmd(out2)) == 0;
    if (!ran) {
        report(6, false, "scoring runs failed");
        return;
    }

    const std::string csv1 = read_file(out1 / "scores.csv");
    const std::string csv2 = read_file(out2 / "scores.csv");
    const std::string json1 = read_file(out1 / "scores.json");
    const std::string json2 = read_file(out2 / "scores.json");

    std::size_t rows = 0;
    for (char c : csv1)
        if (c == '\n') ++rows;

    const bool ok = !csv1.empty() && csv1 == csv2 && !json1.empty() &&
                    json1 == json2 && rows == 201;
    std::ostringstream detail;
    detail << "two `score --jobs 8` runs over the 200-case corpus: csv "
           << (csv1 == csv2 ? "byte-identical" : "DIFFER") << ", json "
           << (json1 == json2 ? "byte-identical" : "DIFFER") << ", "
           << (rows > 0 ? rows - 1 : 0) << " rows scored";
    report(6, ok, detail.str());
}

// ---------------------------------------------------------------- 7 ------

void criterion_7_overlay_fidelity(const fs::path& cli,
                                  const fs::path& scratch) {
    PhantomCase pc;
    try {
        pc = render(PhantomSpec{}, "overlay_case");
    } catch (const std::exception& e) {
        report(7, false, std::string("render failed: ") + e.what());
        return;
    }
    const fs::path mask_path = scratch / "overlay_case.mask.png";
    save_mask(pc.mask, mask_path);

    const fs::path svg_path = scratch / "overlay_case.svg";
    const std::string cmd = "\"" + cli.string() + "\" overlay \"" +
                            mask_path.string() + "\" --output \"" +
                            svg_path.string() + "\" > /dev/null 2>&1";
    if (run_command(cmd) != 0) {
        report(7, false, "overlay command failed");
        return;
    }
    const std::string svg = read_file(svg_path);

    const auto contours = extract_contours(pc.mask);
    const CrlLine line = crl_endpoints(*find_contour(contours, kHeadLabel),
                                       *find_contour(contours, kBodyLabel));

    const bool markers = svg.find("id=\"A\"") != std::string::npos &&
                         svg.find("id=\"B\"") != std::string::npos &&
                         svg.find("id=\"C\"") != std::string::npos &&
                         svg.find(">A</text>") != std::string::npos &&
                         svg.find(">B</text>") != std::string::npos &&
                         svg.find(">C</text>") != std::string::npos;
    const bool crl_line = svg.find("id=\"crl\"") != std::string::npos;
    const bool angles = svg.find("id=\"alpha-label\"") != std::string::npos &&
                        svg.find("id=\"beta-label\"") != std::string::npos &&
                        svg.find("alpha = ") != std::string::npos &&
                        svg.find("beta = ") != std::string::npos;

    const std::string line_coords =
        "<line id=\"crl\" x1=\"" + fixed2(line.crown_a.x) + "\" y1=\"" +
        fixed2(line.crown_a.y) + "\" x2=\"" + fixed2(line.rump_b.x) +
        "\" y2=\"" + fixed2(line.rump_b.y) + "\"";
    const std::string marker_a = "id=\"A\" cx=\"" + fixed2(line.crown_a.x) +
                                 "\" cy=\"" + fixed2(line.crown_a.y) + "\"";
    const std::string marker_b = "id=\"B\" cx=\"" + fixed2(line.rump_b.x) +
                                 "\" cy=\"" + fixed2(line.rump_b.y) + "\"";
    const bool coords = svg.find(line_coords) != std::string::npos &&
                        svg.find(marker_a) != std::string::npos &&
                        svg.find(marker_b) != std::string::npos;

    const bool ok = markers && crl_line && angles && coords;
    std::ostringstream detail;
    detail << "overlay has A/B/C markers: " << (markers ? "yes" : "NO")
           << ", CRL line: " << (crl_line ? "yes" : "NO")
           << ", angle annotations: " << (angles ? "yes" : "NO")
           << ", A/B coordinates equal the measured endpoints: "
           << (coords ? "yes" : "NO");
    report(7, ok, detail.str());
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr,
                     "usage: acceptance <cli-binary> <fixture-data-dir>\n");
        return 2;
    }
    const fs::path cli = argv[1];
    const fs::path data_dir = argv[2];

    std::mt19937_64 rng(
        std::chrono::steady_clock::now().time_since_epoch().count());
    const fs::path scratch =
        fs::temp_directory_path() / ("acceptance-" + std::to_string(rng()));
    fs::create_directories(scratch);

    criterion_1_geometry_oracle();
    criterion_2_threshold_sweeps();
    criterion_3_acceptance_rule();
    criterion_4_statistics_oracle(data_dir);
    criterion_5_table_reproduction(cli, data_dir, scratch);
    criterion_6_determinism(cli, scratch);
    criterion_7_overlay_fidelity(cli, scratch);

    std::error_code ec;
    fs::remove_all(scratch, ec);

    if (g_failures == 0) {
        std::printf("all 7 criteria passed\n");
        return 0;
    }
    std::printf("%d criteria FAILED\n", g_failures);
    return 1;
}
