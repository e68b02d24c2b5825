#include "crlscore/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "crlscore/errors.hpp"

namespace crlscore {

namespace {

// Fixed-point six-decimal rendering keeps every run byte-identical; the
// zero check folds negative zero into "0.000000".
std::string fmt6(double v) {
    if (v == 0.0) v = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string fmt_opt6(const std::optional<double>& v) {
    return v ? fmt6(*v) : "null";
}

std::string fmt1(double v) {
    if (v == 0.0) v = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.1f", v);
    return buf;
}

std::string fmt3(double v) {
    if (v == 0.0) v = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

// Human-facing p-value: fixed three decimals, switching to scientific
// notation once everything meaningful would round away.
std::string fmt_p(double p) {
    if (p != 0.0 && p < 0.0005) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.2e", p);
        return buf;
    }
    return fmt3(p);
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

std::string quoted(const std::string& s) { return '"' + json_escape(s) + '"'; }

const char* bit(bool b) { return b ? "true" : "false"; }

std::string tri(const std::optional<bool>& b) {
    if (!b) return "null";
    return *b ? "true" : "false";
}

std::vector<const ScoreCard*> sorted_cards(const BatchResult& batch) {
    std::vector<const ScoreCard*> cards;
    cards.reserve(batch.cards.size());
    for (const ScoreCard& card : batch.cards) cards.push_back(&card);
    std::sort(cards.begin(), cards.end(),
              [](const ScoreCard* a, const ScoreCard* b) {
                  return a->image_id < b->image_id;
              });
    return cards;
}

std::vector<const ScoreFailure*> sorted_failures(const BatchResult& batch) {
    std::vector<const ScoreFailure*> failures;
    failures.reserve(batch.failures.size());
    for (const ScoreFailure& f : batch.failures) failures.push_back(&f);
    std::sort(failures.begin(), failures.end(),
              [](const ScoreFailure* a, const ScoreFailure* b) {
                  return a->image_id < b->image_id;
              });
    return failures;
}

void emit_alpha(std::ostringstream& out, const char* indent,
                const std::optional<AlphaResult>& alpha) {
    if (!alpha) {
        out << "null";
        return;
    }
    out << "{\n"
        << indent << " \"alpha_all\": " << fmt6(alpha->alpha_all) << ",\n"
        << indent << " \"alpha_if_deleted\": [";
    for (int j = 0; j < kCriterionCount; ++j) {
        if (j) out << ", ";
        out << fmt_opt6(alpha->alpha_if_deleted[j]);
    }
    out << "]\n" << indent << "}";
}

}  // namespace

std::string scores_csv(const BatchResult& batch) {
    std::ostringstream out;
    out << "image_id,c1,c2,c3,c4,c5,c6,c7,acceptable\n";
    for (const ScoreCard* card : sorted_cards(batch)) {
        out << card->image_id;
        for (bool b : card->criteria_bits()) out << ',' << (b ? '1' : '0');
        out << ',' << (card->acceptable ? '1' : '0') << '\n';
    }
    return out.str();
}

std::string scores_json(const BatchResult& batch) {
    std::ostringstream out;
    out << "{\n \"cases\": [";
    bool first = true;
    for (const ScoreCard* card : sorted_cards(batch)) {
        out << (first ? "" : ",") << "\n  {\n"
            << "   \"image_id\": " << quoted(card->image_id) << ",\n"
            << "   \"criteria\": {\n"
            << "    \"c1_neutral\": " << bit(card->c1_neutral) << ",\n"
            << "    \"c2_horizontal\": " << bit(card->c2_horizontal) << ",\n"
            << "    \"c3_midsagittal\": " << bit(card->c3_midsagittal) << ",\n"
            << "    \"c4_magnification\": " << bit(card->c4_magnification)
            << ",\n"
            << "    \"c5_left_caliper\": " << tri(card->c5_left_caliper)
            << ",\n"
            << "    \"c6_right_caliper\": " << tri(card->c6_right_caliper)
            << ",\n"
            << "    \"c7_face\": " << bit(card->c7_face) << "\n   },\n"
            << "   \"score\": " << card->score << ",\n"
            << "   \"acceptable\": " << bit(card->acceptable) << ",\n"
            << "   \"measurements\": {\n"
            << "    \"crl_px\": " << fmt6(card->crl_px) << ",\n"
            << "    \"crl_mm\": " << fmt_opt6(card->crl_mm) << ",\n"
            << "    \"alpha_deg\": " << fmt6(card->alpha_deg) << ",\n"
            << "    \"beta_deg\": " << fmt6(card->beta_deg) << ",\n"
            << "    \"magnification_fraction\": "
            << fmt6(card->magnification_fraction) << ",\n"
            << "    \"face\": " << quoted(to_string(card->face_tag))
            << "\n   }\n  }";
        first = false;
    }
    out << (first ? "" : "\n ") << "],\n \"failures\": [";
    first = true;
    for (const ScoreFailure* f : sorted_failures(batch)) {
        out << (first ? "" : ",") << "\n  {\n"
            << "   \"image_id\": " << quoted(f->image_id) << ",\n"
            << "   \"error\": " << quoted(f->error_kind) << ",\n"
            << "   \"message\": " << quoted(f->message) << "\n  }";
        first = false;
    }
    out << (first ? "" : "\n ") << "]\n}\n";
    return out.str();
}

std::string agreement_json(const AgreementReport& report) {
    std::ostringstream out;
    out << "{\n"
        << " \"n_images\": " << report.n_images << ",\n"
        << " \"raters\": {\"candidate\": " << quoted(report.candidate_id)
        << ", \"reference\": " << quoted(report.reference_id) << "},\n"
        << " \"accepted\": {\"candidate\": " << report.candidate_accepted
        << ", \"reference\": " << report.reference_accepted << "},\n"
        << " \"criteria\": [";
    for (std::size_t j = 0; j < report.rows.size(); ++j) {
        const CriterionAgreement& row = report.rows[j];
        out << (j ? "," : "") << "\n  {\n"
            << "   \"label\": " << quoted(row.label) << ",\n"
            << "   \"confusion\": {\"tp\": " << row.cm.tp
            << ", \"fp\": " << row.cm.fp << ", \"fn\": " << row.cm.fn
            << ", \"tn\": " << row.cm.tn << "},\n"
            << "   \"accuracy\": " << fmt6(row.m.accuracy) << ",\n"
            << "   \"precision\": " << fmt_opt6(row.m.precision) << ",\n"
            << "   \"recall\": " << fmt_opt6(row.m.recall) << ",\n"
            << "   \"kappa\": ";
        if (row.kappa) {
            out << "{\"estimate\": " << fmt6(row.kappa->kappa)
                << ", \"ci_low\": " << fmt6(row.kappa->ci_low)
                << ", \"ci_high\": " << fmt6(row.kappa->ci_high)
                << ", \"p_value\": " << fmt6(row.kappa->p_value) << "}";
        } else {
            out << "null";
        }
        out << "\n  }";
    }
    out << "\n ],\n \"cronbach_alpha\": {\n  \"candidate\": ";
    emit_alpha(out, "  ", report.candidate_alpha);
    out << ",\n  \"reference\": ";
    emit_alpha(out, "  ", report.reference_alpha);
    out << "\n }\n}\n";
    return out.str();
}

std::string agreement_markdown(const AgreementReport& report) {
    std::ostringstream out;
    out << "# Rating agreement report\n\n"
        << "Candidate rater `" << report.candidate_id
        << "` against reference rater `" << report.reference_id << "` on "
        << report.n_images << " images.\n\n"
        << "Accepted planes: " << report.candidate_accepted << " of "
        << report.n_images << " (" << report.candidate_id << "), "
        << report.reference_accepted << " of " << report.n_images << " ("
        << report.reference_id << ").\n\n";

    out << "## Per-criterion agreement\n\n"
        << "| Criterion | Accuracy (%) | Precision (%) | Recall (%) |\n"
        << "| --- | --- | --- | --- |\n";
    auto pct = [](const std::optional<double>& v) {
        return v ? fmt1(*v * 100.0) : std::string("n/a");
    };
    for (const CriterionAgreement& row : report.rows) {
        out << "| " << row.label << " | " << fmt1(row.m.accuracy * 100.0)
            << " | " << pct(row.m.precision) << " | " << pct(row.m.recall)
            << " |\n";
    }

    out << "\n## Chance-corrected agreement (linear-weighted kappa)\n\n"
        << "| Criterion | Kappa [95% CI] | p-value |\n"
        << "| --- | --- | --- |\n";
    for (const CriterionAgreement& row : report.rows) {
        out << "| " << row.label << " | ";
        if (row.kappa) {
            out << fmt3(row.kappa->kappa) << " [" << fmt3(row.kappa->ci_low)
                << ", " << fmt3(row.kappa->ci_high) << "] | "
                << fmt_p(row.kappa->p_value);
        } else {
            out << "n/a | n/a";
        }
        out << " |\n";
    }

    out << "\n## Internal consistency (Cronbach's alpha)\n\n"
        << "| Item | " << report.candidate_id << " | " << report.reference_id
        << " |\n| --- | --- | --- |\n";
    auto alpha_cell = [](const std::optional<AlphaResult>& alpha, int j) {
        if (!alpha || !alpha->alpha_if_deleted[j]) return std::string("n/a");
        return fmt3(*alpha->alpha_if_deleted[j]);
    };
    for (int j = 0; j < kCriterionCount; ++j) {
        out << "| " << kCriterionLabels[j] << " (if deleted) | "
            << alpha_cell(report.candidate_alpha, j) << " | "
            << alpha_cell(report.reference_alpha, j) << " |\n";
    }
    auto alpha_all = [](const std::optional<AlphaResult>& alpha) {
        return alpha ? fmt3(alpha->alpha_all) : std::string("n/a");
    };
    out << "| Alpha coefficient for all seven items | "
        << alpha_all(report.candidate_alpha) << " | "
        << alpha_all(report.reference_alpha) << " |\n";
    return out.str();
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DecodeError("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw DecodeError("failed writing " + path.string());
}

}  // namespace crlscore
