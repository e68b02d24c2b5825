#pragma once

#include <string>
#include <vector>

#include "crlscore/agreement.hpp"
#include "crlscore/criteria.hpp"

namespace crlscore {

// A case the batch could not score, with the stable error kind for triage.
struct ScoreFailure {
    std::string image_id;
    std::string error_kind;
    std::string message;
};

struct BatchResult {
    std::vector<ScoreCard> cards;
    std::vector<ScoreFailure> failures;
};

// All serializers are deterministic: fixed key order, fixed 6-decimal reals,
// rows sorted by image id, LF line endings.  Undefined values serialize as
// JSON null, never as 0.

// Rating-table CSV of the scored cases (header image_id,c1..c7,acceptable).
std::string scores_csv(const BatchResult& batch);

// Detailed per-image JSON: criteria, score, measured quantities, failures.
std::string scores_json(const BatchResult& batch);

std::string agreement_json(const AgreementReport& report);

// Human-readable report: accuracy/precision/recall table, kappa table with
// CI and p-value, internal-consistency table, acceptance counts.
std::string agreement_markdown(const AgreementReport& report);

void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

}  // namespace crlscore
