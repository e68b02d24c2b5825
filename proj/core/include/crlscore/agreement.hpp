#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "crlscore/criteria.hpp"

namespace crlscore {

inline constexpr int kCriterionCount = 7;

extern const std::array<const char*, kCriterionCount + 1> kCriterionLabels;

// One image's ratings from one rater.
struct RaterRow {
    std::string image_id;
    std::array<bool, kCriterionCount> criteria{};
    bool acceptable = false;
};

// A full rating table, one row per image.
struct RaterTable {
    std::string rater_id;
    std::vector<RaterRow> rows;

    // Parses the canonical CSV layout (header image_id,c1..c7,acceptable,
    // 0/1 cells, UTF-8, LF or CRLF).  Duplicate image ids and malformed
    // cells throw DecodeError.  The acceptable column is taken at face
    // value: human raters may overrule the score rule.
    static RaterTable from_csv(const std::filesystem::path& path,
                               std::string rater_id);

    static RaterTable from_scorecards(std::string rater_id,
                                      const std::vector<ScoreCard>& cards);

    std::string to_csv() const;  // rows sorted by image_id
    void write_csv(const std::filesystem::path& path) const;
};

struct ConfusionMatrix {
    long tp = 0;
    long fp = 0;
    long fn = 0;
    long tn = 0;

    long total() const noexcept { return tp + fp + fn + tn; }
};

// Binary confusion counts for paired ratings (1 = positive).  Throws
// PairingError when the vectors differ in length.
ConfusionMatrix confusion(const std::vector<int>& truth,
                          const std::vector<int>& predicted);

// Precision/recall are undefined (not zero) when their denominator is 0.
struct Metrics {
    double accuracy = 0.0;
    std::optional<double> precision;
    std::optional<double> recall;
};

Metrics metrics(const ConfusionMatrix& cm);

// Cohen's kappa with linear agreement weights, plus the asymptotic 95%
// confidence interval and the two-sided p-value for the no-agreement null.
struct KappaResult {
    double kappa = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double p_value = 1.0;
    long n = 0;
};

// `truth` and `predicted` carry category codes 0..k-1.  Throws PairingError
// on length mismatch, std::invalid_argument on bad codes / k < 2 / fewer
// than two pairs, and DegenerateMarginals when chance agreement is total.
KappaResult weighted_kappa(const std::vector<int>& truth,
                           const std::vector<int>& predicted, int k);

// Cronbach's alpha over the seven criterion items of one rater, with the
// leave-one-item-out variant per criterion (entries are undefined when the
// remaining total score is constant).
struct AlphaResult {
    double alpha_all = 0.0;
    std::array<std::optional<double>, kCriterionCount> alpha_if_deleted{};
};

// Throws ZeroVariance when the total score never varies across images, and
// std::invalid_argument for fewer than two rows.
AlphaResult cronbach_alpha(
    const std::vector<std::array<bool, kCriterionCount>>& items);

// One comparison row: a criterion (or overall acceptance) of the candidate
// rater against the reference rater.
struct CriterionAgreement {
    std::string label;
    ConfusionMatrix cm;
    Metrics m;
    std::optional<KappaResult> kappa;  // nullopt when marginals degenerate
};

struct AgreementReport {
    long n_images = 0;
    std::string candidate_id;
    std::string reference_id;
    long candidate_accepted = 0;
    long reference_accepted = 0;
    std::array<CriterionAgreement, kCriterionCount + 1> rows;
    std::optional<AlphaResult> candidate_alpha;  // nullopt on zero variance
    std::optional<AlphaResult> reference_alpha;
};

// Aligns the two tables by image id (throws PairingError if the id sets
// differ) and computes the full report, reference acting as ground truth.
AgreementReport compare_tables(const RaterTable& candidate,
                               const RaterTable& reference);

}  // namespace crlscore
