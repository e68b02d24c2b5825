#include "crlscore/agreement.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "crlscore/errors.hpp"

namespace crlscore {

const std::array<const char*, kCriterionCount + 1> kCriterionLabels = {
    "1 - Neutral position",
    "2 - Horizontal orientation",
    "3 - Midsagittal view (palate visible)",
    "4 - Adequate magnification",
    "5 - Left caliper placement",
    "6 - Right caliper placement",
    "7 - Correct face direction",
    "8 - Acceptance of CRL measurement",
};

namespace {

constexpr double kZ95 = 1.96;

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

bool parse_bit(const std::string& cell, const std::string& context,
               int line_no) {
    if (cell == "0") return false;
    if (cell == "1") return true;
    throw DecodeError(context + " line " + std::to_string(line_no) +
                      ": expected 0 or 1, got \"" + cell + "\"");
}

// Sample variance (n-1 denominator) via the two-pass formula.
double sample_variance(const std::vector<double>& xs) {
    const std::size_t n = xs.size();
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(n - 1);
}

double cronbach_formula(double k, double item_var_sum, double total_var) {
    return k / (k - 1.0) * (1.0 - item_var_sum / total_var);
}

}  // namespace

RaterTable RaterTable::from_csv(const std::filesystem::path& path,
                                std::string rater_id) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DecodeError("cannot open " + path.string());

    const std::string context = path.filename().string();
    RaterTable table;
    table.rater_id = std::move(rater_id);

    std::string line;
    int line_no = 0;
    std::map<std::string, bool> seen;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        const std::vector<std::string> cells = split_csv_line(line);
        if (line_no == 1) {
            static const char* kHeader =
                "image_id,c1,c2,c3,c4,c5,c6,c7,acceptable";
            if (line != kHeader)
                throw DecodeError(context + ": expected header \"" +
                                  kHeader + "\"");
            continue;
        }
        if (cells.size() != 9)
            throw DecodeError(context + " line " + std::to_string(line_no) +
                              ": expected 9 cells, got " +
                              std::to_string(cells.size()));

        RaterRow row;
        row.image_id = cells[0];
        if (row.image_id.empty())
            throw DecodeError(context + " line " + std::to_string(line_no) +
                              ": empty image id");
        if (!seen.emplace(row.image_id, true).second)
            throw DecodeError(context + ": duplicate image id \"" +
                              row.image_id + "\"");
        for (int j = 0; j < kCriterionCount; ++j)
            row.criteria[j] = parse_bit(cells[1 + j], context, line_no);
        row.acceptable = parse_bit(cells[8], context, line_no);
        table.rows.push_back(std::move(row));
    }
    if (table.rows.empty())
        throw DecodeError(context + ": no data rows");
    return table;
}

RaterTable RaterTable::from_scorecards(std::string rater_id,
                                       const std::vector<ScoreCard>& cards) {
    RaterTable table;
    table.rater_id = std::move(rater_id);
    table.rows.reserve(cards.size());
    for (const ScoreCard& card : cards) {
        RaterRow row;
        row.image_id = card.image_id;
        row.criteria = card.criteria_bits();
        row.acceptable = card.acceptable;
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::string RaterTable::to_csv() const {
    std::vector<const RaterRow*> sorted;
    sorted.reserve(rows.size());
    for (const RaterRow& row : rows) sorted.push_back(&row);
    std::sort(sorted.begin(), sorted.end(),
              [](const RaterRow* a, const RaterRow* b) {
                  return a->image_id < b->image_id;
              });

    std::ostringstream out;
    out << "image_id,c1,c2,c3,c4,c5,c6,c7,acceptable\n";
    for (const RaterRow* row : sorted) {
        out << row->image_id;
        for (bool bit : row->criteria) out << ',' << (bit ? '1' : '0');
        out << ',' << (row->acceptable ? '1' : '0') << '\n';
    }
    return out.str();
}

void RaterTable::write_csv(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DecodeError("cannot open " + path.string() + " for writing");
    out << to_csv();
}

ConfusionMatrix confusion(const std::vector<int>& truth,
                          const std::vector<int>& predicted) {
    if (truth.size() != predicted.size())
        throw PairingError("rating vectors differ in length: " +
                           std::to_string(truth.size()) + " vs " +
                           std::to_string(predicted.size()));
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool t = truth[i] != 0;
        const bool p = predicted[i] != 0;
        if (t && p)
            ++cm.tp;
        else if (!t && p)
            ++cm.fp;
        else if (t && !p)
            ++cm.fn;
        else
            ++cm.tn;
    }
    return cm;
}

Metrics metrics(const ConfusionMatrix& cm) {
    Metrics m;
    const long n = cm.total();
    if (n == 0) throw std::invalid_argument("empty confusion matrix");
    m.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(n);
    if (cm.tp + cm.fp > 0)
        m.precision =
            static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp);
    if (cm.tp + cm.fn > 0)
        m.recall =
            static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
    return m;
}

KappaResult weighted_kappa(const std::vector<int>& truth,
                           const std::vector<int>& predicted, int k) {
    if (truth.size() != predicted.size())
        throw PairingError("rating vectors differ in length: " +
                           std::to_string(truth.size()) + " vs " +
                           std::to_string(predicted.size()));
    if (k < 2) throw std::invalid_argument("need at least two categories");
    if (truth.size() < 2)
        throw std::invalid_argument("need at least two paired ratings");

    const std::size_t n = truth.size();
    std::vector<double> table(static_cast<std::size_t>(k) * k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const int t = truth[i];
        const int p = predicted[i];
        if (t < 0 || t >= k || p < 0 || p >= k)
            throw std::invalid_argument("category code outside 0..k-1");
        table[static_cast<std::size_t>(t) * k + p] += 1.0;
    }

    // Proportions, marginals and linear agreement weights
    // w_ij = 1 - |i-j|/(k-1).
    std::vector<double> pr(table);
    for (double& v : pr) v /= static_cast<double>(n);

    std::vector<double> row(k, 0.0), col(k, 0.0);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            row[i] += pr[static_cast<std::size_t>(i) * k + j];
            col[j] += pr[static_cast<std::size_t>(i) * k + j];
        }

    auto weight = [k](int i, int j) {
        return 1.0 - std::abs(i - j) / static_cast<double>(k - 1);
    };

    double po = 0.0, pe = 0.0;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            const double w = weight(i, j);
            po += w * pr[static_cast<std::size_t>(i) * k + j];
            pe += w * row[i] * col[j];
        }

    if (pe >= 1.0)
        throw DegenerateMarginals(
            "chance agreement is total; kappa undefined");

    const double kappa = (po - pe) / (1.0 - pe);

    // Asymptotic variances (Fleiss / Cohen / Everitt).  w_bar_row[i] is the
    // column-marginal average weight of truth category i, w_bar_col[j] the
    // row-marginal average for predicted category j.
    std::vector<double> w_bar_row(k, 0.0), w_bar_col(k, 0.0);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            w_bar_row[i] += col[j] * weight(i, j);
            w_bar_col[j] += row[i] * weight(i, j);
        }

    double sum_var = 0.0, sum_var0 = 0.0;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            const double w = weight(i, j);
            const double t1 = w - (w_bar_row[i] + w_bar_col[j]) * (1.0 - kappa);
            sum_var += pr[static_cast<std::size_t>(i) * k + j] * t1 * t1;
            const double t0 = w - (w_bar_row[i] + w_bar_col[j]);
            sum_var0 += row[i] * col[j] * t0 * t0;
        }

    const double denom =
        static_cast<double>(n) * (1.0 - pe) * (1.0 - pe);
    const double bias = kappa - pe * (1.0 - kappa);
    // Analytically non-negative; clamp the float residue of degenerate
    // marginals (e.g. a constant rater) instead of letting sqrt go NaN.
    const double var = std::max((sum_var - bias * bias) / denom, 0.0);
    const double var0 = std::max((sum_var0 - pe * pe) / denom, 0.0);

    KappaResult result;
    result.kappa = kappa;
    result.n = static_cast<long>(n);
    const double se = std::sqrt(var);
    result.ci_low = kappa - kZ95 * se;
    result.ci_high = kappa + kZ95 * se;
    const double se0 = std::sqrt(var0);
    if (se0 == 0.0)
        result.p_value = kappa == 0.0 ? 1.0 : 0.0;
    else
        result.p_value = std::erfc(std::abs(kappa / se0) / std::sqrt(2.0));
    return result;
}

AlphaResult cronbach_alpha(
    const std::vector<std::array<bool, kCriterionCount>>& items) {
    const std::size_t n = items.size();
    if (n < 2) throw std::invalid_argument("need at least two rated images");

    std::vector<int> totals(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (int j = 0; j < kCriterionCount; ++j)
            totals[i] += items[i][j] ? 1 : 0;

    // Integer totals make the zero-variance test exact.
    if (std::all_of(totals.begin(), totals.end(),
                    [&](int t) { return t == totals[0]; }))
        throw ZeroVariance("total score is constant across images");

    auto column = [&](int j) {
        std::vector<double> xs(n);
        for (std::size_t i = 0; i < n; ++i) xs[i] = items[i][j] ? 1.0 : 0.0;
        return xs;
    };

    std::array<double, kCriterionCount> item_var{};
    for (int j = 0; j < kCriterionCount; ++j)
        item_var[j] = sample_variance(column(j));

    std::vector<double> total_xs(totals.begin(), totals.end());
    const double total_var = sample_variance(total_xs);

    AlphaResult result;
    double item_var_sum = 0.0;
    for (double v : item_var) item_var_sum += v;
    result.alpha_all =
        cronbach_formula(kCriterionCount, item_var_sum, total_var);

    for (int drop = 0; drop < kCriterionCount; ++drop) {
        std::vector<double> reduced(n);
        bool constant = true;
        for (std::size_t i = 0; i < n; ++i) {
            reduced[i] = totals[i] - (items[i][drop] ? 1 : 0);
            if (reduced[i] != reduced[0]) constant = false;
        }
        if (constant) continue;  // leave-one-out alpha undefined
        const double reduced_var = sample_variance(reduced);
        result.alpha_if_deleted[drop] = cronbach_formula(
            kCriterionCount - 1, item_var_sum - item_var[drop], reduced_var);
    }
    return result;
}

AgreementReport compare_tables(const RaterTable& candidate,
                               const RaterTable& reference) {
    std::map<std::string, const RaterRow*> cand_by_id, ref_by_id;
    for (const RaterRow& row : candidate.rows) cand_by_id[row.image_id] = &row;
    for (const RaterRow& row : reference.rows) ref_by_id[row.image_id] = &row;

    if (cand_by_id.size() != candidate.rows.size() ||
        ref_by_id.size() != reference.rows.size())
        throw PairingError("rating table contains duplicate image ids");
    if (cand_by_id.size() != ref_by_id.size())
        throw PairingError("rating tables cover different image counts: " +
                           std::to_string(cand_by_id.size()) + " vs " +
                           std::to_string(ref_by_id.size()));
    for (const auto& [id, row] : ref_by_id)
        if (!cand_by_id.count(id))
            throw PairingError("image \"" + id +
                               "\" rated by reference but not candidate");

    AgreementReport report;
    report.n_images = static_cast<long>(ref_by_id.size());
    report.candidate_id = candidate.rater_id;
    report.reference_id = reference.rater_id;

    // Aligned by sorted image id.
    std::vector<const RaterRow*> cand, ref;
    for (const auto& [id, row] : cand_by_id) cand.push_back(row);
    for (const auto& [id, row] : ref_by_id) ref.push_back(row);

    for (int j = 0; j <= kCriterionCount; ++j) {
        std::vector<int> truth, pred;
        truth.reserve(ref.size());
        pred.reserve(cand.size());
        for (std::size_t i = 0; i < ref.size(); ++i) {
            if (j < kCriterionCount) {
                truth.push_back(ref[i]->criteria[j] ? 1 : 0);
                pred.push_back(cand[i]->criteria[j] ? 1 : 0);
            } else {
                truth.push_back(ref[i]->acceptable ? 1 : 0);
                pred.push_back(cand[i]->acceptable ? 1 : 0);
            }
        }

        CriterionAgreement& row = report.rows[j];
        row.label = kCriterionLabels[j];
        row.cm = confusion(truth, pred);
        row.m = metrics(row.cm);
        try {
            row.kappa = weighted_kappa(truth, pred, 2);
        } catch (const DegenerateMarginals&) {
            row.kappa = std::nullopt;
        }
    }

    for (const RaterRow* row : cand)
        report.candidate_accepted += row->acceptable ? 1 : 0;
    for (const RaterRow* row : ref)
        report.reference_accepted += row->acceptable ? 1 : 0;

    auto alpha_of = [](const std::vector<const RaterRow*>& rows)
        -> std::optional<AlphaResult> {
        std::vector<std::array<bool, kCriterionCount>> items;
        items.reserve(rows.size());
        for (const RaterRow* row : rows) items.push_back(row->criteria);
        try {
            return cronbach_alpha(items);
        } catch (const ZeroVariance&) {
            return std::nullopt;
        }
    };
    report.candidate_alpha = alpha_of(cand);
    report.reference_alpha = alpha_of(ref);
    return report;
}

}  // namespace crlscore
