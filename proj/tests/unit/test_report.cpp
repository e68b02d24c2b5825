#include <doctest.h>

#include <string>

#include "crlscore/agreement.hpp"
#include "crlscore/report.hpp"
#include "test_util.hpp"

using namespace crlscore;

namespace {

ScoreCard make_card(const std::string& id, int passes) {
    ScoreCard c;
    c.image_id = id;
    c.c1_neutral = passes > 0;
    c.c2_horizontal = passes > 1;
    c.c3_midsagittal = passes > 2;
    c.c4_magnification = passes > 3;
    c.c5_left_caliper = passes > 4;
    c.c6_right_caliper = passes > 5;
    c.c7_face = passes > 6;
    c.crl_px = 100.0 + passes;
    c.alpha_deg = 3.25;
    c.beta_deg = 150.5;
    c.magnification_fraction = 0.65;
    c.finalize();
    return c;
}

std::size_t count_occurrences(const std::string& text,
                              const std::string& needle) {
    std::size_t n = 0;
    for (std::size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size()))
        ++n;
    return n;
}

}  // namespace

TEST_CASE("scores csv is sorted with one bit per criterion") {
    BatchResult batch;
    batch.cards.push_back(make_card("zeta", 7));
    batch.cards.push_back(make_card("alpha", 2));

    const std::string csv = scores_csv(batch);
    CHECK(csv ==
          "image_id,c1,c2,c3,c4,c5,c6,c7,acceptable\n"
          "alpha,1,1,0,0,0,0,0,0\n"
          "zeta,1,1,1,1,1,1,1,1\n");
}

TEST_CASE("scores json reports tri-state calipers and undefined lengths") {
    BatchResult batch;
    ScoreCard card = make_card("p", 4);
    card.c5_left_caliper.reset();
    card.c6_right_caliper = false;
    card.crl_mm.reset();
    batch.cards = {card};

    const std::string json = scores_json(batch);
    CHECK(json.find("\"c5_left_caliper\": null") != std::string::npos);
    CHECK(json.find("\"c6_right_caliper\": false") != std::string::npos);
    CHECK(json.find("\"crl_mm\": null") != std::string::npos);
    CHECK(json.find("\"crl_px\": 104.000000") != std::string::npos);
    CHECK(json.find("\"alpha_deg\": 3.250000") != std::string::npos);
    CHECK(json.find("\"acceptable\": true") != std::string::npos);

    // Physical length appears with fixed decimals when spacing was known.
    ScoreCard with_mm = make_card("q", 4);
    with_mm.crl_mm = 10.4;
    batch.cards = {with_mm};
    CHECK(scores_json(batch).find("\"crl_mm\": 10.400000") !=
          std::string::npos);
}

TEST_CASE("scores json folds negative zero and escapes ids") {
    BatchResult batch;
    ScoreCard card = make_card("we\"ird\\id", 3);
    card.alpha_deg = -0.0;
    batch.cards = {card};

    const std::string json = scores_json(batch);
    CHECK(json.find("\"alpha_deg\": 0.000000") != std::string::npos);
    CHECK(json.find("we\\\"ird\\\\id") != std::string::npos);
}

TEST_CASE("scores json lists failures sorted by image id") {
    BatchResult batch;
    batch.failures.push_back({"late", "LabelError", "bad label 9"});
    batch.failures.push_back({"early", "NoJunction", "regions disjoint"});

    const std::string json = scores_json(batch);
    CHECK(json.find("\"error\": \"LabelError\"") != std::string::npos);
    CHECK(json.find("\"error\": \"NoJunction\"") != std::string::npos);
    CHECK(json.find("\"early\"") < json.find("\"late\""));
}

TEST_CASE("serialization is deterministic and order-insensitive") {
    BatchResult forward;
    forward.cards = {make_card("a", 2), make_card("b", 5),
                     make_card("c", 7)};
    BatchResult reversed;
    reversed.cards = {make_card("c", 7), make_card("b", 5),
                      make_card("a", 2)};

    CHECK(scores_csv(forward) == scores_csv(reversed));
    CHECK(scores_json(forward) == scores_json(reversed));
    CHECK(scores_json(forward) == scores_json(forward));
}

TEST_CASE("agreement serializers carry the full table structure") {
    // Criterion 1 agrees everywhere with a single class, so its kappa is
    // undefined and must render as n/a rather than a number.
    testutil::TempDir dir("report");
    const char* text =
        "image_id,c1,c2,c3,c4,c5,c6,c7,acceptable\n"
        "a,1,1,1,1,1,1,1,1\n"
        "b,1,0,1,0,1,0,1,1\n"
        "c,1,1,0,0,1,1,0,0\n";
    testutil::write_text(dir / "t.csv", text);
    const RaterTable cand = RaterTable::from_csv(dir / "t.csv", "ai");
    const RaterTable ref = RaterTable::from_csv(dir / "t.csv", "expert");
    const AgreementReport rep = compare_tables(cand, ref);

    REQUIRE_FALSE(rep.rows[0].kappa.has_value());
    REQUIRE(rep.rows[1].kappa.has_value());

    const std::string json = agreement_json(rep);
    CHECK(json.find("\"n_images\": 3") != std::string::npos);
    CHECK(json.find("\"candidate\": \"ai\"") != std::string::npos);
    CHECK(json.find("\"kappa\": null") != std::string::npos);
    CHECK(json.find("\"estimate\": 1.000000") != std::string::npos);
    CHECK(json.find("\"cronbach_alpha\"") != std::string::npos);
    CHECK(agreement_json(rep) == json);  // deterministic

    const std::string md = agreement_markdown(rep);
    CHECK(count_occurrences(md, "\n## ") == 3);
    CHECK(md.find("## Per-criterion agreement") != std::string::npos);
    CHECK(md.find("## Chance-corrected agreement (linear-weighted kappa)") !=
          std::string::npos);
    CHECK(md.find("## Internal consistency (Cronbach's alpha)") !=
          std::string::npos);
    for (const char* label : kCriterionLabels)
        CHECK(count_occurrences(md, label) >= 2);  // metric + kappa tables
    CHECK(count_occurrences(md, "(if deleted)") == 7);
    CHECK(md.find("Alpha coefficient for all seven items") !=
          std::string::npos);
    CHECK(md.find("n/a") != std::string::npos);
    CHECK(md.find("8 - Acceptance of CRL measurement") != std::string::npos);
}

TEST_CASE("text files are written byte-exact") {
    testutil::TempDir dir("report");
    const std::string content = "line one\nline two\n";
    write_text_file(dir / "out.txt", content);
    CHECK(testutil::read_text(dir / "out.txt") == content);
}
