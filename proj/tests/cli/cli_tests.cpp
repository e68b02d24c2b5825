// Drives the installed command-line binary end to end through a shell,
// checking exit codes and the files it leaves behind.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "crlscore/mask_io.hpp"
#include "crlscore/phantom.hpp"

#include "../unit/test_util.hpp"

namespace fs = std::filesystem;
using namespace crlscore;
using testutil::TempDir;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout and stderr combined
};

RunResult run_cli(const std::string& args, const fs::path& scratch) {
    static int counter = 0;
    const fs::path log = scratch / ("cli_log_" + std::to_string(counter++));
    const std::string cmd = std::string("\"") + CRLSCORE_CLI_PATH + "\" " +
                            args + " > \"" + log.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult r;
    if (status != -1 && WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
    r.output = testutil::read_text(log);
    return r;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

// Writes a small, fully healthy corpus and returns its case ids.
std::vector<std::string> write_corpus(const fs::path& dir, int count,
                                      std::uint32_t seed) {
    std::vector<std::string> ids;
    for (int i = 0; i < count; ++i) {
        const std::string id = "case_" + std::to_string(i);
        const PhantomCase c =
            render_random(seed + static_cast<std::uint32_t>(i), id);
        const CasePaths paths = case_paths(dir, id);
        save_mask(c.mask, paths.mask);
        save_frame(c.frame, paths.frame);
        save_meta(c.meta, paths.meta);
        ids.push_back(id);
    }
    return ids;
}

std::size_t line_count(const std::string& text) {
    std::size_t n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

}  // namespace

TEST_CASE("score exits with status 2 when nothing could be scored") {
    TempDir dir("cli");
    const fs::path input = dir / "empty";
    fs::create_directories(input);
    const fs::path output = dir / "out";

    const RunResult r =
        run_cli("score --input " + q(input) + " --output " + q(output),
                dir.path());
    CHECK(r.exit_code == 2);
    CHECK(testutil::read_text(output / "scores.csv") ==
          "image_id,c1,c2,c3,c4,c5,c6,c7,acceptable\n");
}

TEST_CASE("score skips broken cases but keeps the healthy ones") {
    TempDir dir("cli");
    const fs::path input = dir / "cases";
    fs::create_directories(input);
    write_corpus(input, 3, 4000);
    testutil::write_text(input / "broken.mask.png", "not a png at all");

    const fs::path output = dir / "out";
    const RunResult r =
        run_cli("score --input " + q(input) + " --output " + q(output) +
                    " --jobs 3",
                dir.path());
    CHECK(r.exit_code == 0);  // partial success still counts as success
    CHECK(r.output.find("scored 3 of 4 case(s)") != std::string::npos);
    CHECK(r.output.find("failed: broken") != std::string::npos);

    const std::string csv = testutil::read_text(output / "scores.csv");
    CHECK(line_count(csv) == 4);  // header + three scored rows

    const std::string json = testutil::read_text(output / "scores.json");
    CHECK(json.find("\"image_id\": \"broken\"") != std::string::npos);
    CHECK(json.find("\"error\": \"DecodeError\"") != std::string::npos);
}

TEST_CASE("score applies threshold overrides from a config file") {
    TempDir dir("cli");
    const fs::path input = dir / "cases";
    fs::create_directories(input);
    const PhantomCase c = render(PhantomSpec{}, "tuned");
    const CasePaths paths = case_paths(input, "tuned");
    save_mask(c.mask, paths.mask);
    save_frame(c.frame, paths.frame);
    save_meta(c.meta, paths.meta);

    const RunResult base =
        run_cli("score --input " + q(input) + " --output " +
                    q(dir / "out_default"),
                dir.path());
    CHECK(base.exit_code == 0);
    const std::string base_csv =
        testutil::read_text(dir / "out_default" / "scores.csv");
    // Default span 0.70 clears the 0.60 magnification threshold.
    CHECK(base_csv.find("tuned,") != std::string::npos);
    CHECK(base_csv.find(",1,") != std::string::npos);

    testutil::write_text(dir / "cfg.json",
                         R"({"magnification_threshold":0.9})");
    const RunResult tuned =
        run_cli("score --input " + q(input) + " --output " +
                    q(dir / "out_tuned") + " --config " + q(dir / "cfg.json"),
                dir.path());
    CHECK(tuned.exit_code == 0);
    const std::string tuned_csv =
        testutil::read_text(dir / "out_tuned" / "scores.csv");
    CHECK(tuned_csv != base_csv);

    // Criterion 4 is the fifth CSV field; it must have flipped to 0.
    const auto field = [](const std::string& csv, int index) {
        const std::size_t row = csv.find("tuned,");
        std::size_t pos = row;
        for (int i = 0; i < index; ++i) pos = csv.find(',', pos) + 1;
        return csv.substr(pos, 1);
    };
    CHECK(field(base_csv, 4) == "1");
    CHECK(field(tuned_csv, 4) == "0");

    const RunResult bad_cfg =
        run_cli("score --input " + q(input) + " --output " +
                    q(dir / "out_bad") + " --config " + q(dir / "nope.json"),
                dir.path());
    CHECK(bad_cfg.exit_code == 1);
}

TEST_CASE("score emits overlays on request") {
    TempDir dir("cli");
    const fs::path input = dir / "cases";
    fs::create_directories(input);
    write_corpus(input, 2, 5000);

    const fs::path output = dir / "out";
    const RunResult r =
        run_cli("score --input " + q(input) + " --output " + q(output) +
                    " --overlays",
                dir.path());
    CHECK(r.exit_code == 0);
    for (const char* id : {"case_0", "case_1"}) {
        const std::string svg = testutil::read_text(
            output / (std::string(id) + ".overlay.svg"));
        CHECK(svg.find("id=\"crl\"") != std::string::npos);
    }
}

TEST_CASE("score output is byte-stable across runs") {
    TempDir dir("cli");
    const fs::path input = dir / "cases";
    fs::create_directories(input);
    write_corpus(input, 4, 6000);

    REQUIRE(run_cli("score --input " + q(input) + " --output " +
                        q(dir / "a") + " --jobs 4",
                    dir.path())
                .exit_code == 0);
    REQUIRE(run_cli("score --input " + q(input) + " --output " +
                        q(dir / "b") + " --jobs 2",
                    dir.path())
                .exit_code == 0);
    CHECK(testutil::read_text(dir / "a" / "scores.csv") ==
          testutil::read_text(dir / "b" / "scores.csv"));
    CHECK(testutil::read_text(dir / "a" / "scores.json") ==
          testutil::read_text(dir / "b" / "scores.json"));
}

TEST_CASE("compare writes both agreement reports") {
    TempDir dir("cli");
    const char* table =
        "image_id,c1,c2,c3,c4,c5,c6,c7,acceptable\n"
        "a,1,1,1,1,1,1,1,1\n"
        "b,0,0,0,0,0,0,0,0\n"
        "c,1,0,1,0,1,0,1,1\n"
        "d,0,1,0,1,0,1,0,0\n";
    testutil::write_text(dir / "cand.csv", table);
    testutil::write_text(dir / "ref.csv", table);

    const fs::path output = dir / "cmp";
    const RunResult r = run_cli("compare " + q(dir / "cand.csv") + " " +
                                    q(dir / "ref.csv") + " --output " +
                                    q(output),
                                dir.path());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("compared 4 image(s)") != std::string::npos);

    const std::string json = testutil::read_text(output / "agreement.json");
    CHECK(json.find("\"n_images\": 4") != std::string::npos);
    CHECK(json.find("\"accuracy\": 1.000000") != std::string::npos);

    const std::string md = testutil::read_text(output / "agreement.md");
    CHECK(md.find("## Per-criterion agreement") != std::string::npos);
    CHECK(md.find("8 - Acceptance of CRL measurement") != std::string::npos);
}

TEST_CASE("compare refuses tables that cannot be aligned") {
    TempDir dir("cli");
    testutil::write_text(dir / "cand.csv",
                         "image_id,c1,c2,c3,c4,c5,c6,c7,acceptable\n"
                         "only_in_cand,1,1,1,1,1,1,1,1\n");
    testutil::write_text(dir / "ref.csv",
                         "image_id,c1,c2,c3,c4,c5,c6,c7,acceptable\n"
                         "only_in_ref,1,1,1,1,1,1,1,1\n");
    const RunResult r = run_cli("compare " + q(dir / "cand.csv") + " " +
                                    q(dir / "ref.csv") + " --output " +
                                    q(dir / "cmp"),
                                dir.path());
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("error:") != std::string::npos);
}

TEST_CASE("overlay renders a single svg") {
    TempDir dir("cli");
    const PhantomCase c = render(PhantomSpec{}, "solo");
    save_mask(c.mask, dir / "solo.mask.png");

    const fs::path svg_path = dir / "qa" / "solo.svg";
    const RunResult r = run_cli("overlay " + q(dir / "solo.mask.png") +
                                    " --output " + q(svg_path),
                                dir.path());
    CHECK(r.exit_code == 0);
    const std::string svg = testutil::read_text(svg_path);
    CHECK(svg.find("id=\"crl\"") != std::string::npos);
    CHECK(svg.find("id=\"alpha-label\"") != std::string::npos);

    const RunResult missing = run_cli(
        "overlay " + q(dir / "ghost.mask.png") + " --output " + q(svg_path),
        dir.path());
    CHECK(missing.exit_code == 1);
}

TEST_CASE("phantom generates a scoreable corpus") {
    TempDir dir("cli");
    const fs::path corpus = dir / "corpus";
    const RunResult gen = run_cli("phantom --output " + q(corpus) +
                                      " --count 2 --seed 9 --spacing 0.1",
                                  dir.path());
    CHECK(gen.exit_code == 0);
    CHECK(fs::exists(corpus / "phantom_000.mask.png"));
    CHECK(fs::exists(corpus / "phantom_000.frame.png"));
    CHECK(fs::exists(corpus / "phantom_000.meta.json"));
    CHECK(fs::exists(corpus / "phantom_001.mask.png"));

    const RunResult scored = run_cli(
        "score --input " + q(corpus) + " --output " + q(dir / "out"),
        dir.path());
    CHECK(scored.exit_code == 0);
    CHECK(scored.output.find("scored 2 of 2 case(s)") != std::string::npos);

    // Spacing flowed through the metadata into physical lengths.
    const std::string json = testutil::read_text(dir / "out" / "scores.json");
    CHECK(json.find("\"crl_mm\": null") == std::string::npos);
}

TEST_CASE("bad invocations fail fast") {
    TempDir dir("cli");
    CHECK(run_cli("conjure --output x", dir.path()).exit_code != 0);
    CHECK(run_cli("score", dir.path()).exit_code != 0);  // missing options
    CHECK(run_cli("", dir.path()).exit_code != 0);
}
