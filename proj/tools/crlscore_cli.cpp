// Command-line front end for the plane-quality scoring library: batch
// scoring, rater comparison, QA overlays and synthetic test data.

#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "crlscore/agreement.hpp"
#include "crlscore/criteria.hpp"
#include "crlscore/errors.hpp"
#include "crlscore/mask_io.hpp"
#include "crlscore/overlay.hpp"
#include "crlscore/phantom.hpp"
#include "crlscore/report.hpp"

namespace fs = std::filesystem;

namespace {

struct RunManifest {
    fs::path input_dir;
    std::optional<fs::path> config_path;
    fs::path output_dir;
    bool emit_overlays = false;
    int parallelism = 1;
};

crlscore::CriteriaConfig load_config(const std::optional<fs::path>& path) {
    if (!path) return crlscore::CriteriaConfig{};
    return crlscore::CriteriaConfig::from_json_file(*path);
}

struct CaseOutcome {
    std::optional<crlscore::ScoreCard> card;
    std::optional<crlscore::ScoreFailure> failure;
    std::string overlay;  // SVG text when overlays were requested
};

int cmd_score(const RunManifest& manifest) {
    crlscore::CriteriaConfig cfg;
    std::vector<std::string> ids;
    try {
        cfg = load_config(manifest.config_path);
        ids = crlscore::discover_case_ids(manifest.input_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    // Workers claim case indices; every slot is written exactly once, and
    // all file output happens afterwards from this thread in id order.
    std::vector<CaseOutcome> outcomes(ids.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= ids.size()) return;
            CaseOutcome& slot = outcomes[i];
            try {
                const crlscore::Case c = crlscore::load_case(
                    crlscore::case_paths(manifest.input_dir, ids[i]));
                slot.card = crlscore::score_image(
                    c.mask, c.frame ? &*c.frame : nullptr, c.meta, cfg);
                if (manifest.emit_overlays)
                    slot.overlay = crlscore::overlay_svg(c.mask, cfg);
            } catch (const crlscore::Error& e) {
                slot.card.reset();
                slot.failure =
                    crlscore::ScoreFailure{ids[i], e.kind(), e.what()};
            } catch (const std::exception& e) {
                slot.card.reset();
                slot.failure =
                    crlscore::ScoreFailure{ids[i], "Error", e.what()};
            }
        }
    };

    const int jobs = std::max(1, manifest.parallelism);
    std::vector<std::thread> pool;
    pool.reserve(jobs - 1);
    for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();

    crlscore::BatchResult batch;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (outcomes[i].card) batch.cards.push_back(*outcomes[i].card);
        if (outcomes[i].failure) batch.failures.push_back(*outcomes[i].failure);
    }

    try {
        fs::create_directories(manifest.output_dir);
        crlscore::write_text_file(manifest.output_dir / "scores.csv",
                                  crlscore::scores_csv(batch));
        crlscore::write_text_file(manifest.output_dir / "scores.json",
                                  crlscore::scores_json(batch));
        if (manifest.emit_overlays) {
            for (std::size_t i = 0; i < ids.size(); ++i) {
                if (!outcomes[i].overlay.empty())
                    crlscore::write_text_file(
                        manifest.output_dir / (ids[i] + ".overlay.svg"),
                        outcomes[i].overlay);
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    for (const crlscore::ScoreFailure& f : batch.failures)
        std::cerr << "failed: " << f.image_id << " [" << f.error_kind << "] "
                  << f.message << "\n";
    std::cout << "scored " << batch.cards.size() << " of " << ids.size()
              << " case(s)\n";
    return batch.cards.empty() ? 2 : 0;
}

int cmd_compare(const fs::path& candidate_csv, const fs::path& reference_csv,
                const fs::path& output_dir) {
    try {
        const crlscore::RaterTable candidate =
            crlscore::RaterTable::from_csv(candidate_csv, "ai");
        const crlscore::RaterTable reference =
            crlscore::RaterTable::from_csv(reference_csv, "expert");
        const crlscore::AgreementReport report =
            crlscore::compare_tables(candidate, reference);

        fs::create_directories(output_dir);
        crlscore::write_text_file(output_dir / "agreement.json",
                                  crlscore::agreement_json(report));
        crlscore::write_text_file(output_dir / "agreement.md",
                                  crlscore::agreement_markdown(report));
        std::cout << "compared " << report.n_images << " image(s)\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_overlay(const fs::path& mask_path,
                const std::optional<fs::path>& config_path,
                const fs::path& out_svg) {
    try {
        const crlscore::CriteriaConfig cfg = load_config(config_path);
        const crlscore::LabelMask mask = crlscore::load_mask(mask_path);
        const std::string svg = crlscore::overlay_svg(mask, cfg);
        if (out_svg.has_parent_path())
            fs::create_directories(out_svg.parent_path());
        crlscore::write_text_file(out_svg, svg);
        std::cout << "wrote " << out_svg.string() << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_phantom(const fs::path& output_dir, int count, std::uint32_t seed,
                const std::optional<double>& spacing) {
    try {
        fs::create_directories(output_dir);
        for (int i = 0; i < count; ++i) {
            char id[32];
            std::snprintf(id, sizeof(id), "phantom_%03d", i);
            crlscore::PhantomCase c =
                crlscore::render_random(seed + static_cast<std::uint32_t>(i),
                                        id);
            if (spacing) c.meta.pixel_spacing_mm = spacing;
            const crlscore::CasePaths paths =
                crlscore::case_paths(output_dir, id);
            crlscore::save_mask(c.mask, paths.mask);
            crlscore::save_frame(c.frame, paths.frame);
            crlscore::save_meta(c.meta, paths.meta);
        }
        std::cout << "wrote " << count << " case(s) to "
                  << output_dir.string() << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scores first-trimester ultrasound planes from segmentation "
                 "masks and analyses rater agreement"};
    app.require_subcommand(1);

    // score
    RunManifest manifest;
    CLI::App* score =
        app.add_subcommand("score", "Score every case in a directory");
    score->add_option("--input", manifest.input_dir, "Directory of cases")
        ->required();
    score->add_option("--output", manifest.output_dir, "Output directory")
        ->required();
    score->add_option("--config", manifest.config_path,
                      "Criteria threshold JSON");
    score->add_flag("--overlays", manifest.emit_overlays,
                    "Also write one QA overlay SVG per scored case");
    score
        ->add_option("--jobs", manifest.parallelism,
                     "Worker threads for scoring")
        ->check(CLI::PositiveNumber);

    // compare
    fs::path candidate_csv, reference_csv, compare_out;
    CLI::App* compare = app.add_subcommand(
        "compare", "Compare two rating tables (candidate vs reference)");
    compare->add_option("candidate_csv", candidate_csv, "Candidate ratings")
        ->required();
    compare->add_option("reference_csv", reference_csv, "Reference ratings")
        ->required();
    compare->add_option("--output", compare_out, "Output directory")
        ->required();

    // overlay
    fs::path overlay_mask, overlay_out;
    std::optional<fs::path> overlay_config;
    CLI::App* overlay =
        app.add_subcommand("overlay", "Render one QA overlay SVG");
    overlay->add_option("mask", overlay_mask, "Label mask PNG")->required();
    overlay->add_option("--output", overlay_out, "Output SVG path")
        ->required();
    overlay->add_option("--config", overlay_config,
                        "Criteria threshold JSON");

    // phantom
    fs::path phantom_out;
    int phantom_count = 8;
    std::uint32_t phantom_seed = 1;
    std::optional<double> phantom_spacing;
    CLI::App* phantom = app.add_subcommand(
        "phantom", "Generate synthetic cases with known geometry");
    phantom->add_option("--output", phantom_out, "Output directory")
        ->required();
    phantom->add_option("--count", phantom_count, "Number of cases")
        ->check(CLI::PositiveNumber);
    phantom->add_option("--seed", phantom_seed, "Base random seed");
    phantom
        ->add_option("--spacing", phantom_spacing,
                     "pixel_spacing_mm written to every case")
        ->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    if (score->parsed()) return cmd_score(manifest);
    if (compare->parsed())
        return cmd_compare(candidate_csv, reference_csv, compare_out);
    if (overlay->parsed())
        return cmd_overlay(overlay_mask, overlay_config, overlay_out);
    if (phantom->parsed())
        return cmd_phantom(phantom_out, phantom_count, phantom_seed,
                           phantom_spacing);
    return 1;
}
