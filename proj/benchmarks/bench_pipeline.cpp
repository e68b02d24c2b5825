// Microbenchmarks for the hot path: synthetic case generation, contour
// extraction, the exhaustive farthest-pair search, full image scoring, and
// the agreement statistics.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <vector>

#include "crlscore/agreement.hpp"
#include "crlscore/criteria.hpp"
#include "crlscore/geometry.hpp"
#include "crlscore/phantom.hpp"

using namespace crlscore;

namespace {

const PhantomCase& shared_case() {
    static const PhantomCase pc = render(PhantomSpec{}, "bench");
    return pc;
}

void bm_phantom_render(benchmark::State& state) {
    std::uint32_t seed = 1;
    for (auto _ : state) {
        PhantomCase pc = render_random(seed++, "bench");
        benchmark::DoNotOptimize(pc.mask.labels().data());
    }
}
BENCHMARK(bm_phantom_render)->Unit(benchmark::kMillisecond);

void bm_extract_contours(benchmark::State& state) {
    const PhantomCase& pc = shared_case();
    for (auto _ : state) {
        auto contours = extract_contours(pc.mask);
        benchmark::DoNotOptimize(contours.data());
    }
}
BENCHMARK(bm_extract_contours)->Unit(benchmark::kMillisecond);

void bm_crl_endpoints(benchmark::State& state) {
    const PhantomCase& pc = shared_case();
    const auto contours = extract_contours(pc.mask);
    const Contour* head = find_contour(contours, kHeadLabel);
    const Contour* body = find_contour(contours, kBodyLabel);
    for (auto _ : state) {
        CrlLine line = crl_endpoints(*head, *body);
        benchmark::DoNotOptimize(line.length_px);
    }
}
BENCHMARK(bm_crl_endpoints)->Unit(benchmark::kMillisecond);

void bm_score_image(benchmark::State& state) {
    const PhantomCase& pc = shared_case();
    const CriteriaConfig cfg;
    for (auto _ : state) {
        ScoreCard card = score_image(pc.mask, &pc.frame, pc.meta, cfg);
        benchmark::DoNotOptimize(card.score);
    }
}
BENCHMARK(bm_score_image)->Unit(benchmark::kMillisecond);

void bm_weighted_kappa(benchmark::State& state) {
    std::mt19937 rng(7);
    std::bernoulli_distribution flip(0.2);
    std::bernoulli_distribution bit(0.5);
    std::vector<int> truth, pred;
    for (int i = 0; i < 200; ++i) {
        const int t = bit(rng) ? 1 : 0;
        truth.push_back(t);
        pred.push_back(flip(rng) ? 1 - t : t);
    }
    for (auto _ : state) {
        KappaResult r = weighted_kappa(truth, pred, 2);
        benchmark::DoNotOptimize(r.kappa);
    }
}
BENCHMARK(bm_weighted_kappa);

}  // namespace

BENCHMARK_MAIN();
