// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "dataset.hpp"
#include "error.hpp"
#include "eval.hpp"
#include "test_util.hpp"

using namespace sedd;
using namespace sedd::testutil;

namespace {

PairDataset tiny_dataset(const std::vector<FloatVector>& targets,
                         const std::vector<Split>& split, std::size_t p = 4) {
    PairDataset ds;
    ds.encoding_dim = p;
    ds.target_dim = targets.front().size();
    DeterministicRng rng(3);
    for (std::size_t i = 0; i < targets.size(); ++i) {
        FloatVector enc(p);
        for (float& v : enc) v = rng.next_uniform();
        ds.encodings.push_back(enc);
        ds.targets.push_back(targets[i]);
        ds.source_ids.push_back("row" + std::to_string(i));
        ds.split.push_back(split[i]);
    }
    return ds;
}

}  // namespace

TEST_CASE("psnr_from_mse: pinned values and +inf sentinel") {
    CHECK(psnr_from_mse(0.0) == std::numeric_limits<double>::infinity());
    CHECK(psnr_from_mse(0.01) == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(psnr_from_mse(0.075) == doctest::Approx(11.2493873660830).epsilon(1e-9));
    CHECK(psnr_from_mse(1.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("psnr strictly decreases as mse increases") {
    DeterministicRng rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        const double a = 1e-6 + rng.next_uniform();
        const double b = a + 1e-6 + rng.next_uniform();
        CHECK(psnr_from_mse(a) > psnr_from_mse(b));
    }
}

TEST_CASE("psnr on images: identical images are +inf, known offset matches") {
    ImageRecord a(2, 2), b(2, 2);
    std::fill(a.pixels.begin(), a.pixels.end(), 100);
    b.pixels = a.pixels;
    CHECK(psnr(a, b) == std::numeric_limits<double>::infinity());

    // uniform offset of 51/255 = 0.2 -> mse 0.04 -> 10*log10(1/0.04)
    std::fill(b.pixels.begin(), b.pixels.end(), 151);
    CHECK(psnr(a, b) == doctest::Approx(10.0 * std::log10(1.0 / 0.04)).epsilon(1e-6));
}

TEST_CASE("baseline_mean_image: degenerate and two-point closed forms") {
    // single train image: the baseline IS that image, train MSE 0
    const FloatVector a{0.1f, 0.9f, 0.4f, 0.2f, 0.6f, 0.8f};
    PairDataset single = tiny_dataset({a, a}, {Split::Train, Split::Test});
    CHECK(baseline_mean_image(single) == a);

    // two train images: midpoint; MSE vs a = mean((a-b)^2)/4
    const FloatVector b{0.5f, 0.1f, 0.8f, 0.0f, 1.0f, 0.4f};
    PairDataset two = tiny_dataset({a, b, a}, {Split::Train, Split::Train, Split::Test});
    const FloatVector mid = baseline_mean_image(two);
    double expect = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(mid[i] == doctest::Approx((a[i] + b[i]) / 2.0).epsilon(1e-7));
        const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        expect += d * d;
    }
    expect /= 4.0 * static_cast<double>(a.size());
    CHECK(mse_loss(mid, a) == doctest::Approx(expect).epsilon(1e-6));

    // constant corpus: baseline test MSE is exactly 0
    PairDataset constant = tiny_dataset({a, a, a},
                                        {Split::Train, Split::Train, Split::Test});
    CHECK(mse_loss(baseline_mean_image(constant), constant.targets[2]) == 0.0);
}

TEST_CASE("evaluate_decoder: per-image scores, aggregates, baseline flag") {
    // constant corpus: the mean-image baseline is exact (MSE 0), so an
    // untrained decoder can never beat it
    ImageRecord base(4, 4);
    for (std::size_t i = 0; i < base.pixels.size(); ++i) {
        base.pixels[i] = static_cast<std::uint8_t>((i * 37) % 256);
    }
    std::vector<ImageRecord> images(12, base);
    for (std::size_t i = 0; i < images.size(); ++i) {
        images[i].source_id = "img" + std::to_string(i);
    }
    const EncoderModel enc = init_encoder(4, 4, 3, 8, 2);
    PairDataset ds = build_encoding_pairs(enc, images);
    split_dataset(ds, 0.25, 5);

    const DecoderModel random_dec = init_decoder(8, {16}, 4, 4, 0.2f, {0.0f}, 77);
    const ReconstructionReport rep = evaluate_decoder(random_dec, ds, Split::Test);
    CHECK(rep.per_image.size() == ds.rows_in(Split::Test).size());
    CHECK_FALSE(rep.beats_baseline);
    double worst = 0.0, sum = 0.0;
    for (const ImageScore& s : rep.per_image) {
        CHECK(s.mse >= 0.0);
        CHECK(s.psnr == psnr_from_mse(s.mse));
        worst = std::max(worst, s.mse);
        sum += s.mse;
    }
    CHECK(rep.worst_mse == worst);
    CHECK(rep.mean_mse == doctest::Approx(sum / rep.per_image.size()).epsilon(1e-12));
    CHECK(rep.median_mse <= rep.worst_mse);

    // evaluation must not touch the dataset
    const PairDataset before = ds;
    evaluate_decoder(random_dec, ds, Split::Test);
    CHECK(ds.encodings == before.encodings);
    CHECK(ds.targets == before.targets);
}

TEST_CASE("evaluate_decoder: memorized constant mapping scores < 1e-3") {
    DeterministicRng rng(14);
    FloatVector enc_row(6), target(12);
    for (float& v : enc_row) v = rng.next_uniform();
    for (float& v : target) v = rng.next_uniform();
    PairDataset ds;
    ds.encoding_dim = 6;
    ds.target_dim = 12;
    for (int i = 0; i < 5; ++i) {
        ds.encodings.push_back(enc_row);
        ds.targets.push_back(target);
        ds.source_ids.push_back("c" + std::to_string(i));
        ds.split.push_back(i < 4 ? Split::Train : Split::Test);
    }
    DecoderModel dec = init_decoder(6, {16}, 2, 2, 0.2f, {0.0f}, 3);
    TrainingConfig cfg;
    cfg.learning_rate = 0.1f;
    cfg.batch_size = 4;
    cfg.max_epochs = 200;
    cfg.early_stop_test_mse = 1e-9;
    cfg.patience = 1000;
    train_decoder(dec, ds, cfg);
    const ReconstructionReport rep = evaluate_decoder(dec, ds, Split::Test);
    CHECK(rep.mean_mse < 1e-3);
    CHECK(rep.beats_baseline == (rep.mean_mse < rep.baseline_mse));
}

TEST_CASE("adversary_attack: argument validation") {
    const auto images = synth_corpus(31, 8, 4, 4);
    const EncoderModel enc = init_encoder(4, 4, 3, 8, 2);
    PairDataset ds = build_encoding_pairs(enc, images);
    split_dataset(ds, 0.25, 5);
    TrainingConfig cfg;
    cfg.max_epochs = 1;

    CHECK_THROWS_AS(adversary_attack(enc, {}, ds, cfg, {4}, {0.0f}, 0.2f, 9),
                    ConfigError);
    // reusing the defender's own images is not a disjoint-corpus attack
    CHECK_THROWS_AS(adversary_attack(enc, images, ds, cfg, {4}, {0.0f}, 0.2f, 9),
                    Error);
}

TEST_CASE("report CSV and summary") {
    const auto images = synth_corpus(41, 8, 4, 4);
    const EncoderModel enc = init_encoder(4, 4, 3, 8, 2);
    PairDataset ds = build_encoding_pairs(enc, images);
    split_dataset(ds, 0.25, 5);
    const DecoderModel dec = init_decoder(8, {8}, 4, 4, 0.2f, {0.0f}, 1);
    const ReconstructionReport rep = evaluate_decoder(dec, ds, Split::Test);

    TempDir dir("report");
    write_report_csv(rep, dir.str("report.csv"));
    std::ifstream in(dir.str("report.csv"));
    std::string header;
    std::getline(in, header);
    CHECK(header == "source_id,mse,psnr");
    std::size_t lines = 0;
    for (std::string line; std::getline(in, line);) {
        if (!line.empty()) ++lines;
    }
    CHECK(lines == rep.per_image.size());

    const std::string summary = report_summary(rep);
    CHECK(summary.find("mean") != std::string::npos);
}
