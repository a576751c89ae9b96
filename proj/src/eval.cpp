// SPDX-License-Identifier: Apache-2.0
#include "eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "error.hpp"

namespace sedd {

double psnr_from_mse(double mse) {
    if (mse <= 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(1.0 / mse);
}

double psnr(const ImageRecord& original, const ImageRecord& reconstructed) {
    if (original.height != reconstructed.height ||
        original.width != reconstructed.width) {
        throw ShapeError("psnr: image dimensions differ");
    }
    return psnr_from_mse(mse_loss(flatten_image(original), flatten_image(reconstructed)));
}

FloatVector baseline_mean_image(const PairDataset& dataset) {
    const auto rows = dataset.rows_in(Split::Train);
    if (rows.empty()) {
        throw ConfigError("baseline_mean_image: empty train split");
    }
    std::vector<double> acc(dataset.target_dim, 0.0);
    for (std::size_t row : rows) {
        const FloatVector& t = dataset.targets[row];
        for (std::size_t i = 0; i < t.size(); ++i) acc[i] += t[i];
    }
    FloatVector mean(dataset.target_dim);
    for (std::size_t i = 0; i < mean.size(); ++i) {
        mean[i] = static_cast<float>(acc[i] / static_cast<double>(rows.size()));
    }
    return mean;
}

namespace {

void finalize_report(ReconstructionReport& report) {
    std::vector<double> mses;
    mses.reserve(report.per_image.size());
    double sum = 0.0;
    for (const ImageScore& s : report.per_image) {
        mses.push_back(s.mse);
        sum += s.mse;
    }
    report.mean_mse = sum / static_cast<double>(mses.size());
    std::sort(mses.begin(), mses.end());
    const std::size_t m = mses.size();
    report.median_mse = (m % 2 == 1) ? mses[m / 2]
                                     : 0.5 * (mses[m / 2 - 1] + mses[m / 2]);
    report.worst_mse = mses.back();
    report.beats_baseline = report.mean_mse < report.baseline_mse;
}

}  // namespace

ReconstructionReport evaluate_decoder(const DecoderModel& decoder,
                                      const PairDataset& dataset, Split split) {
    const auto rows = dataset.rows_in(split);
    if (rows.empty()) {
        throw ConfigError("evaluate_decoder: selected split has no rows");
    }

    const FloatVector baseline = baseline_mean_image(dataset);

    ReconstructionReport report;
    double baseline_sum = 0.0;
    for (std::size_t row : rows) {
        const FloatVector y = net_infer(decoder.net, dataset.encodings[row]);
        ImageScore s;
        s.source_id = dataset.source_ids.empty() ? std::to_string(row)
                                                 : dataset.source_ids[row];
        if (s.source_id.empty()) s.source_id = std::to_string(row);
        s.mse = mse_loss(y, dataset.targets[row]);
        s.psnr = psnr_from_mse(s.mse);
        report.per_image.push_back(std::move(s));
        baseline_sum += mse_loss(baseline, dataset.targets[row]);
    }
    report.baseline_mse = baseline_sum / static_cast<double>(rows.size());
    finalize_report(report);
    return report;
}

ReconstructionReport adversary_attack(const EncoderModel& captured_encoder,
                                      const std::vector<ImageRecord>& attacker_corpus,
                                      const PairDataset& defender_dataset,
                                      const TrainingConfig& config,
                                      const std::vector<std::size_t>& hidden_sizes,
                                      const std::vector<float>& dropout_rates,
                                      float alpha, std::uint64_t attacker_seed) {
    if (attacker_corpus.empty()) {
        throw ConfigError("adversary_attack: attacker corpus is empty");
    }
    std::unordered_set<std::string> defender_ids(defender_dataset.source_ids.begin(),
                                                 defender_dataset.source_ids.end());
    for (const ImageRecord& img : attacker_corpus) {
        if (!img.source_id.empty() && defender_ids.count(img.source_id)) {
            throw Error(ErrorCode::Validity,
                        "adversary_attack: attacker corpus overlaps defender corpus (" +
                            img.source_id + ")");
        }
    }

    PairDataset attack_ds = build_encoding_pairs(captured_encoder, attacker_corpus);
    split_dataset(attack_ds, 0.1, attacker_seed ^ 0xA77AC4ULL);

    DecoderModel attack_decoder = init_decoder(
        captured_encoder.encoding_size(), hidden_sizes, captured_encoder.image_h,
        captured_encoder.image_w, alpha, dropout_rates, attacker_seed);
    train_decoder(attack_decoder, attack_ds, config);

    return evaluate_decoder(attack_decoder, defender_dataset, Split::Test);
}

void write_report_csv(const ReconstructionReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << "source_id,mse,psnr\n";
    for (const ImageScore& s : report.per_image) {
        out << s.source_id << ',' << s.mse << ',';
        if (std::isinf(s.psnr)) {
            out << "inf";
        } else {
            out << s.psnr;
        }
        out << '\n';
    }
    if (!out) throw IoError("failed writing " + path);
}

std::string report_summary(const ReconstructionReport& report) {
    std::ostringstream os;
    os << "images: " << report.per_image.size()
       << "\nmean mse: " << report.mean_mse
       << "\nmedian mse: " << report.median_mse
       << "\nworst mse: " << report.worst_mse
       << "\nmean psnr: " << psnr_from_mse(report.mean_mse) << " dB"
       << "\nbaseline (mean-image) mse: " << report.baseline_mse
       << "\nbeats baseline: " << (report.beats_baseline ? "yes" : "no") << "\n";
    return os.str();
}

}  // namespace sedd
