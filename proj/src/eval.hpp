// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "dataset.hpp"
#include "decoder.hpp"

namespace sedd {

struct ImageScore {
    std::string source_id;
    double mse = 0.0;   // on the [0,1] scale
    double psnr = 0.0;  // dB; +inf when mse == 0
};

struct ReconstructionReport {
    std::vector<ImageScore> per_image;
    double mean_mse = 0.0;
    double median_mse = 0.0;
    double worst_mse = 0.0;
    double baseline_mse = 0.0;  // mean-image predictor on the same rows
    bool beats_baseline = false;
};

double psnr_from_mse(double mse);
double psnr(const ImageRecord& original, const ImageRecord& reconstructed);

// Elementwise mean of the train-split targets: the constant predictor any
// useful decoder must beat.
FloatVector baseline_mean_image(const PairDataset& dataset);

ReconstructionReport evaluate_decoder(const DecoderModel& decoder,
                                      const PairDataset& dataset,
                                      Split split = Split::Test);

// The captured-key experiment: build pairs from the attacker's own corpus
// with the captured encoder, train a fresh decoder, and score it against
// the defender's held-out rows.
ReconstructionReport adversary_attack(const EncoderModel& captured_encoder,
                                      const std::vector<ImageRecord>& attacker_corpus,
                                      const PairDataset& defender_dataset,
                                      const TrainingConfig& config,
                                      const std::vector<std::size_t>& hidden_sizes,
                                      const std::vector<float>& dropout_rates,
                                      float alpha, std::uint64_t attacker_seed);

// CSV: `source_id,mse,psnr`, one row per scored image.
void write_report_csv(const ReconstructionReport& report, const std::string& path);
std::string report_summary(const ReconstructionReport& report);

}  // namespace sedd
