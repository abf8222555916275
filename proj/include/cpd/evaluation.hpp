#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cpd/aggregation.hpp"
#include "cpd/detect.hpp"
#include "cpd/simulation.hpp"

namespace cpd {

struct EvalResult {
    bool no_spurious = true;
    std::vector<std::string> spurious_details;
    std::vector<bool> detected;             // index k-1
    std::vector<double> localization_error; // |tau_hat - tau_k| for detected k, else -1
    int K_hat = 0;
    int K = 0;
    std::optional<double> d_H;  // present when K_hat == K
    std::optional<double> d_W;

    std::string to_json() const;
};

EvalResult score(const Segmentation& result, const GroundTruth& truth);

// Exact (Clopper-Pearson) binomial confidence interval.
struct BinomialCI {
    double lo = 0.0;
    double hi = 1.0;
};
BinomialCI exact_binomial_ci(int successes, int trials, double confidence);

struct CampaignSummary {
    int runs = 0;
    int false_detection_runs = 0;          // null runs with K_hat > 0
    double fwer_hat = 0.0;
    BinomialCI fwer_ci;
    std::vector<double> power_hat;         // per change-point detection rate
    double mean_localization_error = 0.0;  // over detections
    // Fraction of detections of change-point k with |tau_hat - tau_k| <= bound;
    // filled by run_power_campaign when a localization bound is supplied.
    std::vector<double> localized_fraction;
    double wall_seconds = 0.0;

    std::string to_json() const;
};

struct CampaignConfig {
    DetectConfig detect;
    NoiseModel noise = NoiseModel::gaussian;
    int runs = 100;
    std::uint64_t seed = 0;
    int threads = 1;
};

// Null signals only: counts runs where the full pipeline reports K_hat > 0.
CampaignSummary run_fwer_campaign(const CampaignConfig& cfg);

// Fixed truth: per-change-point detection rates and localization errors.
// localization_bounds, when non-empty, holds the per-k error bound used for
// localized_fraction (e.g. r*_k / 2).
CampaignSummary run_power_campaign(const CampaignConfig& cfg, const GroundTruth& truth,
                                   const std::vector<double>& localization_bounds = {});

// Per-run records as CSV (run, K_hat, detections, errors).
std::string campaign_records_csv(const CampaignConfig& cfg, const GroundTruth* truth);

}  // namespace cpd
