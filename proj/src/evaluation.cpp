#include "cpd/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

namespace cpd {

std::string EvalResult::to_json() const {
    nlohmann::ordered_json j;
    j["no_spurious"] = no_spurious;
    j["spurious_details"] = spurious_details;
    j["detected"] = detected;
    j["localization_error"] = localization_error;
    j["K_hat"] = K_hat;
    j["K"] = K;
    if (d_H) j["d_H"] = *d_H;
    if (d_W) j["d_W"] = *d_W;
    return j.dump(2);
}

EvalResult score(const Segmentation& result, const GroundTruth& truth) {
    EvalResult ev;
    ev.K = truth.K();
    ev.K_hat = result.K_hat();
    ev.detected.assign(ev.K, false);
    ev.localization_error.assign(ev.K, -1.0);

    std::vector<double> estimates;
    for (const auto& c : result.components) estimates.push_back(c.tau());

    if (ev.K == 0) {
        if (ev.K_hat > 0) {
            ev.no_spurious = false;
            ev.spurious_details.push_back("estimates under a constant signal");
        }
        if (ev.K_hat == ev.K) {
            ev.d_H = 0.0;
            ev.d_W = 0.0;
        }
        return ev;
    }

    // Windows around each true change-point, splitting each gap in half:
    // W_k = [tau_k - (tau_k - tau_{k-1})/2, tau_k + (tau_{k+1} - tau_k)/2].
    const double lo_edge = truth.tau_at(1) - (truth.tau_at(1) - 1) / 2.0;
    const double hi_edge =
        truth.tau_at(ev.K) + (truth.tau_at(ev.K + 1) - truth.tau_at(ev.K)) / 2.0;
    std::vector<int> window_count(ev.K, 0);

    for (double t : estimates) {
        if (t < lo_edge || t > hi_edge) {
            ev.no_spurious = false;
            std::ostringstream os;
            os << "estimate " << t << " outside [" << lo_edge << ", " << hi_edge << "]";
            ev.spurious_details.push_back(os.str());
            continue;
        }
        // Assign to the window containing t; shared boundaries go left.
        int k = 1;
        while (k < ev.K &&
               t > truth.tau_at(k) + (truth.tau_at(k + 1) - truth.tau_at(k)) / 2.0)
            ++k;
        ++window_count[k - 1];
        double err = std::abs(t - truth.tau_at(k));
        if (!ev.detected[k - 1] || err < ev.localization_error[k - 1]) {
            ev.detected[k - 1] = true;
            ev.localization_error[k - 1] = err;
        }
    }
    for (int k = 1; k <= ev.K; ++k) {
        if (window_count[k - 1] > 1) {
            ev.no_spurious = false;
            std::ostringstream os;
            os << window_count[k - 1] << " estimates in the window of change-point " << k;
            ev.spurious_details.push_back(os.str());
        }
    }

    if (ev.K_hat == ev.K) {
        std::vector<double> tau_true(truth.tau.begin(), truth.tau.end());
        ev.d_H = hausdorff(estimates, tau_true);
        ev.d_W = wasserstein(estimates, tau_true);
    }
    return ev;
}

BinomialCI exact_binomial_ci(int successes, int trials, double confidence) {
    if (trials < 1 || successes < 0 || successes > trials)
        throw std::invalid_argument("exact_binomial_ci: bad counts");
    if (!(confidence > 0.0 && confidence < 1.0))
        throw std::invalid_argument("exact_binomial_ci: confidence must be in (0, 1)");
    const double alpha = 1.0 - confidence;
    BinomialCI ci;
    // Clopper-Pearson by bisection on the exact tail probabilities.
    auto solve = [&](int threshold, double target) {
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            if (binom_upper_tail(threshold, {trials, mid}) < target)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    };
    // Tail is strict: binom_upper_tail(u) = P(B > u) = P(B >= u + 1).
    ci.lo = successes == 0 ? 0.0 : solve(successes - 1, alpha / 2.0);
    ci.hi = successes == trials ? 1.0 : solve(successes, 1.0 - alpha / 2.0);
    return ci;
}

std::string CampaignSummary::to_json() const {
    nlohmann::ordered_json j;
    j["runs"] = runs;
    j["false_detection_runs"] = false_detection_runs;
    j["fwer_hat"] = fwer_hat;
    j["fwer_ci"] = {{"lo", fwer_ci.lo}, {"hi", fwer_ci.hi}};
    j["power_hat"] = power_hat;
    j["mean_localization_error"] = mean_localization_error;
    j["localized_fraction"] = localized_fraction;
    j["wall_seconds"] = wall_seconds;
    return j.dump(2);
}

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t run) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (run + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

void for_each_run(int runs, int threads, const std::function<void(int)>& body) {
    if (threads <= 1 || runs <= 1) {
        for (int r = 0; r < runs; ++r) body(r);
        return;
    }
    const int workers = std::min(threads, runs);
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int r = next.fetch_add(1); r < runs; r = next.fetch_add(1)) body(r);
        });
    for (auto& t : pool) t.join();
}

}  // namespace

CampaignSummary run_fwer_campaign(const CampaignConfig& cfg) {
    if (cfg.runs < 1) throw std::invalid_argument("run_fwer_campaign: need runs >= 1");
    const auto start = std::chrono::steady_clock::now();
    const std::vector<double> theta(
        static_cast<std::size_t>(cfg.detect.p) * cfg.detect.n, 0.0);
    std::vector<char> fired(cfg.runs, 0);
    for_each_run(cfg.runs, cfg.threads, [&](int run) {
        TimeSeries series = add_noise(cfg.detect.p, cfg.detect.n, theta, cfg.noise,
                                      cfg.detect.sigma, mix_seed(cfg.seed, run));
        fired[run] = detect(series, cfg.detect).K_hat() > 0 ? 1 : 0;
    });
    CampaignSummary s;
    s.runs = cfg.runs;
    s.false_detection_runs =
        static_cast<int>(std::count(fired.begin(), fired.end(), 1));
    s.fwer_hat = static_cast<double>(s.false_detection_runs) / cfg.runs;
    s.fwer_ci = exact_binomial_ci(s.false_detection_runs, cfg.runs, 0.95);
    s.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return s;
}

CampaignSummary run_power_campaign(const CampaignConfig& cfg, const GroundTruth& truth,
                                   const std::vector<double>& localization_bounds) {
    if (cfg.runs < 1) throw std::invalid_argument("run_power_campaign: need runs >= 1");
    if (!localization_bounds.empty() &&
        static_cast<int>(localization_bounds.size()) != truth.K())
        throw std::invalid_argument("run_power_campaign: one localization bound per change-point");
    const auto start = std::chrono::steady_clock::now();
    const std::vector<double> theta = truth.theta();
    const int K = truth.K();
    std::vector<EvalResult> results(cfg.runs);
    for_each_run(cfg.runs, cfg.threads, [&](int run) {
        TimeSeries series = add_noise(truth.p, truth.n, theta, cfg.noise,
                                      cfg.detect.sigma, mix_seed(cfg.seed, run));
        results[run] = score(detect(series, cfg.detect), truth);
    });

    CampaignSummary s;
    s.runs = cfg.runs;
    s.power_hat.assign(K, 0.0);
    if (!localization_bounds.empty()) s.localized_fraction.assign(K, 0.0);
    double err_sum = 0.0;
    int err_count = 0;
    std::vector<int> localized(K, 0), detections(K, 0);
    for (const auto& ev : results) {
        if (!ev.no_spurious) ++s.false_detection_runs;
        for (int k = 0; k < K; ++k) {
            if (!ev.detected[k]) continue;
            ++detections[k];
            err_sum += ev.localization_error[k];
            ++err_count;
            if (!localization_bounds.empty() &&
                ev.localization_error[k] <= localization_bounds[k])
                ++localized[k];
        }
    }
    for (int k = 0; k < K; ++k) {
        s.power_hat[k] = static_cast<double>(detections[k]) / cfg.runs;
        if (!localization_bounds.empty())
            s.localized_fraction[k] =
                detections[k] > 0 ? static_cast<double>(localized[k]) / detections[k] : 0.0;
    }
    s.fwer_hat = static_cast<double>(s.false_detection_runs) / cfg.runs;
    s.fwer_ci = exact_binomial_ci(s.false_detection_runs, cfg.runs, 0.95);
    s.mean_localization_error = err_count > 0 ? err_sum / err_count : 0.0;
    s.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return s;
}

std::string campaign_records_csv(const CampaignConfig& cfg, const GroundTruth* truth) {
    std::ostringstream os;
    os << "run,K_hat,detected,localization_error\n";
    const std::vector<double> theta =
        truth ? truth->theta()
              : std::vector<double>(static_cast<std::size_t>(cfg.detect.p) * cfg.detect.n, 0.0);
    const int p = truth ? truth->p : cfg.detect.p;
    const int n = truth ? truth->n : cfg.detect.n;
    for (int run = 0; run < cfg.runs; ++run) {
        TimeSeries series =
            add_noise(p, n, theta, cfg.noise, cfg.detect.sigma, mix_seed(cfg.seed, run));
        Segmentation seg = detect(series, cfg.detect);
        os << run << ',' << seg.K_hat() << ',';
        if (truth) {
            EvalResult ev = score(seg, *truth);
            for (std::size_t k = 0; k < ev.detected.size(); ++k)
                os << (k ? ";" : "") << (ev.detected[k] ? 1 : 0);
            os << ',';
            for (std::size_t k = 0; k < ev.localization_error.size(); ++k)
                os << (k ? ";" : "") << ev.localization_error[k];
        } else {
            os << ',';
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace cpd
