#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cpd/grid.hpp"
#include "cpd/stats.hpp"

namespace cpd {

// True segmentation: change-points with sentinels tau_0 = 1, tau_{K+1} = n+1
// and the K+1 segment mean vectors.
struct GroundTruth {
    int n = 0;
    int p = 0;
    std::vector<int> tau;                  // interior change-points, ascending
    std::vector<std::vector<double>> mus;  // K+1 vectors of length p

    int K() const { return static_cast<int>(tau.size()); }
    int tau_at(int k) const;               // k in [0, K+1], with sentinels

    // Derived per change-point k in [1, K]:
    double height(int k) const;            // Delta_k = ||mu_k - mu_{k-1}||
    int length(int k) const;               // r_k = min(tau_{k+1}-tau_k, tau_k-tau_{k-1})
    int sparsity(int k) const;             // s_k = ||mu_k - mu_{k-1}||_0

    std::vector<double> theta() const;     // row-major p x n piecewise-constant mean
    std::string to_json() const;
};

GroundTruth make_signal(int n, int p, std::vector<int> tau,
                        std::vector<std::vector<double>> mus);

enum class NoiseModel { gaussian, scaled_rademacher, uniform };

NoiseModel noise_model_from_string(const std::string& name);
const char* to_string(NoiseModel m);
// psi_2 norm of the given noise model at std sigma.
double noise_psi2(NoiseModel m, double sigma);

TimeSeries add_noise(const GroundTruth& truth, NoiseModel model, double sigma,
                     std::uint64_t seed);
// Noise around an arbitrary mean matrix (row-major p x n).
TimeSeries add_noise(int p, int n, const std::vector<double>& theta,
                     NoiseModel model, double sigma, std::uint64_t seed);

struct EnergyConstants {
    double c0 = 8.0;
    double kappa_d = 8.0;
    double kappa_s = 8.0;
};

struct EnergyConfig {
    int n = 0;
    int p = 0;
    double sigma = 1.0;
    double delta = 0.1;
    std::vector<int> scales;  // grid scale set R, ascending (Gaussian regime)
    double L = 0.0;           // > 0 switches to the sub-Gaussian thresholds
};

struct ChangePointEnergy {
    int k = 0;
    double energy = 0.0;            // r_k * Delta_k^2
    double gaussian_threshold = 0.0;     // c0-high-energy RHS
    double subgaussian_threshold = 0.0;  // sub-Gaussian c0 RHS (needs L)
    bool high_energy = false;
    bool dense_high_energy = false;
    bool sparse_high_energy = false;
    int r_star = 0;        // minimal integer radius clearing the c0 condition
    int r_bar_dense = 0;   // 0 when the regime does not apply
    int r_bar_sparse = 0;
    int r_bar = 0;         // min of the applicable r_bar values
};

struct EnergyReport {
    std::vector<ChangePointEnergy> points;  // index k-1
};

EnergyReport classify_energy(const GroundTruth& truth, const EnergyConfig& cfg,
                             const EnergyConstants& constants = {});

// Anchor (tau_bar, r_bar) for a change-point: nearest location in D_{r_bar},
// ties to the left.
GridPoint nearest_anchor(const Grid& grid, int r_bar, int tau);

enum class LowerBoundCase { sparse, dense, single };

struct LowerBoundParams {
    LowerBoundCase kind = LowerBoundCase::sparse;
    int n = 0;
    int p = 0;
    int r = 1;       // <= n/4
    int s = 1;       // <= p
    double u = 0.125;  // in (0, 1/8]
    double sigma = 1.0;
};

// One draw from the adversarial prior for the given case: a one-sided bump of
// width r on a sparse support, with height tuned to sit at the detection
// boundary of the configured class.
GroundTruth lower_bound_instance(const LowerBoundParams& params, std::uint64_t seed);

// Membership check for the class P-bar(r, s): every change-point clears the
// boundary energy at level u, min_k r_k >= r, max_k s_k <= s.
bool lower_bound_class_member(const GroundTruth& truth, const LowerBoundParams& params);

}  // namespace cpd
