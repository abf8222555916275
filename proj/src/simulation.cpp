#include "cpd/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace cpd {

int GroundTruth::tau_at(int k) const {
    if (k == 0) return 1;
    if (k == K() + 1) return n + 1;
    return tau[k - 1];
}

double GroundTruth::height(int k) const {
    const auto& a = mus[k - 1];
    const auto& b = mus[k];
    double ss = 0.0;
    for (int i = 0; i < p; ++i) ss += (b[i] - a[i]) * (b[i] - a[i]);
    return std::sqrt(ss);
}

int GroundTruth::length(int k) const {
    return std::min(tau_at(k + 1) - tau_at(k), tau_at(k) - tau_at(k - 1));
}

int GroundTruth::sparsity(int k) const {
    const auto& a = mus[k - 1];
    const auto& b = mus[k];
    int s = 0;
    for (int i = 0; i < p; ++i)
        if (b[i] != a[i]) ++s;
    return s;
}

std::vector<double> GroundTruth::theta() const {
    std::vector<double> th(static_cast<std::size_t>(p) * n);
    for (int k = 0; k <= K(); ++k) {
        for (int t = tau_at(k); t < tau_at(k + 1); ++t)
            for (int i = 0; i < p; ++i)
                th[static_cast<std::size_t>(i) * n + t - 1] = mus[k][i];
    }
    return th;
}

std::string GroundTruth::to_json() const {
    nlohmann::ordered_json j;
    j["n"] = n;
    j["p"] = p;
    j["tau"] = tau;
    j["mus"] = mus;
    nlohmann::ordered_json derived = nlohmann::ordered_json::array();
    for (int k = 1; k <= K(); ++k) {
        nlohmann::ordered_json d;
        d["k"] = k;
        d["height"] = height(k);
        d["length"] = length(k);
        d["sparsity"] = sparsity(k);
        derived.push_back(std::move(d));
    }
    j["changepoints"] = derived;
    return j.dump(2);
}

GroundTruth make_signal(int n, int p, std::vector<int> tau,
                        std::vector<std::vector<double>> mus) {
    if (n < 1 || p < 1) throw std::invalid_argument("make_signal: bad dimensions");
    if (mus.size() != tau.size() + 1)
        throw std::invalid_argument("make_signal: need K+1 mean vectors");
    int prev = 1;
    for (int t : tau) {
        if (t <= prev || t > n)
            throw std::invalid_argument("make_signal: change-points must be ascending in (1, n]");
        prev = t;
    }
    for (const auto& mu : mus)
        if (static_cast<int>(mu.size()) != p)
            throw std::invalid_argument("make_signal: mean vector dimension mismatch");
    GroundTruth truth{n, p, std::move(tau), std::move(mus)};
    for (int k = 1; k <= truth.K(); ++k)
        if (truth.sparsity(k) == 0)
            throw std::invalid_argument("make_signal: consecutive means must differ");
    return truth;
}

NoiseModel noise_model_from_string(const std::string& name) {
    if (name == "gaussian") return NoiseModel::gaussian;
    if (name == "rademacher" || name == "scaled_rademacher") return NoiseModel::scaled_rademacher;
    if (name == "uniform") return NoiseModel::uniform;
    throw std::invalid_argument("unknown noise model: " + name);
}

const char* to_string(NoiseModel m) {
    switch (m) {
        case NoiseModel::gaussian: return "gaussian";
        case NoiseModel::scaled_rademacher: return "scaled_rademacher";
        default: return "uniform";
    }
}

double noise_psi2(NoiseModel m, double sigma) {
    switch (m) {
        case NoiseModel::gaussian:
            return sigma * std::sqrt(8.0 / 3.0);
        case NoiseModel::scaled_rademacher:
            return sigma / std::sqrt(std::numbers::ln2);
        default:
            // uniform on [-sigma*sqrt(3), sigma*sqrt(3)]; bounded by B implies
            // psi_2 <= B / sqrt(ln 2)
            return sigma * std::sqrt(3.0 / std::numbers::ln2);
    }
}

TimeSeries add_noise(int p, int n, const std::vector<double>& theta,
                     NoiseModel model, double sigma, std::uint64_t seed) {
    if (sigma <= 0.0) throw std::invalid_argument("add_noise: sigma must be positive");
    std::mt19937_64 rng(seed);
    std::vector<double> data(theta);
    switch (model) {
        case NoiseModel::gaussian: {
            std::normal_distribution<double> dist(0.0, sigma);
            for (auto& v : data) v += dist(rng);
            break;
        }
        case NoiseModel::scaled_rademacher: {
            std::bernoulli_distribution coin(0.5);
            for (auto& v : data) v += coin(rng) ? sigma : -sigma;
            break;
        }
        case NoiseModel::uniform: {
            const double half = sigma * std::sqrt(3.0);
            std::uniform_real_distribution<double> dist(-half, half);
            for (auto& v : data) v += dist(rng);
            break;
        }
    }
    return TimeSeries(p, n, std::move(data));
}

TimeSeries add_noise(const GroundTruth& truth, NoiseModel model, double sigma,
                     std::uint64_t seed) {
    return add_noise(truth.p, truth.n, truth.theta(), model, sigma, seed);
}

namespace {

double log_of(double n, double r, double delta) { return std::log(n / (r * delta)); }

// c0-level energy profile: s*log(1 + sqrt(p)/s * sqrt(lo)) + lo
double gaussian_profile(int p, double lo, int s) {
    return s * std::log1p(std::sqrt(static_cast<double>(p)) / s * std::sqrt(lo)) + lo;
}

double dense_profile(int p, double lo) { return std::sqrt(p * lo) + lo; }

// sparse Gaussian profile: s*log(e*p*log(e*n/(r*delta))/s^2) + log(e*n/(r*delta))
double sparse_gauss_profile(int p, double n, double r, double delta, int s) {
    double le = std::log(std::numbers::e * n / (r * delta));
    return s * std::log(std::numbers::e * p * le / (static_cast<double>(s) * s)) + le;
}

double sparse_sg_profile(int p, double lo, int s) {
    return s * std::log(std::numbers::e * p / s) + lo;
}

}  // namespace

EnergyReport classify_energy(const GroundTruth& truth, const EnergyConfig& cfg,
                             const EnergyConstants& constants) {
    if (constants.c0 <= 0.0 || constants.kappa_d <= 0.0 || constants.kappa_s <= 0.0)
        throw std::invalid_argument("classify_energy: constants must be positive");
    const double s2 = cfg.sigma * cfg.sigma;
    const bool subgaussian = cfg.L > 0.0;
    const double L2 = cfg.L * cfg.L;
    const int n = cfg.n;
    const int p = cfg.p;

    EnergyReport report;
    for (int k = 1; k <= truth.K(); ++k) {
        ChangePointEnergy e;
        e.k = k;
        const double delta2 = truth.height(k) * truth.height(k);
        const int rk = truth.length(k);
        const int sk = truth.sparsity(k);
        e.energy = rk * delta2;

        const double lok = log_of(n, rk, cfg.delta);
        e.gaussian_threshold = constants.c0 * s2 * gaussian_profile(p, lok, sk);
        double sg_profile =
            std::min(std::sqrt(p * lok), sparse_sg_profile(p, 0.0, sk)) + lok;
        e.subgaussian_threshold = subgaussian ? constants.c0 * L2 * sg_profile : 0.0;

        const bool sparse_side = sk <= std::sqrt(p * lok);
        if (!subgaussian) {
            e.high_energy = e.energy >= e.gaussian_threshold;
            e.dense_high_energy = e.energy >= constants.kappa_d * s2 * dense_profile(p, lok);
            e.sparse_high_energy =
                sparse_side &&
                e.energy >= constants.kappa_s * s2 * sparse_gauss_profile(p, n, rk, cfg.delta, sk);
            // minimal grid scale clearing the dense / sparse displays
            if (e.dense_high_energy) {
                for (int r : cfg.scales) {
                    double lo = log_of(n, r, cfg.delta);
                    if (8.0 * r * delta2 >= constants.kappa_d * s2 * dense_profile(p, lo)) {
                        e.r_bar_dense = r;
                        break;
                    }
                }
            }
            if (e.sparse_high_energy) {
                for (int r : cfg.scales) {
                    if (8.0 * r * delta2 >=
                        constants.kappa_s * s2 * sparse_gauss_profile(p, n, r, cfg.delta, sk)) {
                        e.r_bar_sparse = r;
                        break;
                    }
                }
            }
            // minimal real radius at the c0 level, scanned over integers
            if (e.high_energy) {
                for (int r = 1; r <= n; ++r) {
                    double lo = log_of(n, r, cfg.delta);
                    if (r * delta2 >= constants.c0 * s2 * gaussian_profile(p, lo, sk)) {
                        e.r_star = r;
                        break;
                    }
                }
            }
        } else {
            e.high_energy = e.energy >= e.subgaussian_threshold;
            e.dense_high_energy = e.energy >= constants.kappa_d * L2 * dense_profile(p, lok);
            e.sparse_high_energy =
                sparse_side && e.energy >= constants.kappa_s * L2 * sparse_sg_profile(p, lok, sk);
            if (e.dense_high_energy) {
                for (int r = 1; r <= n / 2; ++r) {
                    double lo = log_of(n, r, cfg.delta);
                    if (4.0 * r * delta2 >= constants.kappa_d * L2 * dense_profile(p, lo)) {
                        e.r_bar_dense = r;
                        break;
                    }
                }
            }
            if (e.sparse_high_energy) {
                for (int r = 1; r <= n / 2; ++r) {
                    double lo = log_of(n, r, cfg.delta);
                    if (4.0 * r * delta2 >= constants.kappa_s * L2 * sparse_sg_profile(p, lo, sk)) {
                        e.r_bar_sparse = r;
                        break;
                    }
                }
            }
            if (e.high_energy) {
                for (int r = 1; r <= n; ++r) {
                    double lo = log_of(n, r, cfg.delta);
                    double profile =
                        std::min(std::sqrt(p * lo), sparse_sg_profile(p, 0.0, sk)) + lo;
                    if (r * delta2 >= constants.c0 * L2 * profile) {
                        e.r_star = r;
                        break;
                    }
                }
            }
        }
        if (e.r_bar_dense > 0 && e.r_bar_sparse > 0)
            e.r_bar = std::min(e.r_bar_dense, e.r_bar_sparse);
        else
            e.r_bar = std::max(e.r_bar_dense, e.r_bar_sparse);
        report.points.push_back(e);
    }
    return report;
}

GridPoint nearest_anchor(const Grid& grid, int r_bar, int tau) {
    const auto& locs = grid.locations_at(r_bar);
    if (locs.empty()) throw std::invalid_argument("nearest_anchor: empty scale");
    auto it = std::lower_bound(locs.begin(), locs.end(), tau);
    int best = locs.front();
    auto consider = [&](int l) {
        int d = std::abs(l - tau), db = std::abs(best - tau);
        if (d < db || (d == db && l < best)) best = l;
    };
    if (it != locs.end()) consider(*it);
    if (it != locs.begin()) consider(*std::prev(it));
    return {best, r_bar};
}

namespace {

// Boundary height for the class at (r, s): r * Delta^2 equals this value.
double class_energy(int n, int p, int r, int s, double u, double sigma) {
    double lo = std::log(static_cast<double>(n) / r);
    return 0.5 * sigma * sigma *
           (s * std::log1p(u * std::sqrt(static_cast<double>(p)) / s * std::sqrt(lo)) +
            u * lo);
}

}  // namespace

GroundTruth lower_bound_instance(const LowerBoundParams& params, std::uint64_t seed) {
    const int n = params.n, p = params.p, r = params.r, s = params.s;
    if (n < 4 || p < 1) throw std::invalid_argument("lower_bound_instance: bad dimensions");
    if (r < 1 || 4 * r > n) throw std::invalid_argument("lower_bound_instance: need r <= n/4");
    if (s < 1 || s > p) throw std::invalid_argument("lower_bound_instance: need 1 <= s <= p");
    if (!(params.u > 0.0 && params.u <= 0.125))
        throw std::invalid_argument("lower_bound_instance: need 0 < u <= 1/8");

    std::mt19937_64 rng(seed);

    // Support size by case.
    int support_size = 1;
    switch (params.kind) {
        case LowerBoundCase::sparse:
            support_size = s;
            break;
        case LowerBoundCase::dense: {
            double lo = std::log(static_cast<double>(n) / r);
            int s0 = static_cast<int>(std::ceil(params.u * std::sqrt(p * lo)));
            support_size = std::clamp(s0, 1, std::min(s, p));
            break;
        }
        case LowerBoundCase::single:
            support_size = 1;
            break;
    }

    std::vector<int> support;
    if (params.kind == LowerBoundCase::single) {
        support.push_back(0);
    } else {
        std::vector<int> coords(p);
        std::iota(coords.begin(), coords.end(), 0);
        std::shuffle(coords.begin(), coords.end(), rng);
        support.assign(coords.begin(), coords.begin() + support_size);
    }

    // Bump start drawn from the block lattice {1, r+1, 2r+1, ...}, restricted
    // so every produced change-point keeps length >= r.
    std::vector<int> starts;
    const int zeta = n / r - 1;
    for (int j = 0; j <= zeta; ++j) {
        int l = j * r + 1;
        int exit_t = l + r;  // first index after the bump
        if (exit_t == n + 1 || n + 1 - exit_t >= r) starts.push_back(l);
    }
    if (starts.empty()) throw std::invalid_argument("lower_bound_instance: no admissible block");
    int l = starts[std::uniform_int_distribution<std::size_t>(0, starts.size() - 1)(rng)];

    const double energy = class_energy(n, p, r, support_size, params.u, params.sigma);
    const double per_coord = std::sqrt(energy / r / support_size);

    std::vector<double> zero(p, 0.0);
    std::vector<double> bump(p, 0.0);
    for (int c : support) bump[c] = per_coord;

    std::vector<int> tau;
    std::vector<std::vector<double>> mus;
    if (l > 1) {
        tau.push_back(l);
        mus.push_back(zero);
    }
    mus.push_back(bump);
    if (l + r <= n) {
        tau.push_back(l + r);
        mus.push_back(zero);
    }
    return make_signal(n, p, std::move(tau), std::move(mus));
}

bool lower_bound_class_member(const GroundTruth& truth, const LowerBoundParams& params) {
    for (int k = 1; k <= truth.K(); ++k) {
        int rk = truth.length(k);
        int sk = truth.sparsity(k);
        if (rk < params.r || sk > params.s) return false;
        double energy = rk * truth.height(k) * truth.height(k);
        double bound = class_energy(params.n, params.p, rk, sk, params.u, params.sigma);
        if (energy < bound * (1.0 - 1e-9)) return false;
    }
    return true;
}

}  // namespace cpd
