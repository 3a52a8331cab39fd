#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "affine_smile/model.hpp"

namespace affine_smile {

enum class OptionKind { Call, Put };

const char* to_string(OptionKind kind);

/// A European quote in forward/log-moneyness terms, K = F₀e^k.
struct BsQuote {
    double forward = 1.0;
    double log_moneyness = 0.0;
    double maturity = 1.0;
    double discount = 1.0;
    double price = 0.0;
};

/// Black formula D(F₀Φ(d₊) − KΦ(d₋)), d± = −k/(σ√T) ± σ√T/2. vol = 0 gives the
/// discounted intrinsic value.
double bs_call(double forward, double log_moneyness, double maturity, double vol, double discount = 1.0);
double bs_put(double forward, double log_moneyness, double maturity, double vol, double discount = 1.0);
double bs_price(OptionKind kind, double forward, double log_moneyness, double maturity, double vol,
                double discount = 1.0);

/// No-arbitrage price range (lower, upper) of the option.
std::pair<double, double> price_bounds(OptionKind kind, double forward, double log_moneyness, double discount);

/// Black implied volatility. The price must lie strictly inside price_bounds; a
/// DomainError names the violated bound otherwise.
double implied_vol(double price, double forward, double log_moneyness, double maturity, double discount,
                   OptionKind kind);
double implied_vol(const BsQuote& quote, OptionKind kind);

struct McConfig {
    std::size_t n_paths = 100'000;
    double dt = 1e-3;
    double horizon = 1.0;
    std::uint64_t seed = 20240611;
    bool antithetic = false;

    /// Throws ValidationError on a broken configuration.
    void validate() const;
    /// Number of Euler steps; the last step lands exactly on the horizon.
    std::size_t steps() const;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
    /// std_error / |mean| > 0.1
    bool unreliable = false;
};

/// Terminal state of one simulated path.
struct PathRecord {
    double x = 0.0;           ///< X_t = log(S_t/S_0)
    double lambda = 0.0;      ///< λ_t
    double lambda_min = 0.0;  ///< min over the grid of λ
    std::uint64_t n = 0;      ///< N_t
    double l = 0.0;           ///< L_t = Σ Y_i
};

/// Simulates one path; the output depends only on (params, cfg, path index).
PathRecord simulate_path(const ModelParams& p, const McConfig& cfg, std::size_t path);

/// All paths, in parallel (OpenMP). Bit-identical to simulate_paths_serial.
std::vector<PathRecord> simulate_paths(const ModelParams& p, const McConfig& cfg);
std::vector<PathRecord> simulate_paths_serial(const ModelParams& p, const McConfig& cfg);

/// Mean and standard error of per-path samples, pairing (2i, 2i+1) when antithetic.
McEstimate estimate(std::span<const double> samples, const McConfig& cfg);

/// E[e^{θ X_t}] from already simulated paths.
McEstimate mgf_estimate(std::span<const PathRecord> paths, const McConfig& cfg, double theta);

/// Discounted option price with S_0 = F₀ = 1 from already simulated paths.
McEstimate option_price_estimate(std::span<const PathRecord> paths, const McConfig& cfg, double log_moneyness,
                                 OptionKind kind, double discount = 1.0);

McEstimate mc_mgf(const ModelParams& p, const McConfig& cfg, double theta);
McEstimate mc_option_price(const ModelParams& p, const McConfig& cfg, double log_moneyness, OptionKind kind,
                           double discount = 1.0);

/// Pairwise (cascade) summation.
double pairwise_sum(std::span<const double> values);

}  // namespace affine_smile
