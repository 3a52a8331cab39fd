#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "affine_smile/cli/config.hpp"

namespace affine_smile::cli {

struct Artifact {
    std::string name;
    std::filesystem::path path;
    std::string sha256;       ///< of the file contents; empty when not written
    std::string status = "ok";
    std::string detail;       ///< error text when status is "failed"
};

struct OutputBundle {
    std::vector<Artifact> manifest;

    bool all_ok() const;
};

/// Writes manifest.tsv next to the outputs (it is not listed in itself).
void write_manifest(const OutputBundle& bundle, const std::filesystem::path& dir);
void print_manifest(const OutputBundle& bundle, std::ostream& out);

/// Validation report for every resolved parameter set; true when all are valid.
bool run_validate(const ScenarioConfig& cfg, std::ostream& out);

/// (theta, Lambda, Lambda_prime) across the domain interior.
OutputBundle run_cgf(const ScenarioConfig& cfg, std::optional<std::size_t> theta_points = std::nullopt);
/// (x, I, theta_star) and (x, I_bar).
OutputBundle run_rate(const ScenarioConfig& cfg);
/// (x, sigma_inf_sq).
OutputBundle run_smile(const ScenarioConfig& cfg);
/// (T, side, critical_moment, lee_exponent, slope) for both wings.
OutputBundle run_wings(const ScenarioConfig& cfg, std::optional<std::vector<double>> maturities = std::nullopt);

struct McRequest {
    std::vector<double> thetas;
    std::vector<double> strikes;  ///< log-moneyness k
};

/// (quantity, mc_mean, mc_stderr, analytic), also printed side by side to `report`.
OutputBundle run_mc(const ScenarioConfig& cfg, const McRequest& request, std::ostream& report);

/// Every curve and wing table of every sweep value, plus overlay plots. A curve
/// that fails is marked in the manifest and the rest are still produced.
OutputBundle run_figures(const ScenarioConfig& cfg);

}  // namespace affine_smile::cli
