#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "affine_smile/errors.hpp"
#include "affine_smile/model.hpp"
#include "affine_smile/pricing.hpp"

namespace affine_smile::cli {

/// Every problem found in a config, one entry per field.
class ConfigError : public ValidationError {
public:
    explicit ConfigError(std::vector<std::string> errors);
    const std::vector<std::string>& errors() const { return errors_; }

private:
    std::vector<std::string> errors_;
};

struct Sweep {
    std::string field;
    std::vector<double> values;
};

struct XGridSpec {
    double min = 0.0;
    double max = 0.0;
    std::size_t points = 201;
};

struct ScenarioConfig {
    ModelParams params;
    std::optional<Sweep> sweep;
    /// Absent range: uniform grid on [x_L − W, x_R + W] per parameter set.
    std::optional<XGridSpec> x_grid;
    std::size_t x_points = 201;
    std::size_t theta_points = 101;
    std::vector<double> maturities{2, 4, 6, 8, 10};
    McConfig mc;
    std::filesystem::path outputs = "out";
    bool csv = true;
    bool svg = true;
};

/// One parameter set to run, with the tag used in output file names.
struct ResolvedParams {
    std::string tag;
    std::optional<double> sweep_value;
    ModelParams params;
};

/// Names accepted as sweep fields.
const std::vector<std::string>& sweepable_fields();

/// Parses and validates a JSON scenario. Throws ConfigError listing every field error.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Expands the sweep; a missing or empty sweep yields the single tag "base".
std::vector<ResolvedParams> resolve(const ScenarioConfig& cfg);

}  // namespace affine_smile::cli
