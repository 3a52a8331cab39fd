// Command-line front end: every subcommand reads a JSON scenario, writes its
// artifacts to the outputs directory and prints a manifest.
//
// Exit codes: 0 success, 2 invalid config or parameters, 3 numerical failure.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "affine_smile/cli/commands.hpp"
#include "affine_smile/cli/config.hpp"
#include "affine_smile/errors.hpp"

namespace {

using namespace affine_smile;
using namespace affine_smile::cli;

constexpr int kOk = 0;
constexpr int kValidation = 2;
constexpr int kNumerical = 3;

int finish(const OutputBundle& bundle, const ScenarioConfig& cfg) {
    write_manifest(bundle, cfg.outputs);
    print_manifest(bundle, std::cout);
    return bundle.all_ok() ? kOk : kNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Affine jump-diffusion MGF, rate functions and implied-volatility asymptotics"};
    app.require_subcommand(1);

    std::string config_path;
    std::string outputs;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", config_path, "JSON scenario file")->required()->check(CLI::ExistingFile);
        sub->add_option("--outputs", outputs, "Override the outputs directory");
    };

    auto* validate = app.add_subcommand("validate", "Check the config and every parameter set");
    add_common(validate);

    auto* cgf = app.add_subcommand("cgf", "Lambda and Lambda' across the domain interior");
    add_common(cgf);
    std::optional<std::size_t> theta_points;
    cgf->add_option("--theta-grid", theta_points, "Number of theta points (default from config)");

    auto* rate = app.add_subcommand("rate", "Rate functions I and I_bar on the x-grid");
    add_common(rate);

    auto* smile = app.add_subcommand("smile", "Large-maturity implied variance on the x-grid");
    add_common(smile);

    auto* wings = app.add_subcommand("wings", "Critical moments and Lee wing slopes");
    add_common(wings);
    std::vector<double> maturities;
    wings->add_option("--maturities", maturities, "Comma-separated maturities")->delimiter(',');

    auto* mc = app.add_subcommand("mc", "Monte Carlo oracle against the analytic values");
    add_common(mc);
    McRequest request;
    auto* theta_opt = mc->add_option("--theta", request.thetas, "MGF exponent(s)")->delimiter(',');
    auto* strike_opt = mc->add_option("--strike", request.strikes, "Log-moneyness value(s)")->delimiter(',');
    mc->callback([&] {
        if (theta_opt->count() == 0 && strike_opt->count() == 0) {
            throw CLI::ValidationError("mc", "give --theta and/or --strike");
        }
    });

    auto* figures = app.add_subcommand("figures", "All curves, wing tables and overlay plots");
    add_common(figures);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kValidation;
    }

    try {
        ScenarioConfig cfg = load_config(config_path);
        if (!outputs.empty()) cfg.outputs = outputs;

        if (validate->parsed()) {
            const bool ok = run_validate(cfg, std::cout);
            return ok ? kOk : kValidation;
        }
        if (cgf->parsed()) return finish(run_cgf(cfg, theta_points), cfg);
        if (rate->parsed()) return finish(run_rate(cfg), cfg);
        if (smile->parsed()) return finish(run_smile(cfg), cfg);
        if (wings->parsed()) {
            std::optional<std::vector<double>> ts;
            if (!maturities.empty()) ts = maturities;
            return finish(run_wings(cfg, ts), cfg);
        }
        if (mc->parsed()) return finish(run_mc(cfg, request, std::cout), cfg);
        if (figures->parsed()) return finish(run_figures(cfg), cfg);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kValidation;
    } catch (const ValidationError& e) {
        std::cerr << "validation failed: " << e.what() << "\n";
        return kValidation;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kOk;
}
