#include "affine_smile/cli/config.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

namespace affine_smile::cli {

namespace {

using nlohmann::json;

std::string join_errors(const std::vector<std::string>& errors) {
    std::string out = "invalid config:";
    for (const auto& e : errors) out += "\n  " + e;
    return out;
}

/// Collects field errors while walking the document.
class Reader {
public:
    std::vector<std::string> errors;

    void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> known) {
        const std::set<std::string> allowed(known.begin(), known.end());
        for (const auto& [key, _] : obj.items()) {
            if (!allowed.count(key)) errors.push_back(fmt::format("{}: unknown key '{}'", where, key));
        }
    }

    bool object(const json& obj, const std::string& where) {
        if (obj.is_object()) return true;
        errors.push_back(fmt::format("{}: expected an object", where));
        return false;
    }

    std::optional<double> number(const json& obj, const char* key, const std::string& where, bool required) {
        const auto it = obj.find(key);
        if (it == obj.end()) {
            if (required) errors.push_back(fmt::format("{}.{}: missing required field", where, key));
            return std::nullopt;
        }
        if (!it->is_number()) {
            errors.push_back(fmt::format("{}.{}: expected a number, got {}", where, key, it->type_name()));
            return std::nullopt;
        }
        return it->get<double>();
    }

    std::optional<std::uint64_t> count(const json& obj, const char* key, const std::string& where) {
        const auto it = obj.find(key);
        if (it == obj.end()) return std::nullopt;
        if (!it->is_number_unsigned()) {
            errors.push_back(fmt::format("{}.{}: expected a nonnegative integer", where, key));
            return std::nullopt;
        }
        return it->get<std::uint64_t>();
    }

    std::optional<std::vector<double>> numbers(const json& obj, const char* key, const std::string& where) {
        const auto it = obj.find(key);
        if (it == obj.end()) return std::nullopt;
        if (!it->is_array()) {
            errors.push_back(fmt::format("{}.{}: expected an array of numbers", where, key));
            return std::nullopt;
        }
        std::vector<double> out;
        for (std::size_t i = 0; i < it->size(); ++i) {
            if (!(*it)[i].is_number()) {
                errors.push_back(fmt::format("{}.{}[{}]: expected a number", where, key, i));
                return std::nullopt;
            }
            out.push_back((*it)[i].get<double>());
        }
        return out;
    }

    std::optional<JumpLaw> jump(const json& j, const std::string& where) {
        if (!object(j, where)) return std::nullopt;
        const auto type = j.find("type");
        if (type == j.end() || !type->is_string()) {
            errors.push_back(fmt::format("{}.type: missing or not a string (gaussian, constant, mixture)", where));
            return std::nullopt;
        }
        const auto name = type->get<std::string>();
        if (name == "gaussian") {
            reject_unknown(j, where, {"type", "mean", "variance"});
            const auto mean = number(j, "mean", where, true);
            const auto variance = number(j, "variance", where, true);
            if (variance && !(*variance > 0.0)) errors.push_back(where + ".variance: must be > 0");
            if (mean && variance) return GaussianJump{*mean, *variance};
            return std::nullopt;
        }
        if (name == "constant") {
            reject_unknown(j, where, {"type", "value"});
            const auto value = number(j, "value", where, true);
            if (value) return ConstantJump{*value};
            return std::nullopt;
        }
        if (name == "mixture") {
            reject_unknown(j, where, {"type", "mixture"});
            const auto atoms = j.find("mixture");
            if (atoms == j.end() || !atoms->is_array() || atoms->empty()) {
                errors.push_back(where + ".mixture: expected a non-empty array of {weight, value}");
                return std::nullopt;
            }
            MixtureJump mix;
            bool ok = true;
            for (std::size_t i = 0; i < atoms->size(); ++i) {
                const auto at = fmt::format("{}.mixture[{}]", where, i);
                const auto& atom = (*atoms)[i];
                if (!object(atom, at)) {
                    ok = false;
                    continue;
                }
                reject_unknown(atom, at, {"weight", "value"});
                const auto w = number(atom, "weight", at, true);
                const auto v = number(atom, "value", at, true);
                if (w && v) {
                    mix.atoms.push_back({*w, *v});
                } else {
                    ok = false;
                }
            }
            if (ok) return mix;
            return std::nullopt;
        }
        errors.push_back(fmt::format("{}.type: unknown jump type '{}'", where, name));
        return std::nullopt;
    }
};

double* scalar_field(ModelParams& p, const std::string& name) {
    if (name == "a") return &p.a;
    if (name == "b") return &p.b;
    if (name == "c") return &p.c;
    if (name == "alpha") return &p.alpha;
    if (name == "beta") return &p.beta;
    if (name == "sigma_s_sq") return &p.sigma_s_sq;
    if (name == "sigma_lam_sq") return &p.sigma_lam_sq;
    if (name == "lambda0") return &p.lambda0;
    return nullptr;
}

void check_model(const ModelParams& p, const std::string& where, std::vector<std::string>& errors) {
    for (const auto& v : validate_params(p).violations) {
        errors.push_back(fmt::format("{}: [{}] {}", where, v.rule, v.message));
    }
}

std::string tag_for(const std::string& field, double value) { return fmt::format("{}_{}", field, value); }

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : ValidationError(join_errors(errors)), errors_(std::move(errors)) {}

const std::vector<std::string>& sweepable_fields() {
    static const std::vector<std::string> names{"a",    "b",          "c",            "alpha",
                                                "beta", "sigma_s_sq", "sigma_lam_sq", "lambda0"};
    return names;
}

ScenarioConfig parse_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError({fmt::format("config: not valid JSON ({})", e.what())});
    }

    Reader r;
    ScenarioConfig cfg;
    if (!r.object(doc, "config")) throw ConfigError(r.errors);
    r.reject_unknown(doc, "config", {"params", "sweep", "grids", "mc", "outputs", "formats"});

    // params
    const auto pit = doc.find("params");
    bool params_ok = false;
    if (pit == doc.end()) {
        r.errors.push_back("params: missing required field");
    } else if (r.object(*pit, "params")) {
        const auto& pj = *pit;
        r.reject_unknown(pj, "params",
                         {"a", "b", "c", "alpha", "beta", "sigma_s_sq", "sigma_lam_sq", "lambda0", "jump"});
        const std::size_t before = r.errors.size();
        for (const char* name : {"a", "b", "c", "alpha", "beta", "sigma_s_sq", "sigma_lam_sq"}) {
            if (const auto v = r.number(pj, name, "params", true)) *scalar_field(cfg.params, name) = *v;
        }
        // λ0 defaults to the mean-reversion level c
        if (const auto v = r.number(pj, "lambda0", "params", false)) {
            cfg.params.lambda0 = *v;
        } else {
            cfg.params.lambda0 = cfg.params.c;
        }
        if (!pj.contains("jump")) {
            r.errors.push_back("params.jump: missing required field");
        } else if (const auto law = r.jump(pj["jump"], "params.jump")) {
            cfg.params.jump = *law;
        }
        params_ok = r.errors.size() == before;
    }

    // sweep
    if (const auto sit = doc.find("sweep"); sit != doc.end() && r.object(*sit, "sweep")) {
        r.reject_unknown(*sit, "sweep", {"field", "values"});
        Sweep sweep;
        const auto field = sit->find("field");
        if (field == sit->end() || !field->is_string()) {
            r.errors.push_back("sweep.field: missing or not a string");
        } else {
            sweep.field = field->get<std::string>();
            const auto& names = sweepable_fields();
            if (std::find(names.begin(), names.end(), sweep.field) == names.end()) {
                r.errors.push_back(fmt::format("sweep.field: '{}' is not a model scalar", sweep.field));
            }
        }
        if (const auto values = r.numbers(*sit, "values", "sweep")) {
            sweep.values = *values;
        } else if (!sit->contains("values")) {
            r.errors.push_back("sweep.values: missing required field");
        }
        if (!sweep.values.empty()) cfg.sweep = sweep;
    }

    // grids
    if (const auto git = doc.find("grids"); git != doc.end() && r.object(*git, "grids")) {
        const auto& gj = *git;
        r.reject_unknown(gj, "grids", {"x", "theta", "maturities"});
        if (const auto xit = gj.find("x"); xit != gj.end() && r.object(*xit, "grids.x")) {
            r.reject_unknown(*xit, "grids.x", {"min", "max", "points"});
            const auto lo = r.number(*xit, "min", "grids.x", false);
            const auto hi = r.number(*xit, "max", "grids.x", false);
            if (const auto n = r.count(*xit, "points", "grids.x")) cfg.x_points = *n;
            if (cfg.x_points < 2) r.errors.push_back("grids.x.points: must be >= 2");
            if (lo.has_value() != hi.has_value()) {
                r.errors.push_back("grids.x: give both min and max, or neither");
            } else if (lo) {
                if (!(*lo < *hi)) r.errors.push_back("grids.x: min must be below max");
                cfg.x_grid = XGridSpec{*lo, *hi, cfg.x_points};
            }
        }
        if (const auto tit = gj.find("theta"); tit != gj.end() && r.object(*tit, "grids.theta")) {
            r.reject_unknown(*tit, "grids.theta", {"points"});
            if (const auto n = r.count(*tit, "points", "grids.theta")) cfg.theta_points = *n;
            if (cfg.theta_points < 2) r.errors.push_back("grids.theta.points: must be >= 2");
        }
        if (const auto ts = r.numbers(gj, "maturities", "grids")) {
            cfg.maturities = *ts;
            if (ts->empty()) r.errors.push_back("grids.maturities: must not be empty");
            for (std::size_t i = 0; i < ts->size(); ++i) {
                if (!((*ts)[i] > 0.0)) r.errors.push_back(fmt::format("grids.maturities[{}]: must be > 0", i));
                if (i > 0 && !((*ts)[i] > (*ts)[i - 1])) {
                    r.errors.push_back("grids.maturities: must be strictly increasing");
                    break;
                }
            }
        }
    }

    // mc
    if (const auto mit = doc.find("mc"); mit != doc.end() && r.object(*mit, "mc")) {
        r.reject_unknown(*mit, "mc", {"n_paths", "dt", "horizon", "seed", "antithetic"});
        if (const auto n = r.count(*mit, "n_paths", "mc")) cfg.mc.n_paths = *n;
        if (const auto v = r.number(*mit, "dt", "mc", false)) cfg.mc.dt = *v;
        if (const auto v = r.number(*mit, "horizon", "mc", false)) cfg.mc.horizon = *v;
        if (const auto s = r.count(*mit, "seed", "mc")) cfg.mc.seed = *s;
        if (const auto a = mit->find("antithetic"); a != mit->end()) {
            if (a->is_boolean()) {
                cfg.mc.antithetic = a->get<bool>();
            } else {
                r.errors.push_back("mc.antithetic: expected true or false");
            }
        }
        try {
            cfg.mc.validate();
        } catch (const ValidationError& e) {
            r.errors.push_back(e.what());
        }
    }

    // outputs / formats
    if (const auto oit = doc.find("outputs"); oit != doc.end()) {
        if (oit->is_string() && !oit->get<std::string>().empty()) {
            cfg.outputs = oit->get<std::string>();
        } else {
            r.errors.push_back("outputs: expected a non-empty directory path");
        }
    }
    if (const auto fit = doc.find("formats"); fit != doc.end()) {
        if (!fit->is_array()) {
            r.errors.push_back("formats: expected an array drawn from [\"csv\", \"svg\"]");
        } else {
            cfg.csv = cfg.svg = false;
            for (const auto& f : *fit) {
                const std::string name = f.is_string() ? f.get<std::string>() : f.dump();
                if (name == "csv") {
                    cfg.csv = true;
                } else if (name == "svg") {
                    cfg.svg = true;
                } else {
                    r.errors.push_back(fmt::format("formats: unknown format {}", name));
                }
            }
        }
    }

    // Assumption checks on every parameter set that will actually run.
    if (params_ok) {
        check_model(cfg.params, "params", r.errors);
        if (cfg.sweep && scalar_field(cfg.params, cfg.sweep->field)) {
            for (double v : cfg.sweep->values) {
                ModelParams p = cfg.params;
                *scalar_field(p, cfg.sweep->field) = v;
                const auto report = validate_params(p);
                if (!report.valid && validate_params(cfg.params).valid) {
                    check_model(p, fmt::format("sweep[{}]", tag_for(cfg.sweep->field, v)), r.errors);
                }
            }
        }
    }

    if (!r.errors.empty()) throw ConfigError(r.errors);
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError({fmt::format("config: cannot read '{}'", path.string())});
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::vector<ResolvedParams> resolve(const ScenarioConfig& cfg) {
    if (!cfg.sweep || cfg.sweep->values.empty()) return {{"base", std::nullopt, cfg.params}};
    std::vector<ResolvedParams> out;
    for (double v : cfg.sweep->values) {
        ModelParams p = cfg.params;
        *scalar_field(p, cfg.sweep->field) = v;
        out.push_back({tag_for(cfg.sweep->field, v), v, p});
    }
    return out;
}

}  // namespace affine_smile::cli
