#include "affine_smile/cli/commands.hpp"

#include "affine_smile/cli/csv.hpp"
#include "affine_smile/cli/svg.hpp"
#include "affine_smile/cumulant.hpp"
#include "affine_smile/digest.hpp"
#include "affine_smile/ldp.hpp"
#include "affine_smile/pricing.hpp"
#include "affine_smile/smile.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>

namespace affine_smile::cli {

namespace {

namespace fs = std::filesystem;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
/// Stand-in for an infinite domain side when a finite θ range is needed.
constexpr double kThetaSpan = 10.0;

class Emitter {
public:
    explicit Emitter(const ScenarioConfig& cfg) : cfg_(cfg) { fs::create_directories(cfg.outputs); }

    OutputBundle bundle;

    void csv(const std::string& name, const CsvTable& table) {
        if (cfg_.csv) file(name, ".csv", table.str());
    }

    void svg(const std::string& name, const Plot& plot) {
        if (cfg_.svg) file(name, ".svg", render_svg(plot));
    }

    void failed(const std::string& name, const std::string& ext, const std::string& what) {
        Artifact a;
        a.name = name;
        a.path = cfg_.outputs / (name + ext);
        a.status = "failed";
        a.detail = what;
        bundle.manifest.push_back(std::move(a));
    }

    /// Runs `body`; a numerical failure becomes a failed manifest entry.
    bool guarded(const std::string& name, const std::function<void()>& body) {
        try {
            body();
            return true;
        } catch (const NumericalError& e) {
            failed(name, cfg_.csv ? ".csv" : ".svg", e.what());
            return false;
        }
    }

private:
    void file(const std::string& name, const std::string& ext, const std::string& text) {
        Artifact a;
        a.name = name;
        a.path = cfg_.outputs / (name + ext);
        std::ofstream out(a.path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", a.path.string()));
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        a.sha256 = sha256_hex(text);
        bundle.manifest.push_back(std::move(a));
    }

    const ScenarioConfig& cfg_;
};

std::string label_for(const ScenarioConfig& cfg, const ResolvedParams& r) {
    if (!r.sweep_value) return "base";
    return fmt::format("{} = {}", cfg.sweep->field, *r.sweep_value);
}

/// Common x-grid for every parameter set so curves overlay point by point.
std::vector<double> x_grid(const ScenarioConfig& cfg, const std::vector<ResolvedParams>& sets) {
    if (cfg.x_grid) return linspace(cfg.x_grid->min, cfg.x_grid->max, cfg.x_grid->points);
    double lo = kInf, hi = -kInf;
    for (const auto& s : sets) {
        try {
            const auto xs = default_x_grid(s.params, cfg.x_points);
            lo = std::min(lo, xs.front());
            hi = std::max(hi, xs.back());
        } catch (const NumericalError&) {
            // that set fails on its own later
        }
    }
    if (!std::isfinite(lo)) return linspace(-1.0, 1.0, cfg.x_points);
    return linspace(lo, hi, cfg.x_points);
}

std::vector<double> interior_theta_grid(const CgfDomain& dom, std::size_t points) {
    const double lo = std::isfinite(dom.theta_min) ? dom.theta_min : -kThetaSpan;
    const double hi = std::isfinite(dom.theta_max) ? dom.theta_max : kThetaSpan;
    auto all = linspace(lo, hi, points + 2);
    std::vector<double> out;
    if (!std::isfinite(dom.theta_min)) out.push_back(all.front());
    out.insert(out.end(), all.begin() + 1, all.end() - 1);
    if (!std::isfinite(dom.theta_max)) out.push_back(all.back());
    if (out.size() > points) out.resize(points);
    return out;
}

CsvTable wing_csv(const std::vector<WingResult>& right, const std::vector<WingResult>& left) {
    CsvTable t({"T", "side", "critical_moment", "lee_exponent", "slope"});
    for (const auto* table : {&right, &left})
        for (const auto& w : *table) {
            t.row({format_number(w.maturity), to_string(w.side), format_number(w.critical_moment),
                   format_number(w.lee_exponent), format_number(w.slope)});
        }
    return t;
}

void emit_rate(Emitter& em, const ResolvedParams& r, std::span<const double> xs, RateCurve* keep_i = nullptr,
               RateCurve* keep_bar = nullptr) {
    const RateFunction rf(r.params);
    em.guarded("rate_I_" + r.tag, [&] {
        const auto curve = rate_curve(rf, xs, RateKind::I);
        CsvTable t({"x", "I", "theta_star"});
        for (const auto& pt : curve.points)
            t.row({format_number(pt.x), format_number(pt.value), format_number(pt.theta_star)});
        em.csv("rate_I_" + r.tag, t);
        if (keep_i) *keep_i = curve;
    });
    em.guarded("rate_I_bar_" + r.tag, [&] {
        const auto curve = rate_curve(rf, xs, RateKind::IBar);
        CsvTable t({"x", "I_bar"});
        for (const auto& pt : curve.points) t.row({format_number(pt.x), format_number(pt.value)});
        em.csv("rate_I_bar_" + r.tag, t);
        if (keep_bar) *keep_bar = curve;
    });
}

bool emit_smile(Emitter& em, const ResolvedParams& r, std::span<const double> xs, std::vector<double>* keep) {
    return em.guarded("sigma_inf_sq_" + r.tag, [&] {
        const Smile smile(r.params);
        const auto values = sigma_inf_sq_curve(smile, xs);
        CsvTable t({"x", "sigma_inf_sq"});
        for (std::size_t i = 0; i < xs.size(); ++i) t.row({format_number(xs[i]), format_number(values[i])});
        em.csv("sigma_inf_sq_" + r.tag, t);
        if (keep) *keep = values;
    });
}

bool emit_wings(Emitter& em, const ResolvedParams& r, std::span<const double> ts, std::vector<WingResult>* right,
                std::vector<WingResult>* left) {
    return em.guarded("wings_" + r.tag, [&] {
        auto rt = wing_table(r.params, ts, Side::Right);
        auto lt = wing_table(r.params, ts, Side::Left);
        em.csv("wings_" + r.tag, wing_csv(rt, lt));
        if (right) *right = std::move(rt);
        if (left) *left = std::move(lt);
    });
}

}  // namespace

bool OutputBundle::all_ok() const {
    return std::all_of(manifest.begin(), manifest.end(), [](const Artifact& a) { return a.status == "ok"; });
}

void write_manifest(const OutputBundle& bundle, const fs::path& dir) {
    fs::create_directories(dir);
    std::string text = "name\tpath\tsha256\tstatus\n";
    for (const auto& a : bundle.manifest) {
        text += fmt::format("{}\t{}\t{}\t{}\n", a.name, a.path.filename().string(), a.sha256, a.status);
    }
    std::ofstream out(dir / "manifest.tsv", std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", (dir / "manifest.tsv").string()));
    out << text;
}

void print_manifest(const OutputBundle& bundle, std::ostream& out) {
    out << "manifest (" << bundle.manifest.size() << " artifacts)\n";
    for (const auto& a : bundle.manifest) {
        out << fmt::format("  {:<8} {:<28} {}  {}\n", a.status, a.name, a.sha256.empty() ? "-" : a.sha256,
                           a.path.string());
        if (!a.detail.empty()) out << "           " << a.detail << "\n";
    }
}

bool run_validate(const ScenarioConfig& cfg, std::ostream& out) {
    bool ok = true;
    for (const auto& r : resolve(cfg)) {
        const auto report = validate_params(r.params);
        out << fmt::format("{}: {} (digest {})\n", r.tag, report.valid ? "valid" : "INVALID",
                           params_digest(r.params));
        for (const auto& v : report.violations) out << fmt::format("  [{}] {}\n", v.rule, v.message);
        ok = ok && report.valid;
    }
    return ok;
}

OutputBundle run_cgf(const ScenarioConfig& cfg, std::optional<std::size_t> theta_points) {
    Emitter em(cfg);
    for (const auto& r : resolve(cfg)) {
        const auto dom = critical_domain(r.params);
        CsvTable t({"theta", "Lambda", "Lambda_prime"});
        for (double th : interior_theta_grid(dom, theta_points.value_or(cfg.theta_points))) {
            t.row({format_number(th), format_number(limiting_cgf(r.params, th)),
                   format_number(limiting_cgf_deriv(r.params, th))});
        }
        em.csv("cgf_" + r.tag, t);
    }
    return em.bundle;
}

OutputBundle run_rate(const ScenarioConfig& cfg) {
    Emitter em(cfg);
    const auto sets = resolve(cfg);
    const auto xs = x_grid(cfg, sets);
    for (const auto& r : sets) emit_rate(em, r, xs);
    return em.bundle;
}

OutputBundle run_smile(const ScenarioConfig& cfg) {
    Emitter em(cfg);
    const auto sets = resolve(cfg);
    const auto xs = x_grid(cfg, sets);
    for (const auto& r : sets) emit_smile(em, r, xs, nullptr);
    return em.bundle;
}

OutputBundle run_wings(const ScenarioConfig& cfg, std::optional<std::vector<double>> maturities) {
    Emitter em(cfg);
    const auto ts = maturities.value_or(cfg.maturities);
    for (const auto& r : resolve(cfg)) emit_wings(em, r, ts, nullptr, nullptr);
    return em.bundle;
}

OutputBundle run_mc(const ScenarioConfig& cfg, const McRequest& request, std::ostream& report) {
    Emitter em(cfg);
    const double t = cfg.mc.horizon;
    report << fmt::format("Monte Carlo: {} paths, dt = {}, horizon = {}, seed = {}{}\n", cfg.mc.n_paths, cfg.mc.dt, t,
                          cfg.mc.seed, cfg.mc.antithetic ? ", antithetic" : "");
    for (const auto& r : resolve(cfg)) {
        const auto paths = simulate_paths(r.params, cfg.mc);
        CsvTable table({"quantity", "mc_mean", "mc_stderr", "analytic"});
        report << fmt::format("[{}]\n  {:<28} {:>22} {:>12} {:>22} {:>8}\n", r.tag, "quantity", "mc_mean",
                              "mc_stderr", "analytic", "z");
        auto add = [&](const std::string& q, const McEstimate& e, double analytic) {
            table.row({q, format_number(e.mean), format_number(e.std_error), format_number(analytic)});
            const double z = std::isfinite(analytic) && e.std_error > 0 ? (e.mean - analytic) / e.std_error : kNaN;
            report << fmt::format("  {:<28} {:>22.15g} {:>12.4g} {:>22.15g} {:>8.3f}{}\n", q, e.mean, e.std_error,
                                  analytic, z, e.unreliable ? "  (unreliable)" : "");
        };
        for (double th : request.thetas) {
            const auto e = mgf_estimate(paths, cfg.mc, th);
            add(fmt::format("mgf(theta={})", th), e, finite_time_mgf(r.params, t, th));
        }
        for (double k : request.strikes) {
            for (auto kind : {OptionKind::Call, OptionKind::Put}) {
                const auto e = option_price_estimate(paths, cfg.mc, k, kind);
                add(fmt::format("{}(k={})", to_string(kind), k), e, kNaN);
                // implied vol of the MC price; its error by the delta method through vega
                const auto [lo, hi] = price_bounds(kind, 1.0, k, 1.0);
                if (e.mean > lo && e.mean < hi) {
                    McEstimate iv = e;
                    iv.mean = implied_vol(e.mean, 1.0, k, t, 1.0, kind);
                    const double w = iv.mean * std::sqrt(t);
                    const double vega = std::sqrt(t) * std::exp(-0.5 * std::pow(-k / w + 0.5 * w, 2)) /
                                        std::sqrt(2.0 * std::numbers::pi);
                    iv.std_error = e.std_error / vega;
                    add(fmt::format("implied_vol_{}(k={})", to_string(kind), k), iv, kNaN);
                }
            }
        }
        em.csv("mc_" + r.tag, table);
    }
    return em.bundle;
}

OutputBundle run_figures(const ScenarioConfig& cfg) {
    Emitter em(cfg);
    const auto sets = resolve(cfg);
    const auto xs = x_grid(cfg, sets);

    Plot rate{"Rate function I(x)", "x", "I(x)", {}};
    Plot rate_bar{"Rate function I_bar(x)", "x", "I_bar(x)", {}};
    Plot smile{"Large-maturity implied variance", "x", "sigma_inf^2(x)", {}};
    Plot wing_r{"Right wing", "T", "beta_R / T", {}};
    Plot wing_l{"Left wing", "T", "beta_L / T", {}};
    Plot g_plot{"G(theta) = min_y Gamma(y, theta)", "theta", "G(theta)", {}};

    // common θ range for the G curves: the union of the domains, padded
    double th_lo = kInf, th_hi = -kInf;
    for (const auto& r : sets) {
        try {
            const auto dom = critical_domain(r.params);
            th_lo = std::min(th_lo, std::isfinite(dom.theta_min) ? dom.theta_min - 1.0 : -kThetaSpan);
            th_hi = std::max(th_hi, std::isfinite(dom.theta_max) ? dom.theta_max + 1.0 : kThetaSpan);
        } catch (const NumericalError&) {
        }
    }
    if (!std::isfinite(th_lo)) th_lo = -kThetaSpan, th_hi = kThetaSpan;
    const auto thetas = linspace(th_lo, th_hi, 201);
    double g_cap = 0.0;

    for (const auto& r : sets) {
        const auto label = label_for(cfg, r);
        RateCurve ci, cb;
        emit_rate(em, r, xs, &ci, &cb);
        auto add_curve = [&](Plot& plot, const RateCurve& c) {
            Series s{label, {}, {}};
            for (const auto& pt : c.points) {
                s.x.push_back(pt.x);
                s.y.push_back(pt.value);
            }
            if (!s.x.empty()) plot.series.push_back(std::move(s));
        };
        add_curve(rate, ci);
        add_curve(rate_bar, cb);

        std::vector<double> sig;
        if (emit_smile(em, r, xs, &sig)) smile.series.push_back({label, xs, sig});

        std::vector<WingResult> wr, wl;
        if (emit_wings(em, r, cfg.maturities, &wr, &wl)) {
            for (auto [plot, table] : {std::pair{&wing_r, &wr}, std::pair{&wing_l, &wl}}) {
                Series s{label, {}, {}};
                for (const auto& w : *table) {
                    s.x.push_back(w.maturity);
                    s.y.push_back(w.ratio);
                }
                plot->series.push_back(std::move(s));
            }
        }

        em.guarded("g_curve_" + r.tag, [&] {
            CsvTable t({"theta", "G"});
            Series s{label, {}, {}};
            for (double th : thetas) {
                const double g = gamma_minimum(r.params, th);
                t.row({format_number(th), format_number(g)});
                s.x.push_back(th);
                s.y.push_back(g);
                if (std::isfinite(g)) g_cap = std::max(g_cap, -g);
            }
            em.csv("g_curve_" + r.tag, t);
            g_plot.series.push_back(std::move(s));
        });
    }

    // G explodes outside the domain; keep the interesting band around zero visible
    g_plot.y_max = std::max(3.0 * g_cap, 1e-3);

    em.svg("fig_rate_I", rate);
    em.svg("fig_rate_I_bar", rate_bar);
    em.svg("fig_sigma_inf_sq", smile);
    em.svg("fig_wing_right", wing_r);
    em.svg("fig_wing_left", wing_l);
    em.svg("fig_g_curve", g_plot);
    return em.bundle;
}

}  // namespace affine_smile::cli
