#include "affine_smile/pricing.hpp"

#include "affine_smile/errors.hpp"
#include "affine_smile/parallel.hpp"
#include "affine_smile/philox.hpp"
#include "affine_smile/roots.hpp"

#include <boost/math/distributions/normal.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace affine_smile {

namespace {

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double norm_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

void check_bs_inputs(double forward, double maturity, double vol, double discount) {
    if (!(forward > 0.0)) throw DomainError("black: forward must be > 0");
    if (!(maturity > 0.0)) throw DomainError("black: maturity must be > 0");
    if (!(vol >= 0.0)) throw DomainError("black: vol must be >= 0");
    if (!(discount > 0.0)) throw DomainError("black: discount must be > 0");
}

/// Samples Y from a uniform in (0, 1) by inversion.
class JumpSampler {
public:
    explicit JumpSampler(const JumpLaw& law) {
        if (const auto* g = std::get_if<GaussianJump>(&law)) {
            kind_ = Kind::Gaussian;
            mean_ = g->mean;
            sd_ = std::sqrt(g->variance);
        } else if (const auto* k = std::get_if<ConstantJump>(&law)) {
            kind_ = Kind::Constant;
            mean_ = k->value;
        } else {
            kind_ = Kind::Mixture;
            double acc = 0.0;
            for (const auto& atom : std::get<MixtureJump>(law).atoms) {
                acc += atom.weight;
                cumulative_.push_back(acc);
                values_.push_back(atom.value);
            }
        }
    }

    double operator()(double u) const {
        switch (kind_) {
            case Kind::Gaussian: return mean_ + sd_ * boost::math::quantile(standard_, u);
            case Kind::Constant: return mean_;
            case Kind::Mixture: {
                const double target = u * cumulative_.back();
                const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
                const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()),
                                                       values_.size() - 1);
                return values_[idx];
            }
        }
        return 0.0;
    }

private:
    enum class Kind { Gaussian, Constant, Mixture };
    Kind kind_ = Kind::Constant;
    double mean_ = 0.0;
    double sd_ = 0.0;
    std::vector<double> cumulative_;
    std::vector<double> values_;
    boost::math::normal_distribution<double> standard_{0.0, 1.0};
};

struct PathKernel {
    const ModelParams& p;
    const McConfig& cfg;
    JumpSampler sampler;
    Philox4x32::Key key;
    std::size_t steps;
    double dt, sqrt_dt, drift, kappa, sigma_s, sigma_lam;

    PathKernel(const ModelParams& params, const McConfig& config)
        : p(params),
          cfg(config),
          sampler(params.jump),
          key(Philox4x32::key_from_seed(config.seed)),
          steps(config.steps()),
          dt(config.horizon / static_cast<double>(config.steps())),
          sqrt_dt(std::sqrt(dt)),
          drift(params.drift()),
          kappa(params.compensator()),
          sigma_s(std::sqrt(params.sigma_s_sq)),
          sigma_lam(std::sqrt(params.sigma_lam_sq)) {}

    PathRecord run(std::size_t path) const {
        // Antithetic partners share a stream and flip the Brownian increments.
        const std::uint64_t stream = cfg.antithetic ? path / 2 : path;
        const double sign = (cfg.antithetic && (path % 2 == 1)) ? -1.0 : 1.0;
        const auto stream_lo = static_cast<std::uint32_t>(stream);
        const auto stream_hi = static_cast<std::uint32_t>(stream >> 32);

        PathRecord rec;
        double lambda = p.lambda0;
        double lambda_min = lambda;
        double x = 0.0;
        double l = 0.0;
        std::uint64_t n = 0;
        for (std::size_t s = 0; s < steps; ++s) {
            const auto words =
                Philox4x32::generate({static_cast<std::uint32_t>(s), stream_lo, stream_hi, 0u}, key);
            const double u1 = Philox4x32::to_open_unit(words[0]);
            const double u2 = Philox4x32::to_open_unit(words[1]);
            const double radius = std::sqrt(-2.0 * std::log(u1));
            const double angle = 2.0 * std::numbers::pi * u2;
            const double dw = sign * radius * std::cos(angle) * sqrt_dt;
            const double db = sign * radius * std::sin(angle) * sqrt_dt;

            const double intensity = p.alpha + p.beta * lambda;
            const bool jump = Philox4x32::to_open_unit(words[2]) < std::min(intensity * dt, 1.0);

            x += drift * dt + sigma_s * dw - kappa * intensity * dt;
            double next = lambda + p.b * (p.c - lambda) * dt + sigma_lam * std::sqrt(lambda) * db;
            if (jump) {
                const double y = sampler(Philox4x32::to_open_unit(words[3]));
                x += y;
                l += y;
                ++n;
                next += p.a;
            }
            lambda = std::max(next, 0.0);
            lambda_min = std::min(lambda_min, lambda);
        }
        rec.x = x;
        rec.lambda = lambda;
        rec.lambda_min = lambda_min;
        rec.n = n;
        rec.l = l;
        return rec;
    }
};

template <class Fn>
McEstimate estimate_from(std::span<const PathRecord> paths, const McConfig& cfg, Fn&& sample) {
    std::vector<double> values(paths.size());
    for (std::size_t i = 0; i < paths.size(); ++i) {
        values[i] = sample(paths[i]);
        if (!std::isfinite(values[i])) {
            throw RangeError(fmt::format("Monte Carlo sample {} is not finite ({})", i, values[i]));
        }
    }
    return estimate(values, cfg);
}

}  // namespace

const char* to_string(OptionKind kind) { return kind == OptionKind::Call ? "call" : "put"; }

double bs_call(double forward, double log_moneyness, double maturity, double vol, double discount) {
    check_bs_inputs(forward, maturity, vol, discount);
    const double strike = forward * std::exp(log_moneyness);
    const double total = vol * std::sqrt(maturity);
    if (total == 0.0) return discount * std::max(forward - strike, 0.0);
    const double d_plus = -log_moneyness / total + 0.5 * total;
    const double d_minus = d_plus - total;
    return discount * (forward * norm_cdf(d_plus) - strike * norm_cdf(d_minus));
}

double bs_put(double forward, double log_moneyness, double maturity, double vol, double discount) {
    check_bs_inputs(forward, maturity, vol, discount);
    const double strike = forward * std::exp(log_moneyness);
    const double total = vol * std::sqrt(maturity);
    if (total == 0.0) return discount * std::max(strike - forward, 0.0);
    const double d_plus = -log_moneyness / total + 0.5 * total;
    const double d_minus = d_plus - total;
    return discount * (strike * norm_cdf(-d_minus) - forward * norm_cdf(-d_plus));
}

double bs_price(OptionKind kind, double forward, double log_moneyness, double maturity, double vol,
                double discount) {
    return kind == OptionKind::Call ? bs_call(forward, log_moneyness, maturity, vol, discount)
                                    : bs_put(forward, log_moneyness, maturity, vol, discount);
}

std::pair<double, double> price_bounds(OptionKind kind, double forward, double log_moneyness, double discount) {
    const double strike = forward * std::exp(log_moneyness);
    if (kind == OptionKind::Call) return {discount * std::max(forward - strike, 0.0), discount * forward};
    return {discount * std::max(strike - forward, 0.0), discount * strike};
}

double implied_vol(double price, double forward, double log_moneyness, double maturity, double discount,
                   OptionKind kind) {
    check_bs_inputs(forward, maturity, 0.0, discount);
    const auto [lower, upper] = price_bounds(kind, forward, log_moneyness, discount);
    if (!(price > lower)) {
        throw DomainError(fmt::format("implied_vol: {} price {} is not above the lower bound {}", to_string(kind),
                                      price, lower));
    }
    if (!(price < upper)) {
        throw DomainError(fmt::format("implied_vol: {} price {} is not below the upper bound {}", to_string(kind),
                                      price, upper));
    }

    const double sqrt_t = std::sqrt(maturity);
    // Work in total volatility w = σ√T, where price is increasing with vega D·F·φ(d₊).
    auto fdf = [&](double w) -> std::pair<double, double> {
        if (w <= 0.0) return {lower - price, 0.0};
        const double value = bs_price(kind, forward, log_moneyness, maturity, w / sqrt_t, discount);
        const double d_plus = -log_moneyness / w + 0.5 * w;
        return {value - price, discount * forward * norm_pdf(d_plus)};
    };
    double hi = 1.0;
    while (fdf(hi).first <= 0.0) {
        hi *= 2.0;
        if (hi > 1e4) throw NumericalError("implied_vol: could not bracket the volatility");
    }
    // A few bisection steps before Newton takes over inside newton_bisect.
    double lo = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (fdf(mid).first < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double w = roots::newton_bisect(fdf, lo, hi, 1e-14 * std::max(1.0, hi));
    return w / sqrt_t;
}

double implied_vol(const BsQuote& quote, OptionKind kind) {
    return implied_vol(quote.price, quote.forward, quote.log_moneyness, quote.maturity, quote.discount, kind);
}

void McConfig::validate() const {
    if (n_paths < 100) throw ValidationError(fmt::format("mc: n_paths must be >= 100 (got {})", n_paths));
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("mc: dt must be positive");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ValidationError("mc: horizon must be positive");
    if (dt > horizon) throw ValidationError(fmt::format("mc: dt = {} exceeds horizon = {}", dt, horizon));
    if (antithetic && n_paths % 2 != 0) throw ValidationError("mc: antithetic sampling needs an even n_paths");
}

std::size_t McConfig::steps() const {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9)));
}

PathRecord simulate_path(const ModelParams& p, const McConfig& cfg, std::size_t path) {
    return PathKernel(p, cfg).run(path);
}

std::vector<PathRecord> simulate_paths(const ModelParams& p, const McConfig& cfg) {
    require_valid(p);
    cfg.validate();
    const PathKernel kernel(p, cfg);
    std::vector<PathRecord> out(cfg.n_paths);
    const auto count = static_cast<long long>(cfg.n_paths);
    const int threads = worker_threads();
#pragma omp parallel for schedule(static) num_threads(threads)
    for (long long i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = kernel.run(static_cast<std::size_t>(i));
    return out;
}

std::vector<PathRecord> simulate_paths_serial(const ModelParams& p, const McConfig& cfg) {
    require_valid(p);
    cfg.validate();
    const PathKernel kernel(p, cfg);
    std::vector<PathRecord> out;
    out.reserve(cfg.n_paths);
    for (std::size_t i = 0; i < cfg.n_paths; ++i) out.push_back(kernel.run(i));
    return out;
}

double pairwise_sum(std::span<const double> values) {
    constexpr std::size_t kBlock = 128;
    if (values.size() <= kBlock) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

McEstimate estimate(std::span<const double> samples, const McConfig& cfg) {
    std::vector<double> units;
    if (cfg.antithetic) {
        if (samples.size() % 2 != 0) throw ValidationError("estimate: antithetic samples must come in pairs");
        units.resize(samples.size() / 2);
        for (std::size_t i = 0; i < units.size(); ++i) units[i] = 0.5 * (samples[2 * i] + samples[2 * i + 1]);
    } else {
        units.assign(samples.begin(), samples.end());
    }
    const auto count = static_cast<double>(units.size());
    if (units.size() < 2) throw ValidationError("estimate: need at least two samples");

    McEstimate out;
    out.n_paths = samples.size();
    out.seed = cfg.seed;
    out.mean = pairwise_sum(units) / count;
    std::vector<double> squares(units.size());
    for (std::size_t i = 0; i < units.size(); ++i) squares[i] = (units[i] - out.mean) * (units[i] - out.mean);
    const double variance = pairwise_sum(squares) / (count - 1.0);
    out.std_error = std::sqrt(variance / count);
    out.unreliable = out.std_error > 0.1 * std::abs(out.mean);
    return out;
}

McEstimate mgf_estimate(std::span<const PathRecord> paths, const McConfig& cfg, double theta) {
    if (theta == 0.0) return estimate_from(paths, cfg, [](const PathRecord&) { return 1.0; });
    return estimate_from(paths, cfg, [theta](const PathRecord& r) { return std::exp(theta * r.x); });
}

McEstimate option_price_estimate(std::span<const PathRecord> paths, const McConfig& cfg, double log_moneyness,
                                 OptionKind kind, double discount) {
    const double strike = std::exp(log_moneyness);
    if (kind == OptionKind::Call) {
        return estimate_from(paths, cfg, [=](const PathRecord& r) {
            return discount * std::max(std::exp(r.x) - strike, 0.0);
        });
    }
    return estimate_from(paths, cfg,
                         [=](const PathRecord& r) { return discount * std::max(strike - std::exp(r.x), 0.0); });
}

McEstimate mc_mgf(const ModelParams& p, const McConfig& cfg, double theta) {
    const auto paths = simulate_paths(p, cfg);
    return mgf_estimate(paths, cfg, theta);
}

McEstimate mc_option_price(const ModelParams& p, const McConfig& cfg, double log_moneyness, OptionKind kind,
                           double discount) {
    const auto paths = simulate_paths(p, cfg);
    return option_price_estimate(paths, cfg, log_moneyness, kind, discount);
}

}  // namespace affine_smile
