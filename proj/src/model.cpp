#include "affine_smile/model.hpp"

#include "affine_smile/digest.hpp"
#include "affine_smile/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace affine_smile {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kWeightTolerance = 1e-12;

}  // namespace

TiltedMoments tilted_moments(const JumpLaw& law, double theta) {
    return std::visit(
        Overloaded{
            [theta](const GaussianJump& g) {
                const double m = g.mean + theta * g.variance;
                return TiltedMoments{theta * g.mean + 0.5 * theta * theta * g.variance, m,
                                     g.variance + m * m};
            },
            [theta](const ConstantJump& k) {
                return TiltedMoments{theta * k.value, k.value, k.value * k.value};
            },
            [theta](const MixtureJump& mix) {
                // log-sum-exp over the atoms that carry mass
                double top = -std::numeric_limits<double>::infinity();
                for (const auto& atom : mix.atoms) {
                    if (atom.weight > 0.0) top = std::max(top, std::log(atom.weight) + theta * atom.value);
                }
                double total = 0.0;
                double first = 0.0;
                double second = 0.0;
                for (const auto& atom : mix.atoms) {
                    if (atom.weight <= 0.0) continue;
                    const double w = std::exp(std::log(atom.weight) + theta * atom.value - top);
                    total += w;
                    first += w * atom.value;
                    second += w * atom.value * atom.value;
                }
                return TiltedMoments{top + std::log(total), first / total, second / total};
            },
        },
        law);
}

double log_mgf(const JumpLaw& law, double theta) { return tilted_moments(law, theta).log_m0; }

ExpMoments jump_exp_moments(const JumpLaw& law, double theta) {
    if (!std::isfinite(theta)) throw DomainError("jump_exp_moments: theta must be finite");
    const auto t = tilted_moments(law, theta);
    ExpMoments out;
    out.m0 = std::exp(t.log_m0);
    out.m1 = out.m0 * t.mean;
    out.m2 = out.m0 * t.second;
    if (!std::isfinite(out.m0) || !std::isfinite(out.m1) || !std::isfinite(out.m2)) {
        throw RangeError(fmt::format("E[e^(theta Y)] overflows at theta = {}", theta));
    }
    return out;
}

double mu_y(const JumpLaw& law) { return jump_exp_moments(law, 1.0).m0 - 1.0; }

JumpLaw tilt_law(const JumpLaw& law, double shift) {
    return std::visit(
        Overloaded{
            [shift](const GaussianJump& g) -> JumpLaw {
                return GaussianJump{g.mean + shift * g.variance, g.variance};
            },
            [](const ConstantJump& k) -> JumpLaw { return k; },
            [shift](const MixtureJump& mix) -> JumpLaw {
                const double log_norm = log_mgf(mix, shift);
                MixtureJump out;
                out.atoms.reserve(mix.atoms.size());
                for (const auto& atom : mix.atoms) {
                    const double w = atom.weight > 0.0
                                         ? std::exp(std::log(atom.weight) + shift * atom.value - log_norm)
                                         : 0.0;
                    out.atoms.push_back({w, atom.value});
                }
                return out;
            },
        },
        law);
}

bool is_degenerate_zero(const JumpLaw& law) {
    return std::visit(Overloaded{
                          [](const GaussianJump&) { return false; },
                          [](const ConstantJump& k) { return k.value == 0.0; },
                          [](const MixtureJump& mix) {
                              return std::all_of(mix.atoms.begin(), mix.atoms.end(), [](const MixtureAtom& m) {
                                  return m.weight <= 0.0 || m.value == 0.0;
                              });
                          },
                      },
                      law);
}

double ModelParams::drift() const {
    return measure == Measure::RiskNeutral ? -0.5 * sigma_s_sq : 0.5 * sigma_s_sq;
}

double ModelParams::compensator() const {
    return measure == Measure::RiskNeutral ? mu_y(jump) : 1.0 - 1.0 / share_mass;
}

ModelParams reference_params() { return ModelParams{}; }

ValidationReport validate_params(const ModelParams& p) {
    ValidationReport report;
    auto flag = [&report](std::string rule, std::string message) {
        report.violations.push_back({std::move(rule), std::move(message)});
    };

    const std::pair<const char*, double> scalars[] = {
        {"a", p.a},
        {"b", p.b},
        {"c", p.c},
        {"alpha", p.alpha},
        {"beta", p.beta},
        {"sigma_s_sq", p.sigma_s_sq},
        {"sigma_lam_sq", p.sigma_lam_sq},
        {"lambda0", p.lambda0},
        {"share_mass", p.share_mass},
    };
    bool all_finite = true;
    for (const auto& [name, value] : scalars) {
        if (!std::isfinite(value)) {
            flag("finite", fmt::format("{} is not a finite number ({})", name, value));
            all_finite = false;
        }
    }

    std::visit(Overloaded{
                   [&](const GaussianJump& g) {
                       if (!std::isfinite(g.mean) || !std::isfinite(g.variance)) {
                           flag("finite", "jump mean/variance must be finite");
                       } else if (!(g.variance > 0.0)) {
                           flag("jump_law", fmt::format("jump variance must be positive, got {}", g.variance));
                       }
                   },
                   [&](const ConstantJump& k) {
                       if (!std::isfinite(k.value)) flag("finite", "jump value must be finite");
                   },
                   [&](const MixtureJump& mix) {
                       if (mix.atoms.empty()) {
                           flag("jump_law", "mixture must have at least one atom");
                           return;
                       }
                       double total = 0.0;
                       for (const auto& atom : mix.atoms) {
                           if (!std::isfinite(atom.weight) || !std::isfinite(atom.value)) {
                               flag("finite", "mixture weights and values must be finite");
                               return;
                           }
                           if (atom.weight < 0.0) flag("jump_law", "mixture weights must be nonnegative");
                           total += atom.weight;
                       }
                       if (std::abs(total - 1.0) > kWeightTolerance) {
                           flag("jump_law", fmt::format("mixture weights sum to {}, expected 1", total));
                       }
                   },
               },
               p.jump);

    const std::pair<const char*, double> positive[] = {
        {"a", p.a},
        {"b", p.b},
        {"c", p.c},
        {"alpha", p.alpha},
        {"beta", p.beta},
        {"sigma_s_sq", p.sigma_s_sq},
        {"sigma_lam_sq", p.sigma_lam_sq},
    };
    for (const auto& [name, value] : positive) {
        if (std::isfinite(value) && !(value > 0.0)) {
            flag("positivity", fmt::format("{} must be > 0 (got {})", name, value));
        }
    }
    if (std::isfinite(p.lambda0) && !(p.lambda0 >= 0.0)) {
        flag("lambda0", fmt::format("lambda0 must be >= 0 (got {})", p.lambda0));
    }

    // Cross-field rules only make sense once every field is a number.
    if (all_finite) {
        if (!(p.b > p.a * p.beta)) {
            flag("stationarity", fmt::format("requires b > a*beta, got b = {} and a*beta = {}", p.b, p.a * p.beta));
        }
        if (!(2.0 * p.b * p.c >= p.sigma_lam_sq)) {
            flag("nonnegativity",
                 fmt::format("requires 2bc >= sigma_lam^2, got 2bc = {} and sigma_lam^2 = {}", 2.0 * p.b * p.c,
                             p.sigma_lam_sq));
        }
        if (!(p.share_mass > 0.0)) flag("share_mass", "share_mass must be positive");
    }

    report.valid = report.violations.empty();
    return report;
}

void require_valid(const ModelParams& p) {
    const auto report = validate_params(p);
    if (report.valid) return;
    std::string msg = "invalid model parameters:";
    for (const auto& v : report.violations) msg += fmt::format(" [{}] {};", v.rule, v.message);
    throw ValidationError(msg);
}

ModelParams tilt_share_measure(const ModelParams& p) {
    require_valid(p);
    if (p.measure != Measure::RiskNeutral) {
        throw ValidationError("tilt_share_measure: parameters are already under the share measure");
    }
    const double mass = jump_exp_moments(p.jump, 1.0).m0;
    ModelParams out = p;
    out.jump = tilt_law(p.jump, 1.0);
    out.alpha = p.alpha * mass;
    out.beta = p.beta * mass;
    out.measure = Measure::Share;
    out.share_mass = mass;
    return out;
}

std::string describe(const JumpLaw& law) {
    return std::visit(Overloaded{
                          [](const GaussianJump& g) { return fmt::format("Gaussian({}, {})", g.mean, g.variance); },
                          [](const ConstantJump& k) { return fmt::format("Constant({})", k.value); },
                          [](const MixtureJump& mix) {
                              std::string s = "Mixture{";
                              for (const auto& atom : mix.atoms) s += fmt::format("({}, {})", atom.weight, atom.value);
                              return s + "}";
                          },
                      },
                      law);
}

std::string params_digest(const ModelParams& p) {
    const std::string canonical =
        fmt::format("a={:.17g};b={:.17g};c={:.17g};alpha={:.17g};beta={:.17g};ss={:.17g};sl={:.17g};l0={:.17g};"
                    "measure={};mass={:.17g};jump=",
                    p.a, p.b, p.c, p.alpha, p.beta, p.sigma_s_sq, p.sigma_lam_sq, p.lambda0,
                    p.measure == Measure::RiskNeutral ? "Q" : "Qbar", p.share_mass);
    std::string jump = std::visit(
        Overloaded{
            [](const GaussianJump& g) { return fmt::format("G({:.17g},{:.17g})", g.mean, g.variance); },
            [](const ConstantJump& k) { return fmt::format("C({:.17g})", k.value); },
            [](const MixtureJump& mix) {
                std::string s = "M";
                for (const auto& atom : mix.atoms) s += fmt::format("({:.17g},{:.17g})", atom.weight, atom.value);
                return s;
            },
        },
        p.jump);
    return sha256_hex(canonical + jump).substr(0, 16);
}

}  // namespace affine_smile
