#include "tcmdp/error.hpp"
#include "tcmdp/mdp_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tcmdp {

double NoiseSpec::variance(double x) const {
    return scale / (1.0 + std::exp(-slope * (x - center))) + offset;
}

void NoiseSpec::validate() const {
    if (!(scale >= 0.0) || !(offset >= 0.0) || !std::isfinite(slope) || !std::isfinite(center)) {
        throw ConfigError("noise spec needs scale >= 0, offset >= 0 and finite slope/center");
    }
}

double ContextLaw::sample(Rng& rng) const {
    switch (kind) {
    case Kind::uniform:
        return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    case Kind::grid: {
        std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
        return values[pick(rng)];
    }
    case Kind::constant:
        return value;
    }
    return 0.0;
}

void ContextLaw::validate() const {
    if (kind == Kind::grid) {
        if (values.empty()) {
            throw ConfigError("grid context law needs values");
        }
        for (double v : values) {
            if (!(v >= 0.0 && v <= 1.0)) {
                throw ConfigError("context values must lie in [0,1]");
            }
        }
    }
    if (kind == Kind::constant && !(value >= 0.0 && value <= 1.0)) {
        throw ConfigError("context value must lie in [0,1]");
    }
}

double SimModel::mean(double x, double a, double g) const {
    double m = 0.0;
    switch (kind) {
    case ModelKind::model_i:
        m = 0.5 * x + (1.0 + g) / 4.0;
        break;
    case ModelKind::model_ii:
        m = 0.5 * (x + g);
        break;
    case ModelKind::model_iii:
        m = x / (50.0 * x + 1.0) + x * g;
        break;
    case ModelKind::custom:
        if (!custom_mean) {
            throw ConfigError("custom model without a mean function");
        }
        return custom_mean(x, a, g);
    }
    if (control_role == ControlRole::exogenous) {
        m += control_gain * (a - 0.5);
    }
    return m;
}

void SimModel::validate() const {
    noise.validate();
    context.validate();
    if (kind == ModelKind::custom && !custom_mean) {
        throw ConfigError("custom model without a mean function");
    }
    if (control_role == ControlRole::exogenous && behavior_controls.empty()) {
        throw ConfigError("exogenous control role needs behavior controls");
    }
    if (!(x0 >= 0.0 && x0 <= 1.0)) {
        throw ConfigError("initial state must lie in [0,1]");
    }
}

Trajectory simulate(const SimModel& model, std::size_t n, std::uint64_t seed) {
    model.validate();
    if (n < Trajectory::min_samples) {
        throw DomainError("simulate needs n >= 3");
    }
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Transition> out;
    out.reserve(n);
    double x = model.x0;
    for (std::size_t k = 0; k < n; ++k) {
        const double g = model.context.sample(rng);
        const double w = std::sqrt(model.noise.variance(x)) * normal(rng);
        double a = 0.0;
        if (model.control_role == ControlRole::noise) {
            a = std::clamp(w, 0.0, 1.0);
        } else {
            std::uniform_int_distribution<std::size_t> pick(0, model.behavior_controls.size() - 1);
            a = model.behavior_controls[pick(rng)];
        }
        double y = model.mean(x, a, g) + w;
        if (model.clip) {
            y = std::clamp(y, 0.0, 1.0);
        }
        out.push_back({x, a, g, y});
        x = y;
    }
    return Trajectory(std::move(out), true);
}

namespace {

std::string require_positive_variance(const SimModel& m) {
    m.validate();
    if (!(m.noise.offset > 0.0 || m.noise.scale > 0.0)) {
        throw ConfigError("true density needs a positive noise variance");
    }
    return "true";
}

double gaussian_pdf(double y, double mu, double var) {
    const double d = y - mu;
    return std::exp(-0.5 * d * d / var) / std::sqrt(2.0 * std::numbers::pi * var);
}

} // namespace

TrueDensity::TrueDensity(SimModel model)
    : CandidateDensity(require_positive_variance(model), 1, 1.0), model_(std::move(model)) {}

double TrueDensity::eval_kernel(double x, double a, double g, double y) const {
    return gaussian_pdf(y, model_.mean(x, a, g), model_.noise.variance(x));
}

double TrueDensity::eval(double x, double a, double g, double y) const {
    return std::min(eval_kernel(x, a, g, y), 1.0);
}

void TrueDensity::eval_slice(double x, double a, double g, std::span<const double> ys,
                             std::span<double> out) const {
    const double mu = model_.mean(x, a, g);
    const double var = model_.noise.variance(x);
    for (std::size_t j = 0; j < ys.size(); ++j) {
        out[j] = std::min(gaussian_pdf(ys[j], mu, var), 1.0);
    }
}

double TrueDensity::lower_atom(double x, double a, double g) const {
    const double sd = std::sqrt(model_.noise.variance(x));
    return 0.5 * std::erfc(model_.mean(x, a, g) / (sd * std::numbers::sqrt2));
}

double TrueDensity::upper_atom(double x, double a, double g) const {
    const double sd = std::sqrt(model_.noise.variance(x));
    return 0.5 * std::erfc((1.0 - model_.mean(x, a, g)) / (sd * std::numbers::sqrt2));
}

std::shared_ptr<const TrueDensity> true_density(const SimModel& model) {
    return std::make_shared<TrueDensity>(model);
}

Trajectory simulate_by_rejection(const Density& density, double envelope, std::size_t n,
                                 std::uint64_t seed, double x0, const ContextLaw& context,
                                 const std::function<double(double, double, Rng&)>& control) {
    if (!(envelope > 0.0)) {
        throw DomainError("rejection envelope must be positive");
    }
    if (n < Trajectory::min_samples) {
        throw DomainError("simulate needs n >= 3");
    }
    context.validate();
    Rng rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Transition> out;
    out.reserve(n);
    double x = x0;
    for (std::size_t k = 0; k < n; ++k) {
        const double g = context.sample(rng);
        const double a = control ? control(x, g, rng) : 0.0;
        double y = 0.0;
        for (int tries = 0;; ++tries) {
            if (tries > 100000) {
                throw NumericError("rejection sampler made no progress");
            }
            y = unit(rng);
            const double v = density.eval_kernel(x, a, g, y);
            if (v > envelope * (1.0 + 1e-12)) {
                throw DomainError("density exceeds the rejection envelope");
            }
            if (unit(rng) * envelope <= v) {
                break;
            }
        }
        out.push_back({x, a, g, y});
        x = y;
    }
    return Trajectory(std::move(out), true);
}

std::pair<Trajectory, Trajectory> simulate_shifted(const SimModel& model, const SimModel& shift,
                                                   std::size_t n, std::size_t m,
                                                   std::uint64_t seed) {
    Trajectory train = simulate(model, n, derive_seed(seed, 0));
    Trajectory test = simulate(shift, m, derive_seed(seed, 1));
    return {std::move(train), std::move(test)};
}

} // namespace tcmdp
