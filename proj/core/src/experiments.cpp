#include "tcmdp/experiments.hpp"

#include "tcmdp/error.hpp"
#include "tcmdp/losses.hpp"
#include "tcmdp/parallel.hpp"
#include "tcmdp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace tcmdp {

SplineOptions Table1Config::table1_spline_options() {
    SplineOptions o;
    o.context_axes = {true, false, true};
    o.context_degree_cap = 2;
    return o;
}

void Table1Config::validate() const {
    if (models.empty()) {
        throw ConfigError("table1 needs at least one model");
    }
    if (replications < 1) {
        throw ConfigError("replications must be >= 1");
    }
    if (n < Trajectory::min_samples) {
        throw ConfigError("table1 needs n >= 3");
    }
    if (max_complexity < 1 || max_complexity > 20) {
        throw ConfigError("max complexity must lie in 1..20");
    }
    if (context_depth < 0 || context_depth > 10) {
        throw ConfigError("context depth must lie in 0..10");
    }
    if (!histograms && !splines) {
        throw ConfigError("table1 needs at least one estimator class");
    }
    selector.validate();
    base.validate();
}

std::string model_name(ModelKind kind) {
    switch (kind) {
    case ModelKind::model_i:
        return "model_i";
    case ModelKind::model_ii:
        return "model_ii";
    case ModelKind::model_iii:
        return "model_iii";
    case ModelKind::custom:
        return "custom";
    }
    return "unknown";
}

namespace {

struct Replication {
    // per estimator: risks by complexity and the chosen complexity
    std::vector<std::vector<double>> risk;
    std::vector<int> chosen;
};

Replication run_replication(const Table1Config& cfg, const SimModel& model,
                            const std::vector<std::string>& estimators, std::uint64_t seed) {
    const auto t = std::make_shared<const Trajectory>(simulate(model, cfg.n, seed));
    const auto truth = true_density(model);
    Replication out;
    for (const auto& est : estimators) {
        CandidateList cands;
        for (int l = 1; l <= cfg.max_complexity; ++l) {
            if (est == "histogram") {
                const DyadicPartition p{cfg.context_depth, 0, cfg.context_depth, l};
                cands.push_back(std::make_shared<HistogramDensity>(fit_histogram(*t, p)));
            } else {
                cands.push_back(std::make_shared<SplineDensity>(fit_spline(*t, l, cfg.spline)));
            }
        }
        std::vector<double> risk;
        for (int l = 1; l <= cfg.max_complexity; ++l) {
            const auto& c = cands[static_cast<std::size_t>(l - 1)];
            const EmpiricalMeasure m(t, Quadrature::refined_for(c->y_dyadic_depth().value_or(0)));
            risk.push_back(hellinger_sq(*truth, *c, m));
        }
        const EmpiricalMeasure sm(t, quadrature_for(cands));
        const auto sel = select(cands, sm, cfg.selector);
        out.risk.push_back(std::move(risk));
        out.chosen.push_back(static_cast<int>(sel.selected_index) + 1);
    }
    return out;
}

} // namespace

Table1Result reproduce_table1(const Table1Config& cfg) {
    cfg.validate();
    std::vector<std::string> estimators;
    if (cfg.histograms) {
        estimators.push_back("histogram");
    }
    if (cfg.splines) {
        estimators.push_back("spline");
    }
    Table1Result result;
    for (std::size_t mi = 0; mi < cfg.models.size(); ++mi) {
        SimModel model = cfg.base;
        model.kind = cfg.models[mi];
        std::vector<Replication> reps(cfg.replications);
        parallel_for(cfg.replications, cfg.jobs, [&](std::size_t r) {
            reps[r] = run_replication(cfg, model, estimators,
                                      derive_seed(cfg.seed, mi * 1000003 + r));
        });
        for (std::size_t e = 0; e < estimators.size(); ++e) {
            for (int l = 1; l <= cfg.max_complexity; ++l) {
                std::vector<double> v(cfg.replications);
                for (std::size_t r = 0; r < cfg.replications; ++r) {
                    v[r] = reps[r].risk[e][static_cast<std::size_t>(l - 1)];
                }
                const double mu = mean(v);
                std::vector<double> sq(v.size());
                for (std::size_t r = 0; r < v.size(); ++r) {
                    sq[r] = (v[r] - mu) * (v[r] - mu);
                }
                const double sd =
                    v.size() > 1 ? std::sqrt(pairwise_sum(sq) / static_cast<double>(v.size() - 1)) : 0.0;
                result.rows.push_back({model.kind, estimators[e], l, mu, sd});
            }
            Table1Selection s{model.kind, estimators[e], {}};
            for (const auto& rep : reps) {
                s.chosen.push_back(rep.chosen[e]);
            }
            result.selections.push_back(std::move(s));
        }
    }
    return result;
}

std::vector<double> Table1Result::curve(ModelKind model, const std::string& estimator) const {
    std::vector<double> out;
    for (const auto& r : rows) {
        if (r.model == model && r.estimator == estimator) {
            out.push_back(r.mean_risk);
        }
    }
    if (out.empty()) {
        throw ConfigError("no table1 rows for " + model_name(model) + "/" + estimator);
    }
    return out;
}

const Table1Selection& Table1Result::selection(ModelKind model, const std::string& estimator) const {
    for (const auto& s : selections) {
        if (s.model == model && s.estimator == estimator) {
            return s;
        }
    }
    throw ConfigError("no table1 selection for " + model_name(model) + "/" + estimator);
}

std::string table1_csv(const Table1Result& result) {
    std::vector<std::pair<ModelKind, std::string>> columns;
    int max_l = 0;
    for (const auto& r : result.rows) {
        const std::pair<ModelKind, std::string> key{r.model, r.estimator};
        if (std::find(columns.begin(), columns.end(), key) == columns.end()) {
            columns.push_back(key);
        }
        max_l = std::max(max_l, r.complexity);
    }
    std::ostringstream out;
    out << "complexity";
    for (const auto& [m, e] : columns) {
        out << ',' << model_name(m) << '_' << e;
    }
    out << '\n' << std::setprecision(6) << std::fixed;
    for (int l = 1; l <= max_l; ++l) {
        out << l;
        for (const auto& [m, e] : columns) {
            out << ',' << result.curve(m, e)[static_cast<std::size_t>(l - 1)];
        }
        out << '\n';
    }
    return out.str();
}

std::string table1_selection_csv(const Table1Result& result) {
    std::ostringstream out;
    out << "model,estimator,replication,chosen_complexity\n";
    for (const auto& s : result.selections) {
        for (std::size_t r = 0; r < s.chosen.size(); ++r) {
            out << model_name(s.model) << ',' << s.estimator << ',' << r << ',' << s.chosen[r] << '\n';
        }
    }
    return out.str();
}

} // namespace tcmdp
