#include "tcmdp/cost_control.hpp"

#include "tcmdp/error.hpp"
#include "tcmdp/parallel.hpp"
#include "tcmdp/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace tcmdp {

void CostSpec::validate() const {
    if (!fn) {
        throw ConfigError("cost '" + name + "' has no function");
    }
    if (control_grid.empty()) {
        throw ConfigError("cost '" + name + "' has an empty control grid");
    }
    for (double a : control_grid) {
        if (!(a >= 0.0 && a <= 1.0)) {
            throw ConfigError("control grid values must lie in [0,1]");
        }
    }
    if (!(sup_norm >= 0.0) || !std::isfinite(sup_norm)) {
        throw ConfigError("cost sup norm must be finite and nonnegative");
    }
    Rng rng(derive_seed(0x5eed, 17));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = unit(rng), a = unit(rng), g = unit(rng), y = unit(rng);
        const double v = fn(x, a, g, y);
        if (!(v >= 0.0) || v > sup_norm * (1.0 + 1e-12)) {
            throw ConfigError("cost '" + name + "' leaves [0, sup_norm] at a probe point");
        }
    }
}

std::vector<double> uniform_control_grid(std::size_t k) {
    if (k == 0) {
        throw ConfigError("control grid needs at least one point");
    }
    std::vector<double> grid(k, 0.0);
    for (std::size_t i = 0; i < k && k > 1; ++i) {
        grid[i] = static_cast<double>(i) / static_cast<double>(k - 1);
    }
    return grid;
}

CostSpec constant_cost(double c, std::vector<double> grid) {
    if (!(c >= 0.0)) {
        throw ConfigError("constant cost must be nonnegative");
    }
    return {"constant", [c](double, double, double, double) { return c; }, c, std::move(grid)};
}

CostSpec threshold_cost(double threshold, std::vector<double> grid) {
    return {"threshold",
            [threshold](double, double, double, double y) { return y > threshold ? 1.0 : 0.0; },
            1.0, std::move(grid)};
}

CostSpec quadratic_cost(double target, double control_weight, std::vector<double> grid) {
    if (!(target >= 0.0 && target <= 1.0) || !(control_weight >= 0.0)) {
        throw ConfigError("quadratic cost needs target in [0,1] and weight >= 0");
    }
    return {"quadratic",
            [target, control_weight](double, double a, double, double y) {
                return (y - target) * (y - target) + control_weight * a * a;
            },
            1.0 + control_weight, std::move(grid)};
}

namespace {

struct Table4 {
    std::array<std::vector<double>, 4> axes;
    std::vector<double> values;

    std::size_t index(const std::array<std::size_t, 4>& i) const {
        return ((i[0] * axes[1].size() + i[1]) * axes[2].size() + i[2]) * axes[3].size() + i[3];
    }

    double operator()(double x, double a, double g, double y) const {
        const double p[4] = {x, a, g, y};
        std::array<std::size_t, 4> lo{};
        std::array<double, 4> frac{};
        for (int d = 0; d < 4; ++d) {
            const auto& ax = axes[d];
            if (ax.size() == 1 || p[d] <= ax.front()) {
                lo[d] = 0;
                frac[d] = 0.0;
            } else if (p[d] >= ax.back()) {
                lo[d] = ax.size() - 2;
                frac[d] = 1.0;
            } else {
                const auto it = std::upper_bound(ax.begin(), ax.end(), p[d]);
                lo[d] = static_cast<std::size_t>(it - ax.begin()) - 1;
                frac[d] = (p[d] - ax[lo[d]]) / (ax[lo[d] + 1] - ax[lo[d]]);
            }
        }
        double v = 0.0;
        for (int corner = 0; corner < 16; ++corner) {
            double w = 1.0;
            std::array<std::size_t, 4> idx{};
            for (int d = 0; d < 4; ++d) {
                const bool up = (corner >> d) & 1;
                if (axes[d].size() == 1) {
                    if (up) {
                        w = 0.0;
                    }
                    idx[d] = 0;
                    continue;
                }
                idx[d] = lo[d] + (up ? 1 : 0);
                w *= up ? frac[d] : 1.0 - frac[d];
            }
            if (w != 0.0) {
                v += w * values[index(idx)];
            }
        }
        return v;
    }
};

} // namespace

CostSpec table_cost(const std::string& csv_path, std::vector<double> grid) {
    std::ifstream in(csv_path);
    if (!in) {
        throw ConfigError("cannot open cost table: " + csv_path);
    }
    std::string line;
    std::vector<std::array<double, 5>> rows;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (!header) {
            header = true;
            continue;
        }
        std::array<double, 5> r{};
        std::stringstream ss(line);
        std::string f;
        for (int k = 0; k < 5; ++k) {
            if (!std::getline(ss, f, ',')) {
                throw ConfigError(csv_path + ": cost rows need x,a,g,y,cost");
            }
            try {
                r[k] = std::stod(f);
            } catch (const std::exception&) {
                throw ConfigError(csv_path + ": bad number '" + f + "'");
            }
        }
        rows.push_back(r);
    }
    if (rows.empty()) {
        throw ConfigError(csv_path + ": empty cost table");
    }
    auto table = std::make_shared<Table4>();
    for (int d = 0; d < 4; ++d) {
        std::vector<double> ax;
        for (const auto& r : rows) {
            ax.push_back(r[d]);
        }
        std::sort(ax.begin(), ax.end());
        ax.erase(std::unique(ax.begin(), ax.end()), ax.end());
        table->axes[d] = ax;
    }
    const std::size_t total =
        table->axes[0].size() * table->axes[1].size() * table->axes[2].size() * table->axes[3].size();
    if (total != rows.size()) {
        throw ConfigError(csv_path + ": cost table is not a full regular grid");
    }
    table->values.assign(total, std::nan(""));
    double sup = 0.0;
    for (const auto& r : rows) {
        std::array<std::size_t, 4> idx{};
        for (int d = 0; d < 4; ++d) {
            const auto& ax = table->axes[d];
            idx[d] = static_cast<std::size_t>(std::lower_bound(ax.begin(), ax.end(), r[d]) - ax.begin());
        }
        if (!(r[4] >= 0.0)) {
            throw ConfigError(csv_path + ": costs must be nonnegative");
        }
        table->values[table->index(idx)] = r[4];
        sup = std::max(sup, r[4]);
    }
    for (double v : table->values) {
        if (std::isnan(v)) {
            throw ConfigError(csv_path + ": duplicate or missing grid points");
        }
    }
    return {"table", [table](double x, double a, double g, double y) { return (*table)(x, a, g, y); },
            sup, std::move(grid)};
}

double empirical_cost(const Density& density, const CostSpec& cost, double a, double g,
                      const EmpiricalMeasure& m, const CostOptions& options) {
    const auto& t = m.trajectory();
    std::vector<IndexWeight> weights;
    try {
        weights = conditional_measure_weights(t, a, g, options.tolerance);
    } catch (const EmptyConditional&) {
        if (!options.fallback) {
            throw;
        }
        weights.reserve(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) {
            weights.push_back({i, 1.0 / static_cast<double>(t.size())});
        }
    }
    const auto& ys = m.quadrature().nodes();
    const auto& w = m.quadrature().weights();
    double total = 0.0;
    for (const auto& iw : weights) {
        const double x = t[iw.index].x;
        double acc = 0.0;
        for (std::size_t q = 0; q < ys.size(); ++q) {
            const double s = density.eval_kernel(x, a, g, ys[q]);
            const double l = cost.fn(x, a, g, ys[q]);
            if (!std::isfinite(s) || !std::isfinite(l)) {
                throw EvaluationError("non-finite cost integrand at sample " +
                                      std::to_string(iw.index));
            }
            acc += w[q] * l * s;
        }
        total += iw.weight * acc;
    }
    return total;
}

ControlChoice select_control(const Density& density, const CostSpec& cost, double g,
                             const EmpiricalMeasure& m, const CostOptions& options, unsigned jobs) {
    if (cost.control_grid.empty()) {
        throw ConfigError("select_control needs a nonempty control grid");
    }
    ControlChoice out;
    out.values.resize(cost.control_grid.size());
    parallel_for(cost.control_grid.size(), jobs, [&](std::size_t i) {
        out.values[i] = empirical_cost(density, cost, cost.control_grid[i], g, m, options);
    });
    const double best = *std::min_element(out.values.begin(), out.values.end());
    bool first = true;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        if (out.values[i] <= best + 1e-12) {
            out.ties.push_back(cost.control_grid[i]);
            if (first) {
                out.a_hat = cost.control_grid[i];
                out.value = out.values[i];
                first = false;
            }
        }
    }
    return out;
}

double regret(const Density& true_density, const Density& est_density, const CostSpec& cost,
              const EmpiricalMeasure& m, const CostOptions& options, unsigned jobs) {
    const auto& t = m.trajectory();
    // distinct contexts with their empirical masses
    std::vector<double> contexts;
    std::vector<double> mass;
    for (const auto& s : t.samples()) {
        bool found = false;
        for (std::size_t k = 0; k < contexts.size(); ++k) {
            if (std::abs(contexts[k] - s.g) <= options.tolerance) {
                mass[k] += 1.0;
                found = true;
                break;
            }
        }
        if (!found) {
            contexts.push_back(s.g);
            mass.push_back(1.0);
        }
    }
    std::vector<double> per_context(contexts.size());
    parallel_for(contexts.size(), jobs, [&](std::size_t k) {
        const auto truth = select_control(true_density, cost, contexts[k], m, options);
        const auto est = select_control(est_density, cost, contexts[k], m, options);
        std::size_t idx = 0;
        while (cost.control_grid[idx] != est.a_hat) {
            ++idx;
        }
        per_context[k] = (truth.values[idx] - truth.value) * mass[k] / static_cast<double>(t.size());
    });
    return pairwise_sum(per_context);
}

double minimax_cost(const std::vector<int>& path, const Eigen::MatrixXd& transition) {
    if (path.size() < 2) {
        throw DomainError("minimax cost needs at least one transition");
    }
    const int special = static_cast<int>(transition.rows()) - 1;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        if (path[i] == special && path[i + 1] != special) {
            total += transition(path[i], path[i + 1]);
        }
    }
    return total / static_cast<double>(path.size() - 1);
}

MinimaxChoice minimax_select_control(const std::vector<int>& path, const Eigen::MatrixXd& m1,
                                       const Eigen::MatrixXd& m2) {
    MinimaxChoice c;
    c.cost1 = minimax_cost(path, m1);
    c.cost2 = minimax_cost(path, m2);
    c.tie = std::abs(c.cost1 - c.cost2) <= 1e-12;
    c.control = c.cost1 < c.cost2 && !c.tie ? 1 : 2;
    return c;
}

std::size_t minimax_events(const std::vector<int>& path, int special_state) {
    std::size_t count = 0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        if (path[i] == special_state && path[i + 1] != special_state) {
            ++count;
        }
    }
    return count;
}

double minimax_regret_per_mistake(const std::vector<int>& path, const Eigen::MatrixXd& m1,
                                   const Eigen::MatrixXd& m2) {
    const std::size_t events = minimax_events(path, static_cast<int>(m1.rows()) - 1);
    if (events == 0) {
        throw DomainError("path never leaves the special state");
    }
    const double gap = minimax_cost(path, m1) - minimax_cost(path, m2);
    return gap * static_cast<double>(path.size() - 1) / static_cast<double>(events);
}

} // namespace tcmdp
