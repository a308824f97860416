#include "tcmdp/selector.hpp"

#include "tcmdp/error.hpp"
#include "tcmdp/losses.hpp"
#include "tcmdp/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <limits>
#include <numeric>

namespace tcmdp {

void SelectorConfig::validate() const {
    if (!(alpha > 0.0)) {
        throw ConfigError("selector alpha must be positive");
    }
    if (!(penalty_weight > 0.0)) {
        throw ConfigError("selector penalty weight must be positive");
    }
    if (!(sup_tolerance >= 0.0)) {
        throw ConfigError("selector sup tolerance must be nonnegative");
    }
}

namespace {

constexpr std::size_t chunk_size = 64;

// per unordered pair: h2 sum, psi sum, b sum, c sum
struct PairSums {
    double h2 = 0.0;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

} // namespace

PairwiseTable pairwise_table(const CandidateList& candidates, const EmpiricalMeasure& m,
                             unsigned jobs) {
    const std::size_t k = candidates.size();
    if (k == 0) {
        throw DomainError("pairwise table of an empty candidate list");
    }
    const auto& t = m.trajectory();
    const auto& ys = m.quadrature().nodes();
    const auto& w = m.quadrature().weights();
    const std::size_t nq = ys.size();
    const std::size_t npairs = k * (k - 1) / 2;
    const std::size_t nchunks = (t.size() + chunk_size - 1) / chunk_size;

    // fixed chunk layout so the reduction order never depends on jobs
    std::vector<std::vector<PairSums>> partial(nchunks);
    parallel_for(nchunks, jobs, [&](std::size_t chunk) {
        std::vector<PairSums> sums(npairs);
        std::vector<double> vals(k * nq), roots(k * nq), obs(k);
        const std::size_t lo = chunk * chunk_size;
        const std::size_t hi = std::min(t.size(), lo + chunk_size);
        for (std::size_t i = lo; i < hi; ++i) {
            const auto& s = t[i];
            for (std::size_t c = 0; c < k; ++c) {
                std::span<double> out(vals.data() + c * nq, nq);
                candidates[c]->eval_slice(s.x, s.a, s.g, ys, out);
                for (std::size_t q = 0; q < nq; ++q) {
                    const double v = out[q];
                    if (!(v >= 0.0) || !std::isfinite(v)) {
                        throw EvaluationError("candidate " + candidates[c]->label() +
                                              " invalid at sample " + std::to_string(i));
                    }
                    roots[c * nq + q] = std::sqrt(v);
                }
                obs[c] = candidates[c]->eval(s.x, s.a, s.g, s.y);
            }
            std::size_t p = 0;
            for (std::size_t c1 = 0; c1 < k; ++c1) {
                const double* v1 = vals.data() + c1 * nq;
                const double* r1 = roots.data() + c1 * nq;
                for (std::size_t c2 = c1 + 1; c2 < k; ++c2, ++p) {
                    const double* v2 = vals.data() + c2 * nq;
                    const double* r2 = roots.data() + c2 * nq;
                    double h2 = 0.0, b = 0.0, c = 0.0;
                    for (std::size_t q = 0; q < nq; ++q) {
                        const double d = r2[q] - r1[q];
                        h2 += w[q] * d * d;
                        b += w[q] * std::sqrt(0.5 * (v1[q] + v2[q])) * d;
                        c += w[q] * (v1[q] - v2[q]);
                    }
                    auto& acc = sums[p];
                    acc.h2 += h2;
                    acc.a += psi(obs[c1], obs[c2]);
                    acc.b += b;
                    acc.c += c;
                }
            }
        }
        partial[chunk] = std::move(sums);
    });

    PairwiseTable table;
    table.k = k;
    table.h2.assign(k * k, 0.0);
    table.t.assign(k * k, 0.0);
    const double inv_n = 1.0 / static_cast<double>(t.size());
    std::size_t p = 0;
    for (std::size_t c1 = 0; c1 < k; ++c1) {
        for (std::size_t c2 = c1 + 1; c2 < k; ++c2, ++p) {
            PairSums tot;
            for (const auto& part : partial) {
                tot.h2 += part[p].h2;
                tot.a += part[p].a;
                tot.b += part[p].b;
                tot.c += part[p].c;
            }
            const double h2 = 0.5 * tot.h2 * inv_n;
            const TComponents tc{tot.a * inv_n, tot.b * inv_n, tot.c * inv_n};
            table.h2[c1 * k + c2] = h2;
            table.h2[c2 * k + c1] = h2;
            table.t[c1 * k + c2] = tc.total();
            table.t[c2 * k + c1] = -tc.total();
        }
    }
    return table;
}

double contrast(std::size_t i, const PairwiseTable& table, const CandidateList& candidates,
                std::size_t n, const SelectorConfig& cfg) {
    const double inv_n = 1.0 / static_cast<double>(n);
    double sup = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < table.k; ++j) {
        const double v = cfg.alpha * table.hellinger(i, j) + table.comparison(i, j) -
                         cfg.penalty_weight * candidates[j]->penalty() * inv_n;
        sup = std::max(sup, v);
    }
    return sup + cfg.penalty_weight * candidates[i]->penalty() * inv_n;
}

double contrast(const CandidateDensity& f, const CandidateList& candidates,
                const EmpiricalMeasure& m, const SelectorConfig& cfg) {
    cfg.validate();
    std::size_t idx = candidates.size();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (candidates[i].get() == &f) {
            idx = i;
        }
    }
    if (idx == candidates.size()) {
        throw DomainError("contrast: candidate is not in the list");
    }
    const double inv_n = 1.0 / static_cast<double>(m.n());
    double sup = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < candidates.size(); ++j) {
        const auto& g = *candidates[j];
        double v = -cfg.penalty_weight * g.penalty() * inv_n;
        if (j != idx) {
            v += cfg.alpha * hellinger_sq(f, g, m) + t_functional(f, g, m);
        }
        sup = std::max(sup, v);
    }
    return sup + cfg.penalty_weight * f.penalty() * inv_n;
}

SelectionResult select(const CandidateList& candidates, const EmpiricalMeasure& m,
                       const SelectorConfig& cfg) {
    cfg.validate();
    if (candidates.empty()) {
        throw DomainError("select needs at least one candidate");
    }
    SelectionResult r;
    r.table = pairwise_table(candidates, m, cfg.jobs);
    const std::size_t k = candidates.size();
    r.contrast_values.resize(k);
    r.labels.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        r.contrast_values[i] = contrast(i, r.table, candidates, m.n(), cfg);
        r.labels[i] = candidates[i]->label();
    }
    const double best = *std::min_element(r.contrast_values.begin(), r.contrast_values.end());
    for (std::size_t i = 0; i < k; ++i) {
        if (r.contrast_values[i] <= best + 1e-12) {
            r.ties.push_back(i);
        }
    }
    std::sort(r.ties.begin(), r.ties.end(), [&](std::size_t x, std::size_t y) {
        const double px = candidates[x]->penalty(), py = candidates[y]->penalty();
        if (px != py) {
            return px < py;
        }
        if (r.labels[x] != r.labels[y]) {
            return r.labels[x] < r.labels[y];
        }
        return x < y;
    });
    r.selected_index = r.ties.front();
    r.selected = candidates[r.selected_index];
    return r;
}

std::string SelectionResult::to_json() const {
    nlohmann::json j;
    j["labels"] = labels;
    j["contrast"] = contrast_values;
    j["selected"] = labels.at(selected_index);
    j["selected_index"] = selected_index;
    std::vector<std::string> tie_labels;
    for (auto i : ties) {
        tie_labels.push_back(labels.at(i));
    }
    j["ties"] = tie_labels;
    return j.dump(2);
}

OracleGap oracle_gap_report(const CandidateList& candidates, const SelectionResult& selection,
                            const EmpiricalMeasure& m, const SelectorConfig& cfg,
                            const Density& true_s) {
    int depth = 0;
    for (const auto& c : candidates) {
        if (auto d = c->y_dyadic_depth()) {
            depth = std::max(depth, *d);
        }
    }
    const EmpiricalMeasure fine(m.trajectory_ptr(), Quadrature::refined_for(depth),
                                m.match_tolerance());
    OracleGap out;
    out.oracle = std::numeric_limits<double>::infinity();
    const double inv_n = 1.0 / static_cast<double>(m.n());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const double h2 = hellinger_sq(true_s, *candidates[i], fine);
        if (i == selection.selected_index) {
            out.risk = h2;
        }
        const double v = h2 + cfg.penalty_weight * candidates[i]->penalty() * inv_n;
        if (v < out.oracle) {
            out.oracle = v;
            out.oracle_index = i;
        }
    }
    out.ratio = out.risk / out.oracle;
    return out;
}

OracleGap oracle_gap_report(const CandidateList& candidates, const EmpiricalMeasure& m,
                            const SelectorConfig& cfg, const Density& true_s) {
    return oracle_gap_report(candidates, select(candidates, m, cfg), m, cfg, true_s);
}

} // namespace tcmdp
