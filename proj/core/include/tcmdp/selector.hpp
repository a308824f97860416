#pragma once

#include "tcmdp/density.hpp"
#include "tcmdp/empirical_measure.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace tcmdp {

struct SelectorConfig {
    double alpha = (std::sqrt(2.0) - 1.0) / (2.0 * std::sqrt(2.0));
    //! Penalty weight L. Must be positive.
    double penalty_weight = 1.0;
    //! Reserved for approximate sup search; the sup is exact over finite lists.
    double sup_tolerance = 0.0;
    //! Worker threads for the pairwise table (0 = hardware concurrency).
    unsigned jobs = 1;

    void validate() const;
};

//! Pairwise empirical Hellinger and T values, row-major k x k.
struct PairwiseTable {
    std::size_t k = 0;
    std::vector<double> h2;
    std::vector<double> t;

    double hellinger(std::size_t i, std::size_t j) const { return h2[i * k + j]; }
    double comparison(std::size_t i, std::size_t j) const { return t[i * k + j]; }
};

//! One pass over the samples evaluating every candidate slice once; only
//! unordered pairs are accumulated and T(j, i) is filled as -T(i, j).
//! Results do not depend on jobs.
PairwiseTable pairwise_table(const CandidateList& candidates, const EmpiricalMeasure& m,
                             unsigned jobs = 1);

//! theta of candidate i from a finished table.
double contrast(std::size_t i, const PairwiseTable& table, const CandidateList& candidates,
                std::size_t n, const SelectorConfig& cfg);

//! theta(f) over the candidate list; f must be one of the entries (same object).
double contrast(const CandidateDensity& f, const CandidateList& candidates,
                const EmpiricalMeasure& m, const SelectorConfig& cfg);

struct SelectionResult {
    std::size_t selected_index = 0;
    CandidatePtr selected;
    std::vector<std::string> labels;
    std::vector<double> contrast_values;
    PairwiseTable table;
    //! Indices within 1e-12 of the minimum contrast, tie-break order first.
    std::vector<std::size_t> ties;

    //! labels, contrast values, selected label and ties.
    std::string to_json() const;
};

//! Exact argmin of theta. Ties within 1e-12 are broken by smaller penalty,
//! then by label.
SelectionResult select(const CandidateList& candidates, const EmpiricalMeasure& m,
                       const SelectorConfig& cfg = {});

struct OracleGap {
    double risk = 0.0;
    double oracle = 0.0;
    double ratio = 0.0;
    std::size_t oracle_index = 0;
};

//! risk = H^2(true_s, selected), oracle = min_f H^2(true_s, f) + L pen(f)/n.
//! Both use the empirical measure of m's trajectory with a quadrature fine
//! enough for non-piecewise densities.
OracleGap oracle_gap_report(const CandidateList& candidates, const SelectionResult& selection,
                            const EmpiricalMeasure& m, const SelectorConfig& cfg,
                            const Density& true_s);
OracleGap oracle_gap_report(const CandidateList& candidates, const EmpiricalMeasure& m,
                            const SelectorConfig& cfg, const Density& true_s);

} // namespace tcmdp
