#pragma once

#include "tcmdp/mdp_sim.hpp"
#include "tcmdp/model_classes.hpp"
#include "tcmdp/selector.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tcmdp {

//! Fixed-complexity risk curves for the simulated models.
struct Table1Config {
    std::vector<ModelKind> models{ModelKind::model_i, ModelKind::model_ii, ModelKind::model_iii};
    SimModel base;
    std::size_t n = 1000;
    std::size_t replications = 50;
    int max_complexity = 10;
    //! Histogram complexity l is the partition (c, 0, c, l) with c = context_depth.
    int context_depth = 1;
    bool histograms = true;
    bool splines = true;
    SplineOptions spline = table1_spline_options();
    SelectorConfig selector;
    std::uint64_t seed = 1;
    unsigned jobs = 1;

    static SplineOptions table1_spline_options();
    void validate() const;
};

struct Table1Row {
    ModelKind model = ModelKind::model_i;
    std::string estimator; // "histogram" or "spline"
    int complexity = 0;
    double mean_risk = 0.0;
    double sd_risk = 0.0;
};

struct Table1Selection {
    ModelKind model = ModelKind::model_i;
    std::string estimator;
    //! Complexity picked by the selector in each replication.
    std::vector<int> chosen;
};

struct Table1Result {
    std::vector<Table1Row> rows;
    std::vector<Table1Selection> selections;

    //! Mean risk curve of one (model, estimator), indexed by complexity - 1.
    std::vector<double> curve(ModelKind model, const std::string& estimator) const;
    const Table1Selection& selection(ModelKind model, const std::string& estimator) const;
};

Table1Result reproduce_table1(const Table1Config& cfg);

//! Wide layout: complexity, then one column per (model, estimator).
std::string table1_csv(const Table1Result& result);
//! Long layout: model, estimator, replication, chosen complexity.
std::string table1_selection_csv(const Table1Result& result);

std::string model_name(ModelKind kind);

} // namespace tcmdp
