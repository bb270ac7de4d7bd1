#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "robustcap/empirical.hpp"
#include "robustcap/garch.hpp"
#include "robustcap/riskmeasures.hpp"
#include "robustcap/robust.hpp"

namespace robustcap {

/// One out-of-sample forecast day: the risk forecast rho_t (the capital is
/// x_t = -rho_t), the realized return and the realized daily cost rates.
struct ForecastRecord {
    std::string date;  // ISO-8601, lexicographically ordered
    double forecast = 0.0;
    double realized = 0.0;
    double g = 0.0;
    double l = 0.0;
};

using ForecastSeries = std::vector<ForecastRecord>;

/// A forecast stream to produce: either a plain risk measure under a model
/// (HS / GARCH / FHS) or a robust capital determination (loss kind x dual-set
/// spec, computed on the raw window with the previous day's scalar rates).
struct ForecastTask {
    bool robust = false;
    ModelSpec model;
    RiskMeasureSpec spec;
    LossKind kind = LossKind::Ours;
    std::string label;
};

struct TaskRecords {
    std::string model;
    std::string label;
    RiskMeasureSpec spec;
    bool robust = false;
    bool stats_on_realized = false;  // "Returns" style row
    bool auxiliary = false;          // pairing-only stream, not reported
    ForecastSeries records;
};

struct RollingInput {
    std::vector<std::string> dates;
    std::vector<double> returns;
    std::vector<double> g;  // daily decimal cost rates, aligned with returns
    std::vector<double> l;
};

struct RollingConfig {
    std::size_t window = 250;
    std::string skip_until;  // drop out-sample days with date < skip_until
};

/// Rolls the window over the series and forecasts every task for every
/// out-sample day, using observations t-window..t-1 only. GARCH fits are
/// shared between tasks with the same innovation distribution; a fit that
/// fails to converge falls back to the most recent converged parameter set
/// for that distribution.
std::vector<TaskRecords> rolling_forecast(const RollingInput& input,
                                          const std::vector<ForecastTask>& tasks,
                                          const RollingConfig& config);

/// Per-day capital costs of the record stream under a loss kind.
std::vector<double> daily_costs(LossKind kind, const ForecastSeries& records);

/// Sum of daily costs (the aggregate Cost / Cost^b / Cost^c).
double aggregate_cost(LossKind kind, const ForecastSeries& records);

/// Coherent functional of the negated daily-cost sequence: with EL this is
/// the time average of daily costs. sum_convention multiplies by T.
double realized_cost(LossKind kind, const ForecastSeries& records,
                     const RiskMeasureSpec& rho_spec, bool sum_convention = false);

double realized_loss_el(const ForecastSeries& records);
double realized_loss_var(const ForecastSeries& records, double alpha);
double realized_loss_evar(const ForecastSeries& records, double alpha);

struct EsScore {
    double value = 0.0;
    std::size_t flagged = 0;  // records with |x| > 50 (exp-term overflow risk)
};

/// Joint VaR-ES score with the exponential specification; es_records carry
/// the ES forecasts, var_records the paired VaR forecasts at the same level.
EsScore realized_loss_es(const ForecastSeries& es_records,
                         const ForecastSeries& var_records, double alpha);

struct SplitSpec {
    std::string label;
    std::string from;  // ISO inclusive, empty = open
    std::string to;
};

struct ScoreConfig {
    std::vector<SplitSpec> splits = {{"whole", "", ""}};
    RiskMeasureSpec cr_spec = RiskMeasureSpec::el();
    bool cr_sum_convention = false;
    bool scale1000 = false;  // applies to CR columns and elicitable losses only
    bool with_aggregate_costs = true;
    bool with_realized = true;
};

struct ScoreRow {
    std::string split;
    std::string model;
    std::string measure;
    SummaryStats stats;
    double cost = 0.0, cost_b = 0.0, cost_c = 0.0;
    double cr = 0.0, cr_b = 0.0, cr_c = 0.0;
    std::optional<double> loss;  // elicitable loss matching the measure
    std::size_t es_flagged = 0;
    std::vector<std::string> best;   // metric names where this row is best in split
    std::vector<std::string> worst;
};

struct ScoreTable {
    ScoreConfig config;
    std::vector<ScoreRow> rows;

    std::string to_csv() const;
    std::string to_text() const;
};

/// All metrics per stream per split, with best/worst flags per metric column.
/// ES streams require a same-model VaR stream at the same alpha for the joint
/// score; a missing pair throws.
ScoreTable score_table(const std::vector<TaskRecords>& streams, const ScoreConfig& config);

}  // namespace robustcap
