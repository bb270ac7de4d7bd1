#include "robustcap/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

namespace robustcap {

namespace {

void check_nonempty(const ForecastSeries& records, const char* who) {
    if (records.empty()) {
        throw std::invalid_argument(std::string(who) + ": empty record stream");
    }
}

double mean_over(const ForecastSeries& records,
                 const std::function<double(const ForecastRecord&)>& term) {
    double acc = 0.0;
    for (const auto& r : records) acc += term(r);
    return acc / static_cast<double>(records.size());
}

}  // namespace

std::vector<TaskRecords> rolling_forecast(const RollingInput& input,
                                          const std::vector<ForecastTask>& tasks,
                                          const RollingConfig& config) {
    const std::size_t n = input.returns.size();
    if (input.dates.size() != n || input.g.size() != n || input.l.size() != n) {
        throw std::invalid_argument("rolling_forecast: input series lengths differ");
    }
    if (config.window < 100) {
        throw std::invalid_argument("rolling_forecast: window must be >= 100");
    }
    if (config.window >= n) {
        throw std::invalid_argument("rolling_forecast: window must be shorter than the series");
    }

    std::vector<TaskRecords> out;
    out.reserve(tasks.size());
    for (const auto& task : tasks) {
        TaskRecords tr;
        tr.model = task.robust ? "HS" : task.model.label();
        tr.label = task.label;
        tr.spec = task.spec;
        tr.robust = task.robust;
        out.push_back(std::move(tr));
    }

    // distributions that need a GARCH fit each day, shared across tasks
    std::map<std::string, InnovationDist> fit_dists;
    for (const auto& task : tasks) {
        if (!task.robust && task.model.scheme != Scheme::HS) {
            fit_dists.emplace(task.model.dist.name(), task.model.dist);
        }
    }
    std::map<std::string, GarchParams> last_good;

    for (std::size_t t = config.window; t < n; ++t) {
        if (!config.skip_until.empty() && input.dates[t] < config.skip_until) continue;

        const Sample window(std::vector<double>(input.returns.begin() + (t - config.window),
                                                input.returns.begin() + t));

        std::map<std::string, GarchFit> fits;
        for (const auto& [name, dist] : fit_dists) {
            bool fitted = false;
            try {
                GarchFit fit = fit_garch(window, dist);
                if (fit.converged) {
                    last_good.insert_or_assign(name, fit.params);
                    fits.emplace(name, std::move(fit));
                    fitted = true;
                } else if (auto it = last_good.find(name); it != last_good.end()) {
                    fits.emplace(name, filter_garch(it->second, window));
                    fitted = true;
                } else {
                    fits.emplace(name, std::move(fit));
                    fitted = true;
                }
            } catch (const std::exception&) {
                if (auto it = last_good.find(name); it != last_good.end()) {
                    fits.emplace(name, filter_garch(it->second, window));
                    fitted = true;
                }
            }
            if (!fitted) {
                throw std::runtime_error("rolling_forecast: first GARCH fit failed for " + name);
            }
        }

        for (std::size_t k = 0; k < tasks.size(); ++k) {
            const auto& task = tasks[k];
            double rho;
            if (task.robust) {
                // scalar rates known at forecast time: the last in-window day
                const CostRates rates = CostRates::scalar(input.g[t - 1], input.l[t - 1]);
                rho = robust_risk(task.kind, window, rates, task.spec, DomainPolicy::Clamp).risk;
            } else if (task.model.scheme == Scheme::HS) {
                rho = risk_forecast(task.model, window, task.spec);
            } else {
                const GarchFit& fit = fits.at(task.model.dist.name());
                rho = risk_forecast(task.model, window, task.spec, &fit);
            }
            out[k].records.push_back(
                {input.dates[t], rho, input.returns[t], input.g[t], input.l[t]});
        }
    }
    return out;
}

std::vector<double> daily_costs(LossKind kind, const ForecastSeries& records) {
    std::vector<double> costs;
    costs.reserve(records.size());
    for (const auto& r : records) {
        const double x = -r.forecast;
        const double dx = r.realized - x;
        const double pos = std::max(dx, 0.0);
        const double neg = std::max(-dx, 0.0);
        switch (kind) {
            case LossKind::Ours: costs.push_back(pos * r.g + neg * r.l); break;
            case LossKind::B: costs.push_back(-x * r.g + neg); break;
            case LossKind::C: costs.push_back(-x * r.g + neg * r.l); break;
        }
    }
    return costs;
}

double aggregate_cost(LossKind kind, const ForecastSeries& records) {
    check_nonempty(records, "aggregate_cost");
    double total = 0.0;
    for (double c : daily_costs(kind, records)) total += c;
    return total;
}

double realized_cost(LossKind kind, const ForecastSeries& records,
                     const RiskMeasureSpec& rho_spec, bool sum_convention) {
    check_nonempty(records, "realized_cost");
    std::vector<double> negated = daily_costs(kind, records);
    for (double& c : negated) c = -c;
    double value = coherent_value(rho_spec, Sample(std::move(negated)));
    if (sum_convention) value *= static_cast<double>(records.size());
    return value;
}

double realized_loss_el(const ForecastSeries& records) {
    check_nonempty(records, "realized_loss_el");
    return mean_over(records, [](const ForecastRecord& r) {
        const double d = r.realized - (-r.forecast);
        return d * d;
    });
}

double realized_loss_var(const ForecastSeries& records, double alpha) {
    check_nonempty(records, "realized_loss_var");
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::domain_error("realized_loss_var: alpha must be in (0, 1)");
    }
    return mean_over(records, [alpha](const ForecastRecord& r) {
        const double d = r.realized - (-r.forecast);
        return alpha * std::max(d, 0.0) + (1.0 - alpha) * std::max(-d, 0.0);
    });
}

double realized_loss_evar(const ForecastSeries& records, double alpha) {
    check_nonempty(records, "realized_loss_evar");
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::domain_error("realized_loss_evar: alpha must be in (0, 1)");
    }
    return mean_over(records, [alpha](const ForecastRecord& r) {
        const double d = r.realized - (-r.forecast);
        const double pos = std::max(d, 0.0);
        const double neg = std::max(-d, 0.0);
        return alpha * pos * pos + (1.0 - alpha) * neg * neg;
    });
}

EsScore realized_loss_es(const ForecastSeries& es_records,
                         const ForecastSeries& var_records, double alpha) {
    check_nonempty(es_records, "realized_loss_es");
    if (es_records.size() != var_records.size()) {
        throw std::invalid_argument("realized_loss_es: VaR pairing length mismatch");
    }
    EsScore score;
    double acc = 0.0;
    for (std::size_t t = 0; t < es_records.size(); ++t) {
        if (es_records[t].date != var_records[t].date) {
            throw std::invalid_argument("realized_loss_es: VaR pairing date mismatch");
        }
        const double x = -es_records[t].forecast;
        const double z = -var_records[t].forecast;
        const double realized = es_records[t].realized;
        const double ind = realized < z ? 1.0 : 0.0;
        if (std::abs(x) > 50.0) ++score.flagged;
        const double ex = std::exp(std::min(x, 700.0));
        acc += (ind - alpha) * z - ind * realized +
               ex * (x - z + (ind / alpha) * (z - realized)) - ex + 1.0 -
               std::log1p(-alpha);
    }
    score.value = acc / static_cast<double>(es_records.size());
    return score;
}

namespace {

ForecastSeries slice(const ForecastSeries& records, const SplitSpec& split) {
    ForecastSeries out;
    for (const auto& r : records) {
        if (!split.from.empty() && r.date < split.from) continue;
        if (!split.to.empty() && r.date > split.to) continue;
        out.push_back(r);
    }
    return out;
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(6) << v;
    return os.str();
}

}  // namespace

ScoreTable score_table(const std::vector<TaskRecords>& streams, const ScoreConfig& config) {
    if (streams.empty()) {
        throw std::invalid_argument("score_table: no streams");
    }
    ScoreTable table;
    table.config = config;

    const double scale = config.scale1000 ? 1000.0 : 1.0;

    for (const auto& split : config.splits) {
        const std::size_t first_row = table.rows.size();
        for (const auto& stream : streams) {
            if (stream.auxiliary) continue;
            ForecastSeries recs = slice(stream.records, split);
            if (recs.empty()) {
                throw std::invalid_argument("score_table: split '" + split.label +
                                            "' matches no records for " + stream.label);
            }
            ScoreRow row;
            row.split = split.label;
            row.model = stream.model;
            row.measure = stream.label;

            std::vector<double> series;
            series.reserve(recs.size());
            for (const auto& r : recs) {
                series.push_back(stream.stats_on_realized ? r.realized : r.forecast);
            }
            row.stats = summarize(series);

            if (config.with_aggregate_costs) {
                row.cost = aggregate_cost(LossKind::Ours, recs);
                row.cost_b = aggregate_cost(LossKind::B, recs);
                row.cost_c = aggregate_cost(LossKind::C, recs);
            }
            if (config.with_realized) {
                row.cr = scale * realized_cost(LossKind::Ours, recs, config.cr_spec,
                                               config.cr_sum_convention);
                row.cr_b = scale * realized_cost(LossKind::B, recs, config.cr_spec,
                                                 config.cr_sum_convention);
                row.cr_c = scale * realized_cost(LossKind::C, recs, config.cr_spec,
                                                 config.cr_sum_convention);
                if (!stream.robust && !stream.stats_on_realized) {
                    switch (stream.spec.kind) {
                        case MeasureKind::EL:
                            row.loss = scale * realized_loss_el(recs);
                            break;
                        case MeasureKind::VaR:
                            row.loss = scale * realized_loss_var(recs, stream.spec.alpha);
                            break;
                        case MeasureKind::EVaR:
                            row.loss = scale * realized_loss_evar(recs, stream.spec.alpha);
                            break;
                        case MeasureKind::ES: {
                            const TaskRecords* pair = nullptr;
                            for (const auto& other : streams) {
                                if (&other != &stream && other.model == stream.model &&
                                    !other.robust && other.spec.kind == MeasureKind::VaR &&
                                    std::abs(other.spec.alpha - stream.spec.alpha) < 1e-12) {
                                    pair = &other;
                                    break;
                                }
                            }
                            if (pair == nullptr) {
                                throw std::invalid_argument(
                                    "score_table: ES stream '" + stream.label +
                                    "' has no paired VaR stream at the same alpha");
                            }
                            const EsScore s = realized_loss_es(
                                recs, slice(pair->records, split), stream.spec.alpha);
                            row.loss = scale * s.value;
                            row.es_flagged = s.flagged;
                            break;
                        }
                        default:
                            break;
                    }
                }
            }
            table.rows.push_back(std::move(row));
        }

        // best/worst flags per metric column within this split
        struct Column {
            const char* name;
            std::function<std::optional<double>(const ScoreRow&)> get;
        };
        std::vector<Column> columns;
        if (config.with_aggregate_costs) {
            columns.push_back({"cost", [](const ScoreRow& r) { return std::optional(r.cost); }});
            columns.push_back({"cost_b", [](const ScoreRow& r) { return std::optional(r.cost_b); }});
            columns.push_back({"cost_c", [](const ScoreRow& r) { return std::optional(r.cost_c); }});
        }
        if (config.with_realized) {
            columns.push_back({"cr", [](const ScoreRow& r) { return std::optional(r.cr); }});
            columns.push_back({"cr_b", [](const ScoreRow& r) { return std::optional(r.cr_b); }});
            columns.push_back({"cr_c", [](const ScoreRow& r) { return std::optional(r.cr_c); }});
            columns.push_back({"loss", [](const ScoreRow& r) { return r.loss; }});
        }
        for (const auto& col : columns) {
            std::size_t best_i = table.rows.size(), worst_i = table.rows.size();
            for (std::size_t i = first_row; i < table.rows.size(); ++i) {
                const auto v = col.get(table.rows[i]);
                if (!v) continue;
                if (best_i == table.rows.size() || *v < *col.get(table.rows[best_i])) best_i = i;
                if (worst_i == table.rows.size() || *v > *col.get(table.rows[worst_i])) worst_i = i;
            }
            if (best_i < table.rows.size() && best_i != worst_i) {
                table.rows[best_i].best.emplace_back(col.name);
                table.rows[worst_i].worst.emplace_back(col.name);
            }
        }
    }
    return table;
}

std::string ScoreTable::to_csv() const {
    std::ostringstream os;
    os << "split,model,measure,mean,dev,min,max,cost,cost_b,cost_c,cr,cr_b,cr_c,loss,best,worst\n";
    for (const auto& r : rows) {
        os << r.split << ',' << r.model << ',' << r.measure << ',' << fmt(r.stats.mean) << ','
           << fmt(r.stats.deviation) << ',' << fmt(r.stats.min) << ',' << fmt(r.stats.max) << ','
           << fmt(r.cost) << ',' << fmt(r.cost_b) << ',' << fmt(r.cost_c) << ',' << fmt(r.cr)
           << ',' << fmt(r.cr_b) << ',' << fmt(r.cr_c) << ',';
        if (r.loss) os << fmt(*r.loss);
        os << ',';
        for (std::size_t i = 0; i < r.best.size(); ++i) os << (i ? ";" : "") << r.best[i];
        os << ',';
        for (std::size_t i = 0; i < r.worst.size(); ++i) os << (i ? ";" : "") << r.worst[i];
        os << '\n';
    }
    return os.str();
}

std::string ScoreTable::to_text() const {
    std::ostringstream os;
    std::string current_split;
    for (const auto& r : rows) {
        if (r.split != current_split) {
            current_split = r.split;
            os << "== " << current_split << " ==\n";
            os << std::left << std::setw(14) << "model" << std::setw(14) << "measure"
               << std::right << std::setw(12) << "mean" << std::setw(12) << "dev"
               << std::setw(12) << "min" << std::setw(12) << "max" << std::setw(14) << "cost"
               << std::setw(14) << "cost_b" << std::setw(14) << "cost_c" << std::setw(14)
               << "cr" << std::setw(14) << "cr_b" << std::setw(14) << "cr_c" << std::setw(14)
               << "loss"
               << "  flags\n";
        }
        os << std::left << std::setw(14) << r.model << std::setw(14) << r.measure << std::right
           << std::setw(12) << fmt(r.stats.mean) << std::setw(12) << fmt(r.stats.deviation)
           << std::setw(12) << fmt(r.stats.min) << std::setw(12) << fmt(r.stats.max)
           << std::setw(14) << fmt(r.cost) << std::setw(14) << fmt(r.cost_b) << std::setw(14)
           << fmt(r.cost_c) << std::setw(14) << fmt(r.cr) << std::setw(14) << fmt(r.cr_b)
           << std::setw(14) << fmt(r.cr_c) << std::setw(14) << (r.loss ? fmt(*r.loss) : "-");
        os << "  ";
        for (const auto& b : r.best) os << "*" << b << " ";
        for (const auto& w : r.worst) os << "!" << w << " ";
        os << '\n';
    }
    return os.str();
}

}  // namespace robustcap
