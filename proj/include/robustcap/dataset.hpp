#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "robustcap/backtest.hpp"
#include "robustcap/garch.hpp"

namespace robustcap {

/// Date-aligned market data: index level plus the two annual yield series
/// (in percent) that drive the overestimation / underestimation cost rates.
struct MarketDataset {
    std::vector<std::string> dates;  // ISO-8601, strictly increasing
    std::vector<double> prices;
    std::vector<double> yield_g;  // annual %, e.g. T-Bill
    std::vector<double> yield_l;  // annual %, e.g. LIBOR

    /// Log-returns (x100) with daily decimal cost rates aligned to return
    /// days. Annual yields convert by y/100/daycount, or geometrically with
    /// compound = true.
    RollingInput to_rolling(int daycount = 252, bool compound = false) const;
};

/// One `date,value` series, header required.
struct CsvSeries {
    std::vector<std::string> dates;
    std::vector<double> values;
};

CsvSeries read_csv_series(const std::string& path);
void write_csv_series(const std::string& path, const CsvSeries& series);

/// Joins the yield series onto the price dates, forward-filling yields across
/// gaps of at most max_gap_bdays business days. Throws on unparseable rows
/// (with line numbers), non-positive prices, non-increasing dates, or gaps
/// beyond the fill window.
MarketDataset align_market(const CsvSeries& prices, const CsvSeries& yield_g,
                           const CsvSeries& yield_l, int max_gap_bdays = 5);

MarketDataset ingest(const std::string& price_csv, const std::string& yield_g_csv,
                     const std::string& yield_l_csv, int max_gap_bdays = 5);

/// Synthetic dataset: an AR(1)-GARCH(1,1) return path turned into an index
/// level plus slowly varying yields, on consecutive business days.
/// Deterministic in the seed.
MarketDataset simulate_market(const GarchParams& params, std::size_t n_days,
                              std::uint64_t seed, const std::string& start_date = "2010-01-04");

/// Business days strictly after `from` up to and including `to`.
int business_days_between(const std::string& from, const std::string& to);

/// ISO date one calendar day later (sub-sample boundaries are inclusive).
std::string next_calendar_day(const std::string& iso);

}  // namespace robustcap
