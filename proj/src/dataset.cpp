#include "robustcap/dataset.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace robustcap {

namespace {

std::chrono::sys_days parse_date(const std::string& iso) {
    int y = 0, m = 0, d = 0;
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-' ||
        std::from_chars(iso.data(), iso.data() + 4, y).ec != std::errc{} ||
        std::from_chars(iso.data() + 5, iso.data() + 7, m).ec != std::errc{} ||
        std::from_chars(iso.data() + 8, iso.data() + 10, d).ec != std::errc{}) {
        throw std::invalid_argument("bad ISO date: '" + iso + "'");
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{unsigned(m)},
                                          std::chrono::day{unsigned(d)}};
    if (!ymd.ok()) {
        throw std::invalid_argument("bad calendar date: '" + iso + "'");
    }
    return std::chrono::sys_days{ymd};
}

std::string format_date(std::chrono::sys_days day) {
    const std::chrono::year_month_day ymd{day};
    std::ostringstream os;
    os << std::setfill('0') << std::setw(4) << int(ymd.year()) << '-' << std::setw(2)
       << unsigned(ymd.month()) << '-' << std::setw(2) << unsigned(ymd.day());
    return os.str();
}

bool is_weekend(std::chrono::sys_days day) {
    const std::chrono::weekday wd{day};
    return wd == std::chrono::Saturday || wd == std::chrono::Sunday;
}

std::chrono::sys_days next_business_day(std::chrono::sys_days day) {
    do {
        day += std::chrono::days{1};
    } while (is_weekend(day));
    return day;
}

}  // namespace

std::string next_calendar_day(const std::string& iso) {
    return format_date(parse_date(iso) + std::chrono::days{1});
}

int business_days_between(const std::string& from, const std::string& to) {
    auto a = parse_date(from);
    const auto b = parse_date(to);
    if (b < a) return -business_days_between(to, from);
    int count = 0;
    while (a < b) {
        a += std::chrono::days{1};
        if (!is_weekend(a)) ++count;
    }
    return count;
}

CsvSeries read_csv_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    CsvSeries series;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (lineno == 1) {
            if (line != "date,value") {
                throw std::runtime_error(path + ":1: expected header 'date,value'");
            }
            continue;
        }
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": missing comma");
        }
        const std::string date = line.substr(0, comma);
        const std::string value_str = line.substr(comma + 1);
        try {
            parse_date(date);
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        double value = 0.0;
        const auto res =
            std::from_chars(value_str.data(), value_str.data() + value_str.size(), value);
        if (res.ec != std::errc{} || res.ptr != value_str.data() + value_str.size()) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": bad numeric value '" + value_str + "'");
        }
        if (!series.dates.empty() && !(series.dates.back() < date)) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": dates must be strictly increasing");
        }
        series.dates.push_back(date);
        series.values.push_back(value);
    }
    if (series.dates.empty()) {
        throw std::runtime_error(path + ": no data rows");
    }
    return series;
}

void write_csv_series(const std::string& path, const CsvSeries& series) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << "date,value\n";
    out << std::setprecision(15);
    for (std::size_t i = 0; i < series.dates.size(); ++i) {
        out << series.dates[i] << ',' << series.values[i] << '\n';
    }
}

namespace {

// forward-fill lookup of `series` at each target date
std::vector<double> fill_onto(const std::vector<std::string>& target_dates,
                              const CsvSeries& series, int max_gap_bdays,
                              const char* label) {
    std::vector<double> out;
    out.reserve(target_dates.size());
    std::size_t j = 0;
    for (const auto& date : target_dates) {
        while (j + 1 < series.dates.size() && series.dates[j + 1] <= date) ++j;
        if (series.dates[j] > date) {
            throw std::runtime_error(std::string(label) + ": no value on or before " + date);
        }
        if (series.dates[j] != date) {
            const int gap = business_days_between(series.dates[j], date);
            if (gap > max_gap_bdays) {
                throw std::runtime_error(std::string(label) + ": gap of " + std::to_string(gap) +
                                         " business days before " + date +
                                         " exceeds the forward-fill window");
            }
        }
        out.push_back(series.values[j]);
    }
    return out;
}

}  // namespace

MarketDataset align_market(const CsvSeries& prices, const CsvSeries& yield_g,
                           const CsvSeries& yield_l, int max_gap_bdays) {
    for (double p : prices.values) {
        if (!(p > 0.0)) {
            throw std::runtime_error("prices must be strictly positive");
        }
    }
    MarketDataset ds;
    ds.dates = prices.dates;
    ds.prices = prices.values;
    ds.yield_g = fill_onto(ds.dates, yield_g, max_gap_bdays, "yield_g");
    ds.yield_l = fill_onto(ds.dates, yield_l, max_gap_bdays, "yield_l");
    return ds;
}

MarketDataset ingest(const std::string& price_csv, const std::string& yield_g_csv,
                     const std::string& yield_l_csv, int max_gap_bdays) {
    return align_market(read_csv_series(price_csv), read_csv_series(yield_g_csv),
                        read_csv_series(yield_l_csv), max_gap_bdays);
}

RollingInput MarketDataset::to_rolling(int daycount, bool compound) const {
    if (daycount <= 0) {
        throw std::invalid_argument("to_rolling: daycount must be positive");
    }
    const Sample returns = log_returns(prices);
    RollingInput input;
    const std::size_t n = returns.size();
    input.returns = returns.values();
    input.dates.assign(dates.begin() + 1, dates.end());
    input.g.reserve(n);
    input.l.reserve(n);
    auto daily = [&](double annual_pct) {
        const double y = annual_pct / 100.0;
        if (compound) return std::pow(1.0 + y, 1.0 / daycount) - 1.0;
        return y / daycount;
    };
    for (std::size_t i = 1; i < dates.size(); ++i) {
        input.g.push_back(daily(yield_g[i]));
        input.l.push_back(daily(yield_l[i]));
    }
    return input;
}

MarketDataset simulate_market(const GarchParams& params, std::size_t n_days,
                              std::uint64_t seed, const std::string& start_date) {
    if (n_days < 2) {
        throw std::invalid_argument("simulate_market: need at least two days");
    }
    const std::vector<double> returns = simulate_garch(params, n_days - 1, seed);

    MarketDataset ds;
    ds.dates.reserve(n_days);
    auto day = parse_date(start_date);
    if (is_weekend(day)) day = next_business_day(day);
    ds.dates.push_back(format_date(day));
    for (std::size_t i = 1; i < n_days; ++i) {
        day = next_business_day(day);
        ds.dates.push_back(format_date(day));
    }

    ds.prices.reserve(n_days);
    ds.prices.push_back(1000.0);
    for (double r : returns) {
        ds.prices.push_back(ds.prices.back() * std::exp(r / 100.0));
    }

    // slowly varying yields with a deterministic wobble, floored at zero
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    auto uniform01 = [&]() {
        return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    };
    ds.yield_g.reserve(n_days);
    ds.yield_l.reserve(n_days);
    double noise_g = 0.0, noise_l = 0.0;
    for (std::size_t i = 0; i < n_days; ++i) {
        const double t = static_cast<double>(i);
        noise_g = 0.98 * noise_g + 0.02 * (uniform01() - 0.5);
        noise_l = 0.98 * noise_l + 0.02 * (uniform01() - 0.5);
        const double g = 2.0 + 1.5 * std::sin(2.0 * std::numbers::pi * t / 750.0) + noise_g;
        const double l = g + 0.4 + 0.2 * std::cos(2.0 * std::numbers::pi * t / 430.0) + noise_l;
        ds.yield_g.push_back(std::max(g, 0.0));
        ds.yield_l.push_back(std::max(l, 0.0));
    }
    return ds;
}

}  // namespace robustcap
