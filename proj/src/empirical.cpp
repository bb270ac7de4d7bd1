#include "robustcap/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace robustcap {

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) {
        throw std::invalid_argument("Sample: needs at least one observation");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("Sample: all values must be finite");
        }
    }
    sorted_ = values_;
    std::stable_sort(sorted_.begin(), sorted_.end());
}

WeightedMeasure::WeightedMeasure(std::vector<double> weights)
    : weights_(std::move(weights)) {
    if (weights_.empty()) {
        throw std::invalid_argument("WeightedMeasure: empty weight vector");
    }
    double total = 0.0;
    for (double w : weights_) {
        if (!(w >= -1e-15)) {
            throw std::invalid_argument("WeightedMeasure: negative weight");
        }
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw std::invalid_argument("WeightedMeasure: weights must sum to 1");
    }
    for (double& w : weights_) w = std::max(w, 0.0);
}

WeightedMeasure WeightedMeasure::uniform(std::size_t n) {
    return WeightedMeasure(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

double empirical_cdf(const Sample& sample, double x) {
    const auto& s = sample.sorted();
    auto it = std::upper_bound(s.begin(), s.end(), x);
    return static_cast<double>(it - s.begin()) / static_cast<double>(s.size());
}

double lower_quantile(const Sample& sample, double level) {
    if (!(level > 0.0) || !(level <= 1.0)) {
        throw std::domain_error("lower_quantile: level must be in (0, 1]");
    }
    const auto& s = sample.sorted();
    const auto n = static_cast<double>(s.size());
    // inf{x : F(x) >= level} = sorted value at rank ceil(level*N)
    auto rank = static_cast<std::size_t>(std::ceil(level * n));
    rank = std::clamp<std::size_t>(rank, 1, s.size());
    return s[rank - 1];
}

double expectation(const Sample& sample) {
    const auto& v = sample.values();
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double expectation(const Sample& sample, const WeightedMeasure& measure) {
    if (measure.size() != sample.size()) {
        throw std::invalid_argument("expectation: measure length mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        acc += sample.values()[i] * measure[i];
    }
    return acc;
}

Sample log_returns(std::span<const double> prices) {
    if (prices.size() < 2) {
        throw std::domain_error("log_returns: need at least two prices");
    }
    std::vector<double> out;
    out.reserve(prices.size() - 1);
    for (std::size_t t = 1; t < prices.size(); ++t) {
        if (!(prices[t] > 0.0) || !(prices[t - 1] > 0.0)) {
            throw std::domain_error("log_returns: prices must be strictly positive");
        }
        out.push_back(100.0 * (std::log(prices[t]) - std::log(prices[t - 1])));
    }
    return Sample(std::move(out));
}

SummaryStats summarize(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("summarize: empty input");
    }
    SummaryStats st;
    st.mean = std::accumulate(values.begin(), values.end(), 0.0) /
              static_cast<double>(values.size());
    double ss = 0.0;
    st.min = values[0];
    st.max = values[0];
    for (double v : values) {
        ss += (v - st.mean) * (v - st.mean);
        st.min = std::min(st.min, v);
        st.max = std::max(st.max, v);
    }
    st.deviation = std::sqrt(ss / static_cast<double>(values.size()));
    return st;
}

SummaryStats summarize(const Sample& sample) {
    return summarize(std::span<const double>(sample.values()));
}

}  // namespace robustcap
