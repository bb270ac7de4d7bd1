#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace robustcap {

/// A finite financial position X on a discrete scenario space, in return
/// units (% per day). Values are validated finite at construction and a
/// sorted copy is cached for quantile queries.
class Sample {
public:
    explicit Sample(std::vector<double> values);

    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& sorted() const { return sorted_; }
    double min() const { return sorted_.front(); }
    double max() const { return sorted_.back(); }

private:
    std::vector<double> values_;
    std::vector<double> sorted_;
};

/// A probability measure Q on the same scenario space as a Sample:
/// nonnegative weights summing to one (tolerance 1e-12). Under uniform P
/// the Radon-Nikodym ratio dQ/dP at scenario i is N * weight(i).
class WeightedMeasure {
public:
    explicit WeightedMeasure(std::vector<double> weights);

    static WeightedMeasure uniform(std::size_t n);

    std::size_t size() const { return weights_.size(); }
    const std::vector<double>& weights() const { return weights_; }
    double operator[](std::size_t i) const { return weights_[i]; }

private:
    std::vector<double> weights_;
};

struct SummaryStats {
    double mean = 0.0;
    double deviation = 0.0;  // population (divisor N)
    double min = 0.0;
    double max = 0.0;
};

/// Empirical CDF F(x) = (1/N) * #{i : X_i <= x}.
double empirical_cdf(const Sample& sample, double x);

/// Inf-convention inverse CDF: smallest sample value with F(value) >= level,
/// i.e. the sorted value at index ceil(level*N). Requires 0 < level <= 1.
double lower_quantile(const Sample& sample, double level);

/// Mean under the uniform empirical measure.
double expectation(const Sample& sample);

/// Expectation sum X_i * Q(i) under an alternative measure of matching length.
double expectation(const Sample& sample, const WeightedMeasure& measure);

/// 100 * (ln p_t - ln p_{t-1}); prices must be strictly positive, length >= 2.
Sample log_returns(std::span<const double> prices);

SummaryStats summarize(const Sample& sample);
SummaryStats summarize(std::span<const double> values);

}  // namespace robustcap
