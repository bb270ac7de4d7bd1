#pragma once

#include <span>
#include <vector>

#include "robustcap/empirical.hpp"
#include "robustcap/riskmeasures.hpp"

namespace robustcap {

/// Daily overestimation (g) and underestimation (l) cost rates, in decimals.
/// Each series is either one entry (broadcast to every scenario) or one entry
/// per scenario.
class CostRates {
public:
    CostRates(std::vector<double> g, std::vector<double> l);
    static CostRates scalar(double g, double l);

    double g(std::size_t i) const { return g_.size() == 1 ? g_[0] : g_[i]; }
    double l(std::size_t i) const { return l_.size() == 1 ? l_[0] : l_[i]; }
    double mean_g(std::size_t n) const;
    double mean_l(std::size_t n) const;

    /// Checks the broadcast lengths against n and that mean(g)+mean(l) > 0.
    void validate_for(std::size_t n) const;

private:
    std::vector<double> g_;
    std::vector<double> l_;
};

/// Which capital loss functional is minimized:
///   Ours: (X-x)^+ G + (X-x)^- L
///   B:    (-x) G  + (X-x)^-
///   C:    (-x) G  + (X-x)^- L
enum class LossKind { Ours, B, C };

struct RobustResult {
    double risk = 0.0;       // -minimizer, monetary loss units
    double deviation = 0.0;  // minimum of the worst-case expected cost
    double minimizer = 0.0;
    WeightedMeasure argmax_measure;  // worst-case Q at the minimizer
};

struct DualSupResult {
    double value = 0.0;
    WeightedMeasure measure;
};

/// Per-scenario capital loss at capital level x.
std::vector<double> loss_profile(LossKind kind, const Sample& sample,
                                 const CostRates& costs, double x);

/// -lower_quantile(sample, E[G]/E[G+L]) under the empirical measure; the
/// level-zero case (E[G] = 0) returns -min by convention.
double closed_form_risk(const Sample& sample, const CostRates& costs);

/// E[G] * (E[X] - E[X | X <= x*]) with x* from closed_form_risk. This is the
/// atomless-case expression: it coincides with the minimax minimum exactly
/// when the empirical CDF hits E[G]/E[G+L] at x*, i.e. when level*N is an
/// integer (or at the 0/1 endpoints).
double closed_form_deviation(const Sample& sample, const CostRates& costs);

/// max over Q in the dual set of spec of sum loss_i * Q(i), with an attaining
/// measure. Closed forms per dual set: EL uniform; ES(alpha) greedy capped at
/// 1/(alpha*N); ML point mass on the largest loss; EVaR(alpha) box weights
/// a/N <= Q_i <= a(1-alpha)/(alpha*N) with the scale a maximized over its
/// breakpoints; MSD(beta) tilt weights (1 + beta*(V - mean V))/N with V the
/// normalized positive part of the centered loss.
DualSupResult dual_sup(std::span<const double> loss, const RiskMeasureSpec& spec);

/// Independent check of dual_sup for ES/EVaR/ML: solves the explicit dual-set
/// linear program with a generic simplex. Test oracle, small N only.
double dual_sup_lp_oracle(std::span<const double> loss, const RiskMeasureSpec& spec);

/// With Strict, a cost configuration whose objective never increases to the
/// right of the sample (possible for kinds B/C when E[G] outweighs E[L])
/// throws std::domain_error; Clamp falls back to the compact [min X, max X]
/// domain instead, which is what a rolling backtest needs on such days.
enum class DomainPolicy { Strict, Clamp };

/// Minimizes f(x) = dual_sup(loss_profile(kind, sample, costs, x), spec) over
/// capital x. The objective is convex; all sample values are evaluated
/// exactly and a golden-section pass catches minimizers between sample points
/// (the worst-case measure can switch there for non-singleton dual sets).
/// Sample-point minimizers win ties toward the smallest x. For kinds B and C
/// the domain is widened to the right while the objective keeps descending.
RobustResult robust_risk(LossKind kind, const Sample& sample,
                         const CostRates& costs, const RiskMeasureSpec& spec,
                         DomainPolicy policy = DomainPolicy::Strict);

/// Brute-force minimization oracle: uniform grid of grid_size points plus all
/// sample values, then local grid refinement around the incumbent until the
/// step is below 1e-12 of the range.
RobustResult worst_case_grid_oracle(LossKind kind, const Sample& sample,
                                    const CostRates& costs,
                                    const RiskMeasureSpec& spec, int grid_size);

}  // namespace robustcap
