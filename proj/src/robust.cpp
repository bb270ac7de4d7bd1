#include "robustcap/robust.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "robustcap/lp.hpp"

namespace robustcap {

namespace {

double mean_of(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Value-only dual supremum; `scratch` avoids reallocation in scan loops.
double dual_sup_value(std::span<const double> loss, const RiskMeasureSpec& spec,
                      std::vector<double>& scratch) {
    const std::size_t n = loss.size();
    const auto nd = static_cast<double>(n);
    switch (spec.kind) {
        case MeasureKind::EL:
            return mean_of(loss);
        case MeasureKind::ML:
            return *std::max_element(loss.begin(), loss.end());
        case MeasureKind::ES: {
            scratch.assign(loss.begin(), loss.end());
            std::sort(scratch.begin(), scratch.end(), std::greater<>());
            const double cap = 1.0 / (spec.alpha * nd);
            double remaining = 1.0;
            double value = 0.0;
            for (double c : scratch) {
                const double w = std::min(cap, remaining);
                value += w * c;
                remaining -= w;
                if (remaining <= 0.0) break;
            }
            return value;
        }
        case MeasureKind::EVaR: {
            scratch.assign(loss.begin(), loss.end());
            std::sort(scratch.begin(), scratch.end(), std::greater<>());
            // Scale breakpoints a_k = alpha*N / (alpha*N + k(1-2alpha)); at a_k
            // the top k scenarios sit at the upper box bound and the rest at
            // the lower one. The inner value is linear in a between
            // breakpoints, so the maximum over a is attained at one of them.
            const double an = spec.alpha * nd;
            double best = -std::numeric_limits<double>::infinity();
            double prefix = 0.0;
            double total = std::accumulate(scratch.begin(), scratch.end(), 0.0);
            for (std::size_t k = 0; k <= n; ++k) {
                if (k > 0) prefix += scratch[k - 1];
                const double a = an / (an + static_cast<double>(k) * (1.0 - 2.0 * spec.alpha));
                const double lo_w = a / nd;
                const double hi_w = a * (1.0 - spec.alpha) / an;
                const double value = hi_w * prefix + lo_w * (total - prefix);
                best = std::max(best, value);
            }
            return best;
        }
        case MeasureKind::MSD: {
            const double mean = mean_of(loss);
            double ss = 0.0;
            for (double c : loss) {
                const double up = std::max(c - mean, 0.0);
                ss += up * up;
            }
            return mean + spec.beta * std::sqrt(ss / nd);
        }
        case MeasureKind::VaR:
            break;
    }
    throw std::invalid_argument("dual_sup: spec has no dual set (VaR)");
}

void loss_profile_into(LossKind kind, const Sample& sample, const CostRates& costs,
                       double x, std::vector<double>& out) {
    const auto& v = sample.values();
    out.resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double dx = v[i] - x;
        const double pos = std::max(dx, 0.0);
        const double neg = std::max(-dx, 0.0);
        switch (kind) {
            case LossKind::Ours: out[i] = pos * costs.g(i) + neg * costs.l(i); break;
            case LossKind::B: out[i] = -x * costs.g(i) + neg; break;
            case LossKind::C: out[i] = -x * costs.g(i) + neg * costs.l(i); break;
        }
    }
}

// Per-scenario slope of the loss profile for x above every sample value;
// its dual supremum is the asymptotic right slope of the objective.
std::vector<double> right_slopes(LossKind kind, const Sample& sample,
                                 const CostRates& costs) {
    std::vector<double> m(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
        switch (kind) {
            case LossKind::Ours: m[i] = costs.l(i); break;
            case LossKind::B: m[i] = 1.0 - costs.g(i); break;
            case LossKind::C: m[i] = costs.l(i) - costs.g(i); break;
        }
    }
    return m;
}

}  // namespace

CostRates::CostRates(std::vector<double> g, std::vector<double> l)
    : g_(std::move(g)), l_(std::move(l)) {
    if (g_.empty() || l_.empty()) {
        throw std::invalid_argument("CostRates: empty series");
    }
    for (double v : g_) {
        if (!std::isfinite(v) || v < 0.0) {
            throw std::invalid_argument("CostRates: g must be nonnegative and finite");
        }
    }
    for (double v : l_) {
        if (!std::isfinite(v) || v < 0.0) {
            throw std::invalid_argument("CostRates: l must be nonnegative and finite");
        }
    }
}

CostRates CostRates::scalar(double g, double l) {
    return CostRates(std::vector<double>{g}, std::vector<double>{l});
}

double CostRates::mean_g(std::size_t n) const {
    if (g_.size() == 1) return g_[0];
    return std::accumulate(g_.begin(), g_.end(), 0.0) / static_cast<double>(n);
}

double CostRates::mean_l(std::size_t n) const {
    if (l_.size() == 1) return l_[0];
    return std::accumulate(l_.begin(), l_.end(), 0.0) / static_cast<double>(n);
}

void CostRates::validate_for(std::size_t n) const {
    if ((g_.size() != 1 && g_.size() != n) || (l_.size() != 1 && l_.size() != n)) {
        throw std::invalid_argument("CostRates: length must be 1 or match the sample");
    }
}

std::vector<double> loss_profile(LossKind kind, const Sample& sample,
                                 const CostRates& costs, double x) {
    costs.validate_for(sample.size());
    std::vector<double> out;
    loss_profile_into(kind, sample, costs, x, out);
    return out;
}

double closed_form_risk(const Sample& sample, const CostRates& costs) {
    costs.validate_for(sample.size());
    const double mg = costs.mean_g(sample.size());
    const double ml = costs.mean_l(sample.size());
    if (!(mg + ml > 0.0)) {
        throw std::domain_error("closed_form_risk: E[G] + E[L] must be positive");
    }
    if (mg == 0.0) return -sample.min();
    return -lower_quantile(sample, mg / (mg + ml));
}

double closed_form_deviation(const Sample& sample, const CostRates& costs) {
    const double xstar = -closed_form_risk(sample, costs);
    const double mg = costs.mean_g(sample.size());
    double tail = 0.0;
    std::size_t count = 0;
    for (double v : sample.sorted()) {
        if (v > xstar) break;
        tail += v;
        ++count;
    }
    return mg * (expectation(sample) - tail / static_cast<double>(count));
}

DualSupResult dual_sup(std::span<const double> loss, const RiskMeasureSpec& spec) {
    spec.validate();
    if (!spec.coherent()) {
        throw std::invalid_argument("dual_sup: spec is not coherent");
    }
    const std::size_t n = loss.size();
    const auto nd = static_cast<double>(n);
    std::vector<double> scratch;
    const double value = dual_sup_value(loss, spec, scratch);

    std::vector<double> w(n, 0.0);
    switch (spec.kind) {
        case MeasureKind::EL:
            w.assign(n, 1.0 / nd);
            break;
        case MeasureKind::ML: {
            const auto it = std::max_element(loss.begin(), loss.end());
            w[static_cast<std::size_t>(it - loss.begin())] = 1.0;
            break;
        }
        case MeasureKind::ES: {
            std::vector<std::size_t> idx(n);
            std::iota(idx.begin(), idx.end(), 0);
            std::stable_sort(idx.begin(), idx.end(),
                             [&](std::size_t a, std::size_t b) { return loss[a] > loss[b]; });
            const double cap = 1.0 / (spec.alpha * nd);
            double remaining = 1.0;
            for (std::size_t i : idx) {
                const double take = std::min(cap, remaining);
                w[i] = take;
                remaining -= take;
                if (remaining <= 0.0) break;
            }
            break;
        }
        case MeasureKind::EVaR: {
            std::vector<std::size_t> idx(n);
            std::iota(idx.begin(), idx.end(), 0);
            std::stable_sort(idx.begin(), idx.end(),
                             [&](std::size_t a, std::size_t b) { return loss[a] > loss[b]; });
            const double an = spec.alpha * nd;
            double best = -std::numeric_limits<double>::infinity();
            std::size_t best_k = 0;
            double prefix = 0.0;
            double total = 0.0;
            for (double c : loss) total += c;
            for (std::size_t k = 0; k <= n; ++k) {
                if (k > 0) prefix += loss[idx[k - 1]];
                const double a = an / (an + static_cast<double>(k) * (1.0 - 2.0 * spec.alpha));
                const double lo_w = a / nd;
                const double hi_w = a * (1.0 - spec.alpha) / an;
                const double v = hi_w * prefix + lo_w * (total - prefix);
                if (v > best) {
                    best = v;
                    best_k = k;
                }
            }
            const double a = an / (an + static_cast<double>(best_k) * (1.0 - 2.0 * spec.alpha));
            const double lo_w = a / nd;
            const double hi_w = a * (1.0 - spec.alpha) / an;
            for (std::size_t i = 0; i < n; ++i) w[idx[i]] = i < best_k ? hi_w : lo_w;
            break;
        }
        case MeasureKind::MSD: {
            const double mean = mean_of(loss);
            double ss = 0.0;
            for (double c : loss) {
                const double up = std::max(c - mean, 0.0);
                ss += up * up;
            }
            const double sd = std::sqrt(ss / nd);
            if (sd == 0.0) {
                w.assign(n, 1.0 / nd);
            } else {
                double mean_v = 0.0;
                for (double c : loss) mean_v += std::max(c - mean, 0.0) / sd;
                mean_v /= nd;
                for (std::size_t i = 0; i < n; ++i) {
                    const double vi = std::max(loss[i] - mean, 0.0) / sd;
                    w[i] = (1.0 + spec.beta * (vi - mean_v)) / nd;
                }
            }
            break;
        }
        case MeasureKind::VaR:
            break;  // unreachable, rejected above
    }
    return {value, WeightedMeasure(std::move(w))};
}

double dual_sup_lp_oracle(std::span<const double> loss, const RiskMeasureSpec& spec) {
    spec.validate();
    const std::size_t n = loss.size();
    const auto nd = static_cast<double>(n);
    lp::Problem p;

    auto sum_to_one = [&](std::size_t width) {
        lp::Constraint c;
        c.coeffs.assign(width, 0.0);
        for (std::size_t i = 0; i < n; ++i) c.coeffs[i] = 1.0;
        c.rel = lp::Rel::Eq;
        c.rhs = 1.0;
        return c;
    };

    switch (spec.kind) {
        case MeasureKind::ML: {
            p.objective.assign(loss.begin(), loss.end());
            p.constraints.push_back(sum_to_one(n));
            break;
        }
        case MeasureKind::ES: {
            p.objective.assign(loss.begin(), loss.end());
            p.constraints.push_back(sum_to_one(n));
            const double cap = 1.0 / (spec.alpha * nd);
            for (std::size_t i = 0; i < n; ++i) {
                lp::Constraint c;
                c.coeffs.assign(n, 0.0);
                c.coeffs[i] = 1.0;
                c.rel = lp::Rel::LessEq;
                c.rhs = cap;
                p.constraints.push_back(std::move(c));
            }
            break;
        }
        case MeasureKind::EVaR: {
            // variables: q_1..q_n, a
            p.objective.assign(loss.begin(), loss.end());
            p.objective.push_back(0.0);
            p.constraints.push_back(sum_to_one(n + 1));
            for (std::size_t i = 0; i < n; ++i) {
                lp::Constraint lo;
                lo.coeffs.assign(n + 1, 0.0);
                lo.coeffs[i] = 1.0;
                lo.coeffs[n] = -1.0 / nd;
                lo.rel = lp::Rel::GreaterEq;
                lo.rhs = 0.0;
                p.constraints.push_back(std::move(lo));

                lp::Constraint hi;
                hi.coeffs.assign(n + 1, 0.0);
                hi.coeffs[i] = 1.0;
                hi.coeffs[n] = -(1.0 - spec.alpha) / (spec.alpha * nd);
                hi.rel = lp::Rel::LessEq;
                hi.rhs = 0.0;
                p.constraints.push_back(std::move(hi));
            }
            break;
        }
        default:
            throw std::invalid_argument("dual_sup_lp_oracle: supports ES, EVaR, ML only");
    }

    const lp::Solution sol = lp::maximize(p);
    if (!sol.feasible) {
        throw std::runtime_error("dual_sup_lp_oracle: LP infeasible");
    }
    return sol.value;
}

RobustResult robust_risk(LossKind kind, const Sample& sample, const CostRates& costs,
                         const RiskMeasureSpec& spec, DomainPolicy policy) {
    spec.validate();
    if (!spec.coherent()) {
        throw std::invalid_argument("robust_risk: spec must be coherent");
    }
    costs.validate_for(sample.size());
    if (!(costs.mean_g(sample.size()) + costs.mean_l(sample.size()) > 0.0)) {
        throw std::domain_error("robust_risk: degenerate costs, E[G] + E[L] must be positive");
    }

    std::vector<double> loss;
    std::vector<double> scratch;
    auto f = [&](double x) {
        loss_profile_into(kind, sample, costs, x, loss);
        return dual_sup_value(loss, spec, scratch);
    };

    double lo = sample.min();
    double hi = sample.max();
    if (kind != LossKind::Ours) {
        const std::vector<double> slopes = right_slopes(kind, sample, costs);
        const double s_right = dual_sup_value(slopes, spec, scratch);
        if (!(s_right > 0.0)) {
            if (policy == DomainPolicy::Strict) {
                throw std::domain_error(
                    "robust_risk: objective does not increase to the right; no finite minimizer");
            }
            // Clamp: keep the compact [min X, max X] domain
        } else {
            double step = std::max(hi - lo, 1.0);
            double fh = f(hi);
            for (int it = 0; it < 200; ++it) {
                const double cand = hi + step;
                const double fc = f(cand);
                if (fc < fh) {
                    hi = cand;
                    fh = fc;
                    step *= 2.0;
                } else {
                    hi = cand;  // convexity: the minimizer is bracketed now
                    break;
                }
            }
        }
    }

    // Pass over the kink candidates (sample values). The objective is flat on
    // a whole segment whenever the quantile level sits on the empirical
    // lattice, and summation order makes tied values differ by ulps, so ties
    // are resolved within a relative band toward the smallest x.
    double fmin = std::numeric_limits<double>::infinity();
    std::vector<double> kink_values;
    kink_values.reserve(sample.size());
    {
        double prev = std::numeric_limits<double>::quiet_NaN();
        for (double x : sample.sorted()) {
            if (x == prev) {
                kink_values.push_back(kink_values.back());
                continue;
            }
            prev = x;
            const double fx = f(x);
            kink_values.push_back(fx);
            fmin = std::min(fmin, fx);
        }
    }
    const double tie_eps = 1e-12 * std::max(1.0, std::abs(fmin));
    double scan_x = sample.sorted().front();
    double scan_f = kink_values.front();
    for (std::size_t i = 0; i < kink_values.size(); ++i) {
        if (kink_values[i] <= fmin + tie_eps) {
            scan_x = sample.sorted()[i];
            scan_f = kink_values[i];
            break;
        }
    }

    // Golden-section pass for minimizers strictly between sample values.
    double best_x = scan_x;
    double best_f = scan_f;
    {
        constexpr double invphi = 0.6180339887498949;
        double a = lo, b = hi;
        double c = b - invphi * (b - a);
        double d = a + invphi * (b - a);
        double fc = f(c);
        double fd = f(d);
        const double tol = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi), hi - lo});
        for (int it = 0; it < 200 && b - a > tol; ++it) {
            if (fc < fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - invphi * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + invphi * (b - a);
                fd = f(d);
            }
        }
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        // only a beyond-noise improvement moves the minimizer off the kink
        // set, preserving the inf-convention tie-break on flat segments
        for (auto [x, fx] : {std::pair{c, fc}, {d, fd}, {mid, fm}}) {
            if (fx < best_f - tie_eps) {
                best_f = fx;
                best_x = x;
            }
        }
    }

    loss_profile_into(kind, sample, costs, best_x, loss);
    DualSupResult at_min = dual_sup(loss, spec);
    return {-best_x, at_min.value, best_x, std::move(at_min.measure)};
}

RobustResult worst_case_grid_oracle(LossKind kind, const Sample& sample,
                                    const CostRates& costs, const RiskMeasureSpec& spec,
                                    int grid_size) {
    if (grid_size < 2) {
        throw std::invalid_argument("worst_case_grid_oracle: grid_size must be >= 2");
    }
    spec.validate();
    costs.validate_for(sample.size());

    std::vector<double> loss;
    std::vector<double> scratch;
    auto f = [&](double x) {
        loss_profile_into(kind, sample, costs, x, loss);
        return dual_sup_value(loss, spec, scratch);
    };

    double lo = sample.min();
    double hi = sample.max();
    if (kind != LossKind::Ours) {
        const std::vector<double> slopes = right_slopes(kind, sample, costs);
        if (!(dual_sup_value(slopes, spec, scratch) > 0.0)) {
            throw std::domain_error("worst_case_grid_oracle: no finite minimizer");
        }
        double step = std::max(hi - lo, 1.0);
        for (int it = 0; it < 200 && f(hi + step) < f(hi); ++it) {
            hi += step;
            step *= 2.0;
        }
        hi += step;
    }

    std::vector<double> points(sample.sorted());
    points.reserve(points.size() + static_cast<std::size_t>(grid_size));
    for (int i = 0; i < grid_size; ++i) {
        points.push_back(lo + (hi - lo) * static_cast<double>(i) /
                                  static_cast<double>(grid_size - 1));
    }
    std::sort(points.begin(), points.end());

    double best_x = points.front();
    double best_f = std::numeric_limits<double>::infinity();
    for (double x : points) {
        const double fx = f(x);
        if (fx < best_f) {
            best_f = fx;
            best_x = x;
        }
    }

    double h = (hi - lo) / static_cast<double>(grid_size - 1);
    const double tol = 1e-12 * std::max(1.0, hi - lo);
    for (int round = 0; round < 80 && h > tol; ++round) {
        const double a = std::max(lo, best_x - h);
        const double b = std::min(hi, best_x + h);
        constexpr int kRefine = 64;
        for (int i = 0; i <= kRefine; ++i) {
            const double x = a + (b - a) * static_cast<double>(i) / kRefine;
            const double fx = f(x);
            if (fx < best_f) {
                best_f = fx;
                best_x = x;
            }
        }
        h = (b - a) / kRefine;
    }

    loss_profile_into(kind, sample, costs, best_x, loss);
    DualSupResult at_min = dual_sup(loss, spec);
    return {-best_x, at_min.value, best_x, std::move(at_min.measure)};
}

}  // namespace robustcap
