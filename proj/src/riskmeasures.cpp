#include "robustcap/riskmeasures.hpp"

#include <cmath>
#include <stdexcept>

namespace robustcap {

void RiskMeasureSpec::validate() const {
    switch (kind) {
        case MeasureKind::EL:
        case MeasureKind::ML:
            break;
        case MeasureKind::MSD:
            if (!(beta >= 0.0 && beta <= 1.0)) {
                throw std::domain_error("MSD: beta must be in [0, 1]");
            }
            break;
        case MeasureKind::ES:
        case MeasureKind::VaR:
            if (!(alpha > 0.0 && alpha <= 1.0)) {
                throw std::domain_error("ES/VaR: alpha must be in (0, 1]");
            }
            break;
        case MeasureKind::EVaR:
            if (!(alpha > 0.0 && alpha <= 0.5)) {
                throw std::domain_error("EVaR: alpha must be in (0, 0.5] for coherence");
            }
            break;
    }
}

bool RiskMeasureSpec::coherent() const {
    if (kind == MeasureKind::VaR) return false;
    if (kind == MeasureKind::EVaR) return alpha > 0.0 && alpha <= 0.5;
    return true;
}

std::string RiskMeasureSpec::name() const {
    switch (kind) {
        case MeasureKind::EL: return "EL";
        case MeasureKind::MSD: return "MSD(" + std::to_string(beta) + ")";
        case MeasureKind::ES: return "ES(" + std::to_string(alpha) + ")";
        case MeasureKind::EVaR: return "EVaR(" + std::to_string(alpha) + ")";
        case MeasureKind::ML: return "ML";
        case MeasureKind::VaR: return "VaR(" + std::to_string(alpha) + ")";
    }
    return "?";
}

double el(const Sample& sample) { return -expectation(sample); }

double var(const Sample& sample, double alpha) {
    return -lower_quantile(sample, alpha);
}

double es(const Sample& sample, double alpha) {
    const double q = lower_quantile(sample, alpha);
    double acc = 0.0;
    std::size_t count = 0;
    for (double y : sample.sorted()) {
        if (y > q) break;
        acc += y;
        ++count;
    }
    return -acc / static_cast<double>(count);
}

double evar(const Sample& sample, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::domain_error("evar: alpha must be in (0, 1)");
    }
    double lo = sample.min();
    double hi = sample.max();
    if (hi - lo == 0.0) return -lo;

    // g is continuous and strictly decreasing in t, g(lo) >= 0 >= g(hi)
    auto g = [&](double t) {
        double up = 0.0, down = 0.0;
        for (double y : sample.values()) {
            if (y > t) up += y - t;
            else down += t - y;
        }
        const auto n = static_cast<double>(sample.size());
        return alpha * up / n - (1.0 - alpha) * down / n;
    };

    const double tol = 1e-13 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0) lo = mid;
        else hi = mid;
    }
    return -0.5 * (lo + hi);
}

double msd(const Sample& sample, double beta) {
    if (!(beta >= 0.0 && beta <= 1.0)) {
        throw std::domain_error("msd: beta must be in [0, 1]");
    }
    const double mean = expectation(sample);
    double ss = 0.0;
    for (double y : sample.values()) {
        const double down = std::max(mean - y, 0.0);
        ss += down * down;
    }
    return -mean + beta * std::sqrt(ss / static_cast<double>(sample.size()));
}

double ml(const Sample& sample) { return -sample.min(); }

double coherent_value(const RiskMeasureSpec& spec, const Sample& sample) {
    if (spec.kind == MeasureKind::VaR) {
        throw std::invalid_argument("coherent_value: VaR has no dual-set representation");
    }
    spec.validate();
    switch (spec.kind) {
        case MeasureKind::EL: return el(sample);
        case MeasureKind::MSD: return msd(sample, spec.beta);
        case MeasureKind::ES: return es(sample, spec.alpha);
        case MeasureKind::EVaR: return evar(sample, spec.alpha);
        case MeasureKind::ML: return ml(sample);
        default: break;
    }
    throw std::logic_error("coherent_value: unreachable");
}

}  // namespace robustcap
