#include "robustcap/distributions.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace robustcap {

namespace {

constexpr double kHalfLog2Pi = 0.9189385332046727;  // 0.5*ln(2*pi)

const boost::math::normal_distribution<double>& std_normal() {
    static const boost::math::normal_distribution<double> d(0.0, 1.0);
    return d;
}

}  // namespace

InnovationDist::InnovationDist(Family family, double shape, double xi)
    : family_(family), shape_(shape), xi_(xi) {
    if (family_ == Family::StudentT && !(shape_ > 2.0)) {
        throw std::domain_error("InnovationDist: Student-t needs nu > 2");
    }
    if (family_ == Family::Ged && !(shape_ > 0.0)) {
        throw std::domain_error("InnovationDist: GED needs kappa > 0");
    }
    if (!(xi_ > 0.0)) {
        throw std::domain_error("InnovationDist: skew xi must be > 0");
    }
    if (family_ == Family::Ged) {
        const double k = shape_;
        ged_lambda_ = std::sqrt(std::pow(2.0, -2.0 / k) *
                                std::tgamma(1.0 / k) / std::tgamma(3.0 / k));
    }
    if (xi_ != 1.0) {
        // raw skew moments from half-moments of the unit-variance base:
        // E[U] = c*(xi^2 - xi^-2)*M1/2, E[U^2] = c*(xi^3 + xi^-3)/2
        const double c = 2.0 / (xi_ + 1.0 / xi_);
        const double m1 = base_abs_moment();
        const double mean = c * (xi_ * xi_ - 1.0 / (xi_ * xi_)) * 0.5 * m1;
        const double second = c * (std::pow(xi_, 3) + std::pow(xi_, -3)) * 0.5;
        skew_mean_ = mean;
        skew_sd_ = std::sqrt(second - mean * mean);
    }
}

InnovationDist InnovationDist::normal() { return {Family::Normal, 0.0, 1.0}; }

InnovationDist InnovationDist::student_t(double nu) { return {Family::StudentT, nu, 1.0}; }

InnovationDist InnovationDist::ged(double kappa) { return {Family::Ged, kappa, 1.0}; }

InnovationDist InnovationDist::skewed(double xi) const {
    if (!symmetric()) {
        throw std::invalid_argument("skewed: base distribution is already skewed");
    }
    return {family_, shape_, xi};
}

InnovationDist InnovationDist::parse(const std::string& code, double shape, double xi) {
    if (code == "norm") return normal();
    if (code == "snorm") return normal().skewed(xi);
    if (code == "std") return student_t(shape);
    if (code == "sstd") return student_t(shape).skewed(xi);
    if (code == "ged") return ged(shape);
    if (code == "sged") return ged(shape).skewed(xi);
    throw std::invalid_argument("unknown innovation distribution: " + code);
}

std::string InnovationDist::name() const {
    std::string base;
    switch (family_) {
        case Family::Normal: base = "norm"; break;
        case Family::StudentT: base = "std"; break;
        case Family::Ged: base = "ged"; break;
    }
    return symmetric() ? base : "s" + base;
}

double InnovationDist::base_log_density(double t) const {
    switch (family_) {
        case Family::Normal:
            return -0.5 * t * t - kHalfLog2Pi;
        case Family::StudentT: {
            const double nu = shape_;
            // unit-variance scaling: Z = sqrt((nu-2)/nu) * T
            const double logc = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                                0.5 * std::log(std::numbers::pi * (nu - 2.0));
            return logc - 0.5 * (nu + 1.0) * std::log1p(t * t / (nu - 2.0));
        }
        case Family::Ged: {
            const double k = shape_;
            const double logc = std::log(k) - std::log(ged_lambda_) -
                                (1.0 + 1.0 / k) * std::numbers::ln2 -
                                std::lgamma(1.0 / k);
            return logc - 0.5 * std::pow(std::abs(t / ged_lambda_), k);
        }
    }
    return 0.0;
}

double InnovationDist::base_cdf(double t) const {
    switch (family_) {
        case Family::Normal:
            return boost::math::cdf(std_normal(), t);
        case Family::StudentT: {
            const double nu = shape_;
            const boost::math::students_t_distribution<double> d(nu);
            return boost::math::cdf(d, t / std::sqrt((nu - 2.0) / nu));
        }
        case Family::Ged: {
            const double y = 0.5 * std::pow(std::abs(t) / ged_lambda_, shape_);
            const double half_tail = 0.5 * boost::math::gamma_p(1.0 / shape_, y);
            return t >= 0.0 ? 0.5 + half_tail : 0.5 - half_tail;
        }
    }
    return 0.0;
}

double InnovationDist::base_quantile(double p) const {
    switch (family_) {
        case Family::Normal:
            return boost::math::quantile(std_normal(), p);
        case Family::StudentT: {
            const double nu = shape_;
            const boost::math::students_t_distribution<double> d(nu);
            return std::sqrt((nu - 2.0) / nu) * boost::math::quantile(d, p);
        }
        case Family::Ged: {
            if (p == 0.5) return 0.0;
            const bool upper = p > 0.5;
            const double tail = upper ? 2.0 * p - 1.0 : 1.0 - 2.0 * p;
            const double y = boost::math::gamma_p_inv(1.0 / shape_, tail);
            const double t = ged_lambda_ * std::pow(2.0 * y, 1.0 / shape_);
            return upper ? t : -t;
        }
    }
    return 0.0;
}

double InnovationDist::base_partial_moment(double t) const {
    // E[T 1_{T<=t}] = -upper_tail_moment(|t|) by symmetry and zero mean
    switch (family_) {
        case Family::Normal:
            return -std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi);
        case Family::StudentT: {
            // ordinary t_nu: int_{-inf}^{u} s g(s) ds = -(nu + u^2) g(u) / (nu - 1)
            const double nu = shape_;
            const double s = std::sqrt((nu - 2.0) / nu);
            const double u = t / s;
            const boost::math::students_t_distribution<double> d(nu);
            const double dens = boost::math::pdf(d, u);
            return s * (-(nu + u * u) * dens / (nu - 1.0));
        }
        case Family::Ged: {
            const double k = shape_;
            const double y = 0.5 * std::pow(std::abs(t) / ged_lambda_, k);
            const double tail = ged_lambda_ * std::pow(2.0, 1.0 / k) *
                                std::tgamma(2.0 / k) / (2.0 * std::tgamma(1.0 / k)) *
                                boost::math::gamma_q(2.0 / k, y);
            return -tail;
        }
    }
    return 0.0;
}

double InnovationDist::base_abs_moment() const {
    switch (family_) {
        case Family::Normal:
            return std::sqrt(2.0 / std::numbers::pi);
        case Family::StudentT: {
            const double nu = shape_;
            return 2.0 * std::sqrt(nu - 2.0) * std::exp(std::lgamma(0.5 * (nu + 1.0)) -
                                                        std::lgamma(0.5 * nu)) /
                   ((nu - 1.0) * std::sqrt(std::numbers::pi));
        }
        case Family::Ged:
            return ged_lambda_ * std::pow(2.0, 1.0 / shape_) *
                   std::tgamma(2.0 / shape_) / std::tgamma(1.0 / shape_);
    }
    return 0.0;
}

double InnovationDist::raw_cdf(double u) const {
    const double c = 2.0 / (xi_ + 1.0 / xi_);
    if (u < 0.0) return (c / xi_) * base_cdf(u * xi_);
    return 1.0 - c * xi_ * (1.0 - base_cdf(u / xi_));
}

double InnovationDist::raw_partial_moment(double u) const {
    const double c = 2.0 / (xi_ + 1.0 / xi_);
    const double below_zero = (c / (xi_ * xi_)) * base_partial_moment(0.0);
    if (u < 0.0) return (c / (xi_ * xi_)) * base_partial_moment(u * xi_);
    return below_zero +
           c * xi_ * xi_ * (base_partial_moment(u / xi_) - base_partial_moment(0.0));
}

double InnovationDist::log_density(double z) const {
    if (symmetric()) return base_log_density(z);
    const double u = skew_mean_ + skew_sd_ * z;
    const double logc = std::log(2.0 / (xi_ + 1.0 / xi_));
    const double shaped = u >= 0.0 ? base_log_density(u / xi_) : base_log_density(u * xi_);
    return std::log(skew_sd_) + logc + shaped;
}

double InnovationDist::density(double z) const { return std::exp(log_density(z)); }

double InnovationDist::cdf(double z) const {
    if (symmetric()) return base_cdf(z);
    return raw_cdf(skew_mean_ + skew_sd_ * z);
}

double InnovationDist::quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("quantile: p must be in (0, 1)");
    }
    if (symmetric()) return base_quantile(p);
    const double c = 2.0 / (xi_ + 1.0 / xi_);
    const double pc = 1.0 / (1.0 + xi_ * xi_);  // raw mass below zero
    double u;
    if (p <= pc) {
        u = base_quantile(p * xi_ / c) / xi_;
    } else {
        u = xi_ * base_quantile(1.0 - (1.0 - p) / (c * xi_));
    }
    return (u - skew_mean_) / skew_sd_;
}

double InnovationDist::partial_moment(double z) const {
    if (symmetric()) return base_partial_moment(z);
    const double u = skew_mean_ + skew_sd_ * z;
    return (raw_partial_moment(u) - skew_mean_ * raw_cdf(u)) / skew_sd_;
}

double InnovationDist::es(double alpha) const {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::domain_error("es: alpha must be in (0, 1)");
    }
    return -partial_moment(quantile(alpha)) / alpha;
}

double InnovationDist::expectile(double alpha) const {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::domain_error("expectile: alpha must be in (0, 1)");
    }
    // g(theta) = alpha*E[(Z-theta)^+] - (1-alpha)*E[(theta-Z)^+], decreasing
    auto g = [&](double theta) {
        const double pm = partial_moment(theta);
        const double cd = cdf(theta);
        const double up = -pm - theta * (1.0 - cd);
        const double down = theta * cd - pm;
        return alpha * up - (1.0 - alpha) * down;
    };
    double lo = -1.0, hi = 1.0;
    for (int it = 0; it < 200 && g(lo) < 0.0; ++it) lo *= 2.0;
    for (int it = 0; it < 200 && g(hi) > 0.0; ++it) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(lo) + std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0) lo = mid;
        else hi = mid;
    }
    return -0.5 * (lo + hi);
}

}  // namespace robustcap
