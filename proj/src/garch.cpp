#include "robustcap/garch.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>

namespace robustcap {

namespace {

constexpr double kBigPenalty = 1e100;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

// theta = (mu, atanh(phi), ln(omega), logit(persistence), logit(arch share))
GarchParams theta_to_params(const std::vector<double>& th, const InnovationDist& dist) {
    GarchParams p;
    p.mu = th[0];
    p.phi = std::tanh(th[1]);
    p.omega = std::exp(th[2]);
    const double pers = sigmoid(th[3]);
    const double share = sigmoid(th[4]);
    p.a = pers * share;
    p.b = pers * (1.0 - share);
    p.dist = dist;
    return p;
}

struct FilterOut {
    std::vector<double> sigmas;
    std::vector<double> residuals;
    double loglik = 0.0;
};

FilterOut filter(const GarchParams& p, const std::vector<double>& x, double var0) {
    const std::size_t n = x.size();
    FilterOut out;
    out.sigmas.resize(n);
    out.residuals.resize(n);

    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);

    double sigma2 = var0;
    double eps = x[0] - mean;  // seed convention for the first observation
    out.sigmas[0] = std::sqrt(sigma2);
    out.residuals[0] = eps / out.sigmas[0];
    for (std::size_t t = 1; t < n; ++t) {
        sigma2 = p.omega + p.a * eps * eps + p.b * sigma2;
        const double sigma = std::sqrt(sigma2);
        eps = x[t] - p.mu - p.phi * x[t - 1];
        const double z = eps / sigma;
        out.sigmas[t] = sigma;
        out.residuals[t] = z;
        out.loglik += -std::log(sigma) + p.dist.log_density(z);
    }
    return out;
}

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    bool converged = false;
};

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& fn,
                             std::vector<double> start, const std::vector<double>& steps,
                             int max_iter, double step_tol) {
    const std::size_t dim = start.size();
    std::vector<std::vector<double>> pts(dim + 1, start);
    std::vector<double> vals(dim + 1);
    for (std::size_t i = 0; i < dim; ++i) pts[i + 1][i] += steps[i];
    for (std::size_t i = 0; i <= dim; ++i) vals[i] = fn(pts[i]);

    auto order = [&]() {
        std::vector<std::size_t> idx(dim + 1);
        for (std::size_t i = 0; i <= dim; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(),
                  [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        std::vector<std::vector<double>> np(dim + 1);
        std::vector<double> nv(dim + 1);
        for (std::size_t i = 0; i <= dim; ++i) {
            np[i] = pts[idx[i]];
            nv[i] = vals[idx[i]];
        }
        pts = std::move(np);
        vals = std::move(nv);
    };

    bool converged = false;
    for (int iter = 0; iter < max_iter; ++iter) {
        order();
        double spread = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            spread = std::max(spread, std::abs(pts[dim][i] - pts[0][i]));
        }
        if (spread < step_tol && std::abs(vals[dim] - vals[0]) <
                                     1e-10 * (1.0 + std::abs(vals[0]))) {
            converged = true;
            break;
        }

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t j = 0; j < dim; ++j) centroid[j] += pts[i][j];
        }
        for (double& c : centroid) c /= static_cast<double>(dim);

        auto blend = [&](double coef) {
            std::vector<double> p(dim);
            for (std::size_t j = 0; j < dim; ++j) {
                p[j] = centroid[j] + coef * (pts[dim][j] - centroid[j]);
            }
            return p;
        };

        std::vector<double> refl = blend(-1.0);
        const double frefl = fn(refl);
        if (frefl < vals[0]) {
            std::vector<double> expd = blend(-2.0);
            const double fexpd = fn(expd);
            if (fexpd < frefl) {
                pts[dim] = std::move(expd);
                vals[dim] = fexpd;
            } else {
                pts[dim] = std::move(refl);
                vals[dim] = frefl;
            }
        } else if (frefl < vals[dim - 1]) {
            pts[dim] = std::move(refl);
            vals[dim] = frefl;
        } else {
            std::vector<double> contr = blend(frefl < vals[dim] ? -0.5 : 0.5);
            const double fcontr = fn(contr);
            if (fcontr < std::min(frefl, vals[dim])) {
                pts[dim] = std::move(contr);
                vals[dim] = fcontr;
            } else {
                for (std::size_t i = 1; i <= dim; ++i) {
                    for (std::size_t j = 0; j < dim; ++j) {
                        pts[i][j] = pts[0][j] + 0.5 * (pts[i][j] - pts[0][j]);
                    }
                    vals[i] = fn(pts[i]);
                }
            }
        }
    }
    order();
    return {pts[0], vals[0], converged};
}

double sample_variance(const std::vector<double>& x) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return ss / static_cast<double>(x.size());
}

double lag1_autocorr(const std::vector<double>& x) {
    const double var = sample_variance(x);
    if (var == 0.0) return 0.0;
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double cov = 0.0;
    for (std::size_t t = 1; t < x.size(); ++t) {
        cov += (x[t] - mean) * (x[t - 1] - mean);
    }
    cov /= static_cast<double>(x.size());
    return cov / var;
}

// q such that the forecast is -(mu + sigma*q): the negated measure value
double innovation_q(const InnovationDist& dist, const RiskMeasureSpec& spec) {
    switch (spec.kind) {
        case MeasureKind::EL: return 0.0;
        case MeasureKind::VaR: return dist.quantile(spec.alpha);
        case MeasureKind::ES: return -dist.es(spec.alpha);
        case MeasureKind::EVaR: return -dist.expectile(spec.alpha);
        default:
            throw std::invalid_argument("risk_forecast: GARCH/FHS supports EL, VaR, ES, EVaR");
    }
}

double sample_q(const Sample& s, const RiskMeasureSpec& spec) {
    switch (spec.kind) {
        case MeasureKind::EL: return -el(s);
        case MeasureKind::VaR: return -var(s, spec.alpha);
        case MeasureKind::ES: return -es(s, spec.alpha);
        case MeasureKind::EVaR: return -evar(s, spec.alpha);
        default:
            throw std::invalid_argument("risk_forecast: GARCH/FHS supports EL, VaR, ES, EVaR");
    }
}

double hs_value(const Sample& s, const RiskMeasureSpec& spec) {
    switch (spec.kind) {
        case MeasureKind::EL: return el(s);
        case MeasureKind::VaR: return var(s, spec.alpha);
        case MeasureKind::ES: return es(s, spec.alpha);
        case MeasureKind::EVaR: return evar(s, spec.alpha);
        case MeasureKind::MSD: return msd(s, spec.beta);
        case MeasureKind::ML: return ml(s);
    }
    throw std::logic_error("hs_value: unreachable");
}

}  // namespace

bool GarchParams::valid() const {
    return omega > 0.0 && a >= 0.0 && b >= 0.0 && a + b < 1.0 && std::abs(phi) < 1.0;
}

GarchFit filter_garch(const GarchParams& params, const Sample& window) {
    if (!params.valid()) {
        throw std::invalid_argument("filter_garch: invalid parameters");
    }
    const double var0 = sample_variance(window.values());
    if (!(var0 > 0.0)) {
        throw std::domain_error("filter_garch: window has zero variance");
    }
    FilterOut out = filter(params, window.values(), var0);
    return {params, std::move(out.sigmas), std::move(out.residuals), out.loglik, true};
}

GarchFit fit_garch(const Sample& window, const InnovationDist& dist) {
    const auto& x = window.values();
    if (x.size() < 100) {
        throw std::invalid_argument("fit_garch: window must have at least 100 observations");
    }
    const double var0 = sample_variance(x);
    if (!(var0 > 0.0)) {
        throw std::domain_error("fit_garch: window has zero variance");
    }

    auto objective = [&](const std::vector<double>& th) {
        for (double v : th) {
            if (!std::isfinite(v)) return kBigPenalty;
        }
        const GarchParams p = theta_to_params(th, dist);
        if (!std::isfinite(p.omega) || p.omega <= 0.0) return kBigPenalty;
        const double ll = filter(p, x, var0).loglik;
        return std::isfinite(ll) ? -ll : kBigPenalty;
    };

    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    const double phi0 = std::clamp(lag1_autocorr(x), -0.9, 0.9);
    std::vector<double> start = {mean, std::atanh(phi0), std::log(0.05 * var0),
                                 logit(0.9), logit(1.0 / 9.0)};
    const std::vector<double> steps = {0.1 * (1.0 + std::abs(mean)), 0.2, 0.5, 0.5, 0.5};

    std::mt19937 jitter_rng(909090);
    std::normal_distribution<double> jitter(0.0, 0.3);

    NelderMeadResult best;
    best.value = std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt < 4; ++attempt) {
        std::vector<double> s0 = start;
        if (attempt > 0) {
            for (double& v : s0) v += jitter(jitter_rng);
        }
        NelderMeadResult r = nelder_mead(objective, s0, steps, 4000, 1e-6);
        if (r.value < best.value || (r.converged && !best.converged &&
                                     r.value < best.value + 1e-6)) {
            best = std::move(r);
        }
        if (best.converged) break;
    }

    const GarchParams p = theta_to_params(best.x, dist);
    FilterOut out = filter(p, x, var0);
    return {p, std::move(out.sigmas), std::move(out.residuals), out.loglik, best.converged};
}

MomentForecast forecast_moments(const GarchFit& fit, const Sample& window) {
    if (fit.sigmas.size() != window.size()) {
        throw std::invalid_argument("forecast_moments: fit does not match window");
    }
    const double sigma_t = fit.sigmas.back();
    const double eps_t = fit.std_residuals.back() * sigma_t;
    const GarchParams& p = fit.params;
    MomentForecast mf;
    mf.mean = p.mu + p.phi * window.values().back();
    mf.sigma = std::sqrt(p.omega + p.a * eps_t * eps_t + p.b * sigma_t * sigma_t);
    return mf;
}

std::string ModelSpec::label() const {
    switch (scheme) {
        case Scheme::HS: return "HS";
        case Scheme::FHS: return "FHS_" + dist.name();
        case Scheme::Garch: return "GARCH_" + dist.name();
    }
    return "?";
}

double risk_forecast(const ModelSpec& model, const Sample& window,
                     const RiskMeasureSpec& spec, const GarchFit* prefit) {
    spec.validate();
    if (model.scheme == Scheme::HS) {
        return hs_value(window, spec);
    }

    GarchFit local;
    const GarchFit* fit = prefit;
    if (fit == nullptr) {
        local = fit_garch(window, model.dist);
        fit = &local;
    }
    const MomentForecast mf = forecast_moments(*fit, window);

    double q = 0.0;
    if (model.scheme == Scheme::Garch) {
        q = innovation_q(model.dist, spec);
    } else {
        // FHS: empirical functional of the standardized residuals; the first
        // residual is a seeding convention, not model-implied, so drop it
        std::vector<double> z(fit->std_residuals.begin() + 1, fit->std_residuals.end());
        q = sample_q(Sample(std::move(z)), spec);
    }
    return -(mf.mean + mf.sigma * q);
}

std::vector<double> simulate_garch(const GarchParams& params, std::size_t n,
                                   std::uint64_t seed) {
    if (!params.valid()) {
        throw std::invalid_argument("simulate_garch: invalid parameters");
    }
    std::mt19937_64 rng(seed);
    // uniforms built straight from engine bits so output depends only on the seed
    auto uniform01 = [&]() {
        return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    };

    const std::size_t burnin = 500;
    std::vector<double> out;
    out.reserve(n);
    double sigma2 = params.omega / (1.0 - params.a - params.b);
    double eps = 0.0;
    double x = params.mu / (1.0 - params.phi);
    for (std::size_t t = 0; t < burnin + n; ++t) {
        sigma2 = params.omega + params.a * eps * eps + params.b * sigma2;
        const double z = params.dist.quantile(uniform01());
        eps = std::sqrt(sigma2) * z;
        x = params.mu + params.phi * x + eps;
        if (t >= burnin) out.push_back(x);
    }
    return out;
}

}  // namespace robustcap
