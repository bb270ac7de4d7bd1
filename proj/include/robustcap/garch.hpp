#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "robustcap/distributions.hpp"
#include "robustcap/empirical.hpp"
#include "robustcap/riskmeasures.hpp"

namespace robustcap {

/// AR(1)-GARCH(1,1): X_t = mu + phi*X_{t-1} + eps_t, eps_t = sigma_t * z_t,
/// sigma_t^2 = omega + a*eps_{t-1}^2 + b*sigma_{t-1}^2, z_t ~ iid dist.
struct GarchParams {
    double mu = 0.0;
    double phi = 0.0;
    double omega = 1.0;
    double a = 0.0;
    double b = 0.0;
    InnovationDist dist = InnovationDist::normal();

    bool valid() const;
};

struct GarchFit {
    GarchParams params;
    std::vector<double> sigmas;          // conditional deviations, window length
    std::vector<double> std_residuals;   // eps_t / sigma_t
    double loglik = 0.0;
    bool converged = false;
};

/// Quasi-maximum-likelihood fit by Nelder-Mead on an unconstrained
/// reparameterization (tanh/exp/logistic transforms keep |phi| < 1, omega > 0,
/// a,b >= 0, a+b < 1). sigma_1^2 starts at the window sample variance and the
/// first innovation is seeded with the demeaned first observation; the
/// likelihood sums over t >= 2. Jittered restarts on non-convergence.
/// Throws std::domain_error on a zero-variance window.
GarchFit fit_garch(const Sample& window, const InnovationDist& dist);

/// Filter a window with fixed parameters (used by the backtest fallback when
/// a refit fails to converge).
GarchFit filter_garch(const GarchParams& params, const Sample& window);

struct MomentForecast {
    double mean = 0.0;
    double sigma = 0.0;
};

/// One-step-ahead conditional moments from the fitted end state.
MomentForecast forecast_moments(const GarchFit& fit, const Sample& window);

enum class Scheme { HS, FHS, Garch };

struct ModelSpec {
    Scheme scheme = Scheme::HS;
    InnovationDist dist = InnovationDist::normal();

    std::string label() const;
};

/// Risk forecast for the next day. HS applies the measure to the raw window;
/// GARCH and FHS both forecast -(mu_next + sigma_next * q) where q is the
/// measure functional of the innovation distribution (GARCH) or of the
/// standardized residuals (FHS). GARCH/FHS support EL, VaR, ES, EVaR.
/// A prefit covering this window may be passed to avoid refitting.
double risk_forecast(const ModelSpec& model, const Sample& window,
                     const RiskMeasureSpec& spec, const GarchFit* prefit = nullptr);

/// Simulates an AR(1)-GARCH(1,1) path by inverse-CDF sampling, deterministic
/// in the seed. 500 burn-in steps are discarded.
std::vector<double> simulate_garch(const GarchParams& params, std::size_t n,
                                   std::uint64_t seed);

}  // namespace robustcap
