#pragma once

#include <string>

#include "robustcap/empirical.hpp"

namespace robustcap {

enum class MeasureKind { EL, MSD, ES, EVaR, ML, VaR };

/// Tagged choice of risk functional. alpha is the tail level for ES/EVaR/VaR,
/// beta the semideviation weight for MSD; unused fields stay at zero.
struct RiskMeasureSpec {
    MeasureKind kind = MeasureKind::EL;
    double alpha = 0.0;
    double beta = 0.0;

    static RiskMeasureSpec el() { return {MeasureKind::EL, 0.0, 0.0}; }
    static RiskMeasureSpec msd(double beta) { return {MeasureKind::MSD, 0.0, beta}; }
    static RiskMeasureSpec es(double alpha) { return {MeasureKind::ES, alpha, 0.0}; }
    static RiskMeasureSpec evar(double alpha) { return {MeasureKind::EVaR, alpha, 0.0}; }
    static RiskMeasureSpec ml() { return {MeasureKind::ML, 0.0, 0.0}; }
    static RiskMeasureSpec var(double alpha) { return {MeasureKind::VaR, alpha, 0.0}; }

    /// Throws std::domain_error on out-of-range parameters. EVaR is accepted
    /// only up to 0.5 here; evar() itself computes for alpha in (0,1).
    void validate() const;

    /// True when the functional admits a dual-set representation usable by
    /// the robust machinery (everything but VaR; EVaR only for alpha <= 0.5).
    bool coherent() const;

    std::string name() const;
};

/// Expected loss EL = -mean.
double el(const Sample& sample);

/// VaR = negated inf-convention alpha-quantile. Not coherent.
double var(const Sample& sample, double alpha);

/// ES = -E[Y | Y <= F^{-1}(alpha)] with the inf-convention quantile; the
/// conditioning set always contains the quantile atom so it is never empty.
double es(const Sample& sample, double alpha);

/// EVaR = negated alpha-expectile, found by bisection on the first-order
/// condition alpha*E[(Y-t)^+] = (1-alpha)*E[(t-Y)^+] to 1e-10. Coherent only
/// for alpha <= 0.5, computable for alpha in (0,1).
double evar(const Sample& sample, double alpha);

/// MSD = -E[Y] + beta * sqrt(E[((Y-E[Y])^-)^2]), beta in [0,1].
double msd(const Sample& sample, double beta);

/// Maximum loss ML = -min.
double ml(const Sample& sample);

/// Dispatch on a coherent spec; rejects VaR with std::invalid_argument.
double coherent_value(const RiskMeasureSpec& spec, const Sample& sample);

}  // namespace robustcap
