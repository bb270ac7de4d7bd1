#pragma once

#include <string>

namespace robustcap {

enum class Family { Normal, StudentT, Ged };

/// Standardized (mean 0, variance 1) innovation distribution for GARCH:
/// normal, Student-t (nu > 2) or generalized error (kappa > 0), optionally
/// skewed by the Fernandez-Steel transform with parameter xi > 0 (xi = 1 is
/// the symmetric base). All constants are precomputed at construction so
/// evaluations are pure.
class InnovationDist {
public:
    static InnovationDist normal();
    static InnovationDist student_t(double nu);
    static InnovationDist ged(double kappa);

    /// Fernandez-Steel skew of this (symmetric) distribution, re-standardized
    /// to mean 0 and variance 1.
    InnovationDist skewed(double xi) const;

    /// Accepts the family codes norm/snorm/std/sstd/ged/sged. Shape and skew
    /// for the non-normal / skewed variants are supplied by the caller.
    static InnovationDist parse(const std::string& code, double shape, double xi);

    Family family() const { return family_; }
    double shape() const { return shape_; }
    double skew() const { return xi_; }
    bool symmetric() const { return xi_ == 1.0; }
    std::string name() const;

    double log_density(double z) const;
    double density(double z) const;
    double cdf(double z) const;
    double quantile(double p) const;

    /// Lower partial first moment E[Z 1_{Z<=z}].
    double partial_moment(double z) const;

    /// ES at level alpha: -(1/alpha) * E[Z 1_{Z<=q_alpha}].
    double es(double alpha) const;

    /// Negated alpha-expectile (risk sign), alpha in (0,1).
    double expectile(double alpha) const;

private:
    InnovationDist(Family family, double shape, double xi);

    double base_log_density(double t) const;
    double base_cdf(double t) const;
    double base_quantile(double p) const;
    double base_partial_moment(double t) const;
    double base_abs_moment() const;  // E|T| of the symmetric base

    // raw-skew cdf/partial moment before re-standardization
    double raw_cdf(double u) const;
    double raw_partial_moment(double u) const;

    Family family_;
    double shape_;  // nu for StudentT, kappa for Ged, unused for Normal
    double xi_;
    double ged_lambda_ = 0.0;
    double skew_mean_ = 0.0;
    double skew_sd_ = 1.0;
};

}  // namespace robustcap
