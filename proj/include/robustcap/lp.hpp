#pragma once

#include <vector>

namespace robustcap::lp {

enum class Rel { LessEq, Eq, GreaterEq };

struct Constraint {
    std::vector<double> coeffs;
    Rel rel = Rel::LessEq;
    double rhs = 0.0;
};

/// maximize objective . x  subject to constraints, x >= 0
struct Problem {
    std::vector<double> objective;
    std::vector<Constraint> constraints;
};

struct Solution {
    bool feasible = false;
    double value = 0.0;
    std::vector<double> x;
};

/// Dense two-phase simplex with Bland's rule. Intended for small test-oracle
/// problems (a few hundred variables), not production-scale LPs.
Solution maximize(const Problem& problem);

}  // namespace robustcap::lp
