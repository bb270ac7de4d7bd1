#include "robustcap/lp.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace robustcap::lp {

namespace {

constexpr double kEps = 1e-11;

struct Tableau {
    std::size_t rows = 0;
    std::size_t cols = 0;  // structural + slack + artificial + rhs
    std::vector<double> a;  // row-major, rhs in last column
    std::vector<std::size_t> basis;

    double& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
};

void pivot(Tableau& t, std::size_t pr, std::size_t pc) {
    const double pv = t.at(pr, pc);
    for (std::size_t c = 0; c < t.cols; ++c) t.at(pr, c) /= pv;
    for (std::size_t r = 0; r < t.rows; ++r) {
        if (r == pr) continue;
        const double factor = t.at(r, pc);
        if (factor == 0.0) continue;
        for (std::size_t c = 0; c < t.cols; ++c) {
            t.at(r, c) -= factor * t.at(pr, c);
        }
    }
    t.basis[pr] = pc;
}

// Minimizes cost . x over the tableau rows; returns false on unboundedness.
bool run_simplex(Tableau& t, const std::vector<double>& cost) {
    const std::size_t n = cost.size();
    const std::size_t rhs = t.cols - 1;
    std::vector<double> reduced(n);
    for (std::size_t iter = 0; iter < 20000; ++iter) {
        // reduced costs: c_j - c_B . B^{-1} A_j
        for (std::size_t j = 0; j < n; ++j) {
            double z = 0.0;
            for (std::size_t r = 0; r < t.rows; ++r) z += cost[t.basis[r]] * t.at(r, j);
            reduced[j] = cost[j] - z;
        }
        // Bland: smallest index with negative reduced cost
        std::size_t enter = n;
        for (std::size_t j = 0; j < n; ++j) {
            if (reduced[j] < -kEps) { enter = j; break; }
        }
        if (enter == n) return true;  // optimal
        std::size_t leave = t.rows;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < t.rows; ++r) {
            const double coef = t.at(r, enter);
            if (coef > kEps) {
                const double ratio = t.at(r, rhs) / coef;
                if (ratio < best_ratio - kEps ||
                    (ratio < best_ratio + kEps &&
                     (leave == t.rows || t.basis[r] < t.basis[leave]))) {
                    best_ratio = ratio;
                    leave = r;
                }
            }
        }
        if (leave == t.rows) return false;  // unbounded
        pivot(t, leave, enter);
    }
    throw std::runtime_error("simplex: iteration limit reached");
}

}  // namespace

Solution maximize(const Problem& problem) {
    const std::size_t nvar = problem.objective.size();
    const std::size_t m = problem.constraints.size();

    std::size_t nslack = 0;
    for (const auto& c : problem.constraints) {
        if (c.rel != Rel::Eq) ++nslack;
    }
    const std::size_t nart = m;  // one artificial per row keeps phase 1 uniform
    const std::size_t total = nvar + nslack + nart;

    Tableau t;
    t.rows = m;
    t.cols = total + 1;
    t.a.assign(t.rows * t.cols, 0.0);
    t.basis.assign(m, 0);

    std::size_t slack_at = nvar;
    for (std::size_t r = 0; r < m; ++r) {
        const auto& con = problem.constraints[r];
        if (con.coeffs.size() != nvar) {
            throw std::invalid_argument("lp: constraint width mismatch");
        }
        double sign = con.rhs < 0.0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < nvar; ++j) t.at(r, j) = sign * con.coeffs[j];
        t.at(r, t.cols - 1) = sign * con.rhs;
        Rel rel = con.rel;
        if (sign < 0.0 && rel != Rel::Eq) {
            rel = rel == Rel::LessEq ? Rel::GreaterEq : Rel::LessEq;
        }
        if (rel == Rel::LessEq) {
            t.at(r, slack_at++) = 1.0;
        } else if (rel == Rel::GreaterEq) {
            t.at(r, slack_at++) = -1.0;
        }
        t.at(r, nvar + nslack + r) = 1.0;
        t.basis[r] = nvar + nslack + r;
    }

    // phase 1: minimize sum of artificials
    std::vector<double> cost1(total, 0.0);
    for (std::size_t j = nvar + nslack; j < total; ++j) cost1[j] = 1.0;
    if (!run_simplex(t, cost1)) return {};
    double art_sum = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
        if (t.basis[r] >= nvar + nslack) art_sum += t.at(r, t.cols - 1);
    }
    if (art_sum > 1e-8) return {};  // infeasible

    // drive remaining artificials out of the basis where possible
    for (std::size_t r = 0; r < m; ++r) {
        if (t.basis[r] < nvar + nslack) continue;
        for (std::size_t j = 0; j < nvar + nslack; ++j) {
            if (std::abs(t.at(r, j)) > kEps) {
                pivot(t, r, j);
                break;
            }
        }
    }

    // phase 2: minimize -objective, artificials pinned at +inf cost
    std::vector<double> cost2(total, 0.0);
    for (std::size_t j = 0; j < nvar; ++j) cost2[j] = -problem.objective[j];
    for (std::size_t j = nvar + nslack; j < total; ++j) cost2[j] = 1e30;
    if (!run_simplex(t, cost2)) return {};

    Solution sol;
    sol.feasible = true;
    sol.x.assign(nvar, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        if (t.basis[r] < nvar) sol.x[t.basis[r]] = t.at(r, t.cols - 1);
    }
    for (std::size_t j = 0; j < nvar; ++j) sol.value += problem.objective[j] * sol.x[j];
    return sol;
}

}  // namespace robustcap::lp
