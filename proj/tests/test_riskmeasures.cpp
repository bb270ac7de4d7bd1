#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "robustcap/riskmeasures.hpp"

using namespace robustcap;

namespace {

std::vector<double> random_values(std::mt19937& rng, std::size_t n, double scale = 3.0) {
    std::normal_distribution<double> gauss(0.0, scale);
    std::vector<double> v(n);
    for (auto& x : v) x = gauss(rng);
    return v;
}

double eval(const RiskMeasureSpec& spec, const std::vector<double>& v) {
    return coherent_value(spec, Sample(v));
}

}  // namespace

TEST_CASE("catalogue closed forms") {
    const Sample s({-4, -2, 0, 2});

    CHECK(el(s) == doctest::Approx(1.0));
    CHECK(el(Sample({3, 3, 3})) == -3.0);
    CHECK(el(Sample({1, -1})) == doctest::Approx(0.0));

    CHECK(var(s, 0.25) == doctest::Approx(4.0));
    CHECK(var(Sample({5}), 0.9) == -5.0);
    std::vector<double> ladder(100);
    for (int i = 0; i < 100; ++i) ladder[i] = i + 1;
    CHECK(var(Sample(ladder), 0.01) == -1.0);

    CHECK(es(s, 0.25) == doctest::Approx(4.0));
    CHECK(es(s, 1.0) == el(s));  // exact on this integer sample
    CHECK(es(s, 0.5) == doctest::Approx(3.0));

    CHECK(evar(Sample({-1, 1}), 0.25) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(evar(Sample({7, 7}), 0.3) == doctest::Approx(-7.0));

    CHECK(msd(Sample({9, 9}), 1.0) == doctest::Approx(-9.0));
    CHECK(msd(Sample({-1, 1}), 0.0) == doctest::Approx(0.0));
    CHECK(msd(Sample({-1, 1}), 1.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

    CHECK(ml(s) == 4.0);
    CHECK(ml(Sample({5, 5})) == -5.0);
    CHECK(ml(Sample({1, 5})) == -1.0);
}

TEST_CASE("evar at one half is the negated mean") {
    std::mt19937 rng(11);
    for (int rep = 0; rep < 30; ++rep) {
        const auto v = random_values(rng, 40);
        CHECK(evar(Sample(v), 0.5) == doctest::Approx(el(Sample(v))).epsilon(1e-10));
    }
}

TEST_CASE("coherent_value dispatches and rejects VaR") {
    const Sample s({-4, -2, 0, 2});
    CHECK(coherent_value(RiskMeasureSpec::es(0.25), s) == doctest::Approx(es(s, 0.25)));
    CHECK(coherent_value(RiskMeasureSpec::el(), Sample({1, -1})) == doctest::Approx(0.0));
    CHECK_THROWS_AS(coherent_value(RiskMeasureSpec::var(0.01), s), std::invalid_argument);
}

TEST_CASE("ML dominates every coherent measure") {
    std::mt19937 rng(23);
    const std::vector<RiskMeasureSpec> specs = {
        RiskMeasureSpec::el(), RiskMeasureSpec::msd(1.0), RiskMeasureSpec::es(0.1),
        RiskMeasureSpec::evar(0.05), RiskMeasureSpec::ml()};
    for (int rep = 0; rep < 30; ++rep) {
        const auto v = random_values(rng, 25);
        for (const auto& spec : specs) {
            CHECK(ml(Sample(v)) >= eval(spec, v) - 1e-9);
        }
    }
}

TEST_CASE("ordering between the catalogue members") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> ub(0.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        const auto v = random_values(rng, 30);
        const Sample s(v);
        const double beta = ub(rng);
        const double alpha = 0.05 + 0.9 * ub(rng);
        CHECK(el(s) <= msd(s, beta) + 1e-12);
        CHECK(msd(s, beta) <= ml(s) + 1e-12);
        CHECK(el(s) <= es(s, alpha) + 1e-12);
        CHECK(es(s, alpha) <= ml(s) + 1e-12);
    }
}

TEST_CASE("coherence axioms hold samplewise") {
    std::mt19937 rng(47);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double tol = 1e-9;

    const std::vector<RiskMeasureSpec> specs = {
        RiskMeasureSpec::el(), RiskMeasureSpec::msd(1.0), RiskMeasureSpec::es(0.25),
        RiskMeasureSpec::evar(0.2), RiskMeasureSpec::ml()};

    for (int rep = 0; rep < 60; ++rep) {
        const std::size_t n = 5 + rep % 40;
        const auto x = random_values(rng, n);
        const double c = 4.0 * u01(rng) - 2.0;
        const double lam = 2.5 * u01(rng);

        auto shifted = x;
        for (auto& v : shifted) v += c;
        auto scaled = x;
        for (auto& v : scaled) v *= lam;
        auto dominated = x;  // dominated <= x pointwise
        for (auto& v : dominated) v -= u01(rng);
        auto y = random_values(rng, n);
        auto sum = x;
        for (std::size_t i = 0; i < n; ++i) sum[i] += y[i];

        for (const auto& spec : specs) {
            const double rx = eval(spec, x);
            CHECK(eval(spec, dominated) >= rx - tol);                    // monotonicity
            CHECK(std::abs(eval(spec, shifted) - (rx - c)) <= tol);      // translation
            CHECK(std::abs(eval(spec, scaled) - lam * rx) <= tol);       // homogeneity
            CHECK(eval(spec, sum) <= rx + eval(spec, y) + tol);          // sub-additivity
        }
    }
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(RiskMeasureSpec::msd(1.5).validate(), std::domain_error);
    CHECK_THROWS_AS(RiskMeasureSpec::es(0.0).validate(), std::domain_error);
    CHECK_THROWS_AS(RiskMeasureSpec::evar(0.7).validate(), std::domain_error);
    CHECK_NOTHROW(RiskMeasureSpec::evar(0.5).validate());
    CHECK_NOTHROW(RiskMeasureSpec::es(1.0).validate());

    CHECK(!RiskMeasureSpec::var(0.01).coherent());
    CHECK(!RiskMeasureSpec::evar(0.7).coherent());
    CHECK(RiskMeasureSpec::evar(0.3).coherent());

    // evar itself computes beyond the coherence bound
    CHECK(evar(Sample({-1, 1}), 0.75) == doctest::Approx(-0.5).epsilon(1e-10));
}
