#include <catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "randsum/error.hpp"
#include "randsum/severity.hpp"

using namespace randsum;
using randsum::testing::rel_close;
using Catch::Matchers::WithinRel;
using Catch::Matchers::WithinAbs;

namespace {

const Horizon kYears{1.0, 60.0};

SeverityModel constant(SeverityFamily family, double mu, double shape = 0.0) {
    return SeverityModel(family, TrendParams{mu, 0.0}, shape, kYears);
}

}  // namespace

TEST_CASE("closed-form moments", "[severity]") {
    SECTION("exponential mean and variance are mu and mu^2") {
        const auto m = SeverityModel::exponential({2.0, 0.0}, kYears).moments(1.0);
        CHECK(m.mean == 2.0);
        CHECK(m.variance == 4.0);
    }
    SECTION("lognormal mu=1 sigma=0.5") {
        const auto m = constant(SeverityFamily::LogNormal, 1.0, 0.5).moments(1.0);
        // exp(1.125) and (e^0.25 - 1) e^2.25
        CHECK_THAT(m.mean, WithinRel(3.080216848918031, 1e-14));
        CHECK_THAT(m.variance, WithinRel(2.694758124344947, 1e-14));
    }
    SECTION("gpd mu=0.5 xi=0.25") {
        const auto m = constant(SeverityFamily::GPD, 0.5, 0.25).moments(1.0);
        CHECK_THAT(m.mean, WithinRel(8.0 / 3.0, 1e-14));
        CHECK_THAT(m.variance, WithinRel(128.0 / 9.0, 1e-14));
    }
    SECTION("uniform and gamma") {
        const auto u = constant(SeverityFamily::Uniform, 6.0).moments(3.0);
        CHECK(u.mean == 3.0);
        CHECK(u.variance == 3.0);
        const auto g = constant(SeverityFamily::Gamma, 3.0, 2.0).moments(3.0);
        CHECK(g.mean == 6.0);
        CHECK(g.variance == 18.0);
    }
    SECTION("trend moves the driver") {
        const auto model = SeverityModel::exponential({1.0, 0.5}, kYears);
        CHECK(model.driver(10.0) == 6.0);
        CHECK(model.moments(10.0).mean == 6.0);
    }
}

TEST_CASE("J^2 per family", "[severity]") {
    CHECK(constant(SeverityFamily::Uniform, 4.0).j_squared() == 3.0);
    CHECK(SeverityModel::uniform({1.0, 0.3}, kYears).j_squared() == 3.0);
    CHECK(constant(SeverityFamily::Exponential, 7.0).j_squared() == 1.0);
    CHECK_THAT(constant(SeverityFamily::LogNormal, 0.3, 1.0).j_squared(), WithinRel(0.5819767068693265, 1e-14));
    CHECK(constant(SeverityFamily::Gamma, 1.0, 2.5).j_squared() == 2.5);
    CHECK_THAT(constant(SeverityFamily::GPD, 1.0, 0.2).j_squared(), WithinRel(0.6, 1e-15));
}

TEST_CASE("moment identities hold for random models", "[severity][property]") {
    RandomStream rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        for (auto family : randsum::testing::kAllFamilies) {
            const auto model = randsum::testing::random_severity(family, rng, 60.0);
            const double t = 1.0 + 59.0 * rng.uniform();
            const double t2 = 1.0 + 59.0 * rng.uniform();
            const auto m = model.moments(t);
            REQUIRE(m.variance >= 0.0);
            REQUIRE(rel_close(m.second_moment, m.variance + m.mean * m.mean, 1e-12));

            // J^2 from the moments does not depend on the year ...
            const auto m2 = model.moments(t2);
            const double j_t = m.mean * m.mean / m.variance;
            const double j_t2 = m2.mean * m2.mean / m2.variance;
            REQUIRE(rel_close(j_t, j_t2, 1e-12));
            REQUIRE(rel_close(j_t, model.j_squared(), 1e-12));

            // ... nor on rescaling the trend.
            const double c = 0.25 + 4.0 * rng.uniform();
            const SeverityModel scaled(family, {c * model.trend().intercept, c * model.trend().slope}, model.shape(),
                                       model.horizon());
            const auto ms = scaled.moments(t);
            REQUIRE(rel_close(ms.mean * ms.mean / ms.variance, model.j_squared(), 1e-12));
        }
    }
}

TEST_CASE("gamma with shape 1 is the exponential", "[severity]") {
    const auto g = SeverityModel::gamma({2.0, 0.1}, 1.0, kYears);
    const auto e = SeverityModel::exponential({2.0, 0.1}, kYears);
    for (double t : {1.0, 17.0, 60.0}) {
        const auto mg = g.moments(t);
        const auto me = e.moments(t);
        CHECK(mg.mean == me.mean);
        CHECK(mg.variance == me.variance);
        CHECK(mg.second_moment == me.second_moment);
    }
    CHECK(g.j_squared() == e.j_squared());

    SECTION("and samples the same distribution") {
        RandomStream rg(11), re(12);
        constexpr std::size_t n = 100000;
        std::vector<double> a(n), b(n);
        for (auto& x : a) x = g.sample(5.0, rg);
        for (auto& x : b) x = e.sample(5.0, re);
        const double d = randsum::testing::ks_two_sample(a, b);
        CHECK(d < randsum::testing::ks_critical_1pct(n, n));
    }
}

TEST_CASE("inverse CDF at known quantiles", "[severity]") {
    CHECK(constant(SeverityFamily::Uniform, 10.0).inverse_cdf(1.0, 0.5) == 5.0);
    // GPD with scale 1 (mu = 1) and xi = 0 is the unit exponential.
    const auto gpd0 = constant(SeverityFamily::GPD, 1.0, 0.0);
    CHECK_THAT(gpd0.inverse_cdf(1.0, 1.0 - std::exp(-2.0)), WithinRel(2.0, 1e-14));
    // xi != 0: (sigma/xi)((1-u)^-xi - 1)
    const auto gpd = constant(SeverityFamily::GPD, 0.5, 0.25);
    CHECK_THAT(gpd.inverse_cdf(1.0, 0.75), WithinRel(2.0 / 0.25 * (std::pow(0.25, -0.25) - 1.0), 1e-14));
    CHECK_THAT(constant(SeverityFamily::Exponential, 3.0).inverse_cdf(1.0, 1.0 - std::exp(-1.0)),
               WithinRel(3.0, 1e-14));
    CHECK_THAT(constant(SeverityFamily::LogNormal, 1.0, 0.5).inverse_cdf(1.0, 0.5), WithinRel(std::exp(1.0), 1e-12));
    CHECK_THROWS_AS(gpd.inverse_cdf(1.0, 1.0), ModelError);
}

TEST_CASE("sample means converge to the closed form", "[severity][montecarlo]") {
    const SeverityModel models[] = {
        SeverityModel::uniform({10.0, 0.0}, kYears),
        SeverityModel::gamma({3.0, 0.0}, 0.6, kYears),
        SeverityModel::gamma({3.0, 0.0}, 2.5, kYears),
        SeverityModel::exponential({2.0, 0.0}, kYears),
        SeverityModel::lognormal({1.0, 0.0}, 0.5, kYears),
        SeverityModel::gpd({0.5, 0.0}, 0.25, kYears),
        SeverityModel::gpd({0.5, 0.0}, -0.3, kYears),
    };
    constexpr std::size_t n = 1'000'000;
    std::uint64_t seed = 100;
    for (const auto& model : models) {
        RandomStream rng(seed++);
        double sum = 0.0;
        bool positive = true;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = model.sample(1.0, rng);
            positive = positive && x > 0.0;
            sum += x;
        }
        const auto m = model.moments(1.0);
        INFO(std::string(to_string(model.family())) << " shape " << model.shape());
        CHECK(positive);
        CHECK(std::fabs(sum / n - m.mean) < 4.0 * std::sqrt(m.variance / n));
    }
}

TEST_CASE("invalid severity models are rejected", "[severity][errors]") {
    CHECK_THROWS_WITH(SeverityModel::gpd({1.0, 0.0}, 0.6, kYears),
                      Catch::Matchers::ContainsSubstring("shape must be < 0.5 for finite variance"));
    CHECK_THROWS_AS(SeverityModel::gpd({1.0, 0.0}, 0.5, kYears), ModelError);
    CHECK_THROWS_AS(SeverityModel::lognormal({1.0, 0.0}, 0.0, kYears), ModelError);
    CHECK_THROWS_AS(SeverityModel::gamma({1.0, 0.0}, 0.0, kYears), ModelError);
    CHECK_THROWS_AS(SeverityModel::exponential({0.0, 0.0}, kYears), ModelError);
    // 1 - 0.02 t hits zero at t = 50.
    CHECK_THROWS_WITH(SeverityModel::uniform({1.0, -0.02}, kYears), Catch::Matchers::ContainsSubstring("t=50"));
    CHECK_NOTHROW(SeverityModel::lognormal({-3.0, 0.0}, 0.5, kYears));
    CHECK_THROWS_AS(SeverityModel::exponential({1.0, 0.0}, {5.0, 1.0}), ModelError);

    const auto model = SeverityModel::exponential({1.0, 0.0}, kYears);
    CHECK_THROWS_AS(model.moments(0.5), ModelError);
    CHECK_THROWS_AS(model.moments(61.0), ModelError);
    RandomStream rng(1);
    CHECK_THROWS_AS(model.sample(100.0, rng), ModelError);
}

TEST_CASE("family names round-trip", "[severity]") {
    for (auto family : randsum::testing::kAllFamilies) CHECK(parse_severity_family(to_string(family)) == family);
    CHECK(parse_severity_family("Log-Normal") == SeverityFamily::LogNormal);
    CHECK_THROWS_AS(parse_severity_family("weibull"), ModelError);
}
