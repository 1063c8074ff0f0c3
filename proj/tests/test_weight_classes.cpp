#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bergman/weight_classes.hpp"

using namespace bergman;

TEST_CASE("dhat diagnostics on the named families") {
    auto r0 = dhat_report(RadialWeight::standard(0.0));
    CHECK(r0.verdict == ClassVerdict::MemberConsistent);
    for (double q : r0.ratios) CHECK(q == doctest::Approx(2.0).epsilon(1e-8));

    auto r1 = dhat_report(RadialWeight::standard(1.0));
    CHECK(r1.verdict == ClassVerdict::MemberConsistent);

    auto rexp = dhat_report(RadialWeight::exponential(1.0, 1.0));
    CHECK(rexp.verdict == ClassVerdict::NonMemberConsistent);
    CHECK(rexp.truncated);
}

TEST_CASE("dhat sup grows with the grid") {
    auto w = RadialWeight::log_power(1.0, 1.0);
    auto shallow = dhat_report(w, dyadic_radii(10));
    auto deep = dhat_report(w, dyadic_radii(20));
    CHECK(deep.observed_constant >= shallow.observed_constant - 1e-12);
}

TEST_CASE("dcheck diagnostics") {
    auto r0 = dcheck_report(RadialWeight::standard(0.0), {}, {2.0});
    CHECK(r0.verdict == ClassVerdict::MemberConsistent);
    CHECK(r0.observed_constant == doctest::Approx(2.0).epsilon(1e-8));

    CHECK(dcheck_report(RadialWeight::standard(1.0)).verdict ==
          ClassVerdict::MemberConsistent);

    auto borderline = dcheck_report(RadialWeight::log_power(-1.0, -2.0));
    CHECK(borderline.verdict == ClassVerdict::NonMemberConsistent);
}

TEST_CASE("moment doubling diagnostics") {
    auto r0 = m_report(RadialWeight::standard(0.0), {}, {2.0});
    CHECK(r0.verdict == ClassVerdict::MemberConsistent);
    // omega_x/omega_2x = (2x+1)/(x+1) has infimum 3/2 at x = 1 on the grid
    CHECK(r0.observed_constant == doctest::Approx(1.5).epsilon(1e-8));

    CHECK(m_report(RadialWeight::exponential(1.0, 1.0)).verdict ==
          ClassVerdict::MemberConsistent);
}

TEST_CASE("class algebra: both doubling verdicts imply moment doubling") {
    for (auto w : {RadialWeight::standard(0.5), RadialWeight::log_power(1.0, 1.0)}) {
        auto d = d_report(w);
        REQUIRE(d.verdict == ClassVerdict::MemberConsistent);
        CHECK(m_report(w).verdict == ClassVerdict::MemberConsistent);
    }
}

TEST_CASE("beta estimates track the tail decay power") {
    auto f0 = dhat_beta_estimate(RadialWeight::standard(0.0));
    CHECK(f0.exponent == doctest::Approx(1.0).epsilon(0.3));
    CHECK(f0.constant == doctest::Approx(1.0).epsilon(0.1));

    auto f15 = dhat_beta_estimate(RadialWeight::standard(1.5));
    CHECK(f15.exponent == doctest::Approx(2.5).epsilon(0.3));

    auto flog = dhat_beta_estimate(RadialWeight::log_power(1.0, 0.0));
    CHECK(flog.exponent == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("eta estimates track the moment decay power") {
    CHECK(moment_eta_estimate(RadialWeight::standard(0.0)).exponent ==
          doctest::Approx(1.0).epsilon(0.3));
    CHECK(moment_eta_estimate(RadialWeight::standard(1.0)).exponent ==
          doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("integral ratio of Lemma-A type") {
    // lambda = 0 at zeta = 0: both sides are the total mass
    auto r = dhat_integral_ratio(RadialWeight::standard(0.0), 0.0, {0.0, 0.5, 0.999});
    REQUIRE(!r.rows.empty());
    CHECK(r.rows.front().ratio == doctest::Approx(1.0).epsilon(1e-6));

    auto good = dhat_integral_ratio(RadialWeight::standard(0.0), 2.0);
    CHECK(good.verdict.passed);

    auto drift = dhat_integral_ratio(RadialWeight::exponential(1.0, 1.0), 2.0);
    CHECK(!drift.verdict.passed);
}

TEST_CASE("default n0 from the lambda scan is stable") {
    int n0 = default_n0(RadialWeight::standard(0.0));
    CHECK(n0 >= 1);
    CHECK(n0 <= 6);
    CHECK(default_n0(RadialWeight::standard(0.0)) == n0);
}

TEST_CASE("Hardy-Littlewood ratio closed form at s = 0.99") {
    auto r = hl_sum_ratio(RadialWeight::standard(0.0), 1.0, 0.0, {0.5, 0.9, 0.99});
    REQUIRE(r.rows.size() == 3);
    const auto& row = r.rows.back();
    double lhs_exact = -2.0 * std::log(0.01) / 0.99;
    double rhs_exact = -std::log(0.01) + 1.0;
    CHECK(row.lhs == doctest::Approx(lhs_exact).epsilon(2e-3));
    CHECK(row.rhs == doctest::Approx(rhs_exact).epsilon(1e-6));
    CHECK(row.ratio == doctest::Approx(1.66).epsilon(6e-3));
}

TEST_CASE("Hardy-Littlewood ratios stay banded for other parameters") {
    for (auto [p, alpha] : {std::pair{2.0, -2.0}, {1.0, 2.0}, {2.0, 2.0}}) {
        auto r = hl_sum_ratio(RadialWeight::standard(0.0), p, alpha,
                              {0.9, 0.99, 0.999});
        CHECK(r.verdict.band <= 50.0);
    }
}

TEST_CASE("room lemma ratios for the constant weight") {
    auto w = RadialWeight::standard(0.0);
    auto out = room_report(w, w, 0.5, dyadic_radii(12));
    for (const auto& row : out.hat_product.rows)
        CHECK(row.ratio == doctest::Approx(0.5).epsilon(1e-6));
    for (const auto& row : out.gamma_ratio.rows)
        CHECK(row.ratio == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(out.hat_product.verdict.within_band);
    CHECK(out.gamma_ratio.verdict.within_band);
}

TEST_CASE("tail products of doubling weights stay doubling") {
    auto w = RadialWeight::standard(0.5);
    auto nu = RadialWeight::log_power(1.0, 1.0);
    auto derived = w.tail_product(nu);
    CHECK(d_report(derived).verdict == ClassVerdict::MemberConsistent);
}
