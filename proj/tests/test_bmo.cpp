#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bergman/bmo.hpp"

using namespace bergman;

namespace {
AnalyticCoeffs poly(std::initializer_list<double> cs) {
    AnalyticCoeffs f;
    for (double v : cs) f.c.push_back(Complex(v, 0.0));
    return f;
}
}  // namespace

TEST_CASE("hyperbolic distance basics") {
    CHECK(hyp_distance({0.0, 0.0}, {0.5, 0.0}) ==
          doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-12));
    CHECK(hyp_distance({0.3, -0.2}, {0.3, -0.2}) == 0.0);
    for (auto [a, b] : {std::pair{Complex(0.1, 0.6), Complex(-0.4, 0.2)},
                        {Complex(0.9, 0.0), Complex(0.0, 0.85)}})
        CHECK(hyp_distance(a, b) == doctest::Approx(hyp_distance(b, a)).epsilon(1e-13));
}

TEST_CASE("hyperbolic discs realize consistent euclidean parameters") {
    auto d0 = hyperbolic_disc({0.0, 0.0}, 0.7);
    CHECK(std::abs(d0.euclid_center) < 1e-15);
    CHECK(d0.euclid_radius == doctest::Approx(std::tanh(0.7)).epsilon(1e-12));
    // construction validates beta = r at boundary samples internally
    for (Complex z : {Complex(0.5, 0.2), Complex(-0.8, 0.1), Complex(0.0, 0.95)})
        CHECK_NOTHROW(hyperbolic_disc(z, 1.0));
}

TEST_CASE("local means") {
    auto w = RadialWeight::standard(0.0);
    auto c = SymbolFunction::analytic(poly({2.5}), "const");
    CHECK(std::abs(local_mean(w, c, {0.4, 0.3}, 1.2) - Complex(2.5, 0.0)) < 1e-8);

    auto id = SymbolFunction::analytic(poly({0.0, 1.0}), "z");
    CHECK(std::abs(local_mean(w, id, {0.0, 0.0}, 0.9)) < 1e-10);

    double R = 0.6;
    auto sq = SymbolFunction::monomials({{Complex(1.0, 0.0), 1, 1}}, "|z|^2");
    Complex mean = local_mean(w, sq, {0.0, 0.0}, std::atanh(R));
    CHECK(mean.real() == doctest::Approx(R * R / 2.0).epsilon(1e-8));
}

TEST_CASE("mean oscillation closed forms and invariances") {
    auto w = RadialWeight::standard(0.0);
    auto c = SymbolFunction::analytic(poly({-3.0}), "const");
    CHECK(mo_point(w, c, {0.2, 0.1}, 2.0, 1.0) < 1e-9);

    double R = 0.5;
    auto re = SymbolFunction::monomials(
        {{Complex(0.5, 0.0), 1, 0}, {Complex(0.5, 0.0), 0, 1}}, "Re z");
    double mo = mo_point(w, re, {0.0, 0.0}, 2.0, std::atanh(R));
    CHECK(mo == doctest::Approx(R / 2.0).epsilon(1e-7));

    // MO(a f + b) = |a| MO(f)
    auto scaled = SymbolFunction::callable(
        [&](Complex zeta) { return Complex(-2.0, 0.0) * re.eval(zeta) + 7.0; },
        "affine");
    double mo2 = mo_point(w, scaled, {0.0, 0.0}, 2.0, std::atanh(R));
    CHECK(mo2 == doctest::Approx(2.0 * mo).epsilon(1e-7));
}

TEST_CASE("BMO norms: constants vanish, bounded symbols embed") {
    auto w = RadialWeight::standard(0.0);
    auto c = SymbolFunction::analytic(poly({4.0}), "const");
    CHECK(bmo_norm(w, c, 2.0, 1.0).value < 1e-8);

    auto sgn = SymbolFunction::sign_re();
    auto b = bmo_norm(w, sgn, 2.0, 1.0);
    CHECK(b.dropped == 0);
    CHECK(b.value <= 2.0 + 1e-9);
    CHECK(b.value > 0.1);

    // radius stability within a factor-10 band
    auto b2 = bmo_norm(w, sgn, 2.0, 2.0);
    double q = b.value / b2.value;
    CHECK(q > 0.1);
    CHECK(q < 10.0);
}

TEST_CASE("BO seminorm") {
    auto c = SymbolFunction::analytic(poly({1.5}), "const");
    CHECK(bo_seminorm(c) == 0.0);

    auto beta0 = SymbolFunction::callable(
        [](Complex z) { return Complex(hyp_distance({0.0, 0.0}, z), 0.0); },
        "beta(0,.)");
    double s = bo_seminorm(beta0);
    CHECK(s <= 1.0 + 1e-9);
    CHECK(s >= 0.9);

    auto re = SymbolFunction::monomials(
        {{Complex(0.5, 0.0), 1, 0}, {Complex(0.5, 0.0), 0, 1}}, "Re z");
    double sre = bo_seminorm(re);
    CHECK(sre > 0.0);
    CHECK(std::isfinite(sre));
}

TEST_CASE("theorem-B style report on the constant weight") {
    auto w = RadialWeight::standard(0.0);
    std::vector<SymbolFunction> symbols = {
        SymbolFunction::analytic(poly({1.0}), "one"),
        SymbolFunction::sign_re(),
        SymbolFunction::monomials(
            {{Complex(0.5, 0.0), 1, 0}, {Complex(0.5, 0.0), 0, 1}}, "Re z"),
    };
    auto rep = theoremB_report(w, symbols);
    REQUIRE(rep.rows.size() == 3);
    CHECK(rep.rows[0].ratio == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(rep.verdict.passed);
}

TEST_CASE("sign-cutoff growth column under the exponential weight") {
    auto w = RadialWeight::exponential(1.0, 1.0);
    TheoremBOptions opt;
    opt.trend_R = {0.5, 0.7, 0.9};
    auto rep = theoremB_report(w, {SymbolFunction::sign_re(0.5)}, opt);
    bool found = false;
    for (const auto& note : rep.notes)
        if (note.find("monotone increasing") != std::string::npos) found = true;
    CHECK(found);
}
