#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bergman/kernels.hpp"
#include "bergman/quadrature.hpp"

using namespace bergman;

namespace {
double rel(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}
double relc(Complex a, Complex b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}
// binomial-type kernel coefficients of (1-w)^{-(2+alpha)}
double classical_coeff(double alpha, int n) {
    return std::exp(std::lgamma(n + alpha + 2.0) - std::lgamma(n + 1.0) -
                    std::lgamma(alpha + 2.0));
}
}  // namespace

TEST_CASE("kernel coefficients match the classical families") {
    auto ks = kernel_coefficients(RadialWeight::standard(0.0), 32);
    for (int n = 0; n <= 32; ++n)
        CHECK(rel(ks.coefficients[n], n + 1.0) < 1e-10);

    for (double alpha : {1.0, 2.5}) {
        auto k = kernel_coefficients(RadialWeight::standard(alpha), 24);
        for (int n = 0; n <= 24; ++n)
            CHECK(rel(k.coefficients[n], classical_coeff(alpha, n)) < 1e-9);
    }

    // c_0 = 1/(2 omega_1) for every weight
    auto w = RadialWeight::log_power(1.0, 1.0);
    CHECK(rel(kernel_coefficients(w, 1).coefficients[0], 1.0 / (2.0 * w.moment(1.0))) <
          1e-12);
}

TEST_CASE("kernel coefficient positivity and monotonicity") {
    for (auto w : {RadialWeight::standard(0.5), RadialWeight::exponential(1.0, 1.0)}) {
        auto ks = kernel_coefficients(w, 64);
        auto run = w.moment_run(1.0, 65);
        for (int n = 0; n <= 64; ++n) {
            CHECK(ks.coefficients[n] > 0.0);
            if (n > 0) CHECK(ks.coefficients[n] >= ks.coefficients[n - 1] * (1 - 1e-12));
            CHECK(rel(2.0 * (*run)[n] * ks.coefficients[n], 1.0) < 1e-12);
        }
    }
}

TEST_CASE("kernel evaluation against closed forms") {
    auto w0 = RadialWeight::standard(0.0);
    auto v = kernel_eval(w0, {0.5, 0.0}, {0.5, 0.0});
    CHECK(relc(v.value, Complex(16.0 / 9.0, 0.0)) < 1e-9);

    // z = 0: constant 1/(2 omega_1)
    auto wl = RadialWeight::log_power(1.0, 1.0);
    auto v0 = kernel_eval(wl, {0.0, 0.0}, {0.7, 0.2});
    CHECK(relc(v0.value, Complex(1.0 / (2.0 * wl.moment(1.0)), 0.0)) < 1e-10);

    auto w1 = RadialWeight::standard(1.0);
    Complex z(0.6, 0.0), zeta(0.0, 0.3);
    Complex expect = std::pow(Complex(1.0, 0.0) - std::conj(z) * zeta, -3.0);
    CHECK(relc(kernel_eval(w1, z, zeta).value, expect) < 1e-9);
}

TEST_CASE("kernel truncation failure is reported with guidance") {
    auto w = RadialWeight::standard(0.0);
    CHECK_THROWS_AS(kernel_eval(w, {0.99999, 0.0}, {0.99999, 0.0}, 1e-12, 2000),
                    AccuracyError);
}

TEST_CASE("order-1 expansion of the constant weight is the constant-2 series") {
    auto e = expand_modified(1);
    auto w0 = RadialWeight::standard(0.0);
    ExpansionEvaluator ev(e, w0);
    CHECK(rel(ev.head_coefficient(0), 2.0) < 1e-10);
    ev.ensure(64);
    for (std::int64_t k = 1; k <= 50; ++k)
        CHECK(rel(ev.series_coefficient(k), 2.0) < 1e-10);

    auto val = expansion_eval(e, w0, {0.5, 0.0}, {0.5, 0.0});
    CHECK(relc(val.value, Complex(8.0 / 3.0, 0.0)) < 1e-8);
    // z = 0 leaves the head constant only
    auto at0 = expansion_eval(e, w0, {0.0, 0.0}, {0.4, 0.1});
    CHECK(relc(at0.value, Complex(2.0, 0.0)) < 1e-10);
}

TEST_CASE("order-2 expansion has the documented two-term structure") {
    auto e = expand_modified(2);
    REQUIRE(e.terms.size() == 2);
    // telescoped term: -(omega_(2,2))_{2k-3} / (omega_{2k+1} omega_{2k-1})
    const auto& first = e.terms[0];
    CHECK(first.sign == -1);
    CHECK(first.depth == 1);
    REQUIRE(first.slots.size() == 1);
    CHECK(first.slots[0].shift == 2);
    REQUIRE(first.slots[0].factors.size() == 1);
    CHECK(first.slots[0].factors[0].n == 2);
    CHECK(first.slots[0].factors[0].y == 2);
    // deeper term: +(omega_(1,2))_{2k-3}(omega_(1,4))_{2k-3} over three moments
    const auto& second = e.terms[1];
    CHECK(second.sign == 1);
    CHECK(second.depth == 2);
    REQUIRE(second.slots.size() == 2);
    CHECK(second.slots[0].shift == 2);
    CHECK(second.slots[0].factors[0].y == 2);
    CHECK(second.slots[1].shift == 2);
    CHECK(second.slots[1].factors[0].y == 4);
}

TEST_CASE("expansion constraints hold up to order 5") {
    for (int N = 1; N <= 5; ++N) {
        auto e = expand_modified(N);
        CHECK(e.order == N);
        CHECK(e.max_depth <= N);
        CHECK(e.max_shift <= N);
        for (const auto& term : e.terms) {
            int total = 0;
            for (const auto& slot : term.slots)
                for (const auto& f : slot.factors) total += f.n;
            CHECK(total == N);
            CHECK(static_cast<int>(term.slots.size()) == term.depth);
        }
    }
    CHECK_THROWS_AS(expand_modified(7), ValidationError);
    CHECK_THROWS_AS(expand_modified(0), ValidationError);
}

TEST_CASE("expansion identity against the direct modified kernel") {
    std::vector<std::pair<Complex, Complex>> pts = {
        {{0.5, 0.0}, {0.5, 0.0}},
        {{0.7, 0.1}, {0.6, -0.3}},
        {{0.0, 0.9}, {0.0, -0.8}},
        {{0.3, 0.2}, {0.1, 0.05}},
    };
    for (auto w : {RadialWeight::standard(0.0), RadialWeight::standard(1.0)}) {
        for (int N = 1; N <= 3; ++N) {
            auto e = expand_modified(N);
            for (auto [z, zeta] : pts) {
                Complex base = std::conj(z) * zeta;
                Complex direct = 2.0 * std::pow(1.0 - base, Complex(N, 0.0)) *
                                 kernel_eval(w, z, zeta).value;
                Complex viaexp = expansion_eval(e, w, z, zeta).value;
                CHECK(relc(direct, viaexp) < 1e-6);
            }
        }
    }
}

TEST_CASE("normalized expansion coefficients stay bounded") {
    auto w0 = RadialWeight::standard(0.0);
    auto e1 = expand_modified(1);
    std::vector<std::int64_t> grid;
    for (std::int64_t k = 1; k <= 1000; k = std::max<std::int64_t>(k + 1, k * 5 / 4))
        grid.push_back(k);
    auto r = expansion_coeff_bound(e1, w0, grid);
    for (const auto& row : r.rows) {
        double k = row.key;
        CHECK(rel(row.lhs, k / (k + 1.0)) < 1e-8);  // 2 * omega_{2k+1} * k
        CHECK(row.lhs <= 1.0 + 1e-12);
    }
    CHECK(r.notes.back() == "bounded");

    auto e2 = expand_modified(2);
    std::vector<std::int64_t> grid2(grid.begin() + 1, grid.end());
    auto r2 = expansion_coeff_bound(e2, w0, grid2);
    for (const auto& row : r2.rows) CHECK(row.lhs <= 4.0);
    CHECK(r2.notes.back() == "bounded");
}

TEST_CASE("expansion serializes with symbolic moment references") {
    auto j = to_json(expand_modified(2));
    CHECK(j["order"] == 2);
    CHECK(j["terms"].size() == 2);
    CHECK(j["constraints"]["max_y"] == 4);
    // weight-independent: no numeric moment values, only (n,y)/x references
    CHECK(j["head"].size() == 2);
}

TEST_CASE("modified kernel norm closed forms") {
    auto w0 = RadialWeight::standard(0.0);
    double lhs = modified_kernel_norm(w0, w0, {0.9, 0.0}, 2.0, 1);
    CHECK(rel(lhs, -std::log(1.0 - 0.81) / 0.81) < 1e-4);
    CHECK(rel(modified_kernel_norm(w0, w0, {0.0, 0.0}, 2.0, 1), 1.0) < 1e-8);

    auto w1 = RadialWeight::standard(1.0);
    double lhs1 = modified_kernel_norm(w1, w0, {0.9, 0.0}, 2.0, 1);
    CHECK(rel(lhs1, 1.0 / (0.19 * 0.19)) < 2e-3);
}

TEST_CASE("kernel norm bound closed forms") {
    auto w0 = RadialWeight::standard(0.0);
    CHECK(rel(kernel_norm_bound(w0, w0, 0.9, 2.0, 1), -std::log(0.1) + 1.0) < 1e-7);
    CHECK(kernel_norm_bound(w0, w0, 0.0, 2.0, 1) == 1.0);
    double s = 0.8;
    CHECK(rel(kernel_norm_bound(w0, w0, s, 2.0, 2), s - 0.5 * s * s + 1.0) < 1e-7);
}

TEST_CASE("kernel estimate report verdicts") {
    auto w0 = RadialWeight::standard(0.0);
    auto rep = kernel_estimate_report(w0, w0, 2.0, 1, {0.0, 0.5, 0.9, 0.99, 0.999});
    CHECK(rep.two_sided);
    CHECK(rep.verdict.passed);
    CHECK(rep.verdict.band <= 10.0);

    auto exp_nu = RadialWeight::exponential(1.0, 1.0);
    auto upper = kernel_estimate_report(w0, exp_nu, 2.0, 1, {0.0, 0.5, 0.9, 0.99});
    CHECK(!upper.two_sided);
    CHECK(upper.verdict.passed);

    CHECK_THROWS_AS(kernel_estimate_report(w0, w0, 1.5, 1), ValidationError);
    auto explo = kernel_estimate_report(w0, w0, 1.5, 1, {0.0, 0.5, 0.9}, true);
    bool flagged = false;
    for (const auto& n : explo.notes)
        if (n.find("unsupported-regime") != std::string::npos) flagged = true;
    CHECK(flagged);
}

TEST_CASE("Fubini exchange inequality is exact up to quadrature error") {
    auto w = RadialWeight::standard(0.0);
    auto nu = RadialWeight::standard(1.0);
    for (double s : {0.5, 0.9}) {
        for (double p : {2.0, 3.0}) {
            auto inner = [&](double r) {
                return integrate_clustered_right(
                           [&](double t) { return std::pow(w.tail(t), -p); }, 0.0,
                           s * r, 1e-9)
                    .value;
            };
            double lhs = integrate_segment(
                             [&](double r) { return inner(r) * nu.eval(r); }, 0.0,
                             0.999999, 1e-8)
                             .value;
            double rhs = integrate_clustered_right(
                             [&](double t) {
                                 return nu.tail(t) * std::pow(w.tail(t), -p);
                             },
                             0.0, s, 1e-9)
                             .value;
            CHECK(lhs <= rhs * (1.0 + 1e-6));
        }
    }
}
