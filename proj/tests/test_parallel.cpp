#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "bergman/kernels.hpp"
#include "bergman/operators.hpp"
#include "bergman/parallel.hpp"
#include "bergman/weight_classes.hpp"

using namespace bergman;

namespace {
struct ModeGuard {
    par::Mode saved;
    ModeGuard() : saved(par::mode()) {}
    ~ModeGuard() { par::set_mode(saved); }
};
}  // namespace

TEST_CASE("pairwise sum matches plain summation") {
    std::vector<double> v;
    for (int i = 0; i < 1000; ++i) v.push_back(std::sin(i) / (i + 1.0));
    double plain = 0.0;
    for (double x : v) plain += x;
    CHECK(std::abs(par::pairwise_sum(v) - plain) < 1e-12);
    CHECK(par::pairwise_sum(std::vector<double>{}) == 0.0);
}

TEST_CASE("serial and OpenMP modes produce bit-identical results") {
    ModeGuard guard;
    auto compute = [] {
        // fresh weight objects so caches cannot leak across modes
        auto w = RadialWeight::standard(1.0);
        auto nu = RadialWeight::standard(0.0);
        double a = modified_kernel_norm(w, nu, Complex(0.9, 0.0), 2.0, 1);
        double b = w.moment(17.0);
        double c = hankel_norm(w, SymbolFunction::sign_re(), 2.0, 48,
                               HankelNormMode::Exact2)
                       .value;
        auto run = w.moment_run(1.0, 5000);
        return std::tuple{a, b, c, run->at(4999)};
    };
    par::set_mode(par::Mode::Serial);
    auto serial = compute();
    par::set_mode(par::Mode::OpenMP);
    auto parallel = compute();
    CHECK(std::get<0>(serial) == std::get<0>(parallel));
    CHECK(std::get<1>(serial) == std::get<1>(parallel));
    CHECK(std::get<2>(serial) == std::get<2>(parallel));
    CHECK(std::get<3>(serial) == std::get<3>(parallel));
}

TEST_CASE("exceptions propagate out of parallel loops") {
    ModeGuard guard;
    par::set_mode(par::Mode::OpenMP);
    CHECK_THROWS_AS(par::for_index(64,
                                   [](std::size_t i) {
                                       if (i == 33) throw DomainError("boom");
                                   }),
                    DomainError);
}

TEST_CASE("concurrent cache fills agree and are deterministic") {
    auto w = RadialWeight::log_power(0.5, 1.0);
    std::vector<double> vals(64);
    par::for_index(64, [&](std::size_t i) { vals[i] = w.moment(4.25); });
    for (double v : vals) CHECK(v == vals[0]);
}

TEST_CASE("thread configuration from the environment") {
    setenv("BERGMAN_LAB_THREADS", "2", 1);
    par::init_from_env();
    CHECK(par::thread_count() == 2);
    unsetenv("BERGMAN_LAB_THREADS");
    par::set_thread_count(0);
    par::set_mode(par::Mode::OpenMP);
}
