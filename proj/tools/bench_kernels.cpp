// Benchmark of the OpenMP-parallel quadrature kernels against the serial
// reference path. Both paths share the deterministic index-ordered reduction,
// so the printed values must agree bit for bit.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "bergman/kernels.hpp"
#include "bergman/operators.hpp"
#include "bergman/parallel.hpp"
#include "bergman/weights.hpp"

using namespace bergman;

namespace {

double time_once(const std::function<double()>& fn, double* value) {
    auto t0 = std::chrono::steady_clock::now();
    *value = fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void bench(const std::string& name, const std::function<double()>& fn) {
    double v_serial = 0.0, v_parallel = 0.0;
    fn();  // warm static tables so neither mode pays first-call setup
    par::set_mode(par::Mode::Serial);
    double t_serial = time_once(fn, &v_serial);
    par::set_mode(par::Mode::OpenMP);
    double t_parallel = time_once(fn, &v_parallel);
    std::printf("%-28s serial %8.3fs  openmp %8.3fs  speedup %5.2fx  %s\n",
                name.c_str(), t_serial, t_parallel, t_serial / t_parallel,
                v_serial == v_parallel ? "bit-identical" : "MISMATCH");
}

}  // namespace

int main() {
    par::init_from_env();
    std::printf("threads: %d\n", par::thread_count());

    bench("modified kernel norm", [] {
        auto w = RadialWeight::standard(1.0);
        auto nu = RadialWeight::standard(0.0);
        // fresh weights each run: caches start cold in both modes
        return modified_kernel_norm(w, nu, Complex(0.995, 0.0), 3.0, 2);
    });

    bench("bulk moment run (2e5)", [] {
        auto w = RadialWeight::log_power(1.0, 1.0);
        auto run = w.moment_run(1.0, 200000);
        return run->back();
    });

    bench("hankel norm m=128", [] {
        auto w = RadialWeight::standard(0.0);
        return hankel_norm(w, SymbolFunction::sign_re(), 2.0, 128,
                           HankelNormMode::Exact2)
            .value;
    });

    bench("projection quadrature", [] {
        auto w = RadialWeight::standard(1.0);
        auto f = SymbolFunction::callable(
            [](Complex z) { return std::exp(z) + std::conj(z) * z; }, "smooth");
        auto out = project(w, f, 32, ProjectPath::Quadrature);
        return std::abs(out.c[3]);
    });

    return 0;
}
