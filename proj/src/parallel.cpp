#include "bergman/parallel.hpp"

#include <omp.h>

#include <atomic>
#include <cstdlib>
#include <string>

namespace bergman::par {

namespace {
std::atomic<Mode> g_mode{Mode::OpenMP};
std::atomic<int> g_threads{0};  // 0 = OpenMP default
}  // namespace

Mode mode() { return g_mode.load(); }
void set_mode(Mode m) { g_mode.store(m); }

int thread_count() {
    int n = g_threads.load();
    return n > 0 ? n : omp_get_max_threads();
}

void set_thread_count(int n) { g_threads.store(n); }

void init_from_env() {
    if (const char* env = std::getenv("BERGMAN_LAB_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) set_thread_count(n);
        if (n == 1) set_mode(Mode::Serial);
    }
}

void for_index(std::size_t n, const std::function<void(std::size_t)>& body) {
    if (mode() == Mode::Serial || omp_in_parallel()) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    // exceptions may not escape an OpenMP region: capture and rethrow.
    // dynamic scheduling balances boundary-clustered node costs; results are
    // written to indexed slots, so scheduling cannot affect values
    std::exception_ptr first_error;
    const long long nn = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 4) num_threads(thread_count())
    for (long long i = 0; i < nn; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(bergman_for_index_error)
            if (!first_error) first_error = std::current_exception();
        }
    }
    if (first_error) std::rethrow_exception(first_error);
}

namespace {
template <typename T>
T pairwise_impl(const T* v, std::size_t n) {
    if (n == 0) return T{};
    if (n <= 8) {
        T s = v[0];
        for (std::size_t i = 1; i < n; ++i) s += v[i];
        return s;
    }
    std::size_t half = n / 2;
    return pairwise_impl(v, half) + pairwise_impl(v + half, n - half);
}
}  // namespace

double pairwise_sum(const std::vector<double>& v) { return pairwise_impl(v.data(), v.size()); }

std::complex<double> pairwise_sum(const std::vector<std::complex<double>>& v) {
    return pairwise_impl(v.data(), v.size());
}

double sum_indexed(std::size_t n, const std::function<double(std::size_t)>& term) {
    std::vector<double> buf(n);
    for_index(n, [&](std::size_t i) { buf[i] = term(i); });
    return pairwise_sum(buf);
}

std::complex<double> sum_indexed_complex(
    std::size_t n, const std::function<std::complex<double>(std::size_t)>& term) {
    std::vector<std::complex<double>> buf(n);
    for_index(n, [&](std::size_t i) { buf[i] = term(i); });
    return pairwise_sum(buf);
}

}  // namespace bergman::par
