#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace bergman::par {

enum class Mode { Serial, OpenMP };

/// Process-wide execution mode. Defaults to OpenMP with the thread count
/// taken from BERGMAN_LAB_THREADS (falling back to the OpenMP default).
Mode mode();
void set_mode(Mode m);
int thread_count();
void set_thread_count(int n);

/// Reads BERGMAN_LAB_THREADS and applies it. Called once by the CLI main;
/// tests set the mode explicitly instead.
void init_from_env();

/// Parallel loop over [0, n). The body must only write to state indexed by i.
void for_index(std::size_t n, const std::function<void(std::size_t)>& body);

/// Deterministic pairwise sum in index order; the result does not depend on
/// the execution mode or thread count.
double pairwise_sum(const std::vector<double>& v);
std::complex<double> pairwise_sum(const std::vector<std::complex<double>>& v);

/// Evaluates term(i) for i in [0, n) in parallel, then pairwise-sums the
/// buffer serially in index order.
double sum_indexed(std::size_t n, const std::function<double(std::size_t)>& term);
std::complex<double> sum_indexed_complex(
    std::size_t n, const std::function<std::complex<double>(std::size_t)>& term);

}  // namespace bergman::par
