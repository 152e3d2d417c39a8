#include "chemostat/batch.hpp"

#include <exception>

#include <omp.h>

namespace chemostat {

namespace {

JobResult run_one(const Job& job, std::size_t i) {
  try {
    return job(i);
  } catch (const std::exception& e) {
    JobResult r;
    r.error = e.what();
    return r;
  } catch (...) {
    JobResult r;
    r.error = "unknown error";
    return r;
  }
}

}  // namespace

std::vector<JobResult> run_batch_serial(std::size_t n, const Job& job) {
  std::vector<JobResult> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = run_one(job, i);
  return out;
}

std::vector<JobResult> run_batch_parallel(std::size_t n, const Job& job, int workers) {
  std::vector<JobResult> out(n);
  const int threads = workers > 0 ? workers : omp_get_max_threads();
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (long long i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = run_one(job, static_cast<std::size_t>(i));
  }
  return out;
}

}  // namespace chemostat
