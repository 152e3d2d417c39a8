#pragma once

// Independent jobs (randomized suites, sweeps) run serially or on OpenMP
// threads. Results are stored by job index, so both runners return the same
// vector for deterministic jobs.

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace chemostat {

struct JobResult {
  bool ok = false;
  std::string error;
  std::map<std::string, double> values;
};

/// A job may throw; the runner turns the exception into ok = false.
using Job = std::function<JobResult(std::size_t index)>;

std::vector<JobResult> run_batch_serial(std::size_t n, const Job& job);

/// workers <= 0 uses the OpenMP default thread count.
std::vector<JobResult> run_batch_parallel(std::size_t n, const Job& job, int workers = 0);

}  // namespace chemostat
