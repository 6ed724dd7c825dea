#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include "qbell/output.hpp"
#include "qbell/scenario.hpp"

namespace qbell {

struct RunOptions {
  int threads = 1;
  bool fine_grid = false;
};

struct RunResult {
  Table table;
  std::optional<QGrid> grid;  // q-grid task only
};

// Runs fn(i) for i in [0, n) on up to `threads` workers.  Results must be
// written by index; the first failure by index is rethrown.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

RunResult run_scenario(const Scenario& s, const RunOptions& opt);

// Writes the outputs under out_dir and returns the written paths.
std::vector<std::filesystem::path> write_outputs(const Scenario& s, const RunResult& r,
                                                 const std::filesystem::path& out_dir);

}  // namespace qbell
