#pragma once

// Best-first branch-and-bound over cubic cells of R^3, shared by the rotation
// and translation searches. A problem supplies the root cell, an admissibility
// test, batched upper bounds for the eight children of a cell, and the
// objective at a cell's center (the lower bound). The loop owns the queue,
// pruning, termination and bookkeeping.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <queue>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "tivreg/geometry.hpp"
#include "tivreg/kernels.hpp"

namespace tivreg {

enum class SearchStatus {
  Optimal,     // final upper bound - best count <= gap
  BestEffort,  // a cell hit the depth limit before its bound was resolved
};

std::string_view to_string(SearchStatus status);

struct SearchConfig {
  std::size_t gap = 0;
  int max_depth = 25;
  BoundEvaluation bound = BoundEvaluation::Refined;
  Execution execution = Execution::Parallel;
  bool record_trace = true;
  // Randomized bound audit: for every enqueued cell, evaluate the objective at
  // this many uniform samples inside it and count samples above the bound.
  std::size_t audit_samples = 0;
  std::uint64_t audit_seed = 0;
};

struct TracePoint {
  std::size_t iteration = 0;
  double seconds = 0.0;
  std::size_t upper = 0;
  std::size_t lower = 0;
};

struct SearchStats {
  std::size_t enqueued = 0;
  std::size_t pruned = 0;
  int deepest = 0;
  std::size_t audit_checks = 0;
  std::size_t audit_violations = 0;
};

struct SearchCube {
  Vector3 center = Vector3::Zero();
  double half_side = 1.0;
  int depth = 0;

  std::array<SearchCube, 8> split() const {
    std::array<SearchCube, 8> out;
    const double h = 0.5 * half_side;
    for (int o = 0; o < 8; ++o) {
      const Vector3 offset((o & 1) ? h : -h, (o & 2) ? h : -h, (o & 4) ? h : -h);
      out[static_cast<std::size_t>(o)] = SearchCube{center + offset, h, depth + 1};
    }
    return out;
  }
};

struct BnbOutcome {
  Vector3 best_parameter = Vector3::Zero();
  std::size_t best_count = 0;
  std::size_t final_upper_bound = 0;
  std::size_t iterations = 0;
  SearchStatus status = SearchStatus::Optimal;
  std::vector<TracePoint> trace;
  SearchStats stats;
};

/// Problem requirements:
///   SearchCube root() const;
///   bool admissible(const SearchCube&) const;
///   std::vector<std::size_t> upper_bounds(std::span<const SearchCube>) const;
///   std::size_t lower_bound(const SearchCube&, std::size_t upper, Vector3& parameter) const;
///   std::size_t objective_at(const Vector3& parameter) const;   // audit only
template <class Problem>
BnbOutcome best_first_search(const Problem& problem, const SearchConfig& config) {
  struct Entry {
    std::size_t upper;
    std::size_t lower;  // objective at the cell's own sample point
    std::uint64_t seq;
    SearchCube cube;
  };
  // Highest bound first; ties go to the better sample, then the deeper cell,
  // then insertion order.
  const auto lower_priority = [](const Entry& a, const Entry& b) {
    if (a.upper != b.upper) return a.upper < b.upper;
    if (a.lower != b.lower) return a.lower < b.lower;
    if (a.cube.depth != b.cube.depth) return a.cube.depth < b.cube.depth;
    return a.seq > b.seq;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(lower_priority)> queue(lower_priority);

  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

  BnbOutcome out;
  std::mt19937_64 audit_rng(config.audit_seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const auto audit = [&](const SearchCube& cube, std::size_t upper) {
    for (std::size_t s = 0; s < config.audit_samples; ++s) {
      const Vector3 offset(unit(audit_rng), unit(audit_rng), unit(audit_rng));
      ++out.stats.audit_checks;
      if (problem.objective_at(cube.center + cube.half_side * offset) > upper) ++out.stats.audit_violations;
    }
  };

  std::uint64_t seq = 0;
  const SearchCube root = problem.root();
  bool have_parameter = false;
  std::size_t unresolved = 0;  // largest bound of a cell left unsplit at max depth
  const auto sample = [&](const SearchCube& cube, std::size_t upper) {
    Vector3 parameter;
    const std::size_t lower = problem.lower_bound(cube, upper, parameter);
    if (lower > out.best_count || !have_parameter) {
      out.best_count = std::max(out.best_count, lower);
      out.best_parameter = parameter;
      have_parameter = true;
    }
    return lower;
  };
  if (problem.admissible(root)) {
    const std::array<SearchCube, 1> roots{root};
    const std::size_t upper = problem.upper_bounds(roots)[0];
    if (config.audit_samples > 0) audit(root, upper);
    queue.push(Entry{upper, sample(root, upper), seq++, root});
    ++out.stats.enqueued;
  }

  std::size_t last_upper = 0;
  std::size_t last_lower = 0;
  const auto global_upper = [&] {
    std::size_t u = std::max(out.best_count, unresolved);
    if (!queue.empty()) u = std::max(u, queue.top().upper);
    return u;
  };
  const auto record = [&](bool force) {
    if (!config.record_trace) return;
    const std::size_t upper = global_upper();
    if (force || out.trace.empty() || upper != last_upper || out.best_count != last_lower) {
      out.trace.push_back(TracePoint{out.iterations, elapsed(), upper, out.best_count});
      last_upper = upper;
      last_lower = out.best_count;
    }
  };
  record(true);

  std::vector<SearchCube> children;
  children.reserve(8);
  while (!queue.empty()) {
    const Entry top = queue.top();
    if (top.upper <= out.best_count + config.gap) break;
    queue.pop();
    ++out.iterations;
    out.stats.deepest = std::max(out.stats.deepest, top.cube.depth);

    if (top.cube.depth >= config.max_depth) {
      if (top.upper > out.best_count) unresolved = std::max(unresolved, top.upper);
      record(false);
      continue;
    }

    children.clear();
    for (const auto& child : top.cube.split()) {
      if (problem.admissible(child)) children.push_back(child);
    }
    const std::vector<std::size_t> uppers = problem.upper_bounds(children);
    for (std::size_t c = 0; c < children.size(); ++c) {
      // A child can never beat its parent's bound, so clamp to it.
      const std::size_t upper = std::min(uppers[c], top.upper);
      if (upper > out.best_count) {
        if (config.audit_samples > 0) audit(children[c], upper);
        queue.push(Entry{upper, sample(children[c], upper), seq++, children[c]});
        ++out.stats.enqueued;
      } else {
        ++out.stats.pruned;
      }
    }
    record(false);
  }

  if (!have_parameter) {
    // Nothing admissible was ever examined; report the root center.
    Vector3 parameter;
    out.best_count = problem.lower_bound(root, 0, parameter);
    out.best_parameter = parameter;
  }
  out.final_upper_bound = global_upper();
  out.status = out.final_upper_bound - out.best_count <= config.gap ? SearchStatus::Optimal : SearchStatus::BestEffort;
  record(true);
  return out;
}

}  // namespace tivreg
