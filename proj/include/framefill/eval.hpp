#pragma once

// Scenario evaluation, lambda/k sweeps and CSV reports.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <map>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "framefill/error.hpp"
#include "framefill/judgments.hpp"
#include "framefill/rng.hpp"
#include "framefill/scorers.hpp"

namespace framefill {

struct Tally {
  std::size_t successes = 0;
  std::size_t total = 0;

  double accuracy() const {
    return total == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(total);
  }
};

struct EvalReport {
  std::string scorer;
  double lambda = 0.0;
  int k = 0;
  std::uint64_t seed = 0;
  std::map<std::string, Tally> per_predicate;
  Tally overall;
};

struct EvalOptions {
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  // Echoed into the report only.
  double lambda = 0.0;
};

// A scenario succeeds iff rank() picks its truth index. Scenario i is scored
// with seed derive_seed(options.seed, i), so results do not depend on
// options.jobs.
inline EvalReport evaluate(const Scorer& scorer, std::span<const Scenario> scenarios,
                           const EvalOptions& options = {}) {
  if (scenarios.empty()) throw Error(ErrorCode::kEmptyScenarioSet, "nothing to evaluate");

  std::vector<char> hit(scenarios.size(), 0);
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < scenarios.size(); i += stride) {
      const auto& s = scenarios[i];
      hit[i] = rank(scorer, s.candidates, derive_seed(options.seed, i)) == s.truth_index;
    }
  };
  const std::size_t jobs = std::clamp<std::size_t>(options.jobs, 1, scenarios.size());
  if (jobs == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    std::vector<std::exception_ptr> errors(jobs);
    for (std::size_t t = 0; t < jobs; ++t) {
      pool.emplace_back([&, t] {
        try {
          work(t, jobs);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    pool.clear();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  EvalReport report;
  report.scorer = scorer.name();
  report.lambda = options.lambda;
  report.k = static_cast<int>(scenarios.front().k());
  report.seed = options.seed;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    auto& t = report.per_predicate[scenarios[i].group.predicate];
    ++t.total;
    ++report.overall.total;
    if (hit[i]) {
      ++t.successes;
      ++report.overall.successes;
    }
  }
  return report;
}

// --- sweeps ----------------------------------------------------------------------

struct SweepConfig {
  std::vector<double> lambdas = {0.6, 0.8, 1.0, 1.2, 1.4, 1.6, 1.8, 2.0};
  std::vector<int> ks = {4, 6, 8, 10, 20, 30, 40};
  // k used by the lambda sweep, lambda used by the k sweep.
  int fixed_k = 6;
  double fixed_lambda = 1.0;
  std::size_t scenarios = 500;
  std::uint64_t seed = 0;
  unsigned jobs = 1;

  void validate() const {
    for (double l : lambdas) validate_lambda(l);
    validate_lambda(fixed_lambda);
    for (int k : ks) {
      if (k < 2) throw Error(ErrorCode::kInvalidArgument, "every k must be >= 2");
    }
    if (fixed_k < 2) throw Error(ErrorCode::kInvalidArgument, "fixed k must be >= 2");
    if (scenarios == 0) throw Error(ErrorCode::kInvalidArgument, "scenarios per cell must be > 0");
  }
};

struct SweepCell {
  double lambda = 0.0;
  int k = 0;
  std::uint64_t seed = 0;
  bool skipped = false;
  std::string skip_reason;
  // One per scorer, in scorer order; empty when skipped.
  std::vector<EvalReport> reports;
};

inline std::uint64_t cell_seed(std::uint64_t master, double lambda, int k) {
  const auto milli = static_cast<std::uint64_t>(std::llround(lambda * 1000.0));
  return derive_seed(derive_seed(master, milli), static_cast<std::uint64_t>(k));
}

// The (lambda, fixed_k) cells followed by the (fixed_lambda, k) cells, with
// the shared cell listed once.
inline std::vector<std::pair<double, int>> sweep_cells(const SweepConfig& cfg) {
  std::vector<std::pair<double, int>> cells;
  auto push = [&](double l, int k) {
    for (const auto& [cl, ck] : cells) {
      if (std::llround(cl * 1000.0) == std::llround(l * 1000.0) && ck == k) return;
    }
    cells.emplace_back(l, k);
  };
  for (double l : cfg.lambdas) push(l, cfg.fixed_k);
  for (int k : cfg.ks) push(cfg.fixed_lambda, k);
  return cells;
}

// Scenarios are regenerated per cell from a seed derived from (master seed,
// lambda, k) and shared by all scorers in that cell. A cell that cannot be
// populated is marked skipped.
inline std::vector<SweepCell> sweep(std::span<const Scorer* const> scorers,
                                    const std::vector<PlausibilityRecord>& records,
                                    const SweepConfig& cfg) {
  cfg.validate();
  std::vector<SweepCell> out;
  for (const auto& [lambda, k] : sweep_cells(cfg)) {
    SweepCell cell{lambda, k, cell_seed(cfg.seed, lambda, k), false, {}, {}};
    std::vector<Scenario> scenarios;
    try {
      scenarios = make_scenarios(split(records, lambda), k, cfg.scenarios, cell.seed);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInsufficientData) throw;
      cell.skipped = true;
      cell.skip_reason = e.what();
    }
    if (!cell.skipped) {
      for (const Scorer* s : scorers) {
        cell.reports.push_back(evaluate(*s, scenarios, {cell.seed, cfg.jobs, lambda}));
      }
    }
    out.push_back(std::move(cell));
  }
  return out;
}

// --- CSV ---------------------------------------------------------------------------

inline constexpr std::string_view kReportHeader =
    "scorer,lambda,k,predicate,accuracy,n_scenarios,seed,skipped";

namespace detail {

inline std::string format_number(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

inline void write_row(std::ostream& out, const std::string& scorer, double lambda, int k,
                      const std::string& predicate, const Tally* tally, std::uint64_t seed) {
  out << scorer << ',' << format_number("%g", lambda) << ',' << k << ',' << predicate << ',';
  if (tally != nullptr) {
    out << format_number("%.6f", tally->accuracy()) << ',' << tally->total << ',' << seed << ",0\n";
  } else {
    out << ",0," << seed << ",1\n";
  }
}

}  // namespace detail

// Per-predicate rows in predicate order, then the OVERALL row.
inline void write_report_rows(std::ostream& out, const EvalReport& r) {
  for (const auto& [pred, t] : r.per_predicate) {
    detail::write_row(out, r.scorer, r.lambda, r.k, pred, &t, r.seed);
  }
  detail::write_row(out, r.scorer, r.lambda, r.k, "OVERALL", &r.overall, r.seed);
}

inline void write_report_csv(std::ostream& out, const EvalReport& r) {
  out << kReportHeader << '\n';
  write_report_rows(out, r);
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells,
                            std::span<const Scorer* const> scorers) {
  out << kReportHeader << '\n';
  for (const auto& cell : cells) {
    if (cell.skipped) {
      for (const Scorer* s : scorers) {
        detail::write_row(out, s->name(), cell.lambda, cell.k, "OVERALL", nullptr, cell.seed);
      }
      continue;
    }
    for (const auto& r : cell.reports) write_report_rows(out, r);
  }
}

}  // namespace framefill
