#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <json.hpp>

#include <ertkit/core.hpp>
#include <ertkit/errors.hpp>
#include <ertkit/experience.hpp>
#include <ertkit/planners/ert.hpp>
#include <ertkit/planners/rrtconnect.hpp>
#include <ertkit/rng.hpp>
#include <ertkit/worlds.hpp>

namespace ertkit::bench
{
enum class PlannerKind
{
  Ert,
  ErtConnect,
  RrtConnect
};

inline const char* ToString(const PlannerKind kind)
{
  switch (kind)
  {
    case PlannerKind::Ert: return "ert";
    case PlannerKind::ErtConnect: return "ertconnect";
    case PlannerKind::RrtConnect: return "rrtconnect";
  }
  return "unknown";
}

inline PlannerKind ParsePlanner(const std::string& name)
{
  if (name == "ert") return PlannerKind::Ert;
  if (name == "ertconnect") return PlannerKind::ErtConnect;
  if (name == "rrtconnect") return PlannerKind::RrtConnect;
  Throw(ErrorCode::InvalidArgument, "unknown planner '" + name + "'");
}

inline bool UsesExperience(const PlannerKind kind)
{
  return kind != PlannerKind::RrtConnect;
}

/// Runs one planner on one query; the baseline ignores the prior.
inline PlanResult RunPlanner(const PlannerKind kind, const QueryInstance& query,
                             const PathExperience* prior, const PlannerParams& params)
{
  if (UsesExperience(kind) && prior == nullptr)
  {
    Throw(ErrorCode::InvalidArgument, "experience planner needs a prior");
  }
  switch (kind)
  {
    case PlannerKind::Ert: return ErtPlan(query, *prior, params);
    case PlannerKind::ErtConnect: return ErtConnectPlan(query, *prior, params);
    case PlannerKind::RrtConnect: return RrtConnectPlan(query, params);
  }
  Throw(ErrorCode::InvalidArgument, "unknown planner");
}

struct BenchmarkRecord
{
  std::string scenario;
  size_t instance = 0;
  PlannerKind planner = PlannerKind::ErtConnect;
  /// 0 for the baseline, which ignores the library.
  size_t lib_size = 0;
  int rep = 0;
  uint64_t seed = 0;
  PlanStatus status = PlanStatus::Timeout;
  SolvedBy solved_by = SolvedBy::None;
  double elapsed_seconds = 0.0;
  double selection_seconds = 0.0;
  uint64_t iterations = 0;
  uint64_t validity_checks = 0;
  /// Filled when BenchOptions::keep_paths is set.
  std::optional<PathExperience> path;

  bool Solved() const { return status == PlanStatus::Solved; }
};

struct BenchOptions
{
  std::vector<PlannerKind> planners{PlannerKind::Ert, PlannerKind::ErtConnect,
                                    PlannerKind::RrtConnect};
  std::vector<size_t> library_sizes{1, 5, 50, 100};
  int repetitions = 5;
  uint64_t seed = 0;
  PlannerParams params;
  /// Worker threads; 0 means hardware concurrency capped by ERTKIT_THREADS.
  unsigned threads = 0;
  bool keep_paths = false;
};

/// Hardware concurrency, capped by the ERTKIT_THREADS environment variable.
inline unsigned DefaultThreads()
{
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("ERTKIT_THREADS"))
  {
    const long value = std::strtol(cap, nullptr, 10);
    if (value > 0)
    {
      threads = std::min(threads, static_cast<unsigned>(value));
    }
  }
  return threads;
}

/// Set id parsed from a "set<k>/..." label, or 0.
inline int SetOfLabel(const std::string& label)
{
  if (label.rfind("set", 0) != 0)
  {
    return 0;
  }
  return std::atoi(label.c_str() + 3);
}

namespace detail
{
struct Job
{
  size_t instance;
  size_t planner;
  size_t lib_size;
  int rep;
};

inline std::tuple<size_t, size_t, size_t, int> SortKey(const BenchmarkRecord& r)
{
  return {r.instance, static_cast<size_t>(r.planner), r.lib_size, r.rep};
}
}  // namespace detail

/// One record per (instance, planner, library prefix, repetition); the
/// baseline gets one record per (instance, repetition) with lib_size 0.
/// Records come back sorted, independent of thread scheduling.
inline std::vector<BenchmarkRecord> RunBenchmark(const std::vector<QueryInstance>& suite,
                                                 const ExperienceLibrary& library,
                                                 const BenchOptions& options)
{
  if (options.repetitions < 1)
  {
    Throw(ErrorCode::InvalidArgument, "repetitions must be >= 1");
  }
  options.params.Validate();
  std::vector<detail::Job> jobs;
  for (size_t instance = 0; instance < suite.size(); instance++)
  {
    for (size_t planner = 0; planner < options.planners.size(); planner++)
    {
      const PlannerKind kind = options.planners[planner];
      std::vector<size_t> sizes{0};
      if (UsesExperience(kind))
      {
        sizes = options.library_sizes;
        for (const size_t size : sizes)
        {
          if (size < 1 || size > library.Size())
          {
            Throw(ErrorCode::InvalidArgument,
                  "library size " + std::to_string(size) + " outside 1.."
                      + std::to_string(library.Size()));
          }
        }
      }
      for (const size_t size : sizes)
      {
        for (int rep = 0; rep < options.repetitions; rep++)
        {
          jobs.push_back({instance, planner, size, rep});
        }
      }
    }
  }

  std::vector<BenchmarkRecord> records(jobs.size());
  const auto run_job = [&](const size_t job_index) {
    const detail::Job& job = jobs[job_index];
    const QueryInstance& query = suite[job.instance];
    const PlannerKind kind = options.planners[job.planner];
    BenchmarkRecord& record = records[job_index];
    record.scenario = query.label;
    record.instance = job.instance;
    record.planner = kind;
    record.lib_size = job.lib_size;
    record.rep = job.rep;
    record.seed = DeriveSeed(options.seed, {job.instance, static_cast<uint64_t>(kind),
                                            job.lib_size, static_cast<uint64_t>(job.rep)});
    PlannerParams params = options.params;
    params.seed = record.seed;

    const PathExperience* prior = nullptr;
    if (UsesExperience(kind))
    {
      const auto begin = std::chrono::steady_clock::now();
      prior = &library[SelectExperienceIndex(library, query.q_start, query.q_goal, job.lib_size)];
      record.selection_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
    }
    const auto begin = std::chrono::steady_clock::now();
    PlanResult result = RunPlanner(kind, query, prior, params);
    record.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
    record.status = result.status;
    record.solved_by = result.stats.solved_by;
    record.iterations = result.stats.iterations;
    record.validity_checks = result.stats.validity_checks;
    if (options.keep_paths)
    {
      record.path = std::move(result.path);
    }
  };

  const unsigned threads =
      std::max(1u, std::min<unsigned>(options.threads ? options.threads : DefaultThreads(),
                                      static_cast<unsigned>(std::max<size_t>(jobs.size(), 1))));
  if (threads == 1)
  {
    for (size_t idx = 0; idx < jobs.size(); idx++)
    {
      run_job(idx);
    }
  }
  else
  {
    std::atomic<size_t> next{0};
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned w = 0; w < threads; w++)
    {
      workers.emplace_back([&, w] {
        try
        {
          for (size_t idx = next++; idx < jobs.size(); idx = next++)
          {
            run_job(idx);
          }
        }
        catch (...)
        {
          errors[w] = std::current_exception();
          next = jobs.size();
        }
      });
    }
    for (auto& worker : workers)
    {
      worker.join();
    }
    for (const auto& error : errors)
    {
      if (error)
      {
        std::rethrow_exception(error);
      }
    }
  }
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return detail::SortKey(a) < detail::SortKey(b);
  });
  return records;
}

inline constexpr const char* kCsvHeader =
    "scenario,planner,lib_size,rep,seed,status,elapsed_s,iterations,validity_checks";

/// With include_timing false the elapsed column reads "NA", which makes the
/// output a pure function of seeds and iteration budgets.
inline std::string RecordsToCsv(const std::vector<BenchmarkRecord>& records,
                                const bool include_timing = true)
{
  std::ostringstream out;
  out << kCsvHeader << "\n";
  char elapsed[64];
  for (const auto& r : records)
  {
    if (include_timing)
    {
      std::snprintf(elapsed, sizeof(elapsed), "%.6f", r.elapsed_seconds);
    }
    else
    {
      std::snprintf(elapsed, sizeof(elapsed), "NA");
    }
    out << r.scenario << "," << ToString(r.planner) << "," << r.lib_size << "," << r.rep << ","
        << r.seed << "," << ToString(r.status) << "," << elapsed << "," << r.iterations << ","
        << r.validity_checks << "\n";
  }
  return out.str();
}

/// Sample quantile with linear interpolation between order statistics
/// (h = (n - 1) q).
inline double Quantile(std::vector<double> values, const double q)
{
  if (values.empty())
  {
    Throw(ErrorCode::InvalidArgument, "quantile of an empty sample");
  }
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const size_t lo = static_cast<size_t>(std::floor(h));
  const size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

struct SummaryRow
{
  PlannerKind planner = PlannerKind::ErtConnect;
  int set_id = 0;
  size_t lib_size = 0;
  size_t runs = 0;
  size_t solved = 0;
  size_t timeouts = 0;
  size_t invalid = 0;
  size_t prior_valid = 0;
  double success_rate = 0.0;
  /// Solve-time statistics over solved runs; unset when none solved.
  std::optional<double> median_seconds;
  std::optional<double> mean_seconds;
  std::optional<double> p95_seconds;
  double mean_selection_seconds = 0.0;
};

/// Rows keyed and ordered by (planner, set, library size).
inline std::vector<SummaryRow> Summarize(const std::vector<BenchmarkRecord>& records)
{
  if (records.empty())
  {
    Throw(ErrorCode::EmptyRecords, "nothing to summarize");
  }
  struct Bucket
  {
    SummaryRow row;
    std::vector<double> times;
    double selection_total = 0.0;
  };
  std::map<std::tuple<int, int, size_t>, Bucket> buckets;
  for (const auto& r : records)
  {
    const int set_id = SetOfLabel(r.scenario);
    Bucket& bucket = buckets[{static_cast<int>(r.planner), set_id, r.lib_size}];
    bucket.row.planner = r.planner;
    bucket.row.set_id = set_id;
    bucket.row.lib_size = r.lib_size;
    bucket.row.runs++;
    bucket.selection_total += r.selection_seconds;
    switch (r.status)
    {
      case PlanStatus::Solved:
        bucket.row.solved++;
        bucket.times.push_back(r.elapsed_seconds);
        bucket.row.prior_valid += r.solved_by == SolvedBy::PriorValid ? 1 : 0;
        break;
      case PlanStatus::Timeout: bucket.row.timeouts++; break;
      case PlanStatus::InvalidQuery: bucket.row.invalid++; break;
    }
  }
  std::vector<SummaryRow> rows;
  for (auto& [key, bucket] : buckets)
  {
    SummaryRow row = bucket.row;
    row.success_rate = static_cast<double>(row.solved) / static_cast<double>(row.runs);
    row.mean_selection_seconds = bucket.selection_total / static_cast<double>(row.runs);
    if (!bucket.times.empty())
    {
      double total = 0.0;
      for (const double t : bucket.times)
      {
        total += t;
      }
      row.mean_seconds = total / static_cast<double>(bucket.times.size());
      row.median_seconds = Quantile(bucket.times, 0.5);
      row.p95_seconds = Quantile(bucket.times, 0.95);
    }
    rows.push_back(row);
  }
  return rows;
}

inline nlohmann::json SummaryToJson(const std::vector<SummaryRow>& rows)
{
  nlohmann::json out = nlohmann::json::array();
  const auto optional_number = [](const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  for (const auto& row : rows)
  {
    out.push_back({{"planner", ToString(row.planner)},
                   {"set", row.set_id},
                   {"lib_size", row.lib_size},
                   {"runs", row.runs},
                   {"solved", row.solved},
                   {"timeouts", row.timeouts},
                   {"invalid", row.invalid},
                   {"prior_valid", row.prior_valid},
                   {"success_rate", row.success_rate},
                   {"median_s", optional_number(row.median_seconds)},
                   {"mean_s", optional_number(row.mean_seconds)},
                   {"p95_s", optional_number(row.p95_seconds)},
                   {"mean_selection_s", row.mean_selection_seconds}});
  }
  return out;
}
}  // namespace ertkit::bench
