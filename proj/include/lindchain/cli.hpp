#pragma once

// Command-line front end: run configuration, parameter sweeps and
// deterministic CSV / JSON tables.

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <iosfwd>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <json.hpp>

#include "lindchain/model.hpp"

namespace lindchain::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr std::size_t kMaxSweepPoints = 1'000'000;

/// Inclusive linear range with `count` points; count == 1 is a scalar.
/// Text form: "x" or "start:stop:count".
template <class T>
struct Range {
  T start{};
  T stop{};
  int count = 1;

  bool ranged() const { return count != 1; }
  bool operator==(const Range&) const = default;
};

using RealRange = Range<double>;
using IntRange = Range<int>;

RealRange parse_real_range(const std::string& text);
IntRange parse_int_range(const std::string& text);
std::vector<double> expand(const RealRange& r);
std::vector<int> expand(const IntRange& r);

enum class Command { params, spectrum, phase_diagram, evolve, entropy, fit, oracle, luttinger };
enum class Format { csv, json };

std::string to_string(Command c);
Command command_from_string(const std::string& s);

struct RunConfig {
  Command command = Command::params;

  // model
  IntRange cells{2, 2, 1};
  RealRange lambda{0.2, 0.2, 1};
  RealRange eta{0.3, 0.3, 1};
  Boundary boundary = Boundary::periodic;
  JumpOrientation orientation = JumpOrientation::standard;
  std::string filling = "half";  // half | all

  // grids
  std::optional<double> t_min;
  std::optional<double> t_max;
  int t_steps = 50;
  bool log_time = false;
  std::string sizes = "half";  // subsystem sizes: half | all | a:b:step | a,b,...
  int k_points = 2048;
  int grid = 101;

  // command specific
  std::string kind = "h_eff";          // spectrum
  std::optional<int> max_excitations;  // spectrum many_body
  std::string observable = "density";  // evolve
  std::string regime = "spatial";      // fit
  std::string check = "all";           // oracle
  double v = 1.0;                      // luttinger
  double g2 = 0.0;
  double gamma = 0.1;
  std::string q = "0.5";

  // output
  std::string out;
  Format format = Format::csv;
  bool gnuplot_header = false;
  int threads = 1;

  bool operator==(const RunConfig&) const = default;
};

nlohmann::ordered_json config_to_json(const RunConfig& c);
/// Keys absent from `j` keep the values already in `base`.
RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});

/// Throws DomainError on inconsistent settings (empty ranges, non-increasing
/// grids, more than two ranged parameters, oversized sweeps).
void validate(const RunConfig& c);

// ---- tables ----------------------------------------------------------------

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// "%.16e" for reals: 17 significant digits.
std::string format_real(double x);

std::string render_csv(const Table& t, const std::vector<std::string>& header_lines,
                       bool gnuplot_header);
std::string render_json(const Table& t, const std::vector<std::string>& header_lines);

// ---- execution ---------------------------------------------------------------

/// Runs `work(i)` for i in [0, n) on `threads` workers and returns the results
/// in index order.
template <class R>
std::vector<R> parallel_map(std::size_t n, int threads, const std::function<R(std::size_t)>& work) {
  std::vector<R> results(n);
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) results[i] = work(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, n); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          results[i] = work(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

/// Executes a validated configuration and returns its table.
Table execute(const RunConfig& c);

/// Full front end. Exit status 0 on success, 1 on usage errors, 2 on
/// numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lindchain::cli
