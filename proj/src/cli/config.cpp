#include <cmath>
#include <sstream>

#include "lindchain/cli.hpp"

namespace lindchain::cli {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

double to_real(const std::string& s) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    throw DomainError("not a number: '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(x)) throw DomainError("not a number: '" + s + "'");
  return x;
}

int to_int(const std::string& s) {
  std::size_t used = 0;
  int x = 0;
  try {
    x = std::stoi(s, &used);
  } catch (const std::exception&) {
    throw DomainError("not an integer: '" + s + "'");
  }
  if (used != s.size()) throw DomainError("not an integer: '" + s + "'");
  return x;
}

template <class T, class Parse>
Range<T> parse_range(const std::string& text, Parse parse) {
  const auto parts = split(text, ':');
  if (parts.size() == 1) {
    const T x = parse(parts[0]);
    return {x, x, 1};
  }
  if (parts.size() != 3) throw DomainError("range must be 'value' or 'start:stop:count', got '" + text + "'");
  return {parse(parts[0]), parse(parts[1]), to_int(parts[2])};
}

template <class T>
void check_range(const Range<T>& r, const char* name) {
  if (r.count < 1) throw DomainError(std::string(name) + ": empty range");
  if (r.count == 1 && r.start != r.stop) {
    throw DomainError(std::string(name) + ": a single-point range needs start == stop");
  }
  if (r.count > 1 && !(r.stop > r.start)) throw DomainError(std::string(name) + ": range must be increasing");
}

template <class T>
json range_to_json(const Range<T>& r) {
  if (!r.ranged()) return r.start;
  return {{"start", r.start}, {"stop", r.stop}, {"count", r.count}};
}

template <class T>
Range<T> range_from_json(const json& j) {
  if (j.is_number()) {
    const T x = j.get<T>();
    return {x, x, 1};
  }
  if (j.is_string()) {
    if constexpr (std::is_same_v<T, int>) return parse_int_range(j.get<std::string>());
    else return parse_real_range(j.get<std::string>());
  }
  if (j.is_object()) return {j.at("start").get<T>(), j.at("stop").get<T>(), j.at("count").get<int>()};
  throw DomainError("range must be a number, a string or {start, stop, count}");
}

std::string orientation_name(JumpOrientation o) {
  return o == JumpOrientation::standard ? "standard" : "mirrored";
}

JumpOrientation orientation_from_string(const std::string& s) {
  if (s == "standard") return JumpOrientation::standard;
  if (s == "mirrored") return JumpOrientation::mirrored;
  throw DomainError("unknown jump orientation '" + s + "' (standard | mirrored)");
}

const char* format_name(Format f) { return f == Format::csv ? "csv" : "json"; }

Format format_from_string(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw DomainError("unknown output format '" + s + "' (csv | json)");
}

template <class T>
void read_if(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

template <class T>
void read_optional(const json& j, const char* key, std::optional<T>& field) {
  if (!j.contains(key)) return;
  if (j.at(key).is_null()) field.reset();
  else field = j.at(key).get<T>();
}

template <class T>
json optional_to_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

RealRange parse_real_range(const std::string& text) { return parse_range<double>(text, to_real); }
IntRange parse_int_range(const std::string& text) { return parse_range<int>(text, to_int); }

std::vector<double> expand(const RealRange& r) {
  check_range(r, "range");
  std::vector<double> out;
  for (int i = 0; i < r.count; ++i) {
    out.push_back(r.count == 1 ? r.start
                               : (i == r.count - 1 ? r.stop
                                                   : r.start + (r.stop - r.start) * i / (r.count - 1)));
  }
  return out;
}

std::vector<int> expand(const IntRange& r) {
  check_range(r, "range");
  std::vector<int> out;
  for (int i = 0; i < r.count; ++i) {
    const double x = r.count == 1 ? r.start : r.start + double(r.stop - r.start) * i / (r.count - 1);
    out.push_back(static_cast<int>(std::lround(x)));
  }
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i] == out[i - 1]) throw DomainError("integer range has repeated values");
  }
  return out;
}

std::string to_string(Command c) {
  switch (c) {
    case Command::params: return "params";
    case Command::spectrum: return "spectrum";
    case Command::phase_diagram: return "phase-diagram";
    case Command::evolve: return "evolve";
    case Command::entropy: return "entropy";
    case Command::fit: return "fit";
    case Command::oracle: return "oracle";
    case Command::luttinger: return "luttinger";
  }
  return "unknown";
}

Command command_from_string(const std::string& s) {
  for (Command c : {Command::params, Command::spectrum, Command::phase_diagram, Command::evolve,
                    Command::entropy, Command::fit, Command::oracle, Command::luttinger}) {
    if (to_string(c) == s) return c;
  }
  throw DomainError("unknown command '" + s + "'");
}

ordered_json config_to_json(const RunConfig& c) {
  ordered_json j;
  j["command"] = to_string(c.command);
  j["model"] = {{"cells", range_to_json(c.cells)},
                {"lambda", range_to_json(c.lambda)},
                {"eta", range_to_json(c.eta)},
                {"boundary", to_string(c.boundary)},
                {"orientation", orientation_name(c.orientation)},
                {"filling", c.filling}};
  j["grids"] = {{"t_min", optional_to_json(c.t_min)},
                {"t_max", optional_to_json(c.t_max)},
                {"t_steps", c.t_steps},
                {"log_time", c.log_time},
                {"sizes", c.sizes},
                {"k_points", c.k_points},
                {"grid", c.grid}};
  j["options"] = {{"kind", c.kind},
                  {"max_excitations", optional_to_json(c.max_excitations)},
                  {"observable", c.observable},
                  {"regime", c.regime},
                  {"check", c.check},
                  {"v", c.v},
                  {"g2", c.g2},
                  {"gamma", c.gamma},
                  {"q", c.q}};
  j["output"] = {{"path", c.out},
                 {"format", format_name(c.format)},
                 {"gnuplot_header", c.gnuplot_header},
                 {"threads", c.threads}};
  return j;
}

RunConfig config_from_json(const json& j, RunConfig c) {
  try {
    if (!j.is_object()) throw DomainError("configuration must be a JSON object");
    if (j.contains("command")) c.command = command_from_string(j.at("command").get<std::string>());
    if (j.contains("model")) {
      const json& m = j.at("model");
      if (m.contains("cells")) c.cells = range_from_json<int>(m.at("cells"));
      if (m.contains("lambda")) c.lambda = range_from_json<double>(m.at("lambda"));
      if (m.contains("eta")) c.eta = range_from_json<double>(m.at("eta"));
      if (m.contains("boundary")) c.boundary = boundary_from_string(m.at("boundary").get<std::string>());
      if (m.contains("orientation")) {
        c.orientation = orientation_from_string(m.at("orientation").get<std::string>());
      }
      read_if(m, "filling", c.filling);
    }
    if (j.contains("grids")) {
      const json& g = j.at("grids");
      read_optional(g, "t_min", c.t_min);
      read_optional(g, "t_max", c.t_max);
      read_if(g, "t_steps", c.t_steps);
      read_if(g, "log_time", c.log_time);
      read_if(g, "sizes", c.sizes);
      read_if(g, "k_points", c.k_points);
      read_if(g, "grid", c.grid);
    }
    if (j.contains("options")) {
      const json& o = j.at("options");
      read_if(o, "kind", c.kind);
      read_optional(o, "max_excitations", c.max_excitations);
      read_if(o, "observable", c.observable);
      read_if(o, "regime", c.regime);
      read_if(o, "check", c.check);
      read_if(o, "v", c.v);
      read_if(o, "g2", c.g2);
      read_if(o, "gamma", c.gamma);
      read_if(o, "q", c.q);
    }
    if (j.contains("output")) {
      const json& o = j.at("output");
      read_if(o, "path", c.out);
      if (o.contains("format")) c.format = format_from_string(o.at("format").get<std::string>());
      read_if(o, "gnuplot_header", c.gnuplot_header);
      read_if(o, "threads", c.threads);
    }
  } catch (const json::exception& e) {
    throw DomainError(std::string("bad configuration: ") + e.what());
  }
  return c;
}

namespace {

void require_one_of(const std::string& value, std::initializer_list<const char*> allowed, const char* what) {
  std::string list;
  for (const char* a : allowed) {
    if (value == a) return;
    list += list.empty() ? a : std::string(" | ") + a;
  }
  throw DomainError(std::string("unknown ") + what + " '" + value + "' (" + list + ")");
}

}  // namespace

void validate(const RunConfig& c) {
  check_range(c.cells, "cells");
  check_range(c.lambda, "lambda");
  check_range(c.eta, "eta");
  const int ranged = int(c.cells.ranged()) + int(c.lambda.ranged()) + int(c.eta.ranged());
  if (ranged > 2) throw DomainError("at most two parameters may be ranged");
  const double points = double(c.cells.count) * c.lambda.count * c.eta.count;
  if (points > double(kMaxSweepPoints)) {
    std::ostringstream os;
    os << "sweep of " << points << " points exceeds " << kMaxSweepPoints
       << "; reduce the range counts or split the sweep";
    throw DomainError(os.str());
  }
  if (c.command == Command::phase_diagram) {
    if (c.grid < 2) throw DomainError("phase-diagram: --grid must be at least 2");
    if (double(c.grid) * c.grid > double(kMaxSweepPoints)) {
      throw DomainError("phase-diagram: grid exceeds the sweep limit; use --grid <= 1000");
    }
  }
  if (c.t_steps < 1) throw DomainError("--t-steps must be positive");
  if (c.t_min && *c.t_min < 0.0) throw DomainError("--t-min must be non-negative");
  if (c.t_min && c.t_max && c.t_steps > 1 && !(*c.t_max > *c.t_min)) {
    throw DomainError("time grid must be strictly increasing (t-max > t-min)");
  }
  if (c.log_time && c.t_min && !(*c.t_min > 0.0)) throw DomainError("logarithmic time grid needs t-min > 0");
  if (c.k_points < 2) throw DomainError("--k-points must be at least 2");
  if (c.threads < 0) throw DomainError("--threads must be non-negative");
  if (c.max_excitations && *c.max_excitations < 0) throw DomainError("--max-excitations must be non-negative");
  require_one_of(c.filling, {"half", "all"}, "filling");
  require_one_of(c.kind, {"h_eff", "damping", "rapidities", "dispersion", "many_body"}, "spectrum kind");
  require_one_of(c.observable, {"density", "momentum", "asymmetry"}, "observable");
  require_one_of(c.regime, {"spatial", "short_time", "long_time_gapped", "long_time_gapless"}, "fit regime");
  require_one_of(c.check, {"all", "correlator", "entropy", "spectrum"}, "oracle check");
}

}  // namespace lindchain::cli
