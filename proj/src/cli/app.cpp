#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "lindchain/cli.hpp"

namespace lindchain::cli {

namespace {

struct FlagSpec {
  const char* name;
  const char* help;
  bool is_switch;
  std::function<void(RunConfig&, const std::string&)> apply;
};

double real_arg(const std::string& s) { return parse_real_range(s).start; }

int int_arg(const std::string& s) {
  const IntRange r = parse_int_range(s);
  if (r.ranged()) throw DomainError("expected a single integer, got '" + s + "'");
  return r.start;
}

std::optional<double> scalar_real(const std::string& s) {
  const RealRange r = parse_real_range(s);
  if (r.ranged()) throw DomainError("expected a single number, got '" + s + "'");
  return r.start;
}

const std::vector<FlagSpec>& flag_specs() {
  static const std::vector<FlagSpec> specs = {
      {"--cells", "unit cells N, or start:stop:count", false,
       [](RunConfig& c, const std::string& s) { c.cells = parse_int_range(s); }},
      {"--lambda", "lambda, or start:stop:count", false,
       [](RunConfig& c, const std::string& s) { c.lambda = parse_real_range(s); }},
      {"--eta", "eta, or start:stop:count", false,
       [](RunConfig& c, const std::string& s) { c.eta = parse_real_range(s); }},
      {"--boundary", "periodic | open", false,
       [](RunConfig& c, const std::string& s) { c.boundary = boundary_from_string(s); }},
      {"--orientation", "jump orientation: standard | mirrored", false,
       [](RunConfig& c, const std::string& s) {
         if (s == "standard") c.orientation = JumpOrientation::standard;
         else if (s == "mirrored") c.orientation = JumpOrientation::mirrored;
         else throw DomainError("unknown jump orientation '" + s + "' (standard | mirrored)");
       }},
      {"--filling", "initial state: half | all", false, [](RunConfig& c, const std::string& s) { c.filling = s; }},
      {"--t-min", "first time of the grid", false,
       [](RunConfig& c, const std::string& s) { c.t_min = scalar_real(s); }},
      {"--t-max", "last time of the grid", false,
       [](RunConfig& c, const std::string& s) { c.t_max = scalar_real(s); }},
      {"--t-steps", "number of grid times", false,
       [](RunConfig& c, const std::string& s) { c.t_steps = int_arg(s); }},
      {"--log-time", "geometric time grid", true, [](RunConfig& c, const std::string&) { c.log_time = true; }},
      {"--sizes", "subsystem sizes: half | all | start:stop:step | l1,l2,...", false,
       [](RunConfig& c, const std::string& s) { c.sizes = s; }},
      {"--k-points", "momentum samples for dispersion scans", false,
       [](RunConfig& c, const std::string& s) { c.k_points = int_arg(s); }},
      {"--grid", "phase-diagram points per axis", false,
       [](RunConfig& c, const std::string& s) { c.grid = int_arg(s); }},
      {"--kind", "spectrum: h_eff | damping | rapidities | dispersion | many_body", false,
       [](RunConfig& c, const std::string& s) { c.kind = s; }},
      {"--max-excitations", "many_body: bound on |S| + |S'|", false,
       [](RunConfig& c, const std::string& s) { c.max_excitations = int_arg(s); }},
      {"--observable", "evolve: density | momentum | asymmetry", false,
       [](RunConfig& c, const std::string& s) { c.observable = s; }},
      {"--regime", "fit: spatial | short_time | long_time_gapped | long_time_gapless", false,
       [](RunConfig& c, const std::string& s) { c.regime = s; }},
      {"--check", "oracle: all | correlator | entropy | spectrum", false,
       [](RunConfig& c, const std::string& s) { c.check = s; }},
      {"--v", "luttinger: sound velocity", false, [](RunConfig& c, const std::string& s) { c.v = real_arg(s); }},
      {"--g2", "luttinger: interaction strength", false,
       [](RunConfig& c, const std::string& s) { c.g2 = real_arg(s); }},
      {"--gamma", "luttinger: loss rate", false,
       [](RunConfig& c, const std::string& s) { c.gamma = real_arg(s); }},
      {"--q", "luttinger: momenta, q1,q2,... or start:stop:count", false,
       [](RunConfig& c, const std::string& s) { c.q = s; }},
      {"--out", "output file (default: standard output)", false,
       [](RunConfig& c, const std::string& s) { c.out = s; }},
      {"--format", "csv | json", false,
       [](RunConfig& c, const std::string& s) {
         if (s == "csv") c.format = Format::csv;
         else if (s == "json") c.format = Format::json;
         else throw DomainError("unknown output format '" + s + "' (csv | json)");
       }},
      {"--gnuplot-header", "emit a '# columns:' comment line", true,
       [](RunConfig& c, const std::string&) { c.gnuplot_header = true; }},
      {"--threads", "worker threads for sweeps (0 = all cores)", false,
       [](RunConfig& c, const std::string& s) { c.threads = int_arg(s); }},
  };
  return specs;
}

std::string command_line(int argc, const char* const* argv) {
  std::string s = "lindchain";
  for (int i = 1; i < argc; ++i) {
    s += ' ';
    s += argv[i];
  }
  return s;
}

bool has_failure(const Table& t) {
  const auto it = std::find(t.columns.begin(), t.columns.end(), "status");
  if (it == t.columns.end()) return false;
  const auto col = static_cast<std::size_t>(it - t.columns.begin());
  for (const auto& row : t.rows) {
    if (std::get<std::string>(row[col]) == "fail") return true;
  }
  return false;
}

std::string render(const RunConfig& c, const Table& table, const std::vector<std::string>& header) {
  const bool single_params = c.command == Command::params && table.rows.size() == 1;
  if (single_params) {
    nlohmann::ordered_json j;
    for (std::size_t i = 0; i < table.columns.size(); ++i) j[table.columns[i]] = std::get<double>(table.rows[0][i]);
    return j.dump(2) + '\n';
  }
  return c.format == Format::csv ? render_csv(table, header, c.gnuplot_header) : render_json(table, header);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact dynamics of a lossy dimerized fermion chain", "lindchain"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::map<std::string, std::string> raw;
  std::string config_path;
  bool dump_config = false;
  std::map<std::string, std::pair<CLI::App*, std::vector<std::pair<const FlagSpec*, CLI::Option*>>>> subs;

  const std::vector<std::pair<Command, const char*>> commands = {
      {Command::params, "derived couplings"},
      {Command::spectrum, "single-particle and many-body spectra"},
      {Command::phase_diagram, "phase class and gap over the (lambda, eta) square"},
      {Command::evolve, "density and momentum occupations in time"},
      {Command::entropy, "block entropy S(t, l)"},
      {Command::fit, "spatial and temporal entropy fits"},
      {Command::oracle, "compare against the Fock-space reference"},
      {Command::luttinger, "bosonized short-time entanglement"},
  };
  for (const auto& [cmd, help] : commands) {
    const std::string name = to_string(cmd);
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON configuration file (flags override it)");
    sub->add_flag("--dump-config", dump_config, "print the effective configuration as JSON and exit");
    auto& entry = subs[name];
    entry.first = sub;
    for (const FlagSpec& f : flag_specs()) {
      CLI::Option* opt = f.is_switch ? sub->add_flag(f.name, f.help)
                                     : sub->add_option(f.name, raw[f.name], f.help);
      entry.second.emplace_back(&f, opt);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  RunConfig config;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw DomainError("cannot read configuration file '" + config_path + "'");
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw DomainError("configuration file '" + config_path + "' is not valid JSON: " + e.what());
      }
      config = config_from_json(j);
    }
    for (const auto& [name, entry] : subs) {
      if (!entry.first->parsed()) continue;
      config.command = command_from_string(name);
      for (const auto& [spec, opt] : entry.second) {
        if (opt->count() > 0) spec->apply(config, raw[spec->name]);
      }
    }
    validate(config);
  } catch (const std::exception& e) {
    err << "lindchain: " << e.what() << '\n';
    return 1;
  }

  if (dump_config) {
    out << config_to_json(config).dump(2) << '\n';
    return 0;
  }

  if (config.threads == 0) config.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  std::string document;
  bool failed_check = false;
  try {
    const Table table = execute(config);
    failed_check = has_failure(table);
    const std::vector<std::string> header = {
        std::string("lindchain ") + kVersion,
        "command: " + command_line(argc, argv),
        "config: " + config_to_json(config).dump(),
    };
    document = render(config, table, header);
  } catch (const DomainError& e) {
    err << "lindchain: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "lindchain: numerical failure: " << e.what() << '\n';
    return 2;
  }

  if (config.out.empty()) {
    out << document;
  } else {
    std::ofstream file(config.out, std::ios::binary | std::ios::trunc);
    if (file) file << document;
    if (!file || !file.flush()) {
      file.close();
      std::error_code ec;
      std::filesystem::remove(config.out, ec);
      err << "lindchain: cannot write '" << config.out << "'\n";
      return 1;
    }
  }
  if (failed_check) {
    err << "lindchain: oracle check failed\n";
    return 2;
  }
  return 0;
}

}  // namespace lindchain::cli
