// simcat command-line tool.
//
// Exit codes: 0 pass, 1 property fails or is not established, 2 usage or
// parse error, 3 oracle cap exceeded.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "simcat/error.hpp"
#include "simcat/oracle.hpp"
#include "simcat/rewrite.hpp"
#include "simcat/spectral.hpp"
#include "simcat/verify.hpp"

using namespace simcat;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCap = 3;

struct Config {
  int bit_cap = 22;
  bool oracle = true;
  std::string format = "text";
  std::string output;
  std::string trace;
};

int default_bit_cap() {
  if (const char* env = std::getenv("SIMCAT_BIT_CAP")) {
    try {
      int v = std::stoi(env);
      if (v >= 1) return v;
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring invalid SIMCAT_BIT_CAP='" << env << "'\n";
  }
  return 22;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MalformedError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

void emit(const Config& cfg, const std::string& text) {
  if (cfg.output.empty()) {
    std::cout << text;
  } else {
    write_file(cfg.output, text);
  }
}

// `--observe` takes names separated by commas or repeated flags; "-", "" and
// "∅" select nothing.
std::optional<ObservationSpec> observation(const std::vector<std::string>& raw, bool given) {
  if (!given) return std::nullopt;
  ObservationSpec obs;
  for (const auto& item : raw) {
    std::stringstream ss(item);
    std::string name;
    while (std::getline(ss, name, ',')) {
      if (name.empty() || name == "-" || name == "∅") continue;
      obs.names.push_back(name);
    }
  }
  return obs;
}

std::string observe_header(const ObservationSpec& obs) {
  std::string line = "# observe ";
  if (obs.names.empty()) return line + "-\n";
  for (std::size_t i = 0; i < obs.names.size(); ++i) line += (i ? "," : "") + obs.names[i];
  return line + "\n";
}

Netlist load(const std::string& path) { return elaborate(parse_gadget(read_file(path))); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simcat: correlation matrices and erase-propagation checks for masked gadgets"};
  app.require_subcommand(1);
  Config cfg;
  cfg.bit_cap = default_bit_cap();
  app.add_option("--bit-cap", cfg.bit_cap, "oracle cap on input+random bits (env SIMCAT_BIT_CAP)")
      ->check(CLI::PositiveNumber);
  app.add_option("-o,--output", cfg.output, "write the report to a file");

  std::string file;
  std::vector<std::string> observe;

  // matrix
  auto* matrix = app.add_subcommand("matrix", "print the correlation matrix of a gadget");
  matrix->add_option("file", file, "gadget (.gdl)")->required();
  auto* matrix_obs = matrix->add_option("--observe", observe, "print eval of the observation diagram");

  // walsh
  std::string table_file;
  bool naive = false;
  auto* walsh = app.add_subcommand("walsh", "correlation matrix of a truth table");
  walsh->add_option("file", table_file, "lines of `<input bits> <output bits>`")->required();
  walsh->add_flag("--naive", naive, "use the direct sum instead of the fast transform");

  // dist
  auto* dist = app.add_subcommand("dist", "observed distribution per input assignment");
  dist->add_option("file", file, "gadget (.gdl)")->required();
  auto* dist_obs = dist->add_option("--observe", observe, "observed names (default: all outputs)");

  // check
  std::string prop;
  int d = -1;
  int t = -1;
  int probes = 1;
  auto* check = app.add_subcommand("check", "check a security property");
  check->add_option("file", file, "gadget (.gdl)")->required();
  check->add_option("--prop", prop, "property")
      ->required()
      ->check(CLI::IsMember({"sim", "ni", "sni", "pini"}));
  check->add_option("--d", d, "simulation order (sim, ni, sni)")->check(CLI::NonNegativeNumber);
  check->add_option("-t", t, "number of share domains (pini)")->check(CLI::PositiveNumber);
  check->add_option("--probes", probes, "maximum probe set size (pini)")->check(CLI::NonNegativeNumber);
  auto* check_obs = check->add_option("--observe", observe, "observed names (sim; default: all outputs)");
  check->add_flag("--oracle,!--no-oracle", cfg.oracle, "cross-check with the exhaustive oracle");
  check->add_option("--format", cfg.format, "report format")->check(CLI::IsMember({"text", "json"}));
  check->add_option("--trace", cfg.trace, "write the rewrite trace (sim)");

  // render
  bool after_rewrite = false;
  auto* render = app.add_subcommand("render", "emit the observation diagram as Graphviz dot");
  render->add_option("file", file, "gadget (.gdl)")->required();
  auto* render_obs = render->add_option("--observe", observe, "observed names (default: all outputs)");
  render->add_flag("--after-rewrite", after_rewrite, "render the erase-propagation fixpoint");
  render->add_option("--trace", cfg.trace, "write the rewrite trace");

  // replay
  std::string trace_file;
  auto* replay_cmd = app.add_subcommand("replay", "replay a rewrite trace against a gadget");
  replay_cmd->add_option("file", file, "gadget (.gdl)")->required();
  replay_cmd->add_option("trace", trace_file, "trace written by `check --trace`")->required();
  auto* replay_obs = replay_cmd->add_option("--observe", observe, "override the observation in the trace");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  CheckOptions copts;
  copts.use_oracle = cfg.oracle;
  copts.oracle.bit_cap = cfg.bit_cap;

  std::string source = file;
  try {
    if (*matrix) {
      Netlist nl = load(file);
      if (auto obs = observation(observe, matrix_obs->count() > 0)) {
        emit(cfg, eval(observation_diagram(nl, *obs)).to_string());
      } else {
        emit(cfg, oracle_matrix(nl, copts.oracle).to_string());
      }
      return kExitPass;
    }

    if (*walsh) {
      auto table = TruthTable::parse(read_file(table_file));
      WalshOptions w;
      w.method = naive ? WalshMethod::kNaive : WalshMethod::kFast;
      w.max_in_wires = cfg.bit_cap;
      emit(cfg, walsh_from_truth_table(table, w).to_string());
      return kExitPass;
    }

    if (*dist) {
      Netlist nl = load(file);
      auto obs = observation(observe, dist_obs->count() > 0).value_or(ObservationSpec::all_outputs(nl));
      emit(cfg, dist_table(nl, obs, copts.oracle).to_text());
      return kExitPass;
    }

    if (*render) {
      Netlist nl = load(file);
      auto obs = observation(observe, render_obs->count() > 0).value_or(ObservationSpec::all_outputs(nl));
      Graph g = observation_diagram(nl, obs);
      if (after_rewrite || !cfg.trace.empty()) {
        auto [fix, trace] = propagate_erases(g);
        if (!cfg.trace.empty()) write_file(cfg.trace, observe_header(obs) + trace.to_text());
        if (after_rewrite) g = std::move(fix);
      }
      emit(cfg, to_dot(g, nl.name));
      return kExitPass;
    }

    if (*replay_cmd) {
      Netlist nl = load(file);
      std::string text = read_file(trace_file);
      auto obs = observation(observe, replay_obs->count() > 0);
      if (!obs) {
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
          if (line.rfind("# observe ", 0) == 0) {
            obs = observation({line.substr(10)}, true);
            break;
          }
        }
      }
      if (!obs) obs = ObservationSpec::all_outputs(nl);
      source = trace_file;
      auto steps = RewriteTrace::parse_steps(text);
      Graph start = observation_diagram(nl, *obs);
      std::string note;
      try {
        replay(start, steps, true);
      } catch (const CapacityError&) {
        replay(start, steps, false);
        note = " (diagram too wide for per-step eval; structural replay only)";
      }
      std::cout << "replayed " << steps.size() << " steps" << note << "\n";
      return kExitPass;
    }

    if (*check) {
      Netlist nl = load(file);
      bool over_cap = false;
      try {
        check_cap(nl, copts.oracle);
      } catch (const CapacityError&) {
        over_cap = true;
      }
      auto exit_for = [&](Outcome o) {
        if (o == Outcome::kPass) return kExitPass;
        if (o == Outcome::kUndecided && cfg.oracle && over_cap) return kExitCap;
        return kExitFail;
      };

      if (prop == "pini") {
        if (t < 0) throw MalformedError("--prop pini requires -t");
        if (check_obs->count() > 0 || d >= 0) throw MalformedError("--observe/--d do not apply to pini");
        auto report = check_pini(nl, t, probes, copts);
        emit(cfg, cfg.format == "json" ? to_json(report) : to_text(report));
        return exit_for(report.outcome);
      }

      if (t >= 0) throw MalformedError("-t applies to --prop pini only");
      if (d < 0) throw MalformedError("--prop " + prop + " requires --d");
      Verdict v;
      if (prop == "sim") {
        auto obs = observation(observe, check_obs->count() > 0).value_or(ObservationSpec::all_outputs(nl));
        v = check_sim(nl, obs, d, copts);
        if (!cfg.trace.empty() && v.trace) {
          write_file(cfg.trace, observe_header(obs) + v.trace->to_text());
        }
      } else {
        if (check_obs->count() > 0) throw MalformedError("--observe applies to --prop sim only");
        v = prop == "ni" ? check_ni(nl, d, copts) : check_sni(nl, d, copts);
      }
      emit(cfg, cfg.format == "json" ? to_json(v, cfg.trace) : to_text(v));
      return exit_for(v.outcome());
    }
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCap;
  } catch (const ParseError& e) {
    std::cerr << source << ":" << e.what() << "\n";
    return kExitUsage;
  } catch (const NoMatchError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  } catch (const MalformedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
