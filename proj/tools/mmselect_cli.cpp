// Command-line front end: select, verify, bench, probe.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or input error.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mmselect/mmselect.hpp"

namespace {

using namespace mmselect;
using Key = long double;

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

Key parse_number(const std::string& tok) {
  Key v{};
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc() || p != tok.data() + tok.size() || !std::isfinite(v)) {
    throw UsageError("malformed number '" + tok + "'");
  }
  return v;
}

// Input keys plus their original spelling, for printing the answer verbatim.
struct Input {
  std::vector<Key> keys;
  std::vector<std::string> text;

  void add(std::string tok) {
    keys.push_back(parse_number(tok));
    text.push_back(std::move(tok));
  }
};

Input read_inline(const std::string& data) {
  Input in;
  std::stringstream ss(data);
  std::string tok;
  while (std::getline(ss, tok, ',')) in.add(trim(tok));
  return in;
}

Input read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(f, line)) lines.push_back(trim(line));
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  Input in;
  for (std::size_t k = 0; k < lines.size(); ++k) {
    if (lines[k].empty()) throw UsageError("empty line " + std::to_string(k + 1) + " in '" + path + "'");
    in.add(lines[k]);
  }
  return in;
}

Input read_generated(const std::string& spec) {
  Input in;
  for (auto k : generate_keys(parse_generator(spec))) {
    in.keys.push_back(static_cast<Key>(k));
    in.text.push_back(std::to_string(k));
  }
  return in;
}

void write_text(const std::string& path, const std::string& body) {
  if (path.empty() || path == "-") {
    std::cout << body;
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << body;
  if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

std::vector<AlgorithmId> parse_algorithms(const std::vector<std::string>& names, std::uint64_t seed) {
  std::vector<AlgorithmId> out;
  for (const auto& n : names) out.push_back(AlgorithmId::parse(n, seed));
  return out;
}

std::string fit_summary(const std::vector<GrowthFit>& fits) {
  std::ostringstream os;
  char buf[256];
  for (const auto& f : fits) {
    double worst = 0;
    for (double r : f.per_element.residuals) worst = std::max(worst, std::fabs(r));
    std::snprintf(buf, sizeof buf,
                  "%-12s %-8s log-log slope %.4f | per-element slope %.4f per ln n, max |residual| %.4f\n",
                  f.algorithm.c_str(), f.target.c_str(), f.log_log.slope, f.per_element.slope, worst);
    os << buf;
  }
  return os.str();
}

// --- select ---------------------------------------------------------------

struct SelectArgs {
  std::string algo = "classic5";
  std::size_t i = 0;
  std::string data, file, gen, out, format = "json";
  std::uint64_t seed = 0;
  bool trace = false;
};

int cmd_select(const SelectArgs& a) {
  const int sources = !a.data.empty() + !a.file.empty() + !a.gen.empty();
  if (sources != 1) throw UsageError("give exactly one of --data, --file, --gen");
  Input in = !a.data.empty() ? read_inline(a.data) : !a.file.empty() ? read_file(a.file)
                                                                      : read_generated(a.gen);
  if (in.keys.empty()) throw UsageError("empty input");
  if (a.i < 1 || a.i > in.keys.size()) throw UsageError("rank out of bounds");

  auto report = run(AlgorithmId::parse(a.algo, a.seed), make_sequence(in.keys), a.i);
  std::cout << in.text[report.result.origin] << '\n';
  if (a.trace) {
    std::string body;
    if (a.format == "csv") {
      std::ostringstream os;
      write_trace_csv(os, report.iterations);
      body = os.str();
    } else {
      auto j = to_json(report);
      j["result_text"] = in.text[report.result.origin];
      body = j.dump(2) + "\n";
    }
    write_text(a.out, body);
  }
  return kOk;
}

// --- verify ---------------------------------------------------------------

struct VerifyArgs {
  std::size_t max_exhaustive = 8;
  std::vector<std::size_t> sizes{1000, 10000, 100000};
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  std::vector<std::string> algos;
};

int cmd_verify(const VerifyArgs& a) {
  VerifyOptions opt;
  opt.max_exhaustive = a.max_exhaustive;
  if (opt.max_exhaustive > 9) throw UsageError("exhaustive domain too large");
  opt.sizes = a.sizes;
  opt.trials = a.trials;
  opt.seed = a.seed;
  opt.algorithms = a.algos.empty() ? all_algorithms(a.seed) : parse_algorithms(a.algos, a.seed);
  auto report = run_verify(opt);
  std::cout << "algorithms: " << opt.algorithms.size() << '\n';
  print_summary(std::cout, report);
  return report.passed() ? kOk : kVerifyFailed;
}

// --- bench ----------------------------------------------------------------

struct BenchArgs {
  std::string spec_path;
  std::vector<std::string> algos;
  std::vector<std::size_t> sizes;
  std::string target = "middle", gen = "uniform", out, fit;
  std::uint64_t k = 1, seed = 0;
  std::size_t reps = 1;
};

void emit_rows_and_fits(const std::vector<ScalingRow>& rows, const std::string& csv_path,
                        const std::string& fit_path) {
  std::ostringstream csv;
  write_scaling_csv(csv, rows);
  write_text(csv_path, csv.str());
  if (!fit_path.empty()) {
    auto fits = growth_fits(rows);
    write_text(fit_path, to_json(fits).dump(2) + "\n");
    std::cerr << fit_summary(fits);
  }
}

int cmd_bench(const BenchArgs& a) {
  ExperimentSpec spec;
  if (!a.spec_path.empty()) {
    std::ifstream f(a.spec_path);
    if (!f) throw UsageError("cannot open '" + a.spec_path + "'");
    spec = parse_experiment(nlohmann::json::parse(f));
  } else {
    spec.algorithms = parse_algorithms(a.algos, a.seed);
    spec.sizes = a.sizes;
    spec.target = parse_target(a.target);
    spec.generator.kind = parse_kind(a.gen);
    spec.generator.k = a.k;
    spec.generator.seed = a.seed;
    spec.repetitions = a.reps;
  }
  if (!a.out.empty()) spec.output = a.out;
  validate(spec);
  emit_rows_and_fits(run_experiment(spec), spec.output, a.fit);
  return kOk;
}

// --- probe ----------------------------------------------------------------

struct ProbeArgs {
  std::vector<std::size_t> sizes{2187, 6561, 19683, 59049, 177147, 531441};
  std::vector<std::string> gens{"uniform"};
  std::size_t reps = 3;
  std::uint64_t seed = 0;
  std::string target = "middle", out_dir = ".";
};

int cmd_probe(const ProbeArgs& a) {
  using P = MedianPolicy;
  ExperimentSpec spec;
  spec.algorithms = {AlgorithmId::classic(3, P::Lower), AlgorithmId::classic(3, P::Upper),
                     AlgorithmId::classic(4, P::Lower), AlgorithmId::classic(4, P::Upper),
                     AlgorithmId::repeated_step3(),     AlgorithmId::classic(5, P::Lower)};
  spec.sizes = a.sizes;
  spec.target = parse_target(a.target);
  spec.repetitions = a.reps;
  spec.generator.seed = a.seed;
  validate(spec);
  std::filesystem::create_directories(a.out_dir);
  for (const auto& g : a.gens) {
    spec.generator.kind = parse_kind(g);
    auto rows = run_experiment(spec);
    const auto base = std::filesystem::path(a.out_dir) / ("probe_" + g);
    std::ostringstream csv;
    write_scaling_csv(csv, rows);
    write_text(base.string() + ".csv", csv.str());
    auto fits = growth_fits(rows);
    write_text(base.string() + "_fit.json", to_json(fits).dump(2) + "\n");
    std::cout << "generator " << g << ": " << base.string() << ".csv, " << base.string()
              << "_fit.json\n"
              << fit_summary(fits);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic small-group selection: select, verify, bench, probe"};
  app.require_subcommand(1, 1);

  SelectArgs sel;
  auto* select = app.add_subcommand("select", "Print the i-th smallest input value");
  select->add_option("--algo", sel.algo, "Algorithm name")->capture_default_str();
  select->add_option("--i", sel.i, "1-indexed target rank")->required();
  select->add_option("--data", sel.data, "Inline comma-separated numbers");
  select->add_option("--file", sel.file, "File with one number per line");
  select->add_option("--gen", sel.gen, "Generator spec, e.g. uniform:n=1000:seed=7");
  select->add_option("--seed", sel.seed, "Quickselect seed")->capture_default_str();
  select->add_flag("--trace", sel.trace, "Emit the run report");
  select->add_option("--format", sel.format, "Trace format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  select->add_option("--out", sel.out, "Trace output path (default stdout)");

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "Oracle equivalence and trace invariants");
  verify->add_option("--max-exhaustive", ver.max_exhaustive, "Largest exhaustive n")
      ->capture_default_str();
  verify->add_option("--sizes", ver.sizes, "Randomized sizes")->delimiter(',');
  verify->add_option("--trials", ver.trials, "Randomized trials per size")->capture_default_str();
  verify->add_option("--seed", ver.seed, "Base seed")->capture_default_str();
  verify->add_option("--algos", ver.algos, "Algorithms (default: all)")->delimiter(',');

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run a scaling experiment");
  bench_cmd->add_option("--spec", bench.spec_path, "Experiment JSON file");
  bench_cmd->add_option("--algos", bench.algos, "Algorithms")->delimiter(',');
  bench_cmd->add_option("--sizes", bench.sizes, "Strictly increasing sizes")->delimiter(',');
  bench_cmd->add_option("--target", bench.target, "middle|low|high|sweep|fixed:<i>")
      ->capture_default_str();
  bench_cmd->add_option("--gen", bench.gen, "Generator kind")->capture_default_str();
  bench_cmd->add_option("--k", bench.k, "Distinct keys for the few generator");
  bench_cmd->add_option("--seed", bench.seed, "Base seed")->capture_default_str();
  bench_cmd->add_option("--reps", bench.reps, "Repetitions per cell")->capture_default_str();
  bench_cmd->add_option("--out", bench.out, "CSV output path (default stdout)");
  bench_cmd->add_option("--fit", bench.fit, "Growth-fit JSON output path");

  ProbeArgs probe;
  auto* probe_cmd = app.add_subcommand("probe", "Comparison growth of classic select with groups of 3 and 4");
  probe_cmd->add_option("--sizes", probe.sizes, "Strictly increasing sizes")->delimiter(',');
  probe_cmd->add_option("--gens", probe.gens, "Generator kinds")->delimiter(',');
  probe_cmd->add_option("--reps", probe.reps, "Repetitions per cell")->capture_default_str();
  probe_cmd->add_option("--seed", probe.seed, "Base seed")->capture_default_str();
  probe_cmd->add_option("--target", probe.target, "Target rule")->capture_default_str();
  probe_cmd->add_option("--out-dir", probe.out_dir, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*select) return cmd_select(sel);
    if (*verify) return cmd_verify(ver);
    if (*bench_cmd) return cmd_bench(bench);
    if (*probe_cmd) return cmd_probe(probe);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kVerifyFailed;
  }
  return kUsage;
}
