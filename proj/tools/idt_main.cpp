#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "idt/curves.hpp"
#include "idt/family.hpp"
#include "idt/json_io.hpp"
#include "idt/measures.hpp"
#include "idt/parallel.hpp"
#include "idt/quantum.hpp"
#include "idt/sdp_programs.hpp"
#include "idt/targets.hpp"
#include "idt/verify.hpp"
#include "json.hpp"

namespace {

// Shortest representation that survives a text round trip.
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    idt::write_text_file(out_path, text);
  }
}

// Minimal gnuplot driver so sweeps reproduce the reference figures without
// any UI in this tool.
void emit_plot(const std::string& plot_path, const std::string& csv_path,
               const std::string& xlabel, const std::string& ylabel,
               const std::string& extra) {
  if (csv_path.empty())
    throw std::invalid_argument("--emit-plot needs --out so the script has a file to read");
  std::ostringstream s;
  s << "set datafile separator ','\n"
    << "set key autotitle columnhead\n"
    << "set xlabel '" << xlabel << "'\n"
    << "set ylabel '" << ylabel << "'\n"
    << "set grid\n"
    << extra << "plot '" << csv_path << "' using 1:2 with linespoints\n";
  idt::write_text_file(plot_path, s.str());
}

double default_tolerance() {
  if (const char* env = std::getenv("IDT_SDP_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && v > 0.0 && v < 1.0) return v;
    std::cerr << "warning: ignoring malformed IDT_SDP_TOL value \"" << env << "\"\n";
  }
  return 1e-8;
}

struct CurveOptions {
  std::string pair_name = "tv-diamond";
  std::vector<int> ms;
  std::vector<int> ds;
  int points = 101;
  double start = 0.0;
  double stop = 0.0;
  bool custom_grid = false;
  std::string out_path;
  std::string plot_path;
};

int cmd_curve(const CurveOptions& opt) {
  idt::CurvePair pair{};
  if (!idt::parse_curve_pair(opt.pair_name, pair))
    throw std::invalid_argument("unknown measure pair \"" + opt.pair_name + "\"");

  // --m and --d are synonyms for the block parameter; the diamond curve
  // reads --m first, the dimension-indexed curves --d first.
  std::vector<int> params = pair == idt::CurvePair::kTvDiamond ? opt.ms : opt.ds;
  if (params.empty()) params = pair == idt::CurvePair::kTvDiamond ? opt.ds : opt.ms;
  if (params.empty()) params = {2};

  std::ostringstream csv;
  csv << "Delta,delta,m,measure_pair\n";
  for (int param : params) {
    double start = opt.start, stop = opt.stop;
    if (!opt.custom_grid) idt::default_grid(pair, param, start, stop);
    for (const idt::TradeoffPoint& p : idt::sweep_curve(pair, param, start, stop, opt.points))
      csv << fmt(p.Delta) << ',' << fmt(p.delta) << ',' << p.m << ',' << p.measure_pair
          << '\n';
  }
  emit(csv.str(), opt.out_path);
  if (!opt.plot_path.empty()) {
    std::string xlabel = "diamond disturbance";
    if (pair == idt::CurvePair::kTvFidelity) xlabel = "worst-case fidelity";
    if (pair == idt::CurvePair::kTvAvgFidelity) xlabel = "average fidelity";
    if (pair == idt::CurvePair::kTvTrace) xlabel = "trace-norm disturbance";
    emit_plot(opt.plot_path, opt.out_path, xlabel, "minimum target deviation", "");
  }
  return 0;
}

struct FamilySweepOptions {
  int d = 2;
  int points = 11;
  double start = 0.0;
  double stop = -1.0;  // sentinel: 1 - 1/d once d is known
  int restarts = 200;
  std::uint64_t seed = idt::kMeasureSeed;
  double tol = 1e-8;
  std::string out_path;
  std::string plot_path;
};

int cmd_family_sweep(const FamilySweepOptions& opt) {
  const double stop = opt.stop < 0.0 ? 1.0 - 1.0 / opt.d : opt.stop;
  const idt::Povm basis = idt::basis_target(opt.d);
  idt::SdpOptions sdp;
  sdp.tol = opt.tol;

  const auto rows = idt::parallel_map(opt.points, [&](int i) {
    const double delta =
        opt.points > 1 ? opt.start + (stop - opt.start) * i / (opt.points - 1) : opt.start;
    const idt::Instrument inst =
        idt::family_instrument(idt::achiever_from_delta(opt.d, delta));
    const idt::Channel marginal = idt::instrument_channel(inst);
    std::ostringstream row;
    row << fmt(idt::delta_tv(idt::instrument_povm(inst), basis).value) << ','
        << fmt(idt::worst_fidelity(marginal, opt.restarts, opt.seed).value) << ','
        << fmt(idt::avg_fidelity(marginal).value) << ','
        << fmt(idt::trace_norm_disturbance(marginal, opt.restarts, opt.seed).value) << ','
        << fmt(idt::diamond_distance(marginal, sdp).value) << '\n';
    return row.str();
  });

  std::ostringstream csv;
  csv << "delta_tv,worst_fidelity,avg_fidelity,tv_disturbance,diamond_disturbance\n";
  for (const std::string& row : rows) csv << row;
  emit(csv.str(), opt.out_path);
  if (!opt.plot_path.empty())
    emit_plot(opt.plot_path, opt.out_path, "target deviation", "worst-case fidelity", "");
  return 0;
}

struct SdpTradeoffOptions {
  std::string povm_name;
  std::string povm_file;
  int d = 2;
  int points = 11;
  double start = 0.0;
  double stop = -1.0;  // sentinel: deviation of the fully mixed measurement
  std::optional<double> single_lambda;
  bool compare_heuristic = false;
  double tol = 1e-8;
  std::string out_path;
  std::string plot_path;
  std::string dump_prefix;
  std::string dump_sdp_path;
};

int cmd_sdp_tradeoff(const SdpTradeoffOptions& opt) {
  idt::Povm target;
  if (!opt.povm_file.empty()) {
    try {
      target = idt::povm_from_json(idt::read_text_file(opt.povm_file));
    } catch (const std::exception& e) {
      throw std::invalid_argument(std::string("invalid POVM file: ") + e.what());
    }
  } else if (!opt.povm_name.empty()) {
    target = idt::named_target(opt.povm_name, opt.d);
  } else {
    throw std::invalid_argument("need one of --povm or --povm-file");
  }

  const double scale = idt::lueders_mix_scale(target);
  std::vector<double> grid;
  if (opt.single_lambda) {
    grid.push_back(*opt.single_lambda);
  } else {
    const double stop = opt.stop < 0.0 ? scale : opt.stop;
    if (!(opt.start <= stop)) throw std::invalid_argument("grid must be monotone");
    for (int i = 0; i < opt.points; ++i)
      grid.push_back(opt.points > 1 ? opt.start + (stop - opt.start) * i / (opt.points - 1)
                                    : opt.start);
  }

  idt::SdpOptions sdp;
  sdp.tol = opt.tol;
  if (!opt.dump_sdp_path.empty())
    idt::write_sdpa_sparse(idt::lmi_to_standard(idt::tradeoff_problem(target, grid.front())),
                           opt.dump_sdp_path);

  const auto rows = idt::parallel_map(static_cast<int>(grid.size()), [&](int i) {
    const idt::TradeoffResult r = idt::tradeoff_sdp(target, grid[i], sdp);
    if (r.status != idt::SdpStatus::kOptimal)
      throw std::runtime_error("tradeoff solve did not converge at lambda = " +
                               fmt(grid[i]) + (r.note.empty() ? "" : ": " + r.note));
    return r;
  });

  std::ostringstream csv;
  csv << (opt.compare_heuristic ? "lambda,nu,heuristic_nu\n" : "lambda,nu\n");
  for (size_t i = 0; i < grid.size(); ++i) {
    csv << fmt(grid[i]) << ',' << fmt(rows[i].value);
    if (opt.compare_heuristic) {
      // Mix the target toward the trace share of the identity just far
      // enough to spend the deviation budget, then measure it gently.
      const double t = scale > 0.0 ? std::max(0.0, 1.0 - grid[i] / scale) : 1.0;
      const idt::Channel gentle =
          idt::instrument_channel(idt::lueders_instrument(idt::lueders_mix(target, t)));
      csv << ',' << fmt(idt::diamond_distance(gentle, sdp).value);
    }
    csv << '\n';
    if (!opt.dump_prefix.empty())
      idt::write_text_file(opt.dump_prefix + "_" + std::to_string(i) + ".json",
                           idt::instrument_to_json(rows[i].instrument));
  }
  emit(csv.str(), opt.out_path);
  if (!opt.plot_path.empty())
    emit_plot(opt.plot_path, opt.out_path, "deviation budget", "diamond disturbance", "");
  return 0;
}

int cmd_sic(int d, const std::string& out_path) {
  emit(idt::povm_to_json(idt::sic_povm(d)) + "\n", out_path);
  return 0;
}

int cmd_validate(const std::string& povm_file, const std::string& instrument_file) {
  if (povm_file.empty() == instrument_file.empty())
    throw std::invalid_argument("need exactly one of --povm-file or --instrument-file");
  if (!povm_file.empty()) {
    const idt::Povm p = idt::povm_from_json(idt::read_text_file(povm_file));
    std::cout << "valid POVM: dim " << p.dim << ", " << p.outcomes() << " outcomes\n";
  } else {
    const idt::Instrument inst =
        idt::instrument_from_json(idt::read_text_file(instrument_file));
    std::cout << "valid instrument: dim " << inst.dim << ", " << inst.outcomes()
              << " outcomes\n";
  }
  return 0;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, const std::string& out_path) {
  const std::vector<idt::SuiteResult> results = idt::run_verify(suite, seed);

  nlohmann::json report;
  report["suites"] = nlohmann::json::array();
  bool all_passed = true;
  std::string first_failure;
  for (const idt::SuiteResult& suite_result : results) {
    nlohmann::json js;
    js["suite"] = suite_result.suite;
    js["passed"] = suite_result.passed();
    js["properties"] = nlohmann::json::array();
    for (const idt::PropertyResult& p : suite_result.properties) {
      std::cout << (p.passed ? "[PASS] " : "[FAIL] ") << suite_result.suite << '/' << p.name
                << " (" << p.detail << ")\n";
      js["properties"].push_back(
          {{"name", p.name}, {"passed", p.passed}, {"detail", p.detail}});
      if (!p.passed && first_failure.empty())
        first_failure = suite_result.suite + "/" + p.name;
    }
    all_passed = all_passed && suite_result.passed();
    report["suites"].push_back(js);
  }
  report["passed"] = all_passed;
  if (!out_path.empty()) idt::write_text_file(out_path, report.dump(2) + "\n");

  if (!all_passed) {
    std::cerr << "verification failed: " << first_failure << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"information-disturbance tradeoff toolkit"};
  app.require_subcommand(1);

  std::uint64_t seed = idt::kMeasureSeed;
  double tol = default_tolerance();
  app.add_option("--seed", seed, "seed for heuristic restarts (runs are deterministic per seed)");
  app.add_option("--tol", tol, "interior-point target tolerance (env IDT_SDP_TOL)");

  CurveOptions curve;
  CLI::App* curve_cmd = app.add_subcommand("curve", "closed-form optimal tradeoff curves");
  curve_cmd->fallthrough();
  curve_cmd->add_option("--pair", curve.pair_name,
                        "tv-fidelity | tv-avg-fidelity | tv-trace | tv-diamond");
  curve_cmd->add_option("--m", curve.ms, "outcome counts, one CSV block each")->delimiter(',');
  curve_cmd->add_option("--d", curve.ds, "dimensions, one CSV block each")->delimiter(',');
  curve_cmd->add_option("--points", curve.points, "grid points per block");
  CLI::Option* cstart = curve_cmd->add_option("--start", curve.start, "grid start");
  CLI::Option* cstop = curve_cmd->add_option("--stop", curve.stop, "grid stop");
  curve_cmd->add_option("--out", curve.out_path, "CSV output path (default stdout)");
  curve_cmd->add_option("--emit-plot", curve.plot_path, "write a gnuplot script");

  FamilySweepOptions fam;
  CLI::App* fam_cmd =
      app.add_subcommand("family-sweep", "measure the optimal family along a deviation grid");
  fam_cmd->fallthrough();
  fam_cmd->add_option("--d", fam.d, "dimension (at least 2)");
  fam_cmd->add_option("--points", fam.points, "grid points");
  fam_cmd->add_option("--start", fam.start, "deviation grid start");
  fam_cmd->add_option("--stop", fam.stop, "deviation grid stop (default 1 - 1/d)");
  fam_cmd->add_option("--restarts", fam.restarts, "restarts for the heuristic measures");
  fam_cmd->add_option("--out", fam.out_path, "CSV output path (default stdout)");
  fam_cmd->add_option("--emit-plot", fam.plot_path, "write a gnuplot script");

  SdpTradeoffOptions sdp;
  CLI::App* sdp_cmd =
      app.add_subcommand("sdp-tradeoff", "optimal disturbance under a deviation budget");
  sdp_cmd->fallthrough();
  sdp_cmd->add_option("--povm", sdp.povm_name, "built-in target: basis | sic2 | sic3 | degenerate");
  sdp_cmd->add_option("--povm-file", sdp.povm_file, "JSON POVM target");
  sdp_cmd->add_option("--d", sdp.d, "dimension for the basis target");
  sdp_cmd->add_option("--points", sdp.points, "grid points");
  sdp_cmd->add_option("--start", sdp.start, "budget grid start");
  sdp_cmd->add_option("--stop", sdp.stop, "budget grid stop (default: full mixing deviation)");
  double lambda_flag = 0.0;
  CLI::Option* lopt = sdp_cmd->add_option("--lambda", lambda_flag, "solve a single budget");
  sdp_cmd->add_flag("--compare-heuristic", sdp.compare_heuristic,
                    "append the gentle-measurement upper bound column");
  sdp_cmd->add_option("--out", sdp.out_path, "CSV output path (default stdout)");
  sdp_cmd->add_option("--emit-plot", sdp.plot_path, "write a gnuplot script");
  sdp_cmd->add_option("--dump-instruments", sdp.dump_prefix,
                      "write per-budget optimal instruments to PREFIX_<i>.json");
  sdp_cmd->add_option("--dump-sdp", sdp.dump_sdp_path,
                      "write the first grid point in sparse SDPA form");

  int sic_d = 2;
  std::string sic_out;
  CLI::App* sic_cmd = app.add_subcommand("sic", "emit a symmetric informationally complete POVM");
  sic_cmd->fallthrough();
  sic_cmd->add_option("--d", sic_d, "dimension, 2 or 3");
  sic_cmd->add_option("--out", sic_out, "JSON output path (default stdout)");

  std::string val_povm, val_inst;
  CLI::App* val_cmd = app.add_subcommand("validate", "parse and validate a JSON object");
  val_cmd->fallthrough();
  val_cmd->add_option("--povm-file", val_povm, "JSON POVM to check");
  val_cmd->add_option("--instrument-file", val_inst, "JSON instrument to check");

  std::string verify_suite = "all";
  std::string verify_out;
  CLI::App* verify_cmd = app.add_subcommand("verify", "run the property suites");
  verify_cmd->fallthrough();
  verify_cmd->add_option("suite", verify_suite,
                         "twirl | fuchs-van-de-graaf | corz | axioms | family | curves | "
                         "solver | all");
  verify_cmd->add_option("--out", verify_out, "JSON report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*curve_cmd) {
      curve.custom_grid = *cstart || *cstop;
      if (curve.custom_grid && !(*cstart && *cstop))
        throw std::invalid_argument("--start and --stop must be given together");
      return cmd_curve(curve);
    }
    if (*fam_cmd) {
      fam.seed = seed;
      fam.tol = tol;
      return cmd_family_sweep(fam);
    }
    if (*sdp_cmd) {
      if (*lopt) sdp.single_lambda = lambda_flag;
      sdp.tol = tol;
      return cmd_sdp_tradeoff(sdp);
    }
    if (*sic_cmd) return cmd_sic(sic_d, sic_out);
    if (*val_cmd) return cmd_validate(val_povm, val_inst);
    if (*verify_cmd) return cmd_verify(verify_suite, seed, verify_out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
