#include "qfluct_cli/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "io_error.hpp"
#include "qfluct/calibration.hpp"
#include "qfluct/csv.hpp"
#include "qfluct/error.hpp"
#include "qfluct/kernels.hpp"
#include "qfluct/smearing.hpp"
#include "qfluct/sweep.hpp"
#include "qfluct/walker.hpp"
#include "qfluct_cli/manifest.hpp"

namespace qfluct::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

double parse_number(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw PreconditionError("not a number: '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(v)) throw PreconditionError("not a number: '" + text + "'");
  return v;
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw PreconditionError(std::string("empty entry in ") + what + " list");
    out.push_back(parse_number(item));
  }
  if (out.empty()) throw PreconditionError(std::string(what) + " list is empty");
  return out;
}

// "v" or "start:stop:count" (count >= 1, endpoints included).
std::vector<double> parse_range(const std::string& text, const char* what) {
  if (text.find(':') == std::string::npos) return {parse_number(text)};
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3) throw PreconditionError(std::string("malformed ") + what + " range '" + text + "'");
  const double start = parse_number(parts[0]);
  const double stop = parse_number(parts[1]);
  const double count_d = parse_number(parts[2]);
  if (count_d < 1 || count_d != std::floor(count_d))
    throw PreconditionError(std::string("range count must be a positive integer in '") + text + "'");
  const auto count = static_cast<std::size_t>(count_d);
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = count == 1 ? start : start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
  return out;
}

std::vector<double> parse_list_or_range(const std::string& text, const char* what) {
  if (text.find(':') != std::string::npos) return parse_range(text, what);
  return parse_list(text, what);
}

FitWindow parse_window(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw PreconditionError("fit window must be 'first:last'");
  const double first = parse_number(text.substr(0, colon));
  const double last = parse_number(text.substr(colon + 1));
  if (first < 0 || last < 0 || first != std::floor(first) || last != std::floor(last))
    throw PreconditionError("fit window bounds must be non-negative integers");
  return {static_cast<std::size_t>(first), static_cast<std::size_t>(last)};
}

std::string default_out_dir() {
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
  return ".";
}

fs::path ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
  return fs::path(dir);
}

void write_table(const fs::path& path, const csv::NumericTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  csv::write(out, table);
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

fs::path manifest_path_for(const fs::path& csv_path) {
  fs::path p = csv_path;
  p.replace_extension(".manifest.json");
  return p;
}

std::string join_args(const std::vector<std::string>& args) {
  std::string s;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) s += ' ';
    s += args[i];
  }
  return s;
}

std::string fmt(double v) { return csv::format_double(v); }

// Short form for messages; data always goes through fmt.
std::string human(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

struct Context {
  std::string command;
  std::ostream& out;
  std::ostream& err;
};

// ---- kernel eval -----------------------------------------------------------

struct KernelEvalOptions {
  std::string kernel = "em";
  double k = 1.0;
  std::string t0 = "0";
  std::string out_path;
};

int cmd_kernel_eval(const KernelEvalOptions& o, Context& ctx) {
  const std::string started = utc_now();
  const CorrelationKernel kernel = CorrelationKernel::make(parse_kernel_kind(o.kernel), o.k);
  csv::NumericTable table{csv::kKernelHeader, {}};
  for (double t0 : parse_range(o.t0, "t0")) table.rows.push_back({t0, kernel.eval(t0)});

  if (o.out_path.empty()) {
    csv::write(ctx.out, table);
    return kSuccess;
  }
  const fs::path path(o.out_path);
  if (path.has_parent_path()) ensure_dir(path.parent_path().string());
  write_table(path, table);

  RunManifest m;
  m.command = ctx.command;
  m.config = {{"kernel", to_string(kernel.kind())}, {"k", o.k}, {"t0", o.t0}, {"out", o.out_path}};
  m.outputs.push_back({path, sha256_file(path)});
  m.started_at = started;
  m.finished_at = utc_now();
  m.write(manifest_path_for(path));
  return kSuccess;
}

// ---- sweep -----------------------------------------------------------------

struct SweepOptions {
  std::string kernel = "em";
  std::string method = "exact";
  std::string mode = "chain-raw";
  std::string table;
  double table_sigma2 = 1.0;
  double k = 1.0;
  std::size_t points = 801;
  std::uint64_t steps = 20000;
  double t0_max = 8.0;
  std::uint64_t seed = 42;
  std::string out_dir;
  std::string out_name;
  unsigned threads = 0;
};

CalibrationModel make_model(const SweepOptions& o, KernelKind kind) {
  const SamplerMode mode = parse_sampler_mode(o.mode);
  switch (parse_calibration_method(o.method)) {
    case CalibrationMethod::PaperTanFit:
      return CalibrationModel::paper_tan_fit(kind, mode);
    case CalibrationMethod::ExactChainInversion:
      return CalibrationModel::exact(mode);
    case CalibrationMethod::MonteCarloTable: {
      if (o.table.empty()) throw PreconditionError("--method table requires --table <calibration.csv>");
      std::ifstream in(o.table);
      if (!in) throw IoError("cannot read calibration table " + o.table);
      return CalibrationModel::monte_carlo(csv::calibration_from_table(csv::read(in), mode, o.table_sigma2));
    }
  }
  throw PreconditionError("unknown calibration method");
}

int cmd_sweep(const SweepOptions& o, Context& ctx) {
  const std::string started = utc_now();
  const KernelKind kind = parse_kernel_kind(o.kernel);
  const CorrelationKernel kernel = CorrelationKernel::make(kind, o.k);
  const CalibrationModel model = make_model(o, kind);

  SweepConfig cfg;
  cfg.n_points = o.points;
  cfg.t0_max = o.t0_max;
  cfg.steps_per_point = o.steps;
  cfg.seed = o.seed;
  cfg.threads = o.threads;
  cfg.validate();

  const SweepResult result = correlation_sweep(kernel, model, cfg);

  const fs::path dir = ensure_dir(o.out_dir.empty() ? default_out_dir() : o.out_dir);
  const std::string name = o.out_name.empty() ? "sweep_" + std::string(to_string(kind)) + "_" +
                                                    std::string(to_string(model.method())) + "_" +
                                                    std::string(to_string(model.sampler_mode()))
                                              : o.out_name;
  const fs::path csv_path = dir / (name + ".csv");
  write_table(csv_path, csv::to_table(result));

  const std::size_t feasible = result.feasible_count();
  RunManifest m;
  m.command = ctx.command;
  m.config = {{"kernel", to_string(kind)},
              {"k", o.k},
              {"method", to_string(model.method())},
              {"mode", to_string(model.sampler_mode())},
              {"table", o.table},
              {"table_sigma2", o.table_sigma2},
              {"points", o.points},
              {"steps", o.steps},
              {"t0_max", o.t0_max},
              {"seed", o.seed},
              {"out_dir", dir.string()},
              {"threads", o.threads}};
  m.seed = o.seed;
  m.outputs.push_back({csv_path, sha256_file(csv_path)});
  m.extra["variance"] = result.variance;
  m.extra["feasible_points"] = feasible;
  m.started_at = started;
  m.finished_at = utc_now();
  m.write(manifest_path_for(csv_path));

  ctx.out << "kernel " << to_string(kind) << ", method " << to_string(model.method()) << ", mode "
          << to_string(model.sampler_mode()) << ", variance " << human(result.variance) << '\n';
  ctx.out << "feasible points: " << feasible << " / " << result.rows.size() << '\n';
  if (feasible < result.rows.size()) {
    for (const SweepRow& r : result.rows) {
      if (r.failure) {
        ctx.out << "first infeasible point: t0 = " << human(r.t0) << " (" << *r.failure << ")\n";
        break;
      }
    }
  }
  if (feasible > 0) {
    ctx.out << "max deviation: " << human(result.max_deviation()) << '\n';
    ctx.out << "rms deviation: " << human(result.rms_deviation()) << '\n';
  }
  ctx.out << "wrote " << csv_path.string() << '\n';
  if (feasible == 0) {
    ctx.err << "error: no point of the sweep could be calibrated\n";
    return kNumericalFailure;
  }
  return kSuccess;
}

// ---- verify-quadrature -----------------------------------------------------

struct VerifyOptions {
  std::string t0 = "0,0.5,1,2,4,8";
  std::string alpha = "0.1,1,10";
  double tol = 1e-6;
  double T = 100.0;
  std::string out_path;
  unsigned threads = 0;
};

int cmd_verify(const VerifyOptions& o, Context& ctx) {
  const std::string started = utc_now();
  const std::vector<double> t0 = parse_list_or_range(o.t0, "t0");
  const std::vector<double> alphas = parse_list(o.alpha, "alpha");

  VerificationReport all;
  all.all_pass = true;
  for (double alpha : alphas) {
    SmearingSpec spec;
    spec.alpha = alpha;
    spec.truncation_T = o.T;
    spec.abs_tol = o.tol;
    spec.validate();
    VerificationReport r = verify_closed_form(t0, spec, o.threads);
    all.all_pass = all.all_pass && r.all_pass;
    all.max_abs_dev = std::max(all.max_abs_dev, r.max_abs_dev);
    for (VerificationRow& row : r.rows) all.rows.push_back(std::move(row));
  }
  const csv::NumericTable table = csv::to_table(all);

  if (o.out_path.empty()) {
    csv::write(ctx.out, table);
  } else {
    const fs::path path(o.out_path);
    if (path.has_parent_path()) ensure_dir(path.parent_path().string());
    write_table(path, table);
    RunManifest m;
    m.command = ctx.command;
    m.config = {{"t0", o.t0}, {"alpha", o.alpha}, {"tol", o.tol}, {"T", o.T}, {"out", o.out_path},
                {"threads", o.threads}};
    m.outputs.push_back({path, sha256_file(path)});
    m.extra["all_pass"] = all.all_pass;
    m.started_at = started;
    m.finished_at = utc_now();
    m.write(manifest_path_for(path));
  }

  std::size_t failed = 0;
  for (const VerificationRow& row : all.rows) {
    if (row.pass) continue;
    ++failed;
    ctx.err << "t0 = " << human(row.t0) << ", alpha = " << human(row.alpha) << ": "
            << (row.failure ? *row.failure : "deviation " + human(row.abs_dev) + " exceeds tolerance") << '\n';
  }
  ctx.err << (failed == 0 ? "all " : "") << all.rows.size() - failed << " of " << all.rows.size()
          << " points within " << human(o.tol) << "; max deviation " << human(all.max_abs_dev) << '\n';
  return all.all_pass ? kSuccess : kNumericalFailure;
}

// ---- walk ------------------------------------------------------------------

struct WalkOptions {
  std::string f = "-0.5,0,0.5";
  std::size_t steps = 100;
  std::size_t walkers = 100000;
  std::uint64_t seed = 3;
  std::string mode = "chain-raw";
  double sigma2 = 1.0;
  bool fit = false;
  std::string fit_window;
  std::string out_dir;
  unsigned threads = 0;
};

int cmd_walk(const WalkOptions& o, Context& ctx) {
  const std::string started = utc_now();
  const std::vector<double> fs_list = parse_list(o.f, "f");
  for (double f : fs_list)
    if (std::abs(f) > 1.0) throw PreconditionError("shift factor f = " + human(f) + " violates |f| <= 1");
  const SamplerMode mode = parse_sampler_mode(o.mode);
  std::optional<FitWindow> window;
  if (!o.fit_window.empty()) window = parse_window(o.fit_window);

  const fs::path dir = ensure_dir(o.out_dir.empty() ? default_out_dir() : o.out_dir);
  RunManifest m;
  m.command = ctx.command;
  m.config = {{"f", fs_list},          {"steps", o.steps},   {"walkers", o.walkers},
              {"seed", o.seed},        {"mode", to_string(mode)}, {"sigma2", o.sigma2},
              {"fit", o.fit},          {"fit_window", o.fit_window}, {"out_dir", dir.string()},
              {"threads", o.threads}};
  m.seed = o.seed;
  m.extra["fits"] = ordered_json::array();

  std::vector<WalkEnsembleResult> results;
  for (double f : fs_list) {
    WalkConfig cfg;
    cfg.f = f;
    cfg.sigma2 = o.sigma2;
    cfg.mode = mode;
    cfg.n_steps = o.steps;
    cfg.n_walkers = o.walkers;
    cfg.seed = o.seed;
    cfg.fit_window = window;
    cfg.threads = o.threads;
    WalkEnsembleResult r = run_walk_ensemble(cfg);

    const fs::path path = dir / ("walk_f" + fmt(f) + ".csv");
    write_table(path, csv::to_table(r));
    m.outputs.push_back({path, sha256_file(path)});
    m.extra["fits"].push_back({{"f", f},
                               {"window", {r.fit_window.first, r.fit_window.last}},
                               {"c1", r.fit.c1},
                               {"c1_stderr", r.c1_std_error},
                               {"c0", r.fit.c0},
                               {"c0_stderr", r.c0_std_error}});
    results.push_back(std::move(r));
  }
  m.started_at = started;
  m.finished_at = utc_now();
  m.write(dir / "walk_manifest.json");

  for (const auto& o_file : m.outputs) ctx.out << "wrote " << o_file.path.string() << '\n';
  if (o.fit) {
    const WalkEnsembleResult* base = nullptr;
    for (const auto& r : results)
      if (r.f == 0.0) base = &r;
    ctx.out << "f,c1,c1_stderr,c0,c0_stderr" << (base ? ",c1_ratio_to_f0" : "") << '\n';
    for (const auto& r : results) {
      ctx.out << fmt(r.f) << ',' << fmt(r.fit.c1) << ',' << fmt(r.c1_std_error) << ',' << fmt(r.fit.c0) << ','
              << fmt(r.c0_std_error);
      if (base) ctx.out << ',' << fmt(r.fit.c1 / base->fit.c1);
      ctx.out << '\n';
    }
  }
  return kSuccess;
}

// ---- calibrate -------------------------------------------------------------

struct CalibrateOptions {
  std::string mode = "chain-raw";
  std::uint64_t steps = 100000;
  std::uint64_t seed = 42;
  std::optional<std::string> grid;
  double sigma2 = 1.0;
  std::string out_path;
  unsigned threads = 0;
};

int cmd_calibrate(const CalibrateOptions& o, Context& ctx) {
  const std::string started = utc_now();
  const SamplerMode mode = parse_sampler_mode(o.mode);
  const std::vector<double> grid = o.grid ? parse_list_or_range(*o.grid, "grid") : default_f_grid();
  const MonteCarloTable table = calibrate_monte_carlo(mode, o.sigma2, grid, o.steps, o.seed, o.threads);

  fs::path path;
  if (o.out_path.empty()) {
    path = ensure_dir(default_out_dir()) / ("calibration_" + std::string(to_string(mode)) + ".csv");
  } else {
    path = o.out_path;
    if (path.has_parent_path()) ensure_dir(path.parent_path().string());
  }
  write_table(path, csv::to_table(table));

  RunManifest m;
  m.command = ctx.command;
  m.config = {{"mode", to_string(mode)}, {"steps", o.steps}, {"seed", o.seed}, {"grid", grid},
              {"sigma2", o.sigma2},      {"out", path.string()}, {"threads", o.threads}};
  m.seed = o.seed;
  m.outputs.push_back({path, sha256_file(path)});
  m.started_at = started;
  m.finished_at = utc_now();
  m.write(manifest_path_for(path));
  ctx.out << "wrote " << path.string() << " (" << table.rows().size() << " rows)\n";
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Correlated field-measurement sampler and kernel verification"};
  app.name(args.empty() ? "qfluct" : fs::path(args[0]).filename().string());
  app.set_config("--config", "", "INI/TOML file with option defaults (flags override it)");
  app.require_subcommand(1);

  std::function<int(Context&)> action;

  auto* kernel_cmd = app.add_subcommand("kernel", "Correlation kernels");
  kernel_cmd->require_subcommand(1);
  KernelEvalOptions ko;
  auto* eval_cmd = kernel_cmd->add_subcommand("eval", "Evaluate a kernel on a t0 grid");
  eval_cmd->add_option("--kernel", ko.kernel, "scalar | em | squeezed")->capture_default_str();
  eval_cmd->add_option("--k", ko.k, "wavenumber of the squeezed kernel")->capture_default_str();
  eval_cmd->add_option("--t0", ko.t0, "value or start:stop:count")->capture_default_str();
  eval_cmd->add_option("--out", ko.out_path, "CSV path (default: standard output)");
  eval_cmd->callback([&] { action = [&](Context& c) { return cmd_kernel_eval(ko, c); }; });

  SweepOptions so;
  auto* sweep_cmd = app.add_subcommand("sweep", "Simulated lag-1 correlation against the analytic kernel");
  sweep_cmd->add_option("--kernel", so.kernel, "scalar | em | squeezed")->capture_default_str();
  sweep_cmd->add_option("--method", so.method, "tanfit | exact | table")->capture_default_str();
  sweep_cmd->add_option("--mode", so.mode, "pair | chain-raw | chain-normalized")->capture_default_str();
  sweep_cmd->add_option("--table", so.table, "calibration CSV for --method table");
  sweep_cmd->add_option("--table-sigma2", so.table_sigma2, "base variance of the calibration table")
      ->capture_default_str();
  sweep_cmd->add_option("--k", so.k, "wavenumber of the squeezed kernel")->capture_default_str();
  sweep_cmd->add_option("--points", so.points, "grid points")->capture_default_str();
  sweep_cmd->add_option("--steps", so.steps, "sampler steps per point")->capture_default_str();
  sweep_cmd->add_option("--t0-max", so.t0_max, "largest separation")->capture_default_str();
  sweep_cmd->add_option("--seed", so.seed, "master seed")->capture_default_str();
  sweep_cmd->add_option("--out-dir", so.out_dir, std::string("output directory (default: $") + kOutputDirEnv + " or .)");
  sweep_cmd->add_option("--name", so.out_name, "output file stem");
  sweep_cmd->add_option("--threads", so.threads, "worker cap, 0 = all cores")->capture_default_str();
  sweep_cmd->callback([&] { action = [&](Context& c) { return cmd_sweep(so, c); }; });

  VerifyOptions vo;
  auto* verify_cmd = app.add_subcommand("verify-quadrature", "Check the smeared double integral against its closed form");
  verify_cmd->add_option("--t0", vo.t0, "comma list or start:stop:count")->capture_default_str();
  verify_cmd->add_option("--alpha", vo.alpha, "comma list of log scales")->capture_default_str();
  verify_cmd->add_option("--tol", vo.tol, "absolute tolerance")->capture_default_str();
  verify_cmd->add_option("--T", vo.T, "half-width of the integration box")->capture_default_str();
  verify_cmd->add_option("--out", vo.out_path, "CSV path (default: standard output)");
  verify_cmd->add_option("--threads", vo.threads, "worker cap, 0 = all cores")->capture_default_str();
  verify_cmd->callback([&] { action = [&](Context& c) { return cmd_verify(vo, c); }; });

  WalkOptions wo;
  auto* walk_cmd = app.add_subcommand("walk", "Random walks driven by the correlated sampler");
  walk_cmd->add_option("--f", wo.f, "comma list of shift factors")->capture_default_str();
  walk_cmd->add_option("--steps", wo.steps, "steps per walker")->capture_default_str();
  walk_cmd->add_option("--walkers", wo.walkers, "ensemble size")->capture_default_str();
  walk_cmd->add_option("--seed", wo.seed, "master seed")->capture_default_str();
  walk_cmd->add_option("--mode", wo.mode, "pair | chain-raw | chain-normalized")->capture_default_str();
  walk_cmd->add_option("--sigma2", wo.sigma2, "base variance")->capture_default_str();
  walk_cmd->add_flag("--fit", wo.fit, "print fitted growth coefficients and ratios");
  walk_cmd->add_option("--fit-window", wo.fit_window, "first:last (default 1:min(100, steps))");
  walk_cmd->add_option("--out-dir", wo.out_dir, std::string("output directory (default: $") + kOutputDirEnv + " or .)");
  walk_cmd->add_option("--threads", wo.threads, "worker cap, 0 = all cores")->capture_default_str();
  walk_cmd->callback([&] { action = [&](Context& c) { return cmd_walk(wo, c); }; });

  CalibrateOptions co;
  auto* cal_cmd = app.add_subcommand("calibrate", "Tabulate simulated lag-1 covariance against f");
  cal_cmd->add_option("--mode", co.mode, "pair | chain-raw | chain-normalized")->capture_default_str();
  cal_cmd->add_option("--steps", co.steps, "sampler steps per grid point")->capture_default_str();
  cal_cmd->add_option("--seed", co.seed, "master seed")->capture_default_str();
  cal_cmd->add_option("--grid,--f-grid", co.grid, "comma list or start:stop:count (default -0.98:0.98:41)");
  cal_cmd->add_option("--sigma2", co.sigma2, "base variance")->capture_default_str();
  cal_cmd->add_option("--out", co.out_path, std::string("CSV path (default: $") + kOutputDirEnv + "/calibration_<mode>.csv)");
  cal_cmd->add_option("--threads", co.threads, "worker cap, 0 = all cores")->capture_default_str();
  cal_cmd->callback([&] { action = [&](Context& c) { return cmd_calibrate(co, c); }; });

  std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  Context ctx{join_args(args), out, err};
  try {
    return action(ctx);
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const PreconditionError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const NonStationaryError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

}  // namespace qfluct::cli
