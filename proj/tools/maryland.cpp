// Command line front end: reads a YAML run configuration and writes CSV / JSON
// tables for bands, Dirichlet points, rotation numbers, eigenvalues and the
// truncation oracles.
//
// Exit codes: 0 ok, 2 configuration or usage error, 3 numeric failure,
// 4 domain violation (gap, Dirichlet point, arithmetic clash, monotonicity).

#include <CLI11.hpp>
#include <yaml-cpp/yaml.h>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "maryland/io/config.hpp"
#include "maryland/io/report.hpp"
#include "maryland/maryland.hpp"

namespace fs = std::filesystem;
using namespace maryland;
using namespace maryland::io;

namespace {

enum Exit { kOk = 0, kConfig = 2, kNumeric = 3, kDomain = 4 };

struct Options {
  std::string config_path;
  std::optional<double> lambda_min;
  std::optional<double> lambda_max;
  int steps = 0;
  double lambda = 0.0;
  int box = 20;
  std::optional<int> threads;
  std::optional<std::string> out_dir;
};

struct Context {
  RunConfig config;
  Potential q = Potential::zero();
  fs::path out;
  double lo = 0.0;
  double hi = 0.0;
};

Context prepare(const Options& opt) {
  Context ctx;
  ctx.config = load_config_file(opt.config_path);
  if (opt.threads) {
    if (*opt.threads < 1) throw ConfigError("--threads must be at least 1");
    ctx.config.numerics.threads = *opt.threads;
  }
  ctx.q = ctx.config.potential.build();
  ctx.lo = opt.lambda_min.value_or(ctx.config.numerics.window_min);
  ctx.hi = opt.lambda_max.value_or(ctx.config.numerics.window_max);
  if (!(ctx.lo < ctx.hi)) throw ConfigError("--min must be smaller than --max");
  ctx.out = opt.out_dir ? fs::path(*opt.out_dir) : fs::path(ctx.config.output.directory);
  fs::create_directories(ctx.out);
  return ctx;
}

void emit_csv(const Context& ctx, const char* name, const Table& table) {
  if (ctx.config.output.wants("csv")) write_table(ctx.out / name, table);
}

void emit_json(const Context& ctx, const char* name, const nlohmann::ordered_json& j) {
  if (ctx.config.output.wants("json")) write_text(ctx.out / name, j.dump(2) + "\n");
}

int cmd_bands(const Options& opt) {
  const Context ctx = prepare(opt);
  const Numerics& n = ctx.config.numerics;
  const BandList bands = hill_bands(ctx.q, ctx.lo, ctx.hi, n.scan_step, n.root_tol);
  emit_csv(ctx, "bands.csv", bands_table(bands));
  emit_csv(ctx, "eta_curve.csv", eta_table(eta_curve(ctx.q, ctx.lo, ctx.hi, opt.steps > 0 ? opt.steps : 1000)));
  std::printf("bands: %zu in [%s, %s]\n", bands.size(), format_double(ctx.lo).c_str(),
              format_double(ctx.hi).c_str());
  return kOk;
}

int cmd_dirichlet(const Options& opt) {
  const Context ctx = prepare(opt);
  const Numerics& n = ctx.config.numerics;
  const auto points = dirichlet_points(ctx.q, ctx.lo, ctx.hi, n.root_tol, n.scan_step);
  emit_csv(ctx, "dirichlet.csv", dirichlet_table(points));
  std::printf("dirichlet points: %zu\n", points.size());
  return kOk;
}

int cmd_sigma(const Options& opt) {
  const Context ctx = prepare(opt);
  const Numerics& n = ctx.config.numerics;
  const ModelParams primed = primed_params(ctx.config.model);
  const auto curve = sigma_curve(primed, ctx.q, ctx.lo, ctx.hi, opt.steps > 0 ? opt.steps : 50,
                                 n.surface_grid(primed.d2), n.green_grid(primed.d1));
  emit_csv(ctx, "sigma.csv", sigma_csv(curve));
  std::printf("sigma: %zu samples, range [%s, %s] rad\n", curve.size(), format_double(curve.front().sigma).c_str(),
              format_double(curve.back().sigma).c_str());
  return kOk;
}

int cmd_eigenvalues(const Options& opt) {
  const Context ctx = prepare(opt);
  const Numerics& n = ctx.config.numerics;
  const SpectralReport r = spectral_report(ctx.config.model, ctx.q, ctx.lo, ctx.hi, n.M_max, n);
  const auto missing = unsolved_targets(r);
  emit_csv(ctx, "eigenvalues.csv", eigenvalue_table(ctx.config.model.d2, n.box_sizes, r.eigenvalues, missing));
  std::printf("eigenvalues: %zu solved, %zu targets without root\n", r.eigenvalues.size(), missing.size());
  return kOk;
}

int cmd_oracle(const Options& opt) {
  const Context ctx = prepare(opt);
  const Numerics& n = ctx.config.numerics;
  const ModelParams& p = ctx.config.model;
  if (opt.box < 0) throw ConfigError("--box must be non-negative");

  const double full = truncated_full_matrix(p, ctx.q, opt.lambda, opt.box);
  nlohmann::ordered_json j = {{"lambda", opt.lambda}, {"box", opt.box}, {"dimension", p.dimension()},
                              {"full_smallest_singular_value", full}};
  std::string surface_text = "n/a";
  if (std::abs(discriminant(ctx.q, opt.lambda)) > 2.0) {
    const double s = truncated_surface_matrix(p, ctx.q, opt.lambda, opt.box, n.surface_grid(p.d2),
                                              n.green_grid(p.d1))
                         .smallest_abs_eigenvalue;
    j["surface_smallest_abs_eigenvalue"] = s;
    surface_text = format_double(s);
  } else {
    j["surface_smallest_abs_eigenvalue"] = nullptr;
    j["surface_note"] = "lambda lies in a band; the surface oracle is defined in gaps only";
  }
  emit_json(ctx, "oracle.json", j);
  std::printf("lambda=%s box=%d full_smallest_singular=%s surface_smallest_abs_eig=%s\n",
              format_double(opt.lambda).c_str(), opt.box, format_double(full).c_str(), surface_text.c_str());
  return kOk;
}

int cmd_report(const Options& opt) {
  const Context ctx = prepare(opt);
  const ReportBundle bundle = build_report(ctx.config);
  const SpectralReport& r = bundle.report;
  const Numerics& n = ctx.config.numerics;
  emit_json(ctx, "report.json", report_json(ctx.config, bundle));
  emit_csv(ctx, "bands.csv", bands_table(r.bands));
  emit_csv(ctx, "eta_curve.csv", eta_table(bundle.eta));
  emit_csv(ctx, "dirichlet.csv", dirichlet_table(r.dirichlet));
  emit_csv(ctx, "sigma.csv", sigma_csv(bundle.sigma));
  emit_csv(ctx, "eigenvalues.csv", eigenvalue_table(ctx.config.model.d2, n.box_sizes, r.eigenvalues));
  std::printf("report: %zu bands, %zu gap intervals, %zu eigenvalues -> %s\n", r.bands.size(),
              r.gap_intervals.size(), r.eigenvalues.size(), ctx.out.string().c_str());
  return kOk;
}

const char* kNumericsHelp =
    "Config file (YAML): sections model {d1, d2, g, omega[], phi (turns)}, potential {kind: zero |\n"
    "constant (value) | piecewise (breakpoints, values)}, numerics, output {directory, formats: [csv, json]}.\n"
    "Numerics defaults: ode_tol 1e-12, quad_points_per_axis 512, green_points_per_axis 0 (512 for d1<=2,\n"
    "128 for d1=3), bisect_tol 1e-12, box_sizes [32, 64, 128], M_max 8, M_check 200, beta 1,\n"
    "scan_step 0.01, root_tol 1e-12, edge_margin 0.05, window [-5, 12], threads 1.\n"
    "sigma columns are in radians. Exit codes: 0 ok, 2 config, 3 numeric, 4 domain violation.";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bands, gaps and eigenvalues of a lattice graph with a tangent-type vertex coupling"};
  app.footer(kNumericsHelp);
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", opt.config_path, "YAML run configuration")->required();
    sub->add_option("--threads", opt.threads, "worker threads (overrides numerics.threads)");
    sub->add_option("--out", opt.out_dir, "output directory (overrides output.directory)");
  };
  auto add_window = [&](CLI::App* sub) {
    sub->add_option("--min", opt.lambda_min, "lower end of the lambda window (default numerics.window)");
    sub->add_option("--max", opt.lambda_max, "upper end of the lambda window (default numerics.window)");
  };

  auto* bands = app.add_subcommand("bands", "band edges of the Hill discriminant: bands.csv, eta_curve.csv");
  add_common(bands);
  add_window(bands);
  bands->add_option("--steps", opt.steps, "eta curve intervals (default 1000)");

  auto* dirichlet = app.add_subcommand("dirichlet", "zeros of s(1; lambda): dirichlet.csv");
  add_common(dirichlet);
  add_window(dirichlet);

  auto* sig = app.add_subcommand("sigma", "rotation number on an interval inside a gap: sigma.csv");
  add_common(sig);
  add_window(sig);
  sig->add_option("--steps", opt.steps, "number of samples (default 50)");

  auto* eig = app.add_subcommand("eigenvalues", "eigenvalues labelled by |m| <= M_max: eigenvalues.csv");
  add_common(eig);
  add_window(eig);

  auto* oracle = app.add_subcommand("oracle", "truncation oracles at one lambda: oracle.json");
  add_common(oracle);
  oracle->add_option("--lambda", opt.lambda, "spectral parameter")->required();
  oracle->add_option("--box", opt.box, "box half-width L (default 20)");

  auto* report = app.add_subcommand("report", "full spectral report: report.json and all CSVs");
  add_common(report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (bands->parsed()) return cmd_bands(opt);
    if (dirichlet->parsed()) return cmd_dirichlet(opt);
    if (sig->parsed()) return cmd_sigma(opt);
    if (eig->parsed()) return cmd_eigenvalues(opt);
    if (oracle->parsed()) return cmd_oracle(opt);
    if (report->parsed()) return cmd_report(opt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const ArithmeticClash& e) {
    std::cerr << "ArithmeticClash: " << e.what() << "\n";
    return kDomain;
  } catch (const DomainError& e) {
    std::cerr << "domain violation: " << e.what() << "\n";
    return kDomain;
  } catch (const Error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "output error: " << e.what() << "\n";
    return kNumeric;
  } catch (const YAML::Exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  }
  return kConfig;
}
