#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "maryland/hill.hpp"
#include "maryland/io/config.hpp"
#include "maryland/spectrum.hpp"
#include "maryland/surface_weyl.hpp"

namespace maryland::io {

/// Shortest decimal that parses back to exactly `x`.
inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

/// A CSV table held in memory: header plus rows of already formatted cells.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string str() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
      }
      out += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
  }
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

inline void write_table(const std::filesystem::path& path, const Table& table) { write_text(path, table.str()); }

inline Table bands_table(const BandList& bands) {
  Table t{{"band_index", "lambda_lo", "lambda_hi"}, {}};
  for (std::size_t i = 0; i < bands.size(); ++i)
    t.rows.push_back({std::to_string(i), format_double(bands[i].lo), format_double(bands[i].hi)});
  return t;
}

struct CurvePoint {
  double lambda;
  double value;
};

/// eta on `steps` + 1 equally spaced points of [lo, hi].
inline std::vector<CurvePoint> eta_curve(const Potential& q, double lo, double hi, int steps) {
  if (steps < 1) throw DomainError("eta_curve: steps must be positive");
  std::vector<CurvePoint> curve;
  for (int i = 0; i <= steps; ++i) {
    const double x = i == steps ? hi : lo + (hi - lo) * i / steps;
    curve.push_back({x, discriminant(q, x)});
  }
  return curve;
}

inline Table eta_table(const std::vector<CurvePoint>& curve) {
  Table t{{"lambda", "eta"}, {}};
  for (const auto& p : curve) t.rows.push_back({format_double(p.lambda), format_double(p.value)});
  return t;
}

inline Table dirichlet_table(const std::vector<double>& points) {
  Table t{{"index", "lambda"}, {}};
  for (std::size_t i = 0; i < points.size(); ++i) t.rows.push_back({std::to_string(i), format_double(points[i])});
  return t;
}

struct SigmaSample {
  double lambda;
  double sigma;
  double sigma_prime_fd;
};

/// sigma_table plus a finite-difference derivative (central inside, one-sided
/// at the ends).
inline std::vector<SigmaSample> sigma_curve(const ModelParams& primed, const Potential& q, double a, double b,
                                            int samples, const TorusGrid& grid,
                                            std::optional<TorusGrid> green_grid = std::nullopt) {
  const SigmaTable table = sigma_table(primed, q, a, b, samples, grid, green_grid);
  const auto& x = table.lambda;
  const auto& s = table.sigma;
  std::vector<SigmaSample> out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::size_t l = i == 0 ? 0 : i - 1;
    const std::size_t r = i + 1 == x.size() ? i : i + 1;
    out.push_back({x[i], s[i], (s[r] - s[l]) / (x[r] - x[l])});
  }
  return out;
}

inline Table sigma_csv(const std::vector<SigmaSample>& curve) {
  Table t{{"lambda", "sigma", "sigma_prime_fd"}, {}};
  for (const auto& p : curve)
    t.rows.push_back({format_double(p.lambda), format_double(p.sigma), format_double(p.sigma_prime_fd)});
  return t;
}

/// One row per solved eigenvalue; with `unsolved`, additional no_root rows for
/// the listed targets (lambda, residual and oracle cells left empty).
inline Table eigenvalue_table(int d2, const std::vector<int>& boxes, const std::vector<EigenvalueRecord>& records,
                              const std::vector<Target>& unsolved = {}) {
  Table t;
  for (int i = 1; i <= d2; ++i) t.header.push_back("m_" + std::to_string(i));
  for (const char* h : {"target_phase", "lambda", "residual", "status"}) t.header.emplace_back(h);
  for (int L : boxes) t.header.push_back("oracle_gap_L" + std::to_string(L));

  for (const auto& rec : records) {
    std::vector<std::string> row;
    for (int v : rec.m) row.push_back(std::to_string(v));
    row.push_back(format_double(rec.target_phase));
    row.push_back(format_double(rec.lambda));
    row.push_back(format_double(rec.residual));
    row.emplace_back("ok");
    for (int L : boxes) {
      std::string cell;
      for (const auto& g : rec.oracle_gaps)
        if (g.box == L) cell = format_double(g.value);
      row.push_back(cell);
    }
    t.rows.push_back(std::move(row));
  }
  for (const auto& target : unsolved) {
    std::vector<std::string> row;
    for (int v : target.m) row.push_back(std::to_string(v));
    row.push_back(format_double(target.phase));
    row.emplace_back();
    row.emplace_back();
    row.emplace_back("no_root");
    for (std::size_t i = 0; i < boxes.size(); ++i) row.emplace_back();
    t.rows.push_back(std::move(row));
  }
  return t;
}

/// Targets that produced no eigenvalue anywhere in the report window.
inline std::vector<Target> unsolved_targets(const SpectralReport& report) {
  std::vector<Target> out;
  for (const auto& target : report.targets) {
    const bool hit = std::any_of(report.eigenvalues.begin(), report.eigenvalues.end(),
                                 [&](const EigenvalueRecord& r) { return r.m == target.m; });
    if (!hit) out.push_back(target);
  }
  return out;
}

inline constexpr int kReportEtaSteps = 1000;
inline constexpr int kReportSigmaSamples = 64;

/// Report plus the curves that accompany it in the output directory.
struct ReportBundle {
  SpectralReport report;
  std::vector<CurvePoint> eta;
  std::vector<SigmaSample> sigma;
};

inline ReportBundle build_report(const RunConfig& config) {
  const Potential q = config.potential.build();
  const Numerics& n = config.numerics;
  ReportBundle b;
  b.report = spectral_report(config.model, q, n.window_min, n.window_max, n.M_max, n);
  b.eta = eta_curve(q, n.window_min, n.window_max, kReportEtaSteps);
  const TorusGrid grid = n.surface_grid(config.model.d2);
  for (const Band& gap : b.report.gap_intervals) {
    const auto part = in_context("sigma curve", [&] {
      return sigma_curve(b.report.primed, q, gap.lo, gap.hi, kReportSigmaSamples, grid,
                         n.green_grid(config.model.d1));
    });
    b.sigma.insert(b.sigma.end(), part.begin(), part.end());
  }
  return b;
}

inline nlohmann::ordered_json intervals_json(const BandList& list) {
  auto arr = nlohmann::ordered_json::array();
  for (const Band& b : list) arr.push_back({{"lo", b.lo}, {"hi", b.hi}});
  return arr;
}

inline nlohmann::ordered_json report_json(const RunConfig& config, const ReportBundle& bundle) {
  using nlohmann::ordered_json;
  const SpectralReport& r = bundle.report;
  ordered_json j;
  j["config"] = to_json(config);
  j["window"] = {r.lambda_min, r.lambda_max};
  j["normalized_model"] = {{"g", r.primed.g}, {"omega", r.primed.omega}, {"phi", r.primed.phi}};
  j["bands"] = intervals_json(r.bands);
  j["dirichlet"] = r.dirichlet;
  j["gap_intervals"] = intervals_json(r.gap_intervals);
  j["target_count"] = r.targets.size();

  auto eig = ordered_json::array();
  for (const auto& rec : r.eigenvalues) {
    auto gaps = ordered_json::array();
    for (const auto& g : rec.oracle_gaps) gaps.push_back({{"box", g.box}, {"value", g.value}});
    eig.push_back({{"m", rec.m},
                   {"target_phase", rec.target_phase},
                   {"lambda", rec.lambda},
                   {"residual", rec.residual},
                   {"oracle_gaps", gaps}});
  }
  j["eigenvalues"] = eig;

  auto eta = ordered_json::array();
  for (const auto& p : bundle.eta) eta.push_back({{"lambda", p.lambda}, {"eta", p.value}});
  j["eta_curve"] = eta;
  auto sig = ordered_json::array();
  for (const auto& p : bundle.sigma)
    sig.push_back({{"lambda", p.lambda}, {"sigma", p.sigma}, {"sigma_prime_fd", p.sigma_prime_fd}});
  j["sigma_curve"] = sig;
  return j;
}

/// Structural check of a parsed report.json; the embedded config must load
/// back as a RunConfig. Returns that config.
inline RunConfig validate_report_json(const nlohmann::json& j) {
  for (const char* key : {"config", "window", "normalized_model", "bands", "dirichlet", "gap_intervals",
                          "target_count", "eigenvalues", "eta_curve", "sigma_curve"})
    if (!j.contains(key)) throw ConfigError(std::string("report: missing key '") + key + "'");
  for (const char* key : {"bands", "dirichlet", "gap_intervals", "eigenvalues", "eta_curve", "sigma_curve"})
    if (!j[key].is_array()) throw ConfigError(std::string("report: '") + key + "' must be an array");
  for (const auto& e : j["eigenvalues"])
    for (const char* key : {"m", "target_phase", "lambda", "residual", "oracle_gaps"})
      if (!e.contains(key)) throw ConfigError(std::string("report: eigenvalue entry lacks '") + key + "'");
  return load_config_string(j["config"].dump());
}

}  // namespace maryland::io
