// SPDX-License-Identifier: MIT
#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wba/diophantine.hpp"
#include "wba/fourier.hpp"
#include "wba/io.hpp"
#include "wba/periodic.hpp"
#include "wba/ratefit.hpp"
#include "wba/stochastic.hpp"

namespace wba::cli {
namespace {

using nlohmann::json;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string::size_type start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(text.substr(start));
      return out;
    }
    out.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse number '" + text + "'");
  }
  if (used != text.size())
    throw std::invalid_argument("cannot parse number '" + text + "'");
  return v;
}

std::int64_t parse_int(const std::string& text) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse integer '" + text + "'");
  }
  if (used != text.size())
    throw std::invalid_argument("cannot parse integer '" + text + "'");
  return v;
}

// Splits "base,name1=...,name2=..." on the known ",name=" markers only, so
// values are free to contain commas (rho=0.1,0.2).
struct MiniSpec {
  std::string base;
  std::map<std::string, std::string> params;
};

MiniSpec split_markers(const std::string& text,
                       const std::vector<std::string>& names) {
  std::vector<std::pair<std::string::size_type, std::string>> hits;
  for (const auto& name : names) {
    std::string marker = "," + name + "=";
    for (auto pos = text.find(marker); pos != std::string::npos;
         pos = text.find(marker, pos + 1))
      hits.emplace_back(pos, name);
  }
  std::sort(hits.begin(), hits.end());
  MiniSpec out;
  out.base = text.substr(0, hits.empty() ? text.size() : hits[0].first);
  for (std::size_t i = 0; i < hits.size(); ++i) {
    auto value_start = hits[i].first + hits[i].second.size() + 2;
    auto value_end = i + 1 < hits.size() ? hits[i + 1].first : text.size();
    if (out.params.count(hits[i].second))
      throw std::invalid_argument("duplicate parameter '" + hits[i].second +
                                  "' in '" + text + "'");
    out.params[hits[i].second] = text.substr(value_start, value_end - value_start);
  }
  return out;
}

bool file_exists(const std::string& path) {
  std::error_code ec;
  return std::filesystem::exists(path, ec) && !ec;
}

std::string ensure_newline(std::string s) {
  if (s.empty() || s.back() != '\n') s += '\n';
  return s;
}

}  // namespace

WeightSpec parse_weight(const std::string& text) {
  std::string head = text;
  std::string params;
  auto colon = text.find(':');
  if (colon != std::string::npos) {
    head = text.substr(0, colon);
    params = text.substr(colon + 1);
  }
  if (head == "bump") {
    double p = 1.0;
    double q = 1.0;
    if (!params.empty()) {
      for (const auto& item : split(params, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
          throw std::invalid_argument("weight parameter '" + item +
                                      "' is not key=value");
        auto key = item.substr(0, eq);
        double v = parse_number(item.substr(eq + 1));
        if (key == "p")
          p = v;
        else if (key == "q")
          q = v;
        else
          throw std::invalid_argument("unknown bump parameter '" + key + "'");
      }
    }
    return make_weight(WeightKind::BumpPQ, p, q);
  }
  if (colon != std::string::npos)
    throw std::invalid_argument("weight '" + head + "' takes no parameters");
  if (head == "dexp") return make_weight(WeightKind::DoubleExp);
  if (head == "sin2") return make_weight(WeightKind::SineSquared);
  if (head == "uniform") return make_weight(WeightKind::Uniform);
  throw std::invalid_argument("unknown weight '" + head +
                              "' (expected bump | dexp | sin2 | uniform)");
}

std::vector<WeightSpec> parse_weight_list(const std::string& text) {
  std::vector<WeightSpec> out;
  for (const auto& item : split(text, ';')) {
    auto t = trim(item);
    if (t.empty()) continue;
    out.push_back(parse_weight(t));
  }
  if (out.empty()) throw std::invalid_argument("empty weight list");
  return out;
}

std::string weight_tag(const WeightSpec& spec) {
  char buf[64];
  switch (spec.kind) {
    case WeightKind::BumpPQ:
      std::snprintf(buf, sizeof buf, "bump_p%g_q%g", spec.p, spec.q);
      return buf;
    case WeightKind::DoubleExp:
      return "dexp";
    case WeightKind::SineSquared:
      return "sin2";
    case WeightKind::Uniform:
      return "uniform";
    case WeightKind::Custom:
      return "custom";
  }
  return "weight";
}

std::vector<std::int64_t> parse_grid(const std::string& text) {
  auto parts = split(text, ':');
  if (parts.size() < 3 || parts.size() > 4)
    throw std::invalid_argument("grid must be lo:hi:log|lin[:count], got '" +
                                text + "'");
  std::int64_t lo = parse_int(parts[0]);
  std::int64_t hi = parse_int(parts[1]);
  if (lo < 1 || hi < lo)
    throw std::invalid_argument("grid needs 1 <= lo <= hi");
  std::int64_t count = 0;
  if (parts.size() == 4) {
    count = parse_int(parts[3]);
    if (count < 2) throw std::invalid_argument("grid count must be >= 2");
  }
  std::vector<std::int64_t> grid;
  if (parts[2] == "log") {
    if (count == 0) {
      for (std::int64_t n = lo;;) {
        grid.push_back(n);
        if (n > hi / 2) break;
        n *= 2;
      }
    } else {
      double llo = std::log(static_cast<double>(lo));
      double lhi = std::log(static_cast<double>(hi));
      for (std::int64_t i = 0; i < count; ++i) {
        double t = static_cast<double>(i) / static_cast<double>(count - 1);
        auto n = static_cast<std::int64_t>(
            std::llround(std::exp(llo + t * (lhi - llo))));
        grid.push_back(std::clamp(n, lo, hi));
      }
    }
  } else if (parts[2] == "lin") {
    std::int64_t c = count == 0 ? 17 : count;
    for (std::int64_t i = 0; i < c; ++i) {
      double t = static_cast<double>(i) / static_cast<double>(c - 1);
      auto n = lo + static_cast<std::int64_t>(
                        std::llround(t * static_cast<double>(hi - lo)));
      grid.push_back(std::clamp(n, lo, hi));
    }
  } else {
    throw std::invalid_argument("grid mode must be log or lin, got '" +
                                parts[2] + "'");
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

Precision parse_precision(const std::string& text) {
  if (text == "standard") return Precision::Standard;
  if (text == "extended") return Precision::Extended;
  throw std::invalid_argument("precision must be standard or extended, got '" +
                              text + "'");
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_number(item));
  return out;
}

ParsedSignal parse_signal(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("missing --signal");
  std::string head = text;
  std::string rest;
  auto colon = text.find(':');
  if (colon != std::string::npos) {
    head = text.substr(0, colon);
    rest = text.substr(colon + 1);
  }
  ParsedSignal out;
  if (head == "const") {
    double v = parse_number(rest);
    out.signal = make_periodic_signal({v});
    out.reference = {v};
    out.has_reference = true;
    return out;
  }
  if (head == "periodic") {
    auto values = parse_double_list(rest);
    out.signal = make_periodic_signal(values);
    Accumulator mean;
    for (double v : values) mean.add(v);
    out.reference = {mean.value() / static_cast<double>(values.size())};
    out.has_reference = true;
    return out;
  }
  if (head == "fig5") {
    if (colon != std::string::npos)
      throw std::invalid_argument("fig5 takes no parameters");
    out.poly = make_sin_cos_observable();
    out.rho = make_rotation({1.0 / (2.0 * M_PI)});
    out.theta0 = {0.0};
    out.has_rotation = true;
    out.signal = make_orbit_signal(out.poly, out.rho, out.theta0);
    for (const auto& c0 : true_average(out.poly))
      out.reference.push_back(c0.real());
    out.has_reference = true;
    return out;
  }
  if (head == "orbit") {
    auto ms = split_markers(rest, {"rho", "theta0"});
    if (ms.base.empty())
      throw std::invalid_argument("orbit needs a trig-poly JSON file");
    if (!ms.params.count("rho"))
      throw std::invalid_argument("orbit needs rho=...");
    if (!file_exists(ms.base))
      throw std::invalid_argument("cannot open '" + ms.base + "'");
    out.poly = parse_trig_poly_json(read_text_file(ms.base));
    auto rho = parse_double_list(ms.params.at("rho"));
    out.rho = make_rotation(rho);
    out.theta0 = ms.params.count("theta0")
                     ? parse_double_list(ms.params.at("theta0"))
                     : std::vector<double>(rho.size(), 0.0);
    if (out.theta0.size() != rho.size())
      throw std::invalid_argument("theta0 and rho dimensions differ");
    if (out.poly.dimension != static_cast<int>(rho.size()))
      throw std::invalid_argument("trig poly dimension " +
                                  std::to_string(out.poly.dimension) +
                                  " does not match rho dimension " +
                                  std::to_string(rho.size()));
    out.has_rotation = true;
    out.signal = make_orbit_signal(out.poly, out.rho, out.theta0);
    for (const auto& c0 : true_average(out.poly))
      out.reference.push_back(c0.real());
    out.has_reference = true;
    return out;
  }
  if (head == "csv") {
    auto ms = split_markers(rest, {"dim"});
    if (ms.base.empty()) throw std::invalid_argument("csv needs a file path");
    int dim = ms.params.count("dim")
                  ? static_cast<int>(parse_int(ms.params.at("dim")))
                  : 1;
    if (!file_exists(ms.base))
      throw std::invalid_argument("cannot open '" + ms.base + "'");
    auto values = read_recorded_csv(read_text_file(ms.base), dim);
    out.signal = make_recorded_signal(std::move(values), dim);
    return out;
  }
  if (head == "flow") {
    auto ms = split_markers(rest, {"h"});
    double h = ms.params.count("h") ? parse_number(ms.params.at("h")) : 1e-3;
    if (!(h > 0.0)) throw std::invalid_argument("flow step h must be > 0");
    if (ms.base == "cos2pi") {
      FlowSampler flow;
      flow.map = [](double t, double* o) { o[0] = std::cos(2.0 * M_PI * t); };
      flow.value_dim = 1;
      flow.step = h;
      out.signal = make_flow_signal(std::move(flow));
      return out;
    }
    throw std::invalid_argument("unknown flow '" + ms.base +
                                "' (supported: cos2pi)");
  }
  throw std::invalid_argument(
      "unknown signal '" + head +
      "' (expected const | periodic | fig5 | orbit | csv | flow)");
}

std::vector<std::string> load_config_args(const std::string& text) {
  std::vector<std::string> args;
  auto push = [&args](const std::string& key, const std::string& value) {
    if (key.empty())
      throw std::invalid_argument("config entry with empty key");
    if (key == "subcommand" || key == "config") return;
    if (value.empty()) return;
    args.push_back("--" + key + "=" + value);
  };
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const std::exception& e) {
      throw std::invalid_argument(std::string("config JSON: ") + e.what());
    }
    if (!j.is_object())
      throw std::invalid_argument("config JSON must be a flat object");
    for (const auto& [key, v] : j.items()) {
      std::string s;
      if (v.is_string())
        s = v.get<std::string>();
      else if (v.is_boolean())
        s = v.get<bool>() ? "true" : "false";
      else if (v.is_number_integer())
        s = std::to_string(v.get<long long>());
      else if (v.is_number_unsigned())
        s = std::to_string(v.get<unsigned long long>());
      else if (v.is_number_float())
        s = format_double(v.get<double>());
      else
        throw std::invalid_argument("config key '" + key +
                                    "' has a non-scalar value");
      push(key, s);
    }
    return args;
  }
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line '" + t + "' is not key=value");
    push(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return args;
}

std::vector<std::string> preprocess_args(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0)
      path = args[i].substr(9);
  }
  if (path.empty()) return args;
  if (!file_exists(path))
    throw std::invalid_argument("config file '" + path + "' not found");
  auto injected = load_config_args(read_text_file(path));
  // right after the subcommand token, so later (explicit) flags win
  std::size_t pos = args.size();
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (!args[i].empty() && args[i][0] != '-') {
      pos = i + 1;
      break;
    }
  }
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(pos),
              injected.begin(), injected.end());
  return args;
}

namespace {

struct Common {
  std::string signal;
  std::string weight = "bump:p=1,q=1";
  std::string grid;
  std::string precision = "standard";
  std::string out = ".";
  std::string config;
  std::string ref;
  std::int64_t n = 0;
  std::uint64_t seed = 0;
  int threads = 0;
  bool json_summary = false;
};

std::string out_path(const Common& c, const char* name) {
  return (std::filesystem::path(c.out) / name).string();
}

void write_output(const Common& c, const char* name, const std::string& text) {
  std::filesystem::create_directories(c.out);
  write_text_file(out_path(c, name), ensure_newline(text));
}

void write_manifest(const Common& c,
                    const std::map<std::string, std::string>& kv) {
  write_output(c, "manifest.json", json(kv).dump(2));
}

std::map<std::string, std::string> manifest_common(const Common& c,
                                                   const char* name) {
  std::map<std::string, std::string> kv;
  kv["subcommand"] = name;
  if (!c.signal.empty()) kv["signal"] = c.signal;
  kv["weight"] = c.weight;
  if (c.n > 0) kv["N"] = std::to_string(c.n);
  if (!c.grid.empty()) kv["grid"] = c.grid;
  if (!c.ref.empty()) kv["ref"] = c.ref;
  kv["seed"] = std::to_string(c.seed);
  kv["threads"] = std::to_string(c.threads);
  kv["precision"] = c.precision;
  kv["json"] = c.json_summary ? "true" : "false";
  return kv;
}

void emit_summary(const Common& c, const json& j) {
  if (c.json_summary) std::cout << j.dump() << "\n";
}

std::vector<double> reference_for(const Common& c, const ParsedSignal& ps) {
  if (!c.ref.empty()) {
    auto r = parse_double_list(c.ref);
    if (static_cast<int>(r.size()) != ps.signal->value_dim())
      throw std::invalid_argument(
          "--ref needs " + std::to_string(ps.signal->value_dim()) +
          " value(s)");
    return r;
  }
  if (ps.has_reference) return ps.reference;
  throw std::invalid_argument(
      "no exact reference is known for this signal; pass --ref");
}

void run_average(const Common& c) {
  auto ps = parse_signal(c.signal);
  auto spec = parse_weight(c.weight);
  auto prec = parse_precision(c.precision);
  std::vector<std::int64_t> grid;
  if (!c.grid.empty()) grid = parse_grid(c.grid);
  if (c.n <= 0 && grid.empty())
    throw std::invalid_argument("average needs --N or --grid");
  std::int64_t n = c.n > 0 ? c.n : grid.back();
  auto value = weighted_average(*ps.signal, spec, n, prec);
  json vj{{"n", n}, {"value", value}};
  write_output(c, "value.json", vj.dump(2));
  json summary{{"command", "average"}, {"n", n}, {"value", value}};
  if (!grid.empty()) {
    auto curve = error_curve(*ps.signal, spec, grid, reference_for(c, ps),
                             prec, c.threads);
    write_output(c, "errors.csv", error_curve_csv(curve));
    summary["errors"] = "errors.csv";
  }
  write_manifest(c, manifest_common(c, "average"));
  emit_summary(c, summary);
}

void run_converge(const Common& c) {
  auto ps = parse_signal(c.signal);
  auto weights = parse_weight_list(c.weight);
  auto prec = parse_precision(c.precision);
  if (c.grid.empty()) throw std::invalid_argument("converge needs --grid");
  auto grid = parse_grid(c.grid);
  auto reference = reference_for(c, ps);
  std::string csv = "N";
  std::vector<ErrorCurve> curves;
  json fits = json::array();
  for (const auto& spec : weights) {
    curves.push_back(
        error_curve(*ps.signal, spec, grid, reference, prec, c.threads));
    auto fit = fit_rate(curves.back(), spec);
    auto fj = json::parse(rate_fit_json(fit));
    fj["weight"] = weight_tag(spec);
    fits.push_back(fj);
    csv += "," + weight_tag(spec);
  }
  csv += "\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv += std::to_string(grid[i]);
    for (const auto& curve : curves)
      csv += "," + format_double(curve.errors[i]);
    csv += "\n";
  }
  write_output(c, "errors.csv", csv);
  write_output(c, "fits.json", json{{"fits", fits}}.dump(2));
  write_manifest(c, manifest_common(c, "converge"));
  emit_summary(c, json{{"command", "converge"}, {"fits", fits}});
}

struct FourierOpts {
  std::string rho;
  std::string theta0;
  int order = 3;
  double zeta = 0.0;
};

void run_fourier(const Common& c, const FourierOpts& f) {
  auto ps = parse_signal(c.signal);
  auto spec = parse_weight(c.weight);
  auto prec = parse_precision(c.precision);
  if (c.n <= 0) throw std::invalid_argument("fourier needs --N");
  Rotation rho;
  std::vector<double> theta0;
  if (!f.rho.empty()) {
    rho = make_rotation(parse_double_list(f.rho));
    theta0 = f.theta0.empty()
                 ? std::vector<double>(rho.components.size(), 0.0)
                 : parse_double_list(f.theta0);
  } else if (ps.has_rotation) {
    rho = ps.rho;
    theta0 = ps.theta0;
  } else {
    throw std::invalid_argument("this signal carries no rotation; pass --rho");
  }
  if (theta0.size() != rho.components.size())
    throw std::invalid_argument("theta0 and rho dimensions differ");
  if (ps.signal->max_len() < c.n)
    throw std::invalid_argument("signal provides only " +
                                std::to_string(ps.signal->max_len()) +
                                " samples");
  FourierRequest req;
  req.point_dim = ps.signal->value_dim();
  req.rho = rho;
  req.theta0 = theta0;
  req.spec = spec;
  req.orbit.resize(static_cast<std::size_t>(c.n) * req.point_dim);
  for (std::int64_t i = 0; i < c.n; ++i)
    ps.signal->sample(i, req.orbit.data() + i * req.point_dim);
  auto res = fourier_spectrum(req, f.order, prec, c.threads, f.zeta);
  write_output(c, "fourier.csv", fourier_csv(res));
  json fj{{"n", res.n_used},
          {"budget", res.budget},
          {"zeta", res.zeta_used},
          {"modes", res.modes.size()},
          {"reconstruction_residual", res.reconstruction_residual}};
  write_output(c, "fourier.json", fj.dump(2));
  auto kv = manifest_common(c, "fourier");
  kv["order"] = std::to_string(f.order);
  kv["zeta"] = format_double(f.zeta);
  if (!f.rho.empty()) kv["rho"] = f.rho;
  if (!f.theta0.empty()) kv["theta0"] = f.theta0;
  write_manifest(c, kv);
  fj["command"] = "fourier";
  emit_summary(c, fj);
}

void run_periodic(const Common& c) {
  const std::string prefix = "periodic:";
  if (c.signal.rfind(prefix, 0) != 0)
    throw std::invalid_argument(
        "the periodic subcommand needs a periodic:v1,v2,... signal");
  auto values = parse_double_list(c.signal.substr(prefix.size()));
  auto spec = parse_weight(c.weight);
  auto prec = parse_precision(c.precision);
  auto grid = parse_grid(c.grid.empty() ? "8:2048:log" : c.grid);
  auto res = periodic_weighted_error(values, spec, grid, prec);
  write_output(c, "interp.json", trig_interp_json(res.interp));
  write_output(c, "errors.csv", error_curve_csv(res.curve));
  write_output(c, "fit.json", rate_fit_json(res.fit));
  write_manifest(c, manifest_common(c, "periodic"));
  emit_summary(c, json{{"command", "periodic"},
                       {"period", values.size()},
                       {"fit", json::parse(rate_fit_json(res.fit))}});
}

void run_classify(const Common& c) {
  auto ps = parse_signal(c.signal);
  auto spec = parse_weight(c.weight);
  // regular proxies sink below the precision floor early, so the default
  // grid leans on small N to leave the fit enough live points
  auto grid = parse_grid(c.grid.empty() ? "8:32768:log" : c.grid);
  auto res = classify_orbit(*ps.signal, spec, grid);
  const char* verdict = res.verdict == OrbitClass::Regular    ? "regular"
                        : res.verdict == OrbitClass::Chaotic ? "chaotic"
                                                             : "indeterminate";
  json cj{{"verdict", verdict},
          {"evidence", json::parse(rate_fit_json(res.evidence))}};
  write_output(c, "classify.json", cj.dump(2));
  write_output(c, "proxy.csv", error_curve_csv(res.proxy));
  write_manifest(c, manifest_common(c, "classify"));
  cj["command"] = "classify";
  emit_summary(c, cj);
}

struct ScanOpts {
  std::string rho;
  int kmax = 1000;
  int depth = 40;
};

void run_scan(const Common& c, const ScanOpts& s) {
  if (s.rho.empty()) throw std::invalid_argument("scan needs --rho");
  auto rot = make_rotation(parse_double_list(s.rho));
  auto scan = small_divisor_scan(rot, s.kmax);
  json components = json::array();
  for (double x : rot.components) {
    json entry{{"value", x}};
    if (x > 0.0 && x < 1.0) {
      auto cf = continued_fraction(x, s.depth);
      entry["quotients"] = cf.quotients;
      entry["exact"] = cf.exact;
    } else {
      entry["quotients"] = json::array();
      entry["exact"] = true;
    }
    components.push_back(entry);
  }
  write_output(c, "scan.csv", scan_csv(scan));
  write_output(c, "scan.json", scan_summary_json(scan));
  write_output(c, "cf.json", json{{"components", components}}.dump(2));
  auto kv = manifest_common(c, "scan");
  kv["rho"] = s.rho;
  kv["kmax"] = std::to_string(s.kmax);
  kv["depth"] = std::to_string(s.depth);
  write_manifest(c, kv);
  emit_summary(c, json{{"command", "scan"},
                       {"gamma", scan.gamma},
                       {"tau", scan.tau},
                       {"resonant", scan.resonant}});
}

struct CltOpts {
  std::string dist = "gauss";
  std::int64_t trials = 100000;
  double mu = 2.0;
  bool slln = false;
};

void run_clt(const Common& c, const CltOpts& o) {
  auto spec = parse_weight(c.weight);
  std::vector<std::int64_t> grid;
  if (!c.grid.empty())
    grid = parse_grid(c.grid);
  else if (c.n > 0)
    grid = {c.n};
  else
    throw std::invalid_argument("clt needs --N or --grid");
  WeightedSumSampler sampler;
  sampler.spec = spec;
  sampler.seed = c.seed;
  if (o.dist == "gauss") {
    sampler.distribution = Distribution::StdGaussian;
  } else if (o.dist == "uniformsym") {
    sampler.distribution = Distribution::UniformSym;
  } else if (o.dist == "rademacher") {
    sampler.distribution = Distribution::Rademacher;
  } else if (o.dist.rfind("student:", 0) == 0) {
    sampler.distribution = Distribution::StudentT;
    sampler.student_df = static_cast<int>(parse_int(o.dist.substr(8)));
  } else {
    throw std::invalid_argument(
        "unknown distribution '" + o.dist +
        "' (expected gauss | uniformsym | rademacher | student:df)");
  }
  auto kv = manifest_common(c, "clt");
  kv["dist"] = o.dist;
  json summary{{"command", "clt"}};
  if (o.slln) {
    sampler.n_terms = grid.back();
    auto traj = weighted_slln_trajectory(sampler, o.mu, grid);
    std::string csv = "N,scaled,single_log_scaled\n";
    for (const auto& pt : traj) {
      csv += std::to_string(pt.n) + "," + format_double(pt.scaled) + "," +
             format_double(pt.single_log_scaled) + "\n";
    }
    write_output(c, "slln.csv", csv);
    kv["mu"] = format_double(o.mu);
    kv["slln"] = "true";
    summary["rows"] = traj.size();
  } else {
    std::vector<CltExperimentRow> rows;
    json jrows = json::array();
    for (std::int64_t n : grid) {
      sampler.n_terms = n;
      auto r = weighted_clt_distance(sampler, o.trials, c.threads);
      rows.push_back({n, r.distance, r.dkw_bound, o.trials, c.seed});
      jrows.push_back(json{{"n", n},
                           {"distance", r.distance},
                           {"dkw_bound", r.dkw_bound},
                           {"outside_hypothesis", r.outside_hypothesis}});
    }
    write_output(c, "clt.csv", clt_csv(rows));
    kv["trials"] = std::to_string(o.trials);
    summary["rows"] = jrows;
  }
  write_manifest(c, kv);
  emit_summary(c, summary);
}

}  // namespace

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  try {
    args = preprocess_args(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::vector<const char*> cargs;
  cargs.reserve(args.size());
  for (const auto& a : args) cargs.push_back(a.c_str());

  CLI::App app{"weighted Birkhoff averaging toolkit"};
  app.require_subcommand(1);

  Common c;
  FourierOpts fo;
  ScanOpts so;
  CltOpts co;

  auto last = [](CLI::Option* o) {
    return o->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  };
  auto add_common = [&](CLI::App* sub, bool with_signal, bool with_ref) {
    if (with_signal)
      last(sub->add_option("--signal", c.signal,
                           "const:c | periodic:v1,v2,... | fig5 | "
                           "orbit:file.json,rho=... | csv:file.csv | "
                           "flow:cos2pi,h=..."));
    last(sub->add_option("--weight", c.weight,
                         "bump:p=1,q=2 | dexp | sin2 | uniform"));
    last(sub->add_option("--N", c.n, "sample count"));
    last(sub->add_option("--grid", c.grid, "N grid lo:hi:log|lin[:count]"));
    last(sub->add_option("--seed", c.seed, "RNG seed"));
    last(sub->add_option("--threads", c.threads, "worker threads (0 = all)"));
    last(sub->add_option("--out", c.out, "output directory"));
    last(sub->add_flag("--json", c.json_summary,
                       "print a JSON summary to stdout"));
    last(sub->add_option("--precision", c.precision, "standard | extended"));
    last(sub->add_option("--config", c.config,
                         "flat key=value config file; flags override it"));
    if (with_ref)
      last(sub->add_option("--ref", c.ref,
                           "reference value(s), comma-separated"));
  };

  auto* cmd_average = app.add_subcommand(
      "average", "weighted Birkhoff average -> value.json [+ errors.csv]");
  add_common(cmd_average, true, true);
  auto* cmd_converge = app.add_subcommand(
      "converge",
      "error curves + rate fits over a weight sweep -> errors.csv, fits.json");
  add_common(cmd_converge, true, true);
  auto* cmd_fourier = app.add_subcommand(
      "fourier",
      "weighted Fourier modes with budget flags -> fourier.csv, fourier.json");
  add_common(cmd_fourier, true, false);
  last(cmd_fourier->add_option("--order", fo.order, "max l1 mode order"));
  last(cmd_fourier->add_option(
      "--zeta", fo.zeta, "budget exponent (0 = half the admissible range)"));
  last(cmd_fourier->add_option("--rho", fo.rho,
                               "rotation components (when the signal has none)"));
  last(cmd_fourier->add_option("--theta0", fo.theta0,
                               "initial phase (default zeros)"));
  auto* cmd_periodic = app.add_subcommand(
      "periodic",
      "trig interpolation + weighted error -> interp.json, errors.csv, fit.json");
  add_common(cmd_periodic, true, false);
  auto* cmd_classify = app.add_subcommand(
      "classify",
      "regular/chaotic verdict from the self-difference proxy -> classify.json");
  add_common(cmd_classify, true, false);
  auto* cmd_scan = app.add_subcommand(
      "scan", "small-divisor scan + continued fractions -> scan.csv, scan.json");
  add_common(cmd_scan, false, false);
  last(cmd_scan->add_option("--rho", so.rho, "rotation components"));
  last(cmd_scan->add_option("--kmax", so.kmax, "max l1 norm of scanned modes"));
  last(cmd_scan->add_option("--depth", so.depth, "continued fraction depth"));
  auto* cmd_clt = app.add_subcommand(
      "clt", "weighted CLT distances (or --slln trajectory) -> clt.csv");
  add_common(cmd_clt, false, false);
  last(cmd_clt->add_option("--dist", co.dist,
                           "gauss | uniformsym | rademacher | student:df"));
  last(cmd_clt->add_option("--trials", co.trials, "Monte Carlo trials"));
  last(cmd_clt->add_flag("--slln", co.slln,
                         "emit a strong-law trajectory instead"));
  last(cmd_clt->add_option("--mu", co.mu, "moment exponent for --slln"));

  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (cmd_average->parsed())
      run_average(c);
    else if (cmd_converge->parsed())
      run_converge(c);
    else if (cmd_fourier->parsed())
      run_fourier(c, fo);
    else if (cmd_periodic->parsed())
      run_periodic(c);
    else if (cmd_classify->parsed())
      run_classify(c);
    else if (cmd_scan->parsed())
      run_scan(c, so);
    else if (cmd_clt->parsed())
      run_clt(c, co);
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace wba::cli
