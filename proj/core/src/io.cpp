// SPDX-License-Identifier: MIT
#include "wba/io.hpp"

#include <json.hpp>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wba {
namespace {

using nlohmann::json;

const char* model_name(RateModel m) {
  switch (m) {
    case RateModel::Exponential:
      return "exponential";
    case RateModel::Polynomial:
      return "polynomial";
    case RateModel::LinExpOverLog:
      return "lin_exp_over_log";
    case RateModel::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

// NaN has no JSON literal; serialize it as null.
json number_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string error_curve_csv(const ErrorCurve& curve) {
  std::ostringstream out;
  out << "N,error,floor_flag\n";
  for (std::size_t i = 0; i < curve.n_grid.size(); ++i)
    out << curve.n_grid[i] << ',' << format_double(curve.errors[i]) << ','
        << (curve.floor_flag[i] ? 1 : 0) << '\n';
  return out.str();
}

std::string scan_csv(const SmallDivisorScan& scan) {
  std::ostringstream out;
  const std::size_t d = scan.rows.empty() ? 1 : scan.rows.front().k.size();
  for (std::size_t j = 0; j < d; ++j) out << 'k' << (j + 1) << ',';
  out << "divisor\n";
  for (const ScanRow& r : scan.rows) {
    for (const int v : r.k) out << v << ',';
    out << format_double(r.divisor) << '\n';
  }
  return out.str();
}

std::string scan_summary_json(const SmallDivisorScan& scan) {
  json j;
  j["gamma"] = number_or_null(scan.gamma);
  j["tau"] = number_or_null(scan.tau);
  j["resonant_flag"] = scan.resonant;
  return j.dump();
}

std::string rate_fit_json(const RateFit& fit) {
  json j;
  j["model"] = model_name(fit.model);
  j["c"] = number_or_null(fit.c);
  j["zeta_or_m"] =
      number_or_null(fit.model == RateModel::Polynomial ? fit.m : fit.zeta);
  j["r2"] = number_or_null(fit.r_squared);
  j["floor_truncated"] = fit.floor_truncated;
  return j.dump();
}

std::string trig_interp_json(const TrigInterp& interp) {
  json j;
  j["T"] = interp.period;
  j["a0"] = interp.a0;
  j["a"] = interp.cos_coeffs;
  j["b"] = interp.sin_coeffs;
  return j.dump();
}

TrigInterp parse_trig_interp_json(const std::string& text) {
  const json j = json::parse(text);
  TrigInterp out;
  out.period = j.at("T").get<int>();
  out.a0 = j.at("a0").get<double>();
  out.cos_coeffs = j.at("a").get<std::vector<double>>();
  out.sin_coeffs = j.at("b").get<std::vector<double>>();
  if (out.period < 1)
    throw std::invalid_argument("trig interp json: T must be >= 1");
  return out;
}

std::string trig_poly_json(const TrigPoly& poly) {
  json terms = json::array();
  for (const auto& comp : poly.terms) {
    json list = json::array();
    for (const auto& [k, c] : comp) {
      json t;
      t["k"] = k;
      t["re"] = c.real();
      t["im"] = c.imag();
      list.push_back(std::move(t));
    }
    terms.push_back(std::move(list));
  }
  json j;
  j["dimension"] = poly.dimension;
  j["value_dim"] = poly.value_dim;
  j["terms"] = std::move(terms);
  return j.dump();
}

TrigPoly parse_trig_poly_json(const std::string& text) {
  const json j = json::parse(text);

  const auto read_terms = [](TrigPoly& poly, int comp, const json& list) {
    for (const json& t : list) {
      const auto k = t.at("k").get<std::vector<int>>();
      const double re = t.at("re").get<double>();
      const double im = t.value("im", 0.0);
      set_term(poly, comp, k, {re, im});
    }
  };

  if (j.is_array()) {
    // bare term list: scalar observable, dimension from the first k
    if (j.empty())
      throw std::invalid_argument("trig poly json: empty term list");
    const int d =
        static_cast<int>(j.front().at("k").get<std::vector<int>>().size());
    TrigPoly poly = make_trig_poly(d, 1, false);
    read_terms(poly, 0, j);
    return poly;
  }

  const int d = j.at("dimension").get<int>();
  const int m = j.value("value_dim", 1);
  TrigPoly poly = make_trig_poly(d, m, false);
  const json& terms = j.at("terms");
  if (terms.size() != static_cast<std::size_t>(m))
    throw std::invalid_argument(
        "trig poly json: terms list does not match value_dim");
  for (int comp = 0; comp < m; ++comp)
    read_terms(poly, comp, terms[static_cast<std::size_t>(comp)]);
  return poly;
}

std::string fourier_csv(const FourierResult& result) {
  std::ostringstream out;
  const std::size_t d =
      result.modes.empty() ? 1 : result.modes.front().s.size();
  const std::size_t m =
      result.modes.empty() ? 1 : result.modes.front().coeff.size();
  for (std::size_t j = 0; j < d; ++j) out << 's' << (j + 1) << ',';
  for (std::size_t j = 0; j < m; ++j)
    out << "re_" << j << ",im_" << j << ',';
  out << "effective_flag\n";
  for (const FourierModeResult& r : result.modes) {
    for (const int v : r.s) out << v << ',';
    for (const auto& c : r.coeff)
      out << format_double(c.real()) << ',' << format_double(c.imag()) << ',';
    out << (r.beyond_effective ? 0 : 1) << '\n';
  }
  return out.str();
}

std::string clt_csv(const std::vector<CltExperimentRow>& rows) {
  std::ostringstream out;
  out << "N,distance,dkw_bound,trials,seed\n";
  for (const CltExperimentRow& r : rows)
    out << r.n << ',' << format_double(r.distance) << ','
        << format_double(r.dkw_bound) << ',' << r.trials << ',' << r.seed
        << '\n';
  return out.str();
}

std::vector<double> read_recorded_csv(const std::string& text, int value_dim) {
  if (value_dim < 1)
    throw std::invalid_argument("recorded csv: value_dim must be >= 1");
  std::vector<double> out;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream fields(line);
    std::string field;
    bool numeric = true;
    while (std::getline(fields, field, ',')) {
      try {
        std::size_t used = 0;
        const double v = std::stod(field, &used);
        while (used < field.size() &&
               std::isspace(static_cast<unsigned char>(field[used])) != 0)
          ++used;
        if (used != field.size()) {
          numeric = false;
          break;
        }
        row.push_back(v);
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (first) {
        first = false;  // header line
        continue;
      }
      throw std::invalid_argument("recorded csv: non-numeric field on line " +
                                  std::to_string(lineno));
    }
    first = false;
    if (row.size() != static_cast<std::size_t>(value_dim))
      throw std::invalid_argument(
          "recorded csv: wrong column count on line " + std::to_string(lineno));
    out.insert(out.end(), row.begin(), row.end());
  }
  if (out.empty()) throw std::invalid_argument("recorded csv: no data rows");
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out.flush())
    throw std::runtime_error("short write: " + path);
}

}  // namespace wba
