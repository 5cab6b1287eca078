// SPDX-License-Identifier: MIT
#pragma once

#include <string>
#include <vector>

#include "wba/averaging.hpp"
#include "wba/diophantine.hpp"
#include "wba/dynamics.hpp"
#include "wba/fourier.hpp"
#include "wba/periodic.hpp"
#include "wba/ratefit.hpp"
#include "wba/stochastic.hpp"

// Serialization of the result types. Doubles are written with %.17g so
// round-trips are bit-exact; CSV layouts and JSON key sets are part of the
// CLI contract and stay stable.

namespace wba {

std::string format_double(double v);

// CSV "N,error,floor_flag"
std::string error_curve_csv(const ErrorCurve& curve);

// CSV "k_1,...,k_d,divisor"
std::string scan_csv(const SmallDivisorScan& scan);
// JSON {"gamma": ..., "tau": ..., "resonant_flag": ...}
std::string scan_summary_json(const SmallDivisorScan& scan);

// JSON {"model": ..., "c": ..., "zeta_or_m": ..., "r2": ..., "floor_truncated": ...}
std::string rate_fit_json(const RateFit& fit);

// JSON {"T": ..., "a0": ..., "a": [...], "b": [...]}
std::string trig_interp_json(const TrigInterp& interp);
TrigInterp parse_trig_interp_json(const std::string& text);

// JSON {"dimension": d, "value_dim": m, "terms": [[{"k": [...], "re": ..,
// "im": ..}, ...], ...]}; a bare list of term objects parses as ad = 1
// component for scalar observables.
std::string trig_poly_json(const TrigPoly& poly);
TrigPoly parse_trig_poly_json(const std::string& text);

// CSV "s_1,...,s_d,re_0,im_0,...,re_{D-1},im_{D-1},effective_flag"
// (effective_flag is 1 within budget, 0 beyond)
std::string fourier_csv(const FourierResult& result);

struct CltExperimentRow {
  std::int64_t n = 0;
  double distance = 0.0;
  double dkw_bound = 0.0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
};

// CSV "N,distance,dkw_bound,trials,seed"
std::string clt_csv(const std::vector<CltExperimentRow>& rows);

// One sample row per line, value_dim columns; a non-numeric first line is
// treated as a header and skipped.
std::vector<double> read_recorded_csv(const std::string& text, int value_dim);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace wba
