// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <vector>

#include "wba/dynamics.hpp"

// Continued fractions, rotations with prescribed partial quotients, and
// brute-force small-divisor scans that estimate nonresonance constants
// (gamma, tau) empirically.
//
// Recipe for rotations with critical Diophantine exponents: use the golden
// mean per coordinate together with pairwise independent quadratic
// irrationals, e.g. (sqrt(5)-1)/2 and sqrt(2)-1. This is a recommendation,
// not something the scanner enforces.

namespace wba {

struct ContinuedFraction {
  std::vector<std::int64_t> quotients;  // partial quotients a_1, a_2, ...
  // The expansion terminated early: the tail was rational to within double
  // precision, so the returned quotients are the complete expansion.
  bool exact = false;
};

// Partial quotients of x in (0,1). depth is capped at 40; beyond that the
// quotients of a double carry no information.
ContinuedFraction continued_fraction(double x, int depth);

struct Convergent {
  std::int64_t p = 0;
  std::int64_t q = 1;
};

struct RotationFromCF {
  Rotation rotation;                    // d = 1
  std::vector<Convergent> convergents;  // one per consumed quotient
  int terms_used = 0;
  // Convergent arithmetic overflowed int64; the rotation is the last exact
  // convergent instead of the full expansion.
  bool truncated = false;
};

// The real number in (0,1) whose continued-fraction expansion has the given
// partial quotients (each >= 1).
RotationFromCF rotation_from_quotients(
    const std::vector<std::int64_t>& quotients);

struct ScanRow {
  std::vector<int> k;
  double k_norm = 0.0;   // l1 norm of k
  double divisor = 0.0;  // min over n of |<k, rho> - n|
  bool record = false;   // running minimum in canonical scan order
};

struct SmallDivisorScan {
  int k_max = 0;
  std::vector<ScanRow> rows;
  // Least-squares fit of log(divisor) against log(k_norm) over the record
  // rows; gamma is then the tightest constant with
  // divisor >= gamma * k_norm^{-tau} across every scanned row. NaN when the
  // scan hit a resonance.
  double gamma = 0.0;
  double tau = 0.0;
  bool resonant = false;
  std::vector<int> resonant_k;  // the vector that witnessed the resonance
};

// Exhaustive scan of nonzero integer vectors: k = 1..k_max for d = 1
// (k_max <= 10^4), or 1 <= |k|_l1 <= k_max for d >= 2 (k_max <= 30, one
// canonical representative per +-k pair, shells in increasing l1 norm).
SmallDivisorScan small_divisor_scan(const Rotation& rho, int k_max);

// Truncated-lattice version of the nonresonance weight for sequence spaces:
// product over components of (1 + <j>^tau |k_j|^tau)^{-1} with
// <j> = max(1, j) and j the 0-based component index. Supported for
// dimension <= 8; no universality claim is made for the truncation.
double nonresonance_product(const std::vector<int>& k, double tau);

// Weighted lattice norm sum_j <j>^eta |k_j|, same indexing and dimension cap.
double spatial_norm(const std::vector<int>& k, double eta);

}  // namespace wba
