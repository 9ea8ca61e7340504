#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "ccpir/envelope.hpp"
#include "ccpir/pir.hpp"
#include "ccpir/rational.hpp"

namespace ccpir::bounds {

/// Optimal total download cost for N messages and S servers:
/// 1 + 1/S + ... + 1/S^(N-1), exact.
Rational pir_capacity(int n, int s);

/// The query-pair recovery structure behind the cut-set converse. U_tau holds
/// every pair the scheme can send when demanding tau; each member is certified
/// by the span oracle on the two answers' coefficient rows, never by running
/// the decoder. The all-pairs span scan is also reported: pairs outside the
/// emitted sets can still pin messages down (they do for the N=2 scheme), but
/// the uniformity invariants and the bound quantify over the emitted sets.
struct RecoverySets {
  int num_messages = 0;
  int n1 = 0, n2 = 0;            // |Q1|, |Q2|
  int cond1 = 0, cond2 = 0;      // n1-hat = |U_{tau|Q2}|, n2-hat = |U_{tau|Q1}|
  bool uniform = false;          // conditional sizes identical over all q and tau
  std::string violation;         // first (tau, server, query) breaking uniformity
  bool ratio_bound_holds = false;  // N1/n1 <= N and N2/n2 <= N
  std::vector<std::vector<std::pair<int, int>>> pairs_by_file;  // U_tau, sorted
  std::vector<int> span_recoverable_pairs;  // per file, over all N1 x N2 pairs
};

RecoverySets recovery_sets(const pir::PirScheme& scheme);

struct LowerBound {
  bool feasible = false;  // an integer pair (a1, a2) with a1*a2 = ceil(N1/n1) exists
  int alpha1 = 0, alpha2 = 0;
  Rational lhs_min;  // min a1*R_D1 + a2*R_D2 over the feasible pairs
  bool holds = false;  // lhs_min >= N
  bool tight = false;  // lhs_min == N
};

LowerBound lower_bound(const RecoverySets& rs, const Rational& rd1, const Rational& rd2);
LowerBound lower_bound(const pir::PirScheme& scheme);

/// N / (sqrt(alpha') + 1): the total-download-cost floor for equal-cost
/// schemes. Exact only when alpha' is a perfect square, which covers every
/// audited instance; otherwise throws.
Rational sqrt_total_bound(int alpha_prime, int n);

struct CurveRow {
  Rational memory;
  Rational vu_load;    // virtual-users envelope
  Rational cor1_load;  // optimal-PIR composition envelope
};

/// Both envelopes evaluated on the union of their vertices plus the integer
/// memories in [0, N].
std::vector<CurveRow> compare_curves(int n, int k);

// CSV emitters; '\n' newlines, rationals as num/den column pairs.
void write_tradeoff_csv(std::ostream& os, const std::vector<TradeoffPoint>& points,
                        const std::string& scheme_label);
void write_compare_csv(std::ostream& os, const std::vector<CurveRow>& rows);

}  // namespace ccpir::bounds
