#include "ccpir/bounds.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "ccpir/caching.hpp"
#include "ccpir/linear.hpp"

namespace ccpir::bounds {

Rational pir_capacity(int n, int s) {
  if (n < 1 || s < 1) throw std::invalid_argument("need N >= 1 and S >= 1");
  Rational sum = 0, term = 1;
  for (int i = 0; i < n; ++i) {
    sum += term;
    term /= s;
  }
  return sum;
}

namespace {

/// Answer coefficient rows per (server, query), extracted by probing the
/// scheme on basis libraries at message length F'. The zero probe pins the
/// answers as linear, not affine.
std::vector<std::vector<std::vector<std::vector<uint8_t>>>> probe_rows(
    const pir::PirScheme& scheme) {
  const int n = scheme.num_messages();
  const size_t msg_len = size_t(scheme.subpacketization());
  const size_t dim = size_t(n) * msg_len;
  const uint8_t q = uint8_t(scheme.field_modulus());

  std::vector<uint8_t> flat(dim, 0);
  pir::MessagesView lib{flat.data(), size_t(n), msg_len, q};
  std::vector<std::vector<std::vector<std::vector<uint8_t>>>> rows(2);
  for (int server = 1; server <= 2; ++server) {
    rows[size_t(server - 1)].resize(size_t(scheme.query_count(server)));
    for (int query = 1; query <= scheme.query_count(server); ++query) {
      size_t len = scheme.answer_symbols(server, query, msg_len);
      auto& mat = rows[size_t(server - 1)][size_t(query - 1)];
      mat.assign(len, std::vector<uint8_t>(dim, 0));
      std::vector<uint8_t> out(len);
      std::fill(flat.begin(), flat.end(), 0);
      scheme.answer_into(server, query, lib, out.data());
      for (uint8_t v : out)
        if (v != 0) throw std::logic_error("answers are not linear in the library");
      for (size_t j = 0; j < dim; ++j) {
        std::fill(flat.begin(), flat.end(), 0);
        flat[j] = 1;
        scheme.answer_into(server, query, lib, out.data());
        for (size_t i = 0; i < len; ++i) mat[i][j] = out[i];
      }
    }
  }
  return rows;
}

/// Whether the two answer row sets jointly determine every symbol of message
/// tau (1-based).
bool pair_recovers(const std::vector<std::vector<uint8_t>>& rows1,
                   const std::vector<std::vector<uint8_t>>& rows2, int tau, int n,
                   size_t msg_len, uint32_t q) {
  size_t dim = size_t(n) * msg_len;
  LinearSystem sys(q, dim, 0);
  for (const auto& r : rows1) sys.add_functional(r);
  for (const auto& r : rows2) sys.add_functional(r);
  for (size_t sym = 0; sym < msg_len; ++sym) {
    std::vector<uint8_t> target(dim, 0);
    target[size_t(tau - 1) * msg_len + sym] = 1;
    if (!sys.contains(target)) return false;
  }
  return true;
}

}  // namespace

RecoverySets recovery_sets(const pir::PirScheme& scheme) {
  const int n = scheme.num_messages();
  const size_t msg_len = size_t(scheme.subpacketization());
  auto rows = probe_rows(scheme);

  RecoverySets rs;
  rs.num_messages = n;
  rs.n1 = scheme.query_count(1);
  rs.n2 = scheme.query_count(2);

  // Emitted pairs per file, from the full (demand, randomness) enumeration.
  rs.pairs_by_file.assign(size_t(n), {});
  for (int tau = 1; tau <= n; ++tau) {
    std::set<std::pair<int, int>> seen;
    for (int r = 0; r < scheme.randomness_count(); ++r)
      seen.insert(scheme.query_pair(tau, r));
    rs.pairs_by_file[size_t(tau - 1)].assign(seen.begin(), seen.end());
    // Soundness: every emitted pair must span-certify its file.
    for (auto [q1, q2] : seen) {
      if (!pair_recovers(rows[0][size_t(q1 - 1)], rows[1][size_t(q2 - 1)], tau, n, msg_len,
                         scheme.field_modulus()))
        throw std::logic_error("emitted query pair cannot recover its file: scheme bug");
    }
  }

  // All-pairs span scan, reported alongside the emitted structure.
  rs.span_recoverable_pairs.assign(size_t(n), 0);
  for (int q1 = 1; q1 <= rs.n1; ++q1)
    for (int q2 = 1; q2 <= rs.n2; ++q2)
      for (int tau = 1; tau <= n; ++tau)
        if (pair_recovers(rows[0][size_t(q1 - 1)], rows[1][size_t(q2 - 1)], tau, n, msg_len,
                          scheme.field_modulus()))
          ++rs.span_recoverable_pairs[size_t(tau - 1)];

  // Conditional slice sizes must be one constant per side, over every query
  // and every file.
  rs.uniform = true;
  rs.cond2 = -1;
  for (int tau = 1; tau <= n && rs.uniform; ++tau) {
    for (int q1 = 1; q1 <= rs.n1 && rs.uniform; ++q1) {
      int size = 0;
      for (auto& [a, b] : rs.pairs_by_file[size_t(tau - 1)])
        if (a == q1) ++size;
      if (rs.cond2 < 0) rs.cond2 = size;
      else if (size != rs.cond2) {
        rs.uniform = false;
        rs.violation = "|U_{tau|Q1=q1}| breaks at tau=" + std::to_string(tau) +
                       ", q1=" + std::to_string(q1);
      }
    }
  }
  rs.cond1 = -1;
  for (int tau = 1; tau <= n && rs.uniform; ++tau) {
    for (int q2 = 1; q2 <= rs.n2 && rs.uniform; ++q2) {
      int size = 0;
      for (auto& [a, b] : rs.pairs_by_file[size_t(tau - 1)])
        if (b == q2) ++size;
      if (rs.cond1 < 0) rs.cond1 = size;
      else if (size != rs.cond1) {
        rs.uniform = false;
        rs.violation = "|U_{tau|Q2=q2}| breaks at tau=" + std::to_string(tau) +
                       ", q2=" + std::to_string(q2);
      }
    }
  }
  if (rs.uniform)
    rs.ratio_bound_holds = rs.n1 <= n * rs.cond1 && rs.n2 <= n * rs.cond2;
  return rs;
}

LowerBound lower_bound(const RecoverySets& rs, const Rational& rd1, const Rational& rd2) {
  if (!rs.uniform)
    throw std::invalid_argument("scheme is outside the bound's hypotheses: " + rs.violation);
  LowerBound out;
  int alpha1_ratio = (rs.n1 + rs.cond1 - 1) / rs.cond1;  // ceil(N1/n1)
  int alpha2_ratio = (rs.n2 + rs.cond2 - 1) / rs.cond2;
  if (alpha1_ratio != alpha2_ratio)
    throw std::invalid_argument("ceil(N1/n1) != ceil(N2/n2); recovery structure is broken");
  int alpha_prime = alpha1_ratio;
  for (int a1 = 1; a1 <= rs.n1; ++a1) {
    if (alpha_prime % a1 != 0) continue;
    int a2 = alpha_prime / a1;
    if (a2 < 1 || a2 > rs.n2) continue;
    Rational lhs = a1 * rd1 + a2 * rd2;
    if (!out.feasible || lhs < out.lhs_min) {
      out.feasible = true;
      out.alpha1 = a1;
      out.alpha2 = a2;
      out.lhs_min = lhs;
    }
  }
  if (out.feasible) {
    out.holds = out.lhs_min >= rs.num_messages;
    out.tight = out.lhs_min == rs.num_messages;
  }
  return out;
}

LowerBound lower_bound(const pir::PirScheme& scheme) {
  return lower_bound(recovery_sets(scheme), scheme.download_cost(1), scheme.download_cost(2));
}

Rational sqrt_total_bound(int alpha_prime, int n) {
  int root = 0;
  while ((root + 1) * (root + 1) <= alpha_prime) ++root;
  if (root * root != alpha_prime)
    throw std::invalid_argument("sqrt bound is only exact for perfect-square ratios");
  return Rational(n, root + 1);
}

std::vector<CurveRow> compare_curves(int n, int k) {
  auto vu = caching::thm2_points(n, k);
  auto cor1 = caching::cor1_points(n, k);

  std::set<Rational> grid;
  for (auto& p : vu) grid.insert(p.memory);
  for (auto& p : cor1) grid.insert(p.memory);
  for (int m = 0; m <= n; ++m) grid.insert(Rational(m));

  std::vector<CurveRow> rows;
  for (const Rational& m : grid)
    rows.push_back({m, envelope_value_at(vu, m), envelope_value_at(cor1, m)});
  return rows;
}

void write_tradeoff_csv(std::ostream& os, const std::vector<TradeoffPoint>& points,
                        const std::string& scheme_label) {
  os << "M_num,M_den,R_num,R_den,scheme,subpacketization\n";
  for (const auto& p : points) {
    os << rat_num(p.memory).str() << "," << rat_den(p.memory).str() << ","
       << rat_num(p.load).str() << "," << rat_den(p.load).str() << "," << scheme_label << ","
       << p.subpacketization.str() << "\n";
  }
}

void write_compare_csv(std::ostream& os, const std::vector<CurveRow>& rows) {
  os << "M_num,M_den,R_vu_num,R_vu_den,R_cor1_num,R_cor1_den\n";
  for (const auto& r : rows) {
    os << rat_num(r.memory).str() << "," << rat_den(r.memory).str() << ","
       << rat_num(r.vu_load).str() << "," << rat_den(r.vu_load).str() << ","
       << rat_num(r.cor1_load).str() << "," << rat_den(r.cor1_load).str() << "\n";
  }
}

}  // namespace ccpir::bounds
