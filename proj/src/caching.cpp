#include "ccpir/caching.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace ccpir::caching {

Library Library::zeros(int num_files, uint32_t q, int subfiles, size_t sub_len) {
  if (!is_prime(q)) throw std::invalid_argument("library field must be prime");
  Library lib;
  lib.num_files = num_files;
  lib.q = q;
  lib.subfiles = subfiles;
  lib.sub_len = sub_len;
  lib.data.assign(size_t(num_files) * size_t(subfiles) * sub_len, 0);
  return lib;
}

SymbolVec Library::subfile_vec(int file, size_t rank) const {
  auto s = subfile(file, rank);
  return SymbolVec(q, std::vector<uint8_t>(s.begin(), s.end()));
}

std::vector<SymbolVec> Library::messages_at(size_t rank) const {
  std::vector<SymbolVec> msgs;
  msgs.reserve(size_t(num_files));
  for (int n = 1; n <= num_files; ++n) msgs.push_back(subfile_vec(n, rank));
  return msgs;
}

size_t CacheState::stored_symbols() const {
  size_t total = 0;
  for (auto& [ref, v] : man_part) total += v.size();
  for (auto& [rank, v] : key_part) total += v.size();
  return total;
}

size_t Broadcast::payload_symbols() const {
  size_t total = 0;
  for (auto& p : payloads) total += p.size();
  return total;
}

namespace {

void check_layout(const Library& lib, int k, int t) {
  if (t < 0 || t > k) throw std::invalid_argument("t out of range");
  if (lib.subfiles != int(binom_u64(uint64_t(k), t)))
    throw std::invalid_argument("library layout mismatch: expected C(K,t) subfiles per file");
}

void check_demands(const std::vector<int>& demands, int n) {
  for (int d : demands)
    if (d < 1 || d > n) throw std::invalid_argument("demand out of range");
}

}  // namespace

std::vector<CacheState> man_place(const Library& lib, int k, int t) {
  check_layout(lib, k, t);
  SubsetTable table(k, t);
  std::vector<CacheState> caches;
  for (int user = 1; user <= k; ++user) {
    CacheState c;
    c.user = user;
    for (int file = 1; file <= lib.num_files; ++file)
      for (size_t rank = 0; rank < table.size(); ++rank)
        if (table.contains(rank, user))
          c.man_part.push_back({{file, rank}, lib.subfile_vec(file, rank)});
    caches.push_back(std::move(c));
  }
  return caches;
}

Broadcast man_deliver(const std::vector<int>& demands, const Library& lib, int t) {
  int k = int(demands.size());
  check_layout(lib, k, t);
  check_demands(demands, lib.num_files);
  SubsetTable subs(k, t);
  SubsetTable multicast(k, t + 1);
  Broadcast b;
  b.q = lib.q;
  for (size_t srank = 0; srank < multicast.size(); ++srank) {
    SymbolVec sum(lib.q, lib.sub_len);
    for (int s : multicast.subset(srank)) {
      uint32_t tau = multicast.mask(srank) & ~(1u << (s - 1));
      sum.add_scaled(lib.subfile_vec(demands[size_t(s - 1)], subs.rank_of_mask(tau)), 1);
    }
    b.payload_subsets.push_back(srank);
    b.payloads.push_back(std::move(sum));
  }
  b.metadata.assign(demands.begin(), demands.end());
  return b;
}

std::vector<int> yma_leaders(const std::vector<int>& demands) {
  std::map<int, int> first_for_file;
  for (int u = 1; u <= int(demands.size()); ++u)
    first_for_file.try_emplace(demands[size_t(u - 1)], u);
  std::vector<int> leaders;
  for (auto& [file, user] : first_for_file) leaders.push_back(user);
  std::sort(leaders.begin(), leaders.end());
  return leaders;
}

Broadcast yma_deliver(const std::vector<int>& demands, const Library& lib, int t) {
  Broadcast full = man_deliver(demands, lib, t);
  int k = int(demands.size());
  SubsetTable multicast(k, t + 1);
  uint32_t leader_mask = 0;
  for (int u : yma_leaders(demands)) leader_mask |= 1u << (u - 1);
  Broadcast b;
  b.q = lib.q;
  for (size_t i = 0; i < full.payloads.size(); ++i) {
    if ((multicast.mask(full.payload_subsets[i]) & leader_mask) == 0) continue;
    b.payload_subsets.push_back(full.payload_subsets[i]);
    b.payloads.push_back(full.payloads[i]);
  }
  b.metadata = full.metadata;
  return b;
}

VuOutput vu_scheme(int n, int k, int t, const Library& lib, const std::vector<int>& s_vec,
                   const std::vector<int>& demands) {
  if (int(s_vec.size()) != k || int(demands.size()) != k)
    throw std::invalid_argument("vu needs one secret and one demand per user");
  check_demands(demands, n);
  check_demands(s_vec, n);  // S_k in [N]
  int nk = n * k;
  check_layout(lib, nk, t);

  // Per-block cyclic shifts: C_k = (S_k - d_k) mod N, virtual demand
  // q_k(i) = <i - C_k>_N, so virtual slot (k-1)N + S_k demands exactly d_k.
  std::vector<int> c_vec(static_cast<size_t>(k));
  std::vector<int> dnp(static_cast<size_t>(nk));
  for (int u = 1; u <= k; ++u) {
    int c = (s_vec[size_t(u - 1)] - demands[size_t(u - 1)]) % n;
    if (c < 0) c += n;
    c_vec[size_t(u - 1)] = c;
    for (int pos = 1; pos <= n; ++pos) {
      int v = (pos - c) % n;
      if (v <= 0) v += n;
      dnp[size_t((u - 1) * n + pos - 1)] = v;
    }
  }

  VuOutput out;
  out.virtual_demand = dnp;
  out.broadcast = yma_deliver(dnp, lib, t);
  out.broadcast.metadata.assign(c_vec.begin(), c_vec.end());

  SubsetTable table(nk, t);
  for (int u = 1; u <= k; ++u) {
    CacheState c;
    c.user = u;
    int slot = (u - 1) * n + s_vec[size_t(u - 1)];
    for (int file = 1; file <= lib.num_files; ++file)
      for (size_t rank = 0; rank < table.size(); ++rank)
        if (table.contains(rank, slot))
          c.man_part.push_back({{file, rank}, lib.subfile_vec(file, rank)});
    c.metadata = uint32_t(s_vec[size_t(u - 1)]);
    out.caches.push_back(std::move(c));
  }
  return out;
}

std::vector<CacheState> compose_place(const Library& lib, int k, int t,
                                      const pir::PirScheme& scheme,
                                      const std::vector<int>& q1_vec) {
  check_layout(lib, k, t);
  if (lib.num_files != scheme.num_messages())
    throw std::invalid_argument("PIR scheme message count must equal the file count");
  if (lib.q != scheme.field_modulus())
    throw std::invalid_argument("PIR scheme field must match the library field");
  if (int(q1_vec.size()) != k) throw std::invalid_argument("one first-server query per user");
  if (lib.sub_len % size_t(scheme.subpacketization()) != 0)
    throw std::invalid_argument("subfile length must be a multiple of the PIR subpacketization");

  SubsetTable table(k, t);
  std::vector<CacheState> caches = man_place(lib, k, t);
  for (int u = 1; u <= k; ++u) {
    CacheState& c = caches[size_t(u - 1)];
    int q1 = q1_vec[size_t(u - 1)];
    if (q1 < 1 || q1 > scheme.query_count(1))
      throw std::invalid_argument("first-server query out of range");
    for (size_t rank = 0; rank < table.size(); ++rank) {
      if (table.contains(rank, u)) continue;
      c.key_part.push_back({rank, scheme.answer(1, q1, lib.messages_at(rank))});
    }
    c.metadata = uint32_t(q1);
  }
  return caches;
}

Broadcast compose_deliver(const std::vector<int>& demands, const pir::PirScheme& scheme,
                          const Library& lib, const std::vector<int>& q1_vec, int t) {
  int k = int(demands.size());
  check_layout(lib, k, t);
  check_demands(demands, scheme.num_messages());
  if (int(q1_vec.size()) != k) throw std::invalid_argument("one first-server query per user");
  if (!scheme.constant_answer_size(2))
    throw std::invalid_argument(
        "composition needs constant-size second-server answers; pick a different scheme or "
        "time-sharing split");

  std::vector<int> q2(static_cast<size_t>(k));
  for (int u = 1; u <= k; ++u)
    q2[size_t(u - 1)] = scheme.match_q2(q1_vec[size_t(u - 1)], demands[size_t(u - 1)]);

  SubsetTable subs(k, t);
  SubsetTable multicast(k, t + 1);
  Broadcast b;
  b.q = lib.q;
  size_t ans_len = scheme.answer_symbols(2, 1, lib.sub_len);
  for (size_t srank = 0; srank < multicast.size(); ++srank) {
    SymbolVec sum(lib.q, ans_len);
    for (int s : multicast.subset(srank)) {
      uint32_t tau = multicast.mask(srank) & ~(1u << (s - 1));
      sum.add_scaled(
          scheme.answer(2, q2[size_t(s - 1)], lib.messages_at(subs.rank_of_mask(tau))), 1);
    }
    b.payload_subsets.push_back(srank);
    b.payloads.push_back(std::move(sum));
  }
  b.metadata.assign(q2.begin(), q2.end());
  return b;
}

// ---------------------------------------------------------------------------
// Tradeoff point generators
// ---------------------------------------------------------------------------

namespace {

/// 1 + 1/2 + ... + (1/2)^(n-1), the optimal two-server total download cost.
Rational optimal_two_server_cost(int n) {
  Rational sum = 0, term = 1;
  for (int i = 0; i < n; ++i) {
    sum += term;
    term /= 2;
  }
  return sum;
}

std::vector<TradeoffPoint> composed_curve(int n, int k, const Rational& rd1,
                                          const Rational& rd2, const Rational& mu1,
                                          const BigInt& fprime) {
  if (mu1 < 0 || mu1 > 1) throw std::invalid_argument("mu1 must lie in [0, 1]");
  Rational mu2 = 1 - mu1;
  Rational eff1 = mu1 * rd1 + mu2 * rd2;
  Rational eff2 = mu1 * rd2 + mu2 * rd1;
  std::vector<TradeoffPoint> pts;
  pts.push_back({Rational(0), Rational(n), 1});
  pts.push_back({Rational(n), Rational(0), 1});
  for (int t = 0; t <= k - 1; ++t) {
    Rational mem = Rational(n * t, k) + Rational(k - t, k) * eff1;
    Rational load = eff2 * Rational(k - t, t + 1);
    pts.push_back({mem, load, binom(uint64_t(k), t) * fprime});
  }
  return lower_convex_envelope(pts);
}

}  // namespace

std::vector<TradeoffPoint> thm2_points(int n, int k) {
  std::vector<TradeoffPoint> pts;
  int nk = n * k;
  for (int t = 0; t <= nk; ++t) {
    Rational mem(t, k);
    Rational load(binom(uint64_t(nk), t + 1) - binom(uint64_t(nk - n), t + 1),
                  binom(uint64_t(nk), t));
    pts.push_back({mem, load, binom(uint64_t(nk), t)});
  }
  pts.push_back({Rational(0), Rational(n), 1});
  return lower_convex_envelope(pts);
}

std::vector<TradeoffPoint> cor1_points(int n, int k) {
  // Optimal-cost two-server scheme, subpacketization 1, even time sharing.
  return composed_curve(n, k, optimal_two_server_cost(n) / 2, optimal_two_server_cost(n) / 2,
                        Rational(1, 2), 1);
}

std::vector<TradeoffPoint> cor_smalln_points(int n, int k, Rational mu1) {
  switch (n) {
    case 2:
      return composed_curve(2, k, Rational(1, 2), Rational(1), mu1, 1);
    case 3:
    case 4:
      return composed_curve(n, k, Rational(1), Rational(1), mu1, 1);
    default:
      throw std::invalid_argument("cor_smallN covers N in {2, 3, 4}");
  }
}

std::vector<TradeoffPoint> privacy_key_points(int n, int k) {
  std::vector<TradeoffPoint> pts;
  for (int t = 0; t <= k; ++t) {
    Rational mem = 1 + Rational(int64_t(t) * (n - 1), k);
    Rational load(binom(uint64_t(k), t + 1) - binom(uint64_t(k - std::min(n - 1, k)), t + 1),
                  binom(uint64_t(k), t));
    pts.push_back({mem, load, binom(uint64_t(k), t)});
  }
  return lower_convex_envelope(pts);
}

std::vector<TradeoffPoint> compose_points(const pir::PirScheme& scheme, int k, Rational mu1) {
  return composed_curve(scheme.num_messages(), k, scheme.download_cost(1),
                        scheme.download_cost(2), mu1, scheme.subpacketization());
}

std::vector<TradeoffPoint> tradeoff_points(const std::string& generator, int n, int k,
                                           Rational mu1) {
  if (generator == "thm2") return thm2_points(n, k);
  if (generator == "cor1") return cor1_points(n, k);
  if (generator == "cor_smallN") return cor_smalln_points(n, k, mu1);
  if (generator == "privacy_key") return privacy_key_points(n, k);
  if (generator.rfind("compose:", 0) == 0) {
    auto scheme = pir::parse_scheme(generator.substr(8));
    if (scheme->num_messages() != n)
      throw std::invalid_argument("generator scheme has a different message count than N");
    return compose_points(*scheme, k, mu1);
  }
  throw std::invalid_argument("unknown tradeoff generator: " + generator);
}

}  // namespace ccpir::caching
