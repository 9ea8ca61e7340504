#include "ccpir/auditor.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>
#include <stdexcept>

#include "ccpir/caching.hpp"
#include "ccpir/linear.hpp"

namespace ccpir::auditor {

namespace {

using caching::Broadcast;
using caching::CacheState;
using caching::Library;

enum class Kind { man, yma, vu, compose };

uint64_t checked_mul(uint64_t a, uint64_t b, const char* what) {
  if (b != 0 && a > (uint64_t(1) << 62) / b)
    throw std::overflow_error(std::string("world/code space overflow in ") + what);
  return a * b;
}

uint64_t ipow(uint64_t base, uint64_t exp, const char* what) {
  uint64_t r = 1;
  for (uint64_t i = 0; i < exp; ++i) r = checked_mul(r, base, what);
  return r;
}

/// Resolved enumeration geometry for one WorldSpec: the scheme, the flattened
/// library space, the randomness/demand axes, and the packed-code radices for
/// every audit variable.
struct Layout {
  WorldSpec spec;
  Kind kind;
  std::shared_ptr<const pir::PirScheme> scheme;  // compose only

  int n, k, t;
  uint32_t q;
  int placement_users;
  int subfiles;
  size_t sub_len;
  size_t lib_symbols;
  uint64_t lib_count;
  uint64_t rand_per_user;  // 1-based values drawn from [1..rand_per_user]
  uint64_t rand_total;
  uint64_t demand_total;

  size_t man_syms, key_max_syms, cache_max_syms;
  size_t max_payload_syms;
  uint64_t meta_digit_radix;
  int meta_value_offset;  // stored metadata value minus this = digit
  uint64_t z_radix, x_radix, meta_radix;

  explicit Layout(const WorldSpec& s) : spec(s), n(s.n), k(s.k), t(s.t) {
    if (n < 1 || k < 1) throw std::invalid_argument("need N >= 1 and K >= 1");
    if (s.scheme == "man") kind = Kind::man;
    else if (s.scheme == "yma") kind = Kind::yma;
    else if (s.scheme == "vu") kind = Kind::vu;
    else if (s.scheme.rfind("compose:", 0) == 0) kind = Kind::compose;
    else throw std::invalid_argument("unknown audit scheme: " + s.scheme);

    if (kind == Kind::compose) {
      std::optional<uint32_t> qo;
      if (s.q != 0) qo = s.q;
      scheme = pir::parse_scheme(s.scheme.substr(8), qo);
      if (scheme->num_messages() != n)
        throw std::invalid_argument("composed scheme message count differs from N");
      q = scheme->field_modulus();
      sub_len = size_t(scheme->subpacketization()) * s.symbol_len;
      placement_users = k;
    } else {
      q = s.q == 0 ? 2 : s.q;
      if (!is_prime(q)) throw std::invalid_argument("q must be prime");
      sub_len = s.symbol_len;
      placement_users = kind == Kind::vu ? n * k : k;
    }
    if (t < 0 || t > placement_users) throw std::invalid_argument("t out of range");

    subfiles = int(binom_u64(uint64_t(placement_users), t));
    lib_symbols = size_t(n) * size_t(subfiles) * sub_len;
    lib_count = ipow(q, lib_symbols, "library space");

    switch (kind) {
      case Kind::man:
      case Kind::yma:
        rand_per_user = 1;
        meta_digit_radix = uint64_t(n);  // demand vector entries
        meta_value_offset = 1;
        break;
      case Kind::vu:
        rand_per_user = uint64_t(n);     // S_k
        meta_digit_radix = uint64_t(n);  // C vector entries, already 0-based
        meta_value_offset = 0;
        break;
      case Kind::compose:
        rand_per_user = uint64_t(scheme->query_count(1));
        meta_digit_radix = uint64_t(scheme->query_count(2));
        meta_value_offset = 1;
        break;
    }
    rand_total = ipow(rand_per_user, uint64_t(k), "randomness space");
    demand_total = ipow(uint64_t(n), uint64_t(k), "demand space");

    int users_in_t = kind == Kind::vu ? n * k : k;
    man_syms = size_t(n) * binom_u64(uint64_t(users_in_t - 1), t - 1) * sub_len;
    key_max_syms = 0;
    if (kind == Kind::compose) {
      size_t per_key = 0;
      for (int q1 = 1; q1 <= scheme->query_count(1); ++q1)
        per_key = std::max(per_key, scheme->answer_symbols(1, q1, sub_len));
      key_max_syms = binom_u64(uint64_t(k - 1), t) * per_key;
    }
    cache_max_syms = man_syms + key_max_syms;

    if (kind == Kind::compose)
      max_payload_syms =
          binom_u64(uint64_t(k), t + 1) * scheme->answer_symbols(2, 1, sub_len);
    else if (kind == Kind::vu)
      max_payload_syms = (binom_u64(uint64_t(n * k), t + 1) -
                          binom_u64(uint64_t(n * k - n), t + 1)) *
                         sub_len;
    else
      max_payload_syms = binom_u64(uint64_t(k), t + 1) * sub_len;

    z_radix = checked_mul(ipow(q, cache_max_syms, "cache code"), rand_per_user, "cache code");
    meta_radix = ipow(meta_digit_radix, uint64_t(k), "metadata code");
    if (s.fault == Fault::leak_metadata)
      meta_radix = checked_mul(meta_radix, ipow(rand_per_user, uint64_t(k), "metadata code"),
                               "metadata code");
    x_radix = checked_mul(ipow(q, max_payload_syms, "broadcast code"), meta_radix,
                          "broadcast code");
  }

  uint64_t world_count() const {
    return checked_mul(checked_mul(lib_count, rand_total, "worlds"), demand_total, "worlds");
  }

  struct Eval {
    std::vector<CacheState> caches;
    Broadcast broadcast;
  };

  Eval eval(const Library& lib, const std::vector<int>& rand_vals,
            const std::vector<int>& demands) const {
    Eval e;
    switch (kind) {
      case Kind::man:
        e.caches = caching::man_place(lib, k, t);
        e.broadcast = caching::man_deliver(demands, lib, t);
        break;
      case Kind::yma:
        e.caches = caching::man_place(lib, k, t);
        e.broadcast = caching::yma_deliver(demands, lib, t);
        break;
      case Kind::vu: {
        auto out = caching::vu_scheme(n, k, t, lib, rand_vals, demands);
        e.caches = std::move(out.caches);
        e.broadcast = std::move(out.broadcast);
        break;
      }
      case Kind::compose:
        e.caches = caching::compose_place(lib, k, t, *scheme, rand_vals);
        e.broadcast = caching::compose_deliver(demands, *scheme, lib, rand_vals, t);
        break;
    }
    if (spec.fault == Fault::corrupt_payload && !e.broadcast.payloads.empty() &&
        e.broadcast.payloads[0].size() > 0) {
      e.broadcast.payloads[0].set(0, uint8_t((e.broadcast.payloads[0][0] + 1) % q));
    }
    if (spec.fault == Fault::leak_metadata) {
      for (const auto& c : e.caches) e.broadcast.metadata.push_back(c.metadata);
    }
    return e;
  }

  uint64_t z_code(const CacheState& c) const {
    uint64_t code = 0;
    size_t syms = 0;
    for (const auto& [ref, v] : c.man_part)
      for (size_t i = 0; i < v.size(); ++i, ++syms) code = code * q + v[i];
    for (const auto& [rank, v] : c.key_part)
      for (size_t i = 0; i < v.size(); ++i, ++syms) code = code * q + v[i];
    for (; syms < cache_max_syms; ++syms) code = code * q;
    uint64_t meta_digit = rand_per_user == 1 ? 0 : uint64_t(c.metadata - 1);
    return code * rand_per_user + meta_digit;
  }

  uint64_t meta_code(const Broadcast& b, const Eval& e) const {
    uint64_t code = 0;
    for (size_t i = 0; i < size_t(k); ++i)
      code = code * meta_digit_radix + (b.metadata[i] - uint64_t(meta_value_offset));
    if (spec.fault == Fault::leak_metadata) {
      for (size_t i = 0; i < size_t(k); ++i) {
        uint64_t digit = rand_per_user == 1 ? 0 : uint64_t(e.caches[i].metadata - 1);
        code = code * rand_per_user + digit;
      }
    }
    return code;
  }

  uint64_t x_code(const Eval& e) const {
    uint64_t code = 0;
    size_t syms = 0;
    for (const auto& p : e.broadcast.payloads)
      for (size_t i = 0; i < p.size(); ++i, ++syms) code = code * q + p[i];
    for (; syms < max_payload_syms; ++syms) code = code * q;
    return code * meta_radix + meta_code(e.broadcast, e);
  }
};

/// Iterates worlds [begin, end) in the fixed order
/// world = (lib_index * rand_total + rand_index) * demand_total + demand_index,
/// with odometer increments so decomposition cost is amortized constant.
template <typename Fn>
void for_each_world(const Layout& L, uint64_t begin, uint64_t end, Fn&& fn) {
  Library lib = Library::zeros(L.n, L.q, L.subfiles, L.sub_len);
  std::vector<int> rand_vals(size_t(L.k), 1), demands(size_t(L.k), 1);

  uint64_t rd = L.rand_total * L.demand_total;
  uint64_t lib_idx = begin / rd;
  uint64_t rem = begin % rd;
  uint64_t r_idx = rem / L.demand_total;
  uint64_t d_idx = rem % L.demand_total;

  uint64_t x = lib_idx;
  for (size_t i = 0; i < L.lib_symbols; ++i) {
    lib.data[i] = uint8_t(x % L.q);
    x /= L.q;
  }
  uint64_t rr = r_idx;
  for (int u = 0; u < L.k; ++u) {
    rand_vals[size_t(u)] = int(rr % L.rand_per_user) + 1;
    rr /= L.rand_per_user;
  }
  uint64_t dd = d_idx;
  for (int u = 0; u < L.k; ++u) {
    demands[size_t(u)] = int(dd % uint64_t(L.n)) + 1;
    dd /= uint64_t(L.n);
  }

  for (uint64_t w = begin; w < end; ++w) {
    fn(lib, rand_vals, demands, r_idx, d_idx);

    if (++d_idx == L.demand_total) {
      d_idx = 0;
      for (int u = 0; u < L.k; ++u) demands[size_t(u)] = 1;
      if (++r_idx == L.rand_total) {
        r_idx = 0;
        for (int u = 0; u < L.k; ++u) rand_vals[size_t(u)] = 1;
        size_t i = 0;
        while (i < L.lib_symbols && lib.data[i] == L.q - 1) lib.data[i++] = 0;
        if (i < L.lib_symbols) ++lib.data[i];
      } else {
        int u = 0;
        while (rand_vals[size_t(u)] == int(L.rand_per_user)) rand_vals[size_t(u++)] = 1;
        ++rand_vals[size_t(u)];
      }
    } else {
      int u = 0;
      while (demands[size_t(u)] == L.n) demands[size_t(u++)] = 1;
      ++demands[size_t(u)];
    }
  }
}

enum class Var { d, dk, mk, zk, x, meta };

struct VarPlan {
  Var var;
  int user;  // for dk/mk/zk
};

VarPlan plan_var(const std::string& name, const Layout& L) {
  if (name == "d") return {Var::d, 0};
  if (name == "X") return {Var::x, 0};
  if (name == "meta") return {Var::meta, 0};
  if (name.size() >= 2) {
    int user = std::stoi(name.substr(1));
    if (user >= 1 && user <= L.k) {
      if (name[0] == 'd') return {Var::dk, user};
      if (name[0] == 'M') return {Var::mk, user};
      if (name[0] == 'Z') return {Var::zk, user};
    }
  }
  throw std::invalid_argument("unknown audit variable: " + name);
}

uint64_t var_radix(const VarPlan& p, const Layout& L) {
  switch (p.var) {
    case Var::d: return L.demand_total;
    case Var::dk: return uint64_t(L.n);
    case Var::mk: return L.rand_per_user;
    case Var::zk: return L.z_radix;
    case Var::x: return L.x_radix;
    case Var::meta: return L.meta_radix;
  }
  return 0;
}

DistributionTable enumerate_impl(const Layout& L, const std::vector<std::string>& vars) {
  uint64_t worlds = L.world_count();
  if (worlds > L.spec.budget)
    throw std::invalid_argument(
        "world space of " + std::to_string(worlds) + " exceeds the budget of " +
        std::to_string(L.spec.budget) + "; reduce q, the subfile size, or K");

  std::vector<VarPlan> plans;
  std::vector<DistributionTable::Column> cols;
  for (const auto& name : vars) {
    plans.push_back(plan_var(name, L));
    cols.push_back({name, var_radix(plans.back(), L)});
  }

  DistributionTable table(cols);
  int chunks = std::max(1, L.spec.chunks);
  std::vector<uint64_t> values(vars.size());
  for (int c = 0; c < chunks; ++c) {
    uint64_t begin = worlds * uint64_t(c) / uint64_t(chunks);
    uint64_t end = worlds * uint64_t(c + 1) / uint64_t(chunks);
    DistributionTable part(cols);
    for_each_world(L, begin, end,
                   [&](const Library& lib, const std::vector<int>& rand_vals,
                       const std::vector<int>& demands, uint64_t r_idx, uint64_t d_idx) {
                     (void)r_idx;
                     Layout::Eval e = L.eval(lib, rand_vals, demands);
                     for (size_t i = 0; i < plans.size(); ++i) {
                       switch (plans[i].var) {
                         case Var::d: values[i] = d_idx; break;
                         case Var::dk:
                           values[i] = uint64_t(demands[size_t(plans[i].user - 1)] - 1);
                           break;
                         case Var::mk:
                           values[i] = L.rand_per_user == 1
                                           ? 0
                                           : uint64_t(rand_vals[size_t(plans[i].user - 1)] - 1);
                           break;
                         case Var::zk:
                           values[i] = L.z_code(e.caches[size_t(plans[i].user - 1)]);
                           break;
                         case Var::x: values[i] = L.x_code(e); break;
                         case Var::meta: values[i] = L.meta_code(e.broadcast, e); break;
                       }
                     }
                     part.add(values);
                   });
    table.merge(part);
  }
  return table;
}

/// Per-user symbol values in the order the decode certificates expect:
/// the user's cache symbols, then every payload symbol.
void collect_values(const Layout::Eval& e, int user, std::vector<uint8_t>& out) {
  out.clear();
  const CacheState& c = e.caches[size_t(user - 1)];
  for (const auto& [ref, v] : c.man_part)
    out.insert(out.end(), v.data().begin(), v.data().end());
  for (const auto& [rank, v] : c.key_part)
    out.insert(out.end(), v.data().begin(), v.data().end());
  for (const auto& p : e.broadcast.payloads)
    out.insert(out.end(), p.data().begin(), p.data().end());
}

struct DecodePlan {
  // certificates[user-1][target] over collect_values(user); targets are the
  // flat symbol positions of the user's demanded file.
  std::vector<std::vector<std::vector<uint8_t>>> certificates;
  std::vector<std::vector<size_t>> target_positions;
};

bool build_decode_plan(const Layout& L, const std::vector<int>& rand_vals,
                       const std::vector<int>& demands, DecodePlan& plan, std::string* detail) {
  Library zero = Library::zeros(L.n, L.q, L.subfiles, L.sub_len);
  Layout::Eval base = L.eval(zero, rand_vals, demands);
  std::vector<uint8_t> vals;
  // The zero library must produce all-zero symbols: answers and payloads are
  // linear, not affine. Fault injection trips this.
  for (int u = 1; u <= L.k; ++u) {
    collect_values(base, u, vals);
    for (uint8_t v : vals)
      if (v != 0) {
        if (detail) *detail = "outputs are not linear in the library (corrupted payload?)";
        return false;
      }
  }

  std::vector<size_t> row_count(size_t(L.k));
  std::vector<std::vector<std::vector<uint8_t>>> rows(size_t(L.k));
  for (int u = 1; u <= L.k; ++u) {
    collect_values(base, u, vals);
    row_count[size_t(u - 1)] = vals.size();
    rows[size_t(u - 1)].assign(vals.size(), std::vector<uint8_t>(L.lib_symbols, 0));
  }
  for (size_t j = 0; j < L.lib_symbols; ++j) {
    Library e = zero;
    e.data[j] = 1;
    Layout::Eval probe = L.eval(e, rand_vals, demands);
    for (int u = 1; u <= L.k; ++u) {
      collect_values(probe, u, vals);
      if (vals.size() != row_count[size_t(u - 1)]) {
        if (detail) *detail = "answer sizes vary with the library";
        return false;
      }
      for (size_t i = 0; i < vals.size(); ++i) rows[size_t(u - 1)][i][j] = vals[i];
    }
  }

  plan.certificates.assign(size_t(L.k), {});
  plan.target_positions.assign(size_t(L.k), {});
  Library shape = zero;
  for (int u = 1; u <= L.k; ++u) {
    LinearSystem sys(L.q, L.lib_symbols, 0);
    for (const auto& r : rows[size_t(u - 1)]) sys.add_functional(r);
    int file = demands[size_t(u - 1)];
    for (size_t rank = 0; rank < size_t(L.subfiles); ++rank) {
      for (size_t sym = 0; sym < L.sub_len; ++sym) {
        size_t pos = shape.flat(file, rank, sym);
        std::vector<uint8_t> target(L.lib_symbols, 0);
        target[pos] = 1;
        auto cert = sys.certificate(target);
        if (!cert) {
          if (detail)
            *detail = "user " + std::to_string(u) + " cannot recover subfile " +
                      std::to_string(rank) + " of file " + std::to_string(file);
          return false;
        }
        plan.certificates[size_t(u - 1)].push_back(std::move(*cert));
        plan.target_positions[size_t(u - 1)].push_back(pos);
      }
    }
  }
  return true;
}

}  // namespace

bool AuditReport::all_pass() const {
  if (!decodability.pass) return false;
  for (const auto& v : demand_privacy)
    if (!v.pass) return false;
  if (cache_privacy_applicable)
    for (const auto& v : cache_privacy)
      if (!v.pass) return false;
  return true;
}

uint64_t world_count(const WorldSpec& spec) {
  Layout L(spec);
  uint64_t worlds = L.world_count();
  if (worlds > spec.budget)
    throw std::invalid_argument("world space exceeds the budget; reduce q, subfiles, or K");
  return worlds;
}

DistributionTable enumerate_worlds(const WorldSpec& spec, const std::vector<std::string>& vars) {
  return enumerate_impl(Layout(spec), vars);
}

Verdict check_decodability(const WorldSpec& spec, std::string* detail) {
  Layout L(spec);
  uint64_t worlds = L.world_count();
  if (worlds > spec.budget)
    throw std::invalid_argument("world space exceeds the budget; reduce q, subfiles, or K");

  // One certificate set per (randomness, demand); the certified combination
  // must then reproduce the true symbol in every library world.
  std::vector<int> rand_vals(size_t(L.k), 1), demands(size_t(L.k), 1);
  std::vector<DecodePlan> plans(L.rand_total * L.demand_total);
  for (uint64_t r_idx = 0; r_idx < L.rand_total; ++r_idx) {
    uint64_t rr = r_idx;
    for (int u = 0; u < L.k; ++u) {
      rand_vals[size_t(u)] = int(rr % L.rand_per_user) + 1;
      rr /= L.rand_per_user;
    }
    for (uint64_t d_idx = 0; d_idx < L.demand_total; ++d_idx) {
      uint64_t dd = d_idx;
      for (int u = 0; u < L.k; ++u) {
        demands[size_t(u)] = int(dd % uint64_t(L.n)) + 1;
        dd /= uint64_t(L.n);
      }
      std::string why;
      if (!build_decode_plan(L, rand_vals, demands, plans[r_idx * L.demand_total + d_idx],
                             &why)) {
        if (detail)
          *detail = why + " (randomness " + std::to_string(r_idx) + ", demand " +
                    std::to_string(d_idx) + ")";
        return {false, 0.0};
      }
    }
  }

  bool ok = true;
  std::string why;
  std::vector<uint8_t> vals;
  for_each_world(Layout(spec), 0, worlds,
                 [&](const Library& lib, const std::vector<int>& rv,
                     const std::vector<int>& dv, uint64_t r_idx, uint64_t d_idx) {
                   if (!ok) return;
                   const DecodePlan& plan = plans[r_idx * L.demand_total + d_idx];
                   Layout::Eval e = L.eval(lib, rv, dv);
                   for (int u = 1; u <= L.k && ok; ++u) {
                     collect_values(e, u, vals);
                     const auto& certs = plan.certificates[size_t(u - 1)];
                     const auto& targets = plan.target_positions[size_t(u - 1)];
                     for (size_t i = 0; i < certs.size(); ++i) {
                       uint32_t acc = 0;
                       for (size_t j = 0; j < vals.size(); ++j)
                         acc += uint32_t(certs[i][j]) * vals[j];
                       if (uint8_t(acc % L.q) != lib.data[targets[i]]) {
                         ok = false;
                         why = "recovered value mismatch for user " + std::to_string(u);
                         break;
                       }
                     }
                   }
                 });
  if (!ok && detail) *detail = why;
  return {ok, 0.0};
}

namespace {

Verdict verdict_from(const DistributionTable& table, const std::vector<int>& x,
                     const std::vector<int>& y, const std::vector<int>& z) {
  auto mi = table.mutual_information(x, y, z);
  return {mi.exactly_zero, mi.bits};
}

}  // namespace

Verdict check_demand_privacy(const WorldSpec& spec, int user) {
  std::string du = "d" + std::to_string(user);
  std::string zu = "Z" + std::to_string(user);
  auto table = enumerate_worlds(spec, {"d", du, zu, "X"});
  return verdict_from(table, {0}, {3}, {1, 2});
}

Verdict check_cache_privacy(const WorldSpec& spec, int user) {
  std::vector<std::string> vars;
  Layout L(spec);
  for (int u = 1; u <= L.k; ++u) vars.push_back("M" + std::to_string(u));
  vars.push_back("d" + std::to_string(user));
  vars.push_back("Z" + std::to_string(user));
  vars.push_back("X");
  auto table = enumerate_worlds(spec, vars);
  std::vector<int> m_cols;
  for (int u = 0; u < L.k; ++u) m_cols.push_back(u);
  return verdict_from(table, m_cols, {L.k + 2}, {L.k, L.k + 1});
}

double leakage_epsilon(const WorldSpec& spec, int user, bool* exact_zero) {
  std::string mu = "M" + std::to_string(user);
  auto table = enumerate_worlds(spec, {mu, "X"});
  double h_m = table.entropy({0});
  if (h_m == 0.0)
    throw std::domain_error("leakage undefined: user has no cache randomness (H(M)=0)");
  auto mi = table.mutual_information({0}, {1});
  if (exact_zero) *exact_zero = mi.exactly_zero;
  return mi.exactly_zero ? 0.0 : mi.bits / h_m;
}

LoadMemory measure_load_memory(const WorldSpec& spec) {
  Layout L(spec);
  // Sizes do not depend on symbol values, so a zero library suffices and no
  // library enumeration is needed for the counts.
  Library zero = Library::zeros(L.n, L.q, L.subfiles, L.sub_len);
  std::vector<int> rand_vals(size_t(L.k), 1), demands(size_t(L.k), 1);
  std::vector<uint64_t> stored(size_t(L.k), 0);
  uint64_t min_payload = UINT64_MAX, max_payload = 0;
  for (uint64_t r_idx = 0; r_idx < L.rand_total; ++r_idx) {
    uint64_t rr = r_idx;
    for (int u = 0; u < L.k; ++u) {
      rand_vals[size_t(u)] = int(rr % L.rand_per_user) + 1;
      rr /= L.rand_per_user;
    }
    for (uint64_t d_idx = 0; d_idx < L.demand_total; ++d_idx) {
      uint64_t dd = d_idx;
      for (int u = 0; u < L.k; ++u) {
        demands[size_t(u)] = int(dd % uint64_t(L.n)) + 1;
        dd /= uint64_t(L.n);
      }
      Layout::Eval e = L.eval(zero, rand_vals, demands);
      for (int u = 0; u < L.k; ++u) stored[size_t(u)] += e.caches[size_t(u)].stored_symbols();
      uint64_t pay = e.broadcast.payload_symbols();
      min_payload = std::min(min_payload, pay);
      max_payload = std::max(max_payload, pay);
    }
  }

  LoadMemory out;
  uint64_t draws = L.rand_total * L.demand_total;
  uint64_t file_symbols = uint64_t(L.subfiles) * L.sub_len;
  Rational mem = 0;
  for (int u = 0; u < L.k; ++u) {
    Rational m(stored[size_t(u)], draws * file_symbols);
    if (m > mem) mem = m;
  }
  out.memory = mem;
  out.constant_payload = min_payload == max_payload;
  out.load = Rational(min_payload, file_symbols);
  out.worst_load = Rational(max_payload, file_symbols);

  // Exact content entropies need the world table.
  std::vector<std::string> vars;
  for (int u = 1; u <= L.k; ++u) vars.push_back("Z" + std::to_string(u));
  for (int u = 1; u <= L.k; ++u) vars.push_back("M" + std::to_string(u));
  auto table = enumerate_impl(L, vars);
  for (int u = 0; u < L.k; ++u) {
    out.cache_entropy_bits.push_back(table.entropy({u}));
    out.metadata_entropy_bits.push_back(table.entropy({L.k + u}));
  }
  return out;
}

AuditReport run_audit(const WorldSpec& spec) {
  Layout L(spec);
  AuditReport report;
  report.worlds = world_count(spec);
  report.decodability = check_decodability(spec, &report.decode_detail);

  // One master table per user carries every per-user verdict: the exact
  // factorization checks, the leakage ratio, and the cache entropy.
  for (int user = 1; user <= L.k; ++user) {
    std::vector<std::string> vars = {"d", "d" + std::to_string(user)};
    for (int u = 1; u <= L.k; ++u) vars.push_back("M" + std::to_string(u));
    vars.push_back("Z" + std::to_string(user));
    vars.push_back("X");
    auto master = enumerate_impl(L, vars);
    int zu = 2 + L.k, x = 3 + L.k;
    report.demand_privacy.push_back(verdict_from(master, {0}, {x}, {1, zu}));

    std::vector<int> m_cols;
    for (int u = 0; u < L.k; ++u) m_cols.push_back(2 + u);
    double h_m = master.entropy({2 + (user - 1)});
    if (h_m == 0.0) {
      report.cache_privacy_applicable = false;
      report.leakage_epsilon.push_back(std::nan(""));
      report.leakage_exact_zero.push_back(true);
    } else {
      report.cache_privacy.push_back(verdict_from(master, m_cols, {x}, {1, zu}));
      auto mi = master.mutual_information({2 + (user - 1)}, {x});
      report.leakage_epsilon.push_back(mi.exactly_zero ? 0.0 : mi.bits / h_m);
      report.leakage_exact_zero.push_back(mi.exactly_zero);
    }
  }

  report.load = measure_load_memory(spec);
  return report;
}

// ---------------------------------------------------------------------------
// PIR-side checks
// ---------------------------------------------------------------------------

PirPrivacyReport check_pir_privacy(const pir::PirScheme& scheme) {
  PirPrivacyReport report;
  report.pass = true;
  for (int server = 1; server <= 2; ++server) {
    int nq = scheme.query_count(server);
    // counts[d][q]: the conditional law of Q_s given d over uniform r.
    std::vector<std::vector<uint64_t>> counts(
        size_t(scheme.num_messages()), std::vector<uint64_t>(size_t(nq), 0));
    DistributionTable joint({{"d", uint64_t(scheme.num_messages())}, {"q", uint64_t(nq)}});
    for (int d = 1; d <= scheme.num_messages(); ++d) {
      for (int r = 0; r < scheme.randomness_count(); ++r) {
        auto [q1, q2] = scheme.query_pair(d, r);
        int q = server == 1 ? q1 : q2;
        ++counts[size_t(d - 1)][size_t(q - 1)];
        joint.add({uint64_t(d - 1), uint64_t(q - 1)});
      }
    }
    bool same = true;
    for (size_t d = 1; d < counts.size(); ++d)
      if (counts[d] != counts[0]) same = false;
    auto mi = joint.mutual_information({0}, {1});
    report.mi_bits[size_t(server - 1)] = mi.exactly_zero ? 0.0 : mi.bits;
    if (!same) report.pass = false;
  }
  return report;
}

UdiqReport check_udiq(const pir::PirScheme& scheme) {
  UdiqReport report;
  uint64_t n1 = uint64_t(scheme.query_count(1));
  uint64_t n2 = uint64_t(scheme.query_count(2));
  DistributionTable joint({{"q1", n1}, {"q2", n2}});
  for (int d = 1; d <= scheme.num_messages(); ++d) {
    DistributionTable per({{"q1", n1}, {"q2", n2}});
    for (int r = 0; r < scheme.randomness_count(); ++r) {
      auto [q1, q2] = scheme.query_pair(d, r);
      per.add({uint64_t(q1 - 1), uint64_t(q2 - 1)});
      joint.add({uint64_t(q1 - 1), uint64_t(q2 - 1)});
    }
    auto mi = per.mutual_information({0}, {1});
    report.per_demand_bits.push_back(mi.exactly_zero ? 0.0 : mi.bits);
  }
  auto mi = joint.mutual_information({0}, {1});
  report.marginal = {mi.exactly_zero, mi.exactly_zero ? 0.0 : mi.bits};
  return report;
}

TranscriptDump example_transcript(const WorldSpec& spec) {
  Layout L(spec);
  TranscriptDump dump;
  dump.placement_users = L.placement_users;
  dump.t = L.t;
  dump.library = Library::zeros(L.n, L.q, L.subfiles, L.sub_len);
  for (size_t i = 0; i < dump.library.data.size(); ++i)
    dump.library.data[i] = uint8_t(i % L.q);
  dump.randomness.assign(size_t(L.k), 1);
  dump.demands.resize(size_t(L.k));
  for (int u = 0; u < L.k; ++u) dump.demands[size_t(u)] = (u % L.n) + 1;
  Layout::Eval e = L.eval(dump.library, dump.randomness, dump.demands);
  dump.caches = std::move(e.caches);
  dump.broadcast = std::move(e.broadcast);
  return dump;
}

Verdict smoke_decode(const WorldSpec& spec, uint64_t samples, uint64_t seed,
                     std::string* detail) {
  Layout L(spec);
  std::mt19937_64 rng(seed);
  std::vector<int> rand_vals(size_t(L.k)), demands(size_t(L.k));
  Library lib = Library::zeros(L.n, L.q, L.subfiles, L.sub_len);
  std::vector<uint8_t> vals;
  for (uint64_t s = 0; s < samples; ++s) {
    for (auto& v : rand_vals) v = int(rng() % L.rand_per_user) + 1;
    for (auto& v : demands) v = int(rng() % uint64_t(L.n)) + 1;
    for (auto& sym : lib.data) sym = uint8_t(rng() % L.q);
    DecodePlan plan;
    std::string why;
    if (!build_decode_plan(L, rand_vals, demands, plan, &why)) {
      if (detail) *detail = why;
      return {false, 0.0};
    }
    Layout::Eval e = L.eval(lib, rand_vals, demands);
    for (int u = 1; u <= L.k; ++u) {
      collect_values(e, u, vals);
      const auto& certs = plan.certificates[size_t(u - 1)];
      const auto& targets = plan.target_positions[size_t(u - 1)];
      for (size_t i = 0; i < certs.size(); ++i) {
        uint32_t acc = 0;
        for (size_t j = 0; j < vals.size(); ++j) acc += uint32_t(certs[i][j]) * vals[j];
        if (uint8_t(acc % L.q) != lib.data[targets[i]]) {
          if (detail) *detail = "smoke sample " + std::to_string(s) + " failed decode";
          return {false, 0.0};
        }
      }
    }
  }
  return {true, 0.0};
}

PirCorrectness verify_pir_correctness(const pir::PirScheme& scheme, size_t msg_len,
                                      uint64_t budget) {
  if (msg_len % size_t(scheme.subpacketization()) != 0)
    throw std::invalid_argument("message length must be a multiple of the subpacketization");
  size_t symbols = size_t(scheme.num_messages()) * msg_len;
  uint64_t libs = 1;
  for (size_t i = 0; i < symbols; ++i)
    libs = checked_mul(libs, scheme.field_modulus(), "library space");
  uint64_t worlds = checked_mul(
      libs, uint64_t(scheme.num_messages()) * uint64_t(scheme.randomness_count()), "worlds");
  if (worlds > budget)
    throw std::invalid_argument("correctness sweep of " + std::to_string(worlds) +
                                " worlds exceeds the budget");

  PirCorrectness out;
  out.worlds = worlds;
  out.all_correct = true;

  const uint8_t q = uint8_t(scheme.field_modulus());
  const int n = scheme.num_messages();
  const int rc = scheme.randomness_count();
  std::vector<uint8_t> flat(symbols, 0);
  std::vector<uint8_t> decoded(msg_len);
  pir::MessagesView lib{flat.data(), size_t(n), msg_len, q};

  // Answers depend on (library, query) only, so with the library in the outer
  // loop each query's answer is computed once and reused by every (d, r) pair
  // that sends it.
  struct Pair { int d, r, q1, q2; };
  std::vector<Pair> pairs;
  pairs.reserve(size_t(n) * size_t(rc));
  for (int d = 1; d <= n; ++d)
    for (int r = 0; r < rc; ++r) {
      auto [q1, q2] = scheme.query_pair(d, r);
      pairs.push_back({d, r, q1, q2});
    }
  std::vector<std::vector<uint8_t>> a1(size_t(scheme.query_count(1)));
  std::vector<std::vector<uint8_t>> a2(size_t(scheme.query_count(2)));
  for (int query = 1; query <= scheme.query_count(1); ++query)
    a1[size_t(query - 1)].resize(scheme.answer_symbols(1, query, msg_len));
  for (int query = 1; query <= scheme.query_count(2); ++query)
    a2[size_t(query - 1)].resize(scheme.answer_symbols(2, query, msg_len));

  while (out.all_correct) {
    for (int query = 1; query <= scheme.query_count(1); ++query)
      scheme.answer_into(1, query, lib, a1[size_t(query - 1)].data());
    for (int query = 1; query <= scheme.query_count(2); ++query)
      scheme.answer_into(2, query, lib, a2[size_t(query - 1)].data());
    for (const Pair& p : pairs) {
      scheme.decode_pair_into(p.d, p.q1, p.q2, a1[size_t(p.q1 - 1)], a2[size_t(p.q2 - 1)],
                              msg_len, decoded.data());
      if (std::memcmp(decoded.data(), flat.data() + size_t(p.d - 1) * msg_len, msg_len) != 0) {
        out.all_correct = false;
        out.first_failure = scheme.id() + ": decode mismatch at d=" + std::to_string(p.d) +
                            " r=" + std::to_string(p.r);
        break;
      }
    }
    size_t i = 0;
    while (i < symbols && flat[i] == q - 1) flat[i++] = 0;
    if (i == symbols) break;
    ++flat[i];
  }
  return out;
}

}  // namespace ccpir::auditor
