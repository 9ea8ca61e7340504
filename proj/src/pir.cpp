#include "ccpir/pir.hpp"

#include <algorithm>
#include <stdexcept>

#include "ccpir/linear.hpp"

namespace ccpir::pir {

namespace {

Rational table_cost(const std::vector<std::vector<std::vector<std::vector<int>>>>& coeffs,
                    const std::vector<std::vector<std::pair<int, int>>>& pairs, int server) {
  // Average answer rows over uniform randomness; must not depend on demand.
  std::optional<Rational> cost;
  for (const auto& row_for_d : pairs) {
    uint64_t symbols = 0;
    for (const auto& [q1, q2] : row_for_d) {
      int query = server == 1 ? q1 : q2;
      symbols += coeffs[size_t(server - 1)][size_t(query - 1)].size();
    }
    Rational c(symbols, row_for_d.size());
    if (!cost) cost = c;
    else if (*cost != c)
      throw std::invalid_argument("answer size depends on the demand; scheme table is broken");
  }
  return *cost;
}

}  // namespace

void PirScheme::check_server(int server) const {
  if (server != 1 && server != 2) throw std::invalid_argument("server must be 1 or 2");
}
void PirScheme::check_demand(int demand) const {
  if (demand < 1 || demand > n_) throw std::invalid_argument("demand out of range");
}
void PirScheme::check_randomness(int r) const {
  if (r < 0 || r >= randomness_count()) throw std::invalid_argument("randomness out of range");
}

bool PirScheme::constant_answer_size(int server) const {
  check_server(server);
  size_t probe = size_t(subpacketization());
  size_t first = answer_symbols(server, 1, probe);
  for (int query = 2; query <= query_count(server); ++query)
    if (answer_symbols(server, query, probe) != first) return false;
  return true;
}

int PirScheme::match_q2(int q1, int demand) const {
  check_demand(demand);
  for (int r = 0; r < randomness_count(); ++r) {
    auto [a, b] = query_pair(demand, r);
    if (a == q1) return b;
  }
  throw std::invalid_argument("no second-server query completes (q1, demand)");
}

int PirScheme::match_q1(int q2, int demand) const {
  check_demand(demand);
  for (int r = 0; r < randomness_count(); ++r) {
    auto [a, b] = query_pair(demand, r);
    if (b == q2) return a;
  }
  throw std::invalid_argument("no first-server query completes (q2, demand)");
}

MessagesView PirScheme::view_of(const std::vector<SymbolVec>& messages,
                                std::vector<uint8_t>& scratch) const {
  if (int(messages.size()) != n_)
    throw std::invalid_argument("library has wrong message count");
  size_t len = messages[0].size();
  if (len % size_t(fprime_) != 0)
    throw std::invalid_argument("message length not a multiple of the subpacketization");
  scratch.clear();
  for (const auto& m : messages) {
    if (m.size() != len || m.modulus() != q_)
      throw std::invalid_argument("library messages disagree in length or field");
    scratch.insert(scratch.end(), m.data().begin(), m.data().end());
  }
  return MessagesView{scratch.data(), size_t(n_), len, uint8_t(q_)};
}

SymbolVec PirScheme::answer(int server, int query, const std::vector<SymbolVec>& messages) const {
  check_server(server);
  if (query < 1 || query > query_count(server))
    throw std::invalid_argument("query outside this server's query space");
  std::vector<uint8_t> scratch;
  MessagesView lib = view_of(messages, scratch);
  std::vector<uint8_t> out(answer_symbols(server, query, lib.msg_len));
  answer_into(server, query, lib, out.data());
  return SymbolVec(q_, std::move(out));
}

SymbolVec PirScheme::decode(int demand, int r, const SymbolVec& a1, const SymbolVec& a2,
                            size_t msg_len) const {
  check_demand(demand);
  check_randomness(r);
  auto [q1, q2] = query_pair(demand, r);
  std::vector<uint8_t> out(msg_len);
  decode_pair_into(demand, q1, q2, a1.span(), a2.span(), msg_len, out.data());
  return SymbolVec(q_, std::move(out));
}

PirTranscript run_transcript(const PirScheme& scheme, int demand, int r,
                             const std::vector<SymbolVec>& messages) {
  auto [q1, q2] = scheme.query_pair(demand, r);
  PirTranscript t{demand, r, q1, q2, scheme.answer(1, q1, messages),
                  scheme.answer(2, q2, messages)};
  return t;
}

// ---------------------------------------------------------------------------
// TableScheme
// ---------------------------------------------------------------------------

TableScheme::TableScheme(std::string id, int n, uint32_t q,
                         std::vector<std::vector<std::vector<std::vector<int>>>> coeffs,
                         std::vector<std::vector<std::pair<int, int>>> pairs)
    : PirScheme(std::move(id), n, q, 1, table_cost(coeffs, pairs, 1),
                table_cost(coeffs, pairs, 2)),
      pairs_(std::move(pairs)) {
  rows_.resize(2);
  for (int s = 0; s < 2; ++s) {
    for (const auto& query_rows : coeffs[size_t(s)]) {
      std::vector<std::vector<uint8_t>> reduced;
      for (const auto& row : query_rows) {
        if (int(row.size()) != n) throw std::invalid_argument("answer row width must be N");
        std::vector<uint8_t> r8(row.size());
        for (size_t i = 0; i < row.size(); ++i) r8[i] = gf_from_signed(row[i], uint8_t(q));
        reduced.push_back(std::move(r8));
      }
      rows_[size_t(s)].push_back(std::move(reduced));
    }
  }
  if (int(pairs_.size()) != n) throw std::invalid_argument("pair table needs one row per demand");
  // Every (demand, randomness) must admit a decode certificate: the demanded
  // unit vector lies in the span of the two answers' coefficient rows.
  for (int d = 1; d <= n; ++d) {
    for (int r = 0; r < randomness_count(); ++r) {
      auto [q1, q2] = query_pair(d, r);
      LinearSystem sys(q, size_t(n), 0);
      for (const auto& row : rows_[0][size_t(q1 - 1)]) sys.add_functional(row);
      for (const auto& row : rows_[1][size_t(q2 - 1)]) sys.add_functional(row);
      std::vector<uint8_t> target(size_t(n), 0);
      target[size_t(d - 1)] = 1;
      if (!sys.contains(target))
        throw std::invalid_argument("scheme table cannot decode demand " + std::to_string(d));
    }
  }
}

int TableScheme::query_count(int server) const {
  check_server(server);
  return int(rows_[size_t(server - 1)].size());
}

std::pair<int, int> TableScheme::query_pair(int demand, int r) const {
  check_demand(demand);
  check_randomness(r);
  return pairs_[size_t(demand - 1)][size_t(r)];
}

size_t TableScheme::answer_symbols(int server, int query, size_t msg_len) const {
  check_server(server);
  return rows_[size_t(server - 1)][size_t(query - 1)].size() * msg_len;
}

void TableScheme::answer_into(int server, int query, const MessagesView& lib,
                              uint8_t* out) const {
  const auto& rows = rows_[size_t(server - 1)][size_t(query - 1)];
  const uint8_t q = lib.q;
  for (const auto& row : rows) {
    for (size_t u = 0; u < lib.msg_len; ++u) {
      uint32_t acc = 0;
      for (size_t n = 0; n < lib.count; ++n)
        acc += uint32_t(row[n]) * lib.data[n * lib.msg_len + u];
      *out++ = uint8_t(acc % q);
    }
  }
}

void TableScheme::decode_pair_into(int demand, int q1, int q2, std::span<const uint8_t> a1,
                                   std::span<const uint8_t> a2, size_t msg_len,
                                   uint8_t* out) const {
  check_demand(demand);
  const size_t n = size_t(num_messages());
  LinearSystem sys(field_modulus(), n, msg_len);
  const auto& rows1 = rows_[0][size_t(q1 - 1)];
  const auto& rows2 = rows_[1][size_t(q2 - 1)];
  for (size_t i = 0; i < rows1.size(); ++i) {
    SymbolVec value(field_modulus(),
                    std::vector<uint8_t>(a1.begin() + long(i * msg_len),
                                         a1.begin() + long((i + 1) * msg_len)));
    sys.add_equation(rows1[i], value);
  }
  for (size_t i = 0; i < rows2.size(); ++i) {
    SymbolVec value(field_modulus(),
                    std::vector<uint8_t>(a2.begin() + long(i * msg_len),
                                         a2.begin() + long((i + 1) * msg_len)));
    sys.add_equation(rows2[i], value);
  }
  std::vector<uint8_t> target(n, 0);
  target[size_t(demand - 1)] = 1;
  auto solved = sys.solve(target);
  if (!solved) throw std::logic_error("query pair cannot decode the demand");
  std::copy(solved->data().begin(), solved->data().end(), out);
}

const std::vector<std::vector<uint8_t>>& TableScheme::answer_rows(int server, int query) const {
  check_server(server);
  return rows_[size_t(server - 1)][size_t(query - 1)];
}

// ---------------------------------------------------------------------------
// Built-in tables
// ---------------------------------------------------------------------------

std::unique_ptr<PirScheme> make_tsc2(uint32_t q) {
  // Server 1: T=0 -> nothing, T=1 -> W1+W2. Server 2: W1 | W2.
  std::vector<std::vector<std::vector<std::vector<int>>>> coeffs = {
      {{}, {{1, 1}}},
      {{{1, 0}}, {{0, 1}}},
  };
  // (d, T) -> (Q1, Q2): Q1 = T+1; Q2 picks W_d when T=0 and W_{3-d} when T=1.
  std::vector<std::vector<std::pair<int, int>>> pairs = {
      {{1, 1}, {2, 2}},  // d=1
      {{1, 2}, {2, 1}},  // d=2
  };
  return std::make_unique<TableScheme>("tsc2", 2, q, std::move(coeffs), std::move(pairs));
}

std::unique_ptr<PirScheme> make_xor3(uint32_t q) {
  std::vector<std::vector<std::vector<std::vector<int>>>> coeffs = {
      {{{1, 1, 0}}, {{1, 0, 1}}, {{0, 1, 1}}},
      {{{1, 0, 0}}, {{0, 1, 0}}, {{0, 0, 1}}},
  };
  // Rows T=0..2 of the N=3 table; Q1 = T+1, Q2 indexes the answered message.
  std::vector<std::vector<std::pair<int, int>>> pairs = {
      {{1, 2}, {2, 3}, {3, 1}},  // d=1: W2, W3, W1
      {{1, 1}, {2, 2}, {3, 3}},  // d=2: W1, W2, W3
      {{1, 3}, {2, 1}, {3, 2}},  // d=3: W3, W1, W2
  };
  return std::make_unique<TableScheme>("xor3", 3, q, std::move(coeffs), std::move(pairs));
}

std::unique_ptr<PirScheme> make_signed4(uint32_t q) {
  if (q == 2) throw std::invalid_argument("signed4 needs -1 != 1, so an odd field");
  std::vector<std::vector<std::vector<std::vector<int>>>> coeffs = {
      {{{1, 1, 1, 1}}, {{-1, -1, 1, 1}}, {{-1, 1, -1, 1}}, {{-1, 1, 1, -1}}},
      {{{-1, 1, 1, 1}}, {{1, -1, 1, 1}}, {{1, 1, -1, 1}}, {{1, 1, 1, -1}}},
  };
  // Rows T=0..3 of the N=4 table.
  std::vector<std::vector<std::pair<int, int>>> pairs = {
      {{1, 1}, {2, 2}, {3, 3}, {4, 4}},  // d=1
      {{1, 2}, {2, 1}, {3, 4}, {4, 3}},  // d=2
      {{1, 3}, {2, 4}, {3, 1}, {4, 2}},  // d=3
      {{1, 4}, {2, 3}, {3, 2}, {4, 1}},  // d=4
  };
  return std::make_unique<TableScheme>("signed4", 4, q, std::move(coeffs), std::move(pairs));
}

// ---------------------------------------------------------------------------
// Privacy-key scheme
// ---------------------------------------------------------------------------

std::vector<uint8_t> sum_constrained_vector(int n, uint32_t q, uint32_t target_sum, int index) {
  // First n-1 digits are the little-endian base-q expansion of index; the
  // last digit closes the sum.
  std::vector<uint8_t> v(static_cast<size_t>(n));
  uint32_t acc = 0;
  int rem = index;
  for (int i = 0; i < n - 1; ++i) {
    v[size_t(i)] = uint8_t(rem % int(q));
    rem /= int(q);
    acc += v[size_t(i)];
  }
  v[size_t(n - 1)] = uint8_t((target_sum + q * q - acc % q) % q);
  return v;
}

int sum_constrained_index(std::span<const uint8_t> vec, uint32_t q) {
  int index = 0, stride = 1;
  for (size_t i = 0; i + 1 < vec.size(); ++i) {
    index += int(vec[i]) * stride;
    stride *= int(q);
  }
  return index;
}

namespace {

class PkScheme : public TableScheme {
 public:
  static std::unique_ptr<PirScheme> make(int n, uint32_t q) {
    int count = 1;
    for (int i = 0; i + 1 < n; ++i) count *= int(q);

    std::vector<std::vector<std::vector<std::vector<int>>>> coeffs(2);
    for (int i = 0; i < count; ++i) {
      auto p = sum_constrained_vector(n, q, q - 1, i);
      coeffs[0].push_back({std::vector<int>(p.begin(), p.end())});
      auto z = sum_constrained_vector(n, q, 0, i);
      coeffs[1].push_back({std::vector<int>(z.begin(), z.end())});
    }
    // Randomness r picks p = vec(r); the effective request is p + e_d.
    std::vector<std::vector<std::pair<int, int>>> pairs(static_cast<size_t>(n));
    for (int d = 1; d <= n; ++d) {
      for (int r = 0; r < count; ++r) {
        auto p = sum_constrained_vector(n, q, q - 1, r);
        p[size_t(d - 1)] = uint8_t((p[size_t(d - 1)] + 1) % q);
        pairs[size_t(d - 1)].push_back({r + 1, sum_constrained_index(p, q) + 1});
      }
    }
    return std::make_unique<PkScheme>(n, q, std::move(coeffs), std::move(pairs));
  }

  PkScheme(int n, uint32_t q, std::vector<std::vector<std::vector<std::vector<int>>>> coeffs,
           std::vector<std::vector<std::pair<int, int>>> pairs)
      : TableScheme("pk:" + std::to_string(n) + ":" + std::to_string(q), n, q,
                    std::move(coeffs), std::move(pairs)) {}
};

}  // namespace

std::unique_ptr<PirScheme> make_pk(int n, uint32_t q) {
  if (n < 1) throw std::invalid_argument("pk needs at least one message");
  if (!is_prime(q)) throw std::invalid_argument("pk field must be prime");
  return PkScheme::make(n, q);
}

// ---------------------------------------------------------------------------
// Caching scheme -> PIR (MAN instance)
// ---------------------------------------------------------------------------

namespace {

/// <b>_a in {1,...,a}.
int mod1(int b, int a) {
  int r = b % a;
  if (r <= 0) r += a;
  return r;
}

class CcToPirMan : public PirScheme {
 public:
  CcToPirMan(int n, int t, uint32_t q)
      : PirScheme("cc2pir:man:" + std::to_string(n) + ":" + std::to_string(t), n, q,
                  int(binom_u64(uint64_t(n), t)), Rational(t),
                  Rational(n - t, t + 1)),
        n_(n), t_(t), subsets_(n, t), deliver_subsets_(n, t + 1) {
    if (t < 0 || t > n) throw std::invalid_argument("t out of range");
    fprime_sz_ = subsets_.size();

    // Demand vectors per shift: d(i) = <i - shift>_n.
    demand_by_shift_.assign(size_t(n) + 1, {});
    for (int shift = 1; shift <= n; ++shift) {
      auto& d = demand_by_shift_[size_t(shift)];
      d.resize(size_t(n) + 1);
      for (int i = 1; i <= n; ++i) d[size_t(i)] = mod1(i - shift, n);
    }

    // Cached subfile list per user r: (file, rank) with r in tau, canonical order.
    cache_slots_.assign(size_t(n) + 1, {});
    cache_pos_.assign(size_t(n) + 1,
                      std::vector<size_t>(size_t(n) * fprime_sz_, SIZE_MAX));
    for (int r = 1; r <= n; ++r) {
      for (int file = 1; file <= n; ++file)
        for (size_t rank = 0; rank < fprime_sz_; ++rank)
          if (subsets_.contains(rank, r)) {
            cache_pos_[size_t(r)][subfile_flat(file, rank)] = cache_slots_[size_t(r)].size();
            cache_slots_[size_t(r)].push_back(subfile_flat(file, rank));
          }
    }

    // Payload recipes per shift: payload per (t+1)-subset S, summing
    // W_{d_s, S\{s}} over s in S.
    payload_terms_.assign(size_t(n) + 1, {});
    for (int shift = 1; shift <= n; ++shift) {
      auto& per_s = payload_terms_[size_t(shift)];
      per_s.resize(deliver_subsets_.size());
      for (size_t srank = 0; srank < deliver_subsets_.size(); ++srank) {
        for (int s : deliver_subsets_.subset(srank)) {
          uint32_t tau_mask = deliver_subsets_.mask(srank) & ~(1u << (s - 1));
          size_t tau_rank = subsets_.rank_of_mask(tau_mask);
          per_s[srank].push_back(subfile_flat(demand_by_shift_[size_t(shift)][size_t(s)], tau_rank));
        }
      }
    }

    // Decode recipes per (r, shift): one step per subfile of the demanded
    // message, either straight out of the cache answer or one payload minus
    // the cached interference.
    decode_steps_.assign(size_t(n) + 1, std::vector<std::vector<DecodeStep>>(size_t(n) + 1));
    for (int r = 1; r <= n; ++r) {
      for (int shift = 1; shift <= n; ++shift) {
        int theta = demand_by_shift_[size_t(shift)][size_t(r)];
        auto& steps = decode_steps_[size_t(r)][size_t(shift)];
        steps.resize(fprime_sz_);
        for (size_t rank = 0; rank < fprime_sz_; ++rank) {
          DecodeStep& step = steps[rank];
          if (subsets_.contains(rank, r)) {
            step.from_cache = true;
            step.cache_pos = cache_pos_[size_t(r)][subfile_flat(theta, rank)];
          } else {
            step.from_cache = false;
            uint32_t s_mask = subsets_.mask(rank) | (1u << (r - 1));
            step.payload_index = deliver_subsets_.rank_of_mask(s_mask);
            for (int s : deliver_subsets_.subset(step.payload_index)) {
              if (s == r) continue;
              uint32_t tau_mask = s_mask & ~(1u << (s - 1));
              step.subtract_cache.push_back(
                  cache_pos_[size_t(r)]
                            [subfile_flat(demand_by_shift_[size_t(shift)][size_t(s)],
                                          subsets_.rank_of_mask(tau_mask))]);
            }
          }
        }
      }
    }
  }

  int randomness_count() const override { return n_; }
  int query_count(int server) const override {
    check_server(server);
    return n_;
  }

  std::pair<int, int> query_pair(int demand, int r) const override {
    check_demand(demand);
    check_randomness(r);
    int user = r + 1;
    return {user, mod1(user - demand, n_)};
  }

  size_t answer_symbols(int server, int query, size_t msg_len) const override {
    check_server(server);
    (void)query;
    size_t unit = msg_len / fprime_sz_;
    if (server == 1) return cache_slots_[1].size() * unit;
    return deliver_subsets_.size() * unit;
  }

  void answer_into(int server, int query, const MessagesView& lib, uint8_t* out) const override {
    size_t unit = lib.msg_len / fprime_sz_;
    const uint8_t q = lib.q;
    if (server == 1) {
      for (size_t slot : cache_slots_[size_t(query)]) {
        const uint8_t* src = lib.data + slot * unit;
        std::copy(src, src + unit, out);
        out += unit;
      }
      return;
    }
    for (const auto& terms : payload_terms_[size_t(query)]) {
      for (size_t u = 0; u < unit; ++u) out[u] = 0;
      for (size_t slot : terms) {
        const uint8_t* src = lib.data + slot * unit;
        for (size_t u = 0; u < unit; ++u) out[u] = gf_add(out[u], src[u], q);
      }
      out += unit;
    }
  }

  void decode_pair_into(int demand, int q1, int q2, std::span<const uint8_t> a1,
                        std::span<const uint8_t> a2, size_t msg_len,
                        uint8_t* out) const override {
    if (demand_by_shift_[size_t(q2)][size_t(q1)] != demand)
      throw std::invalid_argument("query pair does not retrieve this demand");
    size_t unit = msg_len / fprime_sz_;
    const uint8_t q = uint8_t(field_modulus());
    for (const DecodeStep& step : decode_steps_[size_t(q1)][size_t(q2)]) {
      if (step.from_cache) {
        const uint8_t* src = a1.data() + step.cache_pos * unit;
        std::copy(src, src + unit, out);
      } else {
        const uint8_t* src = a2.data() + step.payload_index * unit;
        std::copy(src, src + unit, out);
        for (size_t pos : step.subtract_cache) {
          const uint8_t* sub = a1.data() + pos * unit;
          for (size_t u = 0; u < unit; ++u) out[u] = gf_sub(out[u], sub[u], q);
        }
      }
      out += unit;
    }
  }

 private:
  struct DecodeStep {
    bool from_cache = false;
    size_t cache_pos = 0;
    size_t payload_index = 0;
    std::vector<size_t> subtract_cache;
  };

  size_t subfile_flat(int file, size_t rank) const {
    return size_t(file - 1) * fprime_sz_ + rank;
  }

  int n_, t_;
  SubsetTable subsets_;          // t-subsets: subfile index space
  SubsetTable deliver_subsets_;  // (t+1)-subsets: payload index space
  size_t fprime_sz_ = 0;
  std::vector<std::vector<int>> demand_by_shift_;
  std::vector<std::vector<size_t>> cache_slots_;        // per user: flat subfile slots
  std::vector<std::vector<size_t>> cache_pos_;          // per user: flat slot -> position in answer
  std::vector<std::vector<std::vector<size_t>>> payload_terms_;  // per shift, per S
  std::vector<std::vector<std::vector<DecodeStep>>> decode_steps_;
};

}  // namespace

std::unique_ptr<PirScheme> make_cc_to_pir_man(int n, int t, uint32_t q) {
  return std::make_unique<CcToPirMan>(n, t, q);
}

// ---------------------------------------------------------------------------
// Time sharing
// ---------------------------------------------------------------------------

namespace {

class TimeShareScheme : public PirScheme {
 public:
  TimeShareScheme(std::shared_ptr<const PirScheme> base, Rational mu1, int num, int den)
      : PirScheme(base->id() + ":ts:" + std::to_string(num) + "/" + std::to_string(den),
                  base->num_messages(), base->field_modulus(),
                  den * base->subpacketization(),
                  mu1 * base->download_cost(1) + (1 - mu1) * base->download_cost(2),
                  mu1 * base->download_cost(2) + (1 - mu1) * base->download_cost(1)),
        base_(std::move(base)), num_(num), den_(den) {}

  int randomness_count() const override {
    return base_->randomness_count() * base_->randomness_count();
  }
  int query_count(int server) const override {
    check_server(server);
    return base_->query_count(1) * base_->query_count(2);
  }

  std::pair<int, int> query_pair(int demand, int r) const override {
    check_demand(demand);
    check_randomness(r);
    int rc = base_->randomness_count();
    auto [q1x, q2x] = base_->query_pair(demand, r / rc);
    auto [q1y, q2y] = base_->query_pair(demand, r % rc);
    return {pack1(q1x, q2y), pack2(q2x, q1y)};
  }

  int match_q2(int q1, int demand) const override {
    auto [q1x, q2y] = unpack1(q1);
    return pack2(base_->match_q2(q1x, demand), base_->match_q1(q2y, demand));
  }
  int match_q1(int q2, int demand) const override {
    auto [q2x, q1y] = unpack2(q2);
    return pack1(base_->match_q1(q2x, demand), base_->match_q2(q1y, demand));
  }

  size_t answer_symbols(int server, int query, size_t msg_len) const override {
    check_server(server);
    auto [mx, my] = split(msg_len);
    if (server == 1) {
      auto [q1x, q2y] = unpack1(query);
      return base_->answer_symbols(1, q1x, mx) + base_->answer_symbols(2, q2y, my);
    }
    auto [q2x, q1y] = unpack2(query);
    return base_->answer_symbols(2, q2x, mx) + base_->answer_symbols(1, q1y, my);
  }

  void answer_into(int server, int query, const MessagesView& lib, uint8_t* out) const override {
    auto [mx, my] = split(lib.msg_len);
    std::vector<uint8_t> part_x(lib.count * mx), part_y(lib.count * my);
    for (size_t n = 0; n < lib.count; ++n) {
      const uint8_t* msg = lib.data + n * lib.msg_len;
      std::copy(msg, msg + mx, part_x.data() + n * mx);
      std::copy(msg + mx, msg + lib.msg_len, part_y.data() + n * my);
    }
    MessagesView vx{part_x.data(), lib.count, mx, lib.q};
    MessagesView vy{part_y.data(), lib.count, my, lib.q};
    if (server == 1) {
      auto [q1x, q2y] = unpack1(query);
      base_->answer_into(1, q1x, vx, out);
      base_->answer_into(2, q2y, vy, out + base_->answer_symbols(1, q1x, mx));
    } else {
      auto [q2x, q1y] = unpack2(query);
      base_->answer_into(2, q2x, vx, out);
      base_->answer_into(1, q1y, vy, out + base_->answer_symbols(2, q2x, mx));
    }
  }

  void decode_pair_into(int demand, int q1, int q2, std::span<const uint8_t> a1,
                        std::span<const uint8_t> a2, size_t msg_len,
                        uint8_t* out) const override {
    auto [mx, my] = split(msg_len);
    auto [q1x, q2y] = unpack1(q1);
    auto [q2x, q1y] = unpack2(q2);
    // Our A1 = (base A1 on X | base A2 on Y); our A2 = (base A2 on X | base A1 on Y).
    size_t a1x_len = base_->answer_symbols(1, q1x, mx);
    size_t a2x_len = base_->answer_symbols(2, q2x, mx);
    base_->decode_pair_into(demand, q1x, q2x, a1.subspan(0, a1x_len), a2.subspan(0, a2x_len),
                            mx, out);
    base_->decode_pair_into(demand, q1y, q2y, a2.subspan(a2x_len), a1.subspan(a1x_len), my,
                            out + mx);
  }

 private:
  std::pair<size_t, size_t> split(size_t msg_len) const {
    if (msg_len % size_t(den_) != 0)
      throw std::invalid_argument("message length not divisible for time sharing");
    size_t mx = msg_len / size_t(den_) * size_t(num_);
    return {mx, msg_len - mx};
  }
  int pack1(int q1x, int q2y) const { return (q1x - 1) * base_->query_count(2) + q2y; }
  int pack2(int q2x, int q1y) const { return (q2x - 1) * base_->query_count(1) + q1y; }
  std::pair<int, int> unpack1(int q) const {
    int n2 = base_->query_count(2);
    return {(q - 1) / n2 + 1, (q - 1) % n2 + 1};
  }
  std::pair<int, int> unpack2(int q) const {
    int n1 = base_->query_count(1);
    return {(q - 1) / n1 + 1, (q - 1) % n1 + 1};
  }

  std::shared_ptr<const PirScheme> base_;
  int num_, den_;
};

}  // namespace

std::unique_ptr<PirScheme> make_time_share(std::shared_ptr<const PirScheme> base, Rational mu1) {
  if (mu1 < 0 || mu1 > 1) throw std::invalid_argument("mu1 must lie in [0, 1]");
  int num = int(rat_num(mu1).convert_to<long>());
  int den = int(rat_den(mu1).convert_to<long>());
  return std::make_unique<TimeShareScheme>(std::move(base), mu1, num, den);
}

// ---------------------------------------------------------------------------
// Identifier parsing
// ---------------------------------------------------------------------------

std::unique_ptr<PirScheme> parse_scheme(const std::string& id,
                                        std::optional<uint32_t> q_override) {
  std::vector<std::string> tok;
  size_t start = 0;
  while (true) {
    size_t pos = id.find(':', start);
    if (pos == std::string::npos) {
      tok.push_back(id.substr(start));
      break;
    }
    tok.push_back(id.substr(start, pos - start));
    start = pos + 1;
  }

  Rational mu1;
  bool time_shared = false;
  if (tok.size() >= 2 && tok[tok.size() - 2] == "ts") {
    mu1 = rat_from_string(tok.back());
    time_shared = true;
    tok.pop_back();
    tok.pop_back();
  }

  auto want = [&](size_t n, const char* what) {
    if (tok.size() != n) throw std::invalid_argument(std::string("bad scheme id, expected ") + what);
  };

  std::unique_ptr<PirScheme> base;
  if (tok[0] == "tsc2") {
    want(1, "tsc2");
    base = make_tsc2(q_override.value_or(2));
  } else if (tok[0] == "xor3") {
    want(1, "xor3");
    base = make_xor3(q_override.value_or(2));
  } else if (tok[0] == "signed4") {
    want(1, "signed4");
    base = make_signed4(q_override.value_or(3));
  } else if (tok[0] == "pk") {
    want(3, "pk:N:q");
    base = make_pk(std::stoi(tok[1]), uint32_t(std::stoul(tok[2])));
  } else if (tok[0] == "cc2pir") {
    want(4, "cc2pir:man:N:t");
    if (tok[1] != "man") throw std::invalid_argument("only the man instance is built in");
    base = make_cc_to_pir_man(std::stoi(tok[2]), std::stoi(tok[3]), q_override.value_or(2));
  } else {
    throw std::invalid_argument("unknown PIR scheme id: " + id);
  }
  if (time_shared)
    return make_time_share(std::shared_ptr<const PirScheme>(std::move(base)), mu1);
  return base;
}

}  // namespace ccpir::pir
