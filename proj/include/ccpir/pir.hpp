#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ccpir/combinatorics.hpp"
#include "ccpir/field.hpp"
#include "ccpir/rational.hpp"

namespace ccpir::pir {

/// N equal-length messages over GF(q), laid out contiguously message-major.
struct MessagesView {
  const uint8_t* data = nullptr;
  size_t count = 0;
  size_t msg_len = 0;
  uint8_t q = 2;

  std::span<const uint8_t> message(size_t n) const {
    return {data + n * msg_len, msg_len};
  }
};

/// Two-server PIR scheme with finite, enumerable query and randomness spaces.
///
/// The contract every implementation keeps:
///  - query_pair is a deterministic function of (demand, randomness) and never
///    sees the library, so privacy statements conditioned on the library
///    coincide with their unconditional forms;
///  - answers are linear in the library symbols;
///  - decode returns exactly the demanded message for every library.
///
/// Queries are 1-based indices into documented per-server tables. Message
/// lengths must be multiples of subpacketization(); the per-symbol structure
/// repeats blockwise.
class PirScheme {
 public:
  PirScheme(std::string id, int n, uint32_t q, int fprime, Rational rd1, Rational rd2)
      : id_(std::move(id)), n_(n), q_(q), fprime_(fprime), rd_{rd1, rd2} {}
  virtual ~PirScheme() = default;

  const std::string& id() const { return id_; }
  int num_messages() const { return n_; }
  uint32_t field_modulus() const { return q_; }
  int subpacketization() const { return fprime_; }
  /// Expected answer symbols per message symbol, exact.
  Rational download_cost(int server) const { return rd_[size_t(server - 1)]; }
  Rational total_download_cost() const { return rd_[0] + rd_[1]; }

  virtual int randomness_count() const = 0;
  virtual int query_count(int server) const = 0;
  virtual std::pair<int, int> query_pair(int demand, int r) const = 0;

  virtual size_t answer_symbols(int server, int query, size_t msg_len) const = 0;
  virtual void answer_into(int server, int query, const MessagesView& lib,
                           uint8_t* out) const = 0;
  virtual void decode_pair_into(int demand, int q1, int q2, std::span<const uint8_t> a1,
                                std::span<const uint8_t> a2, size_t msg_len,
                                uint8_t* out) const = 0;

  /// Whether answers from this server have one size across all queries.
  /// tsc2's first server is the flagged exception (0 or 1 symbols); load
  /// accounting then holds in expectation only.
  virtual bool constant_answer_size(int server) const;

  /// The query completing (q1, d) / (q2, d) into a pair that retrieves d.
  /// Defaults scan the (d, r) table; throws if no completion exists.
  virtual int match_q2(int q1, int demand) const;
  virtual int match_q1(int q2, int demand) const;

  // Allocating conveniences over the *_into entry points.
  SymbolVec answer(int server, int query, const std::vector<SymbolVec>& messages) const;
  SymbolVec decode(int demand, int r, const SymbolVec& a1, const SymbolVec& a2,
                   size_t msg_len) const;

 protected:
  void check_server(int server) const;
  void check_demand(int demand) const;
  void check_randomness(int r) const;
  MessagesView view_of(const std::vector<SymbolVec>& messages,
                       std::vector<uint8_t>& scratch) const;

 private:
  std::string id_;
  int n_;
  uint32_t q_;
  int fprime_;
  Rational rd_[2];
};

/// One full PIR execution.
struct PirTranscript {
  int demand;
  int randomness;
  int q1, q2;
  SymbolVec a1, a2;
};

PirTranscript run_transcript(const PirScheme& scheme, int demand, int r,
                             const std::vector<SymbolVec>& messages);

/// Subpacketization-1 scheme given by explicit per-query coefficient rows and
/// a (demand, randomness) -> query pair table. Decoding solves the demanded
/// unit vector from the two answers' coefficient rows once per (d, r) at
/// construction; a missing certificate means the tables are wrong and throws.
class TableScheme : public PirScheme {
 public:
  /// coeffs[server][query-1] = list of answer rows, each a length-N vector of
  /// signed coefficients reduced mod q. pairs[d-1][r] = (q1, q2), 1-based.
  TableScheme(std::string id, int n, uint32_t q,
              std::vector<std::vector<std::vector<std::vector<int>>>> coeffs,
              std::vector<std::vector<std::pair<int, int>>> pairs);

  int randomness_count() const override { return int(pairs_[0].size()); }
  int query_count(int server) const override;
  std::pair<int, int> query_pair(int demand, int r) const override;
  size_t answer_symbols(int server, int query, size_t msg_len) const override;
  void answer_into(int server, int query, const MessagesView& lib, uint8_t* out) const override;
  void decode_pair_into(int demand, int q1, int q2, std::span<const uint8_t> a1,
                        std::span<const uint8_t> a2, size_t msg_len,
                        uint8_t* out) const override;

  /// The answer row coefficients (reduced mod q) for one server query.
  const std::vector<std::vector<uint8_t>>& answer_rows(int server, int query) const;

 private:
  std::vector<std::vector<std::vector<std::vector<uint8_t>>>> rows_;  // [server][query][row][n]
  std::vector<std::vector<std::pair<int, int>>> pairs_;               // [d-1][r]
};

/// Table I scheme (N=2): server 1 answers nothing or the sum of both
/// messages; server 2 answers a single message. (R_D1, R_D2) = (1/2, 1).
std::unique_ptr<PirScheme> make_tsc2(uint32_t q = 2);
/// Table III scheme (N=3): both servers answer one symbol, R_D = 2.
std::unique_ptr<PirScheme> make_xor3(uint32_t q = 2);
/// Table IV scheme (N=4) with signed coefficients; needs an odd field.
std::unique_ptr<PirScheme> make_signed4(uint32_t q = 3);

/// Privacy-key scheme: randomness is a vector p in GF(q)^N with sum q-1;
/// Q1 indexes p, Q2 indexes p + e_d (a sum-zero vector), answers are the
/// corresponding inner products with the library. Demand-private but not
/// query-independent in general.
std::unique_ptr<PirScheme> make_pk(int n, uint32_t q);

/// Enumeration of GF(q)^n vectors with a fixed digit sum mod q: the first
/// n-1 digits run lexicographically, the last is forced. Shared by the
/// privacy-key scheme and its tests.
std::vector<uint8_t> sum_constrained_vector(int n, uint32_t q, uint32_t target_sum, int index);
int sum_constrained_index(std::span<const uint8_t> vec, uint32_t q);

/// PIR scheme built from an N-user/N-file MAN caching scheme: server 1 serves
/// the cache of user r, server 2 serves the delivery for the demand vector
/// that is the cyclic shift placing the wanted file at user r.
/// Costs (t, (N-t)/(t+1)), subpacketization C(N, t).
std::unique_ptr<PirScheme> make_cc_to_pir_man(int n, int t, uint32_t q = 2);

/// Time-sharing wrapper: fraction mu1 of each message runs the base scheme
/// as-is, the rest with server roles swapped.
std::unique_ptr<PirScheme> make_time_share(std::shared_ptr<const PirScheme> base, Rational mu1);

/// Parses a scheme identifier: "tsc2", "xor3", "signed4", "pk:N:q",
/// "cc2pir:man:N:t", each optionally followed by ":ts:a/b". q_override
/// replaces the default field where the id does not pin one.
std::unique_ptr<PirScheme> parse_scheme(const std::string& id,
                                        std::optional<uint32_t> q_override = {});

}  // namespace ccpir::pir
