#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ccpir/combinatorics.hpp"
#include "ccpir/envelope.hpp"
#include "ccpir/field.hpp"
#include "ccpir/pir.hpp"
#include "ccpir/rational.hpp"

namespace ccpir::caching {

/// N files split into equal subfiles over GF(q), flat layout
/// [file][subfile][symbol]. Subfile ranks follow the canonical lexicographic
/// subset order of the placement they index.
struct Library {
  int num_files = 0;
  uint32_t q = 2;
  int subfiles = 0;
  size_t sub_len = 1;
  std::vector<uint8_t> data;

  static Library zeros(int num_files, uint32_t q, int subfiles, size_t sub_len);

  size_t symbols_per_file() const { return size_t(subfiles) * sub_len; }
  size_t total_symbols() const { return size_t(num_files) * symbols_per_file(); }
  size_t flat(int file, size_t rank, size_t sym = 0) const {
    return (size_t(file - 1) * size_t(subfiles) + rank) * sub_len + sym;
  }
  std::span<const uint8_t> subfile(int file, size_t rank) const {
    return {data.data() + flat(file, rank), sub_len};
  }
  SymbolVec subfile_vec(int file, size_t rank) const;
  /// The N subfiles with a common rank, as PIR messages.
  std::vector<SymbolVec> messages_at(size_t rank) const;
};

struct SubfileRef {
  int file;
  size_t rank;
  bool operator==(const SubfileRef&) const = default;
};

/// One user's cache: the uncoded MAN part, the per-subset key part (server-1
/// PIR answers in the composed schemes), and the private metadata index that
/// determined the key part.
struct CacheState {
  int user = 0;
  std::vector<std::pair<SubfileRef, SymbolVec>> man_part;
  std::vector<std::pair<size_t, SymbolVec>> key_part;  // keyed by subset rank, user not in subset
  uint32_t metadata = 0;

  size_t stored_symbols() const;
};

/// Delivery-phase broadcast: multicast payloads indexed by their (t+1)-subset
/// rank, plus the out-of-band metadata users need to decode (demand vector for
/// plain MAN/YMA, the shift vector for virtual users, the second-server
/// queries for composed schemes). Metadata is excluded from load accounting.
struct Broadcast {
  uint32_t q = 2;
  std::vector<size_t> payload_subsets;
  std::vector<SymbolVec> payloads;
  std::vector<uint32_t> metadata;

  size_t payload_symbols() const;
};

/// MAN placement: user k caches subfile (n, tau) iff k is in tau.
std::vector<CacheState> man_place(const Library& lib, int k, int t);

/// MAN delivery: one payload per (t+1)-subset S, the field sum of
/// W_{d_s, S\{s}} over s in S. Metadata carries the demand vector.
Broadcast man_deliver(const std::vector<int>& demands, const Library& lib, int t);

/// Lowest-indexed user demanding each distinct file.
std::vector<int> yma_leaders(const std::vector<int>& demands);

/// YMA delivery: MAN payloads restricted to subsets meeting the leader set;
/// C(K, t+1) - C(K-l, t+1) payloads for l distinct demands. Dropped payloads
/// are in the span of the sent ones plus caches, which the audit certifies
/// with the span oracle instead of a bespoke decoder.
Broadcast yma_deliver(const std::vector<int>& demands, const Library& lib, int t);

struct VuOutput {
  std::vector<CacheState> caches;   // real users; metadata = S_k
  Broadcast broadcast;              // YMA payloads for NK users; metadata = C vector
  std::vector<int> virtual_demand;  // the NK-user demand vector actually delivered
};

/// Virtual-users scheme: real user k takes virtual slot (k-1)N + S_k of an
/// (N, NK) MAN placement; C_k = (S_k - d_k) mod N drives a per-block cyclic
/// shift so every file is demanded exactly K times.
VuOutput vu_scheme(int n, int k, int t, const Library& lib, const std::vector<int>& s_vec,
                   const std::vector<int>& demands);

/// Composed placement: MAN part plus, for each subset tau without the user, a
/// first-server PIR answer on the rank-tau messages. q1_vec[k] is user k+1's
/// uniformly chosen first-server query (1-based), which is the cache metadata.
std::vector<CacheState> compose_place(const Library& lib, int k, int t,
                                      const pir::PirScheme& scheme,
                                      const std::vector<int>& q1_vec);

/// Composed delivery: the second-server query for user s completes (q1_s, d_s);
/// payload per S sums the second-server answers on rank-(S\{s}) messages.
/// Requires constant-size second-server answers.
Broadcast compose_deliver(const std::vector<int>& demands, const pir::PirScheme& scheme,
                          const Library& lib, const std::vector<int>& q1_vec, int t);

// Memory-load point generators; each returns the raw points with their
// subpacketizations, lower-convex-envelope already applied.
std::vector<TradeoffPoint> thm2_points(int n, int k);
std::vector<TradeoffPoint> cor1_points(int n, int k);
std::vector<TradeoffPoint> cor_smalln_points(int n, int k, Rational mu1 = Rational(1, 2));
std::vector<TradeoffPoint> privacy_key_points(int n, int k);
std::vector<TradeoffPoint> compose_points(const pir::PirScheme& scheme, int k, Rational mu1);

/// Dispatcher over the named generators; "compose:<scheme-id>" composes the
/// parsed scheme with time-sharing weight mu1.
std::vector<TradeoffPoint> tradeoff_points(const std::string& generator, int n, int k,
                                           Rational mu1 = Rational(1, 2));

}  // namespace ccpir::caching
