#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ccpir/caching.hpp"
#include "ccpir/distribution.hpp"
#include "ccpir/pir.hpp"
#include "ccpir/rational.hpp"

namespace ccpir::auditor {

/// Test-surface fault hooks. An auditor that cannot fail verifies nothing;
/// these give the negative controls something to trip on.
enum class Fault {
  none,
  corrupt_payload,  // adds 1 to the first payload symbol after delivery
  leak_metadata,    // appends every user's cache metadata to the broadcast
};

/// One fully-enumerable audit configuration: the scheme, its parameters, and
/// the exact world space (every library realization x every randomness x
/// every demand vector, all uniform).
struct WorldSpec {
  std::string scheme;  // "man" | "yma" | "vu" | "compose:<pir-id>"
  int n = 2;
  int k = 2;
  int t = 1;
  uint32_t q = 0;         // 0 = scheme default (compose: the PIR field)
  size_t symbol_len = 1;  // symbols per PIR piece; subfile = F' * symbol_len
  uint64_t budget = uint64_t(1) << 24;
  int chunks = 1;  // world-space partitions; merge is additive, order-free
  Fault fault = Fault::none;
};

struct Verdict {
  bool pass = false;
  double mi_bits = 0.0;  // exact zero when pass
};

struct LoadMemory {
  Rational memory;     // expected stored symbols per user / F
  Rational load;       // payload symbols / F
  bool constant_payload = true;
  Rational worst_load;  // equals load when constant
  std::vector<double> cache_entropy_bits;     // H(Z_k)
  std::vector<double> metadata_entropy_bits;  // H(M_k)
};

struct AuditReport {
  uint64_t worlds = 0;
  Verdict decodability;
  std::string decode_detail;
  std::vector<Verdict> demand_privacy;  // per user
  std::vector<Verdict> cache_privacy;   // per user; skipped when H(M)=0
  bool cache_privacy_applicable = true;
  std::vector<double> leakage_epsilon;  // per user; NaN when H(M)=0
  std::vector<bool> leakage_exact_zero;
  LoadMemory load;

  bool all_pass() const;
};

/// Number of worlds the spec enumerates; throws when over budget.
uint64_t world_count(const WorldSpec& spec);

/// Exact joint distribution of the named variables over the full world space.
/// Available variables: "d" (the demand vector), "d1".."dK", "M1".."MK",
/// "Z1".."ZK" (cache content including metadata), "X" (payloads plus broadcast
/// metadata), "meta" (broadcast metadata alone). Enumeration is split into
/// spec.chunks ranges and merged, so the result is partition-order free.
DistributionTable enumerate_worlds(const WorldSpec& spec, const std::vector<std::string>& vars);

/// Decodability: for every (randomness, demand), the span oracle must certify
/// each user's demanded subfiles from its cache plus the payloads, and the
/// certified combination must reproduce the true value in every enumerated
/// world. Fails on fault injection or any scheme bug.
Verdict check_decodability(const WorldSpec& spec, std::string* detail = nullptr);

/// I(d; X | d_k, Z_k) == 0, decided by exact rational factorization.
Verdict check_demand_privacy(const WorldSpec& spec, int user);

/// I(M_1..M_K; X | d_k, Z_k) == 0, decided by exact rational factorization.
Verdict check_cache_privacy(const WorldSpec& spec, int user);

/// epsilon_k = I(M_k; X) / H(M_k); zero iff exact factorization. Throws
/// std::domain_error when H(M_k) = 0 (no cache randomness to leak).
double leakage_epsilon(const WorldSpec& spec, int user, bool* exact_zero = nullptr);

LoadMemory measure_load_memory(const WorldSpec& spec);

/// Full audit: decodability plus per-user demand privacy, cache privacy and
/// leakage, plus exact load/memory accounting.
AuditReport run_audit(const WorldSpec& spec);

// --- PIR-side checks -------------------------------------------------------

struct PirPrivacyReport {
  bool pass = false;
  double mi_bits[2] = {0.0, 0.0};  // I(d; Q_s) per server; exact-zero verdict
};

/// Per-server privacy: the conditional law of Q_s over uniform randomness is
/// the same for every demand. Queries never see the library by construction,
/// so the library-conditioned form coincides with this one.
PirPrivacyReport check_pir_privacy(const pir::PirScheme& scheme);

struct UdiqReport {
  Verdict marginal;                    // I(Q1; Q2) under uniform (d, r): the operative test
  std::vector<double> per_demand_bits; // I(Q1; Q2 | d = n), reported, not gating
};

UdiqReport check_udiq(const pir::PirScheme& scheme);

struct PirCorrectness {
  uint64_t worlds = 0;
  bool all_correct = false;
  std::string first_failure;
};

/// Exhaustive decode check over every (library, randomness, demand) world at
/// the given message length. Streaming, no table; budget guards the sweep.
PirCorrectness verify_pir_correctness(const pir::PirScheme& scheme, size_t msg_len,
                                      uint64_t budget = uint64_t(1) << 30);

/// One concrete execution for inspection: a fixed pseudo-library, the first
/// randomness draw, and a cycling demand vector.
struct TranscriptDump {
  caching::Library library;
  std::vector<int> randomness;
  std::vector<int> demands;
  std::vector<caching::CacheState> caches;
  caching::Broadcast broadcast;
  int placement_users = 0;
  int t = 0;
};

TranscriptDump example_transcript(const WorldSpec& spec);

/// Seeded decode smoke over `samples` random worlds; the only place the
/// seed matters, exhaustive checks never consume it. Usable past the table
/// budget since nothing is accumulated.
Verdict smoke_decode(const WorldSpec& spec, uint64_t samples, uint64_t seed,
                     std::string* detail = nullptr);

}  // namespace ccpir::auditor
