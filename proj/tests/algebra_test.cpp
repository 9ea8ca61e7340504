#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ccpir/combinatorics.hpp"
#include "ccpir/distribution.hpp"
#include "ccpir/envelope.hpp"
#include "ccpir/field.hpp"
#include "ccpir/linear.hpp"
#include "ccpir/rational.hpp"

namespace ccpir {
namespace {

TEST(FieldElement, BasicOps) {
  // GF(3): 0 - 1 = 2.
  EXPECT_EQ((FieldElement(0, 3) - FieldElement(1, 3)).value(), 2u);
  // GF(2): 1 + 1 = 0.
  EXPECT_EQ((FieldElement(1, 2) + FieldElement(1, 2)).value(), 0u);
}

TEST(FieldElement, InverseMatchesBruteForce) {
  // Oracle: inv(a) is the unique x with a*x = 1 mod q.
  for (uint32_t q : {2u, 3u, 5u, 7u}) {
    for (uint32_t a = 1; a < q; ++a) {
      uint32_t expected = 0;
      for (uint32_t x = 1; x < q; ++x)
        if (a * x % q == 1) expected = x;
      EXPECT_EQ(FieldElement(a, q).inverse().value(), expected) << "a=" << a << " q=" << q;
    }
  }
  EXPECT_EQ(FieldElement(2, 5).inverse().value(), 3u);
}

TEST(FieldElement, FieldAxiomsExhaustive) {
  for (uint32_t q : {2u, 3u, 5u, 7u}) {
    for (uint32_t a = 0; a < q; ++a) {
      FieldElement fa(a, q);
      EXPECT_EQ((fa + (-fa)).value(), 0u);
      if (a != 0) EXPECT_EQ((fa * fa.inverse()).value(), 1u);
      for (uint32_t b = 0; b < q; ++b) {
        FieldElement fb(b, q);
        EXPECT_EQ((fa + fb).value(), (fb + fa).value());
        EXPECT_EQ((fa * fb).value(), (fb * fa).value());
        for (uint32_t c = 0; c < q; ++c) {
          FieldElement fc(c, q);
          EXPECT_EQ(((fa + fb) + fc).value(), (fa + (fb + fc)).value());
          EXPECT_EQ(((fa * fb) * fc).value(), (fa * (fb * fc)).value());
          EXPECT_EQ((fa * (fb + fc)).value(), (fa * fb + fa * fc).value());
        }
      }
    }
  }
}

TEST(FieldElement, Errors) {
  EXPECT_THROW(FieldElement(1, 4), std::invalid_argument);   // non-prime modulus
  EXPECT_THROW(FieldElement(3, 3), std::invalid_argument);   // value out of range
  EXPECT_THROW(FieldElement(1, 3) + FieldElement(1, 5), std::invalid_argument);
  EXPECT_THROW(FieldElement(0, 5).inverse(), std::domain_error);
}

TEST(Binom, MatchesPascalRecurrence) {
  // Oracle: Pascal triangle built by the addition recurrence only.
  constexpr int kMax = 40;
  std::vector<std::vector<BigInt>> pascal(kMax + 1);
  for (int n = 0; n <= kMax; ++n) {
    pascal[n].assign(size_t(n) + 1, 1);
    for (int k = 1; k < n; ++k)
      pascal[n][size_t(k)] = pascal[n - 1][size_t(k) - 1] + pascal[n - 1][size_t(k)];
  }
  for (int n = 0; n <= kMax; ++n)
    for (int k = 0; k <= n; ++k)
      EXPECT_EQ(binom(uint64_t(n), k), pascal[n][size_t(k)]);

  EXPECT_EQ(binom(4, 2), 6);
  EXPECT_EQ(binom(2, 3), 0);
  EXPECT_EQ(binom(5, -1), 0);
  EXPECT_EQ(binom(8, 3), 56);
  EXPECT_EQ(binom(100, 50), BigInt("100891344545564193334812497256"));
}

TEST(Subsets, LexicographicOrder) {
  auto s21 = subsets(2, 1);
  ASSERT_EQ(s21.size(), 2u);
  EXPECT_EQ(s21[0], std::vector<int>{1});
  EXPECT_EQ(s21[1], std::vector<int>{2});

  auto s32 = subsets(3, 2);
  ASSERT_EQ(s32.size(), 3u);
  EXPECT_EQ(s32[0], (std::vector<int>{1, 2}));
  EXPECT_EQ(s32[1], (std::vector<int>{1, 3}));
  EXPECT_EQ(s32[2], (std::vector<int>{2, 3}));

  auto s40 = subsets(4, 0);
  ASSERT_EQ(s40.size(), 1u);
  EXPECT_TRUE(s40[0].empty());

  auto s53 = subsets(5, 3);
  EXPECT_EQ(s53.size(), binom_u64(5, 3));
  EXPECT_TRUE(std::is_sorted(s53.begin(), s53.end()));
}

TEST(Subsets, TableRoundTrip) {
  SubsetTable table(5, 2);
  for (size_t r = 0; r < table.size(); ++r) {
    EXPECT_EQ(table.rank_of_mask(table.mask(r)), r);
    for (int u : table.subset(r)) EXPECT_TRUE(table.contains(r, u));
  }
}

TEST(SpanSolve, SubstitutionExample) {
  // x1 + x2 = 5 over GF(7), x2 = 3  =>  x1 = 2.
  std::vector<std::pair<std::vector<uint8_t>, SymbolVec>> known = {
      {{1, 1}, SymbolVec(7, std::vector<uint8_t>{5})},
      {{0, 1}, SymbolVec(7, std::vector<uint8_t>{3})},
  };
  auto result = span_solve(known, std::vector<uint8_t>{1, 0}, 7);
  ASSERT_TRUE(std::holds_alternative<SymbolVec>(result));
  EXPECT_EQ(std::get<SymbolVec>(result)[0], 2);
}

TEST(SpanSolve, CacheCancellation) {
  // User 1 holds A1 and B1 and hears A2+A1; A2 is then in its span.
  // Flat symbol order A1, A2, B1, B2.
  std::vector<std::pair<std::vector<uint8_t>, SymbolVec>> known = {
      {{1, 0, 0, 0}, SymbolVec(2, std::vector<uint8_t>{1})},  // A1 = 1
      {{0, 0, 1, 0}, SymbolVec(2, std::vector<uint8_t>{0})},  // B1 = 0
      {{1, 1, 0, 0}, SymbolVec(2, std::vector<uint8_t>{0})},  // A2+A1 = 0
  };
  auto result = span_solve(known, std::vector<uint8_t>{0, 1, 0, 0}, 2);
  ASSERT_TRUE(std::holds_alternative<SymbolVec>(result));
  EXPECT_EQ(std::get<SymbolVec>(result)[0], 1);  // A2 = (A2+A1) - A1
}

TEST(SpanSolve, NotInSpan) {
  std::vector<std::pair<std::vector<uint8_t>, SymbolVec>> known = {
      {{1, 0}, SymbolVec(2, std::vector<uint8_t>{1})},
  };
  auto result = span_solve(known, std::vector<uint8_t>{0, 1}, 2);
  EXPECT_TRUE(std::holds_alternative<NotInSpan>(result));
}

TEST(SpanSolve, InconsistentEquationsThrow) {
  std::vector<std::pair<std::vector<uint8_t>, SymbolVec>> known = {
      {{1, 0}, SymbolVec(3, std::vector<uint8_t>{1})},
      {{1, 0}, SymbolVec(3, std::vector<uint8_t>{2})},
  };
  EXPECT_THROW(span_solve(known, std::vector<uint8_t>{1, 0}, 3), InconsistentSystem);
}

// Oracle: enumerate every assignment consistent with the knowns; the target
// is determined iff all consistent assignments agree on its value.
std::optional<uint8_t> exhaustive_solve(
    const std::vector<std::pair<std::vector<uint8_t>, uint8_t>>& known,
    const std::vector<uint8_t>& target, size_t dim, uint8_t q) {
  std::optional<uint8_t> value;
  std::vector<uint8_t> x(dim, 0);
  uint64_t count = 1;
  for (size_t i = 0; i < dim; ++i) count *= q;
  for (uint64_t idx = 0; idx < count; ++idx) {
    uint64_t rem = idx;
    for (size_t i = 0; i < dim; ++i) {
      x[i] = uint8_t(rem % q);
      rem /= q;
    }
    bool ok = true;
    for (auto& [coeffs, v] : known) {
      uint32_t acc = 0;
      for (size_t i = 0; i < dim; ++i) acc += uint32_t(coeffs[i]) * x[i];
      if (acc % q != v) { ok = false; break; }
    }
    if (!ok) continue;
    uint32_t t = 0;
    for (size_t i = 0; i < dim; ++i) t += uint32_t(target[i]) * x[i];
    uint8_t tv = uint8_t(t % q);
    if (!value) value = tv;
    else if (*value != tv) return std::nullopt;  // not determined
  }
  return value;
}

TEST(SpanSolve, AgreesWithExhaustiveSearch) {
  std::mt19937 rng(20240811);
  for (uint8_t q : {uint8_t(2), uint8_t(3)}) {
    for (int trial = 0; trial < 40; ++trial) {
      size_t dim = 2 + rng() % 11;  // up to 12 unknowns
      int eqs = 1 + int(rng() % 6);
      std::vector<std::pair<std::vector<uint8_t>, uint8_t>> known;
      // Build equations from a hidden consistent solution so the system is
      // always satisfiable.
      std::vector<uint8_t> secret(dim);
      for (auto& s : secret) s = uint8_t(rng() % q);
      for (int e = 0; e < eqs; ++e) {
        std::vector<uint8_t> coeffs(dim);
        uint32_t v = 0;
        for (size_t i = 0; i < dim; ++i) {
          coeffs[i] = uint8_t(rng() % q);
          v += uint32_t(coeffs[i]) * secret[i];
        }
        known.push_back({coeffs, uint8_t(v % q)});
      }
      std::vector<uint8_t> target(dim);
      for (auto& t : target) t = uint8_t(rng() % q);

      auto expected = exhaustive_solve(known, target, dim, q);

      std::vector<std::pair<std::vector<uint8_t>, SymbolVec>> known_sv;
      for (auto& [c, v] : known)
        known_sv.push_back({c, SymbolVec(q, std::vector<uint8_t>{v})});
      auto got = span_solve(known_sv, target, q);

      if (expected) {
        ASSERT_TRUE(std::holds_alternative<SymbolVec>(got)) << "trial " << trial;
        EXPECT_EQ(std::get<SymbolVec>(got)[0], *expected);
      } else {
        EXPECT_TRUE(std::holds_alternative<NotInSpan>(got)) << "trial " << trial;
      }
    }
  }
}

TEST(LinearSystem, CertificateReproducesTarget) {
  std::mt19937 rng(7);
  const uint8_t q = 3;
  const size_t dim = 6;
  LinearSystem sys(q, dim, 1);
  std::vector<std::vector<uint8_t>> eqs;
  for (int e = 0; e < 5; ++e) {
    std::vector<uint8_t> coeffs(dim);
    for (auto& c : coeffs) c = uint8_t(rng() % q);
    eqs.push_back(coeffs);
    sys.add_equation(coeffs, SymbolVec(q, std::vector<uint8_t>{uint8_t(rng() % q)}));
  }
  std::vector<uint8_t> target(dim, 0);
  // Pick a target inside the span: a random combination of the equations.
  std::vector<uint8_t> lambda_true(eqs.size());
  for (size_t e = 0; e < eqs.size(); ++e) {
    lambda_true[e] = uint8_t(rng() % q);
    for (size_t j = 0; j < dim; ++j)
      target[j] = gf_add(target[j], gf_mul(lambda_true[e], eqs[e][j], q), q);
  }
  auto cert = sys.certificate(target);
  ASSERT_TRUE(cert.has_value());
  std::vector<uint8_t> rebuilt(dim, 0);
  for (size_t e = 0; e < eqs.size(); ++e)
    for (size_t j = 0; j < dim; ++j)
      rebuilt[j] = gf_add(rebuilt[j], gf_mul((*cert)[e], eqs[e][j], q), q);
  EXPECT_EQ(rebuilt, target);
}

TEST(Distribution, EntropyBasics) {
  DistributionTable t({{"x", 4}});
  for (uint64_t v = 0; v < 4; ++v) t.add({v});
  EXPECT_DOUBLE_EQ(t.entropy({0}), 2.0);  // uniform 4-ary

  DistributionTable d({{"x", 4}});
  d.add({2}, 10);
  EXPECT_DOUBLE_EQ(d.entropy({0}), 0.0);  // deterministic
}

TEST(Distribution, MutualInformationCases) {
  // Two independent fair bits.
  DistributionTable ind({{"x", 2}, {"y", 2}});
  for (uint64_t a = 0; a < 2; ++a)
    for (uint64_t b = 0; b < 2; ++b) ind.add({a, b});
  auto mi = ind.mutual_information({0}, {1});
  EXPECT_TRUE(mi.exactly_zero);

  // X = Y uniform 4-ary: I = 2 bits.
  DistributionTable eq({{"x", 4}, {"y", 4}});
  for (uint64_t a = 0; a < 4; ++a) eq.add({a, a});
  auto mi2 = eq.mutual_information({0}, {1});
  EXPECT_FALSE(mi2.exactly_zero);
  EXPECT_NEAR(mi2.bits, 2.0, 1e-12);
}

TEST(Distribution, ChainRuleOnRandomTables) {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    DistributionTable t({{"x", 3}, {"y", 4}, {"z", 2}});
    for (uint64_t x = 0; x < 3; ++x)
      for (uint64_t y = 0; y < 4; ++y)
        for (uint64_t z = 0; z < 2; ++z)
          if (uint64_t c = rng() % 17) t.add({x, y, z}, c);
    double joint = t.entropy({0, 1, 2});
    double chain = t.entropy({0}) + t.conditional_entropy({1, 2}, {0});
    EXPECT_NEAR(joint, chain, 1e-12);
  }
}

TEST(Distribution, MarginalAndMergeAreExact) {
  DistributionTable a({{"x", 2}, {"y", 3}});
  a.add({0, 1}, 3);
  a.add({1, 2}, 5);
  DistributionTable b({{"x", 2}, {"y", 3}});
  b.add({0, 1}, 7);
  a.merge(b);
  EXPECT_EQ(a.total(), 15u);
  auto m = a.marginal({0});
  EXPECT_EQ(m.probability(m.pack({0})), Rational(10, 15));
  EXPECT_EQ(m.probability(m.pack({1})), Rational(5, 15));
  // Mass always sums to exactly one.
  Rational sum = 0;
  for (auto& [key, count] : a.rows()) sum += a.probability(key);
  EXPECT_EQ(sum, Rational(1));
}

// Oracle: a point set's lower envelope vertex must never sit strictly above
// the chord between any two input points. O(n^3) pairwise check.
bool above_some_chord(const TradeoffPoint& v, const std::vector<TradeoffPoint>& pts) {
  for (size_t i = 0; i < pts.size(); ++i) {
    for (size_t j = 0; j < pts.size(); ++j) {
      if (pts[i].memory >= pts[j].memory) continue;
      if (v.memory < pts[i].memory || v.memory > pts[j].memory) continue;
      Rational t = (v.memory - pts[i].memory) / (pts[j].memory - pts[i].memory);
      Rational chord = pts[i].load + t * (pts[j].load - pts[i].load);
      if (v.load > chord) return true;
    }
  }
  return false;
}

TEST(Envelope, CollinearPolicy) {
  std::vector<TradeoffPoint> pts = {{Rational(0), Rational(2)},
                                    {Rational(1), Rational(1)},
                                    {Rational(2), Rational(0)}};
  auto env = lower_convex_envelope(pts);
  ASSERT_EQ(env.size(), 2u);  // interior collinear point dropped
  EXPECT_EQ(env.front().memory, Rational(0));
  EXPECT_EQ(env.back().memory, Rational(2));
}

TEST(Envelope, PointAboveChordDropped) {
  std::vector<TradeoffPoint> pts = {{Rational(0), Rational(2)},
                                    {Rational(1), Rational(8, 5)},
                                    {Rational(2), Rational(0)}};
  auto env = lower_convex_envelope(pts);
  ASSERT_EQ(env.size(), 2u);
  EXPECT_EQ(env[0].load, Rational(2));
  EXPECT_EQ(env[1].load, Rational(0));
}

TEST(Envelope, VerticesPassChordOracle) {
  // The N=2, K=2 virtual-users points for t in [0:4], plus the (0, N) anchor.
  std::vector<TradeoffPoint> pts;
  int N = 2, K = 2;
  for (int t = 0; t <= N * K; ++t) {
    Rational m(t, K);
    Rational r(binom(uint64_t(N * K), t + 1) - binom(uint64_t(N * K - N), t + 1),
               binom(uint64_t(N * K), t));
    pts.push_back({m, r, binom(uint64_t(N * K), t)});
  }
  pts.push_back({Rational(0), Rational(N)});
  auto env = lower_convex_envelope(pts);
  ASSERT_FALSE(env.empty());
  for (auto& v : env) EXPECT_FALSE(above_some_chord(v, pts));
  // Random point clouds, same property.
  std::mt19937 rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<TradeoffPoint> cloud;
    for (int i = 0; i < 12; ++i)
      cloud.push_back({Rational(int(rng() % 40), 7), Rational(int(rng() % 40), 5)});
    auto hull = lower_convex_envelope(cloud);
    for (auto& v : hull) EXPECT_FALSE(above_some_chord(v, cloud));
  }
}

TEST(Envelope, EvaluateInterpolates) {
  std::vector<TradeoffPoint> env = {{Rational(0), Rational(2)}, {Rational(2), Rational(0)}};
  EXPECT_EQ(envelope_value_at(env, Rational(1)), Rational(1));
  EXPECT_EQ(envelope_value_at(env, Rational(1, 2)), Rational(3, 2));
  EXPECT_EQ(envelope_value_at(env, Rational(3)), Rational(0));
  EXPECT_THROW(envelope_value_at(env, Rational(-1)), std::invalid_argument);
  EXPECT_THROW(lower_convex_envelope({}), std::invalid_argument);
}

TEST(Rational, StringRoundTrip) {
  EXPECT_EQ(rat_to_string(Rational(5, 4)), "5/4");
  EXPECT_EQ(rat_to_string(Rational(6, 4)), "3/2");  // canonical form
  EXPECT_EQ(rat_from_string("11/8"), Rational(11, 8));
  EXPECT_EQ(rat_from_string("3"), Rational(3));
  EXPECT_THROW(rat_from_string("1/0"), std::invalid_argument);
}

}  // namespace
}  // namespace ccpir
