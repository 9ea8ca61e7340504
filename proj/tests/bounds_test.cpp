#include <gtest/gtest.h>

#include <sstream>

#include "ccpir/bounds.hpp"
#include "ccpir/caching.hpp"

namespace ccpir::bounds {
namespace {

TEST(Capacity, ClosedForm) {
  EXPECT_EQ(pir_capacity(2, 2), Rational(3, 2));
  EXPECT_EQ(pir_capacity(1, 5), Rational(1));
  EXPECT_EQ(pir_capacity(3, 2), Rational(7, 4));
  EXPECT_EQ(pir_capacity(4, 2), Rational(15, 8));
  EXPECT_THROW(pir_capacity(0, 2), std::invalid_argument);

  // Strictly below 2 for every N: the lever behind composing the optimal
  // scheme instead of a privacy key.
  for (int n = 1; n <= 64; ++n) EXPECT_LT(pir_capacity(n, 2), Rational(2));
}

TEST(RecoverySets, BuiltInStructure) {
  auto tsc2 = recovery_sets(*pir::parse_scheme("tsc2"));
  EXPECT_EQ(tsc2.n1, 2);
  EXPECT_EQ(tsc2.n2, 2);
  EXPECT_TRUE(tsc2.uniform);
  EXPECT_EQ(tsc2.cond1, 1);
  EXPECT_EQ(tsc2.cond2, 1);
  EXPECT_TRUE(tsc2.ratio_bound_holds);
  // The (W1+W2, *) pairs pin down both messages, so the span scan sees more
  // recoverable pairs than the emitted sets alone.
  EXPECT_EQ(tsc2.pairs_by_file[0].size(), 2u);
  EXPECT_EQ(tsc2.span_recoverable_pairs[0], 3);

  auto xor3 = recovery_sets(*pir::parse_scheme("xor3"));
  EXPECT_EQ(xor3.n1, 3);
  EXPECT_EQ(xor3.n2, 3);
  EXPECT_EQ(xor3.cond1, 1);
  EXPECT_EQ(xor3.cond2, 1);
  EXPECT_TRUE(xor3.uniform);
  EXPECT_TRUE(xor3.ratio_bound_holds);

  auto s4 = recovery_sets(*pir::parse_scheme("signed4"));
  EXPECT_EQ(s4.n1, 4);
  EXPECT_EQ(s4.n2, 4);
  EXPECT_EQ(s4.cond1, 1);
  EXPECT_EQ(s4.cond2, 1);
  EXPECT_TRUE(s4.uniform);
  // Every pair recovers exactly one file here.
  for (int tau = 0; tau < 4; ++tau) EXPECT_EQ(s4.span_recoverable_pairs[size_t(tau)], 4);

  for (int t = 1; t <= 3; ++t) {
    auto cc = recovery_sets(*pir::parse_scheme("cc2pir:man:4:" + std::to_string(t)));
    EXPECT_TRUE(cc.uniform) << t;
    EXPECT_EQ(cc.n1, 4);
    EXPECT_EQ(cc.cond1, 1);
    EXPECT_TRUE(cc.ratio_bound_holds);
  }
}

TEST(LowerBound, TightForN2AndN4) {
  auto tsc2 = lower_bound(*pir::parse_scheme("tsc2"));
  ASSERT_TRUE(tsc2.feasible);
  EXPECT_EQ(tsc2.alpha1, 2);
  EXPECT_EQ(tsc2.alpha2, 1);
  EXPECT_EQ(tsc2.lhs_min, Rational(2));
  EXPECT_TRUE(tsc2.holds);
  EXPECT_TRUE(tsc2.tight);

  auto s4 = lower_bound(*pir::parse_scheme("signed4"));
  ASSERT_TRUE(s4.feasible);
  EXPECT_EQ(s4.alpha1, 2);
  EXPECT_EQ(s4.alpha2, 2);
  EXPECT_EQ(s4.lhs_min, Rational(4));
  EXPECT_TRUE(s4.tight);

  // N=3 satisfies the bound strictly.
  auto x3 = lower_bound(*pir::parse_scheme("xor3"));
  EXPECT_EQ(x3.lhs_min, Rational(4));
  EXPECT_TRUE(x3.holds);
  EXPECT_FALSE(x3.tight);
}

TEST(LowerBound, HoldsForCcToPir) {
  for (int n = 2; n <= 4; ++n)
    for (int t = 1; t < n; ++t) {
      auto lb = lower_bound(*pir::parse_scheme("cc2pir:man:" + std::to_string(n) + ":" +
                                               std::to_string(t)));
      ASSERT_TRUE(lb.feasible) << n << " " << t;
      EXPECT_TRUE(lb.holds) << n << " " << t;
    }
}

TEST(SqrtBound, OrderOptimalityInstances) {
  // N / (sqrt(N) + 1) <= t + (N-t)/(t+1) at t = ceil(sqrt(N)).
  for (int n : {4, 9, 16}) {
    int t = 0;
    while (t * t < n) ++t;  // ceil(sqrt) of a perfect square
    Rational bound = sqrt_total_bound(n, n);
    Rational total = Rational(t) + Rational(n - t, t + 1);
    EXPECT_LE(bound, total) << n;
  }
  EXPECT_EQ(sqrt_total_bound(9, 9), Rational(9, 4));
  EXPECT_THROW(sqrt_total_bound(5, 5), std::invalid_argument);
}

TEST(CompareCurves, SmallGridContainsVuPoint) {
  auto rows = compare_curves(2, 2);
  bool found = false;
  for (auto& r : rows)
    if (r.memory == Rational(1, 2) && r.vu_load == Rational(5, 4)) found = true;
  EXPECT_TRUE(found);
  // Full cache: both curves at zero.
  EXPECT_EQ(rows.back().memory, Rational(2));
  EXPECT_EQ(rows.back().vu_load, Rational(0));
  EXPECT_EQ(rows.back().cor1_load, Rational(0));
  // Zero cache: both anchored at (0, N).
  EXPECT_EQ(rows.front().vu_load, Rational(2));
  EXPECT_EQ(rows.front().cor1_load, Rational(2));
}

TEST(CompareCurves, FigureScaleGrid) {
  auto rows = compare_curves(20, 5);
  ASSERT_FALSE(rows.empty());
  bool seen_m5 = false;
  for (auto& r : rows) {
    if (r.memory == Rational(5)) {
      seen_m5 = true;
      EXPECT_LT(r.cor1_load, r.vu_load);  // strict rational comparison
    }
  }
  EXPECT_TRUE(seen_m5);
}

TEST(CsvEmitters, StableLayout) {
  std::ostringstream os;
  write_tradeoff_csv(os, {{Rational(1, 2), Rational(5, 4), 4}}, "thm2");
  EXPECT_EQ(os.str(), "M_num,M_den,R_num,R_den,scheme,subpacketization\n1,2,5,4,thm2,4\n");

  std::ostringstream cs;
  write_compare_csv(cs, {{Rational(5), Rational(1, 3), Rational(1, 4)}});
  EXPECT_EQ(cs.str(),
            "M_num,M_den,R_vu_num,R_vu_den,R_cor1_num,R_cor1_den\n5,1,1,3,1,4\n");
}

}  // namespace
}  // namespace ccpir::bounds
