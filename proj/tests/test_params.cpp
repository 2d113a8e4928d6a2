#include <cmath>

#include <gtest/gtest.h>

#include "gazeode/params.hpp"
#include "test_util.hpp"

using namespace gazeode;

namespace {

// 36 records, first record bad, bad records isolated: 6 bad and 5 good -> bad changes.
std::vector<LearnRecord> reference_counts() {
  const double ending[] = {14.7407, 1.3207, 1.3207, 0.367, 0.1745, 1.0003};
  const int bad_at[] = {0, 4, 11, 17, 25, 33};
  std::vector<LearnRecord> r(36);
  for (int i = 0; i < 36; ++i) r[i] = {1, 0.5 + 0.01 * i, 10.0 + i, 1.0 + 0.1 * i, 0};
  for (int b = 0; b < 6; ++b) {
    r[bad_at[b]].goodness = 1;
    r[bad_at[b]].gaze_duration = ending[b];
  }
  return r;
}

}  // namespace

TEST(Estimate, ReferenceCounts) {
  const auto r = reference_counts();
  EXPECT_NEAR(total_fixation_period(r), 18.9239, 1e-12);
  EXPECT_NEAR(estimate_mu(r), 0.31706, 5e-4);
  EXPECT_NEAR(estimate_mu(r), 6.0 / 18.9239, 1e-12);
  EXPECT_NEAR(estimate_lambda(r), 36.0 / 18.9239, 1e-12);
  EXPECT_NEAR(estimate_m(r), 5.0 / 36.0, 1e-15);
  EXPECT_EQ(estimate_k(r), 2.0);
  const auto p = estimate_params(r);
  EXPECT_EQ(p.k, 2.0);
  EXPECT_NO_THROW(validate(p));
}

TEST(Estimate, KWithReferences) {
  const auto r = reference_counts();  // min distance 10, max speed 4.5
  EXPECT_DOUBLE_EQ(estimate_k(r, 5.0, 9.0), 0.5 + 2.0);
  EXPECT_DOUBLE_EQ(estimate_k(r, std::nullopt, 9.0), 1.0 + 2.0);
  auto degenerate = r;
  for (auto& x : degenerate) x.speed = 0.0;
  EXPECT_ERROR_KIND(estimate_k(degenerate), DegenerateData);
}

TEST(Estimate, TransitionsOnlyCountGoodToBad) {
  std::vector<LearnRecord> r(4, {1, 1.0, 5.0, 1.0, 0});
  r[1].goodness = 1;
  r[2].goodness = 1;  // 1 -> 1 is not a transition
  EXPECT_DOUBLE_EQ(estimate_m(r), 0.25);
  r[0].goodness = 1;  // the first record has no predecessor
  EXPECT_DOUBLE_EQ(estimate_m(r), 0.0);
}

TEST(Estimate, Errors) {
  std::vector<LearnRecord> good(3, {1, 1.0, 5.0, 1.0, 0});
  EXPECT_ERROR_KIND(estimate_mu(good), NoEndingFixations);
  EXPECT_ERROR_KIND(estimate_lambda(good), ZeroPeriod);
  EXPECT_ERROR_KIND(estimate_m(std::vector<LearnRecord>{}), EmptyInput);
  EXPECT_ERROR_KIND(estimate_k(std::vector<LearnRecord>{}), EmptyInput);
  EXPECT_ERROR_KIND(estimate_params(std::vector<LearnRecord>{}), EmptyInput);
}

TEST(Params, Validation) {
  EXPECT_NO_THROW(validate({1.0, 0.5, 0.2, 1.0}));
  EXPECT_ERROR_KIND(validate({-1.0, 0.5, 0.2, 1.0}), InvalidValue);
  EXPECT_ERROR_KIND(validate({1.0, -0.5, 0.2, 1.0}), InvalidValue);
  EXPECT_ERROR_KIND(validate({1.0, 0.5, 1.2, 1.0}), InvalidValue);
  EXPECT_ERROR_KIND(validate({1.0, 0.5, 0.2, 0.0}), InvalidValue);
  EXPECT_ERROR_KIND(validate({std::nan(""), 0.5, 0.2, 1.0}), InvalidValue);
}

TEST(Params, CsvRoundTrip) {
  testutil::TempDir dir;
  const OdeParams p{36.0 / 18.9239, 6.0 / 18.9239, 5.0 / 36.0, 2.0};
  const auto path = dir.write("params.csv", params_to_csv(p));
  EXPECT_EQ(testutil::slurp(path), "lambda,mu,m,k\n1.90235628,0.31705938,0.138888889,2\n");
  const auto back = load_params(path);
  EXPECT_NEAR(back.lambda, p.lambda, 1e-8);
  EXPECT_NEAR(back.mu, p.mu, 1e-8);
  EXPECT_ERROR_KIND(load_params(dir.write("bad.csv", "lambda,mu,m,k\n1,1,2,1\n")), InvalidValue);
  EXPECT_ERROR_KIND(load_params(dir.write("two.csv", "lambda,mu,m,k\n1,1,0,1\n1,1,0,1\n")), MalformedRow);
}
