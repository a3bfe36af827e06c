#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "csbp/errors.hpp"
#include "csbp/riccati.hpp"
#include "doctest.h"

using namespace csbp;
using namespace csbp::riccati;

TEST_CASE("classification") {
  CHECK(classify({0, 0, 2}).kind == Case::linear_constant);
  CHECK(classify({0, 1.5, 2}).kind == Case::linear_exponential);
  CHECK(classify({1, 0, 0}).kind == Case::trivial);
  CHECK(classify({1, 2, 0}).kind == Case::trivial);
  CHECK(classify({1, 0, 1}).kind == Case::tangent_pure);
  CHECK(classify({1, 2, 1}).kind == Case::double_root);
  CHECK(classify({1, 2, 2}).kind == Case::complex_roots);
  const auto rr = classify({1, 3, 2});
  CHECK(rr.kind == Case::real_roots);
  CHECK(rr.delta == 1.0);
  CHECK(rr.r1 == doctest::Approx(-1.0));
  CHECK(rr.r2 == doctest::Approx(-2.0));
  CHECK_THROWS_AS(classify({-1, 0, 1}), InvalidCoefficient);
  CHECK_THROWS_AS(classify({1, -0.1, 1}), InvalidCoefficient);
  CHECK_THROWS_AS(classify({1, 0, std::nan("")}), InvalidCoefficient);
}

TEST_CASE("closed-form values") {
  CHECK(evaluate({0, 0, 2}, 3.0) == 6.0);
  CHECK(evaluate({1, 0, 1}, std::numbers::pi / 4) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(evaluate({1, 2, 1}, 0.5) == doctest::Approx(1.0).epsilon(1e-14));
  for (double t : {0.1, 0.3, 0.6}) {
    CHECK(evaluate({1, 3, 2}, t) == doctest::Approx(std::expm1(t) / (1.0 - 0.5 * std::exp(t))).epsilon(1e-13));
  }
  CHECK(evaluate({0, 2, 3}, 0.7) == doctest::Approx(1.5 * std::expm1(1.4)).epsilon(1e-14));
  CHECK(evaluate({1, 2, 0}, 5.0) == 0.0);
  for (const Coefficients k : {Coefficients{0, 0, 2}, Coefficients{1, 3, 2}, Coefficients{1, 2, 2}}) {
    CHECK(evaluate(k, 0.0) == 0.0);
  }
}

TEST_CASE("blow-up times") {
  CHECK(blow_up_time({1, 0, 1}).value_or_infinity() == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
  CHECK(blow_up_time({1, 3, 2}).value_or_infinity() == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(blow_up_time({1, 2, 1}).value_or_infinity() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(blow_up_time({1, 2, 2}).value_or_infinity() == doctest::Approx(std::numbers::pi / 4).epsilon(1e-15));
  CHECK_FALSE(blow_up_time({0, 0, 1}).is_finite());
  CHECK_FALSE(blow_up_time({0, 3, 1}).is_finite());
  CHECK_FALSE(blow_up_time({2, 3, 0}).is_finite());
  CHECK(std::isinf(blow_up_time({0, 3, 1}).value_or_infinity()));
}

TEST_CASE("evaluation refuses t >= t*") {
  try {
    evaluate({1, 0, 1}, 2.0);
    FAIL("expected BlowUpDomain");
  } catch (const BlowUpDomain& e) {
    CHECK(e.t_star() == doctest::Approx(std::numbers::pi / 2));
  }
  CHECK_THROWS_AS(evaluate({1, 2, 1}, 1.0), BlowUpDomain);
  CHECK_THROWS_AS(evaluate({1, 2, 1}, -0.1), InvalidArgument);
}

TEST_CASE("numeric oracle") {
  CHECK(numeric_oracle({0, 1, 1}, 1.0) == doctest::Approx(std::numbers::e - 1.0).epsilon(1e-9));
  CHECK(numeric_oracle({1, 0, 1}, 1.0) == doctest::Approx(std::tan(1.0)).epsilon(1e-8));
  CHECK(numeric_oracle({0, 0, 0}, 4.0) == 0.0);
  CHECK_THROWS_AS(numeric_oracle({1, 0, 1}, 1.53), OracleRange);
}

TEST_CASE("closed forms agree with the oracle across cases") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = u(rng), b = u(rng), c = u(rng);
    for (const Coefficients k : {Coefficients{a, b, c}, Coefficients{a, 0, c}, Coefficients{0, b, c},
                                 Coefficients{a, b, b * b / (4 * a)}}) {
      const double ts = blow_up_time(k).is_finite() ? blow_up_time(k).value_or_infinity() : 2.0;
      for (double f : {0.1, 0.5, 0.9}) {
        const double t = f * ts;
        CHECK(evaluate(k, t) == doctest::Approx(numeric_oracle(k, t)).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("ODE residual and monotonicity") {
  for (const Coefficients k : {Coefficients{1, 3, 2}, Coefficients{0.5, 1, 3}, Coefficients{2, 0, 1},
                               Coefficients{1, 2, 1}, Coefficients{0, 1, 1}}) {
    const double ts = blow_up_time(k).is_finite() ? blow_up_time(k).value_or_infinity() : 2.0;
    double prev = 0.0;
    for (int i = 1; i < 20; ++i) {
      const double t = 0.9 * ts * i / 20.0, h = 1e-6 * ts;
      const double y = evaluate(k, t);
      const double dy = (evaluate(k, t + h) - evaluate(k, t - h)) / (2 * h);
      CHECK(dy == doctest::Approx(k.a * y * y + k.b * y + k.c).epsilon(1e-6));
      CHECK(y > prev);
      prev = y;
    }
  }
}

TEST_CASE("continuity across the double-root threshold") {
  for (double eps : {-1e-11, 1e-11}) {
    const Coefficients k{1.0, 2.0, 1.0 + eps};
    for (double t : {0.1, 0.5, 0.8}) {
      CHECK(std::abs(evaluate(k, t) - evaluate({1.0, 2.0, 1.0}, t)) <= 1e-5);
    }
  }
  // Just outside the threshold the real/complex branches take over.
  CHECK(classify({1.0, 2.0, 1.0 - 1e-9}).kind == Case::real_roots);
  CHECK(classify({1.0, 2.0, 1.0 + 1e-9}).kind == Case::complex_roots);
  CHECK(std::abs(evaluate({1.0, 2.0, 1.0 - 1e-9}, 0.5) - 1.0) <= 1e-5);
  CHECK(std::abs(evaluate({1.0, 2.0, 1.0 + 1e-9}, 0.5) - 1.0) <= 1e-5);
}

TEST_CASE("envelope comparison") {
  const Coefficients k{1, 3, 2};
  std::vector<double> t{0.1, 0.2, 0.3}, zero{0, 0, 0};
  const auto ok = envelope_check(t, zero, k);
  CHECK(ok.pass);
  for (double m : ok.margins) CHECK(m >= 0.0);

  std::vector<double> z{0.0, evaluate(k, 0.2) * 1.01, 0.0};
  const auto bad = envelope_check(t, z, k);
  CHECK_FALSE(bad.pass);
  REQUIRE(bad.first_violation.has_value());
  CHECK(*bad.first_violation == 1);

  std::vector<double> late{0.1, 0.8};
  std::vector<double> zz{0.0, 0.0};
  try {
    envelope_check(late, zz, k);
    FAIL("expected EnvelopeNotApplicable");
  } catch (const EnvelopeNotApplicable& e) {
    CHECK(e.index() == 1);
  }
}
