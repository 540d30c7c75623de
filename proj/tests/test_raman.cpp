#include <cmath>

#include <doctest.h>

#include "qan/config.hpp"
#include "qan/raman.hpp"
#include "qan/units.hpp"

using namespace qan;
using namespace qan::raman;

namespace {
RamanParams oracle_params() {
  // coefficients exactly as written in the oracle evaluation
  RamanParams p;
  p.beta_feeder = p.beta_drop = 1e-6;
  p.alpha_c = 0.07138;
  p.alpha_q = 0.08059;
  return p;
}
}  // namespace

TEST_CASE("scatter formulas match the high-precision oracle") {
  const RamanParams p = oracle_params();
  // frozen from an independent arbitrary-precision evaluation
  CHECK(srs_feeder(1.0, 5.0, 1.0, 16.0, p) ==
        doctest::Approx(1.97191990664586e-7).epsilon(1e-12));
  CHECK(srs_drop(1.0, 5.0, 1.0, 16.0, p) ==
        doctest::Approx(4.05398358155015e-8).epsilon(1e-12));
}

TEST_CASE("scatter trivial cases") {
  const RamanParams p = oracle_params();
  CHECK(srs_feeder(0.0, 5.0, 1.0, 16.0, p) == 0.0);
  CHECK(srs_feeder(1.0, 0.0, 1.0, 16.0, p) == 0.0);
  CHECK(srs_drop(1.0, 5.0, 0.0, 16.0, p) == 0.0);

  // explicit 1/N factor
  CHECK(srs_drop(1.0, 5.0, 1.0, 32.0, p) ==
        doctest::Approx(0.5 * srs_drop(1.0, 5.0, 1.0, 16.0, p)).epsilon(1e-12));
}

TEST_CASE("drop scatter follows the feeder transmittance law") {
  RamanParams p;
  p.beta_feeder = p.beta_drop = 1e-8;
  p.alpha_c = att_to_natural(0.31);
  p.alpha_q = att_to_natural(0.35);
  const double ratio = srs_drop(1.0, 20.0, 1.0, 16.0, p) / srs_drop(1.0, 5.0, 1.0, 16.0, p);
  CHECK(ratio == doctest::Approx(std::exp(-p.alpha_c * 15.0)).epsilon(1e-12));
  CHECK(ratio == doctest::Approx(0.342767786546).epsilon(1e-9));
}

TEST_CASE("linearity in pump power and coefficient") {
  RamanParams p;
  p.beta_feeder = 3e-9;
  p.beta_drop = 7e-9;
  p.alpha_c = att_to_natural(0.31);
  p.alpha_q = att_to_natural(0.35);
  for (double pump : {0.5, 2.0, 8.0}) {
    CHECK(srs_feeder(pump, 7.0, 1.0, 8.0, p) ==
          doctest::Approx(pump * srs_feeder(1.0, 7.0, 1.0, 8.0, p)).epsilon(1e-12));
    CHECK(srs_drop(pump, 7.0, 1.0, 8.0, p) ==
          doctest::Approx(pump * srs_drop(1.0, 7.0, 1.0, 8.0, p)).epsilon(1e-12));
  }
  RamanParams doubled = p;
  doubled.beta_feeder *= 2.0;
  doubled.beta_drop *= 2.0;
  CHECK(srs_feeder(1.0, 7.0, 1.0, 8.0, doubled) ==
        doctest::Approx(2.0 * srs_feeder(1.0, 7.0, 1.0, 8.0, p)).epsilon(1e-12));
  CHECK(srs_drop(1.0, 7.0, 1.0, 8.0, doubled) ==
        doctest::Approx(2.0 * srs_drop(1.0, 7.0, 1.0, 8.0, p)).epsilon(1e-12));
}

TEST_CASE("feeder scatter grows and saturates; drop scatter decays") {
  RamanParams p;
  p.beta_feeder = p.beta_drop = 1e-8;
  p.alpha_c = att_to_natural(0.31);
  p.alpha_q = att_to_natural(0.35);
  double prev_f = -1.0;
  double prev_d = 1e9;
  const double bound = 1.0 * p.beta_feeder / (16.0 * (p.alpha_q - p.alpha_c));
  for (double lf = 0.5; lf <= 12.0; lf += 0.5) {
    const double f = srs_feeder(1.0, lf, 1.0, 16.0, p);
    const double d = srs_drop(1.0, lf, 1.0, 16.0, p);
    CHECK(f > prev_f);   // increasing over the access-network range
    CHECK(f < bound);    // saturating: bounded by the zero-loss limit
    CHECK(d < prev_d);   // decreasing with feeder attenuation
    prev_f = f;
    prev_d = d;
  }
}

TEST_CASE("removable singularity at alpha_q == alpha_c") {
  // the limit form L*exp(-aL) agrees with the general formula at a coefficient
  // gap of 1e-6 to better than 1e-6 relative
  RamanParams general;
  general.beta_feeder = general.beta_drop = 1e-8;
  general.alpha_c = 0.08;
  general.alpha_q = 0.08 + 1e-6;
  const double mid = 0.5 * (general.alpha_c + general.alpha_q);
  for (double len : {1.0, 5.0, 20.0}) {
    const double exact = srs_feeder(1.0, len, 1.0, 16.0, general);
    const double limit_form = 1.0 * general.beta_feeder * len * std::exp(-mid * len) / 16.0 *
                              std::exp(-general.alpha_q * 1.0);
    CHECK(std::fabs(limit_form - exact) <= 1e-6 * exact);
  }

  // the guarded branch joins the general branch continuously across 1e-9
  RamanParams inside = general;
  inside.alpha_q = 0.08 + 0.5e-9;
  RamanParams outside = general;
  outside.alpha_q = 0.08 + 2e-9;
  for (double len : {1.0, 5.0, 20.0}) {
    const double a = srs_feeder(1.0, len, 1.0, 16.0, inside);
    const double b = srs_feeder(1.0, len, 1.0, 16.0, outside);
    CHECK(std::fabs(a - b) <= 1e-6 * b);
  }

  RamanParams equal = general;
  equal.alpha_q = equal.alpha_c;
  CHECK_THROWS(equal.validate());  // exact equality rejected, near-equality guarded
}

TEST_CASE("photon flux conversion") {
  // 1 pW at 1550 nm: frozen independent evaluation 7.80288e6 counts/s
  CHECK(power_to_count_rate(1e-9, 1550.0, 1.0, 1.0) ==
        doctest::Approx(7802880.67969).epsilon(1e-9));
  CHECK(power_to_count_rate(1e-9, 1550.0, 1.0, 1.0) ==
        doctest::Approx(7.80e6).epsilon(1e-3));
  CHECK(power_to_count_rate(0.0, 1550.0, 1.0, 1.0) == 0.0);
  CHECK(power_to_count_rate(1e-9, 1550.0, 0.5, 1.0) ==
        doctest::Approx(0.5 * power_to_count_rate(1e-9, 1550.0, 1.0, 1.0)).epsilon(1e-12));
}

TEST_CASE("scheme budgets") {
  const auto catalog = odn::default_catalog();
  const auto params = cfg::default_raman_params(catalog);
  keyrate::DetectorParams det;

  SUBCASE("calibrated model reproduces the reference rows") {
    const auto full5 = total_srs(odn::make_full_scheme(catalog, 16, 5.0, 1.0), params, det);
    CHECK(full5.count_rate_cps == doctest::Approx(16300.0).epsilon(1e-6));
    const auto part5 = total_srs(odn::make_dual_feeder_scheme(catalog, 16, 5.0, 1.0), params, det);
    CHECK(part5.count_rate_cps == doctest::Approx(2900.0).epsilon(1e-6));
    CHECK(part5.s_f_mw == 0.0);  // feeder scatter stripped before combining
    CHECK(full5.per_gate_probability ==
          doctest::Approx(full5.count_rate_cps / det.gate_rate_hz).epsilon(1e-12));
  }
  SUBCASE("no pump, no budget") {
    const auto s = odn::make_dual_feeder_scheme(catalog, 16, 5.0, 1.0, 1e6);
    const auto budget = total_srs(s, params, det);
    CHECK(budget.count_rate_cps < 1e-12);
    CHECK(budget.s_d_mw < 1e-30);
  }
  SUBCASE("partial scheme stays below full coexistence") {
    for (double lf : {1.0, 5.0, 20.0}) {
      const auto full = total_srs(odn::make_full_scheme(catalog, 16, lf, 1.0), params, det);
      const auto dual =
          total_srs(odn::make_dual_feeder_scheme(catalog, 16, lf, 1.0), params, det);
      CHECK(dual.count_rate_cps < full.count_rate_cps);
    }
  }
}

TEST_CASE("calibration") {
  const auto catalog = odn::default_catalog();
  keyrate::DetectorParams det;
  RamanParams base = cfg::default_raman_params(catalog);

  SUBCASE("single measurement solves exactly") {
    std::vector<RamanMeasurement> ms{{odn::make_full_scheme(catalog, 16, 5.0, 1.0), 12345.0}};
    const auto result = calibrate(ms, base, det);
    CHECK(result.max_abs_residual_rel < 1e-12);
    CHECK(result.params.beta_feeder == result.params.beta_drop);
  }

  SUBCASE("two-row fit predicts the 20 km rows") {
    std::vector<RamanMeasurement> ms{
        {odn::make_full_scheme(catalog, 16, 5.0, 1.0), 16300.0},
        {odn::make_dual_feeder_scheme(catalog, 16, 5.0, 1.0), 2900.0}};
    const auto result = calibrate(ms, base, det);
    CHECK(result.max_abs_residual_rel < 1e-9);  // consistent system, exact fit

    const auto full20 =
        total_srs(odn::make_full_scheme(catalog, 16, 20.0, 1.0), result.params, det);
    const auto part20 =
        total_srs(odn::make_dual_feeder_scheme(catalog, 16, 20.0, 1.0), result.params, det);
    // frozen independent two-parameter solve: 17.458 and 0.9940 kcps
    CHECK(full20.count_rate_cps == doctest::Approx(17458.14479).epsilon(1e-6));
    CHECK(part20.count_rate_cps == doctest::Approx(994.026581).epsilon(1e-6));
  }

  SUBCASE("synthetic round trip recovers the coefficients") {
    RamanParams truth = base;
    truth.beta_feeder = 4.2e-11;
    truth.beta_drop = 9.1e-11;
    std::vector<RamanMeasurement> ms;
    for (double lf : {2.0, 5.0, 12.0})
      ms.push_back({odn::make_full_scheme(catalog, 16, lf, 1.0),
                    total_srs(odn::make_full_scheme(catalog, 16, lf, 1.0), truth, det)
                        .count_rate_cps});
    ms.push_back({odn::make_dual_feeder_scheme(catalog, 16, 5.0, 1.0),
                  total_srs(odn::make_dual_feeder_scheme(catalog, 16, 5.0, 1.0), truth, det)
                      .count_rate_cps});
    const auto result = calibrate(ms, base, det);
    CHECK(result.params.beta_feeder == doctest::Approx(truth.beta_feeder).epsilon(1e-9));
    CHECK(result.params.beta_drop == doctest::Approx(truth.beta_drop).epsilon(1e-9));
  }

  SUBCASE("degenerate data rejected") {
    std::vector<RamanMeasurement> ms{{odn::make_full_scheme(catalog, 16, 5.0, 1.0), 0.0}};
    CHECK_THROWS(calibrate(ms, base, det));
    CHECK_THROWS(calibrate({}, base, det));
  }
}
