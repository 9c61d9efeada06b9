#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "noclick/detection.hpp"
#include "noclick/errors.hpp"
#include "noclick/fock_oracle.hpp"
#include "noclick/states.hpp"
#include "noclick/transforms.hpp"

using namespace noclick;

TEST_CASE("no-click probability reproduces closed forms") {
  CHECK(no_click_probability(vacuum(1), 0.4, 0.8) == doctest::Approx(1.0).epsilon(1e-14));

  // Thermal light: P = 1 / (1 + eta*T*nbar).
  for (double nbar : {0.5, 1.0, 2.0}) {
    for (double t : {0.3, 0.7, 1.0}) {
      for (double eta : {0.6, 1.0}) {
        CHECK(no_click_probability(thermal(nbar), t, eta) ==
              doctest::Approx(1.0 / (1.0 + eta * t * nbar)).epsilon(1e-13));
      }
    }
  }

  // Coherent light: Poissonian vacuum weight exp(-eta*T*|alpha|^2).
  CHECK(no_click_probability(coherent({1.2, -0.5}), 0.7, 0.9) ==
        doctest::Approx(std::exp(-0.7 * 0.9 * (1.2 * 1.2 + 0.5 * 0.5))).epsilon(1e-13));

  // Squeezed vacuum at unit transmittance: P = 1 / cosh(r).
  for (double r : {0.2, 0.5, 1.0}) {
    CHECK(no_click_probability(squeezed_vacuum(r), 1.0, 1.0) ==
          doctest::Approx(1.0 / std::cosh(r)).epsilon(1e-13));
  }
}

TEST_CASE("detector efficiency only enters through eta * T") {
  for (const GaussianState& state :
       {thermal(1.3), squeezed_vacuum(0.8), coherent({0.4, 1.1})}) {
    for (double t : {0.25, 0.6, 1.0}) {
      CHECK(no_click_probability(state, t, 0.6) ==
            doctest::Approx(no_click_probability(state, 0.6 * t, 1.0)).epsilon(1e-15));
    }
  }
  GaussianState tmsv = two_mode_squeezed_vacuum(0.4);
  CHECK(multimode_no_click_probability(tmsv, 0.8, 0.5) ==
        doctest::Approx(multimode_no_click_probability(tmsv, 0.4, 1.0)).epsilon(1e-15));
}

TEST_CASE("detection input validation") {
  CHECK_THROWS_AS(no_click_probability(vacuum(1), 1.2, 1.0), InvalidParameter);
  CHECK_THROWS_AS(no_click_probability(vacuum(1), 0.5, -0.1), InvalidParameter);
  CHECK_THROWS_AS(no_click_probability(two_mode_squeezed_vacuum(0.1), 0.5, 1.0),
                  DimensionMismatch);
  // The multimode formula only holds for zero displacement.
  GaussianState displaced = tensor_product(coherent({0.5, 0.0}), vacuum(1));
  CHECK_THROWS_AS(multimode_no_click_probability(displaced, 0.5, 1.0), NonzeroDisplacement);
}

TEST_CASE("joint no-click factorizes over product states") {
  GaussianState prod = tensor_product(thermal(0.7), squeezed_vacuum(0.4));
  for (double t : {0.3, 0.8, 1.0}) {
    double joint = multimode_no_click_probability(prod, t, 1.0);
    double split = no_click_probability(thermal(0.7), t, 1.0) *
                   no_click_probability(squeezed_vacuum(0.4), t, 1.0);
    CHECK(joint == doctest::Approx(split).epsilon(1e-12));
  }
}

TEST_CASE("setting probability dispatches on mode count") {
  DetectorSetting setting;
  setting.transmittance = 0.6;
  setting.efficiency = 0.9;
  CHECK(setting_probability(thermal(1.0), setting) ==
        doctest::Approx(no_click_probability(thermal(1.0), 0.6, 0.9)).epsilon(1e-15));
  CHECK(setting_probability(two_mode_squeezed_vacuum(0.3), setting) ==
        doctest::Approx(multimode_no_click_probability(two_mode_squeezed_vacuum(0.3), 0.6, 0.9))
            .epsilon(1e-15));
}

TEST_CASE("quadrature oracle agrees with the closed form") {
  // The oracle integrates the phase-space function directly and shares no
  // algebra with no_click_probability, so agreement is a real cross-check.
  for (const GaussianState& state : {vacuum(1), thermal(1.0), squeezed_vacuum(0.5)}) {
    for (double t : {0.3, 1.0}) {
      GaussianState effective = apply_loss(state, 0, t);
      CHECK(std::fabs(fock_no_click_oracle(effective, 60) -
                      no_click_probability(state, t, 1.0)) < 1e-9);
    }
  }

  GaussianState tmsv = two_mode_squeezed_vacuum(0.4);
  GaussianState effective = apply_loss(apply_loss(tmsv, 0, 0.7), 1, 0.7);
  CHECK(std::fabs(fock_no_click_oracle(effective, 40) -
                  multimode_no_click_probability(tmsv, 0.7, 1.0)) < 1e-8);

  FockOracleResult detail = fock_no_click_oracle_detailed(thermal(2.0), 40);
  CHECK(detail.refinements >= 1);
  CHECK(detail.nodes_per_axis >= 16);
  CHECK(detail.tail_bound < 1e-9);
  CHECK(detail.value == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("quadrature oracle rejects what it cannot certify") {
  CHECK_THROWS_AS(fock_no_click_oracle(vacuum(1), 10), InvalidParameter);
  CHECK_THROWS_AS(fock_no_click_oracle(vacuum(3), 60), InvalidParameter);
  // A displacement of alpha = 5 puts significant mass outside the cutoff-20
  // integration box; the tail certificate must refuse.
  CHECK_THROWS_AS(fock_no_click_oracle(coherent({5.0, 0.0}), 20), CutoffTooSmall);
  CHECK(fock_no_click_oracle(coherent({5.0, 0.0}), 60) ==
        doctest::Approx(std::exp(-25.0)).epsilon(1e-6));
}

TEST_CASE("two-copy preparation cancels displacement and keeps the covariance") {
  GaussianState coh = coherent({1.3, -0.4});
  GaussianState prepared = prepare_minus_mode(coh);
  CHECK(prepared.displacement().isZero(0.0));
  CHECK(prepared.gamma().isIdentity(1e-14));

  Eigen::VectorXd xi(4);
  xi << 0.5, -0.2, 1.0, 0.3;
  GaussianState displaced_tmsv = make_state(xi, two_mode_squeezed_vacuum(0.3).gamma());
  GaussianState out = prepare_minus_mode(displaced_tmsv);
  CHECK(out.mode_count() == 2);
  CHECK(out.displacement().isZero(0.0));
  CHECK((out.gamma() - displaced_tmsv.gamma()).norm() == doctest::Approx(0.0).epsilon(1e-12));
}

namespace {

SettingSchedule two_setting_schedule(std::int64_t shots, std::uint64_t seed) {
  SettingSchedule schedule;
  schedule.rng_seed = seed;
  for (double t : {0.5, 1.0}) {
    DetectorSetting setting;
    setting.transmittance = t;
    setting.shots = shots;
    setting.label = "s:T" + std::to_string(schedule.settings.size());
    schedule.settings.push_back(setting);
  }
  return schedule;
}

}  // namespace

TEST_CASE("tallies are deterministic for a fixed seed") {
  GaussianState state = squeezed_vacuum(0.5);
  SettingSchedule schedule = two_setting_schedule(50000, 12345);
  TallyTable first = simulate_tallies(state, schedule);
  TallyTable second = simulate_tallies(state, schedule);
  REQUIRE(first.rows.size() == 2);
  for (std::size_t k = 0; k < first.rows.size(); k++) {
    CHECK(first.rows[k].no_click_count == second.rows[k].no_click_count);
  }

  TallyTable other_seed = simulate_tallies(state, two_setting_schedule(50000, 54321));
  CHECK((first.rows[0].no_click_count != other_seed.rows[0].no_click_count ||
         first.rows[1].no_click_count != other_seed.rows[1].no_click_count));
}

TEST_CASE("per-shot traces and tallies agree on the small-shot path") {
  GaussianState state = thermal(0.8);
  SettingSchedule schedule = two_setting_schedule(5000, 777);
  TallyTable tally = simulate_tallies(state, schedule);
  for (std::size_t k = 0; k < schedule.settings.size(); k++) {
    std::vector<std::uint8_t> trace =
        simulate_shot_trace(state, schedule.settings[k], schedule.rng_seed, k);
    REQUIRE(static_cast<std::int64_t>(trace.size()) == schedule.settings[k].shots);
    std::int64_t ones = std::accumulate(trace.begin(), trace.end(), std::int64_t{0});
    CHECK(ones == tally.rows[k].no_click_count);
  }
}

TEST_CASE("sampled counts sit within five binomial sigma of the probability") {
  GaussianState state = squeezed_vacuum(0.5);
  std::int64_t shots = 1000000;
  SettingSchedule schedule = two_setting_schedule(shots, 2026);
  TallyTable tally = simulate_tallies(state, schedule);
  for (const TallyRow& row : tally.rows) {
    double p = no_click_probability(state, row.setting.transmittance, row.setting.efficiency);
    double sigma = std::sqrt(p * (1.0 - p) * static_cast<double>(shots));
    CHECK(std::fabs(static_cast<double>(row.no_click_count) - p * shots) < 5.0 * sigma);
  }
}
