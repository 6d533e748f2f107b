#include <doctest.h>

#include <cmath>
#include <set>

#include "probekit/simlab.hpp"

using namespace probekit;

namespace {

ExperimentConfig config(std::uint32_t people, std::uint32_t lectures, double att,
                        double probe, std::uint64_t seed,
                        std::uint32_t noise_per = 0, std::uint32_t pool = 0) {
  ExperimentConfig c;
  c.num_people = people;
  c.num_lectures = lectures;
  c.attendance_prob = att;
  c.probe_prob = probe;
  c.noise_macs_per_lecture = noise_per;
  c.noise_pool_size = pool;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("ground truth: single person") {
  const auto truth = generate_ground_truth(config(1, 1, 0.5, 0.5, 7), {"Ada"});
  REQUIRE(truth.assignment.size() == 1);
  CHECK(truth.assignment.contains("Ada"));
}

TEST_CASE("ground truth: deterministic under the seed") {
  const auto roster = default_roster(20);
  const auto a = generate_ground_truth(config(20, 1, 0.5, 0.5, 99), roster);
  const auto b = generate_ground_truth(config(20, 1, 0.5, 0.5, 99), roster);
  CHECK(a == b);
  const auto c = generate_ground_truth(config(20, 1, 0.5, 0.5, 100), roster);
  CHECK(a.assignment != c.assignment);
}

TEST_CASE("ground truth: 1000 people get 1000 cleanly shaped distinct MACs") {
  const auto roster = default_roster(1000);
  const auto truth = generate_ground_truth(config(1000, 1, 0.5, 0.5, 3), roster);
  std::set<MacAddress> macs;
  for (const auto& [name, mac] : truth.assignment) {
    macs.insert(mac);
    CHECK_FALSE(mac.is_locally_administered());
    CHECK_FALSE(mac.is_multicast());
  }
  CHECK(macs.size() == 1000);
}

TEST_CASE("ground truth: error paths") {
  CHECK_THROWS_AS(generate_ground_truth(config(2, 1, 0.5, 0.5, 1), {"x", "x"}),
                  SimError);
  CHECK_THROWS_AS(generate_ground_truth(config(3, 1, 0.5, 0.5, 1), {"x", "y"}),
                  SimError);
  CHECK_THROWS_AS(generate_ground_truth(config(1, 1, 1.5, 0.5, 1), {"x"}), SimError);
  CHECK_THROWS_AS(generate_ground_truth(config(1, 1, 0.5, -0.1, 1), {"x"}), SimError);
}

TEST_CASE("simulate_lecture: degenerate bounds") {
  const auto roster = default_roster(10);
  SUBCASE("nobody attends") {
    const auto cfg = config(10, 1, 0.0, 1.0, 5);
    const auto truth = generate_ground_truth(cfg, roster);
    const auto obs = simulate_lecture(cfg, truth, roster, {}, 0);
    CHECK(obs.attendees.empty());
    CHECK(obs.detected_macs.empty());
  }
  SUBCASE("everyone attends and probes") {
    const auto cfg = config(10, 1, 1.0, 1.0, 5);
    const auto truth = generate_ground_truth(cfg, roster);
    const auto obs = simulate_lecture(cfg, truth, roster, {}, 0);
    CHECK(obs.attendees == roster);
    std::set<MacAddress> detected(obs.detected_macs.begin(), obs.detected_macs.end());
    std::set<MacAddress> expected;
    for (const auto& [name, mac] : truth.assignment) expected.insert(mac);
    CHECK(detected == expected);
    CHECK(obs.detected_macs.size() == expected.size());
  }
}

TEST_CASE("simulate_lecture: detection count within binomial bounds") {
  const auto roster = default_roster(1000);
  const auto cfg = config(1000, 1, 1.0, 0.5, 11);
  const auto truth = generate_ground_truth(cfg, roster);
  const auto obs = simulate_lecture(cfg, truth, roster, {}, 0);
  // n=1000, p=0.5: mean 500, sigma = sqrt(250) ~ 15.81, 3 sigma ~ 47.4
  const double sigma = std::sqrt(1000 * 0.5 * 0.5);
  CHECK(std::abs(static_cast<double>(obs.detected_macs.size()) - 500.0) <= 3 * sigma);
}

TEST_CASE("run_experiment: zero lectures") {
  const auto transcript = run_experiment(config(5, 0, 0.5, 0.5, 1), default_roster(5));
  CHECK(transcript.observations.empty());
}

TEST_CASE("run_experiment: mean attendance near the configured probability") {
  const auto cfg = config(50, 30, 0.7, 0.95, 21);
  const auto transcript = run_experiment(cfg, default_roster(50));
  REQUIRE(transcript.observations.size() == 30);
  double total = 0;
  for (const auto& obs : transcript.observations) {
    total += static_cast<double>(obs.attendees.size()) / 50.0;
  }
  const double mean = total / 30.0;
  // sd of a per-lecture attendance fraction ~ sqrt(.7*.3/50); mean of 30
  const double sigma = std::sqrt(0.7 * 0.3 / 50.0) / std::sqrt(30.0);
  CHECK(std::abs(mean - 0.7) <= 3 * sigma);
}

TEST_CASE("run_experiment: byte-identical replay") {
  const auto cfg = config(25, 12, 0.6, 0.8, 1234, 5, 40);
  const auto a = run_experiment(cfg, default_roster(25));
  const auto b = run_experiment(cfg, default_roster(25));
  CHECK(transcript_to_json(a) == transcript_to_json(b));
}

TEST_CASE("adding lectures never perturbs earlier ones") {
  const auto short_cfg = config(20, 5, 0.6, 0.8, 77);
  const auto long_cfg = config(20, 25, 0.6, 0.8, 77);
  const auto short_run = run_experiment(short_cfg, default_roster(20));
  const auto long_run = run_experiment(long_cfg, default_roster(20));
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(short_run.observations[i] == long_run.observations[i]);
  }
}

TEST_CASE("noise MACs never collide with truth MACs") {
  const auto cfg = config(30, 10, 0.7, 0.9, 13, 10, 100);
  const auto transcript = run_experiment(cfg, default_roster(30));
  std::set<MacAddress> truth_macs;
  for (const auto& [name, mac] : transcript.truth.assignment) truth_macs.insert(mac);
  const auto pool = generate_noise_pool(cfg, transcript.truth);
  CHECK(pool.size() == 100);
  for (const auto& mac : pool) CHECK_FALSE(truth_macs.contains(mac));

  // every detected mac is either a truth mac or a pool mac; with probe=0.9
  // and noise appended, non-truth detections must come from the pool
  std::set<MacAddress> pool_set(pool.begin(), pool.end());
  for (const auto& obs : transcript.observations) {
    std::set<MacAddress> seen;
    std::size_t noise_count = 0;
    for (const auto& mac : obs.detected_macs) {
      CHECK(seen.insert(mac).second);  // no duplicates
      if (!truth_macs.contains(mac)) {
        CHECK(pool_set.contains(mac));
        ++noise_count;
      }
    }
    CHECK(noise_count == 10);
  }
}

TEST_CASE("with probe=1 and no noise, detections are exactly the attendees' MACs") {
  const auto cfg = config(40, 8, 0.5, 1.0, 31);
  const auto transcript = run_experiment(cfg, default_roster(40));
  for (const auto& obs : transcript.observations) {
    std::set<MacAddress> detected(obs.detected_macs.begin(), obs.detected_macs.end());
    std::set<MacAddress> expected;
    for (const auto& name : obs.attendees) {
      expected.insert(transcript.truth.assignment.at(name));
    }
    CHECK(detected == expected);
  }
}

TEST_CASE("transcript json round trip") {
  const auto cfg = config(12, 6, 0.6, 0.9, 5, 3, 10);
  const auto transcript = run_experiment(cfg, default_roster(12));
  const auto text = transcript_to_json(transcript);
  const auto back = transcript_from_json(text);
  CHECK(back.config == transcript.config);
  CHECK(back.roster == transcript.roster);
  CHECK(back.truth == transcript.truth);
  CHECK(back.observations == transcript.observations);

  CHECK_THROWS_AS(transcript_from_json("{}"), SimError);
  CHECK_THROWS_AS(transcript_from_json("not json"), SimError);
}

TEST_CASE("config validation: noise pool smaller than per-lecture draw") {
  CHECK_THROWS_AS(run_experiment(config(5, 1, 0.5, 0.5, 1, 10, 5), default_roster(5)),
                  SimError);
}
