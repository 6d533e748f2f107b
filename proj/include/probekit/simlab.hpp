#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "probekit/mac.hpp"

namespace probekit {

struct ExperimentConfig {
  std::uint32_t num_people = 0;
  std::uint32_t num_lectures = 0;
  double attendance_prob = 0.0;  // [0,1]
  double probe_prob = 0.0;       // [0,1]
  std::uint32_t noise_macs_per_lecture = 0;
  std::uint32_t noise_pool_size = 0;
  std::uint64_t seed = 0;

  bool operator==(const ExperimentConfig&) const = default;
};

// Hidden injective person -> MAC assignment.
struct GroundTruth {
  std::map<std::string, MacAddress> assignment;
  bool operator==(const GroundTruth&) const = default;
};

struct LectureObservation {
  std::uint32_t index = 0;
  std::vector<std::string> attendees;      // subset of roster, no duplicates
  std::vector<MacAddress> detected_macs;   // shuffled; no duplicates
  bool operator==(const LectureObservation&) const = default;
};

struct Transcript {
  ExperimentConfig config;
  std::vector<std::string> roster;
  GroundTruth truth;
  std::vector<LectureObservation> observations;
};

class SimError : public std::runtime_error {
 public:
  enum class Kind { DuplicateNames, RosterSizeMismatch, BadConfig, BadTranscript };
  SimError(Kind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Stream discipline: every random draw comes from an mt19937_64 seeded by
// splitmix64 over (seed, purpose tag). Ground truth, the noise pool, and
// each lecture get their own substream, so adding lectures never perturbs
// earlier ones and replays are byte-identical.
std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t tag);
double uniform_unit(std::mt19937_64& rng);                       // [0,1)
std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n);  // unbiased [0,n)

// Substream tags used by the generators below.
inline constexpr std::uint64_t kStreamGroundTruth = 0;
inline constexpr std::uint64_t kStreamNoisePool = 1;
inline constexpr std::uint64_t kStreamLectureBase = 1000;

std::vector<std::string> default_roster(std::uint32_t n);  // person-0001, ...

// MACs are drawn with the locally-administered and multicast bits clear
// and are pairwise distinct. Deterministic under config.seed.
GroundTruth generate_ground_truth(const ExperimentConfig& config,
                                  const std::vector<std::string>& roster);

// Crowd-background pool, disjoint from the truth MACs.
std::vector<MacAddress> generate_noise_pool(const ExperimentConfig& config,
                                            const GroundTruth& truth);

LectureObservation simulate_lecture(const ExperimentConfig& config,
                                    const GroundTruth& truth,
                                    const std::vector<std::string>& roster,
                                    const std::vector<MacAddress>& noise_pool,
                                    std::uint32_t index);

Transcript run_experiment(const ExperimentConfig& config,
                          std::vector<std::string> roster);

std::string transcript_to_json(const Transcript& transcript);
Transcript transcript_from_json(std::string_view text);

}  // namespace probekit
