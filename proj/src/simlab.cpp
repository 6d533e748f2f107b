#include "probekit/simlab.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include <json.hpp>

namespace probekit {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void check_config(const ExperimentConfig& config) {
  auto bad = [](const std::string& msg) {
    throw SimError(SimError::Kind::BadConfig, msg);
  };
  if (config.attendance_prob < 0.0 || config.attendance_prob > 1.0) {
    bad("attendance_prob outside [0,1]");
  }
  if (config.probe_prob < 0.0 || config.probe_prob > 1.0) {
    bad("probe_prob outside [0,1]");
  }
  if (config.noise_macs_per_lecture > config.noise_pool_size) {
    bad("noise_macs_per_lecture exceeds noise_pool_size");
  }
}

MacAddress random_unicast_mac(std::mt19937_64& rng) {
  const std::uint64_t v = rng();
  std::array<std::uint8_t, 6> octets{};
  for (int i = 0; i < 6; ++i) {
    octets[i] = static_cast<std::uint8_t>(v >> (i * 8));
  }
  octets[0] &= ~0x03;  // globally administered, unicast
  return MacAddress(octets);
}

}  // namespace

std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t state = seed ^ (0x9e3779b97f4a7c15ULL * (tag + 1));
  return std::mt19937_64(splitmix64(state));
}

double uniform_unit(std::mt19937_64& rng) {
  // 53 random bits; [0,1). Identical on every platform, unlike the
  // standard distributions.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % n;
  }
}

std::vector<std::string> default_roster(std::uint32_t n) {
  std::vector<std::string> roster;
  roster.reserve(n);
  for (std::uint32_t i = 1; i <= n; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "person-%04u", i);
    roster.emplace_back(buf);
  }
  return roster;
}

GroundTruth generate_ground_truth(const ExperimentConfig& config,
                                  const std::vector<std::string>& roster) {
  check_config(config);
  if (roster.size() != config.num_people) {
    throw SimError(SimError::Kind::RosterSizeMismatch,
                   "roster size " + std::to_string(roster.size()) +
                       " != num_people " + std::to_string(config.num_people));
  }
  {
    std::set<std::string> names(roster.begin(), roster.end());
    if (names.size() != roster.size()) {
      throw SimError(SimError::Kind::DuplicateNames, "roster names must be distinct");
    }
  }
  auto rng = stream_engine(config.seed, kStreamGroundTruth);
  GroundTruth truth;
  std::set<MacAddress> used;
  for (const auto& name : roster) {
    MacAddress mac = random_unicast_mac(rng);
    while (!used.insert(mac).second) mac = random_unicast_mac(rng);
    truth.assignment.emplace(name, mac);
  }
  return truth;
}

std::vector<MacAddress> generate_noise_pool(const ExperimentConfig& config,
                                            const GroundTruth& truth) {
  auto rng = stream_engine(config.seed, kStreamNoisePool);
  std::set<MacAddress> taken;
  for (const auto& [name, mac] : truth.assignment) taken.insert(mac);
  std::vector<MacAddress> pool;
  pool.reserve(config.noise_pool_size);
  while (pool.size() < config.noise_pool_size) {
    const MacAddress mac = random_unicast_mac(rng);
    if (taken.insert(mac).second) pool.push_back(mac);
  }
  return pool;
}

LectureObservation simulate_lecture(const ExperimentConfig& config,
                                    const GroundTruth& truth,
                                    const std::vector<std::string>& roster,
                                    const std::vector<MacAddress>& noise_pool,
                                    std::uint32_t index) {
  auto rng = stream_engine(config.seed, kStreamLectureBase + index);
  LectureObservation obs;
  obs.index = index;

  // Draw order is fixed: attendance per person in roster order, then one
  // probe draw per attendee, then noise sampling, then the shuffle.
  for (const auto& name : roster) {
    if (uniform_unit(rng) < config.attendance_prob) {
      obs.attendees.push_back(name);
    }
  }
  for (const auto& name : obs.attendees) {
    if (uniform_unit(rng) < config.probe_prob) {
      obs.detected_macs.push_back(truth.assignment.at(name));
    }
  }
  if (config.noise_macs_per_lecture > 0) {
    // Partial Fisher-Yates over pool indices: k distinct picks.
    std::vector<std::uint32_t> idx(noise_pool.size());
    for (std::uint32_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::uint32_t i = 0; i < config.noise_macs_per_lecture; ++i) {
      const auto j = i + uniform_index(rng, idx.size() - i);
      std::swap(idx[i], idx[j]);
      obs.detected_macs.push_back(noise_pool[idx[i]]);
    }
  }
  // Detector order conveys no identity signal.
  for (std::size_t i = obs.detected_macs.size(); i > 1; --i) {
    const auto j = uniform_index(rng, i);
    std::swap(obs.detected_macs[i - 1], obs.detected_macs[j]);
  }
  return obs;
}

Transcript run_experiment(const ExperimentConfig& config,
                          std::vector<std::string> roster) {
  Transcript transcript;
  transcript.config = config;
  transcript.truth = generate_ground_truth(config, roster);
  transcript.roster = std::move(roster);
  const auto noise_pool = generate_noise_pool(config, transcript.truth);
  transcript.observations.reserve(config.num_lectures);
  for (std::uint32_t i = 0; i < config.num_lectures; ++i) {
    transcript.observations.push_back(simulate_lecture(
        config, transcript.truth, transcript.roster, noise_pool, i));
  }
  return transcript;
}

std::string transcript_to_json(const Transcript& transcript) {
  nlohmann::json doc;
  doc["format"] = "probekit-transcript";
  doc["version"] = 1;
  doc["config"] = {
      {"num_people", transcript.config.num_people},
      {"num_lectures", transcript.config.num_lectures},
      {"attendance_prob", transcript.config.attendance_prob},
      {"probe_prob", transcript.config.probe_prob},
      {"noise_macs_per_lecture", transcript.config.noise_macs_per_lecture},
      {"noise_pool_size", transcript.config.noise_pool_size},
      {"seed", transcript.config.seed},
  };
  doc["roster"] = transcript.roster;
  nlohmann::json truth = nlohmann::json::object();
  for (const auto& [name, mac] : transcript.truth.assignment) {
    truth[name] = mac.to_string();
  }
  doc["ground_truth"] = std::move(truth);
  nlohmann::json observations = nlohmann::json::array();
  for (const auto& obs : transcript.observations) {
    nlohmann::json macs = nlohmann::json::array();
    for (const auto& mac : obs.detected_macs) macs.push_back(mac.to_string());
    observations.push_back({{"index", obs.index},
                            {"attendees", obs.attendees},
                            {"detected_macs", std::move(macs)}});
  }
  doc["observations"] = std::move(observations);
  return doc.dump(2);
}

Transcript transcript_from_json(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    if (doc.value("format", "") != "probekit-transcript" ||
        doc.value("version", -1) != 1) {
      throw SimError(SimError::Kind::BadTranscript, "not a transcript file");
    }
    Transcript transcript;
    const auto& c = doc.at("config");
    transcript.config.num_people = c.at("num_people").get<std::uint32_t>();
    transcript.config.num_lectures = c.at("num_lectures").get<std::uint32_t>();
    transcript.config.attendance_prob = c.at("attendance_prob").get<double>();
    transcript.config.probe_prob = c.at("probe_prob").get<double>();
    transcript.config.noise_macs_per_lecture =
        c.at("noise_macs_per_lecture").get<std::uint32_t>();
    transcript.config.noise_pool_size = c.at("noise_pool_size").get<std::uint32_t>();
    transcript.config.seed = c.at("seed").get<std::uint64_t>();
    transcript.roster = doc.at("roster").get<std::vector<std::string>>();
    for (const auto& [name, mac_text] : doc.at("ground_truth").items()) {
      const auto mac = MacAddress::parse(mac_text.get<std::string>());
      if (!mac) throw SimError(SimError::Kind::BadTranscript, "bad truth mac");
      transcript.truth.assignment.emplace(name, *mac);
    }
    for (const auto& item : doc.at("observations")) {
      LectureObservation obs;
      obs.index = item.at("index").get<std::uint32_t>();
      obs.attendees = item.at("attendees").get<std::vector<std::string>>();
      for (const auto& mac_text : item.at("detected_macs")) {
        const auto mac = MacAddress::parse(mac_text.get<std::string>());
        if (!mac) throw SimError(SimError::Kind::BadTranscript, "bad detected mac");
        obs.detected_macs.push_back(*mac);
      }
      transcript.observations.push_back(std::move(obs));
    }
    return transcript;
  } catch (const SimError&) {
    throw;
  } catch (const std::exception& e) {
    throw SimError(SimError::Kind::BadTranscript,
                   std::string("corrupt transcript: ") + e.what());
  }
}

}  // namespace probekit
