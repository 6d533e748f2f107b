#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "probekit/mac.hpp"
#include "probekit/simlab.hpp"

namespace probekit {

// Per-scenario weight deltas. The defaults make the mac-present /
// person-absent penalty strictly stronger than the person-present /
// mac-absent one: a device can stay silent while its owner attends, but
// a detected device whose owner is away is strong counter-evidence.
struct UpdateRule {
  double delta_both_present = +1.0;
  double delta_person_only = -0.5;
  double delta_mac_only = -1.0;
  double delta_both_absent = 0.0;

  bool valid() const {
    return delta_both_present > 0.0 && delta_both_absent == 0.0 &&
           delta_mac_only < delta_person_only && delta_person_only < 0.0;
  }
};

enum class AssignMode { DuplicatesAllowed, UniqueAssignments };

struct Proposal {
  MacAddress mac;
  double weight = 0.0;
  bool operator==(const Proposal&) const = default;
};

struct AssignmentProposal {
  std::vector<std::string> roster;
  std::vector<std::optional<Proposal>> proposals;  // by roster index
  AssignMode mode = AssignMode::DuplicatesAllowed;
  std::optional<double> threshold;
};

class GridError : public std::runtime_error {
 public:
  enum class Kind { EmptyRoster, BadCap, BadRule, UnknownAttendee, RosterMismatch };
  GridError(Kind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Per-person candidate MAC weights driven by co-occurrence. Candidates are
// created lazily: a MAC is linked to a person only once the two have
// co-occurred, and each person's table is pruned to the `cap` highest
// weights after every observation, so the per-person work stays constant
// no matter how crowded the airspace gets.
class OccupancyGrid {
 public:
  static constexpr std::size_t kDefaultCap = 32;

  OccupancyGrid(std::vector<std::string> roster, std::size_t cap = kDefaultCap);

  void observe(const LectureObservation& obs, const UpdateRule& rule);
  AssignmentProposal assign(AssignMode mode,
                            std::optional<double> threshold = std::nullopt) const;

  const std::vector<std::string>& roster() const { return roster_; }
  std::size_t cap() const { return cap_; }
  std::uint64_t observations_seen() const { return observations_seen_; }
  const std::map<MacAddress, double>& candidates(std::size_t person) const {
    return candidates_[person];
  }

 private:
  std::vector<std::string> roster_;
  std::unordered_map<std::string, std::size_t> roster_index_;
  std::vector<std::map<MacAddress, double>> candidates_;  // key order = text order
  std::size_t cap_;
  std::uint64_t observations_seen_ = 0;
};

// Fraction of people whose proposed MAC equals their truth MAC; absent
// proposals count as incorrect.
double score(const AssignmentProposal& proposal, const GroundTruth& truth);

struct IdentifyOptions {
  UpdateRule rule;
  AssignMode mode = AssignMode::DuplicatesAllowed;
  std::size_t cap = OccupancyGrid::kDefaultCap;
  std::optional<double> threshold;
};

// observe -> assign -> score after every lecture; one accuracy value per
// observation. Ground truth is consulted only for scoring.
std::vector<double> run_identification(const Transcript& transcript,
                                       const IdentifyOptions& options);

}  // namespace probekit
