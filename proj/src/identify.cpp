#include "probekit/identify.hpp"

#include <algorithm>
#include <unordered_set>

namespace probekit {

OccupancyGrid::OccupancyGrid(std::vector<std::string> roster, std::size_t cap)
    : roster_(std::move(roster)), cap_(cap) {
  if (roster_.empty()) {
    throw GridError(GridError::Kind::EmptyRoster, "roster must not be empty");
  }
  if (cap_ == 0) {
    throw GridError(GridError::Kind::BadCap, "cap must be at least 1");
  }
  candidates_.resize(roster_.size());
  roster_index_.reserve(roster_.size());
  for (std::size_t i = 0; i < roster_.size(); ++i) {
    roster_index_.emplace(roster_[i], i);
  }
}

void OccupancyGrid::observe(const LectureObservation& obs, const UpdateRule& rule) {
  if (!rule.valid()) {
    throw GridError(GridError::Kind::BadRule, "update rule violates its invariants");
  }
  std::vector<bool> attending(roster_.size(), false);
  for (const auto& name : obs.attendees) {
    const auto it = roster_index_.find(name);
    if (it == roster_index_.end()) {
      throw GridError(GridError::Kind::UnknownAttendee,
                      "attendee \"" + name + "\" is not on the roster");
    }
    attending[it->second] = true;
  }

  std::unordered_set<MacAddress> detected(obs.detected_macs.begin(),
                                          obs.detected_macs.end());
  // Shared text-ordered view of the detected set, for entrant selection.
  std::vector<MacAddress> detected_sorted(detected.begin(), detected.end());
  std::sort(detected_sorted.begin(), detected_sorted.end());

  const double entry_weight = rule.delta_both_present;  // 0 + this observation's delta

  for (std::size_t p = 0; p < roster_.size(); ++p) {
    auto& cand = candidates_[p];
    if (!attending[p]) {
      // No co-occurrence: existing candidates only, size cannot grow.
      for (auto& [mac, w] : cand) {
        if (detected.contains(mac)) w += rule.delta_mac_only;
        // both absent: delta is zero by invariant
      }
      continue;
    }

    std::size_t already_candidates = 0;
    for (auto& [mac, w] : cand) {
      if (detected.contains(mac)) {
        w += rule.delta_both_present;
        ++already_candidates;
      } else {
        w += rule.delta_person_only;
      }
    }
    const std::size_t entrants = detected.size() - already_candidates;

    if (cand.size() + entrants <= cap_) {
      for (const auto& mac : detected_sorted) {
        cand.try_emplace(mac, entry_weight);
      }
      continue;
    }

    // Over the cap: keep the `cap` highest weights, ties broken by MAC
    // text order. Every entrant carries entry_weight, so the survivors
    // are the updated candidates above that weight, then the tie band in
    // text order, then the remaining candidates by weight. This touches
    // O(cap) entries per person instead of materializing all entrants.
    std::vector<std::pair<MacAddress, double>> winners;
    std::vector<MacAddress> tied_existing;
    std::vector<std::pair<MacAddress, double>> losers;
    for (const auto& [mac, w] : cand) {
      if (w > entry_weight) {
        winners.emplace_back(mac, w);
      } else if (w == entry_weight) {
        tied_existing.push_back(mac);
      } else {
        losers.emplace_back(mac, w);
      }
    }

    std::map<MacAddress, double> next(winners.begin(), winners.end());
    std::size_t slots = cap_ - winners.size();

    // Merge the tie band: existing ties and unseen detected MACs, both
    // already in text order.
    auto tie_it = tied_existing.begin();
    auto det_it = detected_sorted.begin();
    while (slots > 0 && (tie_it != tied_existing.end() || det_it != detected_sorted.end())) {
      while (det_it != detected_sorted.end() && cand.contains(*det_it)) ++det_it;
      if (det_it == detected_sorted.end() && tie_it == tied_existing.end()) break;
      if (tie_it != tied_existing.end() &&
          (det_it == detected_sorted.end() || *tie_it < *det_it)) {
        next.emplace(*tie_it++, entry_weight);
      } else {
        next.emplace(*det_it++, entry_weight);
      }
      --slots;
    }

    if (slots > 0) {
      std::sort(losers.begin(), losers.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
      });
      for (const auto& entry : losers) {
        if (slots == 0) break;
        next.emplace(entry.first, entry.second);
        --slots;
      }
    }
    cand = std::move(next);
  }
  ++observations_seen_;
}

AssignmentProposal OccupancyGrid::assign(AssignMode mode,
                                         std::optional<double> threshold) const {
  AssignmentProposal result;
  result.roster = roster_;
  result.proposals.assign(roster_.size(), std::nullopt);
  result.mode = mode;
  result.threshold = threshold;

  if (mode == AssignMode::DuplicatesAllowed) {
    for (std::size_t p = 0; p < roster_.size(); ++p) {
      std::optional<Proposal> best;
      for (const auto& [mac, w] : candidates_[p]) {
        // strict > keeps the first (lexicographically smallest) MAC on ties
        if (!best || w > best->weight) best = Proposal{mac, w};
      }
      result.proposals[p] = best;
    }
  } else {
    struct Entry {
      double weight;
      std::size_t person;
      MacAddress mac;
    };
    std::vector<Entry> entries;
    for (std::size_t p = 0; p < roster_.size(); ++p) {
      for (const auto& [mac, w] : candidates_[p]) {
        entries.push_back(Entry{w, p, mac});
      }
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
      if (a.weight != b.weight) return a.weight > b.weight;
      if (a.person != b.person) return a.person < b.person;
      return a.mac < b.mac;
    });
    std::vector<bool> person_used(roster_.size(), false);
    std::unordered_set<MacAddress> mac_used;
    for (const auto& e : entries) {
      if (person_used[e.person] || mac_used.contains(e.mac)) continue;
      person_used[e.person] = true;
      mac_used.insert(e.mac);
      result.proposals[e.person] = Proposal{e.mac, e.weight};
    }
  }

  if (threshold) {
    for (auto& proposal : result.proposals) {
      if (proposal && proposal->weight < *threshold) proposal.reset();
    }
  }
  return result;
}

double score(const AssignmentProposal& proposal, const GroundTruth& truth) {
  if (proposal.roster.size() != truth.assignment.size()) {
    throw GridError(GridError::Kind::RosterMismatch,
                    "proposal and truth rosters differ in size");
  }
  std::size_t correct = 0;
  for (std::size_t p = 0; p < proposal.roster.size(); ++p) {
    const auto it = truth.assignment.find(proposal.roster[p]);
    if (it == truth.assignment.end()) {
      throw GridError(GridError::Kind::RosterMismatch,
                      "\"" + proposal.roster[p] + "\" missing from ground truth");
    }
    if (proposal.proposals[p] && proposal.proposals[p]->mac == it->second) {
      ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(proposal.roster.size());
}

std::vector<double> run_identification(const Transcript& transcript,
                                       const IdentifyOptions& options) {
  OccupancyGrid grid(transcript.roster, options.cap);
  std::vector<double> series;
  series.reserve(transcript.observations.size());
  for (const auto& obs : transcript.observations) {
    grid.observe(obs, options.rule);
    const auto proposal = grid.assign(options.mode, options.threshold);
    series.push_back(score(proposal, transcript.truth));
  }
  return series;
}

}  // namespace probekit
