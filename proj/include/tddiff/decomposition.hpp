// Per-revision decomposition of the TD-density change.
//
// For a transition t-1 -> t with density TD/LOC, each change kind gets a
// what-if contribution against the previous revision:
//   new:      (TD + td_new)       / (LOC + loc_new)       - TD/LOC
//   deleted:  (TD - td_deleted)   / (LOC - loc_deleted)   - TD/LOC
//   modified: (TD + td_mod_delta) / (LOC + loc_mod_delta) - TD/LOC
// The contributions do not sum to the full system delta in general; the
// exact leftover is reported as the residual, never asserted away.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "tddiff/change_tracker.hpp"
#include "tddiff/rational.hpp"

namespace tddiff::decomp {

struct RevisionMeasurement {
  std::string revision;
  long long td_minutes = 0;
  long long ncloc = 0;

  Rational td_density() const;  // requires ncloc > 0
};

struct ChangeAggregates {
  long long new_td = 0, new_ncloc = 0, new_count = 0;
  long long deleted_td = 0, deleted_ncloc = 0, deleted_count = 0;
  long long modified_td_delta = 0, modified_ncloc_delta = 0, modified_count = 0;

  static ChangeAggregates from_changeset(const changes::ChangeSet& cs);
  bool operator==(const ChangeAggregates&) const = default;
};

class AggregateError : public std::runtime_error {
 public:
  explicit AggregateError(const std::string& what) : std::runtime_error(what) {}
};

struct RevisionDelta {
  Rational contribution_new;
  Rational contribution_deleted;
  Rational contribution_modified;
  Rational system_delta;
  Rational residual;  // system_delta - sum of contributions
  Direction dir_new = Direction::Stable;
  Direction dir_deleted = Direction::Stable;
  Direction dir_modified = Direction::Stable;
  Direction dir_system = Direction::Stable;
  bool degenerate = false;
  std::string degenerate_reason;
};

// nullopt when the what-if denominator is not positive (degenerate).
std::optional<Rational> contribution_new(const RevisionMeasurement& prev,
                                         long long new_td, long long new_ncloc);
std::optional<Rational> contribution_deleted(const RevisionMeasurement& prev,
                                             long long deleted_td,
                                             long long deleted_ncloc);
std::optional<Rational> contribution_modified(const RevisionMeasurement& prev,
                                              long long td_delta, long long ncloc_delta);

// Validates aggregate sanity (non-negative counts, zero totals for absent
// kinds); throws AggregateError on violations. Degenerate transitions
// (empty system on either side, non-positive what-if denominator) are
// flagged, not errors.
RevisionDelta revision_delta(const RevisionMeasurement& prev,
                             const RevisionMeasurement& cur,
                             const ChangeAggregates& agg);

// Additionally recomputes the aggregates from the change set's per-method
// records and fails on any mismatch with the change set's stored totals.
RevisionDelta revision_delta_checked(const RevisionMeasurement& prev,
                                     const RevisionMeasurement& cur,
                                     const changes::ChangeSet& cs);

}  // namespace tddiff::decomp
