#include "tddiff/decomposition.hpp"

namespace tddiff::decomp {

Rational RevisionMeasurement::td_density() const {
  if (ncloc <= 0) throw AggregateError("density undefined for empty system " + revision);
  return Rational(td_minutes, ncloc);
}

ChangeAggregates ChangeAggregates::from_changeset(const changes::ChangeSet& cs) {
  ChangeAggregates a;
  for (const changes::MethodChange& mc : cs.changes) {
    switch (mc.kind) {
      case changes::ChangeKind::New:
        a.new_td += mc.td_after;
        a.new_ncloc += mc.after->ncloc;
        a.new_count += 1;
        break;
      case changes::ChangeKind::Deleted:
        a.deleted_td += mc.td_before;
        a.deleted_ncloc += mc.before->ncloc;
        a.deleted_count += 1;
        break;
      case changes::ChangeKind::Modified:
        a.modified_td_delta += mc.td_after - mc.td_before;
        a.modified_ncloc_delta += mc.after->ncloc - mc.before->ncloc;
        a.modified_count += 1;
        break;
      case changes::ChangeKind::Unchanged:
        break;
    }
  }
  return a;
}

namespace {

std::optional<Rational> what_if(const RevisionMeasurement& prev, long long td_shift,
                                long long ncloc_shift) {
  long long den = prev.ncloc + ncloc_shift;
  if (prev.ncloc <= 0 || den <= 0) return std::nullopt;
  return Rational(prev.td_minutes + td_shift, den) - prev.td_density();
}

void validate(const ChangeAggregates& a) {
  auto fail = [](const std::string& what) { throw AggregateError(what); };
  if (a.new_count < 0 || a.deleted_count < 0 || a.modified_count < 0)
    fail("negative change count");
  if (a.new_td < 0 || a.new_ncloc < 0) fail("negative totals for new methods");
  if (a.deleted_td < 0 || a.deleted_ncloc < 0) fail("negative totals for deleted methods");
  if (a.new_count == 0 && (a.new_td != 0 || a.new_ncloc != 0))
    fail("new totals without new methods");
  if (a.deleted_count == 0 && (a.deleted_td != 0 || a.deleted_ncloc != 0))
    fail("deleted totals without deleted methods");
  if (a.modified_count == 0 && (a.modified_td_delta != 0 || a.modified_ncloc_delta != 0))
    fail("modified deltas without modified methods");
  if (a.new_count > 0 && a.new_ncloc < a.new_count)
    fail("new methods imply at least one line each");
  if (a.deleted_count > 0 && a.deleted_ncloc < a.deleted_count)
    fail("deleted methods imply at least one line each");
}

}  // namespace

std::optional<Rational> contribution_new(const RevisionMeasurement& prev, long long new_td,
                                         long long new_ncloc) {
  return what_if(prev, new_td, new_ncloc);
}

std::optional<Rational> contribution_deleted(const RevisionMeasurement& prev,
                                             long long deleted_td, long long deleted_ncloc) {
  return what_if(prev, -deleted_td, -deleted_ncloc);
}

std::optional<Rational> contribution_modified(const RevisionMeasurement& prev,
                                              long long td_delta, long long ncloc_delta) {
  return what_if(prev, td_delta, ncloc_delta);
}

RevisionDelta revision_delta(const RevisionMeasurement& prev, const RevisionMeasurement& cur,
                             const ChangeAggregates& agg) {
  validate(agg);
  RevisionDelta d;
  auto degenerate = [&](const std::string& reason) {
    d.degenerate = true;
    d.degenerate_reason = reason;
    return d;
  };
  if (prev.ncloc <= 0) return degenerate("previous revision has no measured code");
  if (cur.ncloc <= 0) return degenerate("current revision has no measured code");

  auto cn = contribution_new(prev, agg.new_td, agg.new_ncloc);
  auto cd = contribution_deleted(prev, agg.deleted_td, agg.deleted_ncloc);
  auto cm = contribution_modified(prev, agg.modified_td_delta, agg.modified_ncloc_delta);
  if (!cn) return degenerate("new-code what-if denominator not positive");
  if (!cd) return degenerate("deletion what-if removes the whole system");
  if (!cm) return degenerate("modification what-if denominator not positive");

  d.contribution_new = *cn;
  d.contribution_deleted = *cd;
  d.contribution_modified = *cm;
  d.system_delta = cur.td_density() - prev.td_density();
  d.residual =
      d.system_delta - d.contribution_new - d.contribution_deleted - d.contribution_modified;
  d.dir_new = direction_of(d.contribution_new);
  d.dir_deleted = direction_of(d.contribution_deleted);
  d.dir_modified = direction_of(d.contribution_modified);
  d.dir_system = direction_of(d.system_delta);
  return d;
}

RevisionDelta revision_delta_checked(const RevisionMeasurement& prev,
                                     const RevisionMeasurement& cur,
                                     const changes::ChangeSet& cs) {
  ChangeAggregates stored;
  stored.new_td = cs.added.td;
  stored.new_ncloc = cs.added.ncloc;
  stored.new_count = cs.added.count;
  stored.deleted_td = cs.removed.td;
  stored.deleted_ncloc = cs.removed.ncloc;
  stored.deleted_count = cs.removed.count;
  stored.modified_td_delta = cs.modified_td_delta;
  stored.modified_ncloc_delta = cs.modified_ncloc_delta;
  stored.modified_count = cs.modified_count;

  ChangeAggregates recomputed = ChangeAggregates::from_changeset(cs);
  if (!(stored == recomputed))
    throw AggregateError("change aggregates disagree with per-method records for " +
                         cs.cur_revision);
  return revision_delta(prev, cur, recomputed);
}

}  // namespace tddiff::decomp
