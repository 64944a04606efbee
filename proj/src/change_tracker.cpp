#include "tddiff/change_tracker.hpp"

#include <algorithm>

namespace tddiff::changes {

const char* to_string(ChangeKind k) {
  switch (k) {
    case ChangeKind::New: return "new";
    case ChangeKind::Deleted: return "deleted";
    case ChangeKind::Modified: return "modified";
    case ChangeKind::Unchanged: return "unchanged";
  }
  return "unchanged";
}

double token_similarity(const std::vector<source::Token>& a,
                        const std::vector<source::Token>& b) {
  size_t la = a.size(), lb = b.size();
  if (la + lb == 0) return 1.0;
  if (la == 0 || lb == 0) return 0.0;
  std::vector<unsigned> prev(lb + 1, 0), cur(lb + 1, 0);
  for (size_t i = 1; i <= la; ++i) {
    for (size_t j = 1; j <= lb; ++j) {
      if (a[i - 1].text == b[j - 1].text)
        cur[j] = prev[j - 1] + 1;
      else
        cur[j] = std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  double lcs = prev[lb];
  return 2.0 * lcs / static_cast<double>(la + lb);
}

std::vector<MethodChange> match_methods(const std::vector<source::MethodRecord>& prev,
                                        const std::vector<source::MethodRecord>& cur,
                                        double similarity_threshold) {
  std::map<std::string, std::vector<size_t>> prev_by_key;
  for (size_t i = 0; i < prev.size(); ++i) prev_by_key[prev[i].key()].push_back(i);

  std::vector<bool> prev_used(prev.size(), false), cur_used(cur.size(), false);
  std::vector<MethodChange> out;

  // Phase 1: identity matches.
  std::vector<std::optional<size_t>> cur_match(cur.size());
  for (size_t j = 0; j < cur.size(); ++j) {
    auto it = prev_by_key.find(cur[j].key());
    if (it == prev_by_key.end()) continue;
    for (size_t idx : it->second) {
      if (prev_used[idx]) continue;
      prev_used[idx] = true;
      cur_used[j] = true;
      cur_match[j] = idx;
      break;
    }
  }

  // Phase 2: rename fallback over the leftovers.
  struct Candidate {
    double sim;
    size_t pi, ci;
  };
  std::vector<Candidate> candidates;
  for (size_t i = 0; i < prev.size(); ++i) {
    if (prev_used[i]) continue;
    for (size_t j = 0; j < cur.size(); ++j) {
      if (cur_used[j]) continue;
      double sim = token_similarity(prev[i].body_tokens, cur[j].body_tokens);
      if (sim >= similarity_threshold) candidates.push_back({sim, i, j});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.sim != b.sim) return a.sim > b.sim;
    if (a.pi != b.pi) return a.pi < b.pi;
    return a.ci < b.ci;
  });
  for (const Candidate& c : candidates) {
    if (prev_used[c.pi] || cur_used[c.ci]) continue;
    prev_used[c.pi] = true;
    cur_used[c.ci] = true;
    cur_match[c.ci] = c.pi;
  }

  // Emit in current-file declaration order, then deletions in previous order.
  for (size_t j = 0; j < cur.size(); ++j) {
    MethodChange mc;
    mc.after = cur[j];
    if (cur_match[j]) {
      const source::MethodRecord& p = prev[*cur_match[j]];
      mc.before = p;
      mc.kind = p.body_fingerprint == cur[j].body_fingerprint &&
                        p.key() == cur[j].key()
                    ? ChangeKind::Unchanged
                    : ChangeKind::Modified;
    } else {
      mc.kind = ChangeKind::New;
    }
    out.push_back(std::move(mc));
  }
  for (size_t i = 0; i < prev.size(); ++i) {
    if (prev_used[i]) continue;
    MethodChange mc;
    mc.kind = ChangeKind::Deleted;
    mc.before = prev[i];
    out.push_back(std::move(mc));
  }
  return out;
}

namespace {

void emit_all(std::vector<MethodChange>& sink, const std::vector<source::MethodRecord>& ms,
              ChangeKind kind) {
  for (const source::MethodRecord& m : ms) {
    MethodChange mc;
    mc.kind = kind;
    if (kind == ChangeKind::Deleted)
      mc.before = m;
    else
      mc.after = m;
    sink.push_back(std::move(mc));
  }
}

}  // namespace

ChangeSet classify(const source::Snapshot& prev, const source::Snapshot& cur,
                   const std::vector<history::FileStatus>& touched,
                   double similarity_threshold) {
  ChangeSet cs;
  cs.prev_revision = prev.revision;
  cs.cur_revision = cur.revision;

  std::map<std::string, history::FileStatus::Kind> status;
  for (const history::FileStatus& fs : touched) status[fs.path] = fs.kind;

  for (const auto& [path, kind] : status) {
    const source::FileRecord* pf = prev.find_file(path);
    const source::FileRecord* cf = cur.find_file(path);
    if ((pf && !pf->parsed) || (cf && !cf->parsed)) {
      cs.flagged_files.push_back(path);
      continue;
    }
    static const std::vector<source::MethodRecord> kNone;
    const auto& pm = pf ? pf->methods : kNone;
    const auto& cm = cf ? cf->methods : kNone;
    switch (kind) {
      case history::FileStatus::Added:
        emit_all(cs.changes, cm, ChangeKind::New);
        break;
      case history::FileStatus::Deleted:
        emit_all(cs.changes, pm, ChangeKind::Deleted);
        break;
      case history::FileStatus::Modified: {
        auto matched = match_methods(pm, cm, similarity_threshold);
        std::move(matched.begin(), matched.end(), std::back_inserter(cs.changes));
        break;
      }
    }
  }

  // Untouched files: methods carry over unchanged, no matching needed.
  for (const source::FileRecord& cf : cur.files) {
    if (status.count(cf.path)) continue;
    const source::FileRecord* pf = prev.find_file(cf.path);
    if (!pf) {
      // Not in the status list yet absent before: treat as added.
      if (cf.parsed) emit_all(cs.changes, cf.methods, ChangeKind::New);
      else cs.flagged_files.push_back(cf.path);
      continue;
    }
    if (!pf->parsed || !cf.parsed) {
      if (!pf->parsed && !cf.parsed) continue;  // nothing measurable either side
      cs.flagged_files.push_back(cf.path);
      continue;
    }
    if (pf->methods.size() == cf.methods.size()) {
      for (size_t i = 0; i < cf.methods.size(); ++i) {
        MethodChange mc;
        mc.kind = ChangeKind::Unchanged;
        mc.before = pf->methods[i];
        mc.after = cf.methods[i];
        cs.changes.push_back(std::move(mc));
      }
    } else {
      auto matched = match_methods(pf->methods, cf.methods, similarity_threshold);
      std::move(matched.begin(), matched.end(), std::back_inserter(cs.changes));
    }
  }
  for (const source::FileRecord& pf : prev.files) {
    if (status.count(pf.path) || cur.find_file(pf.path)) continue;
    // Absent after without a status entry: treat as deleted.
    if (pf.parsed) emit_all(cs.changes, pf.methods, ChangeKind::Deleted);
    else cs.flagged_files.push_back(pf.path);
  }

  std::sort(cs.flagged_files.begin(), cs.flagged_files.end());
  return cs;
}

void fill_aggregates(ChangeSet& cs, const TdByMethod& prev_td, const TdByMethod& cur_td) {
  auto lookup = [](const TdByMethod& m, const source::MethodRecord& r) -> long long {
    auto it = m.find(r.key());
    return it == m.end() ? 0 : it->second;
  };
  cs.added = {};
  cs.removed = {};
  cs.modified_td_delta = 0;
  cs.modified_ncloc_delta = 0;
  cs.modified_count = 0;
  cs.unchanged_count = 0;
  for (MethodChange& mc : cs.changes) {
    mc.td_before = mc.before ? lookup(prev_td, *mc.before) : 0;
    mc.td_after = mc.after ? lookup(cur_td, *mc.after) : 0;
    switch (mc.kind) {
      case ChangeKind::New:
        cs.added.td += mc.td_after;
        cs.added.ncloc += mc.after->ncloc;
        cs.added.count += 1;
        break;
      case ChangeKind::Deleted:
        cs.removed.td += mc.td_before;
        cs.removed.ncloc += mc.before->ncloc;
        cs.removed.count += 1;
        break;
      case ChangeKind::Modified:
        cs.modified_td_delta += mc.td_after - mc.td_before;
        cs.modified_ncloc_delta += mc.after->ncloc - mc.before->ncloc;
        cs.modified_count += 1;
        break;
      case ChangeKind::Unchanged:
        cs.unchanged_count += 1;
        break;
    }
  }
}

}  // namespace tddiff::changes
