// Method-level change classification between two snapshots.
//
// Identity: (file path, enclosing class chain, name + parameter types).
// Same identity with equal body fingerprint is Unchanged, with differing
// fingerprint Modified. Leftovers go through a rename fallback: token LCS
// similarity 2*LCS/(|a|+|b|) at or above the threshold pairs a disappeared
// and an appeared method as Modified; greedy best-first, ties broken by
// (previous index, current index). The rest are Deleted / New.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tddiff/history.hpp"
#include "tddiff/source_model.hpp"

namespace tddiff::changes {

enum class ChangeKind { New, Deleted, Modified, Unchanged };

const char* to_string(ChangeKind k);

struct MethodChange {
  ChangeKind kind = ChangeKind::Unchanged;
  std::optional<source::MethodRecord> before;
  std::optional<source::MethodRecord> after;
  long long td_before = 0;  // attributed minutes, filled by fill_aggregates
  long long td_after = 0;
};

struct KindTotals {
  long long td = 0;
  long long ncloc = 0;
  long long count = 0;
};

struct ChangeSet {
  std::string prev_revision;
  std::string cur_revision;
  std::vector<MethodChange> changes;
  std::vector<std::string> flagged_files;  // excluded: unparsable side

  // Aggregates over changes; valid after fill_aggregates.
  KindTotals added;              // New methods, after-side td and ncloc
  KindTotals removed;            // Deleted methods, before-side td and ncloc
  long long modified_td_delta = 0;
  long long modified_ncloc_delta = 0;
  long long modified_count = 0;
  long long unchanged_count = 0;
};

double token_similarity(const std::vector<source::Token>& a,
                        const std::vector<source::Token>& b);

std::vector<MethodChange> match_methods(const std::vector<source::MethodRecord>& prev,
                                        const std::vector<source::MethodRecord>& cur,
                                        double similarity_threshold);

// Pairs files per the status list; untouched files contribute their methods
// as Unchanged without matching. Files unparsable on either side of a
// modification are excluded entirely and listed in flagged_files.
ChangeSet classify(const source::Snapshot& prev, const source::Snapshot& cur,
                   const std::vector<history::FileStatus>& touched,
                   double similarity_threshold);

using TdByMethod = std::map<std::string, long long>;  // MethodRecord::key()

void fill_aggregates(ChangeSet& cs, const TdByMethod& prev_td, const TdByMethod& cur_td);

}  // namespace tddiff::changes
