// Commit graph reconstruction and linearization.
//
// A branch's commit DAG is reduced to a linear revision series by taking the
// longest root-to-head path (ties: smaller parent timestamp, then smaller
// commit id). The series can then be filtered so only transitions touching
// measured source files remain; filtering happens after linearization, so the
// filtered series is a subsequence of the path and consecutive entries need
// not be parent and child.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace tddiff::history {

class HistoryError : public std::runtime_error {
 public:
  explicit HistoryError(const std::string& what) : std::runtime_error(what) {}
};

struct CommitNode {
  std::string id;
  std::vector<std::string> parent_ids;  // in recorded order
  int64_t timestamp = 0;                // committer time, seconds
  // Paths changed against each parent (empty key for a root's full tree).
  std::map<std::string, std::set<std::string>> touched_by_parent;
};

struct CommitDag {
  std::map<std::string, CommitNode> nodes;
  std::string head;

  const CommitNode& node(const std::string& id) const;
};

struct RevisionSeries {
  std::vector<std::string> commits;  // oldest first, ends at head
  std::string filter_note;           // empty until filtered
};

struct FileStatus {
  enum Kind { Added, Modified, Deleted } kind = Modified;
  std::string path;
};

// Read access to a repository's object store.
class HistoryProvider {
 public:
  virtual ~HistoryProvider() = default;
  virtual std::string resolve_commit(const std::string& ref) = 0;
  // Parents and timestamp of one commit; touched paths not populated.
  virtual CommitNode commit_info(const std::string& id) = 0;
  // All commits reachable from head, with parents, timestamps and
  // per-parent touched paths.
  virtual std::vector<CommitNode> walk(const std::string& head) = 0;
  virtual std::vector<FileStatus> diff_status(const std::string& from,
                                              const std::string& to) = 0;
  virtual std::vector<std::string> list_files(const std::string& rev) = 0;
  virtual std::string read_file(const std::string& rev, const std::string& path) = 0;
};

// Shells out to the git CLI. Requires a full (non-shallow) clone.
class GitRepository : public HistoryProvider {
 public:
  explicit GitRepository(std::string repo_path);

  std::string resolve_commit(const std::string& ref) override;
  CommitNode commit_info(const std::string& id) override;
  std::vector<CommitNode> walk(const std::string& head) override;
  std::vector<FileStatus> diff_status(const std::string& from,
                                      const std::string& to) override;
  std::vector<std::string> list_files(const std::string& rev) override;
  std::string read_file(const std::string& rev, const std::string& path) override;

  const std::string& path() const { return repo_path_; }

 private:
  std::vector<std::string> git(const std::vector<std::string>& args) const;
  std::string git_raw(const std::vector<std::string>& args) const;

  std::string repo_path_;
  std::string empty_tree_;
};

CommitDag build_commit_dag(HistoryProvider& repo, const std::string& branch);

// Longest path from any root to head. Throws on cycles or unknown head.
RevisionSeries linearize_longest_path(const CommitDag& dag);

using PathPredicate = std::function<bool(const std::string&)>;

// Keeps the first entry plus every entry whose step from its series
// predecessor touched at least one accepted path.
RevisionSeries filter_source_transitions(const CommitDag& dag,
                                         const RevisionSeries& series,
                                         const PathPredicate& accept,
                                         const std::string& note);

// Case-sensitive extension match, e.g. {".java"}.
PathPredicate extension_predicate(std::vector<std::string> extensions);

}  // namespace tddiff::history
