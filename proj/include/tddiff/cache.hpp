// Persistent per-revision analysis records (JSON lines, one per revision).
// Exact rationals travel as "numerator/denominator" strings so a reload
// replays statistics bit-for-bit without re-reading the repository.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "tddiff/decomposition.hpp"
#include "tddiff/rational.hpp"

namespace tddiff::pipeline {

class CacheError : public std::runtime_error {
 public:
  explicit CacheError(const std::string& what) : std::runtime_error(what) {}
};

struct NewCodeSampleRecord {
  std::string host;  // "file#Class"
  bool host_existed = false;
  long long td = 0;
  long long ncloc = 0;
  Rational baseline;  // host class density, or system density when new
  Rational diff;      // td/ncloc - baseline
};

struct CacheRecord {
  std::string revision;
  std::string prev_revision;  // empty for the series baseline
  std::string config;         // analysis configuration digest
  long long td_minutes = 0;
  long long ncloc = 0;
  bool has_transition = false;
  decomp::ChangeAggregates aggregates;
  long long unchanged_count = 0;
  decomp::RevisionDelta delta;
  long long ignored_issue_count = 0;
  long long ignored_issue_minutes = 0;
  std::vector<std::string> parse_failures;
  std::vector<std::string> flagged_files;
  std::vector<NewCodeSampleRecord> new_code_samples;
};

std::string to_json_line(const CacheRecord& record);
CacheRecord record_from_json_line(const std::string& line);

struct Cache {
  std::vector<CacheRecord> records;  // series order, baseline first

  const CacheRecord* find(const std::string& revision) const;
  std::string to_jsonl() const;
  static Cache from_jsonl(const std::string& text);
  // Missing file loads as an empty cache; unreadable or corrupt content is
  // a CacheError.
  static Cache load_file(const std::string& path);
  void save_file(const std::string& path) const;  // atomic replace
};

}  // namespace tddiff::pipeline
