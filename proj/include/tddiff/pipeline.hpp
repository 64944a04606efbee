// End-to-end orchestration: repository -> series -> measurements -> cache,
// plus the new-code quality gate and report/statistics rendering.
#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tddiff/cache.hpp"
#include "tddiff/change_tracker.hpp"
#include "tddiff/decomposition.hpp"
#include "tddiff/history.hpp"
#include "tddiff/stats.hpp"
#include "tddiff/td_engine.hpp"

namespace tddiff::pipeline {

class AnalysisError : public std::runtime_error {
 public:
  explicit AnalysisError(const std::string& what) : std::runtime_error(what) {}
};

struct AnalyzeOptions {
  std::string repo_path;
  std::string branch = "master";
  std::vector<std::string> source_extensions = {".java"};
  double similarity = 0.7;
  td::RuleCatalog rules = td::RuleCatalog::builtin();
  std::string issue_dir;  // per-revision dumps <dir>/<rev>.jsonl; empty = built-in rules
  int jobs = 1;
};

struct AnalyzeSummary {
  long long dag_commits = 0;
  long long series_length = 0;   // linearized, before filtering
  long long retained = 0;        // after source filtering
  long long analyzed = 0;        // measured this run
  long long reused = 0;          // served from cache
  long long degenerate = 0;
  long long parse_failures = 0;
  long long flagged_files = 0;
  long long ignored_issue_count = 0;
  std::vector<std::string> warnings;
};

std::string config_digest(const AnalyzeOptions& options);

// Loads what it can from `cache`, computes the rest, and rewrites `cache`
// to hold exactly the filtered series in order.
AnalyzeSummary run_analyze(const AnalyzeOptions& options, history::HistoryProvider& repo,
                           Cache& cache);

// Convenience: opens the repo, loads/saves cache_path when non-empty.
AnalyzeSummary run_analyze(const AnalyzeOptions& options, const std::string& cache_path,
                           Cache& cache);

// Measurement helpers shared with the gate and tests.
source::Snapshot load_snapshot(history::HistoryProvider& repo, const std::string& rev,
                               const history::PathPredicate& accept, int jobs);
std::vector<td::TdIssue> issues_for(const source::Snapshot& snap,
                                    const AnalyzeOptions& options,
                                    std::vector<std::string>& warnings);

std::vector<stats::TransitionFacts> transition_facts(const Cache& cache);
std::vector<stats::NewCodeSample> new_code_samples(const Cache& cache);

enum class GatePolicy { Cleaner, ZeroDefect };

const char* to_string(GatePolicy p);

struct GateOptions {
  std::string repo_path;
  std::string revision = "HEAD";
  GatePolicy policy = GatePolicy::Cleaner;
  td::Severity severity_floor = td::Severity::Critical;
  std::vector<std::string> source_extensions = {".java"};
  double similarity = 0.7;
  td::RuleCatalog rules = td::RuleCatalog::builtin();
  std::string issue_dir;
  int jobs = 1;
};

struct GateIssueLine {
  std::string rule_id;
  td::Severity severity = td::Severity::Major;
  std::string file;
  int line = 0;
  long long minutes = 0;
  std::string method;  // class.signature
};

struct GateReport {
  GatePolicy policy = GatePolicy::Cleaner;
  std::string revision;
  std::string parent;
  bool pass = false;
  bool no_new_code = false;
  long long new_methods = 0;
  long long new_td = 0;
  long long new_ncloc = 0;
  Rational baseline_density;
  Rational new_density;       // valid when new_ncloc > 0
  Rational contribution_new;  // what-if against the parent
  std::vector<GateIssueLine> blocking;       // severity at or above the floor
  std::vector<GateIssueLine> informational;  // below the floor
  std::string verdict_reason;
};

// Throws AnalysisError for a parentless revision or an empty baseline.
GateReport run_gate(const GateOptions& options, history::HistoryProvider& repo);
GateReport run_gate(const GateOptions& options);

enum class ReportFormat { Csv, Jsonl };

// Writes summary, transitions, contingency, association and distributions
// files into out_dir with the format's extension.
void write_reports(const Cache& cache, const std::string& out_dir, ReportFormat format);

std::string render_stats_text(const Cache& cache, bool with_cramers_v, bool welch);
std::string render_gate_text(const GateReport& report);
std::string render_summary_text(const AnalyzeSummary& summary);

}  // namespace tddiff::pipeline
