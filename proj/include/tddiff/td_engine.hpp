// Technical-debt issue detection, import and method attribution.
//
// Debt is expressed as remediation minutes. Built-in rules run over method
// token streams; alternatively an external analyzer's findings can be
// imported from a line-delimited JSON dump. Issues are attributed to the
// innermost method span containing their line; the leftovers are counted and
// reported but never silently dropped.
#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tddiff/rational.hpp"
#include "tddiff/source_model.hpp"

namespace tddiff::td {

enum class Severity { Info, Minor, Major, Critical, Blocker };

const char* to_string(Severity s);
std::optional<Severity> severity_from_string(const std::string& s);

struct Rule {
  std::string id;
  std::string description;
  long long threshold = 0;   // meaning depends on the rule
  long long minutes = 0;     // fixed effort, or per excess unit when per_unit
  bool per_unit = false;
  Severity severity = Severity::Major;
  bool enabled = true;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct RuleCatalog {
  std::vector<Rule> rules;

  static RuleCatalog builtin();
  // JSON object: rule id -> {threshold?, minutes?, severity?, enabled?}.
  // Unknown ids or fields are startup errors.
  void apply_config_text(const std::string& json_text);
  void apply_config_file(const std::string& path);
  const Rule* find(const std::string& id) const;
  std::string digest_text() const;  // canonical form for cache keying
};

struct TdIssue {
  std::string rule_id;
  std::string file_path;
  int line = 0;  // 0 = file level
  long long effort_minutes = 0;
  Severity severity = Severity::Major;
  enum Origin { Builtin, Imported } origin = Builtin;
};

std::vector<TdIssue> analyze_snapshot(const source::Snapshot& snap,
                                      const RuleCatalog& catalog);

class ImportError : public std::runtime_error {
 public:
  explicit ImportError(const std::string& what) : std::runtime_error(what) {}
};

struct ImportStats {
  long long imported = 0;
  long long skipped_malformed = 0;  // structurally bad records, warned
  long long skipped_type = 0;       // non-code-smell types, warned
  std::vector<std::string> warnings;
};

// Line-delimited JSON, one finding per line:
//   {"rule": id, "component": path, "line": n?, "effort": "1h30min",
//    "type": "CODE_SMELL"}
// Malformed records are skipped with a warning; a present-but-invalid
// effort is a hard ImportError naming the record.
std::vector<TdIssue> import_issues(std::istream& in, ImportStats& stats);

// "1h30min" -> 90. Grammar: (<digits>h)?(<digits>min)?, nonempty.
std::optional<long long> parse_effort(const std::string& text);

struct MethodTd {
  const source::MethodRecord* method = nullptr;
  long long td_minutes = 0;
  Rational density() const;  // minutes per NCLOC line
};

struct AttributionResult {
  std::vector<MethodTd> methods;  // one per method in snapshot order
  // Per input issue: index into methods, or -1 when unattributable.
  std::vector<long long> issue_assignment;
  long long attributed_minutes = 0;
  long long ignored_count = 0;    // file-level or outside every span
  long long ignored_minutes = 0;

  long long total_td_minutes() const { return attributed_minutes; }
  std::map<std::string, long long> td_by_key() const;
};

AttributionResult map_issues_to_methods(const std::vector<TdIssue>& issues,
                                        const source::Snapshot& snap);

struct ClassTotals {
  long long td = 0;
  long long ncloc = 0;
};

// Method-based totals per host class, keyed "file#class". Classes without
// methods have no entry.
std::map<std::string, ClassTotals> class_totals(const AttributionResult& attr);

}  // namespace tddiff::td
