#include "tddiff/td_engine.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <regex>
#include <set>
#include <sstream>

#include "json.hpp"

namespace tddiff::td {

using nlohmann::json;

const char* to_string(Severity s) {
  switch (s) {
    case Severity::Info: return "info";
    case Severity::Minor: return "minor";
    case Severity::Major: return "major";
    case Severity::Critical: return "critical";
    case Severity::Blocker: return "blocker";
  }
  return "major";
}

std::optional<Severity> severity_from_string(const std::string& s) {
  std::string lower;
  for (char c : s) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "info") return Severity::Info;
  if (lower == "minor") return Severity::Minor;
  if (lower == "major") return Severity::Major;
  if (lower == "critical") return Severity::Critical;
  if (lower == "blocker") return Severity::Blocker;
  return std::nullopt;
}

RuleCatalog RuleCatalog::builtin() {
  RuleCatalog c;
  c.rules = {
      {"catch-generic", "Throwable or Error caught", 0, 20, false, Severity::Major, true},
      {"empty-catch", "catch block with empty body", 0, 5, false, Severity::Minor, true},
      {"long-method", "method NCLOC above limit", 50, 20, false, Severity::Major, true},
      {"too-many-params", "parameter count above limit", 7, 20, false, Severity::Major, true},
      {"deep-nesting", "brace depth above limit inside a method", 4, 15, false,
       Severity::Major, true},
      {"high-complexity", "decision points above limit, charged per excess", 10, 5, true,
       Severity::Critical, true},
  };
  return c;
}

const Rule* RuleCatalog::find(const std::string& id) const {
  for (const Rule& r : rules)
    if (r.id == id) return &r;
  return nullptr;
}

void RuleCatalog::apply_config_text(const std::string& json_text) {
  json root = json::parse(json_text, nullptr, false);
  if (root.is_discarded() || !root.is_object())
    throw ConfigError("rules config must be a JSON object");
  for (auto it = root.begin(); it != root.end(); ++it) {
    Rule* rule = nullptr;
    for (Rule& r : rules)
      if (r.id == it.key()) rule = &r;
    if (!rule) throw ConfigError("unknown rule id in config: " + it.key());
    const json& body = it.value();
    if (!body.is_object())
      throw ConfigError("rule config for " + it.key() + " must be an object");
    for (auto f = body.begin(); f != body.end(); ++f) {
      const std::string& field = f.key();
      const json& v = f.value();
      if (field == "threshold") {
        if (!v.is_number_integer() || v.get<long long>() < 0)
          throw ConfigError(it.key() + ".threshold must be a non-negative integer");
        rule->threshold = v.get<long long>();
      } else if (field == "minutes") {
        if (!v.is_number_integer() || v.get<long long>() < 1)
          throw ConfigError(it.key() + ".minutes must be a positive integer");
        rule->minutes = v.get<long long>();
      } else if (field == "severity") {
        if (!v.is_string()) throw ConfigError(it.key() + ".severity must be a string");
        auto sev = severity_from_string(v.get<std::string>());
        if (!sev) throw ConfigError(it.key() + ".severity unknown: " + v.get<std::string>());
        rule->severity = *sev;
      } else if (field == "enabled") {
        if (!v.is_boolean()) throw ConfigError(it.key() + ".enabled must be a boolean");
        rule->enabled = v.get<bool>();
      } else {
        throw ConfigError("unknown field " + field + " for rule " + it.key());
      }
    }
  }
}

void RuleCatalog::apply_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read rules config: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  apply_config_text(ss.str());
}

std::string RuleCatalog::digest_text() const {
  std::string out;
  for (const Rule& r : rules) {
    out += r.id + ":" + std::to_string(r.threshold) + ":" + std::to_string(r.minutes) +
           ":" + (r.per_unit ? "1" : "0") + ":" + to_string(r.severity) + ":" +
           (r.enabled ? "1" : "0") + ";";
  }
  return out;
}

namespace {

using source::MethodRecord;
using source::Token;

struct CatchSite {
  size_t catch_idx;
  size_t close_paren;  // index of the matching ')'
};

std::vector<CatchSite> find_catches(const std::vector<Token>& body) {
  std::vector<CatchSite> out;
  for (size_t i = 0; i + 1 < body.size(); ++i) {
    if (body[i].text != "catch" || body[i + 1].text != "(") continue;
    int depth = 1;
    size_t j = i + 2;
    while (j < body.size() && depth > 0) {
      if (body[j].text == "(") ++depth;
      else if (body[j].text == ")") --depth;
      ++j;
    }
    if (depth == 0) out.push_back({i, j - 1});
  }
  return out;
}

void run_rule(const Rule& rule, const MethodRecord& m, std::vector<TdIssue>& sink) {
  auto emit = [&](int line, long long minutes) {
    TdIssue issue;
    issue.rule_id = rule.id;
    issue.file_path = m.file_path;
    issue.line = line;
    issue.effort_minutes = minutes;
    issue.severity = rule.severity;
    issue.origin = TdIssue::Builtin;
    sink.push_back(std::move(issue));
  };

  if (rule.id == "catch-generic") {
    for (const CatchSite& site : find_catches(m.body_tokens)) {
      for (size_t k = site.catch_idx + 2; k < site.close_paren; ++k) {
        const std::string& t = m.body_tokens[k].text;
        if (t == "Throwable" || t == "Error") {
          emit(m.body_tokens[site.catch_idx].line, rule.minutes);
          break;
        }
      }
    }
  } else if (rule.id == "empty-catch") {
    for (const CatchSite& site : find_catches(m.body_tokens)) {
      size_t j = site.close_paren;
      if (j + 2 < m.body_tokens.size() && m.body_tokens[j + 1].text == "{" &&
          m.body_tokens[j + 2].text == "}")
        emit(m.body_tokens[site.catch_idx].line, rule.minutes);
    }
  } else if (rule.id == "long-method") {
    if (m.ncloc > rule.threshold) emit(m.start_line, rule.minutes);
  } else if (rule.id == "too-many-params") {
    if (static_cast<long long>(m.param_types.size()) > rule.threshold)
      emit(m.start_line, rule.minutes);
  } else if (rule.id == "deep-nesting") {
    long long depth = 0;
    for (const Token& t : m.body_tokens) {
      if (t.text == "{") {
        if (++depth > rule.threshold) {
          emit(t.line, rule.minutes);
          break;
        }
      } else if (t.text == "}") {
        --depth;
      }
    }
  } else if (rule.id == "high-complexity") {
    static const std::set<std::string> kDecision = {"if", "for",   "while", "do", "case",
                                                    "catch", "?", "&&",    "||"};
    long long count = 0;
    for (const Token& t : m.body_tokens)
      if (kDecision.count(t.text)) ++count;
    if (count > rule.threshold) emit(m.start_line, rule.minutes * (count - rule.threshold));
  }
}

}  // namespace

std::vector<TdIssue> analyze_snapshot(const source::Snapshot& snap,
                                      const RuleCatalog& catalog) {
  std::vector<TdIssue> issues;
  for (const source::FileRecord& f : snap.files) {
    if (!f.parsed) continue;
    for (const MethodRecord& m : f.methods)
      for (const Rule& rule : catalog.rules)
        if (rule.enabled) run_rule(rule, m, issues);
  }
  return issues;
}

std::optional<long long> parse_effort(const std::string& text) {
  static const std::regex kGrammar(R"(^(?:(\d+)h)?(?:(\d+)min)?$)");
  std::smatch m;
  if (text.empty() || !std::regex_match(text, m, kGrammar)) return std::nullopt;
  if (!m[1].matched && !m[2].matched) return std::nullopt;
  long long minutes = 0;
  try {
    if (m[1].matched) minutes += std::stoll(m[1].str()) * 60;
    if (m[2].matched) minutes += std::stoll(m[2].str());
  } catch (const std::exception&) {
    return std::nullopt;  // out of range
  }
  return minutes;
}

std::vector<TdIssue> import_issues(std::istream& in, ImportStats& stats) {
  std::vector<TdIssue> out;
  std::string line;
  long long record = 0;
  auto warn = [&](const std::string& msg) {
    ++stats.skipped_malformed;
    stats.warnings.push_back("record " + std::to_string(record) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++record;
    bool blank = line.find_first_not_of(" \t\r") == std::string::npos;
    if (blank) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      warn("not a JSON object");
      continue;
    }
    if (!j.contains("rule") || !j["rule"].is_string() || j["rule"].get<std::string>().empty()) {
      warn("missing or invalid rule");
      continue;
    }
    if (!j.contains("component") || !j["component"].is_string() ||
        j["component"].get<std::string>().empty()) {
      warn("missing or invalid component");
      continue;
    }
    if (!j.contains("type") || !j["type"].is_string()) {
      warn("missing or invalid type");
      continue;
    }
    int line_no = 0;
    if (j.contains("line")) {
      if (!j["line"].is_number_integer() || j["line"].get<long long>() < 1) {
        warn("line must be an integer >= 1");
        continue;
      }
      line_no = static_cast<int>(j["line"].get<long long>());
    }
    if (j["type"].get<std::string>() != "CODE_SMELL") {
      ++stats.skipped_type;
      stats.warnings.push_back("record " + std::to_string(record) + ": skipped type " +
                               j["type"].get<std::string>());
      continue;
    }
    if (!j.contains("effort") || !j["effort"].is_string()) {
      warn("missing effort");
      continue;
    }
    std::string effort_text = j["effort"].get<std::string>();
    auto minutes = parse_effort(effort_text);
    if (!minutes || *minutes <= 0)
      throw ImportError("record " + std::to_string(record) + ": invalid effort '" +
                        effort_text + "'");
    TdIssue issue;
    issue.rule_id = j["rule"].get<std::string>();
    issue.file_path = j["component"].get<std::string>();
    issue.line = line_no;
    issue.effort_minutes = *minutes;
    issue.severity = Severity::Major;
    issue.origin = TdIssue::Imported;
    out.push_back(std::move(issue));
    ++stats.imported;
  }
  return out;
}

Rational MethodTd::density() const {
  long long n = method && method->ncloc > 0 ? method->ncloc : 1;
  return Rational(td_minutes, n);
}

std::map<std::string, long long> AttributionResult::td_by_key() const {
  std::map<std::string, long long> out;
  for (const MethodTd& mt : methods) out[mt.method->key()] += mt.td_minutes;
  return out;
}

AttributionResult map_issues_to_methods(const std::vector<TdIssue>& issues,
                                        const source::Snapshot& snap) {
  AttributionResult result;
  std::map<std::string, std::vector<size_t>> file_methods;
  for (const source::FileRecord& f : snap.files) {
    for (const source::MethodRecord& m : f.methods) {
      file_methods[f.path].push_back(result.methods.size());
      result.methods.push_back({&m, 0});
    }
  }
  for (const TdIssue& issue : issues) {
    const size_t* chosen = nullptr;
    int best_start = -1;
    if (issue.line >= 1) {
      auto it = file_methods.find(issue.file_path);
      if (it != file_methods.end()) {
        for (const size_t& idx : it->second) {
          const source::MethodRecord& m = *result.methods[idx].method;
          if (issue.line < m.start_line || issue.line > m.end_line) continue;
          // Innermost span: nested spans share the file, the deeper one
          // starts later.
          if (m.start_line > best_start) {
            best_start = m.start_line;
            chosen = &idx;
          }
        }
      }
    }
    if (chosen) {
      result.issue_assignment.push_back(static_cast<long long>(*chosen));
      result.methods[*chosen].td_minutes += issue.effort_minutes;
      result.attributed_minutes += issue.effort_minutes;
    } else {
      result.issue_assignment.push_back(-1);
      result.ignored_count += 1;
      result.ignored_minutes += issue.effort_minutes;
    }
  }
  return result;
}

std::map<std::string, ClassTotals> class_totals(const AttributionResult& attr) {
  std::map<std::string, ClassTotals> out;
  for (const MethodTd& mt : attr.methods) {
    ClassTotals& t = out[mt.method->file_path + "#" + mt.method->enclosing_class];
    t.td += mt.td_minutes;
    t.ncloc += mt.method->ncloc;
  }
  return out;
}

}  // namespace tddiff::td
