#include "tddiff/cache.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <sys/stat.h>

#include "json.hpp"

namespace tddiff::pipeline {

using nlohmann::json;

namespace {

json fraction(const Rational& r) { return to_fraction_string(r); }

Rational fraction_from(const json& j, const std::string& what) {
  if (!j.is_string()) throw CacheError("expected fraction string for " + what);
  auto r = parse_fraction(j.get<std::string>());
  if (!r) throw CacheError("bad fraction for " + what + ": " + j.get<std::string>());
  return *r;
}

Direction direction_from(const json& j, const std::string& what) {
  if (!j.is_string()) throw CacheError("expected direction string for " + what);
  auto d = direction_from_string(j.get<std::string>());
  if (!d) throw CacheError("bad direction for " + what + ": " + j.get<std::string>());
  return *d;
}

template <typename T>
T require(const json& j, const char* key) {
  if (!j.contains(key)) throw CacheError(std::string("missing cache field ") + key);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw CacheError(std::string("bad cache field ") + key);
  }
}

}  // namespace

std::string to_json_line(const CacheRecord& r) {
  json j;
  j["revision"] = r.revision;
  j["prev_revision"] = r.prev_revision;
  j["config"] = r.config;
  j["td_minutes"] = r.td_minutes;
  j["ncloc"] = r.ncloc;
  j["has_transition"] = r.has_transition;
  j["aggregates"] = {
      {"new_td", r.aggregates.new_td},
      {"new_ncloc", r.aggregates.new_ncloc},
      {"new_count", r.aggregates.new_count},
      {"deleted_td", r.aggregates.deleted_td},
      {"deleted_ncloc", r.aggregates.deleted_ncloc},
      {"deleted_count", r.aggregates.deleted_count},
      {"modified_td_delta", r.aggregates.modified_td_delta},
      {"modified_ncloc_delta", r.aggregates.modified_ncloc_delta},
      {"modified_count", r.aggregates.modified_count},
  };
  j["unchanged_count"] = r.unchanged_count;
  j["delta"] = {
      {"degenerate", r.delta.degenerate},
      {"degenerate_reason", r.delta.degenerate_reason},
      {"contribution_new", fraction(r.delta.contribution_new)},
      {"contribution_deleted", fraction(r.delta.contribution_deleted)},
      {"contribution_modified", fraction(r.delta.contribution_modified)},
      {"system_delta", fraction(r.delta.system_delta)},
      {"residual", fraction(r.delta.residual)},
      {"dir_new", to_string(r.delta.dir_new)},
      {"dir_deleted", to_string(r.delta.dir_deleted)},
      {"dir_modified", to_string(r.delta.dir_modified)},
      {"dir_system", to_string(r.delta.dir_system)},
  };
  j["ignored_issue_count"] = r.ignored_issue_count;
  j["ignored_issue_minutes"] = r.ignored_issue_minutes;
  j["parse_failures"] = r.parse_failures;
  j["flagged_files"] = r.flagged_files;
  json samples = json::array();
  for (const NewCodeSampleRecord& s : r.new_code_samples) {
    samples.push_back({
        {"host", s.host},
        {"host_existed", s.host_existed},
        {"td", s.td},
        {"ncloc", s.ncloc},
        {"baseline", fraction(s.baseline)},
        {"diff", fraction(s.diff)},
    });
  }
  j["new_code_samples"] = std::move(samples);
  return j.dump();
}

CacheRecord record_from_json_line(const std::string& line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw CacheError("cache line is not a JSON object");
  CacheRecord r;
  r.revision = require<std::string>(j, "revision");
  r.prev_revision = require<std::string>(j, "prev_revision");
  r.config = require<std::string>(j, "config");
  r.td_minutes = require<long long>(j, "td_minutes");
  r.ncloc = require<long long>(j, "ncloc");
  r.has_transition = require<bool>(j, "has_transition");
  if (!j.contains("aggregates") || !j["aggregates"].is_object())
    throw CacheError("missing cache field aggregates");
  const json& a = j["aggregates"];
  r.aggregates.new_td = require<long long>(a, "new_td");
  r.aggregates.new_ncloc = require<long long>(a, "new_ncloc");
  r.aggregates.new_count = require<long long>(a, "new_count");
  r.aggregates.deleted_td = require<long long>(a, "deleted_td");
  r.aggregates.deleted_ncloc = require<long long>(a, "deleted_ncloc");
  r.aggregates.deleted_count = require<long long>(a, "deleted_count");
  r.aggregates.modified_td_delta = require<long long>(a, "modified_td_delta");
  r.aggregates.modified_ncloc_delta = require<long long>(a, "modified_ncloc_delta");
  r.aggregates.modified_count = require<long long>(a, "modified_count");
  r.unchanged_count = require<long long>(j, "unchanged_count");
  if (!j.contains("delta") || !j["delta"].is_object())
    throw CacheError("missing cache field delta");
  const json& d = j["delta"];
  r.delta.degenerate = require<bool>(d, "degenerate");
  r.delta.degenerate_reason = require<std::string>(d, "degenerate_reason");
  r.delta.contribution_new = fraction_from(d.at("contribution_new"), "contribution_new");
  r.delta.contribution_deleted =
      fraction_from(d.at("contribution_deleted"), "contribution_deleted");
  r.delta.contribution_modified =
      fraction_from(d.at("contribution_modified"), "contribution_modified");
  r.delta.system_delta = fraction_from(d.at("system_delta"), "system_delta");
  r.delta.residual = fraction_from(d.at("residual"), "residual");
  r.delta.dir_new = direction_from(d.at("dir_new"), "dir_new");
  r.delta.dir_deleted = direction_from(d.at("dir_deleted"), "dir_deleted");
  r.delta.dir_modified = direction_from(d.at("dir_modified"), "dir_modified");
  r.delta.dir_system = direction_from(d.at("dir_system"), "dir_system");
  r.ignored_issue_count = require<long long>(j, "ignored_issue_count");
  r.ignored_issue_minutes = require<long long>(j, "ignored_issue_minutes");
  r.parse_failures = require<std::vector<std::string>>(j, "parse_failures");
  r.flagged_files = require<std::vector<std::string>>(j, "flagged_files");
  if (!j.contains("new_code_samples") || !j["new_code_samples"].is_array())
    throw CacheError("missing cache field new_code_samples");
  for (const json& s : j["new_code_samples"]) {
    NewCodeSampleRecord rec;
    rec.host = require<std::string>(s, "host");
    rec.host_existed = require<bool>(s, "host_existed");
    rec.td = require<long long>(s, "td");
    rec.ncloc = require<long long>(s, "ncloc");
    rec.baseline = fraction_from(s.at("baseline"), "baseline");
    rec.diff = fraction_from(s.at("diff"), "diff");
    r.new_code_samples.push_back(std::move(rec));
  }
  return r;
}

const CacheRecord* Cache::find(const std::string& revision) const {
  for (const CacheRecord& r : records)
    if (r.revision == revision) return &r;
  return nullptr;
}

std::string Cache::to_jsonl() const {
  std::string out;
  for (const CacheRecord& r : records) {
    out += to_json_line(r);
    out += '\n';
  }
  return out;
}

Cache Cache::from_jsonl(const std::string& text) {
  Cache cache;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      cache.records.push_back(record_from_json_line(line));
    } catch (const CacheError& e) {
      throw CacheError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cache;
}

Cache Cache::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    struct stat st{};
    if (stat(path.c_str(), &st) != 0) return Cache{};  // absent: start fresh
    throw CacheError("cannot read cache file: " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return from_jsonl(ss.str());
  } catch (const CacheError& e) {
    throw CacheError(path + ": " + e.what());
  }
}

void Cache::save_file(const std::string& path) const {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CacheError("cannot write cache file: " + tmp);
    out << to_jsonl();
    if (!out.flush()) throw CacheError("failed writing cache file: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw CacheError("failed replacing cache file: " + path);
}

}  // namespace tddiff::pipeline
