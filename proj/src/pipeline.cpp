#include "tddiff/pipeline.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace tddiff::pipeline {

using nlohmann::json;

namespace {

uint64_t fnv1a(const std::string& s, uint64_t h = 14695981039346656037ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string number_text(double v) { return json(v).dump(); }

}  // namespace

std::string config_digest(const AnalyzeOptions& options) {
  std::string text = options.rules.digest_text();
  text += "|sim=" + number_text(options.similarity);
  text += "|ext=";
  for (const std::string& e : options.source_extensions) text += e + ",";
  text += options.issue_dir.empty() ? "|issues=builtin" : "|issues=import";
  return hex64(fnv1a(text));
}

source::Snapshot load_snapshot(history::HistoryProvider& repo, const std::string& rev,
                               const history::PathPredicate& accept, int jobs) {
  source::Snapshot snap;
  snap.revision = rev;
  std::vector<std::string> paths;
  for (std::string& p : repo.list_files(rev))
    if (accept(p)) paths.push_back(std::move(p));
  std::sort(paths.begin(), paths.end());

  snap.files.resize(paths.size());
  auto work = [&](size_t i) {
    std::string text = repo.read_file(rev, paths[i]);
    snap.files[i] = source::measure_file(text, paths[i]);
  };
  if (jobs <= 1 || paths.size() < 2) {
    for (size_t i = 0; i < paths.size(); ++i) work(i);
  } else {
    std::atomic<size_t> next{0};
    size_t workers = std::min<size_t>(static_cast<size_t>(jobs), paths.size());
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        while (true) {
          size_t i = next.fetch_add(1);
          if (i >= snap.files.size()) return;
          work(i);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }
  for (const source::FileRecord& f : snap.files)
    if (!f.parsed) snap.parse_failures.push_back(f.path);
  return snap;
}

std::vector<td::TdIssue> issues_for(const source::Snapshot& snap,
                                    const AnalyzeOptions& options,
                                    std::vector<std::string>& warnings) {
  if (options.issue_dir.empty()) return td::analyze_snapshot(snap, options.rules);
  std::string path = options.issue_dir + "/" + snap.revision + ".jsonl";
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    warnings.push_back("no issue dump for revision " + snap.revision + " (" + path +
                       "), assuming no findings");
    return {};
  }
  td::ImportStats stats;
  std::vector<td::TdIssue> issues = td::import_issues(in, stats);
  for (const std::string& w : stats.warnings)
    warnings.push_back(path + ": " + w);
  return issues;
}

namespace {

struct Measured {
  source::Snapshot snap;
  td::AttributionResult attr;  // method pointers into snap (stable under move)
  std::vector<td::TdIssue> issues;
  decomp::RevisionMeasurement measurement() const {
    return {snap.revision, attr.attributed_minutes, snap.ncloc_total()};
  }
};

std::unique_ptr<Measured> measure_revision(history::HistoryProvider& repo,
                                           const std::string& rev,
                                           const history::PathPredicate& accept,
                                           const AnalyzeOptions& options,
                                           std::vector<std::string>& warnings) {
  auto m = std::make_unique<Measured>();
  m->snap = load_snapshot(repo, rev, accept, options.jobs);
  m->issues = issues_for(m->snap, options, warnings);
  m->attr = td::map_issues_to_methods(m->issues, m->snap);
  return m;
}

std::vector<NewCodeSampleRecord> collect_samples(const changes::ChangeSet& cs,
                                                 const Measured& prev,
                                                 const decomp::RevisionMeasurement& pm) {
  std::map<std::string, std::pair<long long, long long>> groups;  // host -> td, ncloc
  for (const changes::MethodChange& mc : cs.changes) {
    if (mc.kind != changes::ChangeKind::New) continue;
    std::string host = mc.after->file_path + "#" + mc.after->enclosing_class;
    groups[host].first += mc.td_after;
    groups[host].second += mc.after->ncloc;
  }
  std::vector<NewCodeSampleRecord> out;
  if (groups.empty() || pm.ncloc <= 0) return out;
  auto totals = td::class_totals(prev.attr);
  Rational system_density = pm.td_density();
  for (const auto& [host, tdloc] : groups) {
    if (tdloc.second <= 0) continue;
    NewCodeSampleRecord rec;
    rec.host = host;
    auto it = totals.find(host);
    rec.host_existed = it != totals.end() && it->second.ncloc > 0;
    rec.baseline = rec.host_existed ? Rational(it->second.td, it->second.ncloc)
                                    : system_density;
    rec.td = tdloc.first;
    rec.ncloc = tdloc.second;
    rec.diff = Rational(rec.td, rec.ncloc) - rec.baseline;
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace

AnalyzeSummary run_analyze(const AnalyzeOptions& options, history::HistoryProvider& repo,
                           Cache& cache) {
  AnalyzeSummary sum;
  history::PathPredicate accept = history::extension_predicate(options.source_extensions);
  history::CommitDag dag = history::build_commit_dag(repo, options.branch);
  sum.dag_commits = static_cast<long long>(dag.nodes.size());
  history::RevisionSeries series = history::linearize_longest_path(dag);
  sum.series_length = static_cast<long long>(series.commits.size());
  std::string note = "source extensions:";
  for (const std::string& e : options.source_extensions) note += " " + e;
  history::RevisionSeries kept =
      history::filter_source_transitions(dag, series, accept, note);
  sum.retained = static_cast<long long>(kept.commits.size());

  const std::string digest = config_digest(options);
  std::vector<CacheRecord> out_records;
  std::unique_ptr<Measured> prev;  // measured previous kept revision, when computed

  for (size_t i = 0; i < kept.commits.size(); ++i) {
    const std::string& rev = kept.commits[i];
    const std::string expected_prev = i == 0 ? std::string() : kept.commits[i - 1];
    const CacheRecord* hit = cache.find(rev);
    if (hit && hit->prev_revision == expected_prev && hit->config == digest) {
      out_records.push_back(*hit);
      ++sum.reused;
      prev.reset();
      continue;
    }

    std::unique_ptr<Measured> cur =
        measure_revision(repo, rev, accept, options, sum.warnings);
    ++sum.analyzed;

    CacheRecord rec;
    rec.revision = rev;
    rec.prev_revision = expected_prev;
    rec.config = digest;
    rec.td_minutes = cur->attr.attributed_minutes;
    rec.ncloc = cur->snap.ncloc_total();
    rec.ignored_issue_count = cur->attr.ignored_count;
    rec.ignored_issue_minutes = cur->attr.ignored_minutes;
    rec.parse_failures = cur->snap.parse_failures;

    if (i > 0) {
      if (!prev) {
        prev = measure_revision(repo, kept.commits[i - 1], accept, options, sum.warnings);
        ++sum.analyzed;
      }
      rec.has_transition = true;
      std::vector<history::FileStatus> statuses;
      for (history::FileStatus& fs : repo.diff_status(kept.commits[i - 1], rev))
        if (accept(fs.path)) statuses.push_back(std::move(fs));
      changes::ChangeSet cs =
          changes::classify(prev->snap, cur->snap, statuses, options.similarity);
      changes::fill_aggregates(cs, prev->attr.td_by_key(), cur->attr.td_by_key());
      rec.flagged_files = cs.flagged_files;
      rec.unchanged_count = cs.unchanged_count;
      rec.aggregates = decomp::ChangeAggregates::from_changeset(cs);
      decomp::RevisionMeasurement pm = prev->measurement();
      decomp::RevisionMeasurement cm{rev, rec.td_minutes, rec.ncloc};
      rec.delta = decomp::revision_delta_checked(pm, cm, cs);
      rec.new_code_samples = collect_samples(cs, *prev, pm);
    }
    out_records.push_back(std::move(rec));
    prev = std::move(cur);
  }

  cache.records = std::move(out_records);
  for (const CacheRecord& r : cache.records) {
    if (r.has_transition && r.delta.degenerate) ++sum.degenerate;
    sum.parse_failures += static_cast<long long>(r.parse_failures.size());
    sum.flagged_files += static_cast<long long>(r.flagged_files.size());
    sum.ignored_issue_count += r.ignored_issue_count;
  }
  return sum;
}

AnalyzeSummary run_analyze(const AnalyzeOptions& options, const std::string& cache_path,
                           Cache& cache) {
  history::GitRepository repo(options.repo_path);
  if (!cache_path.empty()) cache = Cache::load_file(cache_path);
  AnalyzeSummary sum = run_analyze(options, repo, cache);
  if (!cache_path.empty()) cache.save_file(cache_path);
  return sum;
}

std::vector<stats::TransitionFacts> transition_facts(const Cache& cache) {
  std::map<std::string, std::pair<long long, long long>> measured;
  for (const CacheRecord& r : cache.records)
    measured[r.revision] = {r.td_minutes, r.ncloc};
  std::vector<stats::TransitionFacts> facts;
  for (const CacheRecord& r : cache.records) {
    if (!r.has_transition) continue;
    stats::TransitionFacts f;
    f.dir_system = r.delta.dir_system;
    f.dir_new = r.delta.dir_new;
    f.dir_deleted = r.delta.dir_deleted;
    f.dir_modified = r.delta.dir_modified;
    f.degenerate = r.delta.degenerate;
    f.has_new = r.aggregates.new_count > 0;
    f.has_deleted = r.aggregates.deleted_count > 0;
    f.has_modified = r.aggregates.modified_count > 0;
    f.new_td = r.aggregates.new_td;
    f.new_ncloc = r.aggregates.new_ncloc;
    auto it = measured.find(r.prev_revision);
    if (it == measured.end() || it->second.second <= 0)
      f.degenerate = true;
    else
      f.prev_density = Rational(it->second.first, it->second.second);
    facts.push_back(std::move(f));
  }
  return facts;
}

std::vector<stats::NewCodeSample> new_code_samples(const Cache& cache) {
  std::vector<stats::NewCodeSample> out;
  for (const CacheRecord& r : cache.records)
    for (const NewCodeSampleRecord& s : r.new_code_samples)
      out.push_back({s.host_existed, s.diff});
  return out;
}

const char* to_string(GatePolicy p) {
  return p == GatePolicy::Cleaner ? "cleaner" : "zero-defect";
}

GateReport run_gate(const GateOptions& options, history::HistoryProvider& repo) {
  GateReport rep;
  rep.policy = options.policy;
  history::PathPredicate accept = history::extension_predicate(options.source_extensions);
  std::string rev = repo.resolve_commit(options.revision);
  rep.revision = rev;
  history::CommitNode info = repo.commit_info(rev);
  if (info.parent_ids.empty())
    throw AnalysisError("revision " + rev + " has no parent to gate against");
  rep.parent = info.parent_ids.front();

  AnalyzeOptions ao;
  ao.repo_path = options.repo_path;
  ao.source_extensions = options.source_extensions;
  ao.similarity = options.similarity;
  ao.rules = options.rules;
  ao.issue_dir = options.issue_dir;
  ao.jobs = options.jobs;
  std::vector<std::string> warnings;
  std::unique_ptr<Measured> base = measure_revision(repo, rep.parent, accept, ao, warnings);
  std::unique_ptr<Measured> cur = measure_revision(repo, rev, accept, ao, warnings);

  decomp::RevisionMeasurement pm = base->measurement();
  if (pm.ncloc <= 0)
    throw AnalysisError("baseline revision " + rep.parent + " has no measured code");
  rep.baseline_density = pm.td_density();

  std::vector<history::FileStatus> statuses;
  for (history::FileStatus& fs : repo.diff_status(rep.parent, rev))
    if (accept(fs.path)) statuses.push_back(std::move(fs));
  changes::ChangeSet cs = changes::classify(base->snap, cur->snap, statuses, options.similarity);
  changes::fill_aggregates(cs, base->attr.td_by_key(), cur->attr.td_by_key());

  rep.new_methods = cs.added.count;
  rep.new_td = cs.added.td;
  rep.new_ncloc = cs.added.ncloc;
  if (rep.new_methods == 0) {
    rep.no_new_code = true;
    rep.pass = true;
    rep.verdict_reason = "no methods added";
    return rep;
  }
  rep.new_density = Rational(rep.new_td, rep.new_ncloc);
  auto contribution = decomp::contribution_new(pm, rep.new_td, rep.new_ncloc);
  if (!contribution) throw AnalysisError("undefined what-if for revision " + rev);
  rep.contribution_new = *contribution;

  std::set<std::string> new_keys;
  for (const changes::MethodChange& mc : cs.changes)
    if (mc.kind == changes::ChangeKind::New) new_keys.insert(mc.after->key());
  for (size_t i = 0; i < cur->issues.size(); ++i) {
    long long idx = cur->attr.issue_assignment[i];
    if (idx < 0) continue;
    const td::MethodTd& target = cur->attr.methods[static_cast<size_t>(idx)];
    if (!new_keys.count(target.method->key())) continue;
    const td::TdIssue& issue = cur->issues[i];
    GateIssueLine line;
    line.rule_id = issue.rule_id;
    line.severity = issue.severity;
    line.file = issue.file_path;
    line.line = issue.line;
    line.minutes = issue.effort_minutes;
    line.method = target.method->enclosing_class + "." + target.method->signature();
    if (static_cast<int>(issue.severity) >= static_cast<int>(options.severity_floor))
      rep.blocking.push_back(std::move(line));
    else
      rep.informational.push_back(std::move(line));
  }

  if (options.policy == GatePolicy::Cleaner) {
    bool density_ok = rep.contribution_new <= 0;
    bool severity_ok = rep.blocking.empty();
    rep.pass = density_ok && severity_ok;
    if (rep.pass)
      rep.verdict_reason = "added code arrives at or below the previous density";
    else if (!density_ok)
      rep.verdict_reason = "added code raises the system's TD density";
    else
      rep.verdict_reason = "added code carries issues at or above the severity floor";
  } else {
    rep.pass = rep.new_td == 0;
    rep.verdict_reason = rep.pass ? "added code carries no technical debt"
                                  : "added code carries technical debt";
  }
  return rep;
}

GateReport run_gate(const GateOptions& options) {
  history::GitRepository repo(options.repo_path);
  return run_gate(options, repo);
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

using Row = std::vector<std::pair<std::string, json>>;

std::string cell_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void write_table(const std::string& out_dir, const std::string& name, ReportFormat fmt,
                 const std::vector<std::string>& header, const std::vector<Row>& rows) {
  namespace fs = std::filesystem;
  fs::path path = fs::path(out_dir) / (name + (fmt == ReportFormat::Csv ? ".csv" : ".jsonl"));
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw AnalysisError("cannot write report file: " + path.string());
  if (fmt == ReportFormat::Csv) {
    for (size_t i = 0; i < header.size(); ++i)
      out << (i ? "," : "") << csv_escape(header[i]);
    out << '\n';
    for (const Row& row : rows) {
      for (size_t i = 0; i < row.size(); ++i)
        out << (i ? "," : "") << csv_escape(cell_text(row[i].second));
      out << '\n';
    }
  } else {
    for (const Row& row : rows) {
      json obj = json::object();
      for (const auto& [key, value] : row) obj[key] = value;
      out << obj.dump() << '\n';
    }
  }
  if (!out.flush()) throw AnalysisError("failed writing report file: " + path.string());
}

std::string frac(const Rational& r) { return to_fraction_string(r); }

struct StatsBundle {
  std::vector<stats::TransitionFacts> facts;
  std::vector<stats::NewCodeSample> samples;
  stats::CleanShare share;
  struct PerType {
    stats::ChangeType type;
    stats::ContingencyTable table;
    stats::ChiSquareResult chi;
  };
  std::vector<PerType> types;
  std::optional<stats::DistributionSummary> dist_new;
  std::optional<stats::DistributionSummary> dist_existing;
  long long transitions = 0, degenerate = 0;
};

StatsBundle compute_stats(const Cache& cache) {
  StatsBundle b;
  b.facts = transition_facts(cache);
  b.samples = new_code_samples(cache);
  b.share = stats::percent_cleaner_new(b.facts);
  for (stats::ChangeType t : {stats::ChangeType::New, stats::ChangeType::Deleted,
                              stats::ChangeType::Modified}) {
    StatsBundle::PerType pt;
    pt.type = t;
    pt.table = stats::contingency_table(b.facts, t);
    pt.chi = stats::chi_square(pt.table);
    b.types.push_back(std::move(pt));
  }
  b.dist_new = stats::density_diff_distribution(b.samples, stats::SampleMode::NewClass);
  b.dist_existing =
      stats::density_diff_distribution(b.samples, stats::SampleMode::ExistingClass);
  for (const stats::TransitionFacts& f : b.facts) {
    ++b.transitions;
    if (f.degenerate) ++b.degenerate;
  }
  return b;
}

}  // namespace

void write_reports(const Cache& cache, const std::string& out_dir, ReportFormat fmt) {
  std::filesystem::create_directories(out_dir);
  StatsBundle b = compute_stats(cache);

  std::vector<Row> summary;
  auto metric = [&](const std::string& name, json value) {
    summary.push_back({{"metric", name}, {"value", std::move(value)}});
  };
  long long parse_failed = 0, flagged = 0, ignored = 0, ignored_minutes = 0;
  for (const CacheRecord& r : cache.records) {
    parse_failed += static_cast<long long>(r.parse_failures.size());
    flagged += static_cast<long long>(r.flagged_files.size());
    ignored += r.ignored_issue_count;
    ignored_minutes += r.ignored_issue_minutes;
  }
  metric("revisions", static_cast<long long>(cache.records.size()));
  metric("transitions", b.transitions);
  metric("degenerate_transitions", b.degenerate);
  metric("parse_failed_files", parse_failed);
  metric("flagged_files", flagged);
  metric("ignored_issues", ignored);
  metric("ignored_issue_minutes", ignored_minutes);
  metric("transitions_with_new_methods", b.share.with_new);
  metric("cleaner_new_transitions", b.share.cleaner);
  metric("percent_cleaner_new", b.share.applicable ? json(b.share.percent) : json("n/a"));
  write_table(out_dir, "summary", fmt, {"metric", "value"}, summary);

  std::vector<std::string> theader = {
      "revision", "prev_revision", "td_minutes", "ncloc",
      "new_td", "new_ncloc", "new_count",
      "deleted_td", "deleted_ncloc", "deleted_count",
      "modified_td_delta", "modified_ncloc_delta", "modified_count", "unchanged_count",
      "contribution_new", "contribution_deleted", "contribution_modified",
      "system_delta", "residual",
      "dir_new", "dir_deleted", "dir_modified", "dir_system",
      "degenerate", "degenerate_reason",
      "ignored_issue_count", "ignored_issue_minutes", "parse_failures", "flagged_files"};
  std::vector<Row> trows;
  for (const CacheRecord& r : cache.records) {
    Row row;
    auto put = [&](const std::string& k, json v) { row.push_back({k, std::move(v)}); };
    auto join = [](const std::vector<std::string>& xs) {
      std::string s;
      for (size_t i = 0; i < xs.size(); ++i) s += (i ? ";" : "") + xs[i];
      return s;
    };
    put("revision", r.revision);
    put("prev_revision", r.prev_revision);
    put("td_minutes", r.td_minutes);
    put("ncloc", r.ncloc);
    if (r.has_transition) {
      put("new_td", r.aggregates.new_td);
      put("new_ncloc", r.aggregates.new_ncloc);
      put("new_count", r.aggregates.new_count);
      put("deleted_td", r.aggregates.deleted_td);
      put("deleted_ncloc", r.aggregates.deleted_ncloc);
      put("deleted_count", r.aggregates.deleted_count);
      put("modified_td_delta", r.aggregates.modified_td_delta);
      put("modified_ncloc_delta", r.aggregates.modified_ncloc_delta);
      put("modified_count", r.aggregates.modified_count);
      put("unchanged_count", r.unchanged_count);
      put("contribution_new", frac(r.delta.contribution_new));
      put("contribution_deleted", frac(r.delta.contribution_deleted));
      put("contribution_modified", frac(r.delta.contribution_modified));
      put("system_delta", frac(r.delta.system_delta));
      put("residual", frac(r.delta.residual));
      put("dir_new", to_string(r.delta.dir_new));
      put("dir_deleted", to_string(r.delta.dir_deleted));
      put("dir_modified", to_string(r.delta.dir_modified));
      put("dir_system", to_string(r.delta.dir_system));
      put("degenerate", r.delta.degenerate);
      put("degenerate_reason", r.delta.degenerate_reason);
    } else {
      for (const char* k :
           {"new_td", "new_ncloc", "new_count", "deleted_td", "deleted_ncloc",
            "deleted_count", "modified_td_delta", "modified_ncloc_delta", "modified_count",
            "unchanged_count", "contribution_new", "contribution_deleted",
            "contribution_modified", "system_delta", "residual", "dir_new", "dir_deleted",
            "dir_modified", "dir_system", "degenerate", "degenerate_reason"})
        put(k, "");
    }
    put("ignored_issue_count", r.ignored_issue_count);
    put("ignored_issue_minutes", r.ignored_issue_minutes);
    put("parse_failures", join(r.parse_failures));
    put("flagged_files", join(r.flagged_files));
    trows.push_back(std::move(row));
  }
  write_table(out_dir, "transitions", fmt, theader, trows);

  std::vector<Row> crows;
  for (const StatsBundle::PerType& pt : b.types) {
    for (Direction sys : {Direction::Decrease, Direction::Increase}) {
      Row row;
      row.push_back({"change_type", stats::to_string(pt.type)});
      row.push_back({"system_direction", to_string(sys)});
      row.push_back({"contribution_decrease", pt.table.at(sys, Direction::Decrease)});
      row.push_back({"contribution_increase", pt.table.at(sys, Direction::Increase)});
      row.push_back({"contribution_stable", pt.table.at(sys, Direction::Stable)});
      row.push_back({"n", pt.table.n});
      crows.push_back(std::move(row));
    }
  }
  write_table(out_dir, "contingency", fmt,
              {"change_type", "system_direction", "contribution_decrease",
               "contribution_increase", "contribution_stable", "n"},
              crows);

  std::vector<Row> arows;
  for (const StatsBundle::PerType& pt : b.types) {
    Row row;
    row.push_back({"change_type", stats::to_string(pt.type)});
    row.push_back({"applicable", pt.chi.applicable});
    row.push_back({"note", pt.chi.note});
    if (pt.chi.applicable) {
      row.push_back({"chi2", pt.chi.chi2});
      row.push_back({"dof", pt.chi.dof});
      row.push_back({"p_value", pt.chi.p_value});
      row.push_back({"phi", pt.chi.phi});
    } else {
      for (const char* k : {"chi2", "dof", "p_value", "phi"}) row.push_back({k, ""});
    }
    arows.push_back(std::move(row));
  }
  write_table(out_dir, "association", fmt,
              {"change_type", "applicable", "note", "chi2", "dof", "p_value", "phi"},
              arows);

  std::vector<Row> drows;
  auto dist_row = [&](const std::string& mode,
                      const std::optional<stats::DistributionSummary>& d) {
    Row row;
    row.push_back({"mode", mode});
    if (d) {
      row.push_back({"n", d->n});
      row.push_back({"min", frac(d->min)});
      row.push_back({"q1", frac(d->q1)});
      row.push_back({"median", frac(d->median)});
      row.push_back({"q3", frac(d->q3)});
      row.push_back({"max", frac(d->max)});
      row.push_back({"whisker_low", frac(d->whisker_low)});
      row.push_back({"whisker_high", frac(d->whisker_high)});
      row.push_back({"outliers", d->outliers});
    } else {
      row.push_back({"n", 0});
      for (const char* k :
           {"min", "q1", "median", "q3", "max", "whisker_low", "whisker_high"})
        row.push_back({k, ""});
      row.push_back({"outliers", 0});
    }
    drows.push_back(std::move(row));
  };
  dist_row("new_class", b.dist_new);
  dist_row("existing_class", b.dist_existing);
  write_table(out_dir, "distributions", fmt,
              {"mode", "n", "min", "q1", "median", "q3", "max", "whisker_low",
               "whisker_high", "outliers"},
              drows);
}

namespace {

std::string approx(const Rational& r) {
  return number_text(to_double(r));
}

void render_distribution(std::ostringstream& out, const char* label,
                         const std::optional<stats::DistributionSummary>& d) {
  out << "  " << label << ": ";
  if (!d) {
    out << "no samples\n";
    return;
  }
  out << "n=" << d->n << " q1=" << frac(d->q1) << " (" << approx(d->q1) << ")"
      << " median=" << frac(d->median) << " (" << approx(d->median) << ")"
      << " q3=" << frac(d->q3) << " (" << approx(d->q3) << ")"
      << " whiskers=[" << frac(d->whisker_low) << ", " << frac(d->whisker_high) << "]"
      << " outliers=" << d->outliers << "\n";
}

}  // namespace

std::string render_stats_text(const Cache& cache, bool with_cramers_v, bool /*welch*/) {
  StatsBundle b = compute_stats(cache);
  std::ostringstream out;
  out << "revisions: " << cache.records.size() << ", transitions: " << b.transitions
      << ", degenerate: " << b.degenerate << "\n";
  if (b.share.applicable) {
    out << "clean new code: " << b.share.cleaner << " of " << b.share.with_new
        << " method-adding transitions arrive below the previous density ("
        << number_text(b.share.percent) << "%)\n";
  } else {
    out << "clean new code: no transitions added methods\n";
  }
  for (const StatsBundle::PerType& pt : b.types) {
    out << "association for " << stats::to_string(pt.type) << " changes (n=" << pt.table.n
        << "):\n";
    const char* row_names[2] = {"system decrease", "system increase"};
    for (int i = 0; i < 2; ++i) {
      out << "  " << row_names[i] << ": decrease=" << pt.table.cells[i][0]
          << " increase=" << pt.table.cells[i][1] << " stable=" << pt.table.cells[i][2]
          << "\n";
    }
    if (pt.chi.applicable) {
      out << "  chi2=" << number_text(pt.chi.chi2) << " dof=" << pt.chi.dof
          << " p=" << number_text(pt.chi.p_value) << " phi=" << number_text(pt.chi.phi);
      if (with_cramers_v) {
        int rows = 0, cols[3] = {0, 0, 0};
        for (int i = 0; i < 2; ++i) {
          long long s = pt.table.cells[i][0] + pt.table.cells[i][1] + pt.table.cells[i][2];
          if (s > 0) ++rows;
          for (int j = 0; j < 3; ++j)
            if (pt.table.cells[i][j] > 0) cols[j] = 1;
        }
        int ncols = cols[0] + cols[1] + cols[2];
        out << " cramers_v=" << number_text(stats::cramers_v(pt.chi.chi2, pt.table.n,
                                                             rows, ncols));
      }
      out << "\n";
    } else {
      out << "  chi-square inapplicable: " << pt.chi.note << "\n";
    }
  }
  out << "new-code density difference against baseline:\n";
  render_distribution(out, "new classes", b.dist_new);
  render_distribution(out, "existing classes", b.dist_existing);
  return out.str();
}

std::string render_gate_text(const GateReport& rep) {
  std::ostringstream out;
  out << "gate policy: " << to_string(rep.policy) << "\n";
  out << "revision: " << rep.revision << " (baseline " << rep.parent << ")\n";
  out << "baseline density: " << frac(rep.baseline_density) << " ("
      << approx(rep.baseline_density) << " min/line)\n";
  if (rep.no_new_code) {
    out << "added methods: none\n";
  } else {
    out << "added methods: " << rep.new_methods << ", td " << rep.new_td << " min over "
        << rep.new_ncloc << " lines (density " << frac(rep.new_density) << ", "
        << approx(rep.new_density) << ")\n";
    out << "what-if contribution of added code: " << frac(rep.contribution_new) << " ("
        << to_string(direction_of(rep.contribution_new)) << ")\n";
    auto print_issue = [&](const GateIssueLine& l, const char* tag) {
      out << "  [" << tag << "] " << l.rule_id << " (" << td::to_string(l.severity) << ") "
          << l.file << ":" << l.line << " " << l.minutes << "min in " << l.method << "\n";
    };
    if (rep.blocking.empty() && rep.informational.empty()) {
      out << "issues in added methods: none\n";
    } else {
      out << "issues in added methods:\n";
      for (const GateIssueLine& l : rep.blocking) print_issue(l, "blocking");
      for (const GateIssueLine& l : rep.informational) print_issue(l, "info");
    }
  }
  out << "verdict: " << (rep.pass ? "PASS" : "FAIL") << " (" << rep.verdict_reason << ")\n";
  return out.str();
}

std::string render_summary_text(const AnalyzeSummary& sum) {
  std::ostringstream out;
  out << "commits in graph: " << sum.dag_commits << "\n";
  out << "linearized series: " << sum.series_length << " revisions, " << sum.retained
      << " retained after source filtering\n";
  out << "measured: " << sum.analyzed << " revisions analyzed, " << sum.reused
      << " reused from cache\n";
  out << "degenerate transitions: " << sum.degenerate << "\n";
  out << "files failing to parse: " << sum.parse_failures
      << ", files excluded from matching: " << sum.flagged_files << "\n";
  out << "issues outside any method: " << sum.ignored_issue_count << "\n";
  for (const std::string& w : sum.warnings) out << "warning: " << w << "\n";
  return out.str();
}

}  // namespace tddiff::pipeline
