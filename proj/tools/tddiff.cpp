#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tddiff/governance.hpp"
#include "tddiff/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitGateFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitAnalysis = 3;

std::string default_cache_path() {
  const char* env = std::getenv("TDDIFF_CACHE_DIR");
  if (env && *env) return (fs::path(env) / "cache.jsonl").string();
  return "tddiff-cache.jsonl";
}

struct CommonAnalysis {
  std::string repo;
  std::string rules_path;
  std::string issue_dir;
  std::vector<std::string> extensions = {".java"};
  double similarity = 0.7;
  int jobs = 1;
};

void add_analysis_flags(CLI::App* cmd, CommonAnalysis& c, bool repo_required) {
  auto* repo = cmd->add_option("--repo", c.repo, "Path to the git repository");
  if (repo_required) repo->required();
  cmd->add_option("--rules", c.rules_path, "JSON file overriding built-in rule settings");
  cmd->add_option("--import-issues", c.issue_dir,
                  "Directory of per-revision issue dumps (<rev>.jsonl); replaces built-in rules");
  cmd->add_option("--source-ext", c.extensions,
                  "Source file extensions to measure (default .java)");
  cmd->add_option("--similarity", c.similarity, "Rename match threshold in [0,1]")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--jobs", c.jobs, "Parallel file measurements per revision")
      ->check(CLI::PositiveNumber);
}

tddiff::td::RuleCatalog catalog_for(const CommonAnalysis& c) {
  tddiff::td::RuleCatalog rules = tddiff::td::RuleCatalog::builtin();
  if (!c.rules_path.empty()) rules.apply_config_file(c.rules_path);
  return rules;
}

std::vector<tddiff::governance::GovernanceRecord> load_governance(
    const std::string& corpus, const std::string& config_path) {
  using tddiff::governance::GovernanceRecord;
  using tddiff::governance::MeetingDoc;
  if (!fs::is_directory(corpus))
    throw tddiff::pipeline::AnalysisError("corpus is not a directory: " + corpus);

  std::vector<fs::path> projects;
  for (const fs::directory_entry& e : fs::directory_iterator(corpus))
    if (e.is_directory()) projects.push_back(e.path());
  std::sort(projects.begin(), projects.end());

  json config = json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in)
      throw tddiff::pipeline::AnalysisError("cannot read project config: " + config_path);
    try {
      config = json::parse(in);
    } catch (const json::exception& e) {
      throw tddiff::pipeline::AnalysisError("project config is not valid JSON: " +
                                            std::string(e.what()));
    }
    if (!config.is_object())
      throw tddiff::pipeline::AnalysisError("project config must be a JSON object");
  }

  std::vector<GovernanceRecord> records;
  for (const fs::path& dir : projects) {
    GovernanceRecord rec;
    rec.project = dir.filename().string();

    std::vector<fs::path> files;
    for (const fs::directory_entry& e : fs::directory_iterator(dir))
      if (e.is_regular_file()) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::vector<MeetingDoc> docs;
    for (const fs::path& f : files) {
      std::ifstream in(f, std::ios::binary);
      std::ostringstream text;
      text << in.rdbuf();
      docs.push_back({f.filename().string(), text.str()});
    }
    tddiff::governance::KeywordCounts counts = tddiff::governance::scan_minutes(docs);
    rec.qc_meetings = counts.quality_control;
    rec.ref_meetings = counts.refactoring;

    if (auto it = config.find(rec.project); it != config.end()) {
      if (!it->is_object())
        throw tddiff::pipeline::AnalysisError("project config entry for " + rec.project +
                                              " must be an object");
      for (const auto& [key, value] : it->items()) {
        if (key == "commit_guidelines") {
          if (!value.is_boolean())
            throw tddiff::pipeline::AnalysisError("commit_guidelines for " + rec.project +
                                                  " must be a boolean");
          rec.commit_guidelines = value.get<bool>();
        } else if (key == "clean_code_freq") {
          if (!value.is_number())
            throw tddiff::pipeline::AnalysisError("clean_code_freq for " + rec.project +
                                                  " must be a number");
          rec.clean_code_freq = value.get<double>();
        } else {
          throw tddiff::pipeline::AnalysisError("unknown project config field \"" + key +
                                                "\" for " + rec.project);
        }
      }
    }
    records.push_back(std::move(rec));
  }
  tddiff::governance::classify_board_levels(records);
  return records;
}

std::string ftext(double v) { return json(v).dump(); }

int run(int argc, char** argv) {
  CLI::App app{"tddiff: technical-debt density history for git-hosted Java code"};
  app.require_subcommand(1);

  CommonAnalysis an;
  std::string an_branch = "master";
  std::string an_cache;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "Reconstruct the revision series and measure every transition");
  add_analysis_flags(analyze, an, true);
  analyze->add_option("--branch", an_branch, "Head reference to walk back from");
  analyze->add_option("--cache", an_cache,
                      "Cache file (default $TDDIFF_CACHE_DIR/cache.jsonl or ./tddiff-cache.jsonl)");

  std::string st_cache;
  bool st_cramers = false, st_welch = false;
  CLI::App* stats_cmd = app.add_subcommand("stats", "Print statistics from a cache");
  stats_cmd->add_option("--cache", st_cache, "Cache file to read");
  stats_cmd->add_flag("--cramers-v", st_cramers, "Also print Cramer's V");
  stats_cmd->add_flag("--welch", st_welch, "Welch variant for t-tests");

  std::string rp_cache, rp_out = "reports";
  std::string rp_format = "csv";
  CLI::App* report = app.add_subcommand("report", "Write report files from a cache");
  report->add_option("--cache", rp_cache, "Cache file to read");
  report->add_option("--out", rp_out, "Output directory");
  report->add_option("--format", rp_format, "csv or jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}));

  CommonAnalysis ga;
  std::string ga_revision = "HEAD";
  std::string ga_policy = "cleaner";
  std::string ga_floor = "critical";
  CLI::App* gate = app.add_subcommand(
      "gate", "Check the code added by one commit against its parent");
  add_analysis_flags(gate, ga, true);
  gate->add_option("--revision", ga_revision, "Commit to gate (default HEAD)");
  gate->add_option("--policy", ga_policy, "cleaner or zero-defect")
      ->check(CLI::IsMember({"cleaner", "zero-defect"}));
  gate->add_option("--severity-floor", ga_floor,
                   "Lowest severity that blocks the cleaner policy");

  std::string mg_corpus, mg_config;
  bool mg_welch = false;
  CLI::App* mine = app.add_subcommand(
      "mine-governance", "Count quality keywords in per-project meeting minutes");
  mine->add_option("--corpus", mg_corpus, "Directory with one subdirectory per project")
      ->required();
  mine->add_option("--config", mg_config,
                   "JSON with per-project commit_guidelines and clean_code_freq");
  mine->add_flag("--welch", mg_welch, "Welch variant for group comparisons");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*analyze) {
      tddiff::pipeline::AnalyzeOptions opts;
      opts.repo_path = an.repo;
      opts.branch = an_branch;
      opts.source_extensions = an.extensions;
      opts.similarity = an.similarity;
      opts.rules = catalog_for(an);
      opts.issue_dir = an.issue_dir;
      opts.jobs = an.jobs;
      std::string cache_path = an_cache.empty() ? default_cache_path() : an_cache;
      tddiff::pipeline::Cache cache;
      tddiff::pipeline::AnalyzeSummary sum =
          tddiff::pipeline::run_analyze(opts, cache_path, cache);
      std::cout << tddiff::pipeline::render_summary_text(sum);
      std::cout << "cache: " << cache_path << "\n";
      return kExitPass;
    }
    if (*stats_cmd) {
      std::string cache_path = st_cache.empty() ? default_cache_path() : st_cache;
      tddiff::pipeline::Cache cache = tddiff::pipeline::Cache::load_file(cache_path);
      std::cout << tddiff::pipeline::render_stats_text(cache, st_cramers, st_welch);
      return kExitPass;
    }
    if (*report) {
      std::string cache_path = rp_cache.empty() ? default_cache_path() : rp_cache;
      tddiff::pipeline::Cache cache = tddiff::pipeline::Cache::load_file(cache_path);
      tddiff::pipeline::write_reports(cache, rp_out,
                                      rp_format == "csv"
                                          ? tddiff::pipeline::ReportFormat::Csv
                                          : tddiff::pipeline::ReportFormat::Jsonl);
      std::cout << "reports written to " << rp_out << "\n";
      return kExitPass;
    }
    if (*gate) {
      tddiff::pipeline::GateOptions opts;
      opts.repo_path = ga.repo;
      opts.revision = ga_revision;
      opts.policy = ga_policy == "cleaner" ? tddiff::pipeline::GatePolicy::Cleaner
                                           : tddiff::pipeline::GatePolicy::ZeroDefect;
      auto floor = tddiff::td::severity_from_string(ga_floor);
      if (!floor) {
        std::cerr << "unknown severity: " << ga_floor << "\n";
        return kExitUsage;
      }
      opts.severity_floor = *floor;
      opts.source_extensions = ga.extensions;
      opts.similarity = ga.similarity;
      opts.rules = catalog_for(ga);
      opts.issue_dir = ga.issue_dir;
      opts.jobs = ga.jobs;
      tddiff::pipeline::GateReport rep = tddiff::pipeline::run_gate(opts);
      std::cout << tddiff::pipeline::render_gate_text(rep);
      return rep.pass ? kExitPass : kExitGateFail;
    }
    if (*mine) {
      auto records = load_governance(mg_corpus, mg_config);
      for (const auto& r : records) {
        std::cout << "project " << r.project << ": guidelines="
                  << (r.commit_guidelines ? "yes" : "no") << " qc_meetings="
                  << r.qc_meetings << " (" << tddiff::stats::to_string(r.qc_level)
                  << ") ref_meetings=" << r.ref_meetings << " ("
                  << tddiff::stats::to_string(r.ref_level) << ") board="
                  << tddiff::stats::to_string(r.board_level);
        if (r.clean_code_freq) std::cout << " clean_freq=" << ftext(*r.clean_code_freq);
        std::cout << "\n";
      }
      for (const auto& c :
           tddiff::governance::compare_governance_groups(records, mg_welch)) {
        std::cout << "split " << c.split << ": n_high=" << c.n_high
                  << " n_low=" << c.n_low;
        if (c.ttest.applicable) {
          std::cout << " mean_high=" << ftext(c.mean_high)
                    << " mean_low=" << ftext(c.mean_low)
                    << " median_high=" << ftext(c.median_high)
                    << " median_low=" << ftext(c.median_low) << " t=" << ftext(c.ttest.t)
                    << " dof=" << ftext(c.ttest.dof) << " p=" << ftext(c.ttest.p_value);
        } else {
          std::cout << " comparison inapplicable: " << c.ttest.note;
        }
        std::cout << "\n";
      }
      return kExitPass;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitAnalysis;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
