#include "tddiff/governance.hpp"

#include <algorithm>
#include <cctype>

namespace tddiff::governance {

const std::vector<std::string> kQualityControlKeywords = {
    "software quality", "code quality", "code improvement",
    "code review",      "guideline",    "sonar",
};

const std::vector<std::string> kRefactoringKeywords = {
    "refactoring",
    "clean up",
};

namespace {

std::string lowered(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool any_keyword(const std::string& lower_text, const std::vector<std::string>& keywords) {
  for (const std::string& k : keywords)
    if (lower_text.find(k) != std::string::npos) return true;
  return false;
}

double median_of(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  size_t n = xs.size();
  if (n == 0) return 0.0;
  if (n % 2 == 1) return xs[n / 2];
  return (xs[n / 2 - 1] + xs[n / 2]) / 2.0;
}

}  // namespace

KeywordCounts scan_minutes(const std::vector<MeetingDoc>& docs) {
  KeywordCounts counts;
  for (const MeetingDoc& doc : docs) {
    std::string text = lowered(doc.text);
    if (any_keyword(text, kQualityControlKeywords)) ++counts.quality_control;
    if (any_keyword(text, kRefactoringKeywords)) ++counts.refactoring;
  }
  return counts;
}

void classify_board_levels(std::vector<GovernanceRecord>& records) {
  std::vector<long long> qc, ref;
  qc.reserve(records.size());
  ref.reserve(records.size());
  for (const GovernanceRecord& r : records) {
    qc.push_back(r.qc_meetings);
    ref.push_back(r.ref_meetings);
  }
  std::vector<stats::Level> qc_levels = stats::median_split(qc);
  std::vector<stats::Level> ref_levels = stats::median_split(ref);
  for (size_t i = 0; i < records.size(); ++i) {
    records[i].qc_level = qc_levels[i];
    records[i].ref_level = ref_levels[i];
    records[i].board_level = qc_levels[i] == stats::Level::High &&
                                     ref_levels[i] == stats::Level::High
                                 ? stats::Level::High
                                 : stats::Level::Low;
  }
}

std::vector<GroupComparison> compare_governance_groups(
    const std::vector<GovernanceRecord>& records, bool welch) {
  std::vector<GroupComparison> out;
  auto build = [&](const std::string& name, auto in_high) {
    GroupComparison cmp;
    cmp.split = name;
    std::vector<double> high, low;
    for (const GovernanceRecord& r : records) {
      if (!r.clean_code_freq) continue;
      (in_high(r) ? high : low).push_back(*r.clean_code_freq);
    }
    cmp.n_high = static_cast<long long>(high.size());
    cmp.n_low = static_cast<long long>(low.size());
    auto mean = [](const std::vector<double>& xs) {
      if (xs.empty()) return 0.0;
      double s = 0;
      for (double x : xs) s += x;
      return s / static_cast<double>(xs.size());
    };
    cmp.mean_high = mean(high);
    cmp.mean_low = mean(low);
    cmp.median_high = median_of(high);
    cmp.median_low = median_of(low);
    cmp.ttest = stats::t_test_independent(high, low, welch);
    out.push_back(std::move(cmp));
  };
  build("commit_guidelines",
        [](const GovernanceRecord& r) { return r.commit_guidelines; });
  build("board_meetings",
        [](const GovernanceRecord& r) { return r.board_level == stats::Level::High; });
  return out;
}

}  // namespace tddiff::governance
