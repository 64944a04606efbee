// Meeting-minutes keyword scan and project-level comparisons.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tddiff/stats.hpp"

namespace tddiff::governance {

// Case-insensitive substring sets; a meeting counts once per category no
// matter how many hits it contains.
extern const std::vector<std::string> kQualityControlKeywords;
extern const std::vector<std::string> kRefactoringKeywords;

struct MeetingDoc {
  std::string id;  // e.g. file name
  std::string text;
};

struct KeywordCounts {
  long long quality_control = 0;  // meetings with a quality-control hit
  long long refactoring = 0;      // meetings with a refactoring hit
};

KeywordCounts scan_minutes(const std::vector<MeetingDoc>& docs);

struct GovernanceRecord {
  std::string project;
  bool commit_guidelines = false;
  long long qc_meetings = 0;
  long long ref_meetings = 0;
  stats::Level qc_level = stats::Level::Low;
  stats::Level ref_level = stats::Level::Low;
  stats::Level board_level = stats::Level::Low;  // high iff high on both
  std::optional<double> clean_code_freq;         // percent of cleaner additions
};

// Fills the three levels via median splits over the record set.
void classify_board_levels(std::vector<GovernanceRecord>& records);

struct GroupComparison {
  std::string split;  // "commit_guidelines" or "board_meetings"
  long long n_high = 0, n_low = 0;
  double mean_high = 0, mean_low = 0;
  double median_high = 0, median_low = 0;
  stats::TTestResult ttest;
};

// Compares clean_code_freq across the guideline and board splits.
// Records lacking a frequency are excluded from that comparison.
std::vector<GroupComparison> compare_governance_groups(
    const std::vector<GovernanceRecord>& records, bool welch = false);

}  // namespace tddiff::governance
