// Association and comparison statistics over transition classifications.
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "tddiff/rational.hpp"

namespace tddiff::stats {

enum class ChangeType { New, Deleted, Modified };

const char* to_string(ChangeType t);

// One linearized, analyzed transition reduced to what the statistics need.
struct TransitionFacts {
  Direction dir_system = Direction::Stable;
  Direction dir_new = Direction::Stable;
  Direction dir_deleted = Direction::Stable;
  Direction dir_modified = Direction::Stable;
  bool has_new = false;       // >=1 method of the kind changed
  bool has_deleted = false;
  bool has_modified = false;
  bool degenerate = false;
  long long new_td = 0;       // for the clean-new-code share
  long long new_ncloc = 0;
  Rational prev_density;
};

// Rows: system decrease, system increase. Columns: contribution decrease,
// increase, stable. A transition enters the table for a change type iff that
// type occurred, at least two change kinds occurred, the system direction is
// not stable and the transition is not degenerate.
struct ContingencyTable {
  std::array<std::array<long long, 3>, 2> cells{};
  long long n = 0;

  long long& at(Direction system, Direction contribution);
  long long at(Direction system, Direction contribution) const;
};

ContingencyTable contingency_table(const std::vector<TransitionFacts>& facts,
                                   ChangeType type);

struct ChiSquareResult {
  bool applicable = false;
  std::string note;  // set when inapplicable
  double chi2 = 0.0;
  int dof = 0;
  double p_value = 1.0;
  double phi = 0.0;
};

// All-zero rows and columns are dropped before the test; fewer than two
// usable rows or columns makes the test inapplicable. phi = sqrt(chi2/n).
ChiSquareResult chi_square(const ContingencyTable& table);

double phi_coefficient(double chi2, long long n);
double cramers_v(double chi2, long long n, int rows, int cols);

struct TTestResult {
  bool applicable = false;
  std::string note;
  double t = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
  double mean_a = 0.0, mean_b = 0.0;
};

// Two-tailed independent-samples t-test, pooled variance by default,
// Welch when welch=true. Requires >=2 samples per group. Zero variance in
// both groups: equal means -> t=0, p=1; unequal -> inapplicable.
TTestResult t_test_independent(const std::vector<double>& a, const std::vector<double>& b,
                               bool welch = false);

struct CleanShare {
  bool applicable = false;  // false when no transition added methods
  long long with_new = 0;
  long long cleaner = 0;
  double percent = 0.0;
};

// Share of transitions whose added methods arrive below the previous
// system density (new_td/new_ncloc < prev density, exact comparison).
CleanShare percent_cleaner_new(const std::vector<TransitionFacts>& facts);

enum class Level { Low, High };

const char* to_string(Level l);

// Median of counts (average of middle two when even), rounded half away
// from zero; strictly above the rounded median is High.
std::vector<Level> median_split(const std::vector<long long>& counts);

struct DistributionSummary {
  long long n = 0;
  Rational min, q1, median, q3, max;
  Rational whisker_low, whisker_high;  // Tukey: furthest samples within 1.5*IQR
  long long outliers = 0;
};

// Tukey hinges (median of halves, middle element excluded when n is odd).
std::optional<DistributionSummary> summarize_distribution(std::vector<Rational> samples);

struct DistributionSummaryD {
  long long n = 0;
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
  double whisker_low = 0, whisker_high = 0;
  long long outliers = 0;
};

std::optional<DistributionSummaryD> summarize_distribution(std::vector<double> samples);

// Density difference of methods added per host class against their baseline:
// the host class's previous density when the class already existed, the
// previous system density when the host class is itself new.
struct NewCodeSample {
  bool host_class_existed = false;
  Rational diff;
};

enum class SampleMode { NewClass, ExistingClass };

std::optional<DistributionSummary> density_diff_distribution(
    const std::vector<NewCodeSample>& samples, SampleMode mode);

}  // namespace tddiff::stats
