#include "tddiff/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace tddiff::stats {

const char* to_string(ChangeType t) {
  switch (t) {
    case ChangeType::New: return "new";
    case ChangeType::Deleted: return "deleted";
    case ChangeType::Modified: return "modified";
  }
  return "new";
}

const char* to_string(Level l) {
  return l == Level::High ? "high" : "low";
}

namespace {

int row_index(Direction d) { return d == Direction::Decrease ? 0 : 1; }

int col_index(Direction d) {
  switch (d) {
    case Direction::Decrease: return 0;
    case Direction::Increase: return 1;
    case Direction::Stable: return 2;
  }
  return 2;
}

}  // namespace

long long& ContingencyTable::at(Direction system, Direction contribution) {
  return cells[row_index(system)][col_index(contribution)];
}

long long ContingencyTable::at(Direction system, Direction contribution) const {
  return cells[row_index(system)][col_index(contribution)];
}

ContingencyTable contingency_table(const std::vector<TransitionFacts>& facts,
                                   ChangeType type) {
  ContingencyTable table;
  for (const TransitionFacts& f : facts) {
    if (f.degenerate || f.dir_system == Direction::Stable) continue;
    int kinds = (f.has_new ? 1 : 0) + (f.has_deleted ? 1 : 0) + (f.has_modified ? 1 : 0);
    if (kinds < 2) continue;
    bool occurred = (type == ChangeType::New && f.has_new) ||
                    (type == ChangeType::Deleted && f.has_deleted) ||
                    (type == ChangeType::Modified && f.has_modified);
    if (!occurred) continue;
    Direction contrib = type == ChangeType::New        ? f.dir_new
                        : type == ChangeType::Deleted  ? f.dir_deleted
                                                       : f.dir_modified;
    ++table.at(f.dir_system, contrib);
    ++table.n;
  }
  return table;
}

ChiSquareResult chi_square(const ContingencyTable& table) {
  ChiSquareResult r;
  std::vector<int> rows, cols;
  for (int i = 0; i < 2; ++i) {
    long long sum = 0;
    for (int j = 0; j < 3; ++j) sum += table.cells[i][j];
    if (sum > 0) rows.push_back(i);
  }
  for (int j = 0; j < 3; ++j) {
    long long sum = 0;
    for (int i = 0; i < 2; ++i) sum += table.cells[i][j];
    if (sum > 0) cols.push_back(j);
  }
  if (rows.size() < 2 || cols.size() < 2) {
    r.note = "fewer than two usable rows or columns";
    return r;
  }
  double n = static_cast<double>(table.n);
  std::vector<double> row_sum(rows.size(), 0), col_sum(cols.size(), 0);
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j) {
      double o = static_cast<double>(table.cells[rows[i]][cols[j]]);
      row_sum[i] += o;
      col_sum[j] += o;
    }
  double chi2 = 0;
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < cols.size(); ++j) {
      double e = row_sum[i] * col_sum[j] / n;
      double o = static_cast<double>(table.cells[rows[i]][cols[j]]);
      chi2 += (o - e) * (o - e) / e;
    }
  }
  r.applicable = true;
  r.chi2 = chi2;
  r.dof = static_cast<int>((rows.size() - 1) * (cols.size() - 1));
  boost::math::chi_squared dist(r.dof);
  r.p_value = boost::math::cdf(boost::math::complement(dist, chi2));
  r.phi = phi_coefficient(chi2, table.n);
  return r;
}

double phi_coefficient(double chi2, long long n) {
  if (n <= 0) return 0.0;
  return std::sqrt(chi2 / static_cast<double>(n));
}

double cramers_v(double chi2, long long n, int rows, int cols) {
  int k = std::min(rows, cols) - 1;
  if (n <= 0 || k <= 0) return 0.0;
  return std::sqrt(chi2 / (static_cast<double>(n) * k));
}

namespace {

double mean_of(const std::vector<double>& xs) {
  double sum = 0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

double sample_variance(const std::vector<double>& xs, double mean) {
  double sum = 0;
  for (double x : xs) sum += (x - mean) * (x - mean);
  return sum / static_cast<double>(xs.size() - 1);
}

}  // namespace

TTestResult t_test_independent(const std::vector<double>& a, const std::vector<double>& b,
                               bool welch) {
  TTestResult r;
  if (a.size() < 2 || b.size() < 2) {
    r.note = "needs at least two samples per group";
    return r;
  }
  double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  r.mean_a = mean_of(a);
  r.mean_b = mean_of(b);
  double va = sample_variance(a, r.mean_a);
  double vb = sample_variance(b, r.mean_b);

  double se, dof;
  if (welch) {
    double qa = va / na, qb = vb / nb;
    se = std::sqrt(qa + qb);
    if (se == 0.0) {
      if (r.mean_a == r.mean_b) {
        r.applicable = true;
        r.t = 0.0;
        r.dof = na + nb - 2;
        r.p_value = 1.0;
        return r;
      }
      r.note = "zero variance in both groups with unequal means";
      return r;
    }
    dof = (qa + qb) * (qa + qb) / (qa * qa / (na - 1) + qb * qb / (nb - 1));
  } else {
    double pooled = ((na - 1) * va + (nb - 1) * vb) / (na + nb - 2);
    se = std::sqrt(pooled * (1.0 / na + 1.0 / nb));
    dof = na + nb - 2;
    if (se == 0.0) {
      if (r.mean_a == r.mean_b) {
        r.applicable = true;
        r.t = 0.0;
        r.dof = dof;
        r.p_value = 1.0;
        return r;
      }
      r.note = "zero variance in both groups with unequal means";
      return r;
    }
  }
  r.applicable = true;
  r.t = (r.mean_a - r.mean_b) / se;
  r.dof = dof;
  boost::math::students_t dist(dof);
  r.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(r.t)));
  return r;
}

CleanShare percent_cleaner_new(const std::vector<TransitionFacts>& facts) {
  CleanShare share;
  for (const TransitionFacts& f : facts) {
    if (f.degenerate || !f.has_new || f.new_ncloc <= 0) continue;
    share.with_new += 1;
    if (Rational(f.new_td, f.new_ncloc) < f.prev_density) share.cleaner += 1;
  }
  if (share.with_new == 0) return share;
  share.applicable = true;
  share.percent = 100.0 * static_cast<double>(share.cleaner) /
                  static_cast<double>(share.with_new);
  return share;
}

std::vector<Level> median_split(const std::vector<long long>& counts) {
  std::vector<Level> out(counts.size(), Level::Low);
  if (counts.empty()) return out;
  std::vector<long long> sorted = counts;
  std::sort(sorted.begin(), sorted.end());
  size_t n = sorted.size();
  // Twice the median is always integral.
  long long twice = n % 2 == 1 ? 2 * sorted[n / 2] : sorted[n / 2 - 1] + sorted[n / 2];
  long long rounded;
  if (twice % 2 == 0) {
    rounded = twice / 2;
  } else {
    rounded = (twice + (twice > 0 ? 1 : -1)) / 2;  // half away from zero
  }
  for (size_t i = 0; i < counts.size(); ++i)
    if (counts[i] > rounded) out[i] = Level::High;
  return out;
}

namespace {

template <typename V>
V midpoint(const V& a, const V& b) {
  return (a + b) / 2;
}

template <typename V>
V median_of_sorted(const std::vector<V>& xs, size_t from, size_t to) {  // [from, to)
  size_t n = to - from;
  size_t mid = from + n / 2;
  if (n % 2 == 1) return xs[mid];
  return midpoint(xs[mid - 1], xs[mid]);
}

template <typename Summary, typename V>
std::optional<Summary> summarize_impl(std::vector<V> samples) {
  if (samples.empty()) return std::nullopt;
  std::sort(samples.begin(), samples.end());
  size_t n = samples.size();
  Summary s;
  s.n = static_cast<long long>(n);
  s.min = samples.front();
  s.max = samples.back();
  s.median = median_of_sorted(samples, 0, n);
  size_t half = n / 2;
  if (half == 0) {
    s.q1 = s.median;
    s.q3 = s.median;
  } else {
    s.q1 = median_of_sorted(samples, 0, half);
    s.q3 = median_of_sorted(samples, n - half, n);
  }
  V iqr = s.q3 - s.q1;
  V low_fence = s.q1 - (iqr * 3) / 2;
  V high_fence = s.q3 + (iqr * 3) / 2;
  bool any_inside = false;
  for (const V& x : samples) {
    if (x < low_fence || x > high_fence) {
      s.outliers += 1;
      continue;
    }
    if (!any_inside) {
      s.whisker_low = x;
      s.whisker_high = x;
      any_inside = true;
    } else {
      if (x < s.whisker_low) s.whisker_low = x;
      if (x > s.whisker_high) s.whisker_high = x;
    }
  }
  if (!any_inside) {  // cannot happen: quartiles are within the fences
    s.whisker_low = s.q1;
    s.whisker_high = s.q3;
  }
  return s;
}

}  // namespace

std::optional<DistributionSummary> summarize_distribution(std::vector<Rational> samples) {
  return summarize_impl<DistributionSummary>(std::move(samples));
}

std::optional<DistributionSummaryD> summarize_distribution(std::vector<double> samples) {
  return summarize_impl<DistributionSummaryD>(std::move(samples));
}

std::optional<DistributionSummary> density_diff_distribution(
    const std::vector<NewCodeSample>& samples, SampleMode mode) {
  std::vector<Rational> picked;
  for (const NewCodeSample& s : samples) {
    bool existing = s.host_class_existed;
    if ((mode == SampleMode::ExistingClass) == existing) picked.push_back(s.diff);
  }
  return summarize_distribution(std::move(picked));
}

}  // namespace tddiff::stats
