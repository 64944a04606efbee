#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "tddiff/stats.hpp"

using namespace tddiff;
using stats::ChangeType;
using stats::ContingencyTable;
using stats::TransitionFacts;

namespace {

ContingencyTable table2x2(long long a, long long b, long long c, long long d) {
  ContingencyTable t;
  t.cells[0][0] = a;
  t.cells[0][1] = b;
  t.cells[1][0] = c;
  t.cells[1][1] = d;
  t.n = a + b + c + d;
  return t;
}

TransitionFacts fact(Direction system, Direction dnew, Direction ddel, Direction dmod,
                     bool has_new, bool has_del, bool has_mod) {
  TransitionFacts f;
  f.dir_system = system;
  f.dir_new = dnew;
  f.dir_deleted = ddel;
  f.dir_modified = dmod;
  f.has_new = has_new;
  f.has_deleted = has_del;
  f.has_modified = has_mod;
  return f;
}

}  // namespace

TEST_CASE("a perfectly balanced table has no association") {
  auto r = stats::chi_square(table2x2(10, 10, 10, 10));
  REQUIRE(r.applicable);
  CHECK(r.chi2 == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r.dof == 1);
  CHECK(r.p_value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.phi == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("chi-square of a skewed 2x2 table") {
  auto r = stats::chi_square(table2x2(10, 20, 30, 40));
  REQUIRE(r.applicable);
  // exact value 50/63
  CHECK(std::fabs(r.chi2 - 50.0 / 63.0) < 1e-9);
  CHECK(r.dof == 1);
  CHECK(r.p_value == doctest::Approx(0.3730).epsilon(1e-3));
  CHECK(r.phi == doctest::Approx(std::sqrt(50.0 / 63.0 / 100.0)).epsilon(1e-9));
}

TEST_CASE("phi coefficient from aggregate counts") {
  CHECK(std::fabs(stats::phi_coefficient(61.55, 452) - 0.3690) < 5e-4);
  CHECK(stats::phi_coefficient(10.0, 0) == 0.0);
}

TEST_CASE("phi is invariant under uniform scaling of the table") {
  auto base = stats::chi_square(table2x2(10, 20, 30, 40));
  auto scaled = stats::chi_square(table2x2(70, 140, 210, 280));
  REQUIRE(base.applicable);
  REQUIRE(scaled.applicable);
  CHECK(scaled.chi2 == doctest::Approx(7.0 * base.chi2).epsilon(1e-9));
  CHECK(scaled.phi == doctest::Approx(base.phi).epsilon(1e-9));
}

TEST_CASE("cramers v reduces to phi for two rows") {
  CHECK(stats::cramers_v(0.7936507937, 100, 2, 2) ==
        doctest::Approx(stats::phi_coefficient(0.7936507937, 100)).epsilon(1e-12));
  CHECK(stats::cramers_v(5.0, 100, 1, 3) == 0.0);
  CHECK(stats::cramers_v(5.0, 0, 2, 2) == 0.0);
}

TEST_CASE("empty rows and columns are dropped before the test") {
  ContingencyTable t;
  t.cells[0] = {4, 6, 0};
  t.cells[1] = {8, 2, 0};
  t.n = 20;
  auto r = stats::chi_square(t);
  REQUIRE(r.applicable);
  CHECK(r.dof == 1);  // the all-zero stable column does not count

  ContingencyTable full;
  full.cells[0] = {4, 6, 3};
  full.cells[1] = {8, 2, 5};
  full.n = 28;
  CHECK(stats::chi_square(full).dof == 2);

  ContingencyTable onerow;
  onerow.cells[1] = {5, 6, 7};
  onerow.n = 18;
  auto bad = stats::chi_square(onerow);
  CHECK_FALSE(bad.applicable);
  CHECK(bad.note == "fewer than two usable rows or columns");
}

TEST_CASE("transitions feed the table only when comparable") {
  std::vector<TransitionFacts> facts;
  auto degenerate = fact(Direction::Decrease, Direction::Decrease, Direction::Stable,
                         Direction::Stable, true, true, false);
  degenerate.degenerate = true;
  facts.push_back(degenerate);
  facts.push_back(fact(Direction::Stable, Direction::Decrease, Direction::Stable,
                       Direction::Stable, true, true, false));  // stable system
  facts.push_back(fact(Direction::Decrease, Direction::Decrease, Direction::Stable,
                       Direction::Stable, true, false, false));  // single change kind
  facts.push_back(fact(Direction::Decrease, Direction::Decrease, Direction::Stable,
                       Direction::Stable, true, true, false));
  facts.push_back(fact(Direction::Increase, Direction::Increase, Direction::Stable,
                       Direction::Decrease, true, false, true));

  auto tnew = stats::contingency_table(facts, ChangeType::New);
  CHECK(tnew.n == 2);
  CHECK(tnew.at(Direction::Decrease, Direction::Decrease) == 1);
  CHECK(tnew.at(Direction::Increase, Direction::Increase) == 1);

  auto tdel = stats::contingency_table(facts, ChangeType::Deleted);
  CHECK(tdel.n == 1);
  CHECK(tdel.at(Direction::Decrease, Direction::Stable) == 1);

  auto tmod = stats::contingency_table(facts, ChangeType::Modified);
  CHECK(tmod.n == 1);
  CHECK(tmod.at(Direction::Increase, Direction::Decrease) == 1);
}

TEST_CASE("independent t-test on a textbook pair") {
  auto r = stats::t_test_independent({1, 2, 3}, {2, 3, 4});
  REQUIRE(r.applicable);
  CHECK(std::fabs(r.t - (-std::sqrt(1.5))) < 1e-4);
  CHECK(r.dof == doctest::Approx(4.0));
  CHECK(std::fabs(r.p_value - 0.2878) < 5e-3);
  CHECK(r.mean_a == doctest::Approx(2.0));
  CHECK(r.mean_b == doctest::Approx(3.0));

  // equal group variances: Welch agrees with the pooled test
  auto w = stats::t_test_independent({1, 2, 3}, {2, 3, 4}, true);
  REQUIRE(w.applicable);
  CHECK(w.t == doctest::Approx(r.t).epsilon(1e-12));
  CHECK(w.dof == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("welch reduces the degrees of freedom under unequal variances") {
  auto r = stats::t_test_independent({1, 5, 9, 13}, {4.0, 4.1, 3.9, 4.0}, true);
  REQUIRE(r.applicable);
  CHECK(r.dof < 4.0);
  auto pooled = stats::t_test_independent({1, 5, 9, 13}, {4.0, 4.1, 3.9, 4.0}, false);
  CHECK(pooled.dof == doctest::Approx(6.0));
}

TEST_CASE("t-test edge cases") {
  CHECK_FALSE(stats::t_test_independent({1}, {2, 3}).applicable);
  CHECK_FALSE(stats::t_test_independent({}, {2, 3}).applicable);
  CHECK(stats::t_test_independent({1}, {2, 3}).note ==
        "needs at least two samples per group");

  auto flat = stats::t_test_independent({2, 2}, {2, 2});
  REQUIRE(flat.applicable);
  CHECK(flat.t == 0.0);
  CHECK(flat.p_value == 1.0);

  auto split = stats::t_test_independent({2, 2}, {3, 3});
  CHECK_FALSE(split.applicable);
  CHECK(split.note == "zero variance in both groups with unequal means");

  auto wflat = stats::t_test_independent({2, 2}, {2, 2}, true);
  REQUIRE(wflat.applicable);
  CHECK(wflat.t == 0.0);
}

TEST_CASE("t statistic is antisymmetric in the group order") {
  std::mt19937 rng(5150);
  std::uniform_real_distribution<double> dist(-10, 10);
  for (int iter = 0; iter < 50; ++iter) {
    std::vector<double> a, b;
    for (int i = 0; i < 2 + static_cast<int>(rng() % 8); ++i) a.push_back(dist(rng));
    for (int i = 0; i < 2 + static_cast<int>(rng() % 8); ++i) b.push_back(dist(rng));
    auto ab = stats::t_test_independent(a, b);
    auto ba = stats::t_test_independent(b, a);
    CAPTURE(iter);
    REQUIRE(ab.applicable == ba.applicable);
    if (!ab.applicable) continue;
    CHECK(ab.t == doctest::Approx(-ba.t).epsilon(1e-9));
    CHECK(ab.p_value == doctest::Approx(ba.p_value).epsilon(1e-9));
  }
}

TEST_CASE("clean share counts strictly-below-baseline arrivals") {
  std::vector<TransitionFacts> facts(5);
  facts[0].has_new = true;
  facts[0].new_td = 0;
  facts[0].new_ncloc = 10;
  facts[0].prev_density = Rational(1, 10);
  facts[1].has_new = true;  // exactly at the baseline: not cleaner
  facts[1].new_td = 1;
  facts[1].new_ncloc = 3;
  facts[1].prev_density = Rational(1, 3);
  facts[2].has_new = true;  // no measurable lines
  facts[2].new_ncloc = 0;
  facts[3].has_new = true;  // degenerate transition
  facts[3].new_td = 0;
  facts[3].new_ncloc = 5;
  facts[3].degenerate = true;
  facts[4].has_new = false;

  auto share = stats::percent_cleaner_new(facts);
  REQUIRE(share.applicable);
  CHECK(share.with_new == 2);
  CHECK(share.cleaner == 1);
  CHECK(share.percent == doctest::Approx(50.0));

  CHECK_FALSE(stats::percent_cleaner_new({}).applicable);

  // the comparison is exact, immune to floating error near the boundary
  TransitionFacts close;
  close.has_new = true;
  close.new_td = 333333333;
  close.new_ncloc = 1000000000;
  close.prev_density = Rational(1, 3);
  auto r = stats::percent_cleaner_new({close});
  CHECK(r.cleaner == 1);
}

TEST_CASE("median split marks counts strictly above the rounded median") {
  using stats::Level;
  auto split = stats::median_split({1, 2, 3, 10});
  REQUIRE(split.size() == 4);
  CHECK(split == std::vector<Level>{Level::Low, Level::Low, Level::Low, Level::High});

  // median 1.5 rounds away from zero to 2; nothing exceeds it
  CHECK(stats::median_split({1, 2}) == std::vector<Level>{Level::Low, Level::Low});
  // median -2.5 rounds to -3
  CHECK(stats::median_split({-3, -2}) == std::vector<Level>{Level::Low, Level::High});
  CHECK(stats::median_split({1, 2, 3}) ==
        std::vector<Level>{Level::Low, Level::Low, Level::High});
  CHECK(stats::median_split({}).empty());

  auto qc = stats::median_split({5, 3, 1, 0, 2, 4});
  CHECK(qc == std::vector<Level>{Level::High, Level::Low, Level::Low, Level::Low,
                                 Level::Low, Level::High});
}

TEST_CASE("distribution summary uses hinge quartiles") {
  std::vector<Rational> twelve;
  for (int i = 1; i <= 12; ++i) twelve.push_back(Rational(i));
  auto s = stats::summarize_distribution(twelve);
  REQUIRE(s.has_value());
  CHECK(s->n == 12);
  CHECK(s->min == Rational(1));
  CHECK(s->max == Rational(12));
  CHECK(s->median == Rational(13, 2));
  CHECK(s->q1 == Rational(7, 2));
  CHECK(s->q3 == Rational(19, 2));
  CHECK(s->whisker_low == Rational(1));
  CHECK(s->whisker_high == Rational(12));
  CHECK(s->outliers == 0);
}

TEST_CASE("far samples become outliers and shorten the whiskers") {
  std::vector<Rational> xs;
  for (int i = 1; i <= 11; ++i) xs.push_back(Rational(i));
  xs.push_back(Rational(100));
  auto s = stats::summarize_distribution(xs);
  REQUIRE(s.has_value());
  CHECK(s->q1 == Rational(7, 2));
  CHECK(s->q3 == Rational(19, 2));  // fence at 37/2, excludes 100
  CHECK(s->whisker_high == Rational(11));
  CHECK(s->whisker_low == Rational(1));
  CHECK(s->outliers == 1);
  CHECK(s->max == Rational(100));
}

TEST_CASE("tiny distributions degenerate sensibly") {
  auto one = stats::summarize_distribution(std::vector<Rational>{Rational(5)});
  REQUIRE(one.has_value());
  CHECK(one->n == 1);
  CHECK(one->q1 == Rational(5));
  CHECK(one->median == Rational(5));
  CHECK(one->q3 == Rational(5));
  CHECK(one->whisker_low == Rational(5));
  CHECK(one->whisker_high == Rational(5));

  auto odd = stats::summarize_distribution(
      std::vector<Rational>{Rational(3), Rational(1), Rational(2), Rational(5), Rational(4)});
  REQUIRE(odd.has_value());
  CHECK(odd->median == Rational(3));  // middle element excluded from the halves
  CHECK(odd->q1 == Rational(3, 2));
  CHECK(odd->q3 == Rational(9, 2));

  auto four = stats::summarize_distribution(
      std::vector<Rational>{Rational(1), Rational(2), Rational(3), Rational(10)});
  REQUIRE(four.has_value());
  CHECK(four->median == Rational(5, 2));
  CHECK(four->q1 == Rational(3, 2));
  CHECK(four->q3 == Rational(13, 2));
  CHECK(four->outliers == 0);

  CHECK_FALSE(stats::summarize_distribution(std::vector<Rational>{}).has_value());
}

TEST_CASE("double summaries mirror the rational ones") {
  auto s = stats::summarize_distribution(std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8, 9,
                                                             10, 11, 12});
  REQUIRE(s.has_value());
  CHECK(s->median == doctest::Approx(6.5));
  CHECK(s->q1 == doctest::Approx(3.5));
  CHECK(s->q3 == doctest::Approx(9.5));
}

TEST_CASE("new-code samples split by host class novelty") {
  std::vector<stats::NewCodeSample> samples = {
      {false, Rational(1)}, {false, Rational(2)}, {false, Rational(3)},
      {true, Rational(5)},  {true, Rational(7)},
  };
  auto fresh = stats::density_diff_distribution(samples, stats::SampleMode::NewClass);
  REQUIRE(fresh.has_value());
  CHECK(fresh->n == 3);
  CHECK(fresh->median == Rational(2));

  auto grown = stats::density_diff_distribution(samples, stats::SampleMode::ExistingClass);
  REQUIRE(grown.has_value());
  CHECK(grown->n == 2);
  CHECK(grown->median == Rational(6));

  CHECK_FALSE(stats::density_diff_distribution({}, stats::SampleMode::NewClass).has_value());
}
