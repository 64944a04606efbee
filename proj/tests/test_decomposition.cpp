#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>
#include <random>
#include <string>

#include "tddiff/decomposition.hpp"

using namespace tddiff;
using decomp::ChangeAggregates;
using decomp::RevisionMeasurement;

namespace {

// Independent fraction arithmetic for cross-checking, deliberately not
// built on the production Rational type.
struct Frac {
  long long n = 0;
  long long d = 1;
};

Frac frac(long long n, long long d) {
  if (d < 0) {
    n = -n;
    d = -d;
  }
  long long g = std::gcd(n < 0 ? -n : n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  return {n, d};
}

Frac sub(Frac a, Frac b) { return frac(a.n * b.d - b.n * a.d, a.d * b.d); }

// what-if density shift computed from scratch
Frac shift(long long td, long long loc, long long dtd, long long dloc) {
  return sub(frac(td + dtd, loc + dloc), frac(td, loc));
}

bool same(const Rational& r, Frac f) { return r == Rational(f.n, f.d); }

RevisionMeasurement meas(long long td, long long ncloc, const std::string& rev = "r") {
  RevisionMeasurement m;
  m.revision = rev;
  m.td_minutes = td;
  m.ncloc = ncloc;
  return m;
}

}  // namespace

TEST_CASE("what-if contributions against a 100min/1000loc baseline") {
  auto prev = meas(100, 1000);

  auto clean_new = decomp::contribution_new(prev, 0, 100);
  REQUIRE(clean_new.has_value());
  CHECK(*clean_new == Rational(-1, 110));
  CHECK(same(*clean_new, shift(100, 1000, 0, 100)));

  auto mild_new = decomp::contribution_new(prev, 10, 200);
  REQUIRE(mild_new.has_value());
  CHECK(*mild_new == Rational(-1, 120));
  CHECK(same(*mild_new, shift(100, 1000, 10, 200)));

  auto del = decomp::contribution_deleted(prev, 50, 300);
  REQUIRE(del.has_value());
  CHECK(*del == Rational(-1, 35));
  CHECK(same(*del, shift(100, 1000, -50, -300)));

  auto worse = decomp::contribution_modified(prev, 30, 0);
  REQUIRE(worse.has_value());
  CHECK(*worse == Rational(3, 100));
  CHECK(same(*worse, shift(100, 1000, 30, 0)));

  auto diluted = decomp::contribution_modified(prev, -20, 50);
  REQUIRE(diluted.has_value());
  CHECK(*diluted == Rational(-1, 42));
  CHECK(same(*diluted, shift(100, 1000, -20, 50)));
}

TEST_CASE("full transition bundles contributions, system delta and residual") {
  auto prev = meas(100, 1000, "p");
  auto cur = meas(60, 900, "c");
  ChangeAggregates agg;
  agg.new_td = 10;
  agg.new_ncloc = 200;
  agg.new_count = 2;
  agg.deleted_td = 50;
  agg.deleted_ncloc = 300;
  agg.deleted_count = 3;

  auto d = decomp::revision_delta(prev, cur, agg);
  REQUIRE_FALSE(d.degenerate);
  CHECK(d.contribution_new == Rational(-1, 120));
  CHECK(d.contribution_deleted == Rational(-1, 35));
  CHECK(d.contribution_modified == Rational(0));
  CHECK(d.system_delta == Rational(-1, 30));
  CHECK(d.residual == Rational(1, 280));
  CHECK(d.dir_new == Direction::Decrease);
  CHECK(d.dir_deleted == Direction::Decrease);
  CHECK(d.dir_modified == Direction::Stable);
  CHECK(d.dir_system == Direction::Decrease);

  Frac sys = sub(frac(60, 900), frac(100, 1000));
  CHECK(same(d.system_delta, sys));
  Frac res = sub(sub(sub(sys, shift(100, 1000, 10, 200)), shift(100, 1000, -50, -300)),
                 shift(100, 1000, 0, 0));
  CHECK(same(d.residual, res));
}

TEST_CASE("a transition with a single change kind has zero residual") {
  std::mt19937 rng(7031);
  for (int iter = 0; iter < 300; ++iter) {
    long long td = rng() % 500;
    long long loc = 2 + rng() % 2000;
    auto prev = meas(td, loc, "p");
    int kind = static_cast<int>(rng() % 3);
    ChangeAggregates agg;
    long long cur_td = td, cur_loc = loc;
    if (kind == 0) {
      agg.new_count = 1;
      agg.new_ncloc = 1 + rng() % 400;
      agg.new_td = rng() % 300;
      cur_td += agg.new_td;
      cur_loc += agg.new_ncloc;
    } else if (kind == 1) {
      agg.deleted_count = 1;
      agg.deleted_ncloc = 1 + rng() % (loc - 1);
      agg.deleted_td = rng() % (td + 1);
      cur_td -= agg.deleted_td;
      cur_loc -= agg.deleted_ncloc;
    } else {
      agg.modified_count = 1;
      agg.modified_td_delta = static_cast<long long>(rng() % 200) - 100;
      agg.modified_ncloc_delta = static_cast<long long>(rng() % 200) - 100;
      if (loc + agg.modified_ncloc_delta < 1)
        agg.modified_ncloc_delta = 1 - loc;
      if (td + agg.modified_td_delta < 0) agg.modified_td_delta = -td;
      cur_td += agg.modified_td_delta;
      cur_loc += agg.modified_ncloc_delta;
    }
    auto d = decomp::revision_delta(prev, meas(cur_td, cur_loc, "c"), agg);
    CAPTURE(iter);
    REQUIRE_FALSE(d.degenerate);
    CHECK(d.residual == Rational(0));
    Rational active = kind == 0   ? d.contribution_new
                      : kind == 1 ? d.contribution_deleted
                                  : d.contribution_modified;
    CHECK(d.system_delta == active);
  }
}

TEST_CASE("new code at exactly the baseline density contributes nothing") {
  auto prev = meas(100, 1000);
  auto c = decomp::contribution_new(prev, 10, 100);  // same 1/10 density
  REQUIRE(c.has_value());
  CHECK(*c == Rational(0));
  CHECK(direction_of(*c) == Direction::Stable);
}

TEST_CASE("degenerate transitions are flagged with a reason, not computed") {
  ChangeAggregates none;

  auto d1 = decomp::revision_delta(meas(0, 0, "p"), meas(5, 10, "c"), none);
  CHECK(d1.degenerate);
  CHECK(d1.degenerate_reason == "previous revision has no measured code");

  auto d2 = decomp::revision_delta(meas(5, 10, "p"), meas(0, 0, "c"), none);
  CHECK(d2.degenerate);
  CHECK(d2.degenerate_reason == "current revision has no measured code");

  ChangeAggregates wipe;
  wipe.deleted_count = 1;
  wipe.deleted_td = 5;
  wipe.deleted_ncloc = 10;
  auto d3 = decomp::revision_delta(meas(5, 10, "p"), meas(1, 1, "c"), wipe);
  CHECK(d3.degenerate);
  CHECK(d3.degenerate_reason == "deletion what-if removes the whole system");

  ChangeAggregates shrink;
  shrink.modified_count = 1;
  shrink.modified_ncloc_delta = -10;
  auto d4 = decomp::revision_delta(meas(5, 10, "p"), meas(5, 1, "c"), shrink);
  CHECK(d4.degenerate);
  CHECK(d4.degenerate_reason == "modification what-if denominator not positive");

  CHECK_FALSE(decomp::contribution_new(meas(0, 0), 1, 1).has_value());
  CHECK_FALSE(decomp::contribution_deleted(meas(5, 10), 0, 10).has_value());
  CHECK_FALSE(decomp::contribution_modified(meas(5, 10), 0, -10).has_value());
}

TEST_CASE("inconsistent aggregates are rejected") {
  auto prev = meas(10, 100, "p");
  auto cur = meas(10, 100, "c");

  ChangeAggregates a;
  a.new_count = -1;
  CHECK_THROWS_AS(decomp::revision_delta(prev, cur, a), decomp::AggregateError);

  ChangeAggregates b;
  b.new_td = 5;  // totals without any new method
  CHECK_THROWS_AS(decomp::revision_delta(prev, cur, b), decomp::AggregateError);

  ChangeAggregates c;
  c.deleted_count = 1;
  c.deleted_td = -2;
  c.deleted_ncloc = 3;
  CHECK_THROWS_AS(decomp::revision_delta(prev, cur, c), decomp::AggregateError);

  ChangeAggregates d;
  d.new_count = 3;
  d.new_ncloc = 2;  // three methods cannot fit in two lines
  CHECK_THROWS_AS(decomp::revision_delta(prev, cur, d), decomp::AggregateError);

  ChangeAggregates e;
  e.modified_ncloc_delta = 4;  // delta without a modified method
  CHECK_THROWS_AS(decomp::revision_delta(prev, cur, e), decomp::AggregateError);
}

TEST_CASE("density is undefined for an empty system") {
  CHECK_THROWS_AS(meas(3, 0).td_density(), decomp::AggregateError);
  CHECK(meas(3, 6).td_density() == Rational(1, 2));
}

TEST_CASE("checked transitions verify stored totals against method records") {
  source::MethodRecord m;
  m.file_path = "A.java";
  m.enclosing_class = "A";
  m.name = "f";
  m.ncloc = 4;

  changes::ChangeSet cs;
  cs.prev_revision = "p";
  cs.cur_revision = "rev0042";
  changes::MethodChange mc;
  mc.kind = changes::ChangeKind::New;
  mc.after = m;
  mc.td_after = 15;
  cs.changes.push_back(mc);
  cs.added = {15, 4, 1};

  auto prev = meas(10, 100, "p");
  auto cur = meas(25, 104, "rev0042");
  auto d = decomp::revision_delta_checked(prev, cur, cs);
  REQUIRE_FALSE(d.degenerate);
  CHECK(d.contribution_new == Rational(25, 104) - Rational(10, 100));
  CHECK(d.residual == Rational(0));

  cs.added.td = 99;  // stored totals now disagree with the record
  CHECK_THROWS_WITH_AS(decomp::revision_delta_checked(prev, cur, cs),
                       doctest::Contains("rev0042"), decomp::AggregateError);
}

TEST_CASE("residuals combine additively computed contributions") {
  // Two simultaneous improvements overlap; the leftover interaction term is
  // reported, never spread across the parts.
  CHECK(Rational(-1, 120) + Rational(-1, 35) == Rational(-31, 840));
  auto prev = meas(100, 1000, "p");
  auto cur = meas(60, 900, "c");
  ChangeAggregates agg;
  agg.new_td = 10;
  agg.new_ncloc = 200;
  agg.new_count = 1;
  agg.deleted_td = 50;
  agg.deleted_ncloc = 300;
  agg.deleted_count = 1;
  auto d = decomp::revision_delta(prev, cur, agg);
  CHECK(d.system_delta - (d.contribution_new + d.contribution_deleted +
                          d.contribution_modified) ==
        d.residual);
  CHECK(d.residual != Rational(0));
}
