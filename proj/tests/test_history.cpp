#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "git_fixture.hpp"
#include "tddiff/history.hpp"

using namespace tddiff;
using testutil::GitRepoFixture;

namespace {

history::CommitNode make_node(std::string id, std::vector<std::string> parents,
                              int64_t ts) {
  history::CommitNode n;
  n.id = std::move(id);
  n.parent_ids = std::move(parents);
  n.timestamp = ts;
  return n;
}

history::CommitDag make_dag(std::vector<history::CommitNode> nodes, std::string head) {
  history::CommitDag dag;
  for (history::CommitNode& n : nodes) {
    std::string id = n.id;
    dag.nodes.emplace(std::move(id), std::move(n));
  }
  dag.head = std::move(head);
  return dag;
}

// Memoized depth-first longest path, written independently of the library's
// topological dynamic program.
struct LongestPathOracle {
  const history::CommitDag& dag;
  std::map<std::string, long long> lens;

  long long len(const std::string& id) {
    auto it = lens.find(id);
    if (it != lens.end()) return it->second;
    long long best = 1;
    for (const std::string& p : dag.node(id).parent_ids)
      best = std::max(best, len(p) + 1);
    lens[id] = best;
    return best;
  }

  std::string pick_parent(const std::string& id) {
    std::string best;
    long long best_len = -1;
    for (const std::string& p : dag.node(id).parent_ids) {
      long long l = len(p);
      if (l < best_len) continue;
      if (l > best_len) {
        best = p;
        best_len = l;
        continue;
      }
      const auto& cand = dag.node(p);
      const auto& cur = dag.node(best);
      if (cand.timestamp < cur.timestamp ||
          (cand.timestamp == cur.timestamp && p < best))
        best = p;
    }
    return best;
  }

  std::vector<std::string> path_to(const std::string& head) {
    std::vector<std::string> out;
    std::string cur = head;
    while (true) {
      out.push_back(cur);
      if (dag.node(cur).parent_ids.empty()) break;
      cur = pick_parent(cur);
    }
    std::reverse(out.begin(), out.end());
    return out;
  }
};

struct FakeRepo : history::HistoryProvider {
  std::map<std::string, history::CommitNode> commits;
  std::string head;

  std::string resolve_commit(const std::string& ref) override {
    if (commits.count(ref)) return ref;
    if (ref == "master") return head;
    throw history::HistoryError("unknown branch or revision: " + ref);
  }
  history::CommitNode commit_info(const std::string& id) override {
    return commits.at(id);
  }
  std::vector<history::CommitNode> walk(const std::string& from) override {
    std::vector<history::CommitNode> out;
    std::set<std::string> seen;
    std::vector<std::string> queue = {from};
    while (!queue.empty()) {
      std::string id = queue.back();
      queue.pop_back();
      if (!seen.insert(id).second) continue;
      auto it = commits.find(id);
      if (it == commits.end()) continue;  // simulates a truncated store
      out.push_back(it->second);
      for (const std::string& p : it->second.parent_ids) queue.push_back(p);
    }
    return out;
  }
  std::vector<history::FileStatus> diff_status(const std::string&,
                                               const std::string&) override {
    return {};
  }
  std::vector<std::string> list_files(const std::string&) override { return {}; }
  std::string read_file(const std::string&, const std::string&) override { return ""; }
};

}  // namespace

TEST_CASE("longest path matches a depth-first oracle on random graphs") {
  std::mt19937 rng(424242);
  for (int iter = 0; iter < 200; ++iter) {
    int k = 1 + static_cast<int>(rng() % 12);
    std::vector<history::CommitNode> nodes;
    for (int i = 0; i < k; ++i) {
      char id[8];
      std::snprintf(id, sizeof id, "c%02d", i);
      std::vector<std::string> parents;
      if (i > 0 && rng() % 100 >= 15) {
        int want = 1 + static_cast<int>(rng() % std::min(i, 3));
        std::set<int> picks;
        while (static_cast<int>(picks.size()) < want)
          picks.insert(static_cast<int>(rng() % i));
        for (int p : picks) {
          char pid[8];
          std::snprintf(pid, sizeof pid, "c%02d", p);
          parents.push_back(pid);
        }
      }
      int64_t ts = 100 * (1 + static_cast<int64_t>(rng() % 3));  // collisions intended
      nodes.push_back(make_node(id, std::move(parents), ts));
    }
    std::string head = nodes.back().id;
    history::CommitDag dag = make_dag(std::move(nodes), head);

    LongestPathOracle oracle{dag};
    std::vector<std::string> expected = oracle.path_to(head);
    history::RevisionSeries got = history::linearize_longest_path(dag);
    CAPTURE(iter);
    CHECK(got.commits == expected);
    CHECK(got.commits.back() == head);
  }
}

TEST_CASE("path length wins before any tie-break") {
  auto dag = make_dag(
      {
          make_node("a", {}, 500),
          make_node("b", {"a"}, 50),   // early timestamp, short side
          make_node("c", {"a"}, 900),
          make_node("d", {"c"}, 901),  // long side
          make_node("m", {"b", "d"}, 1000),
      },
      "m");
  CHECK(history::linearize_longest_path(dag).commits ==
        std::vector<std::string>{"a", "c", "d", "m"});
}

TEST_CASE("equal lengths prefer the smaller timestamp, then the smaller id") {
  auto by_time = make_dag(
      {
          make_node("a", {}, 100),
          make_node("x", {"a"}, 150),
          make_node("y", {"a"}, 200),
          make_node("m", {"y", "x"}, 300),
      },
      "m");
  CHECK(history::linearize_longest_path(by_time).commits ==
        std::vector<std::string>{"a", "x", "m"});

  auto by_id = make_dag(
      {
          make_node("a", {}, 100),
          make_node("p", {"a"}, 200),
          make_node("q", {"a"}, 200),
          make_node("m", {"q", "p"}, 300),
      },
      "m");
  CHECK(history::linearize_longest_path(by_id).commits ==
        std::vector<std::string>{"a", "p", "m"});
}

TEST_CASE("cycles and unknown heads are errors") {
  auto cyclic = make_dag({make_node("a", {"b"}, 1), make_node("b", {"a"}, 2)}, "a");
  CHECK_THROWS_AS(history::linearize_longest_path(cyclic), history::HistoryError);

  auto dag = make_dag({make_node("a", {}, 1)}, "zz");
  CHECK_THROWS_AS(history::linearize_longest_path(dag), history::HistoryError);
  CHECK_THROWS_AS(dag.node("nope"), history::HistoryError);
}

TEST_CASE("filtering keeps the first entry and source-touching steps") {
  auto node_with_touch = [](std::string id, std::vector<std::string> parents, int64_t ts,
                            std::map<std::string, std::set<std::string>> touched) {
    history::CommitNode n = make_node(std::move(id), std::move(parents), ts);
    n.touched_by_parent = std::move(touched);
    return n;
  };
  auto dag = make_dag(
      {
          node_with_touch("r", {}, 1, {{"", {"README.md", "A.java"}}}),
          node_with_touch("s", {"r"}, 2, {{"r", {"docs/guide.md"}}}),
          node_with_touch("t", {"s"}, 3, {{"s", {"A.java"}}}),
          node_with_touch("u", {"t"}, 4, {{"t", {"build.gradle"}}}),
      },
      "u");
  history::RevisionSeries series;
  series.commits = {"r", "s", "t", "u"};
  auto pred = history::extension_predicate({".java"});
  history::RevisionSeries kept =
      history::filter_source_transitions(dag, series, pred, "java only");
  CHECK(kept.commits == std::vector<std::string>{"r", "t"});
  CHECK(kept.filter_note == "java only");

  history::RevisionSeries wrong;
  wrong.commits = {"r", "u"};  // not parent and child
  CHECK_THROWS_AS(history::filter_source_transitions(dag, wrong, pred, ""),
                  history::HistoryError);

  history::RevisionSeries empty;
  CHECK(history::filter_source_transitions(dag, empty, pred, "n").commits.empty());
}

TEST_CASE("extension predicate is a case-sensitive suffix match") {
  auto pred = history::extension_predicate({".java", ".kt"});
  CHECK(pred("src/Main.java"));
  CHECK(pred("App.kt"));
  CHECK_FALSE(pred("Main.JAVA"));
  CHECK_FALSE(pred("java"));
  CHECK_FALSE(pred("notes.md"));
  CHECK(pred(".java"));
}

TEST_CASE("walks that cannot reach a recorded parent are rejected") {
  FakeRepo repo;
  repo.head = "h";
  repo.commits["h"] = make_node("h", {"gone"}, 10);
  CHECK_THROWS_WITH_AS(history::build_commit_dag(repo, "master"),
                       doctest::Contains("incomplete history"), history::HistoryError);
}

TEST_CASE("a linear git history maps onto the expected series") {
  GitRepoFixture f;
  f.write("src/Main.java", "class Main {\n  void a() {}\n}\n");
  std::string c1 = f.commit("start", 1000);
  f.write("src/Main.java", "class Main {\n  void a() { log(); }\n}\n");
  std::string c2 = f.commit("edit", 2000);
  f.write("src/Util.java", "class Util {\n  static int id(int x) { return x; }\n}\n");
  std::string c3 = f.commit("util", 3000);

  history::GitRepository repo(f.dir.str());
  history::CommitDag dag = history::build_commit_dag(repo, "master");
  CHECK(dag.nodes.size() == 3);
  CHECK(dag.head == c3);
  CHECK(dag.node(c1).touched_by_parent.at("").count("src/Main.java") == 1);
  CHECK(dag.node(c2).timestamp == 2000);

  history::RevisionSeries series = history::linearize_longest_path(dag);
  CHECK(series.commits == std::vector<std::string>{c1, c2, c3});

  auto pred = history::extension_predicate({".java"});
  CHECK(history::filter_source_transitions(dag, series, pred, "").commits ==
        series.commits);

  CHECK(repo.resolve_commit("master") == c3);
  CHECK(repo.resolve_commit(c1) == c1);

  auto files = repo.list_files(c3);
  CHECK(files == std::vector<std::string>{"src/Main.java", "src/Util.java"});
  CHECK(repo.read_file(c1, "src/Main.java") == "class Main {\n  void a() {}\n}\n");

  history::CommitNode info = repo.commit_info(c2);
  CHECK(info.parent_ids == std::vector<std::string>{c1});
  CHECK(info.timestamp == 2000);
}

TEST_CASE("documentation-only commits drop out of the filtered series") {
  GitRepoFixture f;
  f.write("A.java", "class A {}\n");
  std::string c1 = f.commit("code", 1000);
  f.write("README.md", "notes\n");
  std::string c2 = f.commit("docs", 2000);
  f.write("A.java", "class A { void f() {} }\n");
  std::string c3 = f.commit("more code", 3000);

  history::GitRepository repo(f.dir.str());
  history::CommitDag dag = history::build_commit_dag(repo, "master");
  history::RevisionSeries series = history::linearize_longest_path(dag);
  auto kept = history::filter_source_transitions(
      dag, series, history::extension_predicate({".java"}), "");
  CHECK(kept.commits == std::vector<std::string>{c1, c3});

  // The retained neighbors are grandparent and grandchild; diffs still work.
  auto statuses = repo.diff_status(c1, c3);
  REQUIRE(statuses.size() == 2);
}

TEST_CASE("the longer branch of a merge wins linearization") {
  GitRepoFixture f;
  f.write("Main.java", "class Main {}\n");
  std::string c1 = f.commit("base", 1000);
  f.checkout("feature", true);
  f.write("Feature.java", "class Feature {}\n");
  std::string b1 = f.commit("feature 1", 1100);
  f.write("Feature.java", "class Feature { void go() {} }\n");
  std::string b2 = f.commit("feature 2", 1200);
  f.checkout("master");
  f.write("Main.java", "class Main { void m() {} }\n");
  std::string c2 = f.commit("mainline", 1300);
  std::string m = f.merge("feature", "merge feature", 1400);

  history::GitRepository repo(f.dir.str());
  history::CommitDag dag = history::build_commit_dag(repo, "master");
  CHECK(dag.nodes.size() == 5);
  CHECK(dag.node(m).parent_ids == std::vector<std::string>{c2, b2});

  history::RevisionSeries series = history::linearize_longest_path(dag);
  CHECK(series.commits == std::vector<std::string>{c1, b1, b2, m});

  history::CommitNode info = repo.commit_info(m);
  CHECK(info.parent_ids == std::vector<std::string>{c2, b2});
  CHECK(info.timestamp == 1400);
}

TEST_CASE("equal-length merge sides resolve by the earlier timestamp") {
  GitRepoFixture f;
  f.write("Main.java", "class Main {}\n");
  std::string c1 = f.commit("base", 1000);
  f.checkout("side", true);
  f.write("X.java", "class X {}\n");
  std::string x1 = f.commit("side work", 1500);
  f.checkout("master");
  f.write("Y.java", "class Y {}\n");
  std::string y1 = f.commit("main work", 2000);
  std::string m = f.merge("side", "join", 2500);

  history::GitRepository repo(f.dir.str());
  history::CommitDag dag = history::build_commit_dag(repo, "master");
  history::RevisionSeries series = history::linearize_longest_path(dag);
  CHECK(series.commits == std::vector<std::string>{c1, x1, m});
}

TEST_CASE("status letters map to add, modify and delete") {
  GitRepoFixture f;
  f.write("Keep.java", "class Keep {}\n");
  f.write("Gone.java", "class Gone {}\n");
  std::string c1 = f.commit("two files", 1000);
  f.write("Keep.java", "class Keep { int x; }\n");
  f.write("Fresh.java", "class Fresh {}\n");
  f.remove("Gone.java");
  std::string c2 = f.commit("churn", 2000);

  history::GitRepository repo(f.dir.str());
  std::map<std::string, history::FileStatus::Kind> kinds;
  for (const auto& fs : repo.diff_status(c1, c2)) kinds[fs.path] = fs.kind;
  REQUIRE(kinds.size() == 3);
  CHECK(kinds["Fresh.java"] == history::FileStatus::Added);
  CHECK(kinds["Keep.java"] == history::FileStatus::Modified);
  CHECK(kinds["Gone.java"] == history::FileStatus::Deleted);
}

TEST_CASE("broken repositories are reported up front") {
  testutil::TempDir plain("tddiff-notrepo");
  CHECK_THROWS_AS(history::GitRepository(plain.str()), history::HistoryError);

  GitRepoFixture f;
  f.write("A.java", "class A {}\n");
  f.commit("one", 1000);
  f.write("A.java", "class A { void f() {} }\n");
  f.commit("two", 2000);

  history::GitRepository repo(f.dir.str());
  CHECK_THROWS_AS(repo.resolve_commit("no-such-branch"), history::HistoryError);

  testutil::TempDir clone_parent("tddiff-shallow");
  std::string dst = clone_parent.str() + "/shallow";
  testutil::run_checked({"git", "clone", "-q", "--depth", "1",
                         "file://" + f.dir.str(), dst});
  CHECK_THROWS_WITH_AS(history::GitRepository{dst}, doctest::Contains("shallow"),
                       history::HistoryError);
}
