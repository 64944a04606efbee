#include "tddiff/history.hpp"

#include <algorithm>
#include <sstream>

#include "tddiff/subprocess.hpp"

namespace tddiff::history {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_nul(const std::string& s) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start < s.size()) {
    size_t end = s.find('\0', start);
    if (end == std::string::npos) end = s.size();
    if (end > start) out.push_back(s.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

}  // namespace

const CommitNode& CommitDag::node(const std::string& id) const {
  auto it = nodes.find(id);
  if (it == nodes.end()) throw HistoryError("unknown commit in graph: " + id);
  return it->second;
}

GitRepository::GitRepository(std::string repo_path) : repo_path_(std::move(repo_path)) {
  ProcessResult probe =
      run_process({"git", "-C", repo_path_, "rev-parse", "--git-dir"});
  if (!probe.ok())
    throw HistoryError("not a git repository: " + repo_path_ + ": " + trim(probe.err));
  ProcessResult shallow =
      run_process({"git", "-C", repo_path_, "rev-parse", "--is-shallow-repository"});
  if (shallow.ok() && trim(shallow.out) == "true")
    throw HistoryError("shallow clone, full history required: " + repo_path_);
  ProcessResult empty = run_process(
      {"git", "-C", repo_path_, "hash-object", "-t", "tree", "--stdin"});
  if (!empty.ok())
    throw HistoryError("cannot determine empty tree id: " + trim(empty.err));
  empty_tree_ = trim(empty.out);
}

std::string GitRepository::git_raw(const std::vector<std::string>& args) const {
  std::vector<std::string> argv = {"git", "-C", repo_path_};
  argv.insert(argv.end(), args.begin(), args.end());
  ProcessResult r = run_process(argv);
  if (!r.ok()) {
    std::string cmd;
    for (const auto& a : args) cmd += a + " ";
    throw HistoryError("git " + cmd + "failed: " + trim(r.err));
  }
  return r.out;
}

std::vector<std::string> GitRepository::git(const std::vector<std::string>& args) const {
  std::istringstream in(git_raw(args));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

std::string GitRepository::resolve_commit(const std::string& ref) {
  ProcessResult r = run_process(
      {"git", "-C", repo_path_, "rev-parse", "--verify", "--quiet", ref + "^{commit}"});
  if (!r.ok()) throw HistoryError("unknown branch or revision: " + ref);
  return trim(r.out);
}

CommitNode GitRepository::commit_info(const std::string& id) {
  std::vector<std::string> lines =
      git({"rev-list", "--timestamp", "--parents", "-n", "1", id});
  if (lines.empty()) throw HistoryError("cannot read commit: " + id);
  std::istringstream ss(lines.front());
  CommitNode node;
  ss >> node.timestamp >> node.id;
  std::string parent;
  while (ss >> parent) node.parent_ids.push_back(parent);
  if (node.id.empty()) throw HistoryError("cannot parse commit listing for: " + id);
  return node;
}

std::vector<CommitNode> GitRepository::walk(const std::string& head) {
  std::vector<CommitNode> nodes;
  for (const std::string& line : git({"rev-list", "--timestamp", "--parents", head})) {
    std::istringstream ss(line);
    CommitNode node;
    ss >> node.timestamp >> node.id;
    std::string parent;
    while (ss >> parent) node.parent_ids.push_back(parent);
    if (node.id.empty()) continue;
    nodes.push_back(std::move(node));
  }
  for (CommitNode& node : nodes) {
    if (node.parent_ids.empty()) {
      std::string raw = git_raw({"diff-tree", "-r", "-z", "--no-renames",
                                 "--name-only", empty_tree_, node.id});
      auto& set = node.touched_by_parent[""];
      for (auto& p : split_nul(raw)) set.insert(p);
      continue;
    }
    for (const std::string& parent : node.parent_ids) {
      std::string raw = git_raw(
          {"diff-tree", "-r", "-z", "--no-renames", "--name-only", parent, node.id});
      auto& set = node.touched_by_parent[parent];
      for (auto& p : split_nul(raw)) set.insert(p);
    }
  }
  return nodes;
}

std::vector<FileStatus> GitRepository::diff_status(const std::string& from,
                                                   const std::string& to) {
  std::string raw = git_raw(
      {"diff-tree", "-r", "-z", "--no-renames", "--name-status", from, to});
  std::vector<std::string> fields = split_nul(raw);
  std::vector<FileStatus> out;
  for (size_t i = 0; i + 1 < fields.size(); i += 2) {
    FileStatus fs;
    char s = fields[i].empty() ? 'M' : fields[i][0];
    fs.kind = s == 'A' ? FileStatus::Added
              : s == 'D' ? FileStatus::Deleted
                         : FileStatus::Modified;
    fs.path = fields[i + 1];
    out.push_back(std::move(fs));
  }
  return out;
}

std::vector<std::string> GitRepository::list_files(const std::string& rev) {
  return split_nul(git_raw({"ls-tree", "-r", "-z", "--name-only", rev}));
}

std::string GitRepository::read_file(const std::string& rev, const std::string& path) {
  return git_raw({"cat-file", "blob", rev + ":" + path});
}

CommitDag build_commit_dag(HistoryProvider& repo, const std::string& branch) {
  CommitDag dag;
  dag.head = repo.resolve_commit(branch);
  for (CommitNode& node : repo.walk(dag.head)) {
    std::string id = node.id;
    dag.nodes.emplace(std::move(id), std::move(node));
  }
  if (!dag.nodes.count(dag.head))
    throw HistoryError("head commit missing from walk: " + dag.head);
  for (const auto& [id, node] : dag.nodes) {
    for (const std::string& p : node.parent_ids) {
      if (!dag.nodes.count(p))
        throw HistoryError("incomplete history: parent " + p + " of " + id +
                           " not reachable");
    }
  }
  return dag;
}

RevisionSeries linearize_longest_path(const CommitDag& dag) {
  if (!dag.nodes.count(dag.head)) throw HistoryError("unknown head: " + dag.head);

  std::map<std::string, std::vector<std::string>> children;
  std::map<std::string, int> indegree;
  for (const auto& [id, node] : dag.nodes) {
    indegree.emplace(id, static_cast<int>(node.parent_ids.size()));
    for (const std::string& p : node.parent_ids) children[p].push_back(id);
  }

  // prefer: does `a` beat `b` as the chosen parent at equal path length?
  auto prefer = [&](const std::string& a, const std::string& b) {
    const CommitNode& na = dag.node(a);
    const CommitNode& nb = dag.node(b);
    if (na.timestamp != nb.timestamp) return na.timestamp < nb.timestamp;
    return a < b;
  };

  std::map<std::string, long long> len;
  std::map<std::string, std::string> best_parent;
  std::set<std::string> ready;
  for (const auto& [id, deg] : indegree)
    if (deg == 0) ready.insert(id);

  size_t processed = 0;
  while (!ready.empty()) {
    std::string u = *ready.begin();
    ready.erase(ready.begin());
    ++processed;
    if (!len.count(u)) len[u] = 1;
    auto ch = children.find(u);
    if (ch != children.end()) {
      for (const std::string& c : ch->second) {
        long long cand = len[u] + 1;
        auto it = len.find(c);
        if (it == len.end() || cand > it->second) {
          len[c] = cand;
          best_parent[c] = u;
        } else if (cand == it->second && prefer(u, best_parent[c])) {
          best_parent[c] = u;
        }
        if (--indegree[c] == 0) ready.insert(c);
      }
    }
  }
  if (processed != dag.nodes.size())
    throw HistoryError("commit graph contains a cycle");

  RevisionSeries series;
  std::string cur = dag.head;
  while (true) {
    series.commits.push_back(cur);
    auto it = best_parent.find(cur);
    if (it == best_parent.end()) break;
    cur = it->second;
  }
  std::reverse(series.commits.begin(), series.commits.end());
  return series;
}

RevisionSeries filter_source_transitions(const CommitDag& dag,
                                         const RevisionSeries& series,
                                         const PathPredicate& accept,
                                         const std::string& note) {
  RevisionSeries out;
  out.filter_note = note;
  if (series.commits.empty()) return out;
  out.commits.push_back(series.commits.front());
  for (size_t i = 1; i < series.commits.size(); ++i) {
    const CommitNode& node = dag.node(series.commits[i]);
    auto touched = node.touched_by_parent.find(series.commits[i - 1]);
    if (touched == node.touched_by_parent.end())
      throw HistoryError("series entries are not parent/child: " +
                         series.commits[i - 1] + " -> " + series.commits[i]);
    bool keep = false;
    for (const std::string& path : touched->second) {
      if (accept(path)) {
        keep = true;
        break;
      }
    }
    if (keep) out.commits.push_back(series.commits[i]);
  }
  return out;
}

PathPredicate extension_predicate(std::vector<std::string> extensions) {
  return [exts = std::move(extensions)](const std::string& path) {
    for (const std::string& ext : exts) {
      if (path.size() >= ext.size() &&
          path.compare(path.size() - ext.size(), ext.size(), ext) == 0)
        return true;
    }
    return false;
  };
}

}  // namespace tddiff::history
