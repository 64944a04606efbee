#include "tddiff/source_model.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace tddiff::source {

namespace {

bool ident_start(unsigned char c) {
  return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80;
}

bool ident_cont(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '$' || c >= 0x80;
}

bool ident_shaped(const std::string& t) {
  return !t.empty() && ident_start(static_cast<unsigned char>(t[0]));
}

// Longest-match first.
const char* kMultiOps[] = {
    ">>>=", "<<=", ">>=", ">>>", "...", "<<", ">>", "->", "::", "==", "!=",
    "<=",   ">=",  "&&",  "||",  "++",  "--", "+=", "-=", "*=", "/=", "%=",
    "&=",   "|=",  "^=",
};

}  // namespace

TokenStream tokenize(const std::string& text) {
  TokenStream out;
  size_t i = 0, n = text.size();
  int line = 1;

  auto push = [&](size_t from, size_t to, int start_line, int end_line) {
    out.tokens.push_back({text.substr(from, to - from), start_line, end_line});
  };

  while (i < n) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && text[i + 1] == '/') {
      while (i < n && text[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && text[i + 1] == '*') {
      i += 2;
      bool closed = false;
      while (i < n) {
        if (text[i] == '\n') ++line;
        if (text[i] == '*' && i + 1 < n && text[i + 1] == '/') {
          i += 2;
          closed = true;
          break;
        }
        ++i;
      }
      if (!closed) out.truncated = true;
      continue;
    }
    if (c == '"' && i + 2 < n && text[i + 1] == '"' && text[i + 2] == '"') {
      size_t start = i;
      int start_line = line;
      i += 3;
      bool closed = false;
      while (i < n) {
        if (text[i] == '\\' && i + 1 < n) {
          i += 2;
          continue;
        }
        if (text[i] == '\n') ++line;
        if (text[i] == '"' && i + 2 < n && text[i + 1] == '"' && text[i + 2] == '"') {
          i += 3;
          closed = true;
          break;
        }
        ++i;
      }
      if (!closed) {
        out.truncated = true;
        i = n;
      }
      push(start, i, start_line, line);
      continue;
    }
    if (c == '"' || c == '\'') {
      char quote = c;
      size_t start = i;
      int start_line = line;
      ++i;
      bool closed = false;
      while (i < n) {
        if (text[i] == '\\' && i + 1 < n) {
          i += 2;
          continue;
        }
        if (text[i] == '\n') break;  // recover at end of line
        if (text[i] == quote) {
          ++i;
          closed = true;
          break;
        }
        ++i;
      }
      if (!closed && i >= n) out.truncated = true;
      push(start, i, start_line, start_line);
      continue;
    }
    unsigned char uc = static_cast<unsigned char>(c);
    if (ident_start(uc)) {
      size_t start = i;
      while (i < n && ident_cont(static_cast<unsigned char>(text[i]))) ++i;
      push(start, i, line, line);
      continue;
    }
    if (std::isdigit(uc) || (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      size_t start = i;
      while (i < n) {
        char d = text[i];
        if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '.') {
          ++i;
        } else if ((d == '+' || d == '-') && i > start &&
                   (text[i - 1] == 'e' || text[i - 1] == 'E' || text[i - 1] == 'p' ||
                    text[i - 1] == 'P')) {
          ++i;
        } else {
          break;
        }
      }
      push(start, i, line, line);
      continue;
    }
    bool matched = false;
    for (const char* op : kMultiOps) {
      size_t len = std::char_traits<char>::length(op);
      if (text.compare(i, len, op) == 0) {
        push(i, i + len, line, line);
        i += len;
        matched = true;
        break;
      }
    }
    if (matched) continue;
    push(i, i + 1, line, line);
    ++i;
  }
  return out;
}

int count_ncloc(const std::string& text) {
  TokenStream ts = tokenize(text);
  std::set<int> covered;
  for (const Token& t : ts.tokens)
    for (int l = t.line; l <= t.end_line; ++l) covered.insert(l);
  return static_cast<int>(covered.size());
}

uint64_t fingerprint(const std::vector<Token>& body_tokens) {
  uint64_t h = 14695981039346656037ULL;
  auto mix = [&](unsigned char b) {
    h ^= b;
    h *= 1099511628211ULL;
  };
  for (const Token& t : body_tokens) {
    for (char c : t.text) mix(static_cast<unsigned char>(c));
    mix(0x1F);
  }
  return h;
}

std::string MethodRecord::signature() const {
  std::string s = name;
  s += '(';
  for (size_t i = 0; i < param_types.size(); ++i) {
    if (i) s += ',';
    s += param_types[i];
  }
  s += ')';
  return s;
}

std::string MethodRecord::key() const {
  return file_path + "|" + enclosing_class + "|" + signature();
}

namespace {

const std::set<std::string> kControlNames = {
    "if",   "for",    "while", "switch",  "catch",  "synchronized", "do",
    "try",  "return", "new",   "else",    "case",   "default",      "assert",
    "throw", "yield", "this",  "super",   "break",  "continue",
};

using Tokens = std::vector<Token>;

// Looks for a type declaration keyword at bracket depth 0 in [s, e).
bool find_type_decl(const Tokens& toks, size_t s, size_t e, std::string& name,
                    bool& is_enum) {
  int depth = 0;
  for (size_t k = s; k < e; ++k) {
    const std::string& t = toks[k].text;
    if (t == "(" || t == "[") ++depth;
    else if (t == ")" || t == "]") --depth;
    if (depth != 0) continue;
    bool type_kw = t == "class" || t == "interface" || t == "enum" || t == "record";
    if (!type_kw) continue;
    if (k > s && toks[k - 1].text == ".") continue;  // Foo.class
    if (k + 1 >= e || !ident_shaped(toks[k + 1].text)) continue;
    if (t == "record") {
      // Contextual keyword: require the component list to follow.
      size_t after = k + 2;
      if (after >= e || (toks[after].text != "(" && toks[after].text != "<")) continue;
    }
    name = toks[k + 1].text;
    is_enum = t == "enum";
    return true;
  }
  return false;
}

bool has_toplevel_assign_or_arrow(const Tokens& toks, size_t s, size_t e) {
  int depth = 0;
  for (size_t k = s; k < e; ++k) {
    const std::string& t = toks[k].text;
    if (t == "(" || t == "[") ++depth;
    else if (t == ")" || t == "]") --depth;
    else if (depth == 0 && (t == "=" || t == "->")) return true;
  }
  return false;
}

// Normalizes a parameter list slice into type strings, dropping names,
// annotations and the final modifier.
std::vector<std::string> parse_params(const Tokens& toks, size_t s, size_t e) {
  std::vector<std::vector<std::string>> segments(1);
  int paren = 0, bracket = 0, angle = 0;
  for (size_t k = s; k < e; ++k) {
    const std::string& t = toks[k].text;
    if (t == "@") {
      // Skip the annotation name and an optional argument list.
      ++k;
      while (k + 1 < e && toks[k + 1].text == ".") k += 2;
      if (k + 1 < e && toks[k + 1].text == "(") {
        int d = 1;
        k += 2;
        while (k < e && d > 0) {
          if (toks[k].text == "(") ++d;
          else if (toks[k].text == ")") --d;
          ++k;
        }
        --k;
      }
      continue;
    }
    if (t == "(") ++paren;
    else if (t == ")") --paren;
    else if (t == "[") ++bracket;
    else if (t == "]") --bracket;
    else if (t == "<") ++angle;
    else if (t == ">" && angle > 0) --angle;
    else if (t == ">>" && angle > 0) angle -= 2;
    else if (t == ">>>" && angle > 0) angle -= 3;
    if (t == "," && paren == 0 && bracket == 0 && angle <= 0) {
      segments.emplace_back();
      continue;
    }
    if (t == "final") continue;
    segments.back().push_back(t);
  }
  std::vector<std::string> types;
  for (auto& seg : segments) {
    if (seg.empty()) continue;
    size_t name_idx = seg.size();
    for (size_t k = seg.size(); k-- > 0;) {
      if (ident_shaped(seg[k])) {
        name_idx = k;
        break;
      }
    }
    std::string type;
    for (size_t k = 0; k < seg.size(); ++k) {
      if (k == name_idx) continue;
      type += seg[k];
    }
    if (!type.empty()) types.push_back(std::move(type));
  }
  return types;
}

bool between_allows_method(const std::string& t) {
  return ident_shaped(t) || t == "," || t == "." || t == "<" || t == ">" ||
         t == ">>" || t == ">>>" || t == "&" || t == "[" || t == "]" || t == "@";
}

bool match_method(const Tokens& toks, size_t s, size_t e, std::string& name,
                  std::vector<std::string>& params) {
  if (e <= s) return false;
  size_t k = e;
  while (k > s) {
    const std::string& t = toks[k - 1].text;
    if (t == ")") break;
    if (t == "default") return false;  // annotation member default value
    if (!between_allows_method(t)) return false;
    --k;
  }
  if (k == s) return false;
  size_t close = k - 1;
  int depth = 1;
  size_t open = close;
  while (open > s) {
    --open;
    const std::string& t = toks[open].text;
    if (t == ")") ++depth;
    else if (t == "(" && --depth == 0) break;
  }
  if (depth != 0 || open == s) return false;
  const std::string& cand = toks[open - 1].text;
  if (!ident_shaped(cand) || kControlNames.count(cand)) return false;
  if (open >= 2 && toks[open - 2].text == "new") return false;
  name = cand;
  params = parse_params(toks, open + 1, close);
  return true;
}

int span_ncloc(const Tokens& toks, size_t from, size_t to) {
  std::set<int> covered;
  for (size_t k = from; k <= to && k < toks.size(); ++k)
    for (int l = toks[k].line; l <= toks[k].end_line; ++l) covered.insert(l);
  return static_cast<int>(covered.size());
}

ParseResult parse_tokens(const TokenStream& ts, const std::string& file_path) {
  ParseResult out;
  if (ts.truncated) {
    out.malformed = true;
    return out;
  }
  const Tokens& toks = ts.tokens;

  struct Scope {
    enum Kind { Type, Method, Block } kind = Block;
    std::string name;  // Type: simple name
    bool is_enum = false;
    bool enum_members_started = false;
    size_t decl_start = 0;
    size_t body_open = 0;
    std::string method_name;
    std::vector<std::string> param_types;
    std::string enclosing;
  };
  std::vector<Scope> stack;
  std::vector<std::pair<size_t, MethodRecord>> found;
  size_t stmt_start = 0;

  for (size_t i = 0; i < toks.size(); ++i) {
    const std::string& t = toks[i].text;
    if (t == "{") {
      Scope sc;
      bool in_type_ctx = stack.empty() || stack.back().kind == Scope::Type;
      std::string tname;
      bool is_enum = false;
      if (in_type_ctx && find_type_decl(toks, stmt_start, i, tname, is_enum)) {
        sc.kind = Scope::Type;
        sc.name = tname;
        sc.is_enum = is_enum;
      } else if (!stack.empty() && stack.back().kind == Scope::Type) {
        bool constant_body =
            stack.back().is_enum && !stack.back().enum_members_started;
        std::string mname;
        std::vector<std::string> mparams;
        if (!constant_body && !has_toplevel_assign_or_arrow(toks, stmt_start, i) &&
            match_method(toks, stmt_start, i, mname, mparams)) {
          sc.kind = Scope::Method;
          sc.decl_start = stmt_start;
          sc.body_open = i;
          sc.method_name = std::move(mname);
          sc.param_types = std::move(mparams);
          std::string chain;
          for (const Scope& outer : stack) {
            if (outer.kind != Scope::Type) continue;
            if (!chain.empty()) chain += '.';
            chain += outer.name;
          }
          sc.enclosing = std::move(chain);
        }
      }
      stack.push_back(std::move(sc));
      stmt_start = i + 1;
    } else if (t == "}") {
      if (stack.empty()) {
        // Stray close at top level: tolerated, common in clipped sources.
        stmt_start = i + 1;
        continue;
      }
      Scope top = std::move(stack.back());
      stack.pop_back();
      if (top.kind == Scope::Method) {
        MethodRecord r;
        r.file_path = file_path;
        r.enclosing_class = top.enclosing;
        r.name = top.method_name;
        r.param_types = top.param_types;
        r.start_line = toks[top.decl_start].line;
        r.end_line = toks[i].line;
        r.ncloc = span_ncloc(toks, top.decl_start, i);
        r.body_tokens.assign(toks.begin() + static_cast<long>(top.body_open) + 1,
                             toks.begin() + static_cast<long>(i));
        r.body_fingerprint = fingerprint(r.body_tokens);
        found.emplace_back(top.decl_start, std::move(r));
      }
      stmt_start = i + 1;
    } else if (t == ";") {
      if (!stack.empty() && stack.back().kind == Scope::Type && stack.back().is_enum)
        stack.back().enum_members_started = true;
      stmt_start = i + 1;
    }
  }

  if (!stack.empty()) {
    out.malformed = true;
    return out;
  }
  std::sort(found.begin(), found.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  out.methods.reserve(found.size());
  for (auto& [idx, rec] : found) out.methods.push_back(std::move(rec));
  return out;
}

}  // namespace

ParseResult parse_methods(const std::string& text, const std::string& file_path) {
  return parse_tokens(tokenize(text), file_path);
}

FileRecord measure_file(const std::string& text, const std::string& path) {
  FileRecord fr;
  fr.path = path;
  TokenStream ts = tokenize(text);
  std::set<int> covered;
  for (const Token& t : ts.tokens)
    for (int l = t.line; l <= t.end_line; ++l) covered.insert(l);
  fr.ncloc = static_cast<int>(covered.size());
  ParseResult pr = parse_tokens(ts, path);
  fr.parsed = !pr.malformed;
  fr.methods = std::move(pr.methods);
  return fr;
}

long long Snapshot::ncloc_total() const {
  long long total = 0;
  for (const FileRecord& f : files) total += f.ncloc;
  return total;
}

const FileRecord* Snapshot::find_file(const std::string& path) const {
  auto it = std::lower_bound(
      files.begin(), files.end(), path,
      [](const FileRecord& f, const std::string& p) { return f.path < p; });
  if (it != files.end() && it->path == path) return &*it;
  return nullptr;
}

}  // namespace tddiff::source
