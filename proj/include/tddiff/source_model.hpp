// Java source measurement: tolerant tokenizer, method extraction, NCLOC.
//
// The parser is a brace matcher over a comment/literal-aware token stream,
// not a full grammar. It recognizes method bodies declared directly inside
// named type bodies. Anonymous classes, lambdas and method-local classes are
// folded into the enclosing method's span and token list.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tddiff::source {

struct Token {
  std::string text;
  int line = 0;      // 1-based start line
  int end_line = 0;  // last line (differs from line for text blocks)
};

struct TokenStream {
  std::vector<Token> tokens;
  // True when EOF was hit inside a string, character or block comment.
  bool truncated = false;
};

TokenStream tokenize(const std::string& text);

// Distinct lines carrying at least one non-comment token.
int count_ncloc(const std::string& text);

// Order-sensitive 64-bit FNV-1a over token texts. Comment and formatting
// changes do not affect it; any token change does (modulo 64-bit collisions,
// ~2^-64 per pair, negligible at repository scale).
uint64_t fingerprint(const std::vector<Token>& body_tokens);

struct MethodRecord {
  std::string file_path;
  std::string enclosing_class;  // dotted chain for nested types
  std::string name;
  std::vector<std::string> param_types;  // normalized, e.g. "Map<String,Integer>"
  int start_line = 0;  // first line of the declaration (annotations included)
  int end_line = 0;    // line of the closing brace
  int ncloc = 0;       // distinct token-bearing lines within the span
  uint64_t body_fingerprint = 0;
  std::vector<Token> body_tokens;  // between the body braces, exclusive

  std::string signature() const;  // name(type1,type2,...)
  std::string key() const;        // file|class|signature
};

struct ParseResult {
  std::vector<MethodRecord> methods;  // declaration order
  bool malformed = false;
};

// Never throws: an unrecoverably malformed file (EOF inside an open scope,
// string or comment) yields malformed=true and no methods.
ParseResult parse_methods(const std::string& text, const std::string& file_path);

struct FileRecord {
  std::string path;
  int ncloc = 0;
  bool parsed = true;
  std::vector<MethodRecord> methods;
};

FileRecord measure_file(const std::string& text, const std::string& path);

struct Snapshot {
  std::string revision;
  std::vector<FileRecord> files;  // sorted by path
  std::vector<std::string> parse_failures;  // paths flagged unparsed

  long long ncloc_total() const;
  const FileRecord* find_file(const std::string& path) const;
};

}  // namespace tddiff::source
