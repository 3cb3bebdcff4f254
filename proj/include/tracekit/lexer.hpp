#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <string_view>
#include <vector>

#include "tracekit/diagnostics.hpp"

namespace tracekit {

enum class TokenKind {
  Keyword,
  Identifier,
  String,  // text holds the decoded value
  Number,
  Bool,
  LBrace,
  RBrace,
  Colon,
  Comma,
  Arrow,
  LBracket,
  RBracket,
  EndOfFile,
};

struct Token {
  TokenKind kind = TokenKind::EndOfFile;
  std::string text;
  double number = 0.0;
  bool bool_value = false;
  SourceSpan span;
};

/// One `// tracekit:allow(Rn,...)` comment, kept apart from the token stream
/// so the resolver can attach it to the declaration it annotates.
struct AllowComment {
  std::size_t line = 0;
  std::vector<std::string> rules;
  SourceSpan span;
};

struct LexResult {
  std::vector<Token> tokens;  // always terminated by an EndOfFile token
  std::vector<AllowComment> allows;
  std::vector<ParseDiagnostic> diagnostics;
};

namespace detail {

inline constexpr std::array<std::string_view, 13> kKeywords = {
    "requirement", "element", "testcase", "risk",     "link",
    "derive",      "refine",  "satisfy",  "verify",   "specify",
    "allocate",    "covers",  "interface"};

inline bool is_keyword(std::string_view word) {
  for (auto k : kKeywords)
    if (k == word) return true;
  return false;
}

inline bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

inline bool is_ident_char(char c) {
  return is_ident_start(c) || (c >= '0' && c <= '9') || c == '_' || c == '-';
}

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace detail

/// Splits UTF-8 input into tokens. Non-ASCII bytes are accepted only inside
/// string literals and comments; LF and CRLF both end lines; columns count
/// bytes, 1-based. Problems become diagnostics and lexing continues, so one
/// run reports every lexical error in the file.
class Lexer {
 public:
  Lexer(std::string_view input, std::string file)
      : input_(input), file_(std::move(file)) {}

  LexResult run() {
    LexResult result;
    while (pos_ < input_.size()) {
      char c = input_[pos_];
      if (c == '\n') {
        advance_line();
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r') {
        ++pos_;
        ++column_;
        continue;
      }
      if (c == '/' && peek(1) == '/') {
        lex_comment(result);
        continue;
      }
      if (c == '"') {
        lex_string(result);
        continue;
      }
      if (detail::is_digit(c)) {
        lex_number(result);
        continue;
      }
      if (detail::is_ident_start(c)) {
        lex_word(result);
        continue;
      }
      switch (c) {
        case '{': push_punct(result, TokenKind::LBrace, "{"); continue;
        case '}': push_punct(result, TokenKind::RBrace, "}"); continue;
        case ':': push_punct(result, TokenKind::Colon, ":"); continue;
        case ',': push_punct(result, TokenKind::Comma, ","); continue;
        case '[': push_punct(result, TokenKind::LBracket, "["); continue;
        case ']': push_punct(result, TokenKind::RBracket, "]"); continue;
        case '-':
          if (peek(1) == '>') {
            Token t{TokenKind::Arrow, "->", 0.0, false, here(2)};
            result.tokens.push_back(std::move(t));
            pos_ += 2;
            column_ += 2;
            continue;
          }
          break;
        default: break;
      }
      result.diagnostics.push_back(
          {Severity::Error,
           "invalid character '" + printable(c) + "'",
           here(1), diag::InvalidCharacter});
      ++pos_;
      ++column_;
    }
    Token eof;
    eof.span = here(0);
    result.tokens.push_back(std::move(eof));
    return result;
  }

 private:
  char peek(std::size_t ahead) const {
    return pos_ + ahead < input_.size() ? input_[pos_ + ahead] : '\0';
  }

  SourceSpan here(std::size_t length) const {
    return SourceSpan{file_, line_, column_, length};
  }

  void advance_line() {
    ++pos_;
    ++line_;
    column_ = 1;
  }

  void push_punct(LexResult& result, TokenKind kind, const char* text) {
    result.tokens.push_back({kind, text, 0.0, false, here(1)});
    ++pos_;
    ++column_;
  }

  static std::string printable(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    if (u >= 0x20 && u < 0x7f) return std::string(1, c);
    char buf[8];
    std::snprintf(buf, sizeof buf, "\\x%02x", u);
    return buf;
  }

  void lex_comment(LexResult& result) {
    SourceSpan start = here(0);
    std::size_t begin = pos_;
    while (pos_ < input_.size() && input_[pos_] != '\n') {
      ++pos_;
      ++column_;
    }
    std::string_view body = input_.substr(begin, pos_ - begin);
    start.length = body.size();
    scan_allow(body, start, result);
  }

  // Recognizes `tracekit:allow(R4,R11)` anywhere in a comment body.
  void scan_allow(std::string_view body, const SourceSpan& span,
                  LexResult& result) {
    static constexpr std::string_view marker = "tracekit:allow(";
    std::size_t at = body.find(marker);
    if (at == std::string_view::npos) return;
    std::size_t close = body.find(')', at + marker.size());
    if (close == std::string_view::npos) return;
    std::string_view inner = body.substr(at + marker.size(),
                                         close - at - marker.size());
    AllowComment allow{span.line, {}, span};
    std::size_t i = 0;
    while (i <= inner.size()) {
      std::size_t comma = inner.find(',', i);
      if (comma == std::string_view::npos) comma = inner.size();
      std::string_view piece = inner.substr(i, comma - i);
      while (!piece.empty() && (piece.front() == ' ' || piece.front() == '\t'))
        piece.remove_prefix(1);
      while (!piece.empty() && (piece.back() == ' ' || piece.back() == '\t'))
        piece.remove_suffix(1);
      if (!piece.empty()) allow.rules.emplace_back(piece);
      if (comma == inner.size()) break;
      i = comma + 1;
    }
    if (!allow.rules.empty()) result.allows.push_back(std::move(allow));
  }

  void lex_string(LexResult& result) {
    SourceSpan start = here(0);
    std::size_t begin = pos_;
    ++pos_;  // opening quote
    ++column_;
    std::string value;
    while (true) {
      if (pos_ >= input_.size() || input_[pos_] == '\n' || input_[pos_] == '\r') {
        start.length = pos_ - begin;
        result.diagnostics.push_back({Severity::Error, "unterminated string",
                                      start, diag::UnterminatedString});
        return;
      }
      char c = input_[pos_];
      if (c == '"') {
        ++pos_;
        ++column_;
        break;
      }
      if (c == '\\') {
        char next = peek(1);
        if (next == '"' || next == '\\') {
          value.push_back(next);
          pos_ += 2;
          column_ += 2;
          continue;
        }
        result.diagnostics.push_back(
            {Severity::Error,
             std::string("invalid escape '\\") + (next ? std::string(1, next) : "") +
                 "' (only \\\" and \\\\ are recognized)",
             here(2), diag::InvalidEscape});
        pos_ += next ? 2 : 1;
        column_ += next ? 2 : 1;
        continue;
      }
      value.push_back(c);
      ++pos_;
      ++column_;
    }
    start.length = pos_ - begin;
    result.tokens.push_back({TokenKind::String, std::move(value), 0.0, false, start});
  }

  void lex_number(LexResult& result) {
    SourceSpan start = here(0);
    std::size_t begin = pos_;
    while (pos_ < input_.size() && detail::is_digit(input_[pos_])) {
      ++pos_;
      ++column_;
    }
    if (pos_ < input_.size() && input_[pos_] == '.') {
      ++pos_;
      ++column_;
      if (pos_ >= input_.size() || !detail::is_digit(input_[pos_])) {
        start.length = pos_ - begin;
        result.diagnostics.push_back(
            {Severity::Error, "malformed number: expected digits after '.'",
             start, diag::MalformedNumber});
        return;
      }
      while (pos_ < input_.size() && detail::is_digit(input_[pos_])) {
        ++pos_;
        ++column_;
      }
    }
    std::string text(input_.substr(begin, pos_ - begin));
    start.length = text.size();
    double value = std::strtod(text.c_str(), nullptr);
    if (!std::isfinite(value)) {
      result.diagnostics.push_back({Severity::Error,
                                    "malformed number: value out of range",
                                    start, diag::MalformedNumber});
      return;
    }
    result.tokens.push_back({TokenKind::Number, text, value, false, start});
  }

  void lex_word(LexResult& result) {
    SourceSpan start = here(0);
    std::size_t begin = pos_;
    while (pos_ < input_.size() && detail::is_ident_char(input_[pos_])) {
      // '-' starts an arrow when followed by '>'; stop the identifier there.
      if (input_[pos_] == '-' && peek(1) == '>') break;
      ++pos_;
      ++column_;
    }
    std::string word(input_.substr(begin, pos_ - begin));
    start.length = word.size();
    Token t;
    t.span = start;
    t.text = word;
    if (word == "true" || word == "false") {
      t.kind = TokenKind::Bool;
      t.bool_value = word == "true";
    } else if (detail::is_keyword(word)) {
      t.kind = TokenKind::Keyword;
    } else {
      t.kind = TokenKind::Identifier;
    }
    result.tokens.push_back(std::move(t));
  }

  std::string_view input_;
  std::string file_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

inline LexResult lex(std::string_view input, std::string file) {
  return Lexer(input, std::move(file)).run();
}

}  // namespace tracekit
