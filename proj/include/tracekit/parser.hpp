#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "tracekit/diagnostics.hpp"
#include "tracekit/lexer.hpp"
#include "tracekit/model.hpp"

namespace tracekit {

struct AttrValue {
  enum class Type { String, Number, Bool, Name, IdList };
  Type type = Type::String;
  std::string text;  // String value or Name word
  double number = 0.0;
  bool bool_value = false;
  std::vector<std::string> ids;
  SourceSpan span;
};

struct AttrNode {
  std::string name;
  SourceSpan name_span;
  AttrValue value;
};

struct EntityNode {
  enum class Kind { Requirement, Element, TestCase, Risk };
  Kind kind = Kind::Requirement;
  std::string id;
  SourceSpan id_span;
  std::string category;  // reqclass or element kind; empty for testcase/risk
  SourceSpan category_span;
  std::vector<AttrNode> attrs;
  SourceSpan span;  // the declaration keyword
  std::size_t first_line = 0;
  std::size_t last_line = 0;
};

struct LinkNode {
  LinkKind kind = LinkKind::Derive;
  std::string source;
  std::string target;
  SourceSpan span;
  SourceSpan source_span;
  SourceSpan target_span;
  std::size_t first_line = 0;
  std::size_t last_line = 0;
};

using Declaration = std::variant<EntityNode, LinkNode>;

/// Declarations in file order, each carrying the spans the resolver needs
/// for diagnostics and suppression attachment.
struct SyntaxTree {
  std::string file;
  std::vector<Declaration> decls;
};

struct ParseResult {
  SyntaxTree tree;
  std::vector<ParseDiagnostic> diagnostics;
};

/// Recursive-descent parser over the token stream. On error it reports a
/// diagnostic, skips to the next top-level keyword, and keeps going, so a
/// single run surfaces every malformed declaration.
class Parser {
 public:
  Parser(const std::vector<Token>& tokens, std::string file)
      : tokens_(tokens) {
    result_.tree.file = std::move(file);
  }

  ParseResult run() {
    while (!at_end()) {
      const Token& t = peek();
      if (t.kind != TokenKind::Keyword || !is_top_level(t.text)) {
        error_here("expected a declaration (requirement, element, testcase, risk, or link)");
        recover();
        continue;
      }
      if (t.text == "requirement") parse_requirement();
      else if (t.text == "element") parse_element();
      else if (t.text == "testcase") parse_entity_no_category(EntityNode::Kind::TestCase);
      else if (t.text == "risk") parse_entity_no_category(EntityNode::Kind::Risk);
      else parse_link();
    }
    return std::move(result_);
  }

 private:
  static bool is_top_level(const std::string& word) {
    return word == "requirement" || word == "element" || word == "testcase" ||
           word == "risk" || word == "link";
  }

  const Token& peek() const { return tokens_[pos_]; }
  bool at_end() const { return peek().kind == TokenKind::EndOfFile; }
  const Token& advance() { return tokens_[pos_++]; }

  void error_at(const Token& t, std::string message) {
    std::string found = t.kind == TokenKind::EndOfFile
                            ? "end of file"
                            : "'" + t.text + "'";
    result_.diagnostics.push_back({Severity::Error,
                                   message + ", found " + found, t.span,
                                   diag::UnexpectedToken});
  }

  void error_here(std::string message) { error_at(peek(), std::move(message)); }

  // Skip to the next top-level keyword. Progress is guaranteed: either this
  // advances, or it stops on a declaration keyword whose parse consumes it.
  void recover() {
    auto at_top_level = [&] {
      return peek().kind == TokenKind::Keyword && is_top_level(peek().text);
    };
    if (!at_end() && !at_top_level()) ++pos_;
    while (!at_end() && !at_top_level()) ++pos_;
  }

  bool expect(TokenKind kind, const char* what, const Token** out = nullptr) {
    if (peek().kind != kind) {
      error_here(std::string("expected ") + what);
      return false;
    }
    const Token& t = advance();
    if (out) *out = &t;
    return true;
  }

  void parse_requirement() {
    const Token& kw = advance();
    EntityNode node;
    node.kind = EntityNode::Kind::Requirement;
    node.span = kw.span;
    node.first_line = kw.span.line;
    const Token* id = nullptr;
    if (!expect(TokenKind::Identifier, "an identifier", &id)) return recover();
    node.id = id->text;
    node.id_span = id->span;
    if (!expect(TokenKind::Colon, "':'")) return recover();
    if (peek().kind != TokenKind::Identifier ||
        !parse_requirement_class(peek().text)) {
      error_here("expected a requirement class (acquirer, stakeholder, technical, or specified)");
      return recover();
    }
    const Token& cls = advance();
    node.category = cls.text;
    node.category_span = cls.span;
    if (!parse_body(node)) return recover();
    result_.tree.decls.emplace_back(std::move(node));
  }

  void parse_element() {
    const Token& kw = advance();
    EntityNode node;
    node.kind = EntityNode::Kind::Element;
    node.span = kw.span;
    node.first_line = kw.span.line;
    const Token* id = nullptr;
    if (!expect(TokenKind::Identifier, "an identifier", &id)) return recover();
    node.id = id->text;
    node.id_span = id->span;
    if (!expect(TokenKind::Colon, "':'")) return recover();
    // "interface" lexes as a keyword; logical and physical are plain words.
    const Token& cat = peek();
    bool ok = (cat.kind == TokenKind::Identifier &&
               (cat.text == "logical" || cat.text == "physical")) ||
              (cat.kind == TokenKind::Keyword && cat.text == "interface");
    if (!ok) {
      error_here("expected an element kind (logical, physical, or interface)");
      return recover();
    }
    advance();
    node.category = cat.text;
    node.category_span = cat.span;
    if (!parse_body(node)) return recover();
    result_.tree.decls.emplace_back(std::move(node));
  }

  void parse_entity_no_category(EntityNode::Kind kind) {
    const Token& kw = advance();
    EntityNode node;
    node.kind = kind;
    node.span = kw.span;
    node.first_line = kw.span.line;
    const Token* id = nullptr;
    if (!expect(TokenKind::Identifier, "an identifier", &id)) return recover();
    node.id = id->text;
    node.id_span = id->span;
    if (!parse_body(node)) return recover();
    result_.tree.decls.emplace_back(std::move(node));
  }

  void parse_link() {
    const Token& kw = advance();
    LinkNode node;
    node.span = kw.span;
    node.first_line = kw.span.line;
    const Token& kind = peek();
    std::optional<LinkKind> parsed =
        kind.kind == TokenKind::Keyword ? parse_link_kind(kind.text)
                                        : std::nullopt;
    if (!parsed) {
      error_here("expected a link kind (derive, refine, satisfy, verify, specify, allocate, or covers)");
      return recover();
    }
    advance();
    node.kind = *parsed;
    const Token* source = nullptr;
    if (!expect(TokenKind::Identifier, "an identifier", &source)) return recover();
    node.source = source->text;
    node.source_span = source->span;
    if (!expect(TokenKind::Arrow, "'->'")) return recover();
    const Token* target = nullptr;
    if (!expect(TokenKind::Identifier, "an identifier", &target)) return recover();
    node.target = target->text;
    node.target_span = target->span;
    node.last_line = target->span.line;
    result_.tree.decls.emplace_back(std::move(node));
  }

  // Parses "{" attr* "}" into node.attrs; returns false on error.
  bool parse_body(EntityNode& node) {
    if (peek().kind != TokenKind::LBrace) {
      error_here("expected '{'");
      return false;
    }
    advance();
    while (peek().kind != TokenKind::RBrace) {
      if (at_end()) {
        error_here("expected '}'");
        return false;
      }
      AttrNode attr;
      if (peek().kind != TokenKind::Identifier) {
        error_here("expected an attribute name or '}'");
        return false;
      }
      const Token& name = advance();
      attr.name = name.text;
      attr.name_span = name.span;
      if (!expect(TokenKind::Colon, "':'")) return false;
      if (!parse_value(attr.value)) return false;
      node.attrs.push_back(std::move(attr));
    }
    const Token& close = advance();
    node.last_line = close.span.line;
    return true;
  }

  bool parse_value(AttrValue& value) {
    const Token& t = peek();
    value.span = t.span;
    switch (t.kind) {
      case TokenKind::String:
        value.type = AttrValue::Type::String;
        value.text = t.text;
        advance();
        return true;
      case TokenKind::Number:
        value.type = AttrValue::Type::Number;
        value.number = t.number;
        value.text = t.text;
        advance();
        return true;
      case TokenKind::Bool:
        value.type = AttrValue::Type::Bool;
        value.bool_value = t.bool_value;
        advance();
        return true;
      case TokenKind::Identifier:
        value.type = AttrValue::Type::Name;
        value.text = t.text;
        advance();
        return true;
      case TokenKind::LBracket: {
        advance();
        value.type = AttrValue::Type::IdList;
        while (true) {
          const Token* id = nullptr;
          if (!expect(TokenKind::Identifier, "an identifier", &id)) return false;
          value.ids.push_back(id->text);
          if (peek().kind == TokenKind::Comma) {
            advance();
            continue;
          }
          break;
        }
        if (!expect(TokenKind::RBracket, "']'")) return false;
        return true;
      }
      default:
        error_here("expected a value (string, number, boolean, name, or id list)");
        return false;
    }
  }

  const std::vector<Token>& tokens_;
  std::size_t pos_ = 0;
  ParseResult result_;
};

inline ParseResult parse(const std::vector<Token>& tokens, std::string file) {
  return Parser(tokens, std::move(file)).run();
}

}  // namespace tracekit
