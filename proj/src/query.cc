// Copyright 2026 The polyfed Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "polyfed/query.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

#include "polyfed/provenance.h"
#include "polyfed/schema_registry.h"

namespace polyfed {

namespace {

std::string describe_expected(const std::set<std::string>& expected) {
  std::string out;
  for (const auto& e : expected) {
    if (!out.empty()) out += ", ";
    out += e;
  }
  return out;
}

std::string parse_error_message(const SourcePosition& pos, const std::set<std::string>& expected,
                                const std::string& found) {
  std::ostringstream os;
  os << "line " << pos.line << ", column " << pos.column << ": expected " << describe_expected(expected)
     << " but found " << found;
  return os.str();
}

enum class Tok { kIdent, kKeyword, kString, kNumber, kComma, kDot, kOp, kEnd, kInvalid };

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;  // keyword lowercased; string unescaped; invalid = reason
  SourcePosition pos;
  Scalar number;
  CompareOp op = CompareOp::kEq;
};

constexpr std::string_view kKeywords[] = {"select", "where", "from", "and"};

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_keyword(std::string_view word) {
  const std::string l = lower(word);
  return std::find(std::begin(kKeywords), std::end(kKeywords), l) != std::end(kKeywords);
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t = next();
      const bool stop = t.kind == Tok::kEnd || t.kind == Tok::kInvalid;
      out.push_back(std::move(t));
      if (stop) break;
    }
    return out;
  }

 private:
  char peek(std::size_t k = 0) const { return i_ + k < text_.size() ? text_[i_ + k] : '\0'; }
  bool at_end() const { return i_ >= text_.size(); }

  void advance() {
    if (text_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }

  Token make(Tok kind, SourcePosition pos, std::string text = {}) {
    Token t;
    t.kind = kind;
    t.pos = pos;
    t.text = std::move(text);
    return t;
  }

  Token next() {
    const SourcePosition pos{line_, col_};
    if (at_end()) return make(Tok::kEnd, pos);
    const char c = peek();
    if (ident_start(c)) {
      const std::size_t start = i_;
      while (!at_end() && ident_char(peek())) advance();
      std::string word(text_.substr(start, i_ - start));
      if (is_keyword(word)) return make(Tok::kKeyword, pos, lower(word));
      return make(Tok::kIdent, pos, std::move(word));
    }
    if (digit(c) || (c == '-' && digit(peek(1)))) return number(pos);
    if (c == '"') return string(pos);
    if (c == ',') {
      advance();
      return make(Tok::kComma, pos, ",");
    }
    if (c == '.') {
      advance();
      return make(Tok::kDot, pos, ".");
    }
    if (c == '=' || c == '<' || c == '>' || c == '!') {
      std::string op(1, c);
      advance();
      if (peek() == '=') {
        op += '=';
        advance();
      }
      auto parsed = parse_compare_op(op);
      if (!parsed) return make(Tok::kInvalid, pos, "'" + op + "'");
      Token t = make(Tok::kOp, pos, op);
      t.op = *parsed;
      return t;
    }
    std::string shown;
    if (static_cast<unsigned char>(c) < 0x20 || c == 0x7f) {
      char buf[8];
      std::snprintf(buf, sizeof buf, "\\x%02x", static_cast<unsigned char>(c));
      shown = buf;
    } else {
      shown = std::string(1, c);
    }
    return make(Tok::kInvalid, pos, "character '" + shown + "'");
  }

  Token number(SourcePosition pos) {
    const std::size_t start = i_;
    bool is_double = false;
    if (peek() == '-') advance();
    while (digit(peek())) advance();
    if (peek() == '.' && digit(peek(1))) {
      is_double = true;
      advance();
      while (digit(peek())) advance();
    }
    if ((peek() == 'e' || peek() == 'E') &&
        (digit(peek(1)) || ((peek(1) == '+' || peek(1) == '-') && digit(peek(2))))) {
      is_double = true;
      advance();
      if (peek() == '+' || peek() == '-') advance();
      while (digit(peek())) advance();
    }
    const std::string_view lexeme = text_.substr(start, i_ - start);
    // "12abc" is not a number followed by an identifier.
    if (ident_char(peek())) return make(Tok::kInvalid, pos, "malformed number '" + std::string(lexeme) + "...'");
    Token t = make(Tok::kNumber, pos, std::string(lexeme));
    if (is_double) {
      double d = 0;
      auto [p, ec] = std::from_chars(lexeme.data(), lexeme.data() + lexeme.size(), d);
      if (ec != std::errc() || p != lexeme.data() + lexeme.size() || !std::isfinite(d))
        return make(Tok::kInvalid, pos, "number out of range '" + std::string(lexeme) + "'");
      t.number = d;
    } else {
      std::int64_t v = 0;
      auto [p, ec] = std::from_chars(lexeme.data(), lexeme.data() + lexeme.size(), v);
      if (ec != std::errc() || p != lexeme.data() + lexeme.size())
        return make(Tok::kInvalid, pos, "integer out of range '" + std::string(lexeme) + "'");
      t.number = v;
    }
    return t;
  }

  Token string(SourcePosition pos) {
    advance();  // opening quote
    std::string value;
    while (!at_end()) {
      const char c = peek();
      if (c == '"') {
        advance();
        Token t = make(Tok::kString, pos, std::move(value));
        return t;
      }
      if (c == '\\') {
        const SourcePosition esc{line_, col_};
        advance();
        if (at_end()) break;
        const char e = peek();
        switch (e) {
          case '"': value += '"'; break;
          case '\\': value += '\\'; break;
          case 'n': value += '\n'; break;
          case 't': value += '\t'; break;
          default:
            return make(Tok::kInvalid, esc, "escape '\\" + std::string(1, e) + "'");
        }
        advance();
        continue;
      }
      value += c;
      advance();
    }
    return make(Tok::kInvalid, pos, "unterminated string");
  }

  std::string_view text_;
  std::size_t i_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::kEnd: return "end of input";
    case Tok::kInvalid: return t.text;
    case Tok::kKeyword: return "'" + t.text + "'";
    case Tok::kIdent: return "identifier '" + t.text + "'";
    case Tok::kString: return "string literal";
    case Tok::kNumber: return "number " + t.text;
    default: return "'" + t.text + "'";
  }
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  GlobalQuery run() {
    GlobalQuery q;
    keyword("select");
    std::vector<std::pair<QualifiedAttribute, SourcePosition>> projections;
    projections.push_back(qualname());
    while (cur().kind == Tok::kComma) {
      ++pos_;
      projections.push_back(qualname());
    }
    keyword("where");
    q.subject_entity = ident();
    keyword("from");
    q.workflow = ident();
    std::vector<std::pair<QueryFilter, SourcePosition>> filters;
    while (cur().kind == Tok::kKeyword && cur().text == "and") {
      ++pos_;
      auto [attr, at] = qualname();
      QueryFilter f;
      f.attribute = std::move(attr);
      if (cur().kind != Tok::kOp) fail({"comparison operator"});
      f.op = cur().op;
      ++pos_;
      if (cur().kind == Tok::kString) {
        f.value = cur().text;
      } else if (cur().kind == Tok::kNumber) {
        f.value = cur().number;
      } else {
        fail({"string literal", "number"});
      }
      ++pos_;
      filters.emplace_back(std::move(f), at);
    }
    if (cur().kind != Tok::kEnd) fail({"'and'", "end of input"});

    // Every qualified name must refer to the subject entity.
    for (auto& [attr, at] : projections) {
      if (attr.entity != q.subject_entity)
        throw QueryParseError(at, {"attribute of '" + q.subject_entity + "'"}, "'" + attr.str() + "'");
      q.projections.push_back(std::move(attr));
    }
    for (auto& [f, at] : filters) {
      if (f.attribute.entity != q.subject_entity)
        throw QueryParseError(at, {"attribute of '" + q.subject_entity + "'"}, "'" + f.attribute.str() + "'");
      q.filters.push_back(std::move(f));
    }
    return q;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }

  [[noreturn]] void fail(std::set<std::string> expected) {
    throw QueryParseError(cur().pos, std::move(expected), describe(cur()));
  }

  void keyword(std::string_view kw) {
    if (cur().kind != Tok::kKeyword || cur().text != kw) fail({"'" + std::string(kw) + "'"});
    ++pos_;
  }

  std::string ident() {
    if (cur().kind != Tok::kIdent) fail({"identifier"});
    return toks_[pos_++].text;
  }

  std::pair<QualifiedAttribute, SourcePosition> qualname() {
    const SourcePosition at = cur().pos;
    QualifiedAttribute a;
    if (cur().kind != Tok::kIdent) fail({"qualified name"});
    a.entity = toks_[pos_++].text;
    if (cur().kind != Tok::kDot) fail({"'.'"});
    ++pos_;
    a.attribute = ident();
    return {std::move(a), at};
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

std::string render_literal(const Scalar& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return quote(*s);
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&v)) return format_double(*d);
  throw Error(ErrorCode::kInvalidArgument, "boolean literals are not part of the query language");
}

}  // namespace

QueryParseError::QueryParseError(SourcePosition position, std::set<std::string> expected, std::string found)
    : Error(ErrorCode::kQuerySyntax, parse_error_message(position, expected, found)),
      position_(position),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

GlobalQuery parse_query(std::string_view text) {
  return Parser(Lexer(text).run()).run();
}

std::string render_query(const GlobalQuery& query) {
  std::string out = "select ";
  for (std::size_t i = 0; i < query.projections.size(); ++i) {
    if (i) out += ", ";
    out += query.projections[i].str();
  }
  out += " where " + query.subject_entity + " from " + query.workflow;
  for (const auto& f : query.filters) {
    out += " and " + f.attribute.str() + " " + std::string(to_string(f.op)) + " " + render_literal(f.value);
  }
  return out;
}

void validate_query(const GlobalQuery& query, const CatalogGraph& catalog) {
  if (!has_gcs_entity(catalog, query.subject_entity))
    throw Error(ErrorCode::kUnknownEntity, "no global entity named '" + query.subject_entity + "'");
  auto check = [&](const QualifiedAttribute& a) {
    if (!find_gcs_attribute(catalog, a.entity, a.attribute))
      throw Error(ErrorCode::kUnknownAttribute, "no global attribute '" + a.str() + "'");
  };
  for (const auto& p : query.projections) check(p);
  for (const auto& f : query.filters) check(f.attribute);
  if (!has_workflow(catalog, query.workflow))
    throw Error(ErrorCode::kUnknownWorkflow, "no workflow named '" + query.workflow + "'");
}

}  // namespace polyfed
