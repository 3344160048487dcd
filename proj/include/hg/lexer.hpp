//===-- lexer.hpp - HGL tokenizer -------------------------------*- C++ -*-===//
#pragma once

#include "hg/error.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace hg {

struct Token {
  enum class Kind { Ident, Int, String, Punct, End };

  Kind kind = Kind::End;
  std::string text;  // identifier, punctuation, or decoded string contents
  std::int64_t ival = 0;
  SourceSpan loc;

  bool is(std::string_view punct) const { return kind == Kind::Punct && text == punct; }
  bool is_ident(std::string_view word) const { return kind == Kind::Ident && text == word; }
};

/// Splits HGL source into tokens. Stops at the first bad character and
/// reports it; the token list then ends early with an End token.
class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run(std::vector<Diagnostic>& diags) {
    std::vector<Token> out;
    while (true) {
      skip_space_and_comments();
      Token t;
      t.loc.begin = here();
      if (pos_ >= src_.size()) {
        t.loc.end = t.loc.begin;
        out.push_back(t);
        return out;
      }
      if (!next(t, diags)) {
        Token end;
        end.loc = {here(), here()};
        out.push_back(end);
        return out;
      }
      t.loc.end = here();
      out.push_back(std::move(t));
    }
  }

 private:
  SourceLoc here() const { return {line_, col_}; }

  char peek(std::size_t k = 0) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  void error(std::vector<Diagnostic>& diags, SourceLoc at, std::string msg) {
    diags.push_back({Severity::Error, "SyntaxError", std::move(msg), {at, here()}});
  }

  static bool ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
  static bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

  bool next(Token& t, std::vector<Diagnostic>& diags) {
    SourceLoc start = here();
    char c = src_[pos_];
    if (ident_start(c)) {
      t.kind = Token::Kind::Ident;
      while (pos_ < src_.size() && ident_char(src_[pos_])) {
        t.text += src_[pos_];
        advance();
      }
      return true;
    }
    if (c >= '0' && c <= '9') {
      t.kind = Token::Kind::Int;
      std::uint64_t v = 0;
      while (pos_ < src_.size() && src_[pos_] >= '0' && src_[pos_] <= '9') {
        v = v * 10 + static_cast<std::uint64_t>(src_[pos_] - '0');
        t.text += src_[pos_];
        advance();
        if (v > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
          error(diags, start, "integer literal out of range");
          return false;
        }
      }
      if (pos_ < src_.size() && ident_char(src_[pos_])) {
        error(diags, start, "malformed number");
        return false;
      }
      t.ival = static_cast<std::int64_t>(v);
      return true;
    }
    if (c == '"') return string_literal(t, diags);

    static constexpr std::string_view two[] = {"==", "!=", "<=", ">=", "&&", "||"};
    for (auto p : two) {
      if (src_.substr(pos_, 2) == p) {
        t.kind = Token::Kind::Punct;
        t.text = p;
        advance();
        advance();
        return true;
      }
    }
    static constexpr std::string_view one = "(){},:.=<>+-*!?";
    if (one.find(c) != std::string_view::npos) {
      t.kind = Token::Kind::Punct;
      t.text = c;
      advance();
      return true;
    }
    error(diags, start, "unexpected character");
    return false;
  }

  bool string_literal(Token& t, std::vector<Diagnostic>& diags) {
    SourceLoc start = here();
    t.kind = Token::Kind::String;
    advance();
    while (true) {
      if (pos_ >= src_.size() || src_[pos_] == '\n') {
        error(diags, start, "unterminated string literal");
        return false;
      }
      char c = src_[pos_];
      if (c == '"') {
        advance();
        return true;
      }
      if (c == '\\') {
        advance();
        char e = peek();
        switch (e) {
          case '"': t.text += '"'; break;
          case '\\': t.text += '\\'; break;
          case 'n': t.text += '\n'; break;
          case 't': t.text += '\t'; break;
          default:
            error(diags, start, "unknown escape sequence");
            return false;
        }
        advance();
        continue;
      }
      if (static_cast<unsigned char>(c) < 0x20) {
        error(diags, start, "control character in string literal");
        return false;
      }
      t.text += c;
      advance();
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::uint32_t line_ = 1;
  std::uint32_t col_ = 1;
};

}  // namespace hg
