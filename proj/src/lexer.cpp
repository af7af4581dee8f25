#include "preludec/lexer.hpp"

#include <cctype>
#include <unordered_map>

namespace preludec {

namespace {

const std::unordered_map<std::string_view, TokenKind>& keyword_table() {
  static const std::unordered_map<std::string_view, TokenKind> table = {
      {"imported", TokenKind::KwImported}, {"node", TokenKind::KwNode},
      {"returns", TokenKind::KwReturns},   {"var", TokenKind::KwVar},
      {"let", TokenKind::KwLet},           {"tel", TokenKind::KwTel},
      {"sensor", TokenKind::KwSensor},     {"actuator", TokenKind::KwActuator},
      {"rate", TokenKind::KwRate},         {"fby", TokenKind::KwFby},
      {"when", TokenKind::KwWhen},         {"merge", TokenKind::KwMerge},
      {"tail", TokenKind::KwTail},         {"cons", TokenKind::KwCons},
      {"queue", TokenKind::KwQueue},       {"int", TokenKind::KwInt},
      {"bool", TokenKind::KwBool},         {"true", TokenKind::KwTrue},
      {"false", TokenKind::KwFalse},
  };
  return table;
}

class Lexer {
 public:
  Lexer(std::string_view source, const std::string& filename)
      : source_(source), filename_(filename) {}

  LexResult run() {
    while (!at_end()) {
      char c = peek();
      if (c == '\n') {
        advance();
        ++line_;
        col_ = 1;
      } else if (c == ' ' || c == '\t' || c == '\r') {
        advance();
      } else if (c == '-' && peek(1) == '-') {
        while (!at_end() && peek() != '\n') advance();
      } else {
        lex_token();
      }
    }
    push(TokenKind::EndOfFile, "", here());
    return LexResult{std::move(tokens_), std::move(diagnostics_)};
  }

 private:
  bool at_end() const { return pos_ >= source_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < source_.size() ? source_[pos_ + ahead] : '\0';
  }
  void advance() {
    ++pos_;
    ++col_;
  }
  SourceLocation here() const { return SourceLocation{line_, col_}; }

  void push(TokenKind kind, std::string text, SourceLocation loc, BigInt int_value = 0,
            Rational rat_value = Rational()) {
    tokens_.push_back(Token{kind, std::move(text), loc, std::move(int_value),
                            std::move(rat_value)});
  }

  void lex_token() {
    SourceLocation loc = here();
    char c = peek();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      lex_word(loc);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      lex_number(loc);
      return;
    }
    switch (c) {
      case '*':
        if (peek(1) == '^') {
          advance();
          advance();
          push(TokenKind::MulOp, "*^", loc);
          return;
        }
        break;
      case '/':
        if (peek(1) == '^') {
          advance();
          advance();
          if (peek() == '^') {
            advance();
            push(TokenKind::DivQueueOp, "/^^", loc);
          } else {
            push(TokenKind::DivOp, "/^", loc);
          }
          return;
        }
        break;
      case '~':
        if (peek(1) == '>') {
          advance();
          advance();
          push(TokenKind::ShiftOp, "~>", loc);
          return;
        }
        break;
      case '=': advance(); push(TokenKind::Equals, "=", loc); return;
      case ',': advance(); push(TokenKind::Comma, ",", loc); return;
      case ';': advance(); push(TokenKind::Semicolon, ";", loc); return;
      case ':': advance(); push(TokenKind::Colon, ":", loc); return;
      case '(': advance(); push(TokenKind::LParen, "(", loc); return;
      case ')': advance(); push(TokenKind::RParen, ")", loc); return;
      default: break;
    }
    diagnostics_.push_back(Diagnostic::error(
        codes::IllegalCharacter, std::string("illegal character '") + c + "'", filename_, loc));
    advance();
  }

  void lex_word(SourceLocation loc) {
    std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
      advance();
    }
    std::string text(source_.substr(start, pos_ - start));
    auto it = keyword_table().find(text);
    push(it != keyword_table().end() ? it->second : TokenKind::Ident, std::move(text), loc);
  }

  void lex_number(SourceLocation loc) {
    std::size_t start = pos_;
    if (peek() == '-') advance();
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) advance();
    // a/b is one rational literal; '/' not followed by a digit belongs to the
    // operator that starts with it (e.g. the /^ in "i/^10").
    if (peek() == '/' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      advance();
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) advance();
      std::string text(source_.substr(start, pos_ - start));
      auto value = Rational::parse(text);
      if (!value) {
        diagnostics_.push_back(Diagnostic::error(
            codes::IllegalCharacter, "malformed rational literal '" + text + "'", filename_, loc));
        return;
      }
      push(TokenKind::RatLit, std::move(text), loc, 0, *value);
      return;
    }
    std::string text(source_.substr(start, pos_ - start));
    push(TokenKind::IntLit, text, loc, BigInt(text));
  }

  std::string_view source_;
  const std::string& filename_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  std::vector<Token> tokens_;
  std::vector<Diagnostic> diagnostics_;
};

}  // namespace

LexResult tokenize(std::string_view source, const std::string& filename) {
  return Lexer(source, filename).run();
}

}  // namespace preludec
