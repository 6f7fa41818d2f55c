#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "algproc/errors.hpp"
#include "algproc/exp.hpp"

namespace algproc::detail {

/// Character cursor shared by the hand-written recursive-descent parsers.
class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  [[nodiscard]] bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }
  [[nodiscard]] char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  /// Character right after the current one, without skipping spaces.
  [[nodiscard]] char peek_next() const { return pos_ + 1 < text_.size() ? text_[pos_ + 1] : '\0'; }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  [[nodiscard]] bool at_ident() { return is_ident_start(peek()); }
  std::string ident() {
    skip_ws();
    if (!is_ident_start(pos_ < text_.size() ? text_[pos_] : '\0')) fail("expected identifier");
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }
  /// Reads an identifier without consuming it.
  [[nodiscard]] std::string peek_ident() {
    std::size_t save = pos_;
    std::string id = ident();
    pos_ = save;
    return id;
  }
  /// Consumes "[...]" and returns the raw contents.
  std::string bracket() {
    expect('[');
    std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != ']') ++pos_;
    if (pos_ >= text_.size()) fail("unterminated '['");
    std::string out(text_.substr(start, pos_ - start));
    ++pos_;
    return out;
  }
  [[nodiscard]] std::size_t pos() const { return pos_; }
  void set_pos(std::size_t p) { pos_ = p; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace algproc::detail
