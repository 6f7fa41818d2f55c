#include <map>

#include "algproc/exp.hpp"
#include "cursor.hpp"

namespace algproc {

bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9') || c == '\''; }

namespace {

enum class Role { kAction, kVariable };

class ExpParser {
 public:
  ExpParser(std::string_view text, const TheorySpec& th, const ParseOptions& opts) : cur_(text), th_(th) {
    for (const auto& a : opts.actions) roles_[a] = Role::kAction;
  }

  Exp parse() {
    Exp e = term();
    if (!cur_.at_end()) cur_.fail("unexpected trailing input");
    return e;
  }

 private:
  Exp term() {
    Exp acc = unary();
    while (cur_.peek() == '+') {
      cur_.accept('+');
      BinaryOp op = cur_.peek() == '[' ? th_.parse_op(cur_.bracket(), true) : th_.parse_op("", false);
      Exp rhs = unary();
      acc = Exp::op(op, acc, rhs);
    }
    return acc;
  }

  Exp unary() {
    const char c = cur_.peek();
    if (c == '(') {
      cur_.accept('(');
      Exp e = term();
      cur_.expect(')');
      return e;
    }
    if (c == '0' && !is_ident_char(cur_.peek_next())) {
      cur_.accept('0');
      return Exp::zero();
    }
    if (!cur_.at_ident()) cur_.fail("expected a term");
    const std::size_t at = cur_.pos();
    std::string id = cur_.ident();
    if (id == "mu") {
      std::string v = cur_.ident();
      if (v == "mu") cur_.fail("'mu' is a keyword");
      claim(v, Role::kVariable, at);
      cur_.expect('.');
      return Exp::mu(std::move(v), term());
    }
    if (cur_.accept('.')) {
      claim(id, Role::kAction, at);
      return Exp::prefix(std::move(id), unary());
    }
    claim(id, Role::kVariable, at);
    return Exp::var(std::move(id));
  }

  void claim(const std::string& name, Role role, std::size_t at) {
    auto [it, fresh] = roles_.emplace(name, role);
    if (!fresh && it->second != role) {
      throw ParseError("'" + name + "' is used both as an action and as a variable", at);
    }
  }

  detail::Cursor cur_;
  const TheorySpec& th_;
  std::map<std::string, Role> roles_;
};

// `trailing` is true when more input follows this subterm at the same level,
// so a μ-binder (which extends maximally right) needs parentheses.
void print(const Exp& e, const TheorySpec& th, bool trailing, std::string& out) {
  switch (e.kind()) {
    case Exp::Kind::kZero:
      out += '0';
      return;
    case Exp::Kind::kVar:
      out += e.name();
      return;
    case Exp::Kind::kOp: {
      print(e.left(), th, true, out);
      out += ' ';
      out += th.format_op(e.op());
      out += ' ';
      const bool paren = e.right().kind() == Exp::Kind::kOp;
      if (paren) out += '(';
      print(e.right(), th, trailing && !paren, out);
      if (paren) out += ')';
      return;
    }
    case Exp::Kind::kPrefix: {
      out += e.name();
      out += '.';
      const bool paren = e.body().kind() == Exp::Kind::kOp;
      if (paren) out += '(';
      print(e.body(), th, trailing && !paren, out);
      if (paren) out += ')';
      return;
    }
    case Exp::Kind::kMu: {
      if (trailing) out += '(';
      out += "mu ";
      out += e.name();
      out += '.';
      const bool paren = e.body().kind() == Exp::Kind::kOp;
      if (paren) out += '(';
      print(e.body(), th, false, out);
      if (paren) out += ')';
      if (trailing) out += ')';
      return;
    }
  }
}

}  // namespace

Exp parse_exp(std::string_view text, const TheorySpec& th, const ParseOptions& opts) {
  return ExpParser(text, th, opts).parse();
}

std::string to_string(const Exp& e, const TheorySpec& th) {
  std::string out;
  print(e, th, false, out);
  return out;
}

}  // namespace algproc
