#include "algproc/star.hpp"
#include "cursor.hpp"

namespace algproc {
namespace {

class SExpParser {
 public:
  SExpParser(std::string_view text, const TheorySpec& th, const StarParseOptions& opts)
      : cur_(text), th_(th), opts_(opts) {}

  SExp parse() {
    SExp s = sum();
    if (!cur_.at_end()) cur_.fail("unexpected trailing input");
    return s;
  }

 private:
  SExp sum() {
    SExp acc = seq();
    while (cur_.accept('+')) {
      BinaryOp op = cur_.peek() == '[' ? th_.parse_op(cur_.bracket(), true) : th_.parse_op("", false);
      acc = SExp::choice(op, acc, seq());
    }
    return acc;
  }

  SExp seq() {
    SExp acc = postfix();
    while (cur_.accept(';')) acc = SExp::seq(acc, postfix());
    return acc;
  }

  SExp postfix() {
    SExp acc = atom();
    while (cur_.accept('^')) {
      if (cur_.accept('*')) {
        acc = SExp::star(th_.parse_op("", false), acc);
      } else if (cur_.peek() == '[') {
        acc = SExp::star(th_.parse_op(cur_.bracket(), true), acc);
      } else {
        cur_.fail("expected '*' or '[' after '^'");
      }
    }
    return acc;
  }

  SExp atom() {
    const char c = cur_.peek();
    if (c == '(') {
      cur_.accept('(');
      SExp s = sum();
      cur_.expect(')');
      return s;
    }
    if ((c == '0' || c == '1') && !is_ident_char(cur_.peek_next())) {
      cur_.accept(c);
      return c == '0' ? SExp::zero() : SExp::one();
    }
    if (!cur_.at_ident()) cur_.fail("expected a star expression");
    std::string id = cur_.ident();
    if (opts_.gkat && id == "test" && cur_.peek() == '[') {
      if (th_.id() != TheoryId::kGS) cur_.fail("tests need guarded semilattices");
      return SExp::test(th_.parse_guard(cur_.bracket()));
    }
    return SExp::act(std::move(id));
  }

  detail::Cursor cur_;
  const TheorySpec& th_;
  StarParseOptions opts_;
};

// Levels: 0 sum, 1 sequence, 2 postfix/atom.
void print(const SExp& s, const TheorySpec& th, int level, std::string& out) {
  switch (s.kind()) {
    case SExp::Kind::kZero:
      out += '0';
      return;
    case SExp::Kind::kOne:
      out += '1';
      return;
    case SExp::Kind::kAct:
      out += s.action();
      return;
    case SExp::Kind::kChoice: {
      if (level > 0) out += '(';
      print(s.left(), th, 0, out);
      out += ' ';
      out += th.format_op(s.op());
      out += ' ';
      print(s.right(), th, 1, out);
      if (level > 0) out += ')';
      return;
    }
    case SExp::Kind::kSeq: {
      if (level > 1) out += '(';
      print(s.left(), th, 1, out);
      out += ';';
      print(s.right(), th, 2, out);
      if (level > 1) out += ')';
      return;
    }
    case SExp::Kind::kStar: {
      print(s.body(), th, 2, out);
      out += '^';
      if (s.op().kind == OpKind::kPlus) {
        out += '*';
      } else {
        out += th.format_op(s.op()).substr(1);
      }
      return;
    }
  }
}

}  // namespace

SExp parse_sexp(std::string_view text, const TheorySpec& th, const StarParseOptions& opts) {
  return SExpParser(text, th, opts).parse();
}

std::string to_string(const SExp& s, const TheorySpec& th) {
  std::string out;
  print(s, th, 0, out);
  return out;
}

}  // namespace algproc
