#include "chor/syntax.hpp"

#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace chor {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

enum class Tok {
  Ident,
  Int,
  TagLit,
  Dot,
  Arrow,      // ->
  SendArrow,  // ~>
  RecvArrow,  // <~
  LBracket,
  RBracket,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Semi,
  Comma,
  Bar,
  Bang,
  Query,
  Eq,
  Lt,
  Gt,
  Plus,
  Minus,
  Star,
  At,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    int l = line, k = col;
    auto two = [&](char a, char b) { return c == a && i + 1 < src.size() && src[i + 1] == b; };
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isalnum(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), l, k});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Int, std::string(src.substr(i, j - i)), l, k});
      advance(j - i);
      continue;
    }
    if (c == '#') {
      std::size_t j = i + 1;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j == i + 1) throw ParseError("expected digits after '#'", l, k);
      out.push_back({Tok::TagLit, std::string(src.substr(i + 1, j - i - 1)), l, k});
      advance(j - i);
      continue;
    }
    if (two('-', '>')) {
      out.push_back({Tok::Arrow, "->", l, k});
      advance(2);
      continue;
    }
    if (two('~', '>')) {
      out.push_back({Tok::SendArrow, "~>", l, k});
      advance(2);
      continue;
    }
    if (two('<', '~')) {
      out.push_back({Tok::RecvArrow, "<~", l, k});
      advance(2);
      continue;
    }
    static const std::map<char, Tok> singles = {
        {'.', Tok::Dot},    {'[', Tok::LBracket}, {']', Tok::RBracket}, {'(', Tok::LParen},
        {')', Tok::RParen}, {'{', Tok::LBrace},   {'}', Tok::RBrace},   {';', Tok::Semi},
        {',', Tok::Comma},  {'|', Tok::Bar},      {'!', Tok::Bang},     {'?', Tok::Query},
        {'=', Tok::Eq},     {'<', Tok::Lt},       {'>', Tok::Gt},       {'+', Tok::Plus},
        {'-', Tok::Minus},  {'*', Tok::Star},     {'@', Tok::At},
    };
    auto it = singles.find(c);
    if (it == singles.end()) throw ParseError(std::string("unexpected character '") + c + "'", l, k);
    out.push_back({it->second, std::string(1, c), l, k});
    advance(1);
  }
  out.push_back({Tok::End, "end of input", line, col});
  return out;
}

const std::set<std::string>& keywords() {
  static const std::set<std::string> kw = {"if",   "then",  "else", "def", "in",  "true",
                                           "false", "err",  "and",  "or",  "not"};
  return kw;
}

std::int64_t to_int(const Token& t, bool negative) {
  std::string digits = (negative ? "-" : "") + t.text;
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (ec != std::errc() || ptr != digits.data() + digits.size())
    throw ParseError("integer literal out of range", t.line, t.col);
  return v;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  bool at_end() const { return peek().kind == Tok::End; }
  void expect_end() {
    if (!at_end()) fail("unexpected '" + peek().text + "'");
  }

  // --- expressions -------------------------------------------------------
  Expr expr() { return or_expr(); }

  Value value() {
    const Token& t = peek();
    if (t.kind == Tok::Minus) {
      next();
      const Token& d = expect(Tok::Int, "integer");
      return Value::integer(to_int(d, true));
    }
    if (t.kind == Tok::Int) {
      next();
      return Value::integer(to_int(t, false));
    }
    if (is_kw("true")) {
      next();
      return Value::boolean(true);
    }
    if (is_kw("false")) {
      next();
      return Value::boolean(false);
    }
    if (is_kw("err")) {
      next();
      return Value::error();
    }
    fail("expected a value");
  }

  // --- choreographies ----------------------------------------------------
  Chor choreography() {
    std::set<RecVar> scope;
    Chor c = chor_term(scope);
    return c;
  }

  // --- networks ----------------------------------------------------------
  Network network() {
    Network n;
    if (at_end()) return n;
    if (peek().kind == Tok::Int && peek().text == "0" && peek(1).kind == Tok::End) {
      next();
      return n;
    }
    while (true) {
      const Token& name_tok = peek();
      ProcessName p = process_name();
      expect(Tok::LBracket, "'['");
      Value v = value();
      expect(Tok::RBracket, "']'");
      MessageQueue q;
      if (accept(Tok::Lt)) {
        std::vector<Message> msgs;
        do {
          expect(Tok::LParen, "'('");
          ProcessName sender = process_name();
          expect(Tok::Comma, "','");
          Value payload = value();
          expect(Tok::RParen, "')'");
          msgs.push_back(Message{sender, payload});
        } while (accept(Tok::Comma));
        expect(Tok::Gt, "'>'");
        q = MessageQueue::from_sequence(msgs);
      }
      expect(Tok::LBrace, "'{'");
      std::set<RecVar> scope;
      Behaviour b = behaviour_term(p, scope);
      expect(Tok::RBrace, "'}'");
      if (!n.add(p, Process{v, q, b}))
        throw DupProcessError("duplicate process '" + p.str() + "'", name_tok.line, name_tok.col);
      if (!accept(Tok::Bar)) break;
    }
    return n;
  }

  Behaviour behaviour(const ProcessName& owner) {
    std::set<RecVar> scope;
    return behaviour_term(owner, scope);
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    next();
    return true;
  }
  const Token& expect(Tok k, const std::string& what) {
    if (peek().kind != k) fail("expected " + what + ", found '" + peek().text + "'");
    return next();
  }
  bool is_kw(const char* kw) const { return peek().kind == Tok::Ident && peek().text == kw; }
  void expect_kw(const char* kw) {
    if (!is_kw(kw)) fail(std::string("expected '") + kw + "', found '" + peek().text + "'");
    next();
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, peek().line, peek().col);
  }

  std::string identifier(const char* what) {
    const Token& t = peek();
    if (t.kind != Tok::Ident || keywords().count(t.text))
      fail(std::string("expected ") + what + ", found '" + t.text + "'");
    next();
    return t.text;
  }
  ProcessName process_name() { return ProcessName(identifier("process name")); }

  Expr or_expr() {
    Expr e = and_expr();
    while (is_kw("or")) {
      next();
      e = Expr::binary(BinaryOp::Or, e, and_expr());
    }
    return e;
  }
  Expr and_expr() {
    Expr e = not_expr();
    while (is_kw("and")) {
      next();
      e = Expr::binary(BinaryOp::And, e, not_expr());
    }
    return e;
  }
  Expr not_expr() {
    if (is_kw("not")) {
      next();
      return Expr::negate(not_expr());
    }
    return cmp_expr();
  }
  Expr cmp_expr() {
    Expr e = add_expr();
    while (peek().kind == Tok::Eq || peek().kind == Tok::Lt) {
      BinaryOp op = next().kind == Tok::Eq ? BinaryOp::Eq : BinaryOp::Lt;
      e = Expr::binary(op, e, add_expr());
    }
    return e;
  }
  Expr add_expr() {
    Expr e = mul_expr();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      BinaryOp op = next().kind == Tok::Plus ? BinaryOp::Add : BinaryOp::Sub;
      e = Expr::binary(op, e, mul_expr());
    }
    return e;
  }
  Expr mul_expr() {
    Expr e = primary();
    while (accept(Tok::Star)) e = Expr::binary(BinaryOp::Mul, e, primary());
    return e;
  }
  Expr primary() {
    if (accept(Tok::At)) return Expr::self();
    if (accept(Tok::LParen)) {
      Expr e = expr();
      expect(Tok::RParen, "')'");
      return e;
    }
    return Expr::literal(value());
  }

  // Continuation after an action: "; C", or nothing before '}' / end.
  bool has_continuation() {
    if (accept(Tok::Semi)) return !(peek().kind == Tok::RBrace || peek().kind == Tok::End);
    if (peek().kind == Tok::RBrace || peek().kind == Tok::End) return false;
    fail("expected ';', found '" + peek().text + "'");
  }

  RecVar bind(std::set<RecVar>& scope, const Token& at) {
    RecVar x(identifier("recursion variable"));
    if (scope.count(x)) throw BindError("'" + x.str() + "' is already bound", at.line, at.col);
    return x;
  }

  Chor chor_term(const std::set<RecVar>& scope) {
    const Token& t = peek();
    if (t.kind == Tok::Int && t.text == "0") {
      next();
      return nil();
    }
    if (is_kw("if")) {
      next();
      ProcessName d = process_name();
      expect(Tok::Dot, "'.'");
      Expr g = expr();
      expect_kw("then");
      expect(Tok::LBrace, "'{'");
      Chor c1 = chor_term(scope);
      expect(Tok::RBrace, "'}'");
      expect_kw("else");
      expect(Tok::LBrace, "'{'");
      Chor c2 = chor_term(scope);
      expect(Tok::RBrace, "'}'");
      accept(Tok::Semi);
      if (peek().kind == Tok::RBrace || peek().kind == Tok::End) return cond(d, g, c1, c2);
      Chor k = chor_term(scope);
      return cond(d, g, sequence(c1, k), sequence(c2, k));
    }
    if (is_kw("def")) {
      next();
      std::set<RecVar> inner = scope;
      const Token& at = peek();
      RecVar x = bind(inner, at);
      inner.insert(x);
      expect(Tok::Eq, "'='");
      expect(Tok::LBrace, "'{'");
      Chor body = chor_term(inner);
      expect(Tok::RBrace, "'}'");
      expect_kw("in");
      Chor k = chor_term(inner);
      return def(x, body, k);
    }
    if (t.kind != Tok::Ident || keywords().count(t.text)) fail("expected a choreography");
    if (peek(1).kind == Tok::Dot) return interaction(scope);
    if (peek(1).kind == Tok::RecvArrow) return runtime_receive(scope);
    RecVar x(identifier("recursion variable"));
    if (!scope.count(x)) throw BindError("unbound recursion variable '" + x.str() + "'", t.line, t.col);
    return call(x);
  }

  Chor interaction(const std::set<RecVar>& scope) {
    const Token& at = peek();
    ProcessName p = process_name();
    expect(Tok::Dot, "'.'");
    Expr e = expr();
    if (accept(Tok::Arrow)) {
      const Token& qt = peek();
      ProcessName q = process_name();
      if (q == p) throw ParseError("process '" + p.str() + "' communicates with itself", qt.line, qt.col);
      Chor k = has_continuation() ? chor_term(scope) : nil();
      return com(p, e, q, k);
    }
    if (accept(Tok::SendArrow)) {
      expect(Tok::LBracket, "'['");
      const Token& tt = expect(Tok::TagLit, "tag");
      expect(Tok::RBracket, "']'");
      Tag tag{static_cast<std::uint64_t>(to_int(tt, false))};
      Chor k = has_continuation() ? chor_term(scope) : nil();
      return rt_send(p, e, tag, k);
    }
    (void)at;
    fail("expected '->' or '~>'");
  }

  Chor runtime_receive(const std::set<RecVar>& scope) {
    ProcessName q = process_name();
    expect(Tok::RecvArrow, "'<~'");
    expect(Tok::LParen, "'('");
    const Token& pt = peek();
    ProcessName p = process_name();
    if (p == q) throw ParseError("process '" + p.str() + "' receives from itself", pt.line, pt.col);
    expect(Tok::Comma, "','");
    Payload payload;
    if (peek().kind == Tok::TagLit) {
      payload = Tag{static_cast<std::uint64_t>(to_int(next(), false))};
    } else {
      payload = value();
    }
    expect(Tok::RParen, "')'");
    Chor k = has_continuation() ? chor_term(scope) : nil();
    return rt_recv(p, payload, q, k);
  }

  Behaviour behaviour_term(const ProcessName& owner, const std::set<RecVar>& scope) {
    const Token& t = peek();
    if (t.kind == Tok::Int && t.text == "0") {
      next();
      return b_nil();
    }
    if (is_kw("if")) {
      next();
      Expr g = expr();
      expect_kw("then");
      expect(Tok::LBrace, "'{'");
      Behaviour b1 = behaviour_term(owner, scope);
      expect(Tok::RBrace, "'}'");
      expect_kw("else");
      expect(Tok::LBrace, "'{'");
      Behaviour b2 = behaviour_term(owner, scope);
      expect(Tok::RBrace, "'}'");
      accept(Tok::Semi);
      Behaviour k = (peek().kind == Tok::RBrace || peek().kind == Tok::End)
                        ? b_nil()
                        : behaviour_term(owner, scope);
      return b_cond(g, b1, b2, k);
    }
    if (is_kw("def")) {
      next();
      std::set<RecVar> inner = scope;
      const Token& at = peek();
      RecVar x = bind(inner, at);
      inner.insert(x);
      expect(Tok::Eq, "'='");
      expect(Tok::LBrace, "'{'");
      Behaviour body = behaviour_term(owner, inner);
      expect(Tok::RBrace, "'}'");
      expect_kw("in");
      Behaviour k = behaviour_term(owner, inner);
      return b_def(x, body, k);
    }
    if (t.kind != Tok::Ident || keywords().count(t.text)) fail("expected a behaviour");
    if (peek(1).kind == Tok::Bang) {
      ProcessName q = process_name();
      if (q == owner) throw ParseError("process '" + q.str() + "' sends to itself", t.line, t.col);
      next();
      Expr e = expr();
      Behaviour k = has_continuation() ? behaviour_term(owner, scope) : b_nil();
      return b_send(q, e, k);
    }
    if (peek(1).kind == Tok::Query) {
      ProcessName p = process_name();
      if (p == owner)
        throw ParseError("process '" + p.str() + "' receives from itself", t.line, t.col);
      next();
      Behaviour k = has_continuation() ? behaviour_term(owner, scope) : b_nil();
      return b_recv(p, k);
    }
    RecVar x(identifier("recursion variable"));
    if (!scope.count(x)) throw BindError("unbound recursion variable '" + x.str() + "'", t.line, t.col);
    return b_call(x);
  }
};

// Tag linearity along every path: a tag is sent at most once and received at
// most once.
void check_tags(const Chor& c, std::set<Tag> sent, std::set<Tag> received) {
  std::visit(overloaded{
                 [&](const ch::RtSend& x) {
                   if (!sent.insert(x.tag).second)
                     throw DupTagError("tag " + render(x.tag) + " is sent twice", 0, 0);
                   check_tags(x.cont, sent, received);
                 },
                 [&](const ch::RtRecv& x) {
                   if (auto* t = std::get_if<Tag>(&x.payload))
                     if (!received.insert(*t).second)
                       throw DupTagError("tag " + render(*t) + " is received twice", 0, 0);
                   check_tags(x.cont, sent, received);
                 },
                 [&](const ch::Cond& x) {
                   check_tags(x.then_branch, sent, received);
                   check_tags(x.else_branch, sent, received);
                 },
                 [&](const ch::Def& x) {
                   check_tags(x.body, sent, received);
                   check_tags(x.cont, sent, received);
                 },
                 [&](const ch::Com& x) { check_tags(x.cont, sent, received); },
                 [&](const ch::Hole& x) { check_tags(x.cont, sent, received); },
                 [&](const auto&) {},
             },
             *c);
}

}  // namespace

Chor parse_choreography(std::string_view text) {
  Parser p(text);
  Chor c = p.choreography();
  p.expect_end();
  check_tags(c, {}, {});
  return c;
}

Network parse_network(std::string_view text) {
  Parser p(text);
  Network n = p.network();
  p.expect_end();
  return n;
}

Behaviour parse_behaviour(std::string_view text, const ProcessName& owner) {
  Parser p(text);
  Behaviour b = p.behaviour(owner);
  p.expect_end();
  return b;
}

Expr parse_expr(std::string_view text) {
  Parser p(text);
  Expr e = p.expr();
  p.expect_end();
  return e;
}

Value parse_value(std::string_view text) {
  Parser p(text);
  Value v = p.value();
  p.expect_end();
  return v;
}

std::string render(const Value& v) { return v.to_string(); }

std::string render(const Tag& t) { return "#" + std::to_string(t.id); }

namespace {

std::string operand(const Expr& e) {
  if (std::holds_alternative<ex::Binary>(e.node()) || std::holds_alternative<ex::Not>(e.node()))
    return "(" + render(e) + ")";
  return render(e);
}

std::string guarded(const Expr& e) {
  if (std::holds_alternative<ex::Binary>(e.node())) return "(" + render(e) + ")";
  return render(e);
}

std::string payload_text(const Payload& p) {
  return std::visit(overloaded{[](const Tag& t) { return render(t); },
                               [](const Value& v) { return render(v); }},
                    p);
}

void render_into(const Chor& c, std::ostringstream& out);

void render_cont(const Chor& k, std::ostringstream& out) {
  if (is_nil(k)) return;
  out << "; ";
  render_into(k, out);
}

void render_into(const Chor& c, std::ostringstream& out) {
  std::visit(overloaded{
                 [&](const ch::Nil&) { out << "0"; },
                 [&](const ch::Call& x) { out << x.var.str(); },
                 [&](const ch::Cond& x) {
                   out << render_head(*c) << " then { ";
                   render_into(x.then_branch, out);
                   out << " } else { ";
                   render_into(x.else_branch, out);
                   out << " }";
                 },
                 [&](const ch::Def& x) {
                   out << "def " << x.var.str() << " = { ";
                   render_into(x.body, out);
                   out << " } in ";
                   render_into(x.cont, out);
                 },
                 [&](const ch::Hole& x) {
                   out << "\xE2\x80\xA2";
                   render_cont(x.cont, out);
                 },
                 [&](const auto& x) {
                   out << render_head(*c);
                   render_cont(x.cont, out);
                 },
             },
             *c);
}

void render_into(const Behaviour& b, std::ostringstream& out) {
  auto cont = [&](const Behaviour& k) {
    if (is_nil(k)) return;
    out << "; ";
    render_into(k, out);
  };
  std::visit(overloaded{
                 [&](const bh::Nil&) { out << "0"; },
                 [&](const bh::Call& x) { out << x.var.str(); },
                 [&](const bh::Send& x) {
                   out << x.dst.str() << "!" << render(x.expr);
                   cont(x.cont);
                 },
                 [&](const bh::Recv& x) {
                   out << x.src.str() << "?";
                   cont(x.cont);
                 },
                 [&](const bh::Cond& x) {
                   out << "if " << render(x.guard) << " then { ";
                   render_into(x.then_branch, out);
                   out << " } else { ";
                   render_into(x.else_branch, out);
                   out << " }";
                   cont(x.cont);
                 },
                 [&](const bh::Def& x) {
                   out << "def " << x.var.str() << " = { ";
                   render_into(x.body, out);
                   out << " } in ";
                   render_into(x.cont, out);
                 },
             },
             *b);
}

}  // namespace

std::string render(const Expr& e) {
  return std::visit(overloaded{
                        [](const ex::Literal& l) { return render(l.value); },
                        [](const ex::SelfCell&) { return std::string("@"); },
                        [](const ex::Binary& b) {
                          return operand(b.lhs) + " " + op_symbol(b.op) + " " + operand(b.rhs);
                        },
                        [](const ex::Not& n) { return "not " + operand(n.operand); },
                    },
                    e.node());
}

std::string render_head(const ChorNode& n) {
  return std::visit(overloaded{
                        [](const ch::Com& x) {
                          return x.src.str() + "." + guarded(x.expr) + " -> " + x.dst.str();
                        },
                        [](const ch::Cond& x) {
                          return "if " + x.decider.str() + "." + guarded(x.guard);
                        },
                        [](const ch::RtSend& x) {
                          return x.src.str() + "." + guarded(x.expr) + " ~> [" + render(x.tag) +
                                 "]";
                        },
                        [](const ch::RtRecv& x) {
                          return x.dst.str() + " <~ (" + x.src.str() + ", " +
                                 payload_text(x.payload) + ")";
                        },
                        [](const auto&) { return std::string(); },
                    },
                    n);
}

std::string render(const Chor& c) {
  std::ostringstream out;
  render_into(c, out);
  return out.str();
}

std::string render(const Behaviour& b) {
  std::ostringstream out;
  render_into(b, out);
  return out.str();
}

std::string render(const Network& n) {
  if (n.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [p, proc] : n.processes()) {
    if (!first) out << " | ";
    first = false;
    out << p.str() << "[" << render(proc.state) << "]";
    if (!proc.queue.empty()) {
      out << " <";
      bool fm = true;
      for (const auto& m : proc.queue.to_sequence()) {
        if (!fm) out << ", ";
        fm = false;
        out << "(" << m.sender.str() << ", " << render(m.payload) << ")";
      }
      out << ">";
    }
    out << " { ";
    render_into(proc.behaviour, out);
    out << " }";
  }
  return out.str();
}

}  // namespace chor
