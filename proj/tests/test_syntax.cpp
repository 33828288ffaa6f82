#include <doctest.h>

#include "chor/async.hpp"
#include "chor/choreography.hpp"
#include "chor/precongruence.hpp"
#include "chor/syntax.hpp"
#include "oracle.hpp"

using namespace chor;

namespace {
ProcessName P(const char* s) { return ProcessName(s); }
Expr lit(int v) { return Expr::literal(Value::integer(v)); }
}  // namespace

TEST_SUITE("syntax") {
  TEST_CASE("a communication parses to Com over Nil") {
    Chor c = parse_choreography("p.1 -> q; 0");
    CHECK(same(c, com(P("p"), lit(1), P("q"), nil())));
    CHECK(same(parse_choreography("p.1 -> q"), c));
  }

  TEST_CASE("0 is the terminated choreography") {
    CHECK(is_nil(parse_choreography("0")));
    CHECK(render(nil()) == "0");
  }

  TEST_CASE("self-communication is rejected with a location") {
    CHECK_THROWS_AS(parse_choreography("p.1 -> p; 0"), ParseError);
    try {
      parse_choreography("q.2 -> r;\n  p.1 -> p");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line == 2);
      CHECK(e.column > 0);
    }
  }

  TEST_CASE("malformed input reports line and column") {
    CHECK_THROWS_AS(parse_choreography("p.1 -> "), ParseError);
    CHECK_THROWS_AS(parse_choreography("if p.true then { 0 }"), ParseError);
    CHECK_THROWS_AS(parse_choreography("p.(1 + ) -> q"), ParseError);
  }

  TEST_CASE("unbound recursion variables are rejected") {
    CHECK_THROWS_AS(parse_choreography("p.1 -> q; X"), BindError);
    CHECK_NOTHROW(parse_choreography("def X = { p.1 -> q; X } in X"));
  }

  TEST_CASE("tags are linear") {
    CHECK_THROWS_AS(parse_choreography("p.1 ~> [#0]; p.2 ~> [#0]; q <~ (p, #0)"), DupTagError);
    CHECK_THROWS_AS(parse_choreography("p.1 ~> [#0]; q <~ (p, #0); q <~ (p, #0)"), DupTagError);
    CHECK_NOTHROW(parse_choreography("p.1 ~> [#0]; q <~ (p, #0)"));
  }

  TEST_CASE("the three-process network") {
    Network n = parse_network("p[0] { q!1; r? } | q[0] { r!2; p? } | r[0] { p!3; q? }");
    CHECK(n.size() == 3);
    for (const char* p : {"p", "q", "r"}) {
      CHECK(n.contains(P(p)));
      CHECK(n.at(P(p)).queue.empty());
    }
    CHECK(render(n.at(P("p")).behaviour) == "q!1; r?");
  }

  TEST_CASE("empty network") {
    CHECK(parse_network("").empty());
    CHECK(parse_network("0").empty());
  }

  TEST_CASE("duplicate processes are rejected") {
    CHECK_THROWS_AS(parse_network("p[0]{0} | p[1]{0}"), DupProcessError);
  }

  TEST_CASE("queues parse in order") {
    Network n = parse_network("q[0] <(p, 1), (r, 5), (p, 2)> { p?; p?; r? }");
    const auto& lanes = n.at(P("q")).queue.lanes();
    CHECK(lanes.at(P("p")) == std::deque<Value>{Value::integer(1), Value::integer(2)});
    CHECK(lanes.at(P("r")) == std::deque<Value>{Value::integer(5)});
  }

  TEST_CASE("round trip of the two-message choreography") {
    for (const char* text : {"p.1 -> q; p.2 -> r", "p.@ -> q; p.(@ + 1) -> r"}) {
      Chor c = parse_choreography(text);
      CHECK(render(c) == text);
      CHECK(same(parse_choreography(render(c)), c));
    }
  }

  TEST_CASE("round trip of nested conditionals and runtime terms") {
    for (const char* text :
         {"if p.(@ < 2) then { if q.true then { p.1 -> q } else { q.2 -> p } } else { r.@ -> p }",
          "def X = { p.1 -> q; if q.(@ = 1) then { X } else { 0 } } in r.2 -> s; X",
          "p.1 ~> [#3]; r <~ (q, true); q <~ (p, #3)"}) {
      Chor c = parse_choreography(text);
      CHECK(same(parse_choreography(render(c)), c));
    }
  }

  TEST_CASE("a continuation after a conditional goes into both branches") {
    Chor c = parse_choreography("if p.true then { p.1 -> q } else { p.2 -> q }; r.3 -> s");
    CHECK(same(c, parse_choreography("if p.true then { p.1 -> q; r.3 -> s } else { p.2 -> q; r.3 -> s }")));
  }

  TEST_CASE("fresh tags start at 0 and increase") {
    TagSupply s;
    CHECK(s.fresh() == Tag{0});
    CHECK(s.fresh() == Tag{1});
  }

  TEST_CASE("fresh tags avoid the tags of a parsed term") {
    Chor c = parse_choreography("p.1 ~> [#7]; r <~ (s, #2); q <~ (p, #7)");
    // Independent scan of the term for its largest tag.
    std::uint64_t top = 0;
    for (const char* t : {"#7", "#2"}) top = std::max<std::uint64_t>(top, std::stoull(std::string(t + 1)));
    TagSupply s = supply_above(c);
    CHECK(s.fresh().id == top + 1);
  }

  TEST_CASE("process names") {
    CHECK(pn(parse_choreography("p.1 -> q")) == ProcessSet{P("p"), P("q")});
    CHECK(pn(parse_choreography("p.1 ~> [#0]; q <~ (p, #0)")) == ProcessSet{P("p"), P("q")});
    CHECK(head_names(*parse_choreography("p.1 ~> [#0]; q <~ (p, #0)")) == ProcessSet{P("p")});
    CHECK(head_names(*parse_choreography("q <~ (p, 1)")) == ProcessSet{P("q")});
    CHECK(pn(nil()).empty());
  }

  TEST_CASE("random terms round trip") {
    oracle::Rng g(7);
    for (int i = 0; i < 500; ++i) {
      Chor c = oracle::random_chor(g, 1 + static_cast<int>(g.below(8)), true);
      INFO(render(c));
      CHECK(same(parse_choreography(render(c)), c));
    }
  }

  TEST_CASE("pn is invariant under swaps") {
    for (const Chor& c : oracle::small_choreographies(4, 1, true)) {
      for (const Chor& d : oracle::swap_closure(c)) CHECK(pn(d) == pn(c));
    }
  }

  TEST_CASE("network round trip") {
    const char* text = "p[0] <(q, 1), (r, true)> { def X = { q!@ + 1; r?; X } in X } | q[err] { if @ < 1 then { p!1 } else { 0 } }";
    Network n = parse_network(text);
    CHECK(same(parse_network(render(n)), n));
  }
}
