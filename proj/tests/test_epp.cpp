#include <doctest.h>

#include <algorithm>

#include "chor/epp.hpp"
#include "chor/harness.hpp"
#include "chor/processes.hpp"
#include "chor/semantics.hpp"
#include "chor/syntax.hpp"
#include "oracle.hpp"

using namespace chor;

namespace {

ProcessName P(const char* s) { return ProcessName(s); }

GlobalState zeros(const Chor& c) { return GlobalState::uniform(pn(c), Value::integer(0)); }

}  // namespace

TEST_SUITE("epp") {
  TEST_CASE("a communication projects to a send and a receive") {
    Chor c = parse_choreography("p.1 -> q");
    CHECK(render(project_behaviour(c, P("p"))) == "q!1");
    CHECK(render(project_behaviour(c, P("q"))) == "p?");
    CHECK(render(project_behaviour(c, P("r"))) == "0");
  }

  TEST_CASE("non-deciders must agree on both branches") {
    Chor ok = parse_choreography("if p.@ then { p.1 -> q } else { p.2 -> q }");
    CHECK(render(project_behaviour(ok, P("q"))) == "p?");
    CHECK(render(project_behaviour(ok, P("p"))) == "if @ then { q!1 } else { q!2 }");
    Chor bad = parse_choreography("if p.@ then { p.1 -> q } else { q.1 -> p }");
    // The two branch projections at q differ, so there is nothing to return.
    CHECK(render(project_behaviour(parse_choreography("p.1 -> q"), P("q"))) !=
          render(project_behaviour(parse_choreography("q.1 -> p"), P("q"))));
    CHECK_THROWS_AS(project_behaviour(bad, P("q")), NotProjectable);
    CHECK_FALSE(projectable(bad));
  }

  TEST_CASE("queue projection") {
    Chor c = parse_choreography("q <~ (p, 1); r.2 -> q; q <~ (s, 3)");
    CHECK(project_queue(c, P("q")) ==
          std::vector<Message>{{P("p"), Value::integer(1)}, {P("s"), Value::integer(3)}});
    CHECK(project_queue(parse_choreography("p.1 -> q; q <~ (r, 4)"), P("q")) ==
          project_queue(parse_choreography("q <~ (r, 4)"), P("q")));
    CHECK(project_queue(parse_choreography("p.1 -> q; r.2 -> s"), P("q")).empty());
  }

  TEST_CASE("the two-message choreography") {
    Chor c = parse_choreography("p.1 -> q; p.2 -> r");
    Network n = epp_sync(c, zeros(c));
    CHECK(render(n) == "p[0] { q!1; r!2 } | q[0] { p? } | r[0] { p? }");
  }

  TEST_CASE("projection of 0") { CHECK(epp_sync(nil(), GlobalState{}).empty()); }

  TEST_CASE("synchronous projection rejects runtime terms") {
    Chor c = parse_choreography("q <~ (p, 1)");
    CHECK_THROWS_AS(epp_sync(c, zeros(c)), IllFormed);
  }

  TEST_CASE("projectability does not depend on the state") {
    for (const auto& p : generate_corpus({})) {
      GlobalState a = GlobalState::uniform(pn(p.chor), Value::integer(0));
      GlobalState b = GlobalState::uniform(pn(p.chor), Value::boolean(true));
      bool x = true, y = true;
      try { epp_sync(p.chor, a); } catch (const NotProjectable&) { x = false; }
      try { epp_sync(p.chor, b); } catch (const NotProjectable&) { y = false; }
      CHECK(x == y);
    }
  }

  TEST_CASE("asynchronous projection puts messages in queues") {
    Chor c = parse_choreography("q <~ (p, 1)");
    GlobalState s = GlobalState::uniform({P("p"), P("q")}, Value::integer(0));
    Network n = epp_async(c, s);
    CHECK_FALSE(n.contains(P("p")));
    CHECK(n.at(P("q")).queue == MessageQueue::from_sequence({{P("p"), Value::integer(1)}}));
    CHECK(render(n.at(P("q")).behaviour) == "p?");
  }

  TEST_CASE("ill-formed choreographies are not projected") {
    Chor c = parse_choreography("p.1 -> q; q <~ (p, 2)");
    CHECK_THROWS_AS(epp_async(c, zeros(c)), IllFormed);
  }

  TEST_CASE("runtime-free: asynchronous projection is the lifted one") {
    oracle::Rng g(17);
    for (int i = 0; i < 200; ++i) {
      Chor c = oracle::random_chor(g, 6, true);
      if (!projectable(c)) continue;
      CHECK(same(epp_async(c, zeros(c)), lift_to_async(epp_sync(c, zeros(c)))));
    }
  }

  TEST_CASE("the projected processes are pn of the choreography") {
    for (const auto& p : generate_corpus({})) {
      Network n = epp_sync(p.chor, p.state);
      ProcessSet names;
      for (const auto& [q, _] : n.processes()) names.insert(q);
      CHECK(names == pn(p.chor));
    }
  }

  TEST_CASE("a receive step matches a queue step") {
    for (const auto& p : generate_corpus({})) {
      Configuration cfg{p.chor, p.state};
      // Send everything that can be sent, then compare every receive.
      for (int k = 0; k < 3; ++k) {
        auto ts = enabled_async(cfg);
        auto s = std::find_if(ts.begin(), ts.end(), [](const Transition& t) { return t.label.rule == Rule::ComS; });
        if (s == ts.end()) break;
        cfg = s->target;
      }
      Network n = epp_async(cfg.chor, cfg.state);
      for (const auto& t : enabled_async(cfg)) {
        if (t.label.rule != Rule::ComR) continue;
        bool matched = false;
        for (const auto& u : enabled_asp(n))
          if (u.label.signature() == t.label.signature() &&
              network_equiv(epp_async(t.target.chor, t.target.state), u.target, 2) == Answer::Yes)
            matched = true;
        CHECK_MESSAGE(matched, p.id, ": ", t.label.signature());
      }
    }
  }
}
