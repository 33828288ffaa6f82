#include <doctest.h>

#include <algorithm>

#include "chor/processes.hpp"
#include "chor/run.hpp"
#include "chor/syntax.hpp"
#include "oracle.hpp"

using namespace chor;

namespace {

ProcessName P(const char* s) { return ProcessName(s); }
Message M(const char* p, int v) { return {P(p), Value::integer(v)}; }

const char* kDeadlock = "p[0] { q!1; r? } | q[0] { r!2; p? } | r[0] { p!3; q? }";

}  // namespace

TEST_SUITE("queues") {
  TEST_CASE("enqueue on an empty queue") {
    MessageQueue q = enqueue(MessageQueue{}, M("p", 1));
    CHECK(q.lanes().at(P("p")) == std::deque<Value>{Value::integer(1)});
  }

  TEST_CASE("one sender keeps its order") {
    MessageQueue q = enqueue(enqueue(MessageQueue{}, M("p", 1)), M("p", 2));
    CHECK(q.lanes().at(P("p")) == std::deque<Value>{Value::integer(1), Value::integer(2)});
  }

  TEST_CASE("senders get independent lanes") {
    MessageQueue q = MessageQueue::from_sequence({M("p", 1), M("q", 7), M("p", 2)});
    CHECK(q.lane_depth(P("p")) == 2);
    CHECK(q.lane_depth(P("q")) == 1);
  }

  TEST_CASE("dequeue from the head of a lane") {
    auto r = dequeue_from(MessageQueue::from_sequence({M("p", 1), M("p", 2)}), P("p"));
    REQUIRE(r);
    CHECK(r->first == Value::integer(1));
    CHECK(r->second == MessageQueue::from_sequence({M("p", 2)}));
  }

  TEST_CASE("a receive from an empty lane blocks") {
    CHECK_FALSE(dequeue_from(MessageQueue::from_sequence({M("q", 7)}), P("p")));
  }

  TEST_CASE("heads are exchanged across senders") {
    auto r = dequeue_from(MessageQueue::from_sequence({M("p", 1), M("q", 7)}), P("q"));
    REQUIRE(r);
    CHECK(r->first == Value::integer(7));
    CHECK(r->second == MessageQueue::from_sequence({M("p", 1)}));
    CHECK(r->second.empty() == false);
  }

  TEST_CASE("lanes agree with the queue congruence") {
    std::vector<ProcessName> senders{P("p"), P("q"), P("r")};
    std::vector<Value> values{Value::integer(1), Value::integer(2)};
    for (std::size_t n = 0; n <= 4; ++n) {
      std::map<std::string, std::string> rep;  // sequence -> class representative
      for (const auto& s : oracle::all_sequences(senders, values, n)) {
        if (rep.count(oracle::seq_key(s))) continue;
        for (const auto& k : oracle::congruence_class(s)) rep[k] = oracle::seq_key(s);
      }
      std::map<std::string, MessageQueue> by_class;
      for (const auto& s : oracle::all_sequences(senders, values, n)) {
        MessageQueue q = MessageQueue::from_sequence(s);
        auto [it, fresh] = by_class.emplace(rep[oracle::seq_key(s)], q);
        if (!fresh) CHECK(it->second == q);
      }
      // Distinct classes, distinct lanes.
      for (auto a = by_class.begin(); a != by_class.end(); ++a)
        for (auto b = std::next(a); b != by_class.end(); ++b) CHECK_FALSE(a->second == b->second);
    }
  }
}

TEST_SUITE("sp") {
  TEST_CASE("a matching pair communicates") {
    Network n = parse_network("p[0] { q!1; q? } | q[0] { p?; p!5 }");
    auto ts = enabled_sp(n);
    REQUIRE(ts.size() == 1);
    CHECK(ts[0].label.signature() == "Com p->q v=1");
    CHECK(ts[0].target.at(P("q")).state == Value::integer(1));
    auto us = enabled_sp(ts[0].target);
    REQUIRE(us.size() == 1);
    CHECK(normalize_network(us[0].target).empty());
  }

  TEST_CASE("every head a send: deadlock") {
    Network n = parse_network(kDeadlock);
    CHECK(enabled_sp(n).empty());
    CHECK(classify(n, Mode::Sync) == NetStatus::Deadlocked);
  }

  TEST_CASE("the empty network") {
    CHECK(enabled_sp(Network{}).empty());
    CHECK(classify(Network{}, Mode::Sync) == NetStatus::Terminated);
  }

  TEST_CASE("terminated processes are dropped") {
    CHECK(normalize_network(parse_network("p[0]{0} | q[0]{0}")).empty());
    CHECK(normalize_network(parse_network("p[0]{ def X = { q!1; X } in 0 }")).empty());
  }

  TEST_CASE("a process with messages waiting stays") {
    Network n = normalize_network(parse_network("q[0] <(p, 1)> { 0 }"));
    CHECK(n.contains(P("q")));
    CHECK(classify(n, Mode::Async) == NetStatus::OrphanedMessages);
  }

  TEST_CASE("normalization is idempotent") {
    Network n = parse_network("p[0]{0} | q[0] <(p, 1)> { def X = { p?; X } in X } | r[0] { def Y = { 0 } in 0 }");
    Network once = normalize_network(n);
    CHECK(same(normalize_network(once), once));
  }

  TEST_CASE("synchronous steps refuse queued messages") {
    CHECK_THROWS_AS(enabled_sp(parse_network("q[0] <(p, 1)> { p? }")), NonEmptyQueue);
  }

  TEST_CASE("conditionals at processes") {
    auto ts = enabled_sp(parse_network("p[1] { if @ = 1 then { q!5 } else { 0 } } | q[0] { p? }"));
    REQUIRE(ts.size() == 1);
    CHECK(ts[0].label.signature() == "Then p");
  }
}

TEST_SUITE("asp") {
  TEST_CASE("the three-process network drains") {
    Network n = lift_to_async(parse_network(kDeadlock));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Scheduler s = Scheduler::random(seed);
      NetRun r = simulate(n, Mode::Async, s, 100);
      CHECK(r.trace.outcome == "terminated");
      CHECK(r.final.all_queues_empty());
    }
    CHECK(classify(n, Mode::Async) == NetStatus::Running);
  }

  TEST_CASE("a message nobody reads") {
    Network n = parse_network("p[0] { q!1 } | q[0] { 0 }");
    auto ts = enabled_asp(n);
    REQUIRE(ts.size() == 1);
    Network after = normalize_network(ts[0].target);
    CHECK_FALSE(after.contains(P("p")));
    CHECK(after.at(P("q")).queue == MessageQueue::from_sequence({M("p", 1)}));
    CHECK(is_nil(after.at(P("q")).behaviour));
    CHECK(enabled_asp(after).empty());
    CHECK(classify(after, Mode::Async) == NetStatus::OrphanedMessages);
  }

  TEST_CASE("nothing to do in the empty network") { CHECK(enabled_asp(Network{}).empty()); }

  TEST_CASE("lifting") {
    CHECK(lift_to_async(Network{}).empty());
    Network n = parse_network(kDeadlock);
    Network l = lift_to_async(n);
    CHECK(same(l, n));
    CHECK(l.all_queues_empty());
  }

  TEST_CASE("lifting commutes with normalization") {
    oracle::Rng g(5);
    for (int i = 0; i < 100; ++i) {
      Network n;
      for (const char* p : {"p", "q", "r"}) {
        std::string b = g.below(3) == 0 ? "0" : g.below(2) ? "s!1; s?" : "def X = { s!2; X } in 0";
        n.add(P(p), {Value::integer(0), MessageQueue{}, parse_behaviour(b, P(p))});
      }
      CHECK(same(lift_to_async(normalize_network(n)), normalize_network(lift_to_async(n))));
    }
  }

  TEST_CASE("lane depth is reported for queue steps") {
    Scheduler s = Scheduler::leftmost();
    NetRun r = simulate(parse_network("p[0] { q!1; q!2 } | q[0] { p?; p? }"), Mode::Async, s, 10);
    REQUIRE(r.trace.entries.size() >= 2);
    CHECK(r.trace.entries[0].lane_depth == std::size_t{1});
    CHECK(format_text(r.trace.entries[0]).find("depth=1") != std::string::npos);
  }

  TEST_CASE("per-lane FIFO along random runs") {
    Network n = parse_network(
        "p[0] { q!1; q!2; r!3; q!4 } | r[0] { q!10; p?; q!11 } | q[0] { r?; p?; p?; r?; p? }");
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      Scheduler s = Scheduler::random(seed);
      NetRun run = simulate(n, Mode::Async, s, 100);
      std::map<std::pair<std::string, std::string>, std::vector<Value>> sent, got;
      for (const auto& e : run.trace.entries) {
        auto key = std::make_pair(e.label.subjects[0].str(), e.label.subjects[1].str());
        if (e.label.rule == Rule::ComS) sent[key].push_back(*e.label.value);
        if (e.label.rule == Rule::ComR) got[key].push_back(*e.label.value);
      }
      for (const auto& [k, vs] : got) {
        REQUIRE(vs.size() <= sent[k].size());
        CHECK(std::equal(vs.begin(), vs.end(), sent[k].begin()));
      }
      CHECK(run.trace.outcome == "terminated");
    }
  }

  TEST_CASE("q receives 2 before 1 in the naive projection") {
    Network n = parse_network("p[0] { q!1 } | q[0] <(p, 2)> { p?; p? }");
    Scheduler s = Scheduler::leftmost();
    NetRun r = simulate(n, Mode::Async, s, 10);
    std::vector<Value> received;
    for (const auto& e : r.trace.entries)
      if (e.label.rule == Rule::ComR) received.push_back(*e.label.value);
    CHECK(received == std::vector<Value>{Value::integer(2), Value::integer(1)});
  }
}
