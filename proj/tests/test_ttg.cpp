#include <catch2/catch_amalgamated.hpp>

#include "support/helpers.hpp"
#include "tdes/io.hpp"
#include "tdes/ttg.hpp"

using namespace tdes;
using namespace tdes::test;

namespace {

ATGSpec two_activity(EventId e, bool mark_second = true) {
  ATGSpec atg;
  atg.activity_count = 2;
  atg.initial = 0;
  atg.marked = {0, static_cast<char>(mark_second)};
  atg.transitions.resize(2);
  atg.transitions[0].push_back({e, 1});
  atg.events = {e};
  return atg;
}

}  // namespace

TEST_CASE("event table enforces its invariants") {
  EventTable table;
  REQUIRE(table.name(EventTable::tick()) == "tick");
  REQUIRE(table.controllable(EventTable::tick()));
  REQUIRE_FALSE(table.prohibitible(EventTable::tick()));
  REQUIRE_FALSE(table.forcible(EventTable::tick()));
  REQUIRE_THROWS(table.add("tick", false, false, 0, 1));
  REQUIRE_THROWS(table.add("", false, false, 0, 1));
  REQUIRE_THROWS(table.add("x", false, false, 2, 1));
  EventId a = table.add("a", true, false, 1, kInfinity);
  REQUIRE_THROWS(table.add("a", false, false, 0, 0));
  REQUIRE(table.prohibitible(a));
  REQUIRE(table.remote(a));
}

TEST_CASE("eventless marked activity gives the language tick*") {
  EventTable table;
  ATGSpec atg;
  atg.activity_count = 1;
  atg.initial = 0;
  atg.marked = {1};
  atg.transitions.resize(1);
  Generator ttg = build_ttg(atg, table);
  REQUIRE(ttg.state_count() == 1);
  REQUIRE(ttg.marked[0]);
  REQUIRE(ttg.next(0, EventTable::tick()) == 0);
}

TEST_CASE("prospective bounds (1,2) gate the event and preempt the third tick") {
  EventTable table;
  EventId sigma = table.add("sigma", false, false, 1, 2);
  Generator ttg = build_ttg(two_activity(sigma), table);

  EventId t = EventTable::tick();
  REQUIRE(accepts(ttg, {t, sigma}));
  REQUIRE(accepts(ttg, {t, t, sigma, t, t}));
  REQUIRE_FALSE(accepts(ttg, {sigma}));          // before the lower bound
  REQUIRE_FALSE(accepts(ttg, {t, t, t}));        // deadline preempts the third tick
  REQUIRE(ttg.state_count() == 4);
}

TEST_CASE("bounds (1,1) force the event exactly one tick after enablement") {
  EventTable table;
  EventId alpha2 = table.add("alpha2", true, true, 0, kInfinity);
  EventId beta2 = table.add("beta2", false, false, 1, 1);
  ATGSpec atg;
  atg.activity_count = 2;
  atg.initial = 0;
  atg.marked = {1, 0};
  atg.transitions.resize(2);
  atg.transitions[0].push_back({alpha2, 1});
  atg.transitions[1].push_back({beta2, 0});
  atg.events = {alpha2, beta2};
  Generator ttg = build_ttg(atg, table);

  EventId t = EventTable::tick();
  REQUIRE_FALSE(accepts(ttg, {alpha2, beta2}));
  REQUIRE(accepts(ttg, {alpha2, t, beta2}));
  REQUIRE_FALSE(accepts(ttg, {alpha2, t, t}));  // beta2 must preempt the next tick
}

TEST_CASE("remote events wait out their lower bound and never expire") {
  EventTable table;
  EventId eta = table.add("eta", false, false, 2, kInfinity);
  Generator ttg = build_ttg(two_activity(eta), table);
  EventId t = EventTable::tick();
  REQUIRE_FALSE(accepts(ttg, {t, eta}));
  REQUIRE(accepts(ttg, {t, t, eta}));
  REQUIRE(accepts(ttg, {t, t, t, t, t, eta}));
}

TEST_CASE("build_ttg rejects malformed inputs") {
  EventTable table;
  EventId a = table.add("a", false, false, 0, kInfinity);
  ATGSpec atg = two_activity(a);
  atg.bounds_override[a] = {3, 1};
  REQUIRE_THROWS(build_ttg(atg, table));
  ATGSpec with_tick = two_activity(a);
  with_tick.events.push_back(EventTable::tick());
  std::sort(with_tick.events.begin(), with_tick.events.end());
  REQUIRE_THROWS(build_ttg(with_tick, table));
}

TEST_CASE("comp of one component is that component") {
  EventTable table;
  EventId a = table.add("a", false, false, 1, 2);
  Generator ttg = build_ttg(two_activity(a), table);
  Generator one = comp({ttg}, table);
  REQUIRE(lang_equal(one, ttg, table));
}

TEST_CASE("comp of two trivial components is one state with a tick selfloop") {
  EventTable table;
  ATGSpec atg;
  atg.activity_count = 1;
  atg.initial = 0;
  atg.marked = {1};
  atg.transitions.resize(1);
  Generator x = build_ttg(atg, table);
  Generator both = comp({x, x}, table);
  REQUIRE(both.state_count() == 1);
  REQUIRE(both.next(0, EventTable::tick()) == 0);
}

TEST_CASE("comp warns about shared non-tick events") {
  EventTable table;
  EventId a = table.add("a", false, false, 0, kInfinity);
  Generator ttg = build_ttg(two_activity(a), table);
  std::vector<std::string> warnings;
  comp({ttg, ttg}, table, &warnings);
  REQUIRE_FALSE(warnings.empty());
}

TEST_CASE("build_ttg output is canonical and reproducible") {
  EventTable table;
  EventId b = table.add("b", false, false, 1, 3);
  EventId c = table.add("c", true, false, 0, kInfinity);
  ATGSpec atg;
  atg.activity_count = 3;
  atg.initial = 0;
  atg.marked = {1, 0, 0};
  atg.transitions.resize(3);
  atg.transitions[0].push_back({b, 1});
  atg.transitions[1].push_back({c, 2});
  atg.transitions[2].push_back({b, 0});
  atg.events = {b, c};
  std::string once = generator_text(build_ttg(atg, table), "g", table);
  std::string twice = generator_text(build_ttg(atg, table), "g", table);
  REQUIRE(once == twice);
}

TEST_CASE("no reachable TTG state stops time outright") {
  EventTable table;
  std::vector<EventId> events;
  events.push_back(table.add("p", false, false, 1, 2));
  events.push_back(table.add("q", true, true, 0, kInfinity));
  events.push_back(table.add("r", false, false, 0, 1));
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> acts(1, 4), pick_act(0, 3);
  std::uniform_real_distribution<double> coin(0, 1);
  for (int trial = 0; trial < 50; ++trial) {
    ATGSpec atg;
    atg.activity_count = acts(rng);
    atg.initial = 0;
    atg.transitions.resize(atg.activity_count);
    for (int s = 0; s < atg.activity_count; ++s) {
      atg.marked.push_back(coin(rng) < 0.5);
      for (EventId e : events)
        if (coin(rng) < 0.4) {
          int target = pick_act(rng) % atg.activity_count;
          atg.transitions[s].push_back({e, target});
          atg.events.push_back(e);
        }
    }
    std::sort(atg.events.begin(), atg.events.end());
    atg.events.erase(std::unique(atg.events.begin(), atg.events.end()), atg.events.end());
    Generator ttg = build_ttg(atg, table);
    for (StateId s = 0; s < ttg.state_count(); ++s)
      REQUIRE_FALSE(ttg.transitions[s].empty());
  }
}
