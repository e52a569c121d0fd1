#include <catch2/catch_amalgamated.hpp>

#include "support/helpers.hpp"
#include "tdes/language_ops.hpp"

using namespace tdes;
using namespace tdes::test;

namespace {

bool same_form(const Generator& a, const Generator& b) {
  return a.alphabet == b.alphabet && a.initial == b.initial && a.marked == b.marked &&
         a.transitions == b.transitions;
}

}  // namespace

TEST_CASE("sync product identity and annihilator") {
  EventTable table;
  auto ev = add_events(table, {"a"});
  Generator a = make_generator({ev[0]}, 1, 0, {0}, {{0, ev[0], 0}});

  Generator p = sync_product(a, a, table);
  REQUIRE(p.state_count() == 1);
  REQUIRE(p.marked[0]);
  REQUIRE(p.defined(0, ev[0]));

  Generator dead = make_generator({ev[0]}, 1, 0, {}, {{0, ev[0], 0}});
  Generator q = sync_product(a, dead, table);
  REQUIRE(marked_language(q, 3).empty());
}

TEST_CASE("sync product of {ab} with {b} accepts exactly ab") {
  EventTable table;
  auto ev = add_events(table, {"a", "b"});
  EventId a = ev[0], b = ev[1];
  Generator left = make_generator({a, b}, 3, 0, {2}, {{0, a, 1}, {1, b, 2}});
  Generator right = make_generator({b}, 2, 0, {1}, {{0, b, 1}});

  Generator prod = sync_product(left, right, table);

  // Oracle: enumerate every string of length <= 2 over {a, b}.
  std::set<Word> expect_marked = {{a, b}};
  std::set<Word> expect_closed = {{}, {a}, {a, b}};
  REQUIRE(marked_language(prod, 2) == expect_marked);
  REQUIRE(closed_language(prod, 2) == expect_closed);
}

TEST_CASE("sync product is commutative and associative up to canonical form") {
  EventTable table;
  auto ev = add_events(table, {"a", "b", "c"});
  std::mt19937 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    Generator x = random_generator(rng, {ev[0], ev[1]}, 4);
    Generator y = random_generator(rng, {ev[1], ev[2]}, 4);
    Generator z = random_generator(rng, {ev[0], ev[2]}, 4);
    REQUIRE(same_form(sync_product(x, y, table), sync_product(y, x, table)));
    Generator xy_z = sync_product(sync_product(x, y, table), z, table);
    Generator x_yz = sync_product(x, sync_product(y, z, table), table);
    REQUIRE(same_form(xy_z, x_yz));
  }
}

TEST_CASE("selfloop lift adds loops and preserves projection membership") {
  EventTable table;
  auto ev = add_events(table, {"x", "y"});
  Generator a = make_generator({ev[0]}, 1, 0, {0}, {{0, ev[0], 0}});
  Generator lifted = selfloop_lift(a, {ev[0], ev[1]}, table);
  REQUIRE(lifted.defined(0, ev[1]));
  REQUIRE(lifted.next(0, ev[1]) == 0);

  // One marked state over the empty alphabet lifts to the universal language.
  Generator unit = make_generator({}, 1, 0, {0}, {});
  Generator univ = selfloop_lift(unit, {ev[0], ev[1]}, table);
  REQUIRE(closed_language(univ, 2).size() == 7);
  REQUIRE(marked_language(univ, 2).size() == 7);

  REQUIRE_THROWS(selfloop_lift(lifted, {ev[0]}, table));
}

TEST_CASE("selfloop lift membership agrees with projection membership") {
  EventTable table;
  auto ev = add_events(table, {"a", "b", "c"});
  std::mt19937 rng(21);
  Generator loc = random_generator(rng, {ev[0], ev[1]}, 4);
  std::vector<EventId> full = {ev[0], ev[1], ev[2]};
  Generator lifted = selfloop_lift(loc, full, table);
  std::uniform_int_distribution<int> len(0, 6), pick(0, 2);
  for (int i = 0; i < 10; ++i) {
    Word w;
    for (int j = len(rng); j > 0; --j) w.push_back(full[pick(rng)]);
    Word projected;
    for (EventId e : w)
      if (e != ev[2]) projected.push_back(e);
    REQUIRE(accepts(lifted, w) == accepts(loc, projected));
  }
}

TEST_CASE("project_determinize with full view is the reachable automaton") {
  EventTable table;
  auto ev = add_events(table, {"a", "b"});
  Generator a =
      make_generator({ev[0], ev[1]}, 3, 0, {0, 2}, {{0, ev[0], 1}, {1, ev[1], 2}, {2, ev[0], 2}});
  ProjectionResult res = project_determinize(a, a.alphabet, table);
  REQUIRE(same_form(res.g, canonicalize(a, table)));
}

TEST_CASE("project_determinize runs the subset construction by hand example") {
  EventTable table;
  auto ev = add_events(table, {"o", "u"});
  EventId o = ev[0], u = ev[1];
  Generator a = make_generator({o, u}, 3, 0, {2}, {{0, u, 1}, {1, o, 2}});
  ProjectionResult res = project_determinize(a, {o}, table);
  REQUIRE(res.g.state_count() == 2);
  REQUIRE(res.subsets[0] == std::vector<StateId>{0, 1});
  REQUIRE(res.subsets[1] == std::vector<StateId>{2});
  REQUIRE(res.g.marked[1]);
  REQUIRE_FALSE(res.g.marked[0]);

  // Only unobservable events: a single state, marked because a marked
  // state is reachable.
  ProjectionResult all_hidden = project_determinize(a, {}, table);
  REQUIRE(all_hidden.g.state_count() == 1);
  REQUIRE(all_hidden.g.marked[0]);
}

TEST_CASE("project_determinize is idempotent over a fixed view") {
  EventTable table;
  auto ev = add_events(table, {"a", "b", "u"});
  std::mt19937 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    Generator g = random_generator(rng, {ev[0], ev[1], ev[2]}, 5);
    std::vector<EventId> view = {ev[0], ev[1]};
    Generator once = project_determinize(g, view, table).g;
    Generator twice = project_determinize(once, view, table).g;
    REQUIRE(same_form(once, twice));
  }
}

TEST_CASE("lift then project recovers the original languages") {
  EventTable table;
  auto ev = add_events(table, {"a", "b", "z"});
  std::mt19937 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    Generator g = random_generator(rng, {ev[0], ev[1]}, 5);
    Generator lifted = selfloop_lift(g, {ev[0], ev[1], ev[2]}, table);
    Generator back = project_determinize(lifted, {ev[0], ev[1]}, table).g;
    CompareResult cmp = lang_compare(back, canonicalize(g, table), CompareMode::Equal, table);
    REQUIRE(cmp.ok);
  }
}

TEST_CASE("trim drops non-coreachable states and may empty out") {
  EventTable table;
  auto ev = add_events(table, {"a", "b"});
  Generator chain =
      make_generator({ev[0], ev[1]}, 3, 0, {1}, {{0, ev[0], 1}, {1, ev[1], 2}});
  Generator t = trim(chain, table);
  REQUIRE(t.state_count() == 2);

  Generator already = make_generator({ev[0]}, 2, 0, {1}, {{0, ev[0], 1}});
  REQUIRE(same_form(trim(already, table), canonicalize(already, table)));

  Generator hopeless = make_generator({ev[0]}, 2, 0, {}, {{0, ev[0], 1}});
  REQUIRE(trim(hopeless, table).empty());

  // Marked language survives trim; closed language may shrink.
  std::mt19937 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    Generator g = random_generator(rng, {ev[0], ev[1]}, 5);
    Generator tg = trim(g, table);
    REQUIRE(marked_language(tg, 6) == marked_language(g, 6));
    auto closed_t = closed_language(tg, 6);
    auto closed_g = closed_language(g, 6);
    REQUIRE(std::includes(closed_g.begin(), closed_g.end(), closed_t.begin(), closed_t.end()));
  }
}

TEST_CASE("lang_compare finds the shortest marked-language counterexample") {
  EventTable table;
  auto ev = add_events(table, {"a", "b"});
  EventId a = ev[0], b = ev[1];
  Generator left = make_generator({a, b}, 3, 0, {2}, {{0, a, 1}, {1, b, 2}});
  Generator right = make_generator({a, b}, 3, 0, {1, 2}, {{0, a, 1}, {1, b, 2}});

  REQUIRE(lang_compare(left, left, CompareMode::Equal, table).ok);

  CompareResult cmp = lang_compare(left, right, CompareMode::Equal, table);
  REQUIRE_FALSE(cmp.ok);
  REQUIRE(cmp.counterexample == Word{a});

  // Subset direction: left is within right.
  REQUIRE(lang_compare(left, right, CompareMode::Subset, table).ok);
}

TEST_CASE("lang_compare agrees with bounded brute-force enumeration") {
  EventTable table;
  auto ev = add_events(table, {"a", "b", "c"});
  std::vector<EventId> alphabet = {ev[0], ev[1], ev[2]};
  std::mt19937 rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    Generator x = random_generator(rng, alphabet, 4);
    Generator y = random_generator(rng, alphabet, 4);
    int bound = x.state_count() * y.state_count();
    bool closed_eq = closed_language(x, bound) == closed_language(y, bound);
    bool marked_eq = marked_language(x, bound) == marked_language(y, bound);
    REQUIRE(lang_compare(x, y, CompareMode::Equal, table).ok == (closed_eq && marked_eq));
  }
}

TEST_CASE("empty generator is accepted by every operation") {
  EventTable table;
  auto ev = add_events(table, {"a"});
  Generator none = empty_generator({ev[0]});
  Generator unit = make_generator({ev[0]}, 1, 0, {0}, {{0, ev[0], 0}});

  REQUIRE(sync_product(none, unit, table).empty());
  REQUIRE(selfloop_lift(none, {ev[0]}, table).empty());
  REQUIRE(trim(none, table).empty());
  REQUIRE(project_determinize(none, {ev[0]}, table).g.empty());
  REQUIRE(lang_compare(none, none, CompareMode::Equal, table).ok);
  CompareResult cmp = lang_compare(unit, none, CompareMode::Equal, table);
  REQUIRE_FALSE(cmp.ok);
  REQUIRE(cmp.counterexample.empty());  // the empty string witnesses
  REQUIRE(lang_compare(none, unit, CompareMode::Subset, table).ok);
}
