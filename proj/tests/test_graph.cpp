// Tests for the traceability graph: construction invariants, reachability
// and layered breadth-first search against independent oracles, elementary
// cycle enumeration, and the traceability matrix.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tracekit/tracekit.hpp"

#include "support/fixtures.hpp"
#include "support/model_gen.hpp"
#include "support/oracles.hpp"

using namespace tracekit;

namespace {

Model load_fixture(const char* text) {
  auto r = load_model(text, "fixture.sreq");
  REQUIRE(r.model.has_value());
  return std::move(*r.model);
}

/// Requirements R1..Rn of one class plus the given refine edges; lets tests
/// build arbitrary (including cyclic) derivation shapes.
Model refine_web(std::size_t n, const std::vector<std::pair<int, int>>& edges) {
  ModelInput in;
  for (std::size_t i = 1; i <= n; ++i) {
    Requirement r;
    r.id = "R" + std::to_string(i);
    r.req_class = RequirementClass::SystemTechnical;
    r.text = "t";
    in.requirements.push_back(std::move(r));
  }
  for (auto [a, b] : edges)
    in.links.push_back({LinkKind::Refine, "R" + std::to_string(a),
                        "R" + std::to_string(b), std::nullopt});
  auto built = build_model(std::move(in));
  REQUIRE(built.ok());
  return std::move(built.value());
}

std::set<Step> all_steps() {
  std::set<Step> steps;
  for (int k = 0; k < kEdgeKindCount; ++k)
    for (Direction d : {Direction::Forward, Direction::Reverse})
      steps.insert({static_cast<EdgeKind>(k), d});
  return steps;
}

std::set<Step> random_relation(std::mt19937& rng) {
  std::set<Step> steps;
  for (const Step& s : all_steps())
    if (rng() % 3 == 0) steps.insert(s);
  return steps;
}

std::set<EntityId> random_start(std::mt19937& rng, const std::vector<EntityId>& ids,
                                std::size_t max_size) {
  std::set<EntityId> start;
  if (ids.empty()) return start;
  std::size_t n = 1 + rng() % max_size;
  for (std::size_t i = 0; i < n; ++i) start.insert(ids[rng() % ids.size()]);
  return start;
}

}  // namespace

TEST_CASE("edge kinds mirror link kinds and add parent") {
  CHECK(kEdgeKindCount == 8);
  for (LinkKind k : {LinkKind::Derive, LinkKind::Refine, LinkKind::Satisfy,
                     LinkKind::Verify, LinkKind::Specify, LinkKind::Allocate,
                     LinkKind::Covers}) {
    EdgeKind e = edge_kind(k);
    CHECK(std::string(to_string(e)) == to_string(k));
    CHECK(parse_edge_kind(to_string(k)) == e);
  }
  CHECK(parse_edge_kind("parent") == EdgeKind::Parent);
  CHECK(std::string(to_string(EdgeKind::Parent)) == "parent");
  CHECK_FALSE(parse_edge_kind("child").has_value());
}

TEST_CASE("build_graph mirrors the model") {
  Model m = load_fixture(fixtures::kCleanFixture);
  TraceGraph g = build_graph(m);

  CHECK(g.nodes() == m.ids());
  CHECK(std::is_sorted(g.nodes().begin(), g.nodes().end()));
  // One edge per link plus one Parent edge (AR-2 is a child of AR-1).
  CHECK(g.edges().size() == m.links().size() + 1);
  CHECK(std::count_if(g.edges().begin(), g.edges().end(), [](const GraphEdge& e) {
          return e.kind == EdgeKind::Parent;
        }) == 1);

  CHECK(g.contains("AR-1"));
  CHECK_FALSE(g.contains("ghost"));
  CHECK(g.kind_of("TC-1") == EntityKind::TestCase);
  CHECK_FALSE(g.kind_of("ghost").has_value());

  // Parent edges run from parent to child.
  CHECK(g.targets("AR-1", EdgeKind::Parent) == std::vector<EntityId>{"AR-2"});
  CHECK(g.sources("AR-2", EdgeKind::Parent) == std::vector<EntityId>{"AR-1"});

  CHECK(g.targets("TC-1", EdgeKind::Verify) ==
        std::vector<EntityId>{"STR-1", "STR-2"});
  CHECK(g.sources("STR-1", EdgeKind::Verify) == std::vector<EntityId>{"TC-1"});
  CHECK(g.targets("TC-1", EdgeKind::Derive).empty());
}

TEST_CASE("adjacency lists are sorted and mutually consistent") {
  std::mt19937 rng(4242);
  for (int i = 0; i < 10; ++i) {
    Model m = model_gen::random_model(rng);
    TraceGraph g = build_graph(m);
    for (const EntityId& u : g.nodes()) {
      for (int k = 0; k < kEdgeKindCount; ++k) {
        EdgeKind kind = static_cast<EdgeKind>(k);
        const auto& ts = g.targets(u, kind);
        CHECK(std::is_sorted(ts.begin(), ts.end()));
        for (const EntityId& v : ts) {
          const auto& back = g.sources(v, kind);
          CHECK(std::find(back.begin(), back.end(), u) != back.end());
        }
      }
    }
  }
}

TEST_CASE("graph of an empty model is empty") {
  auto built = build_model(ModelInput{});
  REQUIRE(built.ok());
  TraceGraph g = build_graph(built.value());
  CHECK(g.nodes().empty());
  CHECK(g.edges().empty());
  auto r = reachable(g, {}, all_steps());
  REQUIRE(r.ok());
  CHECK(r.value().empty());
}

TEST_CASE("reachable follows only the requested steps") {
  Model m = load_fixture(fixtures::kCleanFixture);
  TraceGraph g = build_graph(m);

  SECTION("forward derivation from AR-1") {
    auto r = reachable(g, {"AR-1"}, {{EdgeKind::Derive, Direction::Forward}});
    REQUIRE(r.ok());
    CHECK(r.value() == std::set<EntityId>{"SR-1", "STR-1"});
  }
  SECTION("derive plus refine forward") {
    auto r = reachable(g, {"AR-1"},
                       {{EdgeKind::Derive, Direction::Forward},
                        {EdgeKind::Refine, Direction::Forward}});
    REQUIRE(r.ok());
    CHECK(r.value() == std::set<EntityId>{"AR-2", "SR-1", "STR-1", "STR-2"});
  }
  SECTION("reverse verify finds the test cases") {
    auto r = reachable(g, {"STR-1"}, {{EdgeKind::Verify, Direction::Reverse}});
    REQUIRE(r.ok());
    CHECK(r.value() == std::set<EntityId>{"TC-1"});
  }
  SECTION("empty relation reaches nothing") {
    auto r = reachable(g, {"AR-1"}, {});
    REQUIRE(r.ok());
    CHECK(r.value().empty());
  }
  SECTION("start nodes are excluded unless revisited") {
    auto r = reachable(g, {"AR-1"}, {{EdgeKind::Derive, Direction::Forward}});
    REQUIRE(r.ok());
    CHECK(r.value().count("AR-1") == 0);
  }
  SECTION("unknown start id is a lookup error") {
    auto r = reachable(g, {"ghost"}, {{EdgeKind::Derive, Direction::Forward}});
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().kind == LookupError::Kind::UnknownReference);
    CHECK(r.error().id == "ghost");
  }
}

TEST_CASE("a cycle can bring the start node back into the result") {
  Model m = refine_web(2, {{1, 2}, {2, 1}});
  TraceGraph g = build_graph(m);
  auto r = reachable(g, {"R1"}, {{EdgeKind::Refine, Direction::Forward}});
  REQUIRE(r.ok());
  CHECK(r.value() == std::set<EntityId>{"R1", "R2"});
}

TEST_CASE("reachable agrees with a fixpoint oracle on random models") {
  std::mt19937 rng(20240519);
  for (int i = 0; i < 60; ++i) {
    Model m = model_gen::random_model(rng);
    TraceGraph g = build_graph(m);
    auto relation = random_relation(rng);
    auto start = random_start(rng, g.nodes(), 4);
    auto got = reachable(g, start, relation);
    REQUIRE(got.ok());
    CHECK(got.value() == oracles::closure_oracle(g.edges(), start, relation));
  }
}

TEST_CASE("reachability distributes over unions of start sets") {
  std::mt19937 rng(20240520);
  for (int i = 0; i < 40; ++i) {
    Model m = model_gen::random_model(rng);
    TraceGraph g = build_graph(m);
    auto relation = random_relation(rng);
    auto s = random_start(rng, g.nodes(), 3);
    auto t = random_start(rng, g.nodes(), 3);
    std::set<EntityId> both;
    both.insert(s.begin(), s.end());
    both.insert(t.begin(), t.end());

    auto rs = reachable(g, s, relation);
    auto rt = reachable(g, t, relation);
    auto ru = reachable(g, both, relation);
    REQUIRE(rs.ok());
    REQUIRE(rt.ok());
    REQUIRE(ru.ok());
    std::set<EntityId> expect = rs.value();
    expect.insert(rt.value().begin(), rt.value().end());
    CHECK(ru.value() == expect);
  }
}

TEST_CASE("bfs distances match a round-based oracle") {
  std::mt19937 rng(20240521);
  for (int i = 0; i < 60; ++i) {
    Model m = model_gen::random_model(rng);
    TraceGraph g = build_graph(m);
    auto relation = random_relation(rng);
    auto start = random_start(rng, g.nodes(), 4);
    auto got = bfs_layers(g, start, relation);
    REQUIRE(got.ok());
    CHECK(got.value().distance ==
          oracles::distance_oracle(g.edges(), start, relation));
  }
}

TEST_CASE("bfs predecessors are valid and smallest-id") {
  std::mt19937 rng(20240522);
  for (int i = 0; i < 30; ++i) {
    Model m = model_gen::random_model(rng);
    TraceGraph g = build_graph(m);
    auto relation = random_relation(rng);
    auto start = random_start(rng, g.nodes(), 3);
    auto got = bfs_layers(g, start, relation);
    REQUIRE(got.ok());
    const BfsResult& bfs = got.value();

    auto moves = oracles::moves_of(g.edges(), relation);
    for (const auto& [v, d] : bfs.distance) {
      REQUIRE(bfs.predecessor.count(v) == 1);
      const EntityId& p = bfs.predecessor.at(v);

      // The predecessor sits one layer closer to the start set. Start nodes
      // expand only as seeds, so they count as layer zero here even when a
      // cycle later assigns them a distance.
      int pd = start.count(p) != 0 ? 0 : bfs.distance.at(p);
      CHECK(pd == d - 1);

      // It is the smallest-id node of that layer with a move onto v.
      EntityId best;
      for (const auto& [from, to] : moves) {
        if (to != v) continue;
        int fd = start.count(from) != 0
                     ? 0
                     : (bfs.distance.count(from) ? bfs.distance.at(from) : -1);
        if (fd != d - 1) continue;
        if (best.empty() || from < best) best = from;
      }
      CHECK(p == best);
    }
  }
}

TEST_CASE("find_cycles on an acyclic derivation is empty") {
  Model m = load_fixture(fixtures::kCleanFixture);
  TraceGraph g = build_graph(m);
  CHECK(find_cycles(g, {EdgeKind::Derive, EdgeKind::Refine}).empty());
  CHECK(oracles::topo_sort_succeeds(g.nodes(), g.edges(),
                                    {EdgeKind::Derive, EdgeKind::Refine}));
}

TEST_CASE("find_cycles enumerates overlapping elementary cycles") {
  // R1 <-> R2, R2 <-> R3, plus R3 -> R1 closing the long way around.
  Model m = refine_web(3, {{1, 2}, {2, 1}, {2, 3}, {3, 2}, {3, 1}});
  TraceGraph g = build_graph(m);
  auto cycles = find_cycles(g, {EdgeKind::Refine});
  CHECK(cycles == std::vector<std::vector<EntityId>>{
                      {"R1", "R2"}, {"R1", "R2", "R3"}, {"R2", "R3"}});
}

TEST_CASE("cycles ignore edges outside the requested kinds") {
  Model m = refine_web(2, {{1, 2}, {2, 1}});
  TraceGraph g = build_graph(m);
  CHECK(find_cycles(g, {EdgeKind::Derive}).empty());
  CHECK(find_cycles(g, {EdgeKind::Refine}).size() == 1);
}

TEST_CASE("find_cycles agrees with an exhaustive oracle on small webs") {
  std::mt19937 rng(20240523);
  for (int iter = 0; iter < 40; ++iter) {
    std::size_t n = 3 + rng() % 5;  // 3..7 nodes
    std::vector<std::pair<int, int>> edges;
    for (std::size_t a = 1; a <= n; ++a)
      for (std::size_t b = 1; b <= n; ++b)
        if (a != b && rng() % 4 == 0)
          edges.push_back({static_cast<int>(a), static_cast<int>(b)});

    Model m = refine_web(n, edges);
    TraceGraph g = build_graph(m);
    auto got = find_cycles(g, {EdgeKind::Refine});

    auto expect = oracles::cycles_oracle(g.nodes(), g.edges(), {EdgeKind::Refine});
    CHECK(got == expect);
    CHECK(got.empty() ==
          oracles::topo_sort_succeeds(g.nodes(), g.edges(), {EdgeKind::Refine}));

    // Shape contract: every cycle starts at its smallest id and walks real
    // edges; the list itself is sorted.
    CHECK(std::is_sorted(got.begin(), got.end()));
    for (const auto& cycle : got) {
      REQUIRE(cycle.size() >= 2);
      CHECK(*std::min_element(cycle.begin(), cycle.end()) == cycle.front());
      for (std::size_t i = 0; i < cycle.size(); ++i) {
        const EntityId& from = cycle[i];
        const EntityId& to = cycle[(i + 1) % cycle.size()];
        const auto& ts = g.targets(from, EdgeKind::Refine);
        CHECK(std::find(ts.begin(), ts.end(), to) != ts.end());
      }
    }
  }
}

TEST_CASE("kind selectors cover entity groups") {
  CHECK(parse_kind_selector("requirement") == KindSelector::AnyRequirement);
  CHECK(parse_kind_selector("element") == KindSelector::AnyElement);
  CHECK(parse_kind_selector("technical") == KindSelector::Technical);
  CHECK(parse_kind_selector("testcase") == KindSelector::TestCase);
  CHECK(parse_kind_selector("risk") == KindSelector::Risk);
  CHECK_FALSE(parse_kind_selector("thing").has_value());

  CHECK(selector_matches(KindSelector::AnyRequirement,
                         EntityKind::AcquirerRequirement));
  CHECK(selector_matches(KindSelector::AnyRequirement,
                         EntityKind::SpecifiedRequirement));
  CHECK_FALSE(selector_matches(KindSelector::AnyRequirement, EntityKind::Risk));
  CHECK(selector_matches(KindSelector::AnyElement, EntityKind::Interface));
  CHECK_FALSE(selector_matches(KindSelector::Logical, EntityKind::Physical));

  for (const char* name :
       {"acquirer", "stakeholder", "technical", "specified", "requirement",
        "logical", "physical", "interface", "element", "testcase", "risk"}) {
    auto sel = parse_kind_selector(name);
    REQUIRE(sel.has_value());
    CHECK(std::string(to_string(*sel)) == name);
  }
}

TEST_CASE("direct trace matrix marks single edges") {
  Model m = load_fixture(fixtures::kCleanFixture);
  TraceGraph g = build_graph(m);
  TraceMatrix tm = trace_matrix(g, KindSelector::TestCase,
                                KindSelector::AnyRequirement, EdgeKind::Verify,
                                /*transitive=*/false);

  CHECK(tm.rows == std::vector<EntityId>{"TC-1", "TC-2", "TC-3"});
  CHECK(tm.columns == std::vector<EntityId>{"AR-1", "AR-2", "OSR-1", "SR-1",
                                            "STR-1", "STR-2"});
  auto cell = [&](const EntityId& r, const EntityId& c) {
    auto ri = std::find(tm.rows.begin(), tm.rows.end(), r) - tm.rows.begin();
    auto ci = std::find(tm.columns.begin(), tm.columns.end(), c) -
              tm.columns.begin();
    return bool(tm.cells[ri][ci]);
  };
  CHECK(cell("TC-1", "STR-1"));
  CHECK(cell("TC-1", "STR-2"));
  CHECK_FALSE(cell("TC-1", "SR-1"));
  CHECK(cell("TC-2", "SR-1"));
  CHECK(cell("TC-3", "AR-1"));
  CHECK(cell("TC-3", "AR-2"));
  CHECK(cell("TC-3", "OSR-1"));
  CHECK_FALSE(cell("TC-2", "AR-1"));
}

TEST_CASE("transitive matrix equals the path oracle") {
  std::mt19937 rng(20240524);
  for (int i = 0; i < 20; ++i) {
    Model m = model_gen::random_model(rng);
    TraceGraph g = build_graph(m);
    auto closure = oracles::transitive_oracle(g.nodes(), g.edges(),
                                              EdgeKind::Derive);
    TraceMatrix tm = trace_matrix(g, KindSelector::AnyRequirement,
                                  KindSelector::AnyRequirement,
                                  EdgeKind::Derive, /*transitive=*/true);
    for (std::size_t r = 0; r < tm.rows.size(); ++r)
      for (std::size_t c = 0; c < tm.columns.size(); ++c) {
        INFO(tm.rows[r] << " ->* " << tm.columns[c]);
        CHECK(bool(tm.cells[r][c]) ==
              (closure[tm.rows[r]].count(tm.columns[c]) != 0));
      }
  }
}

TEST_CASE("matrix slices can be empty") {
  Model m = refine_web(2, {{1, 2}});
  TraceGraph g = build_graph(m);
  TraceMatrix tm = trace_matrix(g, KindSelector::Risk, KindSelector::TestCase,
                                EdgeKind::Covers, false);
  CHECK(tm.rows.empty());
  CHECK(tm.columns.empty());
  CHECK(tm.cells.empty());
}
