/*
 * (C) Copyright 2026 The bootperc Authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <gtest/gtest.h>

#include <bit>
#include <set>
#include <sstream>

#include "bootperc/combinatorics.hpp"
#include "bootperc/engine.hpp"
#include "json.hpp"

using namespace bootperc;
using namespace bootperc::engine;

namespace {

using Matrix = std::vector<std::vector<bool>>;

Matrix to_matrix(const Graph& g) {
  Matrix m(g.n(), std::vector<bool>(g.n(), false));
  for (auto [u, v] : g.edges()) m[u][v] = m[v][u] = true;
  return m;
}

// Level sets by scanning every vertex each round.
std::vector<std::set<Vertex>> naive_levels(const Matrix& m, const std::vector<Vertex>& seed, int r) {
  const std::size_t n = m.size();
  std::vector<bool> in(n, false);
  for (Vertex s : seed) in[s] = true;
  std::vector<std::set<Vertex>> levels{std::set<Vertex>(seed.begin(), seed.end())};
  for (;;) {
    std::set<Vertex> fresh;
    for (Vertex v = 0; v < n; ++v) {
      if (in[v]) continue;
      int c = 0;
      for (Vertex u = 0; u < n; ++u) c += (in[u] && m[v][u]) ? 1 : 0;
      if (c >= r) fresh.insert(v);
    }
    if (fresh.empty()) break;
    for (Vertex v : fresh) in[v] = true;
    levels.push_back(fresh);
  }
  return levels;
}

Graph random_graph(std::size_t n, double p, Engine& rng) {
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (uniform01(rng) < p) edges.emplace_back(u, v);
  return Graph(n, edges);
}

Graph example5() {
  // 0-indexed version of {13, 23, 14, 34, 45, 25}
  std::vector<Edge> e{{0, 2}, {1, 2}, {0, 3}, {2, 3}, {3, 4}, {1, 4}};
  return Graph(5, e);
}

bool has_triangle(const Matrix& m) {
  const std::size_t n = m.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (m[a][b])
        for (std::size_t c = b + 1; c < n; ++c)
          if (m[a][c] && m[b][c]) return true;
  return false;
}

// K_k closure by scanning all non-edges against all (k-2)-subsets until stable.
Matrix naive_closure(Matrix m, int k) {
  const std::size_t n = m.size();
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = u + 1; v < n; ++v) {
        if (m[u][v]) continue;
        for (std::uint32_t s = 0; s < (1u << n); ++s) {
          if (std::popcount(s) != k - 2 || (s >> u & 1u) || (s >> v & 1u)) continue;
          bool ok = true;
          for (std::size_t a = 0; a < n && ok; ++a) {
            if (!(s >> a & 1u)) continue;
            ok = m[a][u] && m[a][v];
            for (std::size_t b = a + 1; b < n && ok; ++b)
              if (s >> b & 1u) ok = m[a][b];
          }
          if (ok) {
            m[u][v] = m[v][u] = true;
            changed = true;
            break;
          }
        }
      }
  }
  return m;
}

// Largest t such that some triangle-free subgraph reproduces V_0..V_t.
int naive_hat_tau(const Graph& g, const std::vector<Vertex>& seed, int r) {
  const auto edges = g.edges();
  const auto target = naive_levels(to_matrix(g), seed, r);
  int best = 0;
  for (std::uint32_t mask = 0; mask < (1u << edges.size()); ++mask) {
    std::vector<Edge> sub;
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (mask >> e & 1u) sub.push_back(edges[e]);
    Matrix h = to_matrix(Graph(g.n(), sub));
    if (has_triangle(h)) continue;
    auto levels = naive_levels(h, seed, r);
    int t = 0;
    while (t + 1 < static_cast<int>(levels.size()) && t + 1 < static_cast<int>(target.size()) &&
           levels[t + 1] == target[t + 1])
      ++t;
    best = std::max(best, t);
  }
  return best;
}

}  // namespace

TEST(Graph, ConstructionAndQueries) {
  std::vector<Edge> e{{0, 1}, {1, 0}, {2, 1}, {0, 1}};
  Graph g(4, e);
  EXPECT_EQ(g.n(), 4u);
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_TRUE(g.has_edge(1, 2));
  EXPECT_TRUE(g.has_edge(2, 1));
  EXPECT_FALSE(g.has_edge(0, 2));
  EXPECT_FALSE(g.has_edge(0, 9));
  EXPECT_EQ(g.degree(3), 0u);
  EXPECT_EQ(g.edges(), (std::vector<Edge>{{0, 1}, {1, 2}}));
  std::vector<Edge> loop{{1, 1}};
  EXPECT_THROW(Graph(3, loop), Error);
  std::vector<Edge> far{{0, 3}};
  EXPECT_THROW(Graph(3, far), Error);
  EXPECT_EQ(Graph::complete(0).n(), 0u);
  EXPECT_EQ(Graph::complete(6).edge_count(), 15u);
}

TEST(Graph, DegreeSumIsTwiceEdges) {
  Engine rng = make_stream(11, 0);
  for (int t = 0; t < 20; ++t) {
    Graph g = random_graph(40, 0.1 + 0.02 * t, rng);
    std::size_t sum = 0;
    for (Vertex v = 0; v < g.n(); ++v) {
      sum += g.degree(v);
      for (Vertex u : g.neighbors(v)) ASSERT_TRUE(g.has_edge(u, v));
    }
    EXPECT_EQ(sum, 2 * g.edge_count());
  }
}

TEST(Bootstrap, Examples) {
  for (int r = 2; r <= 4; ++r) {
    auto k = Graph::complete(static_cast<std::size_t>(r + 1));
    std::vector<Vertex> seed;
    for (int t = 1; t <= r; ++t) seed.push_back(static_cast<Vertex>(t));
    auto tr = bootstrap(k, seed, r);
    EXPECT_EQ(tr.tau(), 1);
    EXPECT_EQ(tr.infected(), static_cast<std::size_t>(r + 1));
  }
  Graph empty(6, {});
  std::vector<Vertex> s{0, 3};
  auto tr = bootstrap(empty, s, 2);
  EXPECT_EQ(tr.tau(), 0);
  EXPECT_EQ(tr.infected(), 2u);

  std::vector<Vertex> seed{0, 1};
  auto ex = bootstrap(example5(), seed, 2);
  ASSERT_EQ(ex.tau(), 3);
  EXPECT_EQ(ex.levels[1], std::vector<Vertex>{2});
  EXPECT_EQ(ex.levels[2], std::vector<Vertex>{3});
  EXPECT_EQ(ex.levels[3], std::vector<Vertex>{4});
}

TEST(Bootstrap, SeedValidation) {
  Graph g = example5();
  std::vector<Vertex> small{0}, dup{1, 1}, far{0, 5};
  for (auto* s : {&small, &dup, &far}) {
    try {
      bootstrap(g, *s, 2);
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::invalid_argument);
    }
  }
}

TEST(Bootstrap, MatchesNaiveRounds) {
  Engine rng = make_stream(3, 0);
  Percolator perc;
  for (int t = 0; t < 300; ++t) {
    const int r = 2 + t % 3;
    Graph g = random_graph(25, 0.15 + 0.002 * t, rng);
    std::vector<Vertex> seed;
    while (seed.size() < static_cast<std::size_t>(r)) {
      auto v = static_cast<Vertex>(uniform_below(rng, 25));
      if (std::find(seed.begin(), seed.end(), v) == seed.end()) seed.push_back(v);
    }
    auto tr = perc.trace(g, seed, r);  // workspace reused across runs
    auto expect = naive_levels(to_matrix(g), seed, r);
    ASSERT_EQ(tr.levels.size(), expect.size());
    for (std::size_t l = 0; l < expect.size(); ++l)
      ASSERT_EQ(std::set<Vertex>(tr.levels[l].begin(), tr.levels[l].end()), expect[l]);
  }
}

TEST(Bootstrap, TraceInvariants) {
  Engine rng = make_stream(4, 0);
  for (int t = 0; t < 100; ++t) {
    Graph g = random_graph(60, 0.08, rng);
    std::vector<Vertex> seed{0, 1};
    auto tr = bootstrap(g, seed, 2);
    std::vector<int> level(g.n(), -1);
    for (int l = 0; l <= tr.tau(); ++l)
      for (Vertex v : tr.levels[l]) level[v] = l;
    for (Vertex v = 0; v < g.n(); ++v) {
      int earlier = 0;
      for (Vertex u : g.neighbors(v))
        if (level[u] >= 0 && (level[v] < 0 || level[u] < level[v])) ++earlier;
      if (level[v] > 0) EXPECT_GE(earlier, 2);
      if (level[v] < 0) EXPECT_LT(earlier, 2);
    }
  }
}

TEST(Bootstrap, AddingEdgesNeverShrinksInfection) {
  Engine rng = make_stream(5, 0);
  for (int t = 0; t < 100; ++t) {
    auto base = random_graph(30, 0.1, rng).edges();
    std::vector<Vertex> seed{3, 7};
    auto before = bootstrap(Graph(30, base), seed, 2).infected_set();
    for (int extra = 0; extra < 5; ++extra) {
      auto u = static_cast<Vertex>(uniform_below(rng, 30)), v = static_cast<Vertex>(uniform_below(rng, 30));
      if (u != v) base.emplace_back(u, v);
    }
    auto after = bootstrap(Graph(30, base), seed, 2).infected_set();
    EXPECT_TRUE(std::includes(after.begin(), after.end(), before.begin(), before.end()));
  }
}

TEST(Bootstrap, StopAboveTruncates) {
  Percolator perc(10);
  Graph k = Graph::complete(10);
  std::vector<Vertex> seed{0, 1};
  std::vector<std::size_t> sizes;
  auto summary = perc.run(k, seed, 2, [&](int, std::span<const Vertex>, std::size_t c) { sizes.push_back(c); }, 1);
  EXPECT_TRUE(summary.truncated);
  EXPECT_EQ(sizes, std::vector<std::size_t>{2});
  summary = perc.run(k, seed, 2);
  EXPECT_FALSE(summary.truncated);
  EXPECT_EQ(summary.infected, 10u);
}

TEST(MinimalGraphs, EveryNonSeedVertexHasExactlyRParents) {
  for (int r = 2; r <= 3; ++r) {
    const int k = r + 4;
    combinatorics::for_each_minimally_susceptible(r, k, combinatorics::kDefaultBruteForceCap,
                                                  [&](std::span<const std::uint32_t> adj) {
      std::vector<Edge> edges;
      for (int u = 0; u < k; ++u)
        for (int v = u + 1; v < k; ++v)
          if (adj[u] >> v & 1u) edges.emplace_back(u, v);
      Graph g(static_cast<std::size_t>(k), edges);
      ASSERT_EQ(g.edge_count(), static_cast<std::size_t>(r * (k - r)));
      std::vector<Vertex> seed;
      for (int t = 0; t < r; ++t) seed.push_back(static_cast<Vertex>(t));
      auto tr = bootstrap(g, seed, r);
      std::vector<int> level(g.n());
      for (int l = 0; l <= tr.tau(); ++l)
        for (Vertex v : tr.levels[l]) level[v] = l;
      for (Vertex v = static_cast<Vertex>(r); v < g.n(); ++v) {
        int parents = 0;
        for (Vertex u : g.neighbors(v)) parents += level[u] < level[v] ? 1 : 0;
        ASSERT_EQ(parents, r);
      }
    });
  }
}

TEST(Susceptible, Examples) {
  auto yes = is_susceptible(Graph::complete(7), 3);
  EXPECT_EQ(yes.verdict, Verdict::yes);
  EXPECT_EQ(yes.witness, (std::vector<Vertex>{0, 1, 2}));
  EXPECT_EQ(is_susceptible(Graph(6, {}), 2).verdict, Verdict::no);
  auto ex = is_susceptible(example5(), 2);
  EXPECT_EQ(ex.verdict, Verdict::yes);
  EXPECT_EQ(ex.witness, (std::vector<Vertex>{0, 1}));
}

TEST(Susceptible, ExhaustiveMatchesAllPairs) {
  Engine rng = make_stream(6, 0);
  for (int t = 0; t < 150; ++t) {
    Graph g = random_graph(14, 0.12 + 0.002 * t, rng);
    auto m = to_matrix(g);
    bool any = false;
    for (Vertex a = 0; a < 14 && !any; ++a)
      for (Vertex b = a + 1; b < 14 && !any; ++b) {
        std::size_t infected = 0;
        for (const auto& level : naive_levels(m, {a, b}, 2)) infected += level.size();
        any = infected == 14;
      }
    auto res = is_susceptible(g, 2);
    EXPECT_EQ(res.verdict == Verdict::yes, any);
    if (any) EXPECT_EQ(bootstrap(g, res.witness, 2).infected(), 14u);
    auto contagious = find_contagious_set(g, 2, 0);
    EXPECT_EQ(contagious.has_value(), any);
  }
}

TEST(Susceptible, SampledAndCap) {
  auto sampled = is_susceptible(Graph::complete(20), 2, {.exhaustive = false, .samples = 3, .rng_seed = 9});
  EXPECT_EQ(sampled.verdict, Verdict::yes);
  EXPECT_EQ(sampled.seeds_tested, 1u);
  auto unknown = is_susceptible(Graph(20, {}), 2, {.exhaustive = false, .samples = 50, .rng_seed = 9});
  EXPECT_EQ(unknown.verdict, Verdict::unknown);
  EXPECT_EQ(unknown.seeds_tested, 50u);
  try {
    is_susceptible(Graph(3000, {}), 3, {.cap = 1000});
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::cap_exceeded);
  }
}

TEST(Closure, Examples) {
  // a path is connected, so K_3 completion fills everything
  std::vector<Edge> path{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}};
  auto c = graph_bootstrap_closure(Graph(6, path), 3);
  EXPECT_EQ(c.edge_count(), 15u);
  std::vector<Edge> almost;
  for (auto e : Graph::complete(4).edges())
    if (e != Edge{1, 3}) almost.push_back(e);
  EXPECT_EQ(graph_bootstrap_closure(Graph(4, almost), 4), Graph::complete(4));
  // two disjoint triangles stay as they are for k = 4
  std::vector<Edge> tri{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}};
  EXPECT_EQ(graph_bootstrap_closure(Graph(6, tri), 4).edge_count(), 6u);
  EXPECT_THROW(graph_bootstrap_closure(Graph(3, {}), 2), Error);
}

TEST(Closure, MatchesNaiveFixedPointAndIsIdempotent) {
  Engine rng = make_stream(7, 0);
  for (int t = 0; t < 60; ++t) {
    const int k = 3 + t % 3;
    Graph g = random_graph(9, 0.3 + 0.005 * t, rng);
    Graph c = graph_bootstrap_closure(g, k);
    EXPECT_EQ(to_matrix(c), naive_closure(to_matrix(g), k)) << t;
    EXPECT_EQ(graph_bootstrap_closure(c, k), c);
  }
}

TEST(Seed, Examples) {
  auto k = has_seed(Graph::complete(6), 2);
  ASSERT_TRUE(k.has_value());
  EXPECT_EQ(*k, (std::vector<Vertex>{0, 1}));
  std::vector<Edge> path{{0, 1}, {1, 2}, {2, 3}, {3, 4}};
  EXPECT_FALSE(has_seed(Graph(5, path), 2).has_value());
  auto e = example5().edges();
  e.emplace_back(0, 1);
  auto s = has_seed(Graph(5, e), 2);
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(*s, (std::vector<Vertex>{0, 1}));
  EXPECT_FALSE(has_seed(example5(), 2).has_value());
}

TEST(Seed, SeedImpliesCompleteClosure) {
  Engine rng = make_stream(8, 0);
  int seen = 0;
  for (int t = 0; t < 200; ++t) {
    const int r = 2 + t % 2;
    Graph g = random_graph(16, 0.25 + 0.1 * (r - 2), rng);
    auto s = has_seed(g, r);
    if (!s) continue;
    ++seen;
    EXPECT_EQ(graph_bootstrap_closure(g, r + 2).edge_count(), g.n() * (g.n() - 1) / 2);
  }
  EXPECT_GT(seen, 10);
}

TEST(Seed, EdgeCountFilter) {
  // example5 has no seed edge but {0,1} is contagious as a non-adjacent pair
  auto any = find_contagious_set(example5(), 2, 0);
  ASSERT_TRUE(any.has_value());
  EXPECT_EQ(*any, (std::vector<Vertex>{0, 1}));
  EXPECT_FALSE(find_contagious_set(example5(), 2, 1).has_value());
  EXPECT_THROW(find_contagious_set(example5(), 2, 2), Error);
  auto tri = find_contagious_set(Graph::complete(7), 3, 3);
  ASSERT_TRUE(tri.has_value());
  EXPECT_EQ(*tri, (std::vector<Vertex>{0, 1, 2}));
}

TEST(HatBootstrap, Examples) {
  std::vector<Vertex> seed{0, 1};
  auto k4 = hat_bootstrap(Graph::complete(4), seed, 2);
  EXPECT_EQ(k4.tau(), 1);
  EXPECT_EQ(k4.infected(), 4u);
  EXPECT_EQ(*k4.witness_edges, (std::vector<Edge>{{0, 2}, {0, 3}, {1, 2}, {1, 3}}));
  auto k3 = hat_bootstrap(Graph::complete(3), seed, 2);
  EXPECT_EQ(k3.infected(), 3u);
  EXPECT_EQ(*k3.witness_edges, (std::vector<Edge>{{0, 2}, {1, 2}}));
  EXPECT_FALSE(k3.lower_bound_only);
  // K_5 from {0,1}: vertices 2,3,4 all join at t=1 with parents {0,1}
  auto k5 = hat_bootstrap(Graph::complete(5), seed, 2);
  EXPECT_EQ(k5.infected(), 5u);
}

TEST(HatBootstrap, HaltsWhenATriangleIsForced) {
  // vertex 3 can only use parents {0, 2} but 2 already hangs on 0
  std::vector<Edge> e{{0, 2}, {1, 2}, {0, 3}, {2, 3}};
  std::vector<Vertex> seed{0, 1};
  Graph g(4, e);
  auto full = bootstrap(g, seed, 2);
  EXPECT_EQ(full.tau(), 2);
  auto hat = hat_bootstrap(g, seed, 2);
  EXPECT_EQ(hat.tau(), 1);
  EXPECT_EQ(hat.infected(), 3u);
  EXPECT_EQ(*hat.witness_edges, (std::vector<Edge>{{0, 2}, {1, 2}}));
}

TEST(HatBootstrap, TriangleFreeInputGivesIdenticalTrace) {
  Engine rng = make_stream(9, 0);
  int checked = 0;
  for (int t = 0; t < 400 && checked < 40; ++t) {
    Graph g = random_graph(20, 0.18, rng);
    if (has_triangle(to_matrix(g))) continue;
    ++checked;
    std::vector<Vertex> seed{0, 1};
    auto full = bootstrap(g, seed, 2);
    auto hat = hat_bootstrap(g, seed, 2);
    EXPECT_EQ(hat.levels, full.levels);
  }
  EXPECT_GT(checked, 5);
}

TEST(HatBootstrap, MatchesSubgraphOracle) {
  Engine rng = make_stream(10, 0);
  for (int t = 0; t < 60; ++t) {
    Graph g = random_graph(7, 0.45, rng);
    if (g.edge_count() > 14) continue;
    std::vector<Vertex> seed{0, 1};
    auto hat = hat_bootstrap(g, seed, 2);
    EXPECT_EQ(hat.tau(), naive_hat_tau(g, seed, 2)) << t;
  }
}

TEST(HatBootstrap, WitnessReproducesLevelsAndIsTriangleFree) {
  Engine rng = make_stream(12, 0);
  for (int t = 0; t < 80; ++t) {
    const int r = 2 + t % 2;
    Graph g = random_graph(30, 0.25, rng);
    std::vector<Vertex> seed;
    for (int s = 0; s < r; ++s) seed.push_back(static_cast<Vertex>(s));
    auto full = bootstrap(g, seed, r);
    auto hat = hat_bootstrap(g, seed, r);
    ASSERT_FALSE(hat.lower_bound_only);
    ASSERT_LE(hat.tau(), full.tau());
    for (int l = 0; l <= hat.tau(); ++l) EXPECT_EQ(hat.levels[l], full.levels[l]);
    Graph h(g.n(), *hat.witness_edges);
    EXPECT_FALSE(has_triangle(to_matrix(h)));
    for (auto [u, v] : h.edges()) EXPECT_TRUE(g.has_edge(u, v));
    EXPECT_EQ(bootstrap(h, seed, r).levels, hat.levels);
  }
}

TEST(HatBootstrap, BudgetFlagsLowerBound) {
  std::vector<Vertex> seed{0, 1};
  auto capped = hat_bootstrap(Graph::complete(12), seed, 2, 3);
  EXPECT_TRUE(capped.lower_bound_only);
  EXPECT_LE(capped.tau(), bootstrap(Graph::complete(12), seed, 2).tau());
}

TEST(Io, EdgeListRoundTrip) {
  Engine rng = make_stream(13, 0);
  Graph g = random_graph(50, 0.1, rng);
  std::stringstream buf;
  write_edge_list(g, buf);
  std::string first;
  std::getline(std::stringstream(buf.str()), first);
  auto header = nlohmann::json::parse(first);
  EXPECT_EQ(header["n"], 50);
  EXPECT_EQ(header["edges"], g.edge_count());
  EXPECT_EQ(read_edge_list(buf), g);
}

TEST(Io, MalformedInputs) {
  for (std::string text : {"", "not json\n", "{\"n\":3,\"edges\":2}\n0 1\n", "{\"n\":3,\"edges\":1}\n0 x\n",
                           "{\"n\":3}\n"}) {
    std::stringstream in(text);
    try {
      read_edge_list(in);
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::io) << text;
    }
  }
  std::stringstream bad("{\"n\":3,\"edges\":1}\n0 7\n");
  EXPECT_THROW(read_edge_list(bad), Error);
}

TEST(Io, TraceJson) {
  std::vector<Vertex> seed{0, 1};
  auto j = nlohmann::json::parse(trace_to_json(bootstrap(example5(), seed, 2)));
  EXPECT_EQ(j["tau"], 3);
  EXPECT_EQ(j["seed"], nlohmann::json::parse("[0,1]"));
  EXPECT_EQ(j["levels"], nlohmann::json::parse("[[0,1],[2],[3],[4]]"));
  EXPECT_FALSE(j.contains("witness_edges"));
  auto h = nlohmann::json::parse(trace_to_json(hat_bootstrap(Graph::complete(3), seed, 2)));
  EXPECT_EQ(h["witness_edges"], nlohmann::json::parse("[[0,2],[1,2]]"));
}
