/*
 * (C) Copyright 2026 The bootperc Authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "bootperc/engine.hpp"

#include <bit>
#include <deque>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

namespace bootperc::engine {

namespace {

std::uint64_t edge_key(Vertex u, Vertex v) {
  if (u > v) std::swap(u, v);
  return static_cast<std::uint64_t>(u) << 32 | v;
}

// Lexicographic r-subsets of [0, n); visit returns true to stop.
template <class Visit>
bool for_each_subset(std::size_t n, int r, Visit&& visit) {
  if (static_cast<std::size_t>(r) > n) return false;
  std::vector<Vertex> s(static_cast<std::size_t>(r));
  for (int t = 0; t < r; ++t) s[t] = static_cast<Vertex>(t);
  for (;;) {
    if (visit(std::span<const Vertex>(s))) return true;
    int t = r - 1;
    while (t >= 0 && s[t] == n - r + t) --t;
    if (t < 0) return false;
    ++s[t];
    for (int u = t + 1; u < r; ++u) s[u] = s[u - 1] + 1;
  }
}

// Lexicographic r-cliques; visit returns true to stop.
template <class Visit>
bool for_each_clique(const Graph& g, int r, Visit&& visit) {
  std::vector<Vertex> current;
  auto rec = [&](auto&& self, const std::vector<Vertex>& candidates) -> bool {
    if (static_cast<int>(current.size()) == r) return visit(std::span<const Vertex>(current));
    const std::size_t need = static_cast<std::size_t>(r) - current.size();
    for (std::size_t idx = 0; idx + need <= candidates.size(); ++idx) {
      const Vertex v = candidates[idx];
      std::vector<Vertex> next;
      auto nb = g.neighbors(v);
      std::set_intersection(candidates.begin() + static_cast<std::ptrdiff_t>(idx) + 1, candidates.end(),
                            nb.begin(), nb.end(), std::back_inserter(next));
      if (next.size() + 1 < need) continue;
      current.push_back(v);
      if (self(self, next)) return true;
      current.pop_back();
    }
    return false;
  };
  if (r == 1) {
    for (Vertex v = 0; v < g.n(); ++v) {
      current.assign(1, v);
      if (visit(std::span<const Vertex>(current))) return true;
    }
    return false;
  }
  for (Vertex v = 0; v < g.n(); ++v) {
    auto nb = g.neighbors(v);
    std::vector<Vertex> later(std::upper_bound(nb.begin(), nb.end(), v), nb.end());
    if (later.size() + 1 < static_cast<std::size_t>(r)) continue;
    current.assign(1, v);
    if (rec(rec, later)) return true;
  }
  return false;
}

bool is_clique(const Graph& g, std::span<const Vertex> s) {
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = a + 1; b < s.size(); ++b)
      if (!g.has_edge(s[a], s[b])) return false;
  return true;
}

void check_subset_cap(std::size_t n, int r, std::uint64_t cap) {
  const double sets = binomial_double(static_cast<std::int64_t>(n), r);
  if (sets > static_cast<double>(cap)) {
    std::ostringstream msg;
    msg << "C(" << n << ", " << r << ") = " << sets << " seed sets exceed cap " << cap;
    fail(ErrorCode::cap_exceeded, msg.str());
  }
}

// Dense adjacency as bit rows for the closure search.
class BitMatrix {
 public:
  explicit BitMatrix(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {}
  bool test(std::size_t u, std::size_t v) const { return bits_[u * words_ + v / 64] >> (v % 64) & 1u; }
  void set(std::size_t u, std::size_t v) {
    bits_[u * words_ + v / 64] |= 1ull << (v % 64);
    bits_[v * words_ + u / 64] |= 1ull << (u % 64);
  }
  void reset(std::size_t u, std::size_t v) {
    bits_[u * words_ + v / 64] &= ~(1ull << (v % 64));
    bits_[v * words_ + u / 64] &= ~(1ull << (u % 64));
  }
  const std::uint64_t* row(std::size_t u) const { return bits_.data() + u * words_; }
  std::size_t words() const { return words_; }
  std::size_t n() const { return n_; }

 private:
  std::size_t n_;
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
};

std::vector<Vertex> members(const std::vector<std::uint64_t>& set) {
  std::vector<Vertex> out;
  for (std::size_t w = 0; w < set.size(); ++w)
    for (std::uint64_t bits = set[w]; bits; bits &= bits - 1)
      out.push_back(static_cast<Vertex>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits))));
  return out;
}

// Is there a clique of the given size inside the candidate set?
bool has_clique(const BitMatrix& adj, const std::vector<std::uint64_t>& candidates, int size) {
  if (size == 0) return true;
  const auto verts = members(candidates);
  if (static_cast<int>(verts.size()) < size) return false;
  if (size == 1) return true;
  std::vector<std::uint64_t> next(adj.words());
  for (Vertex v : verts) {
    const std::uint64_t* row = adj.row(v);
    int count = 0;
    for (std::size_t w = 0; w < adj.words(); ++w) {
      // keep only later vertices so each clique is found once
      std::uint64_t later = w > v / 64 ? ~0ull : (w == v / 64 ? (v % 64 == 63 ? 0 : ~0ull << (v % 64 + 1)) : 0);
      next[w] = candidates[w] & row[w] & later;
      count += std::popcount(next[w]);
    }
    if (count >= size - 1 && has_clique(adj, next, size - 1)) return true;
  }
  return false;
}

}  // namespace

// ---------------------------------------------------------------------------

Graph::Graph(std::size_t n, std::span<const Edge> edges) : n_(n) {
  require(n < (1ull << 32) - 1, ErrorCode::invalid_argument, "too many vertices");
  std::vector<std::size_t> degree(n + 1, 0);
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) {
      std::ostringstream msg;
      msg << "edge (" << u << ", " << v << ") out of range for n=" << n;
      fail(ErrorCode::invalid_argument, msg.str());
    }
    require(u != v, ErrorCode::invalid_argument, "self-loop at vertex " + std::to_string(u));
    ++degree[u];
    ++degree[v];
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
  adj_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [u, v] : edges) {
    adj_[fill[u]++] = v;
    adj_[fill[v]++] = u;
  }
  // sort rows and squeeze out duplicates
  std::vector<std::size_t> packed(n + 1, 0);
  std::size_t out = 0;
  for (std::size_t v = 0; v < n; ++v) {
    auto first = adj_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]);
    auto last = adj_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]);
    std::sort(first, last);
    last = std::unique(first, last);
    packed[v] = out;
    for (auto it = first; it != last; ++it) adj_[out++] = *it;
  }
  packed[n] = out;
  adj_.resize(out);
  offsets_ = std::move(packed);
}

Graph Graph::complete(std::size_t n) {
  std::vector<Edge> edges;
  edges.reserve(n > 1 ? n * (n - 1) / 2 : 0);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return Graph(n, edges);
}

bool Graph::has_edge(Vertex u, Vertex v) const {
  if (u >= n_ || v >= n_) return false;
  if (degree(u) > degree(v)) std::swap(u, v);
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (Vertex u = 0; u < n_; ++u)
    for (Vertex v : neighbors(u))
      if (u < v) out.emplace_back(u, v);
  return out;
}

std::size_t PercolationTrace::infected() const {
  std::size_t total = 0;
  for (const auto& level : levels) total += level.size();
  return total;
}

std::vector<Vertex> PercolationTrace::infected_set() const {
  std::vector<Vertex> out;
  for (const auto& level : levels) out.insert(out.end(), level.begin(), level.end());
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------

void validate_seed(const Graph& g, std::span<const Vertex> seed, int r) {
  require(r >= 1, ErrorCode::invalid_argument, "r must be positive");
  if (seed.size() != static_cast<std::size_t>(r)) {
    std::ostringstream msg;
    msg << "seed has " << seed.size() << " vertices, expected r=" << r;
    fail(ErrorCode::invalid_argument, msg.str());
  }
  std::vector<Vertex> sorted(seed.begin(), seed.end());
  std::sort(sorted.begin(), sorted.end());
  require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), ErrorCode::invalid_argument,
          "seed vertices must be distinct");
  require(sorted.empty() || sorted.back() < g.n(), ErrorCode::invalid_argument, "seed vertex out of range");
}

void Percolator::resize(std::size_t n) {
  hits_.assign(n, 0);
  infected_.assign(n, 0);
  touched_.clear();
}

void Percolator::reset() {
  for (Vertex v : touched_) {
    hits_[v] = 0;
    infected_[v] = 0;
  }
  touched_.clear();
}

Percolator::Summary Percolator::run(const Graph& g, std::span<const Vertex> seed, int r, const LevelSink& sink,
                                    std::size_t stop_above) {
  validate_seed(g, seed, r);
  if (hits_.size() < g.n()) resize(g.n());
  Summary summary;
  frontier_.assign(seed.begin(), seed.end());
  std::sort(frontier_.begin(), frontier_.end());
  for (Vertex v : frontier_) {
    infected_[v] = 1;
    touched_.push_back(v);
  }
  std::size_t cumulative = frontier_.size();
  if (sink) sink(0, frontier_, cumulative);
  const auto threshold = static_cast<std::uint32_t>(r);
  int t = 0;
  if (stop_above == 0 || cumulative <= stop_above) {
    for (;;) {
      next_.clear();
      for (Vertex v : frontier_) {
        for (Vertex w : g.neighbors(v)) {
          if (infected_[w]) continue;
          if (hits_[w] == 0) touched_.push_back(w);
          if (++hits_[w] == threshold) next_.push_back(w);
        }
      }
      if (next_.empty()) break;
      std::sort(next_.begin(), next_.end());
      for (Vertex w : next_) infected_[w] = 1;
      ++t;
      cumulative += next_.size();
      if (sink) sink(t, next_, cumulative);
      std::swap(frontier_, next_);
      if (stop_above > 0 && cumulative > stop_above) {
        summary.truncated = true;
        break;
      }
    }
  } else {
    summary.truncated = true;
  }
  summary.infected = cumulative;
  summary.tau = t;
  reset();
  return summary;
}

PercolationTrace Percolator::trace(const Graph& g, std::span<const Vertex> seed, int r) {
  PercolationTrace out;
  out.seed.assign(seed.begin(), seed.end());
  run(g, seed, r, [&](int, std::span<const Vertex> level, std::size_t) { out.levels.emplace_back(level.begin(), level.end()); });
  return out;
}

PercolationTrace bootstrap(const Graph& g, std::span<const Vertex> seed, int r) {
  Percolator p(g.n());
  return p.trace(g, seed, r);
}

// ---------------------------------------------------------------------------

SusceptibilityResult is_susceptible(const Graph& g, int r, const SusceptibilityOptions& options) {
  require(r >= 1, ErrorCode::invalid_argument, "r must be positive");
  SusceptibilityResult result;
  const std::size_t n = g.n();
  if (n < static_cast<std::size_t>(r)) return result;
  Percolator perc(n);
  auto test = [&](std::span<const Vertex> s) {
    ++result.seeds_tested;
    if (perc.run(g, s, r).infected == n) {
      result.verdict = Verdict::yes;
      result.witness.assign(s.begin(), s.end());
      return true;
    }
    return false;
  };

  if (!options.exhaustive) {
    Engine rng = make_stream(options.rng_seed, 0);
    std::vector<Vertex> s;
    for (std::uint64_t m = 0; m < options.samples; ++m) {
      s.clear();
      while (s.size() < static_cast<std::size_t>(r)) {
        auto v = static_cast<Vertex>(uniform_below(rng, n));
        if (std::find(s.begin(), s.end(), v) == s.end()) s.push_back(v);
      }
      std::sort(s.begin(), s.end());
      if (test(s)) return result;
    }
    result.verdict = Verdict::unknown;
    return result;
  }

  check_subset_cap(n, r, options.cap);
  // vertices of degree below r can only ever be seeds
  std::size_t low = 0;
  for (Vertex v = 0; v < n; ++v)
    if (g.degree(v) < static_cast<std::size_t>(r)) ++low;
  if (low > static_cast<std::size_t>(r)) return result;

  if (for_each_clique(g, r, test)) return result;
  for_each_subset(n, r, [&](std::span<const Vertex> s) { return !is_clique(g, s) && test(s); });
  return result;
}

Graph graph_bootstrap_closure(const Graph& g, int k) {
  require(k >= 3, ErrorCode::invalid_argument, "closure needs k >= 3");
  const std::size_t n = g.n();
  BitMatrix adj(n);
  for (const auto& [u, v] : g.edges()) adj.set(u, v);
  BitMatrix queued(n);
  std::deque<Edge> work;
  auto enqueue = [&](Vertex u, Vertex v) {
    if (u == v || adj.test(u, v) || queued.test(u, v)) return;
    queued.set(u, v);
    work.emplace_back(std::min(u, v), std::max(u, v));
  };
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) enqueue(u, v);

  std::vector<std::uint64_t> common(adj.words());
  auto load_common = [&](Vertex u, Vertex v) {
    const std::uint64_t* a = adj.row(u);
    const std::uint64_t* b = adj.row(v);
    for (std::size_t w = 0; w < adj.words(); ++w) common[w] = a[w] & b[w];
  };

  std::vector<Edge> added;
  while (!work.empty()) {
    const auto [u, v] = work.front();
    work.pop_front();
    queued.reset(u, v);  // may be queued again after later additions
    if (adj.test(u, v)) continue;
    load_common(u, v);
    if (!has_clique(adj, common, k - 2)) continue;
    adj.set(u, v);
    added.emplace_back(u, v);
    for (Vertex w = 0; w < n; ++w) {
      enqueue(u, w);
      enqueue(v, w);
    }
    load_common(u, v);
    const auto shared = members(common);
    for (std::size_t a = 0; a < shared.size(); ++a)
      for (std::size_t b = a + 1; b < shared.size(); ++b) enqueue(shared[a], shared[b]);
  }
  if (added.empty()) return g;
  std::vector<Edge> edges = g.edges();
  edges.insert(edges.end(), added.begin(), added.end());
  return Graph(n, edges);
}

std::optional<std::vector<Vertex>> has_seed(const Graph& g, int r) {
  require(r >= 1, ErrorCode::invalid_argument, "r must be positive");
  if (g.n() < static_cast<std::size_t>(r)) return std::nullopt;
  Percolator perc(g.n());
  std::optional<std::vector<Vertex>> found;
  for_each_clique(g, r, [&](std::span<const Vertex> s) {
    if (perc.run(g, s, r).infected != g.n()) return false;
    found.emplace(s.begin(), s.end());
    return true;
  });
  return found;
}

std::optional<std::vector<Vertex>> find_contagious_set(const Graph& g, int r, int min_edges, std::uint64_t cap) {
  require(r >= 1, ErrorCode::invalid_argument, "r must be positive");
  require(min_edges >= 0 && min_edges <= r * (r - 1) / 2, ErrorCode::invalid_argument,
          "min_edges must lie in [0, C(r,2)]");
  if (min_edges == r * (r - 1) / 2) return has_seed(g, r);
  const std::size_t n = g.n();
  if (n < static_cast<std::size_t>(r)) return std::nullopt;
  check_subset_cap(n, r, cap);
  Percolator perc(n);
  std::optional<std::vector<Vertex>> found;
  std::vector<Vertex> current;
  // depth-first over r-sets, pruning when the edge target is out of reach
  auto rec = [&](auto&& self, Vertex start, int edges) -> bool {
    const int size = static_cast<int>(current.size());
    if (size == r) {
      if (edges < min_edges || perc.run(g, current, r).infected != n) return false;
      found = current;
      return true;
    }
    const int slots = r - size;
    if (edges + slots * (slots - 1) / 2 + slots * size < min_edges) return false;
    for (Vertex v = start; v + static_cast<Vertex>(slots) <= n; ++v) {
      int gained = 0;
      for (Vertex u : current) gained += g.has_edge(u, v) ? 1 : 0;
      current.push_back(v);
      if (self(self, v + 1, edges + gained)) return true;
      current.pop_back();
    }
    return false;
  };
  rec(rec, 0, 0);
  return found;
}

// ---------------------------------------------------------------------------

PercolationTrace hat_bootstrap(const Graph& g, std::span<const Vertex> seed, int r, std::uint64_t node_budget) {
  PercolationTrace full = bootstrap(g, seed, r);
  PercolationTrace out;
  out.seed = full.seed;
  out.levels.push_back(full.levels[0]);
  out.witness_edges.emplace();
  const int tau = full.tau();
  if (tau == 0) return out;

  std::vector<int> level_of(g.n(), -1);
  for (int t = 0; t <= tau; ++t)
    for (Vertex v : full.levels[t]) level_of[v] = t;

  // one search variable per infected non-seed vertex, ordered by (level, id)
  struct Var {
    Vertex v;
    std::vector<Vertex> candidates;  // neighbours in strictly earlier levels
    std::vector<int> pick;           // current r-combination, empty when unset
  };
  std::vector<Var> vars;
  std::vector<std::size_t> level_end(static_cast<std::size_t>(tau) + 1, 0);
  for (int t = 1; t <= tau; ++t) {
    for (Vertex v : full.levels[t]) {
      Var var{v, {}, {}};
      for (Vertex u : g.neighbors(v))
        if (level_of[u] >= 0 && level_of[u] < t) var.candidates.push_back(u);
      vars.push_back(std::move(var));
    }
    level_end[t] = vars.size();
  }

  std::unordered_set<std::uint64_t> witness;
  auto independent = [&](const Var& var, const std::vector<int>& pick) {
    for (std::size_t a = 0; a < pick.size(); ++a)
      for (std::size_t b = a + 1; b < pick.size(); ++b)
        if (witness.count(edge_key(var.candidates[pick[a]], var.candidates[pick[b]]))) return false;
    return true;
  };
  auto apply = [&](const Var& var, bool insert) {
    for (int idx : var.pick) {
      const auto key = edge_key(var.v, var.candidates[idx]);
      if (insert)
        witness.insert(key);
      else
        witness.erase(key);
    }
  };
  // advance to the next independent r-combination; false when exhausted
  std::uint64_t nodes = 0;
  bool out_of_budget = false;
  auto advance = [&](Var& var) {
    const int m = static_cast<int>(var.candidates.size());
    auto& pick = var.pick;
    bool fresh = pick.empty();
    if (fresh) {
      pick.resize(static_cast<std::size_t>(r));
      for (int t = 0; t < r; ++t) pick[t] = t;
    }
    for (;;) {
      if (!fresh) {
        int t = r - 1;
        while (t >= 0 && pick[t] == m - r + t) --t;
        if (t < 0) {
          pick.clear();
          return false;
        }
        ++pick[t];
        for (int u = t + 1; u < r; ++u) pick[u] = pick[u - 1] + 1;
      }
      fresh = false;
      if (++nodes > node_budget) {
        out_of_budget = true;
        pick.clear();
        return false;
      }
      if (independent(var, pick)) return true;
    }
  };

  int target = 1;
  int best = 0;
  std::vector<Edge> best_witness;
  std::size_t pos = 0;
  for (;;) {
    if (pos == level_end[target]) {
      best = target;
      best_witness.clear();
      for (std::size_t idx = 0; idx < pos; ++idx)
        for (int c : vars[idx].pick) {
          Vertex a = vars[idx].v, b = vars[idx].candidates[c];
          best_witness.emplace_back(std::min(a, b), std::max(a, b));
        }
      if (target == tau) break;
      ++target;
      continue;
    }
    Var& var = vars[pos];
    if (!var.pick.empty()) apply(var, false);
    if (advance(var)) {
      apply(var, true);
      ++pos;
      continue;
    }
    if (out_of_budget || pos == 0) break;
    --pos;  // revisit the previous vertex's choice
  }

  for (int t = 1; t <= best; ++t) out.levels.push_back(full.levels[t]);
  std::sort(best_witness.begin(), best_witness.end());
  out.witness_edges = std::move(best_witness);
  out.lower_bound_only = out_of_budget;
  return out;
}

// ---------------------------------------------------------------------------

void write_edge_list(const Graph& g, std::ostream& out) {
  nlohmann::ordered_json header;
  header["n"] = g.n();
  header["edges"] = g.edge_count();
  out << header.dump() << '\n';
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
  if (!out) fail(ErrorCode::io, "failed writing edge list");
}

Graph read_edge_list(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::io, "edge list is empty");
  std::size_t n = 0, m = 0;
  try {
    auto header = nlohmann::json::parse(line);
    n = header.at("n").get<std::size_t>();
    m = header.at("edges").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::io, std::string("bad edge list header: ") + e.what());
  }
  std::vector<Edge> edges;
  edges.reserve(m);
  long long u = 0, v = 0;
  while (in >> u >> v) {
    if (u < 0 || v < 0) fail(ErrorCode::io, "negative vertex id in edge list");
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  if (!in.eof()) fail(ErrorCode::io, "malformed edge line");
  if (edges.size() != m) {
    std::ostringstream msg;
    msg << "edge list header promises " << m << " edges, found " << edges.size();
    fail(ErrorCode::io, msg.str());
  }
  return Graph(n, edges);
}

std::string trace_to_json(const PercolationTrace& trace) {
  nlohmann::ordered_json j;
  j["seed"] = trace.seed;
  j["levels"] = trace.levels;
  j["tau"] = trace.tau();
  if (trace.witness_edges) {
    auto arr = nlohmann::json::array();
    for (const auto& [u, v] : *trace.witness_edges) arr.push_back({u, v});
    j["witness_edges"] = arr;
    j["lower_bound_only"] = trace.lower_bound_only;
  }
  return j.dump();
}

}  // namespace bootperc::engine
