/*
 * (C) Copyright 2026 The bootperc Authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "bootperc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>

#include "bootperc/branching.hpp"
#include "bootperc/combinatorics.hpp"
#include "bootperc/thresholds.hpp"
#include "json.hpp"

namespace bootperc::experiments {

namespace {

constexpr std::uint64_t kTrialBlock = 64;
constexpr int kComparatorKMax = 40;

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

unsigned worker_count(unsigned threads) { return threads == 0 ? default_thread_count() : threads; }

// Calls visit(u, v) for each pair of a G(n, p) sample, in row-major order.
template <class Visit>
void for_each_gnp_pair(std::size_t n, double p, Engine& rng, Visit&& visit) {
  require(p >= 0 && p <= 1, ErrorCode::invalid_argument, "p must lie in [0, 1]");
  if (n < 2 || p == 0) return;
  const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  const double log_q = std::log1p(-p);
  auto skip = [&]() -> std::uint64_t {
    if (p == 1) return 0;
    const double s = std::floor(std::log1p(-uniform01(rng)) / log_q);
    return s >= static_cast<double>(total) ? total : static_cast<std::uint64_t>(s);
  };
  std::uint64_t u = 0, row_start = 0, row_len = n - 1;
  std::uint64_t pos = skip();
  while (pos < total) {
    while (pos >= row_start + row_len) {
      row_start += row_len;
      ++u;
      --row_len;
    }
    visit(static_cast<Vertex>(u), static_cast<Vertex>(u + 1 + (pos - row_start)));
    const std::uint64_t s = skip();
    if (s >= total) break;
    pos += s + 1;
  }
}

// Uniform r-set of distinct vertices, sorted.
std::vector<Vertex> random_subset(std::size_t n, int r, Engine& rng) {
  std::vector<Vertex> s;
  while (static_cast<int>(s.size()) < r) {
    const auto v = static_cast<Vertex>(uniform_below(rng, n));
    if (std::find(s.begin(), s.end(), v) == s.end()) s.push_back(v);
  }
  std::sort(s.begin(), s.end());
  return s;
}

void check_subset_budget(std::size_t n, int r, std::uint64_t cap) {
  require(binomial_double(static_cast<std::int64_t>(n), r) <= static_cast<double>(cap), ErrorCode::cap_exceeded,
          "C(n, r) exceeds the subset cap for the all-seed policy");
}

// Lexicographic r-subsets of [0, n); visit returns true to stop.
template <class Visit>
bool for_each_subset(std::size_t n, int r, Visit&& visit) {
  if (n < static_cast<std::size_t>(r)) return false;
  std::vector<Vertex> c(static_cast<std::size_t>(r));
  std::iota(c.begin(), c.end(), Vertex{0});
  for (;;) {
    if (visit(std::span<const Vertex>(c))) return true;
    int j = r - 1;
    while (j >= 0 && c[static_cast<std::size_t>(j)] == n - static_cast<std::size_t>(r - j)) --j;
    if (j < 0) return false;
    ++c[static_cast<std::size_t>(j)];
    for (int m = j + 1; m < r; ++m) c[static_cast<std::size_t>(m)] = c[static_cast<std::size_t>(m - 1)] + 1;
  }
}

bool is_clique(const Graph& g, std::span<const Vertex> s) {
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = a + 1; b < s.size(); ++b)
      if (!g.has_edge(s[a], s[b])) return false;
  return true;
}

// Seed r-bootstrap on G(n, p) revealed on demand. The seed is {0..r-1};
// when a vertex is infected its pairs to uninfected vertices are sampled,
// so every pair is decided at most once and only pairs that can matter are
// ever drawn.
class LazyExplorer {
 public:
  LazyExplorer(std::size_t n, double p) : n_(n), p_(p), hits_(n, 0), infected_(n, 0) {
    log_q_ = p > 0 && p < 1 ? std::log1p(-p) : 0.0;
  }

  // sink(t, level_size, cumulative); returns {infected, last level size}.
  template <class Sink>
  std::pair<std::size_t, std::size_t> run(int r, Engine& rng, std::size_t stop_above, Sink&& sink) {
    rng_ = &rng;
    frontier_.resize(static_cast<std::size_t>(r));
    std::iota(frontier_.begin(), frontier_.end(), Vertex{0});
    for (Vertex v : frontier_) mark(v);
    std::size_t cumulative = frontier_.size(), last = frontier_.size();
    sink(0, last, cumulative);
    const auto threshold = static_cast<std::uint32_t>(r);
    for (int t = 1; stop_above == 0 || cumulative <= stop_above; ++t) {
      next_.clear();
      for (Vertex v : frontier_) reveal(v, threshold);
      if (next_.empty()) break;
      for (Vertex w : next_) mark(w);
      cumulative += next_.size();
      last = next_.size();
      sink(t, last, cumulative);
      std::swap(frontier_, next_);
    }
    for (Vertex v : touched_) {
      hits_[v] = 0;
      infected_[v] = 0;
    }
    touched_.clear();
    return {cumulative, last};
  }

 private:
  void mark(Vertex v) {
    if (hits_[v] == 0 && !infected_[v]) touched_.push_back(v);
    infected_[v] = 1;
  }

  void reveal(Vertex v, std::uint32_t threshold) {
    if (p_ == 0) return;
    std::int64_t pos = -1;
    const auto n = static_cast<std::int64_t>(n_);
    for (;;) {
      if (p_ < 1) {
        const double s = std::floor(std::log1p(-uniform01(*rng_)) / log_q_);
        if (s >= static_cast<double>(n)) return;
        pos += static_cast<std::int64_t>(s) + 1;
      } else {
        ++pos;
      }
      if (pos >= n) return;
      const auto w = static_cast<Vertex>(pos);
      if (w == v || infected_[w]) continue;
      if (hits_[w] == 0) touched_.push_back(w);
      if (++hits_[w] == threshold) next_.push_back(w);
    }
  }

  std::size_t n_;
  double p_;
  double log_q_ = 0;
  Engine* rng_ = nullptr;
  std::vector<std::uint32_t> hits_;
  std::vector<std::uint8_t> infected_;
  std::vector<Vertex> touched_, frontier_, next_;
};

// Runs the seeds of one trial and reports each run to on_run(levels) where
// levels is the list of (level size, cumulative) pairs.
using LevelList = std::vector<std::pair<std::size_t, std::size_t>>;

template <class OnRun>
void run_trial(const ExperimentConfig& config, double p, std::uint64_t trial, std::size_t stop_above,
               OnRun&& on_run) {
  Engine rng = make_stream(config.rng_seed, trial);
  LevelList levels;
  auto sink_sizes = [&](int, std::size_t size, std::size_t cumulative) { levels.emplace_back(size, cumulative); };
  if (config.exposure == Exposure::lazy) {
    LazyExplorer explorer(config.n, p);
    explorer.run(config.r, rng, stop_above, sink_sizes);
    on_run(levels);
    return;
  }
  const Graph g = sample_gnp(config.n, p, rng);
  engine::Percolator perc(g.n());
  auto one = [&](std::span<const Vertex> seed) {
    levels.clear();
    perc.run(
        g, seed, config.r,
        [&](int t, std::span<const Vertex> level, std::size_t cumulative) {
          sink_sizes(t, level.size(), cumulative);
        },
        stop_above);
    on_run(levels);
  };
  if (config.seed_policy == SeedPolicy::all) {
    for_each_subset(config.n, config.r, [&](std::span<const Vertex> s) {
      one(s);
      return false;
    });
  } else {
    for (std::uint64_t m = 0; m < config.seeds_per_graph; ++m) {
      const auto s = random_subset(config.n, config.r, rng);
      one(s);
    }
  }
}

std::uint64_t runs_per_trial(const ExperimentConfig& config) {
  if (config.exposure == Exposure::lazy) return 1;
  if (config.seed_policy == SeedPolicy::all)
    return static_cast<std::uint64_t>(binomial_double(static_cast<std::int64_t>(config.n), config.r));
  return config.seeds_per_graph;
}

}  // namespace

// ---------------------------------------------------------------------------

Graph sample_gnp(std::size_t n, double p, Engine& rng) {
  std::vector<engine::Edge> edges;
  for_each_gnp_pair(n, p, rng, [&](Vertex u, Vertex v) { edges.emplace_back(u, v); });
  return Graph(n, edges);
}

Graph sample_gnp(std::size_t n, double p, std::uint64_t rng_seed) {
  Engine rng = make_stream(rng_seed, 0);
  return sample_gnp(n, p, rng);
}

MarkedGraph sample_marked(std::size_t n, double p_max, Engine& rng) {
  MarkedGraph out;
  out.n = n;
  out.p_max = p_max;
  for_each_gnp_pair(n, p_max, rng, [&](Vertex u, Vertex v) {
    out.edges.emplace_back(u, v);
    out.marks.push_back(p_max * uniform01(rng));
  });
  return out;
}

Graph MarkedGraph::at(double p) const {
  require(p >= 0 && p <= p_max, ErrorCode::invalid_argument, "p must lie in [0, p_max]");
  std::vector<engine::Edge> kept;
  for (std::size_t e = 0; e < edges.size(); ++e)
    if (marks[e] < p) kept.push_back(edges[e]);
  return Graph(n, kept);
}

double resolve_p(const ExperimentConfig& c) {
  require(c.r >= 1 && c.n >= static_cast<std::size_t>(c.r) + 1, ErrorCode::invalid_argument, "need r >= 1 and n > r");
  require(c.n <= (std::size_t{1} << 31), ErrorCode::invalid_argument, "n too large");
  require(c.alpha.has_value() != c.p.has_value(), ErrorCode::invalid_argument, "give exactly one of alpha and p");
  require(c.trials >= 1, ErrorCode::invalid_argument, "trials must be >= 1");
  require(c.seed_policy == SeedPolicy::all || c.seeds_per_graph >= 1, ErrorCode::invalid_argument,
          "seeds_per_graph must be >= 1");
  double p = 0;
  if (c.alpha) {
    require(c.r >= 2, ErrorCode::invalid_argument, "alpha scaling needs r >= 2");
    p = thresholds::theta(c.r, *c.alpha, static_cast<double>(c.n));
    require(p > 0 && p < 1, ErrorCode::invalid_argument, "theta_r(alpha, n) must lie in (0, 1)");
  } else {
    p = *c.p;
    require(p >= 0 && p <= 1, ErrorCode::invalid_argument, "p must lie in [0, 1]");
  }
  if (c.exposure == Exposure::graph && c.seed_policy == SeedPolicy::all) check_subset_budget(c.n, c.r, c.subset_cap);
  return p;
}

// ---------------------------------------------------------------------------

double PkiEstimate::frequency(int k, int i) const {
  auto it = hits.find({k, i});
  return it == hits.end() || seed_runs == 0 ? 0.0 : static_cast<double>(it->second) / static_cast<double>(seed_runs);
}

double PkiEstimate::stderr_of(int k, int i) const {
  const double f = frequency(k, i);
  return seed_runs == 0 ? 0.0 : std::sqrt(f * (1 - f) / static_cast<double>(seed_runs));
}

double PkiEstimate::frequency_k(int k) const {
  auto it = hits_k.find(k);
  return it == hits_k.end() || seed_runs == 0 ? 0.0 : static_cast<double>(it->second) / static_cast<double>(seed_runs);
}

PkiEstimate estimate_Pki(const ExperimentConfig& config) {
  PkiEstimate est;
  est.config = config;
  est.p = resolve_p(config);
  const int r = config.r;
  const int k_min = config.k_min == 0 ? r + 1 : config.k_min;
  require(k_min > r && config.k_max >= k_min, ErrorCode::invalid_argument, "need r < k_min <= k_max");
  require(static_cast<std::size_t>(config.k_max) <= config.n, ErrorCode::invalid_argument, "k_max must be <= n");
  est.config.k_min = k_min;
  est.eps = static_cast<double>(config.n) * std::pow(est.p, r);
  est.expected_count_scale = binomial_double(static_cast<std::int64_t>(config.n), r);

  const std::size_t width = static_cast<std::size_t>(config.k_max) + 1;
  const std::uint64_t blocks = (config.trials + kTrialBlock - 1) / kTrialBlock;
  std::vector<std::vector<std::uint64_t>> partial(blocks);
  parallel_for(blocks, worker_count(config.threads), [&](std::size_t b) {
    std::vector<std::uint64_t> cells(width * width + width, 0);
    const std::uint64_t end = std::min<std::uint64_t>(config.trials, (b + 1) * kTrialBlock);
    for (std::uint64_t trial = b * kTrialBlock; trial < end; ++trial)
      run_trial(config, est.p, trial, static_cast<std::size_t>(config.k_max), [&](const LevelList& levels) {
        for (std::size_t t = 1; t < levels.size(); ++t) {
          const auto [size, cumulative] = levels[t];
          if (cumulative < static_cast<std::size_t>(k_min) || cumulative > static_cast<std::size_t>(config.k_max)) continue;
          ++cells[cumulative * width + size];
          ++cells[width * width + cumulative];
        }
      });
    partial[b] = std::move(cells);
  });
  est.seed_runs = config.trials * runs_per_trial(config);
  std::vector<std::uint64_t> sum(width * width + width, 0);
  for (const auto& cells : partial)
    for (std::size_t c = 0; c < sum.size(); ++c) sum[c] += cells[c];
  for (int k = k_min; k <= config.k_max; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    est.hits_k[k] = sum[width * width + kk];
    for (int i = 1; i <= k - r; ++i) est.hits[{k, i}] = sum[kk * width + static_cast<std::size_t>(i)];
  }

  const int comparator_top = std::min(config.k_max, kComparatorKMax);
  if (r >= 2 && comparator_top > r) {
    const auto table = combinatorics::build_count_table(r, comparator_top);
    for (int k = k_min; k <= comparator_top; ++k)
      for (int i = 1; i <= k - r; ++i) est.comparator[{k, i}] = branching::hitting_probability_exact(table, est.eps, k, i);
  }
  if (r < 2 || config.k_max > comparator_top)
    est.warnings.push_back("comparator omitted for k > " + std::to_string(std::max(comparator_top, r)) +
                           ": no count table");
  return est;
}

double TerminalEstimate::frequency(std::size_t k, std::size_t i) const {
  auto it = counts.find({k, i});
  return it == counts.end() || seed_runs == 0 ? 0.0 : static_cast<double>(it->second) / static_cast<double>(seed_runs);
}

TerminalEstimate terminal_set_frequency(const ExperimentConfig& config) {
  TerminalEstimate est;
  est.config = config;
  est.p = resolve_p(config);
  const std::uint64_t blocks = (config.trials + kTrialBlock - 1) / kTrialBlock;
  std::vector<std::map<std::pair<std::size_t, std::size_t>, std::uint64_t>> partial(blocks);
  parallel_for(blocks, worker_count(config.threads), [&](std::size_t b) {
    auto& tally = partial[b];
    const std::uint64_t end = std::min<std::uint64_t>(config.trials, (b + 1) * kTrialBlock);
    for (std::uint64_t trial = b * kTrialBlock; trial < end; ++trial)
      run_trial(config, est.p, trial, 0, [&](const LevelList& levels) { ++tally[{levels.back().second, levels.back().first}]; });
  });
  for (const auto& tally : partial)
    for (const auto& [key, count] : tally) est.counts[key] += count;
  est.seed_runs = config.trials * runs_per_trial(config);
  return est;
}

// ---------------------------------------------------------------------------

std::vector<SweepRow> seed_edge_sweep(std::size_t n, const std::vector<double>& alphas, std::uint64_t trials,
                                      std::uint64_t rng_seed, unsigned threads) {
  require(n >= 3, ErrorCode::invalid_argument, "n must be >= 3");
  require(!alphas.empty(), ErrorCode::invalid_argument, "alpha list is empty");
  require(trials >= 1, ErrorCode::invalid_argument, "trials must be >= 1");
  std::vector<SweepRow> rows(alphas.size());
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    require(alphas[a] > 0, ErrorCode::invalid_argument, "alpha must be positive");
    rows[a].alpha = alphas[a];
    rows[a].p = thresholds::theta(2, alphas[a], static_cast<double>(n));
    require(rows[a].p < 1, ErrorCode::invalid_argument, "alpha too large for this n");
    rows[a].trials = trials;
  }
  std::vector<std::size_t> order(alphas.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return rows[x].p < rows[y].p; });
  const double p_max = rows[order.back()].p;
  std::vector<std::uint8_t> success(trials * alphas.size(), 0);
  parallel_for(trials, worker_count(threads), [&](std::size_t trial) {
    Engine rng = make_stream(rng_seed, trial);
    const MarkedGraph marked = sample_marked(n, p_max, rng);
    bool found = false;
    for (std::size_t a : order) {
      // a seed edge survives in every supergraph
      if (!found) found = engine::has_seed(marked.at(rows[a].p), 2).has_value();
      success[trial * alphas.size() + a] = found ? 1 : 0;
    }
  });
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    for (std::uint64_t t = 0; t < trials; ++t) rows[a].successes += success[t * alphas.size() + a];
    rows[a].frequency = static_cast<double>(rows[a].successes) / static_cast<double>(trials);
    rows[a].stderr_ = std::sqrt(rows[a].frequency * (1 - rows[a].frequency) / static_cast<double>(trials));
  }
  return rows;
}

double SusceptibilityRow::susceptible_frequency() const {
  return susceptible && trials ? static_cast<double>(*susceptible) / static_cast<double>(trials)
                               : std::numeric_limits<double>::quiet_NaN();
}

double SusceptibilityRow::susceptible_stderr() const {
  const double f = susceptible_frequency();
  return std::isnan(f) ? f : std::sqrt(f * (1 - f) / static_cast<double>(trials));
}

double SusceptibilityRow::spread_mean() const {
  if (max_spread_over_log_n.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::accumulate(max_spread_over_log_n.begin(), max_spread_over_log_n.end(), 0.0) /
         static_cast<double>(max_spread_over_log_n.size());
}

std::vector<SusceptibilityRow> susceptibility_sweep(const SusceptibilityConfig& c) {
  require(c.r >= 2 && c.n > static_cast<std::size_t>(c.r) + 1, ErrorCode::invalid_argument, "need r >= 2, n > r + 1");
  require(!c.alphas.empty() && c.trials >= 1, ErrorCode::invalid_argument, "need alphas and trials >= 1");
  if (c.seed_policy == SeedPolicy::all) check_subset_budget(c.n, c.r, c.subset_cap);
  else require(c.seeds_per_graph >= 1, ErrorCode::invalid_argument, "seeds_per_graph must be >= 1");
  const std::size_t na = c.alphas.size();
  std::vector<SusceptibilityRow> rows(na);
  for (std::size_t a = 0; a < na; ++a) {
    require(c.alphas[a] > 0, ErrorCode::invalid_argument, "alpha must be positive");
    rows[a].alpha = c.alphas[a];
    rows[a].p = thresholds::theta(c.r, c.alphas[a], static_cast<double>(c.n));
    require(rows[a].p < 1, ErrorCode::invalid_argument, "alpha too large for this n");
    rows[a].trials = c.trials;
  }
  std::vector<std::size_t> order(na);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return rows[x].p < rows[y].p; });
  const double p_max = rows[order.back()].p;
  const double log_n = std::log(static_cast<double>(c.n));
  std::vector<std::size_t> spread(c.trials * na, 0);
  parallel_for(c.trials, worker_count(c.threads), [&](std::size_t trial) {
    Engine rng = make_stream(c.rng_seed, trial);
    const MarkedGraph marked = sample_marked(c.n, p_max, rng);
    std::vector<std::vector<Vertex>> seeds;
    if (c.seed_policy == SeedPolicy::random)
      for (std::uint64_t m = 0; m < c.seeds_per_graph; ++m) seeds.push_back(random_subset(c.n, c.r, rng));
    engine::Percolator perc(c.n);
    bool full = false;
    for (std::size_t a : order) {
      std::size_t best = c.n;
      if (!full) {
        const Graph g = marked.at(rows[a].p);
        best = 0;
        auto test = [&](std::span<const Vertex> s) {
          best = std::max(best, perc.run(g, s, c.r).infected);
          return best == c.n;
        };
        if (c.seed_policy == SeedPolicy::all) {
          // cliques first: contagious sets at these densities are nearly always cliques
          const bool done = for_each_subset(c.n, c.r, [&](std::span<const Vertex> s) { return is_clique(g, s) && test(s); });
          if (!done) for_each_subset(c.n, c.r, [&](std::span<const Vertex> s) { return !is_clique(g, s) && test(s); });
        } else {
          for (const auto& s : seeds)
            if (test(s)) break;
        }
        full = best == c.n;
      }
      spread[trial * na + a] = best;
    }
  });
  for (std::size_t a = 0; a < na; ++a) {
    std::uint64_t yes = 0;
    for (std::uint64_t t = 0; t < c.trials; ++t) {
      const std::size_t s = spread[t * na + a];
      rows[a].max_spread_over_log_n.push_back(static_cast<double>(s) / log_n);
      yes += s == c.n ? 1 : 0;
    }
    if (c.seed_policy == SeedPolicy::all) rows[a].susceptible = yes;
  }
  return rows;
}

// ---------------------------------------------------------------------------

namespace {

nlohmann::json config_json(const ExperimentConfig& c, double p) {
  nlohmann::json j;
  j["n"] = c.n;
  j["r"] = c.r;
  j["alpha"] = c.alpha ? nlohmann::json(*c.alpha) : nlohmann::json(nullptr);
  j["p"] = p;
  j["trials"] = c.trials;
  j["rng_seed"] = c.rng_seed;
  j["seed_policy"] = c.seed_policy == SeedPolicy::all ? "all" : "random";
  j["seeds_per_graph"] = c.seeds_per_graph;
  j["exposure"] = c.exposure == Exposure::lazy ? "lazy" : "graph";
  j["k_min"] = c.k_min;
  j["k_max"] = c.k_max;
  return j;
}

}  // namespace

std::string to_csv(const PkiEstimate& e) {
  // i = 0 rows carry the k-contagious totals
  std::string out = "k,i,hits,seed_runs,frequency,stderr,comparator\n";
  for (const auto& [k, count] : e.hits_k) {
    const double f = e.frequency_k(k);
    out += std::to_string(k) + ",0," + std::to_string(count) + "," + std::to_string(e.seed_runs) + "," + num(f) +
           "," + num(std::sqrt(f * (1 - f) / static_cast<double>(e.seed_runs))) + ",\n";
    for (int i = 1; i <= k - e.config.r; ++i) {
      auto it = e.hits.find({k, i});
      auto cmp = e.comparator.find({k, i});
      out += std::to_string(k) + "," + std::to_string(i) + "," + std::to_string(it == e.hits.end() ? 0 : it->second) +
             "," + std::to_string(e.seed_runs) + "," + num(e.frequency(k, i)) + "," + num(e.stderr_of(k, i)) + "," +
             (cmp == e.comparator.end() ? std::string() : num(cmp->second)) + "\n";
    }
  }
  return out;
}

std::string to_json(const PkiEstimate& e) {
  nlohmann::json j;
  j["config"] = config_json(e.config, e.p);
  j["eps"] = e.eps;
  j["seed_runs"] = e.seed_runs;
  j["expected_count_scale"] = e.expected_count_scale;
  j["expected_count_note"] = "E_r(k,i) ~ frequency * C(n,r); exact only under the all-seed policy";
  j["warnings"] = e.warnings;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& [key, count] : e.hits) {
    nlohmann::json row{{"k", key.first}, {"i", key.second}, {"hits", count},
                       {"frequency", e.frequency(key.first, key.second)},
                       {"stderr", e.stderr_of(key.first, key.second)}};
    auto cmp = e.comparator.find(key);
    row["comparator"] = cmp == e.comparator.end() ? nlohmann::json(nullptr) : nlohmann::json(cmp->second);
    rows.push_back(row);
  }
  j["rows"] = rows;
  nlohmann::json totals = nlohmann::json::array();
  for (const auto& [k, count] : e.hits_k) totals.push_back({{"k", k}, {"hits", count}, {"frequency", e.frequency_k(k)}});
  j["totals"] = totals;
  return j.dump(1);
}

std::string to_csv(const TerminalEstimate& e) {
  std::string out = "k,i,count,seed_runs,frequency\n";
  for (const auto& [key, count] : e.counts)
    out += std::to_string(key.first) + "," + std::to_string(key.second) + "," + std::to_string(count) + "," +
           std::to_string(e.seed_runs) + "," + num(e.frequency(key.first, key.second)) + "\n";
  return out;
}

std::string to_json(const TerminalEstimate& e) {
  nlohmann::json j;
  j["config"] = config_json(e.config, e.p);
  j["seed_runs"] = e.seed_runs;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& [key, count] : e.counts)
    rows.push_back({{"k", key.first}, {"i", key.second}, {"count", count}, {"frequency", e.frequency(key.first, key.second)}});
  j["rows"] = rows;
  return j.dump(1);
}

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "alpha,p,trials,successes,frequency,stderr\n";
  for (const auto& r : rows)
    out += num(r.alpha) + "," + num(r.p) + "," + std::to_string(r.trials) + "," + std::to_string(r.successes) + "," +
           num(r.frequency) + "," + num(r.stderr_) + "\n";
  return out;
}

std::string to_json(const std::vector<SweepRow>& rows) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : rows)
    j.push_back({{"alpha", r.alpha}, {"p", r.p}, {"trials", r.trials}, {"successes", r.successes},
                 {"frequency", r.frequency}, {"stderr", r.stderr_}});
  return j.dump(1);
}

std::string to_csv(const std::vector<SusceptibilityRow>& rows) {
  std::string out = "alpha,p,trials,susceptible,susceptible_frequency,susceptible_stderr,spread_mean,spread_max\n";
  for (const auto& r : rows) {
    const double mx = r.max_spread_over_log_n.empty()
                          ? std::numeric_limits<double>::quiet_NaN()
                          : *std::max_element(r.max_spread_over_log_n.begin(), r.max_spread_over_log_n.end());
    out += num(r.alpha) + "," + num(r.p) + "," + std::to_string(r.trials) + "," +
           (r.susceptible ? std::to_string(*r.susceptible) : std::string()) + "," +
           (r.susceptible ? num(r.susceptible_frequency()) : std::string()) + "," +
           (r.susceptible ? num(r.susceptible_stderr()) : std::string()) + "," + num(r.spread_mean()) + "," + num(mx) +
           "\n";
  }
  return out;
}

std::string to_json(const std::vector<SusceptibilityRow>& rows) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row{{"alpha", r.alpha}, {"p", r.p}, {"trials", r.trials},
                       {"max_spread_over_log_n", r.max_spread_over_log_n}};
    row["susceptible"] = r.susceptible ? nlohmann::json(*r.susceptible) : nlohmann::json(nullptr);
    j.push_back(row);
  }
  return j.dump(1);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorCode::io, "cannot open " + path + " for writing");
  out << text;
  out.flush();
  require(static_cast<bool>(out), ErrorCode::io, "write to " + path + " failed");
}

}  // namespace bootperc::experiments
