#include "rdd/gen.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>

namespace rdd::gen {

namespace {

std::string str(int i) { return std::to_string(i); }

NodeId node(const Instance& inst, const std::string& name) {
  auto v = inst.find_node(name);
  if (!v) throw std::logic_error("generator lost node " + name);
  return *v;
}

AgentId agent(const Instance& inst, const std::string& id) {
  auto a = inst.find_agent(id);
  if (!a) throw std::logic_error("generator lost agent " + id);
  return *a;
}

struct NamedLeg {
  std::string agent;
  std::vector<std::string> nodes;
};

Schedule build_schedule(const Instance& inst, const std::vector<NamedLeg>& named) {
  std::vector<Leg> legs;
  for (const auto& leg : named) {
    std::vector<Point> pts;
    for (const auto& n : leg.nodes) pts.push_back(Point::at(node(inst, n)));
    legs.push_back({agent(inst, leg.agent), std::move(pts)});
  }
  return schedule_from_legs(inst, legs);
}

// Names of the base 3DM gadget copy `c`; s nodes are shared between copies.
struct Names3dm {
  int n;
  int c;
  std::string s(int i) const { return "s" + str(c * n + i); }
  std::string elem(char kind, int i) const { return std::string(1, kind) + str(i) + "." + str(c + 1); }
  std::string v(int i, int j, char kind) const {
    return "v" + str(i) + "." + str(j) + std::string(1, kind) + "." + str(c + 1);
  }
  std::string agent(char kind, int i) const { return std::string(1, 'a') + kind + str(i) + "." + str(c + 1); }
};

// outer(i, kind) gives the outer edge length for gadget i and column kind.
InstanceData build_3dm(const ThreeDM& d, int q, double eps, const std::function<double(int, int)>& outer) {
  const int n = d.n, m = static_cast<int>(d.triples.size());
  InstanceData data;
  std::set<std::string> seen;
  auto add_node = [&](const std::string& name) {
    if (seen.insert(name).second) data.nodes.push_back(name);
  };
  for (int c = 0; c < q; ++c) {
    const Names3dm N{n, c};
    for (int i = 1; i <= n + 1; ++i) add_node(N.s(i));
    for (char kind : {'x', 'y', 'z'})
      for (int i = 1; i <= n; ++i) add_node(N.elem(kind, i));
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= m; ++j)
        for (char kind : {'x', 'y', 'z'}) add_node(N.v(i, j, kind));

    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= m; ++j) {
        data.edges.push_back({N.s(i), N.v(i, j, 'x'), eps});
        data.edges.push_back({N.v(i, j, 'x'), N.v(i, j, 'y'), eps});
        data.edges.push_back({N.v(i, j, 'y'), N.v(i, j, 'z'), eps});
        data.edges.push_back({N.v(i, j, 'z'), N.s(i + 1), eps});
        const auto& t = d.triples[j - 1];
        data.edges.push_back({N.elem('x', t[0]), N.v(i, j, 'x'), outer(i, 0)});
        data.edges.push_back({N.elem('y', t[1]), N.v(i, j, 'y'), outer(i, 1)});
        data.edges.push_back({N.elem('z', t[2]), N.v(i, j, 'z'), outer(i, 2)});
      }
    }

    const char kinds[3] = {'x', 'y', 'z'};
    for (int coord = 0; coord < 3; ++coord) {
      const char kind = kinds[coord];
      for (int e = 1; e <= n; ++e) {
        InstanceData::AgentSpec a;
        a.id = N.agent(kind, e);
        a.position = N.elem(kind, e);
        a.nodes.push_back(N.elem(kind, e));
        for (int i = 1; i <= n; ++i) {
          for (int j = 1; j <= m; ++j) {
            if (d.triples[j - 1][coord] != e) continue;
            const std::string here = N.v(i, j, kind);
            const std::string next = coord < 2 ? N.v(i, j, kinds[coord + 1]) : N.s(i + 1);
            a.nodes.push_back(here);
            a.nodes.push_back(next);
            a.edges.emplace_back(N.elem(kind, e), here);
            a.edges.emplace_back(here, next);
          }
        }
        std::sort(a.nodes.begin(), a.nodes.end());
        a.nodes.erase(std::unique(a.nodes.begin(), a.nodes.end()), a.nodes.end());
        data.agents.push_back(std::move(a));
      }
    }
    for (int i = 1; i <= n; ++i) {
      InstanceData::AgentSpec a;
      a.id = N.agent('s', i);
      a.position = N.s(i);
      a.nodes.push_back(N.s(i));
      for (int j = 1; j <= m; ++j) {
        a.nodes.push_back(N.v(i, j, 'x'));
        a.edges.emplace_back(N.s(i), N.v(i, j, 'x'));
      }
      data.agents.push_back(std::move(a));
    }
  }
  data.source = "s1";
  data.target = "s" + str(q * n + 1);
  return data;
}

std::vector<NamedLeg> matching_legs(const ThreeDM& d, int q) {
  std::vector<NamedLeg> legs;
  for (int c = 0; c < q; ++c) {
    const Names3dm N{d.n, c};
    for (int i = 1; i <= d.n; ++i) {
      const int j = (*d.matching)[i - 1] + 1;
      const auto& t = d.triples[j - 1];
      legs.push_back({N.agent('s', i), {N.s(i), N.v(i, j, 'x')}});
      legs.push_back({N.agent('x', t[0]), {N.v(i, j, 'x'), N.v(i, j, 'y')}});
      legs.push_back({N.agent('y', t[1]), {N.v(i, j, 'y'), N.v(i, j, 'z')}});
      legs.push_back({N.agent('z', t[2]), {N.v(i, j, 'z'), N.s(i + 1)}});
    }
  }
  return legs;
}

}  // namespace

void validate(const ThreeDM& d) {
  if (d.n < 1) throw std::invalid_argument("3DM needs n >= 1");
  std::vector<std::array<char, 3>> used(d.n + 1, {0, 0, 0});
  for (const auto& t : d.triples) {
    for (int c = 0; c < 3; ++c) {
      if (t[c] < 1 || t[c] > d.n) throw std::invalid_argument("triple index out of range");
      used[t[c]][c] = 1;
    }
  }
  for (int e = 1; e <= d.n; ++e)
    for (int c = 0; c < 3; ++c)
      if (!used[e][c])
        throw std::invalid_argument(std::string(1, "xyz"[c]) + str(e) + " appears in no triple");
  if (!d.matching) return;
  if (static_cast<int>(d.matching->size()) != d.n) throw std::invalid_argument("matching must have n triples");
  std::vector<std::array<char, 3>> hit(d.n + 1, {0, 0, 0});
  for (int j : *d.matching) {
    if (j < 0 || j >= static_cast<int>(d.triples.size())) throw std::invalid_argument("matching index out of range");
    for (int c = 0; c < 3; ++c) {
      if (hit[d.triples[j][c]][c]) throw std::invalid_argument("matching covers an element twice");
      hit[d.triples[j][c]][c] = 1;
    }
  }
}

std::optional<std::vector<int>> find_matching(const ThreeDM& d) {
  if (d.n > 4) throw std::invalid_argument("exhaustive matching search is limited to n <= 4");
  std::vector<int> pick(d.n, -1);
  std::vector<char> used_y(d.n + 1, 0), used_z(d.n + 1, 0);
  std::function<bool(int)> place = [&](int x) {
    if (x > d.n) return true;
    for (std::size_t j = 0; j < d.triples.size(); ++j) {
      const auto& t = d.triples[j];
      if (t[0] != x || used_y[t[1]] || used_z[t[2]]) continue;
      used_y[t[1]] = used_z[t[2]] = 1;
      pick[x - 1] = static_cast<int>(j);
      if (place(x + 1)) return true;
      used_y[t[1]] = used_z[t[2]] = 0;
    }
    return false;
  };
  if (!place(1)) return std::nullopt;
  return pick;
}

ThreeDM random_3dm(int n, int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(1, n);
  ThreeDM d;
  d.n = n;
  for (int j = 0; j < m; ++j) d.triples.push_back({pick(rng), pick(rng), pick(rng)});
  for (int c = 0; c < 3; ++c) {
    for (int e = 1; e <= n; ++e) {
      bool found = false;
      for (const auto& t : d.triples) found = found || t[c] == e;
      if (found) continue;
      std::array<int, 3> t{pick(rng), pick(rng), pick(rng)};
      t[c] = e;
      d.triples.push_back(t);
    }
  }
  return d;
}

Gadget gen_3dm_ddt(const ThreeDM& d, int q, double M, double eps) {
  validate(d);
  if (q < 1) throw std::invalid_argument("q must be at least 1");
  if (!(M > 0)) throw std::invalid_argument("M must be positive");
  if (eps < 0) throw std::invalid_argument("eps must be nonnegative");
  Instance inst = Instance::build(build_3dm(d, q, eps, [M](int, int) { return M; }));
  Gadget g{inst, std::nullopt};
  if (d.matching) {
    Schedule sched = build_schedule(inst, matching_legs(d, q));
    const double value = evaluate(inst, sched).time;
    g.certificate = Certificate{std::move(sched), Objective::time, value};
  }
  return g;
}

Gadget gen_3dm_ddc(const ThreeDM& d, double eps) {
  validate(d);
  if (d.n > 15) throw std::invalid_argument("n > 15 loses exact powers of two in the energy sums");
  if (eps < 0) throw std::invalid_argument("eps must be nonnegative");
  const int n = d.n;
  auto outer = [n](int i, int kind) { return std::ldexp(1.0, 3 * n + 1 - (3 * (i - 1) + kind + 1)); };
  Instance inst = Instance::build(build_3dm(d, 1, eps, outer));
  Gadget g{inst, std::nullopt};
  if (d.matching) {
    Schedule sched = build_schedule(inst, matching_legs(d, 1));
    const double value = evaluate(inst, sched).energy;
    g.certificate = Certificate{std::move(sched), Objective::energy, value};
  }
  return g;
}

void validate(const EopInput& e) {
  if (e.x.empty() || e.x.size() % 2 != 0) throw std::invalid_argument("EOP needs 2n integers");
  for (long long v : e.x)
    if (v <= 0) throw std::invalid_argument("EOP integers must be positive");
  if (!e.left) return;
  const std::size_t n = e.x.size() / 2;
  if (e.left->size() != n) throw std::invalid_argument("partition must choose one member per pair");
  long long left = 0, total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const int pick = (*e.left)[i];
    if (pick != 0 && pick != 1) throw std::invalid_argument("partition choices are 0 or 1");
    left += e.x[2 * i + pick];
    total += e.x[2 * i] + e.x[2 * i + 1];
  }
  if (2 * left != total) throw std::invalid_argument("partition does not halve the sum");
}

std::optional<std::vector<int>> find_partition(const EopInput& e) {
  const std::size_t n = e.x.size() / 2;
  if (n > 20) throw std::invalid_argument("exhaustive partition search is limited to n <= 20");
  long long total = 0;
  for (long long v : e.x) total += v;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    long long left = 0;
    std::vector<int> pick(n);
    for (std::size_t i = 0; i < n; ++i) {
      pick[i] = static_cast<int>((mask >> i) & 1);
      left += e.x[2 * i + pick[i]];
    }
    if (2 * left == total) return pick;
  }
  return std::nullopt;
}

namespace {

struct EopLayout {
  int n;
  std::string b(int k) const { return "b" + str(k); }
  std::string c(int k) const { return "c" + str(k); }
  std::vector<std::string> order() const {
    std::vector<std::string> out{"s"};
    for (int k = 1; k <= 2 * n; ++k) out.push_back(b(k));
    out.push_back("z");
    out.push_back("z'");
    for (int k = 2 * n; k >= 1; --k) out.push_back(c(k));
    out.push_back("y");
    out.push_back("u");
    return out;
  }
};

InstanceData eop_data(const EopInput& e, double C, double L, double S, const std::vector<double>& speeds) {
  const int n = static_cast<int>(e.x.size() / 2);
  const EopLayout P{n};
  const auto order = P.order();
  InstanceData data;
  data.nodes = order;
  auto length_after = [&](std::size_t idx) -> double {
    const std::string& a = order[idx];
    if (a == "s") return S;
    if (a == "z") return 1.0;
    if (a == "y") return S + C * n + 0.5 - (1.0 + (n + 1) * L + n / 2.0);
    if (a[0] == 'b') {
      const int k = std::stoi(a.substr(1));
      return k % 2 == 1 ? 1.0 : L;
    }
    if (a == "z'") return L;
    const int k = std::stoi(a.substr(1));
    return k % 2 == 0 ? 0.5 : L;
  };
  for (std::size_t i = 0; i + 1 < order.size(); ++i) data.edges.push_back({order[i], order[i + 1], length_after(i)});

  auto index_of = [&](const std::string& name) {
    return static_cast<std::size_t>(std::find(order.begin(), order.end(), name) - order.begin());
  };
  auto interval = [&](const std::string& id, const std::string& at, const std::string& from, const std::string& to,
                      double speed) {
    InstanceData::AgentSpec a;
    a.id = id;
    a.position = at;
    a.speed = speed;
    a.rate = 1.0;
    const std::size_t lo = index_of(from), hi = index_of(to);
    for (std::size_t i = lo; i <= hi; ++i) a.nodes.push_back(order[i]);
    for (std::size_t i = lo; i < hi; ++i) a.edges.emplace_back(order[i], order[i + 1]);
    data.agents.push_back(std::move(a));
  };
  interval("h1", "s", "s", P.b(1), 1.0);
  interval("h2", "u", "z", "u", 1.0);
  for (int k = 1; k <= 2 * n; ++k) {
    const int i = (k + 1) / 2;
    interval("p" + str(k), "z", P.b(2 * i - 1), P.c(2 * i - 1), speeds[k - 1]);
  }
  for (int i = 1; i < n; ++i) interval("f" + str(i), P.b(2 * i), P.b(2 * i), P.b(2 * i + 1), kInf);
  interval("f" + str(n), P.b(2 * n), P.b(2 * n), "z", kInf);
  interval("f" + str(n + 1), "z'", "z'", P.c(2 * n), kInf);
  for (int j = n + 2; j <= 2 * n; ++j) {
    const int m = 2 * n + 1 - j;
    interval("f" + str(j), P.c(2 * m + 1), P.c(2 * m + 1), P.c(2 * m), kInf);
  }
  interval("f" + str(2 * n + 1), P.c(1), P.c(1), "y", kInf);
  data.source = "s";
  data.target = "y";
  return data;
}

}  // namespace

EopGadget gen_eop(const EopInput& e, double C) {
  validate(e);
  const int n = static_cast<int>(e.x.size() / 2);
  double sum = 0.0;
  for (long long v : e.x) sum += static_cast<double>(v);
  std::vector<double> speeds;
  for (long long v : e.x) speeds.push_back(1.0 / (C + static_cast<double>(v) / sum));
  const double L = 3.0 * C * n / 2.0 + 7.0 / 4.0 + 1.0;

  double s_paper = 0.0;
  for (int i = 1; i <= n; ++i)
    s_paper = std::max(s_paper, (n + 1 - i) * (L + 1.0) / std::min(speeds[2 * i - 2], speeds[2 * i - 1]));

  // p agents never leave [b_1, c_1], so their distances do not depend on S
  const Instance probe = Instance::build(eop_data(e, C, L, s_paper, speeds));
  const EopLayout P{n};
  double s_tight = 0.0;
  for (int k = 1; k <= 2 * n; ++k) {
    const int i = (k + 1) / 2;
    const AgentId a = agent(probe, "p" + str(k));
    const DistanceMap& d = probe.distances(a);
    const double far = std::max(d.from_start(node(probe, P.b(2 * i - 1))), d.from_start(node(probe, P.c(2 * i))));
    s_tight = std::max(s_tight, travel_time(far, speeds[k - 1]));
  }

  Instance inst = Instance::build(eop_data(e, C, L, s_tight, speeds));
  EopGadget g{inst, std::nullopt, C, L, s_tight, s_paper, s_tight + 3.0 * C * n / 2.0 + 7.0 / 4.0, speeds};
  if (e.left) {
    std::vector<NamedLeg> legs;
    legs.push_back({"h1", {"s", P.b(1)}});
    for (int i = 1; i <= n; ++i) {
      const int p = 2 * i - 1 + (*e.left)[i - 1];
      legs.push_back({"p" + str(p), {P.b(2 * i - 1), P.b(2 * i)}});
      legs.push_back({"f" + str(i), {P.b(2 * i), i < n ? P.b(2 * i + 1) : std::string("z")}});
    }
    legs.push_back({"h2", {"z", "z'"}});
    legs.push_back({"f" + str(n + 1), {"z'", P.c(2 * n)}});
    for (int i = n; i >= 1; --i) {
      const int p = 2 * i - (*e.left)[i - 1];
      legs.push_back({"p" + str(p), {P.c(2 * i), P.c(2 * i - 1)}});
      if (i > 1) legs.push_back({"f" + str(2 * n + 2 - i), {P.c(2 * i - 1), P.c(2 * i - 2)}});
      else legs.push_back({"f" + str(2 * n + 1), {P.c(1), "y"}});
    }
    Schedule sched = build_schedule(inst, legs);
    const double value = evaluate(inst, sched).time;
    g.certificate = Certificate{std::move(sched), Objective::time, value};
  }
  return g;
}

namespace {

template <class T>
const T& choose(std::mt19937_64& rng, const std::vector<T>& items) {
  std::uniform_int_distribution<std::size_t> d(0, items.size() - 1);
  return items[d(rng)];
}

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

}  // namespace

Instance gen_random(const RandomParams& params, std::uint64_t seed) {
  const int n = params.n, k = params.k;
  if (n < 2 || k < 1) throw std::invalid_argument("random instances need n >= 2 and k >= 1");
  if (params.speeds.empty() || params.rates.empty()) throw std::invalid_argument("empty speed or rate choices");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  std::vector<std::pair<int, int>> edges;
  std::set<std::pair<int, int>> present;
  auto add_edge = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    if (present.insert(key).second) edges.emplace_back(key.first, key.second);
  };
  for (int v = 1; v < n; ++v) add_edge(params.family == Family::path ? v - 1 : uniform(rng, 0, v - 1), v);
  if (params.family == Family::general)
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (!present.count({a, b}) && coin(rng) < params.extra_edge_prob) add_edge(a, b);

  InstanceData data;
  for (int v = 0; v < n; ++v) data.nodes.push_back("n" + str(v));
  for (auto [a, b] : edges) data.edges.push_back({"n" + str(a), "n" + str(b), double(uniform(rng, 1, params.max_length))});
  data.source = "n0";
  data.target = "n" + str(uniform(rng, 1, n - 1));
  data.handover = params.handover;

  std::vector<std::vector<int>> adj(n);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    adj[edges[e].first].push_back(static_cast<int>(e));
    adj[edges[e].second].push_back(static_cast<int>(e));
  }
  std::vector<std::vector<char>> has_node(k, std::vector<char>(n, 0));
  std::vector<std::vector<char>> has_edge(k, std::vector<char>(edges.size(), 0));
  const int target = std::max(2, static_cast<int>(std::lround(params.density * n)));
  for (int a = 0; a < k; ++a) {
    int count = 1;
    has_node[a][uniform(rng, 0, n - 1)] = 1;
    while (count < target) {
      std::vector<int> frontier;
      for (std::size_t e = 0; e < edges.size(); ++e)
        if (has_node[a][edges[e].first] != has_node[a][edges[e].second]) frontier.push_back(static_cast<int>(e));
      if (frontier.empty()) break;
      const int e = choose(rng, frontier);
      has_edge[a][e] = 1;
      has_node[a][edges[e].first] = has_node[a][edges[e].second] = 1;
      ++count;
    }
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (!has_edge[a][e] && has_node[a][edges[e].first] && has_node[a][edges[e].second] && coin(rng) < 0.5)
        has_edge[a][e] = 1;
  }
  // coverage repair: grow some agent touching each uncovered edge
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      bool covered = false;
      for (int a = 0; a < k; ++a) covered = covered || has_edge[a][e];
      if (covered) continue;
      std::vector<int> touching;
      for (int a = 0; a < k; ++a)
        if (has_node[a][edges[e].first] || has_node[a][edges[e].second]) touching.push_back(a);
      if (touching.empty()) continue;
      const int a = choose(rng, touching);
      has_edge[a][e] = 1;
      has_node[a][edges[e].first] = has_node[a][edges[e].second] = 1;
      changed = true;
    }
  }

  const double shared_speed = choose(rng, params.speeds);
  const double shared_rate = choose(rng, params.rates);
  for (int a = 0; a < k; ++a) {
    InstanceData::AgentSpec spec;
    spec.id = "a" + str(a);
    std::vector<int> mine;
    for (int v = 0; v < n; ++v)
      if (has_node[a][v]) mine.push_back(v);
    spec.position = "n" + str(choose(rng, mine));
    spec.speed = params.equal_speeds ? shared_speed : choose(rng, params.speeds);
    spec.rate = params.equal_rates ? shared_rate : choose(rng, params.rates);
    for (int v : mine) spec.nodes.push_back("n" + str(v));
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (has_edge[a][e]) spec.edges.emplace_back("n" + str(edges[e].first), "n" + str(edges[e].second));
    data.agents.push_back(std::move(spec));
  }
  return Instance::build(data);
}

Instance gen_single_edge(int k, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("need at least one agent");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> len_d(1.0, 4.0), reach_d(0.0, 4.0), speed_d(1.0, 4.0);
  InstanceData data;
  data.nodes = {"u", "v"};
  const double len = len_d(rng);
  data.edges.push_back({"u", "v", len});
  for (int a = 0; a < k; ++a) {
    const std::string home = "h" + str(a);
    const double alpha = reach_d(rng);
    const double beta = std::max(reach_d(rng), len - alpha);
    data.nodes.push_back(home);
    data.edges.push_back({home, "u", alpha});
    data.edges.push_back({home, "v", beta});
    InstanceData::AgentSpec spec;
    spec.id = "a" + str(a);
    spec.position = home;
    spec.speed = speed_d(rng);
    spec.nodes = {"u", "v", home};
    spec.edges = {{"u", "v"}, {home, "u"}, {home, "v"}};
    data.agents.push_back(std::move(spec));
  }
  data.source = "u";
  data.target = "v";
  data.handover = HandoverMode::edge;
  return Instance::build(data);
}

}  // namespace rdd::gen
