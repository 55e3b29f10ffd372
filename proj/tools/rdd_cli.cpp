// rdd: command-line front end for the delivery solvers, oracles and generators.

#include <chrono>
#include <cstdlib>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rdd/ddc.hpp"
#include "rdd/ddt.hpp"
#include "rdd/gen.hpp"
#include "rdd/io.hpp"
#include "rdd/oracle.hpp"
#include "rdd/special.hpp"

using namespace rdd;
using io::Json;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("DD_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw UsageError("DD_SEED is not an unsigned integer: " + std::string(env));
    }
  }
  return 1;
}

Json num(double x) { return io::report_number(x); }

std::string sibling_schedule(const std::string& path) {
  const std::string ext = ".json";
  if (path.size() > ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0)
    return path.substr(0, path.size() - ext.size()) + ".schedule.json";
  return path + ".schedule.json";
}

std::string sibling_instance(const std::string& path) {
  const std::string ext = ".json";
  if (path.size() > ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0)
    return path.substr(0, path.size() - ext.size()) + ".instance.json";
  return path + ".instance.json";
}

HandoverMode parse_handover(const std::string& s) { return s == "edge" ? HandoverMode::edge : HandoverMode::node; }

struct Loaded {
  Instance inst;
  std::string override_from;  // empty unless --handover changed the mode
};

Loaded load(const std::string& path, const std::string& handover) {
  Instance inst = load_instance(io::read_file(path));
  Loaded out{inst, ""};
  if (!handover.empty() && parse_handover(handover) != inst.handover()) {
    out.override_from = std::string(to_string(inst.handover()));
    out.inst = inst.with_handover(parse_handover(handover));
  }
  return out;
}

void print(const Json& doc) { std::cout << doc.dump(2) << "\n"; }

Json header(const std::string& command, const Loaded& in) {
  Json r;
  r["command"] = command;
  r["instance_digest"] = io::instance_digest(in.inst);
  r["handover"] = to_string(in.inst.handover());
  if (!in.override_from.empty()) r["handover_override"] = {{"from", in.override_from}, {"to", to_string(in.inst.handover())}};
  return r;
}

std::vector<long long> parse_integers(const std::string& text) {
  std::vector<long long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoll(item));
    } catch (const std::exception&) {
      throw UsageError("not an integer: '" + item + "'");
    }
  }
  return out;
}

// {"1,1,1", "1,2,2"} -> triples
std::vector<std::array<int, 3>> parse_triples(const std::vector<std::string>& items) {
  std::vector<std::array<int, 3>> out;
  for (const std::string& item : items) {
    const auto v = parse_integers(item);
    if (v.size() != 3) throw UsageError("triple needs three indices: '" + item + "'");
    out.push_back({static_cast<int>(v[0]), static_cast<int>(v[1]), static_cast<int>(v[2])});
  }
  return out;
}

// solve ---------------------------------------------------------------

struct SolveArgs {
  std::string problem, mode = "single", in, out, handover, solver = "general";
};

int run_solve(const SolveArgs& a, const std::string& command) {
  const Loaded in = load(a.in, a.handover);
  const Instance& inst = in.inst;
  const Objective obj = a.problem == "ddt" ? Objective::time : Objective::energy;
  const auto t0 = std::chrono::steady_clock::now();
  Json r = header(command, in);
  r["problem"] = a.problem;
  r["objective"] = to_string(obj);
  r["mode"] = a.mode;
  r["solver"] = a.solver;

  Schedule out;
  const Instance* target = &inst;
  std::optional<special::FreeResult> free;
  if (a.solver == "free") {
    free = special::solve_free_positions(inst, obj);
    out = free->schedule;
    target = &free->instance;
    Json pos = Json::object();
    for (std::size_t i = 0; i < inst.agent_count(); ++i)
      pos[inst.agent(static_cast<AgentId>(i)).id] = inst.node_name(free->positions[i]);
    r["positions"] = pos;
    r["value"] = num(free->value);
  } else if (a.solver == "tree") {
    if (a.problem != "ddt") throw UsageError("--solver tree is for --problem ddt");
    const auto tree = special::solve_tree_ddt(inst);
    out = tree.schedule;
    r["single_time"] = num(tree.time);
    r["merges"] = tree.merges;
    r["value"] = num(tree.time);
  } else if (a.problem == "ddt") {
    const auto multi = ddt::solve_multi(inst);
    r["multi_time"] = num(multi.time);
    r["ratio_bound"] = num(ddt::ratio_bound(inst, inst.handover()));
    if (a.mode == "multi") {
      out = multi.schedule;
      r["value"] = num(multi.time);
    } else {
      const Compaction c = a.solver == "isometric" ? special::compact_isometric(inst, multi.schedule, obj)
                                                   : ddt::compact(inst, multi.schedule);
      out = c.schedule;
      const double single = evaluate(inst, out).time;
      r["single_time"] = num(single);
      r["merges"] = c.merges;
      r["ratio"] = num(multi.time > 0 ? single / multi.time : 1.0);
      r["value"] = num(single);
    }
  } else {
    const auto multi = ddc::solve_multi(inst);
    r["multi_energy"] = num(multi.energy);
    r["ratio_bound"] = 2;
    if (a.mode == "multi") {
      out = multi.schedule;
      r["value"] = num(multi.energy);
    } else {
      const Compaction c = a.solver == "isometric" ? special::compact_isometric(inst, multi.schedule, obj)
                                                   : ddc::compact(inst, multi.schedule);
      out = c.schedule;
      const double single = evaluate(inst, out).energy;
      r["single_energy"] = num(single);
      r["merges"] = c.merges;
      r["ratio"] = num(multi.energy > 0 ? single / multi.energy : 1.0);
      r["value"] = num(single);
    }
  }
  r["evaluation"] = io::evaluation_to_json(evaluate(*target, out));
  r["wall_time_s"] = num(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());

  if (!a.out.empty()) {
    io::write_file(a.out, io::schedule_to_json(*target, out).dump(2) + "\n");
    r["schedule_file"] = a.out;
    if (free) {
      const std::string placed = sibling_instance(a.out);
      io::write_file(placed, io::instance_to_json(free->instance).dump(2) + "\n");
      r["instance_file"] = placed;
    }
  } else {
    r["schedule"] = io::schedule_to_json(*target, out);
  }
  print(r);
  return kOk;
}

// validate ------------------------------------------------------------

int run_validate(const std::string& in_path, const std::string& sched_path, const std::string& copy,
                 const std::string& handover, const std::string& command) {
  const Loaded in = load(in_path, handover);
  const Schedule sched = io::parse_schedule(in.inst, io::read_file(sched_path));
  const FeasibilityReport report = check_feasible(in.inst, sched, copy == "multi" ? CopyMode::multi : CopyMode::single);
  Json r = header(command, in);
  r["copy_mode"] = copy;
  r["feasible"] = report.feasible();
  r["violations"] = io::report_to_json(report)["violations"];
  if (report.feasible()) r["evaluation"] = io::evaluation_to_json(evaluate(in.inst, sched));
  print(r);
  return report.feasible() ? kOk : kInvalid;
}

// oracle --------------------------------------------------------------

struct OracleArgs {
  std::string problem, in, out, handover, copy = "single";
  bool guard_override = false;
  int subdivide = 0;
};

int run_oracle(const OracleArgs& a, const std::string& command) {
  const Loaded in = load(a.in, a.handover);
  const Objective obj = a.problem == "ddt" ? Objective::time : Objective::energy;
  const auto t0 = std::chrono::steady_clock::now();
  oracle::OracleResult res;
  std::string kind;
  if (a.subdivide > 0) {
    kind = "edge_handover_subdivision";
    res = oracle::edge_handover_subdivision(in.inst, a.subdivide, obj,
                                            a.guard_override ? std::size_t(1) << 24 : std::size_t(200000));
  } else if (a.copy == "multi") {
    kind = "exact_multi_copy_paths";
    res = oracle::exact_multi_copy_paths(in.inst, obj, 12, a.guard_override);
  } else {
    kind = "exact_single_copy";
    oracle::Guard g;
    g.override_guard = a.guard_override;
    res = oracle::exact_single_copy(in.inst, obj, g);
  }
  Json r = header(command, in);
  r["problem"] = a.problem;
  r["objective"] = to_string(obj);
  r["oracle"] = kind;
  r["value"] = num(res.value);
  r["stats"] = {{"explored", res.stats.explored}, {"expanded", res.stats.expanded}, {"pruned", res.stats.pruned}};
  r["wall_time_s"] = num(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  const Instance& witness_inst = res.refined ? *res.refined : in.inst;
  if (!a.out.empty()) {
    io::write_file(a.out, io::schedule_to_json(witness_inst, res.witness).dump(2) + "\n");
    r["schedule_file"] = a.out;
    if (res.refined) {
      const std::string refined = sibling_instance(a.out);
      io::write_file(refined, io::instance_to_json(*res.refined).dump(2) + "\n");
      r["instance_file"] = refined;
    }
  }
  print(r);
  return kOk;
}

// gen -----------------------------------------------------------------

struct GenArgs {
  std::string out, x;
  std::vector<std::string> triples;
  std::uint64_t seed = 0;
  int n = 2, m = 3, q = 1, k = 3, max_length = 9;
  double M = 1.0, eps = 0.0, C = 3.0, density = 0.6, extra = 0.3;
  std::string family = "general", handover = "node";
  bool equal_speeds = false, equal_rates = false;
};

int write_gadget(const std::string& kind, const GenArgs& a, const Instance& inst,
                 const std::optional<gen::Certificate>& cert, Json extra, const std::string& command) {
  io::write_file(a.out, io::instance_to_json(inst).dump(2) + "\n");
  Json r;
  r["command"] = command;
  r["generator"] = kind;
  r["seed"] = a.seed;
  r["instance_file"] = a.out;
  r["instance_digest"] = io::instance_digest(inst);
  r["nodes"] = inst.node_count();
  r["edges"] = inst.edge_count();
  r["agents"] = inst.agent_count();
  for (auto it = extra.begin(); it != extra.end(); ++it) r[it.key()] = it.value();
  if (cert) {
    const std::string path = sibling_schedule(a.out);
    io::write_file(path, io::schedule_to_json(inst, cert->schedule).dump(2) + "\n");
    r["certificate"] = {{"schedule_file", path}, {"objective", to_string(cert->objective)}, {"value", num(cert->value)}};
  }
  print(r);
  return kOk;
}

gen::ThreeDM three_dm(const GenArgs& a) {
  gen::ThreeDM d;
  if (!a.triples.empty()) {
    d.triples = parse_triples(a.triples);
    d.n = a.n;
  } else {
    d = gen::random_3dm(a.n, a.m, a.seed);
  }
  try {
    gen::validate(d);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (d.n <= 4) d.matching = gen::find_matching(d);
  return d;
}

Json triples_json(const gen::ThreeDM& d) {
  Json t = Json::array();
  for (const auto& tr : d.triples) t.push_back({tr[0], tr[1], tr[2]});
  Json r{{"n", d.n}, {"triples", t}};
  r["matching"] = d.matching ? Json(*d.matching) : Json(nullptr);
  return r;
}

int run_gen(const std::string& kind, const GenArgs& a, const std::string& command) {
  try {
    if (kind == "3dm-ddt") {
      const auto d = three_dm(a);
      const auto g = gen::gen_3dm_ddt(d, a.q, a.M, a.eps);
      return write_gadget(kind, a, g.instance, g.certificate, {{"3dm", triples_json(d)}, {"q", a.q}, {"M", num(a.M)}},
                          command);
    }
    if (kind == "3dm-ddc") {
      const auto d = three_dm(a);
      const auto g = gen::gen_3dm_ddc(d, a.eps);
      return write_gadget(kind, a, g.instance, g.certificate, {{"3dm", triples_json(d)}}, command);
    }
    if (kind == "eop") {
      gen::EopInput e;
      e.x = parse_integers(a.x);
      gen::validate(e);
      if (e.x.size() / 2 <= 20) e.left = gen::find_partition(e);
      const auto g = gen::gen_eop(e, a.C);
      Json extra{{"C", num(g.C)}, {"L", num(g.L)}, {"S", num(g.S)}, {"S_paper", num(g.S_paper)}, {"T", num(g.T)}};
      Json speeds = Json::array();
      for (double v : g.p_speeds) speeds.push_back(num(v));
      extra["p_speeds"] = speeds;
      extra["partition"] = e.left ? Json(*e.left) : Json(nullptr);
      return write_gadget(kind, a, g.instance, g.certificate, extra, command);
    }
    gen::RandomParams p;
    p.n = a.n;
    p.k = a.k;
    p.family = a.family == "path" ? gen::Family::path : a.family == "tree" ? gen::Family::tree : gen::Family::general;
    p.density = a.density;
    p.extra_edge_prob = a.extra;
    p.equal_speeds = a.equal_speeds;
    p.equal_rates = a.equal_rates;
    p.max_length = a.max_length;
    p.handover = parse_handover(a.handover);
    return write_gadget(kind, a, gen::gen_random(p, a.seed), std::nullopt, {{"family", a.family}}, command);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// compare -------------------------------------------------------------

Json compare_objective(const Instance& inst, Objective obj, bool guard_override) {
  Json r;
  double multi = 0.0, single = 0.0;
  if (obj == Objective::time) {
    const auto m = ddt::solve_multi(inst);
    multi = m.time;
    single = evaluate(inst, ddt::compact(inst, m.schedule).schedule).time;
    r["ratio_bound"] = num(ddt::ratio_bound(inst, inst.handover()));
  } else {
    const auto m = ddc::solve_multi(inst);
    multi = m.energy;
    single = evaluate(inst, ddc::compact(inst, m.schedule).schedule).energy;
    r["ratio_bound"] = 2;
  }
  r["multi"] = num(multi);
  r["single"] = num(single);
  r["ratio"] = num(multi > 0 ? single / multi : 1.0);
  const bool node = inst.handover() == HandoverMode::node;
  try {
    if (node || obj == Objective::energy) {
      oracle::Guard g;
      g.override_guard = guard_override;
      r["oracle_single"] = num(oracle::exact_single_copy(inst, obj, g).value);
    } else {
      r["oracle_single"] = nullptr;
    }
  } catch (const PreconditionError& e) {
    r["oracle_single"] = nullptr;
    r["oracle_single_skipped"] = e.what();
  }
  try {
    if (node)
      r["oracle_multi"] = num(oracle::exact_multi_copy_paths(inst, obj, 12, guard_override).value);
    else
      r["oracle_multi"] = num(oracle::edge_handover_subdivision(inst, 1000, obj).value);
  } catch (const PreconditionError& e) {
    r["oracle_multi"] = nullptr;
    r["oracle_multi_skipped"] = e.what();
  }
  return r;
}

int run_compare(const std::string& in_path, const std::string& problem, const std::string& handover, bool guard_override,
                const std::string& command) {
  const Loaded in = load(in_path, handover);
  const auto t0 = std::chrono::steady_clock::now();
  Json r = header(command, in);
  r["nodes"] = in.inst.node_count();
  r["agents"] = in.inst.agent_count();
  precompute_distances(in.inst, Execution::parallel);
  // sub-solvers share only the immutable instance
  std::future<Json> time, energy;
  if (problem != "ddc")
    time = std::async(std::launch::async, compare_objective, std::cref(in.inst), Objective::time, guard_override);
  if (problem != "ddt")
    energy = std::async(std::launch::async, compare_objective, std::cref(in.inst), Objective::energy, guard_override);
  if (time.valid()) r["ddt"] = time.get();
  if (energy.valid()) r["ddc"] = energy.get();
  r["wall_time_s"] = num(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  print(r);
  return kOk;
}

std::string echo(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delivery with handovers: solvers, exact oracles and reduction gadgets"};
  app.require_subcommand(1);
  const std::vector<std::string> problems{"ddt", "ddc"};
  const std::vector<std::string> handovers{"node", "edge"};

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "solve an instance file");
  s->add_option("--problem", solve.problem, "ddt (delivery time) or ddc (energy)")->required()->check(CLI::IsMember(problems));
  s->add_option("--mode", solve.mode, "multi or single copy")->check(CLI::IsMember({"multi", "single"}));
  s->add_option("--in", solve.in, "instance JSON")->required();
  s->add_option("--out", solve.out, "write the schedule here");
  s->add_option("--handover", solve.handover, "override the instance handover mode")->check(CLI::IsMember(handovers));
  s->add_option("--solver", solve.solver, "general, tree, isometric or free")
      ->check(CLI::IsMember({"general", "tree", "isometric", "free"}));

  std::string v_in, v_sched, v_copy = "single", v_handover;
  auto* v = app.add_subcommand("validate", "check a schedule against an instance");
  v->add_option("--in", v_in, "instance JSON")->required();
  v->add_option("--schedule", v_sched, "schedule JSON")->required();
  v->add_option("--copy-mode", v_copy)->check(CLI::IsMember({"multi", "single"}));
  v->add_option("--handover", v_handover)->check(CLI::IsMember(handovers));

  OracleArgs orc;
  auto* o = app.add_subcommand("oracle", "exact brute-force solvers for small instances");
  o->add_option("--problem", orc.problem)->required()->check(CLI::IsMember(problems));
  o->add_option("--in", orc.in)->required();
  o->add_option("--out", orc.out, "write the witness schedule here");
  o->add_option("--copy-mode", orc.copy)->check(CLI::IsMember({"multi", "single"}));
  o->add_option("--subdivide", orc.subdivide, "split shared edges into Q parts and solve multi-copy")
      ->check(CLI::PositiveNumber);
  o->add_option("--handover", orc.handover)->check(CLI::IsMember(handovers));
  o->add_flag("--guard-override", orc.guard_override, "allow instances beyond the default size guards");

  GenArgs g;
  auto* gen = app.add_subcommand("gen", "write a generated instance (and certificate when one exists)");
  std::string gen_kind;
  gen->add_option("kind", gen_kind, "3dm-ddt, 3dm-ddc, eop or random")
      ->required()
      ->check(CLI::IsMember({"3dm-ddt", "3dm-ddc", "eop", "random"}));
  gen->add_option("--out", g.out)->required();
  auto* seed_opt = gen->add_option("--seed", g.seed, "defaults to $DD_SEED, else 1");
  gen->add_option("--n", g.n, "3DM size or random node count")->check(CLI::PositiveNumber);
  gen->add_option("--m", g.m, "random 3DM triple count")->check(CLI::PositiveNumber);
  gen->add_option("--triples", g.triples, "explicit triples, e.g. 1,1,1 1,2,2");
  gen->add_option("--q", g.q, "gadget copies")->check(CLI::PositiveNumber);
  gen->add_option("--M", g.M, "outer edge length (3dm-ddt)");
  gen->add_option("--eps", g.eps, "inner edge length");
  gen->add_option("--x", g.x, "EOP integers, comma separated");
  gen->add_option("--C", g.C, "EOP constant");
  gen->add_option("--k", g.k, "random agent count")->check(CLI::PositiveNumber);
  gen->add_option("--family", g.family)->check(CLI::IsMember({"path", "tree", "general"}));
  gen->add_option("--density", g.density)->check(CLI::Range(0.0, 1.0));
  gen->add_option("--extra-edge-prob", g.extra)->check(CLI::Range(0.0, 1.0));
  gen->add_option("--max-length", g.max_length)->check(CLI::PositiveNumber);
  gen->add_option("--handover", g.handover)->check(CLI::IsMember(handovers));
  gen->add_flag("--equal-speeds", g.equal_speeds);
  gen->add_flag("--equal-rates", g.equal_rates);

  std::string c_in, c_problem = "both", c_handover;
  bool c_override = false;
  auto* c = app.add_subcommand("compare", "multi, compacted single and oracle values side by side");
  c->add_option("--in", c_in)->required();
  c->add_option("--problem", c_problem)->check(CLI::IsMember({"ddt", "ddc", "both"}));
  c->add_option("--handover", c_handover)->check(CLI::IsMember(handovers));
  c->add_flag("--guard-override", c_override);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  const std::string command = echo(argc, argv);
  try {
    if (*s) return run_solve(solve, command);
    if (*v) return run_validate(v_in, v_sched, v_copy, v_handover, command);
    if (*o) return run_oracle(orc, command);
    if (*gen) {
      if (seed_opt->count() == 0) g.seed = default_seed();
      return run_gen(gen_kind, g, command);
    }
    if (*c) return run_compare(c_in, c_problem, c_handover, c_override, command);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const PreconditionError& e) {
    std::cerr << "not applicable: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kUsage;
}
