// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails. Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "mcir/bound.hpp"
#include "mcir/objective.hpp"
#include "mcir/optimize.hpp"
#include "mcir/problems.hpp"
#include "mcir/relu_net.hpp"
#include "mcir/tree.hpp"
#include "oracles.hpp"

using namespace mcir;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Verdict {
  bool pass;
  std::string detail;
};

Verdict interval_soundness() {
  const auto start = Clock::now();
  Rng rng(20240601);
  std::size_t triples = 0, violations = 0, expressions = 0;
  std::string first;
  while (triples < 10000) {
    const std::size_t n = 1 + expressions % 4;
    ++expressions;
    Objective f(Expression(oracle::random_rough_expr(rng, n, 1 + static_cast<int>(expressions % 5)), n));
    const BoxDomain box = oracle::random_box(rng, n, 4.0);
    const Interval r = f.bound(box);
    const double lb = f.lower_bound(box);
    for (int k = 0; k < 4 && triples < 10000; ++k) {
      const std::vector<double> x = sample_uniform(box, rng);
      const double y = f.value(x);
      if (std::isnan(y)) continue;
      ++triples;
      if (!(r.lo <= y && y <= r.hi && lb <= std::max(y, -kBoundClamp))) {
        if (violations++ == 0) first = unparse(f.expression());
      }
    }
  }
  const double t = seconds_since(start);
  std::ostringstream d;
  d << triples << " triples from " << expressions << " expressions, " << violations << " violations, "
    << t << " s";
  if (violations) d << ", first: " << first;
  return {violations == 0 && t < 30.0, d.str()};
}

Verdict differentiation() {
  const auto start = Clock::now();
  Rng rng(777);
  std::size_t grad_bad = 0, hess_bad = 0, components = 0;
  double worst_g = 0, worst_h = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 1 + i % 4;
    const Expression e(oracle::random_smooth_expr(rng, n, 2 + i % 4), n);
    Objective f(e);
    Objective probe(e);
    const oracle::ScalarFn fn = [&](std::span<const double> x) { return probe.value(x); };
    std::vector<double> x(n), g(n), h(n);
    for (double& v : x) v = oracle::uniform(rng, -2.0, 2.0);
    f.gradient(x, g);
    f.hessian_diagonal(x, h);
    for (std::size_t d = 0; d < n; ++d) {
      ++components;
      const double eg = std::fabs(g[d] - oracle::central_first(fn, x, d)) / std::max(1.0, std::fabs(g[d]));
      const double eh = std::fabs(h[d] - oracle::central_second(fn, x, d)) / std::max(1.0, std::fabs(h[d]));
      worst_g = std::max(worst_g, eg);
      worst_h = std::max(worst_h, eh);
      grad_bad += !(eg < 1e-5);
      hess_bad += !(eh < 1e-4);
    }
  }
  const double t = seconds_since(start);
  std::ostringstream d;
  d << "1000 pairs, " << components << " components; gradient max rel err " << worst_g << " (" << grad_bad
    << " over 1e-5), Hessian diag max rel err " << worst_h << " (" << hess_bad << " over 1e-4), " << t << " s";
  return {grad_bad == 0 && hess_bad == 0 && t < 30.0, d.str()};
}

Verdict partition_oracle() {
  Rng rng(31337);
  std::size_t misplaced = 0, volume_bad = 0;
  double worst_volume = 0;
  for (int b = 0; b < 200; ++b) {
    const std::size_t n = 1 + b % 5;
    const std::size_t k = 1 + static_cast<std::size_t>(b * 7919) % 32;
    const BoxDomain box = oracle::random_box(rng, n, 10.0);
    const auto pieces = partition(box, k);
    double sum = 0;
    for (const auto& p : pieces) sum += std::exp(log_volume(p));
    const double rel = std::fabs(sum / std::exp(log_volume(box)) - 1.0);
    worst_volume = std::max(worst_volume, rel);
    volume_bad += !(rel < 1e-9) || pieces.size() != k;
    for (int i = 0; i < 10000; ++i) {
      misplaced += oracle::owning_piece(pieces, box, sample_uniform(box, rng)) < 0;
    }
  }
  std::ostringstream d;
  d << "200 boxes x 1e4 points: " << misplaced << " points without exactly one owner; volume max rel err "
    << worst_volume;
  return {misplaced == 0 && volume_bad == 0, d.str()};
}

Verdict backup_invariants() {
  const BenchmarkProblem p = make_ackley(5);
  SearchConfig c;
  c.step_budget = 200;
  c.seed = 1;
  std::size_t violations = 0, scans = 0;
  std::string first;
  optimize(p.function, p.domain, c, [&](const SearchTree& tree, const TraceRecord& rec) {
    ++scans;
    for (const std::string& v : oracle::tree_violations(tree)) {
      if (violations++ == 0) first = "step " + std::to_string(rec.step) + " " + v;
    }
  });
  std::ostringstream d;
  d << scans << " full-tree scans, " << violations << " violations";
  if (violations) d << ", first: " << first;
  return {violations == 0 && scans == 200, d.str()};
}

Verdict uct_vectors() {
  const UctWeights w{50, 0.5, 0.5};
  auto node = [](double y, double lb, double v) {
    TreeNode n;
    n.y = y;
    n.lb = lb;
    n.log_volume = v;
    n.visits = 1;
    return n;
  };
  const double e = std::numbers::e;
  const bool a = uct_value(node(0, -1, 0), 1, w) == 50.0;
  const bool b = uct_value(node(0, -2, 0), 1, w) > uct_value(node(0, -1, 0), 1, w);
  const bool c = uct_value(node(-3, -10, 2.0), e, w) == 502.5;
  const bool d = classical_uct(1, 1, 1, 1) == 1.0;
  const bool f = classical_uct(0, 1, e * e, 1) == 2.0;
  const bool g = classical_uct(4, 2, 2, 0) == 2.0;
  std::ostringstream s;
  s << "modified " << a << b << c << ", classical " << d << f << g;
  return {a && b && c && d && f && g, s.str()};
}

Verdict learn_newton() {
  const std::size_t n = 5;
  const Expression q = parse("(x0-1)^2 + (x1-1)^2 + (x2-1)^2 + (x3-1)^2 + (x4-1)^2", n);
  std::size_t trials = 0, misses = 0;
  double worst_ratio = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Objective f(q);
    SearchConfig c;
    c.local_opt_budget = 0;
    c.step_budget = 1;
    SearchTree tree(f, BoxDomain::cube(n, -2, 2), c);
    Rng rng(seed);
    const auto kids = tree.expand(tree.root_id(), rng);
    for (NodeId k : kids) {
      const NodeId one[] = {k};
      const auto learned = tree.learn(one, rng);
      ++trials;
      if (!learned) {
        ++misses;
        continue;
      }
      const double delta = c.delta_fraction * tree.box_of(k).min_width();
      double dist = 0;
      for (double v : tree.node(*learned).x) dist = std::max(dist, std::fabs(v - 1.0));
      worst_ratio = std::max(worst_ratio, dist / delta);
      misses += !(dist <= 10 * delta);
    }
  }
  std::ostringstream d;
  d << trials << " LEARN steps from single children, worst |x* - 1|_inf / delta = " << worst_ratio << ", "
    << misses << " outside 10 delta";
  return {misses == 0, d.str()};
}

Verdict completeness() {
  const Expression f = parse("min((x0 + 0.5)^2, (x0 - 0.5)^2 + 0.001)", 1);
  std::size_t both = 0;
  std::ostringstream d;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SearchConfig c;
    c.step_budget = 500;
    c.seed = seed;
    bool left = false, right = false;
    std::uint64_t when = 0;
    optimize(f, BoxDomain::cube(1, -1, 1), c, [&](const SearchTree& tree, const TraceRecord& rec) {
      if (left && right) return;
      tree.for_each_node([&](const TreeNode& n) {
        if (!n.x.empty()) (n.x[0] < 0.0 ? left : right) = true;
      });
      if (left && right) when = rec.step;
    });
    both += left && right;
    d << (seed > 1 ? ", " : "") << "seed " << seed << (left && right ? " both by step " + std::to_string(when) : " one basin");
  }
  return {both == 5, d.str()};
}

struct DeskRun {
  std::string name;
  std::size_t dims;
  double seconds;
  double target;     // early stop once reached
  double threshold;  // success test
  bool strict;       // y < threshold, otherwise y <= threshold
  std::size_t needed;
};

Verdict desk_scale() {
  const DeskRun runs[] = {
      {"ackley", 10, 60, 1e-3, 0.01, true, 4},
      {"levy", 10, 60, 1e-3, 0.1, true, 4},
      {"michalewicz", 10, 120, -8.0, -8.0, false, 3},
  };
  bool pass = true;
  std::ostringstream d;
  for (const DeskRun& r : runs) {
    const BenchmarkProblem p = make_problem(r.name, r.dims);
    std::size_t ok = 0;
    d << (r.name == "ackley" ? "" : "; ") << r.name << "-" << r.dims << "d:";
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      SearchConfig c;
      c.step_budget.reset();
      c.wall_clock_budget_ms = r.seconds * 1000.0;
      c.target_value = r.target;
      c.seed = seed;
      const SearchResult res = optimize(p.function, p.domain, c);
      const bool hit = r.strict ? res.best_y < r.threshold : res.best_y <= r.threshold;
      ok += hit;
      char buf[96];
      std::snprintf(buf, sizeof buf, " %.4g@%.1fs", res.best_y, res.trace.empty() ? 0.0 : res.trace.back().wall_ms / 1000.0);
      d << buf;
    }
    d << " (" << ok << "/5, need " << r.needed << ")";
    pass = pass && ok >= r.needed;
  }
  return {pass, d.str()};
}

Verdict relu_pathway() {
  Rng rng(4242);
  ReluNetWeights w;
  w.inputs = 10;
  w.hidden = 16;
  for (std::size_t j = 0; j < w.hidden; ++j) {
    std::vector<double> row(w.inputs);
    for (double& v : row) v = oracle::uniform(rng, -1, 1);
    w.W1.push_back(row);
    w.b1.push_back(oracle::uniform(rng, -0.5, 0.5));
    w.w2.push_back(oracle::uniform(rng, -1, 1));
  }
  w.b2 = oracle::uniform(rng, -0.5, 0.5);

  const auto path = std::filesystem::temp_directory_path() / "mcir_acceptance_relu.json";
  std::ofstream(path) << to_json(w).dump();
  std::ifstream in(path);
  const ReluNetWeights loaded = relu_net_from_json(nlohmann::json::parse(in));
  const Expression f = relu_net_to_expression(loaded);

  Objective obj(f);
  std::size_t mismatches = 0;
  for (int i = 0; i < 100; ++i) {
    const auto x = sample_uniform(BoxDomain::cube(10, -1, 1), rng);
    mismatches += obj.value(x) != forward(w, x);
  }

  SearchConfig c;
  c.step_budget = 300;
  c.seed = 1;
  const SearchResult r = optimize(f, BoxDomain::cube(10, -1, 1), c);
  const LearnStats& s = r.learn;
  std::ostringstream d;
  d << mismatches << " forward-pass mismatches in 100 points; " << r.steps << " steps, LEARN invocations "
    << s.invocations << ", gradient-only " << s.gradient_only << ", Newton dims " << s.newton_dims
    << ", skipped " << s.skipped << ", best " << r.best_y;
  return {mismatches == 0 && r.steps == 300 && s.invocations > 0 && s.gradient_only == s.invocations &&
              s.newton_dims == 0,
          d.str()};
}

Verdict determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "mcir_acceptance_det";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "config.json") << R"({"seed": 7, "step_budget": 300, "record_wall_clock": false})";
  auto run = [&](const std::string& out) {
    std::ostringstream sink;
    return cli::run({"mcir", "optimize", "--fn", "michalewicz", "--dims", "5", "--config",
                     (dir / "config.json").string(), "--out", (dir / out).string()},
                    sink, sink);
  };
  const int a = run("a");
  const int b = run("b");
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  const std::string ta = slurp(dir / "a" / "michalewicz-5d_seed7.csv");
  const std::string tb = slurp(dir / "b" / "michalewicz-5d_seed7.csv");
  std::ostringstream d;
  d << "exit codes " << a << "/" << b << ", trace sizes " << ta.size() << "/" << tb.size() << " bytes, "
    << (ta == tb ? "identical" : "different");
  return {a == 0 && b == 0 && !ta.empty() && ta == tb, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const std::pair<const char*, std::function<Verdict()>> criteria[] = {
      {"interval soundness fuzz", interval_soundness},
      {"differentiation vs finite differences", differentiation},
      {"partition membership oracle", partition_oracle},
      {"backup and structure invariants", backup_invariants},
      {"UCT unit vectors", uct_vectors},
      {"LEARN Newton exactness", learn_newton},
      {"completeness proxy", completeness},
      {"desk-scale optimization", desk_scale},
      {"ReLU-net pathway", relu_pathway},
      {"determinism", determinism},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (int i = 0; i < 10; ++i) {
    if (!only.empty() && !only.contains(i + 1)) continue;
    const auto start = Clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                v.detail.c_str(), seconds_since(start));
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
