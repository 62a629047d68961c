#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mcir/bound.hpp"
#include "mcir/config.hpp"
#include "mcir/expr_file.hpp"
#include "mcir/objective.hpp"
#include "mcir/optimize.hpp"
#include "mcir/problems.hpp"
#include "mcir/relu_net.hpp"
#include "mcir/suite.hpp"

namespace mcir::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ProblemFlags {
  std::string fn;
  std::size_t dims = 0;
  std::string expr_file;
  std::string nn_weights;
};

struct BudgetFlags {
  std::optional<std::uint64_t> steps;
  std::optional<double> seconds;
  std::optional<std::uint64_t> evals;
  std::optional<std::uint64_t> seed;
  std::string config;
};

void add_problem_flags(CLI::App& cmd, ProblemFlags& p, bool allow_list) {
  cmd.add_option("--fn", p.fn,
                 allow_list ? "Built-in function(s), comma separated: ackley, levy, michalewicz"
                            : "Built-in function: ackley, levy, michalewicz");
  cmd.add_option("--dims", p.dims, "Dimension of the built-in function")->check(CLI::PositiveNumber);
  cmd.add_option("--expr-file", p.expr_file, "Expression file (dims/domain header + formula)");
  cmd.add_option("--nn-weights", p.nn_weights, "ReLU network weights JSON");
}

void add_budget_flags(CLI::App& cmd, BudgetFlags& b) {
  cmd.add_option("--steps", b.steps, "Step budget")->check(CLI::PositiveNumber);
  cmd.add_option("--seconds", b.seconds, "Wall-clock budget in seconds")->check(CLI::PositiveNumber);
  cmd.add_option("--evals", b.evals, "Evaluation budget")->check(CLI::PositiveNumber);
  cmd.add_option("--config", b.config, "SearchConfig JSON file");
}

BoxDomain domain_from_json(const nlohmann::json& j, std::size_t n) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("domain must be [lo,hi] or [[lo,hi],...]");
  if (j[0].is_number()) {
    if (j.size() != 2) throw std::invalid_argument("domain must be [lo,hi]");
    return BoxDomain::cube(n, j[0].get<double>(), j[1].get<double>());
  }
  std::vector<Interval> sides;
  for (const auto& side : j) {
    if (!side.is_array() || side.size() != 2) throw std::invalid_argument("domain entries must be [lo,hi]");
    sides.push_back({side[0].get<double>(), side[1].get<double>()});
  }
  if (sides.size() != n) throw std::invalid_argument("domain must list one interval per input");
  return BoxDomain(std::move(sides));
}

std::vector<BenchmarkProblem> load_problems(const ProblemFlags& p, bool allow_list) {
  const int sources = !p.fn.empty() + !p.expr_file.empty() + !p.nn_weights.empty();
  if (sources != 1) throw UsageError("give exactly one of --fn, --expr-file, --nn-weights");

  std::vector<BenchmarkProblem> problems;
  if (!p.fn.empty()) {
    if (p.dims == 0) throw UsageError("--fn needs --dims");
    std::stringstream names(p.fn);
    std::string name;
    while (std::getline(names, name, ',')) {
      BenchmarkProblem problem = [&] {
        try {
          return make_problem(name, p.dims);
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
      }();
      problem.name += "-" + std::to_string(p.dims) + "d";
      problems.push_back(std::move(problem));
    }
    if (problems.size() > 1 && !allow_list) throw UsageError("--fn takes a single name here");
    return problems;
  }
  if (p.dims != 0) throw UsageError("--dims only applies to --fn");

  if (!p.expr_file.empty()) {
    ProblemFile file = load_problem_file(p.expr_file);
    problems.push_back({std::filesystem::path(p.expr_file).stem().string(), std::move(file.function),
                        std::move(file.domain), std::nullopt, std::nullopt});
    return problems;
  }

  std::ifstream in(p.nn_weights);
  if (!in) throw std::runtime_error("cannot open weights file " + p.nn_weights);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("malformed JSON in " + p.nn_weights + ": " + e.what());
  }
  const ReluNetWeights weights = relu_net_from_json(j);
  BoxDomain domain = j.contains("domain") ? domain_from_json(j.at("domain"), weights.inputs)
                                          : BoxDomain::cube(weights.inputs, -1.0, 1.0);
  problems.push_back({std::filesystem::path(p.nn_weights).stem().string(),
                      relu_net_to_expression(weights), std::move(domain), std::nullopt,
                      std::nullopt});
  return problems;
}

SearchConfig resolve_config(const BudgetFlags& b) {
  SearchConfig config;
  if (!b.config.empty()) config = load_config(b.config);
  if (b.steps || b.seconds || b.evals) {
    config.step_budget = b.steps;
    config.eval_budget = b.evals;
    config.wall_clock_budget_ms.reset();
    if (b.seconds) config.wall_clock_budget_ms = *b.seconds * 1000.0;
  }
  if (b.seed) config.seed = *b.seed;
  config.validate();
  return config;
}

std::string format_point(const std::vector<double>& x, std::size_t limit = 10) {
  std::ostringstream os;
  os.precision(6);
  os << '[';
  for (std::size_t i = 0; i < x.size() && i < limit; ++i) os << (i ? ", " : "") << x[i];
  if (x.size() > limit) os << ", ... (" << x.size() << " total)";
  os << ']';
  return os.str();
}

int cmd_optimize(const ProblemFlags& pf, const BudgetFlags& bf, const std::string& out_dir,
                 std::ostream& out) {
  const std::vector<BenchmarkProblem> problems = load_problems(pf, false);
  const BenchmarkProblem& p = problems.front();
  const SearchConfig config = resolve_config(bf);
  const SearchResult result = optimize(p.function, p.domain, config);

  std::filesystem::create_directories(out_dir);
  const std::filesystem::path base =
      std::filesystem::path(out_dir) / (p.name + "_seed" + std::to_string(config.seed));
  const std::filesystem::path trace_path = base.string() + ".csv";
  write_trace_csv(trace_path, result.trace);
  write_file(base.string() + ".json",
             run_summary(p.name, result, to_json(config, p.dims())).dump(2) + "\n");

  out.precision(17);
  out << "problem=" << p.name << " steps=" << result.steps << " evals=" << result.evaluations
      << " termination=" << to_string(result.termination) << "\n";
  out << "best_y=" << result.best_y << "\n";
  out << "best_x=" << format_point(result.best_x) << "\n";
  out << "trace=" << trace_path.string() << "\n";
  return 0;
}

int cmd_suite(const ProblemFlags& pf, const BudgetFlags& bf, const std::vector<std::uint64_t>& seeds,
              std::size_t jobs, const std::string& out_dir, std::ostream& out) {
  const std::vector<BenchmarkProblem> problems = load_problems(pf, true);
  const SearchConfig config = resolve_config(bf);
  SuiteOptions options;
  options.out_dir = out_dir;
  options.jobs = jobs;
  const SuiteReport report = run_suite(problems, config, seeds, options);
  out.precision(10);
  for (const AggregateCurve& curve : report.curves) {
    out << curve.name << ": seeds=" << curve.seeds.size() << " steps=" << curve.steps.size()
        << " final mean=" << curve.mean.back() << " std=" << curve.std.back() << " -> "
        << (std::filesystem::path(out_dir) / (curve.name + "_aggregate.json")).string() << "\n";
  }
  return 0;
}

int cmd_bound(const ProblemFlags& pf, std::ostream& out) {
  const std::vector<BenchmarkProblem> problems = load_problems(pf, false);
  const BenchmarkProblem& p = problems.front();
  const Interval range = eval_interval(p.function, p.domain);
  out.precision(17);
  out << "lb=" << range.lo << " ub=" << range.hi << "\n";
  return 0;
}

// Central differences against the symbolic derivatives at random points.
int cmd_diff_check(const ProblemFlags& pf, std::size_t points, std::uint64_t seed, std::ostream& out) {
  const std::vector<BenchmarkProblem> problems = load_problems(pf, false);
  const BenchmarkProblem& p = problems.front();
  Objective f(p.function);
  const std::size_t n = f.dims();
  Rng rng(seed);
  std::vector<double> g(n), h(n), x(n), probe(n);
  double worst_g = 0.0;
  double worst_h = 0.0;
  std::size_t checked = 0;
  for (std::size_t k = 0; k < points; ++k) {
    sample_uniform(p.domain, rng, x);
    f.gradient(x, g);
    f.hessian_diagonal(x, h);
    const double fx = f.value(x);
    for (std::size_t d = 0; d < n; ++d) {
      const double step_g = 1e-6 * (1.0 + std::fabs(x[d]));
      const double step_h = 1e-4 * (1.0 + std::fabs(x[d]));
      probe = x;
      probe[d] = x[d] + step_g;
      const double fp = f.value(probe);
      probe[d] = x[d] - step_g;
      const double fm = f.value(probe);
      probe[d] = x[d] + step_h;
      const double fp2 = f.value(probe);
      probe[d] = x[d] - step_h;
      const double fm2 = f.value(probe);
      const double fd_g = (fp - fm) / (2.0 * step_g);
      const double fd_h = (fp2 - 2.0 * fx + fm2) / (step_h * step_h);
      if (!std::isfinite(g[d]) || !std::isfinite(fd_g)) continue;
      worst_g = std::max(worst_g, std::fabs(g[d] - fd_g) / std::max(1.0, std::fabs(g[d])));
      if (std::isfinite(h[d]) && std::isfinite(fd_h)) {
        worst_h = std::max(worst_h, std::fabs(h[d] - fd_h) / std::max(1.0, std::fabs(h[d])));
      }
      ++checked;
    }
  }
  out << "points=" << points << " checked=" << checked << " max_rel_err_gradient=" << worst_g
      << " max_rel_err_hessian_diag=" << worst_h << "\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Monte Carlo tree search with interval bounds for box-constrained global optimization",
               "mcir");
  app.require_subcommand(1);

  ProblemFlags problem;
  BudgetFlags budget;
  std::string out_dir = ".";
  std::vector<std::uint64_t> seeds{0};
  std::size_t jobs = 1;
  std::size_t points = 100;
  std::uint64_t check_seed = 0;

  CLI::App* optimize_cmd = app.add_subcommand("optimize", "Run one search and write its trace");
  add_problem_flags(*optimize_cmd, problem, false);
  add_budget_flags(*optimize_cmd, budget);
  optimize_cmd->add_option("--seed", budget.seed, "Random seed");
  optimize_cmd->add_option("--out", out_dir, "Output directory");

  CLI::App* suite_cmd = app.add_subcommand("suite", "Run problems x seeds and aggregate traces");
  add_problem_flags(*suite_cmd, problem, true);
  add_budget_flags(*suite_cmd, budget);
  suite_cmd->add_option("--seeds", seeds, "Seeds, comma separated")->delimiter(',');
  suite_cmd->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  suite_cmd->add_option("--out", out_dir, "Output directory");

  CLI::App* bound_cmd = app.add_subcommand("bound", "Print the interval enclosure over the domain");
  add_problem_flags(*bound_cmd, problem, false);

  CLI::App* diff_cmd =
      app.add_subcommand("diff-check", "Compare symbolic derivatives with finite differences");
  add_problem_flags(*diff_cmd, problem, false);
  diff_cmd->add_option("--points", points, "Number of random points")->check(CLI::PositiveNumber);
  diff_cmd->add_option("--seed", check_seed, "Random seed");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return 2;
  }

  try {
    if (optimize_cmd->parsed()) return cmd_optimize(problem, budget, out_dir, out);
    if (suite_cmd->parsed()) return cmd_suite(problem, budget, seeds, jobs, out_dir, out);
    if (bound_cmd->parsed()) return cmd_bound(problem, out);
    if (diff_cmd->parsed()) return cmd_diff_check(problem, points, check_seed, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n" << app.get_subcommands().front()->help();
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace mcir::cli
