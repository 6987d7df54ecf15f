// Benchmark and utility front end for the matrix square-root solvers:
// gen / solve / bench / profile / verify.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "msqrt/linalg.hpp"
#include "msqrt/matio.hpp"
#include "msqrt/metrics.hpp"
#include "msqrt/problems.hpp"
#include "msqrt/solvers.hpp"
#include "msqrt/verify.hpp"

namespace {

using namespace msqrt;

constexpr int kExitNotConverged = 2;
constexpr int kExitFailed = 3;
constexpr int kExitBadInput = 4;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("MSQRT_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      std::cerr << "warning: ignoring malformed MSQRT_SEED\n";
    }
  }
  return 0;
}

struct StoppingFlags {
  double tol = 1e-5;
  double change_tol = 1e-6;
  int max_iter = 1000;

  void attach(CLI::App* cmd) {
    cmd->add_option("--tol", tol, "residual tolerance on ||A - X^2||_F");
    cmd->add_option("--change-tol", change_tol, "relative-change tolerance");
    cmd->add_option("--max-iter", max_iter, "iteration cap");
  }
  StoppingCriteria criteria() const { return {max_iter, tol, change_tol}; }
};

SolverConfig make_config(Method method, const StoppingFlags& stop, double nu,
                         std::optional<double> explicit_mu) {
  SolverConfig cfg;
  cfg.method = method;
  cfg.stopping = stop.criteria();
  if (explicit_mu) {
    cfg.mu_policy = MuPolicy::explicit_value(*explicit_mu);
  } else if (method == Method::Fpm2) {
    cfg.mu_policy = MuPolicy::auto_fpm2(nu);
  } else {
    cfg.mu_policy = MuPolicy::auto_fpm1(nu);
  }
  return cfg;
}

// Structural sanity only; definiteness failures surface inside the solvers.
bool plausible_spd(const Matrix& m, std::string& why) {
  if (m.rows() != m.cols()) {
    why = "matrix is not square";
    return false;
  }
  double scale = 0.0, asym = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!std::isfinite(m(i, j))) {
        why = "matrix has non-finite entries";
        return false;
      }
      scale = std::max(scale, std::fabs(m(i, j)));
      asym = std::max(asym, std::fabs(m(i, j) - m(j, i)));
    }
  if (asym > 1e-8 * std::max(scale, 1.0)) {
    why = "matrix is not symmetric";
    return false;
  }
  for (std::size_t i = 0; i < m.rows(); ++i)
    if (!(m(i, i) > 0.0)) {
      why = "nonpositive diagonal entry";
      return false;
    }
  return true;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

// ---------------------------------------------------------------- gen ----

int cmd_gen(const std::string& kind, std::size_t n, double ncond, std::size_t rank,
            std::uint64_t seed, const std::string& out) {
  ProblemSpec spec;
  spec.n = n;
  spec.ncond = ncond;
  spec.rank = rank;
  spec.seed = seed;
  std::vector<std::string> meta;
  std::ostringstream line;
  if (kind == "spd") {
    spec.kind = ProblemKind::SpdLogUniform;
    const SpdInstance inst = gen_spd_loguniform(n, ncond, seed);
    line << "kind=spd n=" << n << " ncond=" << ncond << " seed=" << seed
         << " kappa=" << cond_spd(inst.a);
    meta.push_back(line.str());
    write_matrix_file(out, inst.a.matrix(), meta);
    return 0;
  }
  if (kind == "randcorr") {
    spec.kind = ProblemKind::RandCorr;
  } else if (kind == "lowrank") {
    spec.kind = ProblemKind::LowRankShift;
  } else if (kind == "hilbert") {
    spec.kind = ProblemKind::Hilbert;
  } else {
    std::cerr << "unknown kind: " << kind << "\n";
    return 1;
  }
  const SymMatrix a = generate(spec);
  line << "kind=" << kind << " n=" << n;
  if (kind == "lowrank") line << " rank=" << rank;
  if (kind != "hilbert") line << " seed=" << seed;
  meta.push_back(line.str());
  write_matrix_file(out, a.matrix(), meta);
  return 0;
}

// -------------------------------------------------------------- solve ----

int cmd_solve(const std::string& in, const std::string& method_name_str,
              const StoppingFlags& stop, double nu, std::optional<double> mu,
              std::string out, std::string trace_path) {
  const auto method = method_from_name(method_name_str);
  if (!method) {
    std::cerr << "unknown method: " << method_name_str << "\n";
    return 1;
  }
  Matrix raw;
  try {
    raw = read_matrix_file(in);
  } catch (const std::exception& e) {
    std::cerr << "cannot read " << in << ": " << e.what() << "\n";
    return 1;
  }
  std::string why;
  if (!plausible_spd(raw, why)) {
    std::cerr << "input is not SPD: " << why << "\n";
    return kExitBadInput;
  }
  const SymMatrix a = SymMatrix::from(raw);

  const SolverConfig cfg = make_config(*method, stop, nu, mu);
  const SolveReport rep = run_solver(a, cfg);

  if (out.empty()) out = in + ".xhat";
  if (trace_path.empty()) trace_path = in + ".trace.csv";
  write_matrix_file(out, rep.final_iterate.matrix(),
                    {"xhat method=" + method_name(*method)});
  std::ostringstream csv;
  csv << "k,residual,reschg,elapsed\n";
  for (const IterationRecord& r : rep.trace)
    csv << r.k << "," << fmt(r.residual) << "," << fmt(r.reschg) << ","
        << fmt(r.elapsed) << "\n";
  write_text_file(trace_path, csv.str());

  const double final_e = rep.trace.empty() ? std::numeric_limits<double>::quiet_NaN()
                                           : rep.trace.back().residual;
  std::cout << method_name(*method) << ": " << status_name(rep.status)
            << " iters=" << rep.iters_used << " error=" << fmt(final_e)
            << " time_s=" << fmt(rep.total_time) << "\n";
  if (!rep.failure_reason.empty()) std::cout << "  reason: " << rep.failure_reason << "\n";

  switch (rep.status) {
    case SolveStatus::ResidualConverged:
    case SolveStatus::ChangeConverged: return 0;
    case SolveStatus::MaxItersExceeded:
    case SolveStatus::Diverged: return kExitNotConverged;
    case SolveStatus::Failed: return kExitFailed;
  }
  return 1;
}

// -------------------------------------------------------------- bench ----

struct BenchRow {
  std::string suite, kind;
  std::size_t n;
  double ncond;
  std::uint64_t seed;
  int instance;
  std::string method;
  int iters;
  double time_s;
  double error;
  std::string status;
};

std::string csv_row(const BenchRow& r) {
  std::ostringstream os;
  os << r.suite << "," << r.kind << "," << r.n << "," << r.ncond << "," << r.seed
     << "," << r.instance << "," << r.method << "," << r.iters << ","
     << fmt(r.time_s) << "," << fmt(r.error) << "," << r.status;
  return os.str();
}

int cmd_bench(const std::string& suite, std::size_t n, double ncond, std::size_t rank,
              int reps, std::uint64_t seed, const std::vector<std::string>& method_names,
              const StoppingFlags& stop, double nu, std::optional<double> mu, int jobs,
              std::size_t max_n, const std::string& out) {
  if (n > max_n) {
    std::cerr << "n=" << n << " exceeds the desk-scale cap " << max_n
              << " (raise with --max-n)\n";
    return 1;
  }
  std::vector<Method> methods;
  for (const std::string& m : method_names) {
    const auto method = method_from_name(m);
    if (!method) {
      std::cerr << "unknown method: " << m << "\n";
      return 1;
    }
    methods.push_back(*method);
  }

  ProblemKind kind;
  if (suite == "spd") kind = ProblemKind::SpdLogUniform;
  else if (suite == "randcorr") kind = ProblemKind::RandCorr;
  else if (suite == "lowrank") kind = ProblemKind::LowRankShift;
  else if (suite == "hilbert") kind = ProblemKind::Hilbert;
  else {
    std::cerr << "unknown suite: " << suite << "\n";
    return 1;
  }
  if (kind == ProblemKind::Hilbert) reps = 1;

  std::vector<std::vector<BenchRow>> per_instance(reps);
  std::mutex next_mutex;
  int next = 0;
  auto worker = [&]() {
    for (;;) {
      int idx;
      {
        std::lock_guard<std::mutex> lock(next_mutex);
        if (next >= reps) return;
        idx = next++;
      }
      ProblemSpec spec{kind, n, ncond, rank, 0};
      // one derived stream per instance, ordered by index
      std::mt19937_64 derive = rng_for(seed, static_cast<std::uint64_t>(idx));
      spec.seed = derive();
      const SymMatrix a = generate(spec);
      for (Method method : methods) {
        SolveReport rep = run_solver(a, make_config(method, stop, nu, mu));
        const double final_e = rep.trace.empty()
                                   ? std::numeric_limits<double>::quiet_NaN()
                                   : rep.trace.back().residual;
        per_instance[idx].push_back({suite, kind_name(kind), n, ncond, spec.seed, idx,
                                     method_name(method), rep.iters_used,
                                     rep.total_time, final_e, status_name(rep.status)});
      }
    }
  };
  const int workers = std::max(1, std::min(jobs, reps));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::ostringstream csv;
  csv << "suite,kind,n,ncond,seed,instance,method,iters,time_s,error,status\n";
  for (const auto& rows : per_instance)
    for (const BenchRow& r : rows) csv << csv_row(r) << "\n";

  for (const Method method : methods) {
    double sum_it = 0, sum_t = 0, sum_e = 0;
    int converged = 0;
    for (const auto& rows : per_instance)
      for (const BenchRow& r : rows)
        if (r.method == method_name(method)) {
          sum_it += r.iters;
          sum_t += r.time_s;
          if (r.status == "ResidualConverged" || r.status == "ChangeConverged") {
            sum_e += r.error;
            ++converged;
          }
        }
    BenchRow mean{suite,
                  kind_name(kind),
                  n,
                  ncond,
                  seed,
                  -1,
                  method_name(method),
                  0,
                  sum_t / reps,
                  converged ? sum_e / converged : std::numeric_limits<double>::quiet_NaN(),
                  "conv:" + std::to_string(converged) + "/" + std::to_string(reps)};
    std::ostringstream os;
    os << mean.suite << "," << mean.kind << "," << mean.n << "," << mean.ncond << ","
       << mean.seed << ",mean," << mean.method << "," << fmt(sum_it / reps) << ","
       << fmt(mean.time_s) << "," << fmt(mean.error) << "," << mean.status;
    csv << os.str() << "\n";
  }

  if (out.empty()) {
    std::cout << csv.str();
  } else {
    write_text_file(out, csv.str());
  }
  return 0;
}

// ------------------------------------------------------------ profile ----

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(field);
  return out;
}

int cmd_profile(const std::string& in, const std::string& metric, double tau_max,
                const std::string& out, const std::string& svg) {
  std::ifstream f(in);
  if (!f) {
    std::cerr << "cannot open " << in << "\n";
    return 1;
  }
  std::string line;
  if (!std::getline(f, line)) {
    std::cerr << "empty results CSV\n";
    return 1;
  }
  const std::vector<std::string> header = split_csv_line(line);
  auto col = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
  };
  const int c_kind = col("kind"), c_n = col("n"), c_ncond = col("ncond"),
            c_seed = col("seed"), c_inst = col("instance"), c_method = col("method"),
            c_iters = col("iters"), c_time = col("time_s"), c_status = col("status");
  if (c_kind < 0 || c_inst < 0 || c_method < 0 || c_iters < 0 || c_time < 0 ||
      c_status < 0) {
    std::cerr << "malformed results CSV header\n";
    return 1;
  }

  std::map<std::string, std::map<std::string, double>> problems;  // key -> method -> cost
  std::vector<std::string> solvers;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) <= std::max({c_status, c_time, c_iters})) {
      std::cerr << "malformed results row: " << line << "\n";
      return 1;
    }
    if (fields[c_inst] == "mean") continue;
    const std::string key = fields[c_kind] + "|" + (c_n >= 0 ? fields[c_n] : "") + "|" +
                            (c_ncond >= 0 ? fields[c_ncond] : "") + "|" +
                            (c_seed >= 0 ? fields[c_seed] : "") + "|" + fields[c_inst];
    const std::string& method = fields[c_method];
    const std::string& status = fields[c_status];
    double cost = std::numeric_limits<double>::infinity();
    if (status == "ResidualConverged" || status == "ChangeConverged") {
      cost = metric == "time" ? std::stod(fields[c_time]) : std::stod(fields[c_iters]);
      cost = std::max(cost, 1e-9);  // zero-iteration convergences still rank first
    }
    problems[key][method] = cost;
    if (std::find(solvers.begin(), solvers.end(), method) == solvers.end())
      solvers.push_back(method);
  }
  if (problems.empty()) {
    std::cerr << "no per-instance rows in " << in << "\n";
    return 1;
  }

  std::vector<std::vector<double>> costs;
  for (const auto& [key, by_method] : problems) {
    std::vector<double> row;
    for (const std::string& s : solvers) {
      const auto it = by_method.find(s);
      row.push_back(it == by_method.end() ? std::numeric_limits<double>::infinity()
                                          : it->second);
    }
    costs.push_back(std::move(row));
  }

  std::vector<double> tau_grid;
  const int samples = 128;
  for (int i = 0; i <= samples; ++i)
    tau_grid.push_back(std::exp2(std::log2(tau_max) * i / samples));
  const std::vector<ProfileCurve> curves = perf_profile(costs, solvers, tau_grid);

  std::ostringstream csv;
  csv << "solver,tau,rho\n";
  for (const ProfileCurve& c : curves)
    for (std::size_t i = 0; i < c.tau.size(); ++i)
      csv << c.solver << "," << fmt(c.tau[i]) << "," << fmt(c.rho[i]) << "\n";
  if (out.empty()) {
    std::cout << csv.str();
  } else {
    write_text_file(out, csv.str());
  }

  if (!svg.empty()) {
    const int w = 640, h = 480, ml = 60, mb = 40, mt = 20, mr = 140;
    const double lx_max = std::log2(tau_max);
    static const char* colors[] = {"#1b6ca8", "#c0392b", "#27ae60", "#8e44ad", "#d35400"};
    std::ostringstream s;
    s << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h
      << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
    s << "<line x1='" << ml << "' y1='" << h - mb << "' x2='" << w - mr << "' y2='"
      << h - mb << "' stroke='black'/>\n";
    s << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << h - mb
      << "' stroke='black'/>\n";
    s << "<text x='" << (w - mr + ml) / 2 << "' y='" << h - 8
      << "' font-size='13'>log2(tau)</text>\n";
    s << "<text x='12' y='" << h / 2 << "' font-size='13' transform='rotate(-90 12 "
      << h / 2 << ")'>rho</text>\n";
    for (std::size_t ci = 0; ci < curves.size(); ++ci) {
      const ProfileCurve& c = curves[ci];
      s << "<polyline fill='none' stroke='" << colors[ci % 5] << "' points='";
      for (std::size_t i = 0; i < c.tau.size(); ++i) {
        const double px = ml + (w - ml - mr) * (std::log2(c.tau[i]) / lx_max);
        const double py = h - mb - (h - mt - mb) * c.rho[i];
        s << px << "," << py << " ";
      }
      s << "'/>\n";
      s << "<text x='" << w - mr + 10 << "' y='" << mt + 16 * (ci + 1)
        << "' font-size='13' fill='" << colors[ci % 5] << "'>" << c.solver << "</text>\n";
    }
    s << "</svg>\n";
    write_text_file(svg, s.str());
  }
  return 0;
}

// ------------------------------------------------------------- verify ----

int cmd_verify(const std::string& property, int trials, std::size_t n,
               std::uint64_t seed, bool degenerate) {
  std::vector<PropertyResult> results;
  if (property == "all") {
    results = verify_all(seed);
  } else if (property == "lemma") {
    results.push_back(verify_lemma_suite(trials, n, seed, degenerate));
  } else if (property == "lemma11") {
    results.push_back(verify_lemma_suite(trials, n, seed, true));
  } else if (property == "contraction") {
    results.push_back(verify_contraction(trials, n, seed));
  } else if (property == "envelope") {
    results.push_back(verify_envelope(std::min(trials, 50), n, seed));
  } else if (property == "interval") {
    results.push_back(verify_interval(trials, n, seed));
  } else {
    std::cerr << "unknown property: " << property << "\n";
    return 1;
  }
  bool all_pass = true;
  for (const PropertyResult& r : results) {
    std::cout << r.name << ": " << (r.pass() ? "pass" : "FAIL") << " trials=" << r.trials
              << " failures=" << r.failures << " worst_slack=" << fmt(r.worst_slack)
              << "\n";
    all_pass = all_pass && r.pass();
  }
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix square-root solvers and benchmarks"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a test matrix");
  std::string g_kind = "spd", g_out;
  std::size_t g_n = 100, g_rank = 10;
  double g_ncond = 1.0;
  std::uint64_t g_seed = default_seed();
  gen->add_option("--kind", g_kind, "spd|randcorr|lowrank|hilbert");
  gen->add_option("--n", g_n, "matrix order");
  gen->add_option("--ncond", g_ncond, "log-uniform spread (spd)");
  gen->add_option("--rank", g_rank, "rank (lowrank)");
  gen->add_option("--seed", g_seed, "stream seed");
  gen->add_option("--out", g_out, "output matrix file")->required();

  // solve
  auto* solve = app.add_subcommand("solve", "compute the principal square root");
  std::string s_in, s_method = "fpm1", s_out, s_trace;
  StoppingFlags s_stop;
  double s_nu = 0.5;
  std::optional<double> s_mu;
  double s_mu_raw = 0.0;
  solve->add_option("--in", s_in, "input matrix file")->required();
  solve->add_option("--method", s_method, "fpm1|fpm2|sra|newton|gradm");
  solve->add_option("--out", s_out, "square-root output file");
  solve->add_option("--trace", s_trace, "trace CSV file");
  solve->add_option("--nu", s_nu, "nu for the auto mu policies");
  auto* s_mu_opt = solve->add_option("--mu", s_mu_raw, "explicit mu");
  s_stop.attach(solve);

  // bench
  auto* bench = app.add_subcommand("bench", "run a solver suite");
  std::string b_suite = "spd", b_out;
  std::size_t b_n = 100, b_rank = 10, b_max_n = 200;
  double b_ncond = 1.0;
  int b_reps = 10, b_jobs = 1;
  std::uint64_t b_seed = default_seed();
  std::vector<std::string> b_methods = {"fpm1", "fpm2", "sra", "newton", "gradm"};
  StoppingFlags b_stop;
  b_stop.max_iter = 2000;  // table-reproduction cap
  double b_nu = 0.5;
  std::optional<double> b_mu;
  double b_mu_raw = 0.0;
  bench->add_option("--suite", b_suite, "spd|randcorr|lowrank|hilbert");
  bench->add_option("--n", b_n, "matrix order");
  bench->add_option("--ncond", b_ncond, "log-uniform spread (spd suite)");
  bench->add_option("--rank", b_rank, "rank (lowrank suite)");
  bench->add_option("--reps", b_reps, "instances per suite");
  bench->add_option("--seed", b_seed, "suite seed");
  bench->add_option("--methods", b_methods, "methods to run")->delimiter(',');
  bench->add_option("--jobs", b_jobs, "parallel instances");
  bench->add_option("--max-n", b_max_n, "desk-scale order cap");
  bench->add_option("--nu", b_nu, "nu for the auto mu policies");
  auto* b_mu_opt = bench->add_option("--mu", b_mu_raw, "explicit mu");
  bench->add_option("--out", b_out, "results CSV (stdout if omitted)");
  b_stop.attach(bench);

  // profile
  auto* profile = app.add_subcommand("profile", "performance profiles from results CSV");
  std::string p_in, p_metric = "iters", p_out, p_svg;
  double p_tau_max = 32.0;
  profile->add_option("--in", p_in, "bench results CSV")->required();
  profile->add_option("--metric", p_metric, "iters|time");
  profile->add_option("--tau-max", p_tau_max, "profile horizon");
  profile->add_option("--out", p_out, "profile CSV (stdout if omitted)");
  profile->add_option("--svg", p_svg, "optional SVG chart");

  // verify
  auto* verify = app.add_subcommand("verify", "run the metric property suites");
  std::string v_property = "all";
  int v_trials = 200;
  std::size_t v_n = 10;
  std::uint64_t v_seed = default_seed();
  bool v_degenerate = false;
  verify->add_option("--property", v_property,
                     "all|lemma|lemma11|contraction|envelope|interval");
  verify->add_option("--trials", v_trials, "case count");
  verify->add_option("--n", v_n, "maximum order");
  verify->add_option("--seed", v_seed, "stream seed");
  verify->add_flag("--degenerate", v_degenerate, "use X == Y cases");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_gen(g_kind, g_n, g_ncond, g_rank, g_seed, g_out);
    if (*solve) {
      if (s_mu_opt->count()) s_mu = s_mu_raw;
      return cmd_solve(s_in, s_method, s_stop, s_nu, s_mu, s_out, s_trace);
    }
    if (*bench) {
      if (b_mu_opt->count()) b_mu = b_mu_raw;
      return cmd_bench(b_suite, b_n, b_ncond, b_rank, b_reps, b_seed, b_methods, b_stop,
                       b_nu, b_mu, b_jobs, b_max_n, b_out);
    }
    if (*profile) return cmd_profile(p_in, p_metric, p_tau_max, p_out, p_svg);
    if (*verify) return cmd_verify(v_property, v_trials, v_n, v_seed, v_degenerate);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
