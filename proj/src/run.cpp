#include "gy/run.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>
#include <thread>

#include "gy/log.hpp"
#include "json.hpp"

namespace gy {

namespace {

using nlohmann::json;

Nonlinearity make_nonlinearity(const RunConfig& cfg, NonlinearityMode mode) {
  double p = cfg.p;
  if (cfg.nonlinearity == "power") {
    if (!(cfg.q > p))
      throw Error(ErrorKind::UsageError, "power nonlinearity needs --q greater than --p");
    return Nonlinearity::power(p, cfg.q, mode);
  }
  if (cfg.nonlinearity == "exp_growth") {
    double q = cfg.q > p ? cfg.q : p + 1.0;
    return Nonlinearity::exp_growth(p, q, mode);
  }
  if (cfg.nonlinearity.rfind("tabulated:", 0) == 0) {
    if (!(cfg.q > p)) throw Error(ErrorKind::UsageError, "tabulated nonlinearity needs --q > --p");
    std::string path = cfg.nonlinearity.substr(10);
    std::istringstream in(read_file(path));
    std::vector<double> ts, fs;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || (lineno == 1 && line.rfind("t,", 0) == 0)) continue;
      auto comma = line.find(',');
      if (comma == std::string::npos)
        throw Error(ErrorKind::ParseError, path + ": line " + std::to_string(lineno));
      ts.push_back(std::stod(line.substr(0, comma)));
      fs.push_back(std::stod(line.substr(comma + 1)));
    }
    return Nonlinearity::tabulated(ts, fs, p, cfg.q, cfg.threshold, mode);
  }
  throw Error(ErrorKind::UsageError, "unknown nonlinearity '" + cfg.nonlinearity + "'");
}

json positivity_to_json(const WeightedGraph& g, const PositivityReport& pos) {
  json witness = json::array();
  for (int x : pos.witness) witness.push_back(g.id_of(x));
  return json{{"nonneg", pos.nonneg},
              {"strictly_positive_interior", pos.strictly_positive_interior},
              {"u_minus_norm", pos.u_minus_norm},
              {"witness", witness}};
}

json field_to_json(const WeightedGraph& g, const VertexField& u) {
  json obj = json::object();
  for (int x = 0; x < g.vertex_count(); ++x) obj[g.id_of(x)] = u[x];
  return obj;
}

json config_echo(const RunConfig& cfg) {
  return json{{"variant", cfg.variant},
              {"alpha", cfg.alpha},
              {"p", cfg.p},
              {"q", cfg.q},
              {"m", cfg.m},
              {"nonlinearity", cfg.nonlinearity},
              {"threshold", cfg.threshold},
              {"method", cfg.method},
              {"seed", cfg.seed},
              {"force", cfg.force},
              {"path_nodes", cfg.tolerances.path_nodes},
              {"grad_tol", cfg.tolerances.grad_tol},
              {"newton_tol", cfg.tolerances.newton_tol},
              {"pos_tol", cfg.tolerances.pos_tol},
              {"residual_gate", cfg.tolerances.residual_gate}};
}

json hypotheses_to_json(const ProblemHypotheses& hyp) {
  json checks = json::array();
  for (const auto& c : hyp.report.checks)
    checks.push_back(json{{"name", c.name},
                          {"passed", c.passed},
                          {"sampled_evidence", c.sampled_evidence},
                          {"detail", c.detail}});
  return json{{"summary", hyp.summary},
              {"threshold_eig", hyp.report.threshold_eig},
              {"threshold_certified", hyp.report.threshold_certified},
              {"checks", checks}};
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> values;
  if (text.empty()) return values;
  if (text.find(':') != std::string::npos) {
    double lo = 0.0, hi = 0.0;
    int count = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' || count < 1)
      throw Error(ErrorKind::UsageError, "range must be lo:hi:count, got '" + text + "'");
    for (int i = 0; i < count; ++i)
      values.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1.0));
    return values;
  }
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    values.push_back(std::stod(item));
  }
  return values;
}

}  // namespace

LoadedInputs load_inputs(const RunConfig& cfg) {
  if (cfg.graph_path.empty()) throw Error(ErrorKind::UsageError, "--graph is required");
  std::string graph_text = read_file(cfg.graph_path);
  LoadedInputs inputs{parse_graph_json(graph_text), std::nullopt, std::nullopt,
                      content_hash(graph_text), ""};

  if (!cfg.domain_path.empty()) {
    std::string domain_text = read_file(cfg.domain_path);
    inputs.dom = decompose_domain(inputs.graph, parse_domain_json(inputs.graph, domain_text));
    inputs.domain_hash = content_hash(domain_text);
  }
  if (!cfg.h_path.empty()) {
    inputs.h = parse_field_csv(inputs.graph, read_file(cfg.h_path));
  } else if (std::isfinite(cfg.h_const)) {
    inputs.h = VertexField::Constant(inputs.graph.vertex_count(), cfg.h_const);
  }
  return inputs;
}

Problem build_problem(const RunConfig& cfg, const LoadedInputs& inputs) {
  Variant variant = variant_from_name(cfg.variant);
  const bool global = variant_is_global(variant);
  if (global && !inputs.h)
    throw Error(ErrorKind::UsageError, cfg.variant + " needs --h-file or --h-const");
  if (!global && !inputs.dom)
    throw Error(ErrorKind::UsageError, cfg.variant + " needs --domain");

  switch (variant) {
    case Variant::Thm1: return Problem::thm1(inputs.graph, *inputs.dom, cfg.alpha, cfg.p);
    case Variant::Thm2:
      return Problem::thm2(inputs.graph, *inputs.dom,
                           make_nonlinearity(cfg, NonlinearityMode::OneSided));
    case Variant::Thm4:
      return Problem::thm4(inputs.graph, *inputs.dom, cfg.m,
                           make_nonlinearity(cfg, NonlinearityMode::TwoSided));
    case Variant::Thm5: return Problem::thm5(inputs.graph, *inputs.h, cfg.p);
    case Variant::Thm6:
      return Problem::thm6(inputs.graph, *inputs.h, make_nonlinearity(cfg, NonlinearityMode::OneSided));
    case Variant::Thm8:
      return Problem::thm8(inputs.graph, *inputs.h, cfg.m,
                           make_nonlinearity(cfg, NonlinearityMode::TwoSided));
  }
  throw Error(ErrorKind::UsageError, "unhandled variant");
}

std::string run_gen(const GenSpec& gen, const std::string& out_path) {
  WeightedGraph g = generate(gen);
  write_file_atomic(out_path, graph_to_json(g));
  log::info("wrote " + out_path + " (" + std::to_string(g.vertex_count()) + " vertices, " +
            std::to_string(g.edge_count()) + " edges)");
  return out_path;
}

int run_spectrum(const RunConfig& cfg) {
  LoadedInputs inputs = load_inputs(cfg);
  SpectrumOptions opts;
  opts.seed = cfg.seed;

  EigenResult result;
  std::string kind;
  OperatorOrder order{cfg.spectrum_m, cfg.spectrum_p};
  if (inputs.dom) {
    if (order.m == 1 && order.p == 2.0) {
      result = lambda1(inputs.graph, *inputs.dom);
      kind = "lambda1";
    } else if (order.m == 1) {
      result = lambda_p(inputs.graph, *inputs.dom, order.p, opts);
      kind = "lambda_p";
    } else {
      result = lambda_mp(inputs.graph, *inputs.dom, order, opts);
      kind = "lambda_mp";
    }
  } else if (inputs.h) {
    if (order.m == 1) {
      result = lambda_p_V(inputs.graph, *inputs.h, order.p, opts);
      kind = "lambda_p_V";
    } else {
      result = lambda_mp_V(inputs.graph, *inputs.h, order, opts);
      kind = "lambda_mp_V";
    }
  } else {
    throw Error(ErrorKind::UsageError,
                "spectrum needs --domain (Dirichlet) or --h-file/--h-const (whole graph)");
  }

  json doc{{"kind", kind},
           {"m", order.m},
           {"p", order.p},
           {"value", result.value},
           {"certified", result.certified},
           {"restarts", result.restarts},
           {"seed", cfg.seed},
           {"graph_hash", inputs.graph_hash}};
  if (!inputs.domain_hash.empty()) doc["domain_hash"] = inputs.domain_hash;
  write_file_atomic(cfg.out_dir + "/spectrum.json", doc.dump(2) + "\n");
  write_file_atomic(cfg.out_dir + "/minimizer.csv", field_to_csv(inputs.graph, result.minimizer));
  std::cout << kind << " = " << format_double(result.value)
            << (result.certified ? " (certified)" : " (upper bound)") << "\n";
  return 0;
}

namespace {

json report_to_json(const RunConfig& cfg, const LoadedInputs& inputs, const Problem& prob,
                    const SolverReport& report, const ProblemHypotheses& hyp, bool unverified) {
  const WeightedGraph& g = prob.graph();
  json doc{{"method", report.method},
           {"variant", std::string(variant_name(prob.variant()))},
           {"config", config_echo(cfg)},
           {"graph_hash", inputs.graph_hash},
           {"hypotheses", hypotheses_to_json(hyp)},
           {"hypotheses_unverified", unverified},
           {"energy", report.energy},
           {"mp_level", report.mp_level},
           {"residual_linf", report.residual_linf},
           {"residual_dual", report.residual_dual},
           {"iterations", report.iterations},
           {"restarts_used", report.restarts_used},
           {"newton_no_progress", report.newton_no_progress},
           {"p_degenerate_vertices", report.p_degenerate_vertices},
           {"geometry",
            json{{"r", report.geometry.r},
                 {"sphere_inf", report.geometry.sphere_inf},
                 {"energy_e", report.geometry.energy_e},
                 {"e", field_to_json(g, report.geometry.e)}}},
           {"solution", field_to_json(g, report.solution)},
           {"trace_length", report.trace.size()}};
  if (!inputs.domain_hash.empty()) doc["domain_hash"] = inputs.domain_hash;
  if (variant_is_signed(prob.variant()))
    doc["positivity"] = nullptr;
  else
    doc["positivity"] = positivity_to_json(g, report.positivity);
  return doc;
}

}  // namespace

int run_solve(const RunConfig& cfg) {
  LoadedInputs inputs = load_inputs(cfg);
  Problem prob = build_problem(cfg, inputs);

  SpectrumOptions spectrum_opts;
  spectrum_opts.seed = cfg.seed;
  ProblemHypotheses hyp = check_problem_hypotheses(prob, spectrum_opts);
  bool unverified = false;
  if (!hyp.report.all_passed()) {
    std::string failing;
    for (const auto& c : hyp.report.checks)
      if (!c.passed) failing += (failing.empty() ? "" : "; ") + c.name + " [" + c.detail + "]";
    if (!cfg.force)
      throw Error(ErrorKind::HypothesisViolation, failing);
    unverified = true;
    log::info("running despite failed hypotheses: " + failing);
  }
  if (!hyp.report.threshold_certified)
    log::info("hypothesis threshold is an uncertified upper bound (p != 2)");

  SolveConfig solve_cfg = cfg.tolerances;
  solve_cfg.seed = cfg.seed;
  SolverReport report;
  if (cfg.method == "mountain_pass")
    report = mountain_pass_solve(prob, solve_cfg);
  else if (cfg.method == "nehari")
    report = nehari_solve(prob, solve_cfg);
  else
    throw Error(ErrorKind::UsageError, "method must be mountain_pass or nehari");

  json doc = report_to_json(cfg, inputs, prob, report, hyp, unverified);
  write_file_atomic(cfg.out_dir + "/report.json", doc.dump(2) + "\n");
  write_file_atomic(cfg.out_dir + "/solution.csv", field_to_csv(prob.graph(), report.solution));
  write_file_atomic(cfg.out_dir + "/trace.csv", trace_to_csv(report.trace));
  std::cout << "solved " << cfg.variant << " by " << report.method
            << ": energy=" << format_double(report.energy)
            << " residual_dual=" << format_double(report.residual_dual) << " iterations="
            << report.iterations << "\n";
  return 0;
}

int run_check(const RunConfig& cfg, const std::string& solution_path) {
  LoadedInputs inputs = load_inputs(cfg);
  Problem prob = build_problem(cfg, inputs);
  VertexField u = parse_field_csv(prob.graph(), read_file(solution_path));

  ResidualReport res = residual(prob, u);
  double energy = prob.energy(u);
  double norm = prob.space_norm(u);
  const double gate = cfg.tolerances.residual_gate;

  bool dual_ok = res.dual <= gate * (1.0 + norm);
  bool linf_ok = prob.order().m == 1 ? res.linf <= gate * (1.0 + norm) : true;
  bool positivity_ok = true;
  json pos_json = nullptr;
  if (!variant_is_signed(prob.variant())) {
    PositivityReport pos = certify_positivity(prob, u, cfg.tolerances);
    positivity_ok = pos.nonneg && pos.strictly_positive_interior;
    pos_json = positivity_to_json(prob.graph(), pos);
  }
  bool all_ok = dual_ok && linf_ok && positivity_ok;

  json doc{{"variant", std::string(variant_name(prob.variant()))},
           {"solution_hash", content_hash(read_file(solution_path))},
           {"graph_hash", inputs.graph_hash},
           {"energy", energy},
           {"residual_linf", res.linf},
           {"residual_dual", res.dual},
           {"p_degenerate_vertices", res.degenerate_vertices},
           {"positivity", pos_json},
           {"gates", json{{"residual_dual_ok", dual_ok},
                          {"residual_linf_ok", linf_ok},
                          {"positivity_ok", positivity_ok},
                          {"all", all_ok}}}};
  write_file_atomic(cfg.out_dir + "/verification.json", doc.dump(2) + "\n");
  std::cout << (all_ok ? "PASS" : "FAIL") << " residual_dual=" << format_double(res.dual)
            << " residual_linf=" << format_double(res.linf) << "\n";
  return all_ok ? 0 : 3;
}

int run_sweep(const RunConfig& cfg) {
  std::vector<double> values = parse_values(cfg.sweep_values);
  Variant variant = variant_from_name(cfg.variant);
  if (cfg.sweep_axis != "alpha" && cfg.sweep_axis != "p" && cfg.sweep_axis != "size")
    throw Error(ErrorKind::UsageError, "sweep axis must be alpha, p or size");
  if (cfg.sweep_axis == "alpha" && variant != Variant::Thm1)
    throw Error(ErrorKind::UsageError, "alpha sweeps apply to thm1");
  if (cfg.sweep_axis == "p" && variant != Variant::Thm1 && variant != Variant::Thm5)
    throw Error(ErrorKind::UsageError, "p sweeps apply to thm1 or thm5");

  std::optional<LoadedInputs> base;
  if (cfg.sweep_axis != "size") base = load_inputs(cfg);

  std::vector<std::string> rows(values.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < values.size(); i = next.fetch_add(1)) {
      double value = values[i];
      RunConfig point = cfg;
      std::ostringstream row;
      row << cfg.sweep_axis << "," << format_double(value) << ",";
      auto started = std::chrono::steady_clock::now();
      try {
        LoadedInputs inputs;
        if (cfg.sweep_axis == "alpha") {
          point.alpha = value;
          inputs = *base;
        } else if (cfg.sweep_axis == "p") {
          point.p = value;
          inputs = *base;
        } else {
          int n = static_cast<int>(value);
          if (n < 3) throw Error(ErrorKind::UsageError, "size sweep needs n >= 3");
          GenSpec gen{.family = "path", .n = n};
          WeightedGraph g = generate(gen);
          std::vector<int> omega;
          for (int k = 1; k + 1 < n; ++k) omega.push_back(k);
          inputs = LoadedInputs{g, decompose_domain(g, omega), std::nullopt, "", ""};
        }
        Problem prob = build_problem(point, inputs);
        SolveConfig solve_cfg = point.tolerances;
        solve_cfg.seed = point.seed;
        SolverReport report = point.method == "nehari" ? nehari_solve(prob, solve_cfg)
                                                       : mountain_pass_solve(prob, solve_cfg);
        double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        double threshold = prob.lambda1_threshold();
        row << (std::isnan(threshold) ? "" : format_double(threshold)) << ","
            << format_double(report.solution.cwiseAbs().maxCoeff()) << ","
            << format_double(report.energy) << "," << format_double(report.mp_level) << ","
            << format_double(report.residual_dual) << "," << report.iterations << ","
            << format_double(wall) << ",";
      } catch (const Error& e) {
        double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        row << ",,,,,," << format_double(wall) << "," << e.what();
      }
      rows[i] = row.str();
    }
  };

  int jobs = std::max(1, cfg.jobs);
  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::ostringstream out;
  out << "axis,value,lambda1,solution_max,energy,mp_level,residual_dual,iterations,wall_seconds,error\n";
  for (const auto& row : rows) out << row << "\n";
  write_file_atomic(cfg.out_dir + "/sweep.csv", out.str());
  std::cout << "swept " << values.size() << " point(s) -> " << cfg.out_dir << "/sweep.csv\n";
  return 0;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::HypothesisViolation:
    case ErrorKind::NonPositivePotential:
    case ErrorKind::EmptyInterior:
    case ErrorKind::BadExponent:
    case ErrorKind::TrivialAdmissibleSpace:
    case ErrorKind::DisconnectedDomain:
    case ErrorKind::EmptyDomain:
      return 2;
    case ErrorKind::GeometryNotFound:
    case ErrorKind::MaxIterations:
    case ErrorKind::StalledPath:
    case ErrorKind::NoNehariRoot:
    case ErrorKind::SingularJacobian:
      return 3;
    default:
      return 4;
  }
}

}  // namespace gy
