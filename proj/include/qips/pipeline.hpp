#pragma once

// Command-level orchestration shared by the CLI and the tests: model
// ingestion, per-component runs and JSON reports.

#include "qips/io/json.hpp"
#include "qips/parallel.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qips {

using io::json;

struct ModelSpec {
  enum class Source { dk, local };
  int sites = 2;
  Source source = Source::dk;
  Rational p = 0;
  Rational q = 0;
  std::string local_path;
  /// Parsed local-operator document; overrides local_path when set.
  std::optional<json> local_document;
  Mode mode = Mode::floating;
  double tol = 1e-9;
  int max_sites = default_max_sites;
  /// 0 = all components, otherwise 1 or 2.
  int component = 0;
  unsigned threads = 0;
};

/// "p,q" with each part a decimal or a fraction.
inline std::pair<Rational, Rational> parse_dk_pair(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw io::input_error("--dk expects p,q");
  try {
    return {parse_rational(text.substr(0, comma)), parse_rational(text.substr(comma + 1))};
  } catch (const std::invalid_argument& e) {
    throw io::input_error(std::string("--dk: ") + e.what());
  }
}

struct LoadedModel {
  std::string description;
  /// Real operator with exact entries; absent when some entry is complex.
  std::optional<LocalOperator<Rational>> real;
  LocalOperator<std::complex<double>> complex_op;
};

inline LoadedModel load_model(const ModelSpec& spec) {
  if (spec.sites < 2) throw io::input_error("--n must be at least 2");
  if (spec.sites > spec.max_sites) throw io::input_error("--n exceeds --max-sites " + std::to_string(spec.max_sites));
  if (!(spec.tol > 0)) throw io::input_error("--tol must be positive");
  if (spec.component < 0 || spec.component > 2) throw io::input_error("--component must be 1, 2 or all");

  LoadedModel model;
  auto from_dk = [&](const Rational& p, const Rational& q) {
    DKParams<Rational> params{p, q};
    try {
      validate(params);
    } catch (const std::domain_error& e) {
      throw io::input_error(e.what());
    }
    model.real = build_dk_local(params);
    model.description = "dk(p=" + p.str() + ", q=" + q.str() + ")";
  };
  if (spec.source == ModelSpec::Source::dk) {
    from_dk(spec.p, spec.q);
  } else {
    const json doc = spec.local_document ? *spec.local_document : io::read_json_file(spec.local_path);
    const std::string where = spec.local_document ? "local operator" : spec.local_path;
    if (!doc.is_object()) throw io::input_error(where + ": expected a JSON object");
    if (doc.contains("model")) {
      if (doc["model"] != "dk") throw io::input_error(where + ": unknown model " + doc["model"].dump());
      if (!doc.contains("p") || !doc.contains("q")) throw io::input_error(where + ": dk model needs p and q");
      from_dk(io::rational_from_json(doc["p"], where + ": p"), io::rational_from_json(doc["q"], where + ": q"));
    } else if (doc.contains("local")) {
      const json& entries = doc["local"];
      if (!entries.is_array() || entries.size() != 16)
        throw io::input_error(where + ": \"local\" must hold 16 entries in row-major order");
      LocalOperator<Rational> re;
      bool has_imag = false;
      for (std::size_t k = 0; k < 16; ++k) {
        const auto z = io::complex_from_json(entries[k], where + ": local[" + std::to_string(k) + "]");
        re.entries(k / 4, k % 4) = z.re;
        model.complex_op.entries(k / 4, k % 4) = {to_double(z.re), to_double(z.im)};
        has_imag = has_imag || z.im != 0;
      }
      if (!has_imag) model.real = re;
      model.description = "local(" + where + ")";
    } else {
      throw io::input_error(where + ": expected \"local\" or \"model\"");
    }
  }
  if (model.real) model.complex_op.entries = model.real->entries.template cast<double>().template cast<std::complex<double>>();
  return model;
}

/// A named identity with its measured defect.
struct IdentityCheck {
  std::string name;
  std::string scope;
  double value = 0.0;
  double tolerance = 0.0;
  std::string mode;
  bool holds = true;
};

inline json to_json(const IdentityCheck& c) {
  return {{"name", c.name}, {"scope", c.scope}, {"value", io::to_json(c.value)}, {"tolerance", c.tolerance},
          {"mode", c.mode}, {"holds", c.holds}};
}

inline constexpr double unitarity_tol = 1e-12;
inline constexpr double spectrum_tol = 1e-9;
inline constexpr double multiplicativity_tol = 1e-12;

/// Everything computed for one connected component.
struct ComponentRun {
  int index = 1;
  Mode mode = Mode::floating;
  json report;
  std::vector<IdentityCheck> checks;
  std::optional<Polynomial<Rational>> exact_reciprocal;
  Polynomial<double> float_reciprocal;
  Matrix<double> u;
  int n = 0;
  int m = 0;
};

namespace detail {

template <class T>
void record(std::vector<IdentityCheck>& checks, std::string name, const std::string& scope, double value, double tol) {
  const bool holds = is_exact_v<T> ? value == 0.0 : value <= tol;
  checks.push_back({std::move(name), scope, value, is_exact_v<T> ? 0.0 : tol, to_string(scalar_traits<T>::mode), holds});
}

/// Product over the predicted spectrum of (1 - lambda u), real parts kept.
inline Polynomial<double> polynomial_from_spectrum(const SpectrumReport& s) {
  std::vector<std::complex<double>> acc{1.0};
  for (const auto& lambda : s.eigenvalues()) {
    std::vector<std::complex<double>> next(acc.size() + 1, 0.0);
    for (std::size_t k = 0; k < acc.size(); ++k) {
      next[k] += acc[k];
      next[k + 1] -= lambda * acc[k];
    }
    acc.swap(next);
  }
  std::vector<double> re;
  for (const auto& z : acc) re.push_back(z.real());
  return Polynomial<double>(std::move(re));
}

template <class T>
ComponentRun run_component_as(int index, const Graph& graph, const Matrix<T>& block, double tol) {
  ComponentRun run;
  run.index = index;
  run.mode = scalar_traits<T>::mode;
  run.n = graph.vertex_count();
  run.m = graph.edge_count();
  const std::string scope = "component " + std::to_string(index);

  const MarkovChain<T> chain = chain_from_block(graph, block, Orientation::column_stochastic, default_chain_tol);
  const CouplingMatrices<T> coupling = build_coupling(chain);
  const QuantumCoin<T> coin = quantize(chain);
  const SymmetrizedMatrix<T> sym = symmetrize(chain);
  run.u = coin.u.template cast<double>();

  const double defect = unitarity_defect(coin);
  record<T>(run.checks, "U U^T = U^T U = I", scope, defect, unitarity_tol);
  {
    // K and L may be irrational even when U is exact, so these are checked in binary64.
    const Matrix<double> k = CouplingMatrices<double>::entrywise_sqrt(coupling.k_squared.template cast<double>());
    const Matrix<double> l = CouplingMatrices<double>::entrywise_sqrt(coupling.l_squared.template cast<double>());
    const Matrix<double> j = coupling.j.template cast<double>();
    const auto push = [&](std::string name, double value) {
      run.checks.push_back({std::move(name), scope, value, unitarity_tol, "float", value <= unitarity_tol});
    };
    push("L = J K", max_abs_diff(j * k, l));
    push("K^T K = I", max_abs_diff(k.transpose() * k, Matrix<double>::identity(k.cols())));
    push("J^2 = I", max_abs_diff(j * j, Matrix<double>::identity(j.rows())));
  }

  const Polynomial<T> reciprocal = zeta_reciprocal(coin);
  const Polynomial<T> chi_s = charpoly(sym.s);
  const Polynomial<T> chi_p = charpoly(block);
  const FactorizationReport<T> t2 = factorization_report(reciprocal, factorization_polynomial(run.n, run.m, chi_s, tol));
  record<T>(run.checks, "det(I-uU) = (1+u)^n (1-u^2)^(m-n) det((1+u^2)I - 2uS)", scope, t2.max_coefficient_gap, tol);

  const SpectrumReport spectrum = predicted_spectrum(sym, run.n, run.m);
  const double spectrum_gap = max_coeff_gap(polynomial_from_spectrum(spectrum), reciprocal.template cast<double>());
  run.checks.push_back({"det(I-uU) = prod (1 - lambda u) over the predicted spectrum", scope, spectrum_gap, spectrum_tol,
                        "float", spectrum_gap <= spectrum_tol});

  if constexpr (is_exact_v<T>) {
    run.exact_reciprocal = reciprocal;
    run.float_reciprocal = reciprocal.template cast<double>();
  } else {
    run.float_reciprocal = reciprocal;
  }

  json r;
  r["component"] = index;
  r["mode"] = to_string(run.mode);
  r["n"] = run.n;
  r["m"] = run.m;
  r["block_column_stochastic"] = io::to_json(block);
  r["chain"] = io::to_json(chain);
  r["transition_matrix"] = io::to_json(transition_matrix(chain));
  r["U"] = io::to_json(coin.u);
  r["S"] = io::to_json(sym.s);
  r["unitarity_defect"] = {{"value", io::to_json(defect)}, {"tolerance", is_exact_v<T> ? 0.0 : unitarity_tol}, {"mode", to_string(run.mode)}};
  r["zeta_reciprocal"] = io::to_json(reciprocal);
  r["charpoly_U"] = io::to_json(charpoly_from_reciprocal(reciprocal, coin.u.rows()));
  r["charpoly_P"] = io::to_json(chi_p);
  r["charpoly_S"] = io::to_json(chi_s);
  r["charpoly_P_minus_S_gap"] = io::to_json(max_coeff_gap(chi_p, chi_s));
  r["factorization"] = {{"rhs", io::to_json(t2.rhs)},
                   {"max_coefficient_gap", io::to_json(t2.max_coefficient_gap)},
                   {"scaled_gap", io::to_json(t2.scaled_gap)},
                   {"tolerance", is_exact_v<T> ? 0.0 : tol},
                   {"mode", to_string(run.mode)}};
  r["spectrum"] = io::to_json(spectrum);
  if (const auto w = detect_automorphy(reciprocal, Polynomial<T>::constant(T(1)), tol)) r["automorphy"] = io::to_json(*w);
  run.report = std::move(r);
  return run;
}

}  // namespace detail

/// Runs component `index` (1: last bit 0, 2: last bit 1). Exact mode falls
/// back to binary64 when a square root is irrational.
inline ComponentRun run_component(const ModelSpec& spec, const LocalOperator<Rational>& op, int index,
                                  std::vector<std::string>& notices) {
  const GlobalOperator<Rational> g = global_from_local(op, spec.sites, spec.max_sites);
  const BlockPair<Rational> blocks = split_blocks(g);
  const Matrix<Rational>& block = index == 1 ? blocks.block0 : blocks.block1;
  const Graph graph = build_component_graph(spec.sites, index - 1);
  if (spec.mode == Mode::exact) {
    try {
      return detail::run_component_as<Rational>(index, graph, block, spec.tol);
    } catch (const inexact_error& e) {
      notices.push_back("component " + std::to_string(index) + ": " + e.what() + "; computed in float mode");
    }
  }
  return detail::run_component_as<double>(index, graph, block.template cast<double>(), spec.tol);
}

inline std::vector<int> selected_components(const ModelSpec& spec) {
  if (spec.component == 0) return {1, 2};
  return {spec.component};
}

/// Result of a command: the JSON document plus every identity it checked.
struct CommandResult {
  json document;
  std::vector<IdentityCheck> checks;

  bool all_hold() const {
    for (const auto& c : checks)
      if (!c.holds) return false;
    return true;
  }
};

namespace detail {

inline json header(const std::string& command, const ModelSpec& spec, const LoadedModel& model) {
  return {{"command", command},
          {"model", model.description},
          {"N", spec.sites},
          {"mode", to_string(spec.mode)},
          {"tolerance", spec.tol}};
}

inline void finish(CommandResult& result, const std::vector<std::string>& notices) {
  json ids = json::array();
  for (const auto& c : result.checks) ids.push_back(to_json(c));
  result.document["identities"] = std::move(ids);
  result.document["notices"] = notices;
}

inline const LocalOperator<Rational>& require_real(const LoadedModel& model) {
  if (!model.real) throw io::input_error("this command needs a real local operator");
  return *model.real;
}

}  // namespace detail

inline CommandResult cmd_model(const ModelSpec& spec) {
  const LoadedModel model = load_model(spec);
  CommandResult result;
  result.document = detail::header("model", spec, model);
  std::vector<std::string> notices;
  if (spec.mode == Mode::exact && model.real) {
    result.document["classification"] = io::to_json(classify_local(*model.real));
    result.document["local"] = io::to_json(model.real->entries);
  } else {
    result.document["classification"] = io::to_json(classify_local(model.complex_op));
    result.document["local"] = io::to_json(model.complex_op.entries);
  }
  auto emit = [&](const auto& op) {
    const auto g = global_from_local(op, spec.sites, spec.max_sites);
    const auto blocks = split_blocks(g);
    json comps = json::array();
    for (int c : selected_components(spec)) {
      const auto& block = c == 1 ? blocks.block0 : blocks.block1;
      const Graph graph = build_component_graph(spec.sites, c - 1);
      comps.push_back({{"component", c}, {"vertices", graph.labels()}, {"block_column_stochastic", io::to_json(block)}});
    }
    result.document["blocks"] = std::move(comps);
  };
  if (model.real) {
    if (spec.mode == Mode::exact)
      emit(*model.real);
    else
      emit(to_double_operator(*model.real));
  } else {
    emit(model.complex_op);
  }
  detail::finish(result, notices);
  return result;
}

inline CommandResult cmd_quantize(const ModelSpec& spec) {
  const LoadedModel model = load_model(spec);
  const auto& op = detail::require_real(model);
  CommandResult result;
  result.document = detail::header("quantize", spec, model);
  std::vector<std::string> notices;
  json comps = json::array();
  for (int c : selected_components(spec)) {
    ComponentRun run = run_component(spec, op, c, notices);
    json r;
    for (const char* key : {"component", "mode", "n", "m", "chain", "U", "S", "unitarity_defect"}) r[key] = run.report[key];
    comps.push_back(std::move(r));
    for (auto& chk : run.checks)
      if (chk.name.find("U U^T") != std::string::npos || chk.name.find(" K") != std::string::npos ||
          chk.name.find("J^2") != std::string::npos)
        result.checks.push_back(chk);
  }
  result.document["components"] = std::move(comps);
  detail::finish(result, notices);
  return result;
}

/// Combined quantities over the selected components.
struct CombinedZeta {
  std::optional<Polynomial<Rational>> exact;
  Polynomial<double> floating;
  Matrix<double> u;
  std::vector<ComponentRun> runs;
};

inline CombinedZeta combine(const ModelSpec& spec, const LocalOperator<Rational>& op, std::vector<std::string>& notices) {
  CombinedZeta out;
  bool all_exact = true;
  Polynomial<Rational> exact = Polynomial<Rational>::constant(1);
  Polynomial<double> floating = Polynomial<double>::constant(1.0);
  for (int c : selected_components(spec)) {
    ComponentRun run = run_component(spec, op, c, notices);
    if (run.exact_reciprocal)
      exact *= *run.exact_reciprocal;
    else
      all_exact = false;
    floating *= run.float_reciprocal;
    out.u = out.runs.empty() ? run.u : direct_sum(out.u, run.u);
    out.runs.push_back(std::move(run));
  }
  if (all_exact) {
    out.exact = exact;
    out.floating = exact.cast<double>();
  } else {
    out.floating = floating;
  }
  return out;
}

inline CommandResult cmd_zeta(const ModelSpec& spec) {
  const LoadedModel model = load_model(spec);
  const auto& op = detail::require_real(model);
  CommandResult result;
  result.document = detail::header("zeta", spec, model);
  std::vector<std::string> notices;
  CombinedZeta z = combine(spec, op, notices);
  json comps = json::array();
  for (auto& run : z.runs) {
    comps.push_back(run.report);
    result.checks.insert(result.checks.end(), run.checks.begin(), run.checks.end());
  }
  result.document["components"] = std::move(comps);

  const Polynomial<double> direct = zeta_reciprocal(z.u);
  const double gap = max_coeff_gap(direct, z.floating) / std::max(1.0, max_coeff_magnitude(direct));
  result.checks.push_back({"det(I-u(U1+U2)) = det(I-uU1) det(I-uU2)", "combined", gap, multiplicativity_tol, "float",
                           gap <= multiplicativity_tol});
  json combined;
  combined["zeta_reciprocal"] = z.exact ? io::to_json(*z.exact) : io::to_json(z.floating);
  combined["zeta"] = z.exact ? io::to_json(RationalFunction<Rational>::reciprocal(*z.exact))
                             : io::to_json(RationalFunction<double>::reciprocal(z.floating));
  combined["direct_sum_gap"] = {{"value", io::to_json(gap)}, {"tolerance", multiplicativity_tol}, {"mode", "float"}};
  result.document["combined"] = std::move(combined);
  detail::finish(result, notices);
  return result;
}

/// The cyclotomic recognizer applied to 1 / reciprocal. Binary64 input is
/// first rationalized coefficientwise.
struct AbsZetaAnalysis {
  std::optional<AutomorphyWitness> automorphy;
  std::optional<Polynomial<Rational>> exact_reciprocal;
  CyclotomicOutcome cyclotomic;
  std::optional<AbsoluteZetaReport> report;
};

inline AbsZetaAnalysis analyze_absolute(const std::optional<Polynomial<Rational>>& exact, const Polynomial<double>& floating,
                                        double tol) {
  AbsZetaAnalysis a;
  std::optional<Polynomial<Rational>> rational = exact;
  if (!rational) {
    try {
      rational = rationalize_poly(floating, default_max_denominator, tol);
    } catch (const std::domain_error& e) {
      a.cyclotomic.failure = CyclotomicFailure::not_cyclotomic;
      a.cyclotomic.detail = std::string("coefficients are not rational: ") + e.what();
    }
  }
  if (rational) {
    a.exact_reciprocal = rational;
    const auto f = RationalFunction<Rational>::reciprocal(*rational);
    a.automorphy = detect_automorphy(f);
    a.cyclotomic = to_cyclotomic_form(f);
    if (a.cyclotomic.ok()) a.report = expand_absolute_zeta(*a.cyclotomic.form);
  } else {
    a.automorphy = detect_automorphy(Polynomial<double>::constant(1.0), floating, tol);
  }
  return a;
}

/// Numeric evaluation is limited to order b <= this (the recursion costs
/// grow like (shifts)^b).
inline constexpr std::size_t max_numeric_order = 4;

struct AbsZetaOptions {
  bool numeric = false;
  std::vector<double> s_samples;  // empty: critical_s +- 1
};

inline CommandResult cmd_abszeta(const ModelSpec& spec, const AbsZetaOptions& options) {
  const LoadedModel model = load_model(spec);
  const auto& op = detail::require_real(model);
  CommandResult result;
  result.document = detail::header("abszeta", spec, model);
  std::vector<std::string> notices;
  CombinedZeta z = combine(spec, op, notices);
  const AbsZetaAnalysis a = analyze_absolute(z.exact, z.floating, spec.tol);

  json doc;
  doc["zeta_reciprocal"] = a.exact_reciprocal ? io::to_json(*a.exact_reciprocal) : io::to_json(z.floating);
  doc["automorphy"] = a.automorphy ? io::to_json(*a.automorphy) : json(nullptr);
  if (a.cyclotomic.ok()) {
    doc["cyclotomic_form"] = io::to_json(*a.cyclotomic.form);
  } else {
    doc["cyclotomic_form"] = nullptr;
    doc["failure"] = {{"kind", to_string(a.cyclotomic.failure)}, {"detail", a.cyclotomic.detail}};
  }
  if (a.report) {
    const AbsoluteZetaReport& r = *a.report;
    doc["absolute_zeta"] = io::to_json(r);
    if (r.critical_s) doc["zeta_f_at_critical_s"] = zeta_f_symbolic(r, *r.critical_s);
    if (options.numeric) {
      json numeric;
      if (r.omega.size() > max_numeric_order) {
        numeric["skipped"] = "order " + std::to_string(r.omega.size()) + " exceeds " + std::to_string(max_numeric_order);
      } else {
        std::vector<double> samples = options.s_samples;
        if (samples.empty() && r.critical_s) {
          const double c = to_double(*r.critical_s);
          samples = {c + 1, c - 1};
        }
        json fe = json::array();
        for (double s : samples) {
          try {
            const auto chk = check_functional_equation(r, s);
            fe.push_back({{"s", s}, {"lhs", chk.lhs}, {"rhs", chk.rhs}, {"residual", chk.residual}, {"tolerance", 1e-5}});
            result.checks.push_back({"zeta_f(D-s)^C = eps_f(s) zeta_f(s) at s=" + json(s).dump(), "combined",
                                     chk.residual, 1e-5, "float", chk.residual <= 1e-5});
          } catch (const std::domain_error& e) {
            fe.push_back({{"s", s}, {"skipped", e.what()}});
          }
        }
        numeric["functional_equation"] = std::move(fe);
        if (r.critical_s) {
          try {
            numeric["zeta_f_at_critical_s"] = evaluate_zeta_f(r, to_double(*r.critical_s));
          } catch (const std::domain_error& e) {
            numeric["zeta_f_at_critical_s"] = {{"skipped", e.what()}};
          }
        }
        const int a_count = static_cast<int>(r.form.m_list.size());
        const int b_count = static_cast<int>(r.form.n_list.size());
        // Past every pole s = 1..b of zeta_b and past b - a.
        const double w = std::max(b_count, b_count - a_count) + 1.0;
        const double s = std::floor(to_double(r.deg_f)) + 10.0;
        try {
          const double integral = mellin_Z(r.form, w, s);
          const double subset = mellin_subset_sum(r, w, s);
          const double rel = std::abs(integral - subset) / std::max(std::abs(subset), 1e-300);
          numeric["mellin"] = {{"w", w}, {"s", s}, {"integral", integral}, {"subset_sum", subset}, {"relative_gap", rel},
                               {"tolerance", 1e-6}};
          result.checks.push_back({"Z_f(w,s) = sum_I (-1)^|I| zeta_b(w, s - deg f + m(I), n)", "combined", rel, 1e-6,
                                   "float", rel <= 1e-6});
        } catch (const std::domain_error& e) {
          numeric["mellin"] = {{"w", w}, {"s", s}, {"skipped", e.what()}};
        }
      }
      doc["numeric"] = std::move(numeric);
    }
  }
  result.document["absolute"] = std::move(doc);
  detail::finish(result, notices);
  return result;
}

struct SimulateOptions {
  int steps = 10;
  int samples = 100000;
  std::uint64_t seed = 1;
  std::optional<std::string> init;
  int walk_steps = 1000;
};

inline constexpr double sampler_tv_tol = 0.01;
inline constexpr double walk_drift_tol = 1e-9;

inline CommandResult cmd_simulate(const ModelSpec& spec, const SimulateOptions& options) {
  const LoadedModel model = load_model(spec);
  const auto& op = detail::require_real(model);
  if (options.samples < 1 || options.steps < 0) throw io::input_error("--samples must be positive and --steps non-negative");
  const LocalOperator<double> dop = to_double_operator(op);
  if (!classify_local(dop).is_pca) throw io::input_error("simulate needs a PCA local operator");
  CommandResult result;
  result.document = detail::header("simulate", spec, model);
  result.document["seed"] = options.seed;
  std::vector<std::string> notices;

  const GlobalOperator<double> g = global_from_local(dop, spec.sites, spec.max_sites);
  const std::size_t dim = g.entries.rows();
  std::vector<std::size_t> inits;
  if (options.init) {
    const Configuration c = Configuration::parse(*options.init);
    if (c.sites() != spec.sites) throw io::input_error("--init must have N sites");
    inits.push_back(c.index());
  } else {
    for (std::size_t i = 0; i < dim; ++i) inits.push_back(i);
  }

  constexpr int chunk = 10000;
  json per_init = json::array();
  for (std::size_t init : inits) {
    const Configuration start = Configuration::from_index(init, spec.sites);
    const int chunks = (options.samples + chunk - 1) / chunk;
    std::vector<std::vector<std::uint64_t>> counts(static_cast<std::size_t>(chunks), std::vector<std::uint64_t>(dim, 0));
    parallel_for(static_cast<std::size_t>(chunks), spec.threads, [&](std::size_t k) {
      Sampler sampler(dop, chunk_seed(options.seed ^ (static_cast<std::uint64_t>(init) << 40), k));
      const int begin = static_cast<int>(k) * chunk;
      const int end = std::min(options.samples, begin + chunk);
      for (int i = begin; i < end; ++i) ++counts[k][sampler.step(start).index()];
    });
    std::vector<double> freq(dim, 0.0);
    for (const auto& c : counts)
      for (std::size_t j = 0; j < dim; ++j) freq[j] += static_cast<double>(c[j]);
    double tv = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      freq[j] /= options.samples;
      tv += std::abs(freq[j] - g.entries(j, init));
    }
    tv /= 2;
    per_init.push_back({{"init", start.str()}, {"empirical", freq}, {"total_variation", tv}, {"tolerance", sampler_tv_tol}});
    result.checks.push_back({"single-step law = column of the global operator", "init " + start.str(), tv, sampler_tv_tol,
                             "float", tv <= sampler_tv_tol});
  }
  result.document["single_step"] = std::move(per_init);

  // Site densities along independent trajectories from the first initial state.
  {
    const Configuration start = Configuration::from_index(inits.front(), spec.sites);
    const int runs = std::min(options.samples, 1000);
    std::vector<std::vector<double>> density(static_cast<std::size_t>(options.steps) + 1,
                                             std::vector<double>(static_cast<std::size_t>(spec.sites), 0.0));
    for (int t = 0; t < runs; ++t) {
      const auto path = sample_trajectory(dop, start, options.steps, chunk_seed(options.seed, 1000000 + static_cast<std::uint64_t>(t)));
      for (std::size_t s = 0; s < path.size(); ++s)
        for (int x = 0; x < spec.sites; ++x) density[s][static_cast<std::size_t>(x)] += path[s][static_cast<std::size_t>(x)];
    }
    for (auto& row : density)
      for (auto& v : row) v /= runs;
    result.document["density"] = {{"init", start.str()}, {"trajectories", runs}, {"site_density", density}};
  }

  json walks = json::array();
  for (int c : selected_components(spec)) {
    ComponentRun run = run_component(spec, op, c, notices);
    QuantumCoin<double> coin{run.u, ArcSet(build_component_graph(spec.sites, c - 1))};
    const WalkState out = walk_evolve(coin, WalkState::basis(run.u.rows(), 0), options.walk_steps);
    const double drift = std::abs(out.norm() - 1.0);
    walks.push_back({{"component", c}, {"steps", options.walk_steps}, {"norm_drift", drift}, {"tolerance", walk_drift_tol}});
    result.checks.push_back({"walk norm preserved", "component " + std::to_string(c), drift, walk_drift_tol, "float",
                             drift <= walk_drift_tol});
  }
  result.document["walk"] = std::move(walks);
  detail::finish(result, notices);
  return result;
}

struct ScanPoint {
  Rational p;
  Rational q;
  std::optional<CyclotomicForm> form;
  CyclotomicFailure failure = CyclotomicFailure::none;
};

/// Grid points p, q in {0, step, 2 step, ...} within [0, 1].
inline std::vector<ScanPoint> scan_grid(const Rational& step, int sites, unsigned threads = 0) {
  if (!(step > 0) || step > 1) throw io::input_error("grid step must lie in (0, 1]");
  std::vector<Rational> values;
  for (Rational v = 0; v <= 1; v += step) values.push_back(v);
  std::vector<ScanPoint> points;
  for (const auto& p : values)
    for (const auto& q : values) points.push_back({p, q, std::nullopt, CyclotomicFailure::none});
  parallel_for(points.size(), threads, [&](std::size_t i) {
    ModelSpec spec;
    spec.sites = sites;
    spec.p = points[i].p;
    spec.q = points[i].q;
    spec.mode = Mode::exact;
    const LoadedModel model = load_model(spec);
    std::vector<std::string> notices;
    const CombinedZeta z = combine(spec, *model.real, notices);
    const AbsZetaAnalysis a = analyze_absolute(z.exact, z.floating, spec.tol);
    if (a.cyclotomic.ok())
      points[i].form = a.cyclotomic.form;
    else
      points[i].failure = a.cyclotomic.failure;
  });
  return points;
}

inline CommandResult cmd_scan(const Rational& step, int sites, unsigned threads = 0) {
  CommandResult result;
  result.document = {{"command", "scan"}, {"N", sites}, {"step", step.str()}};
  const auto points = scan_grid(step, sites, threads);
  json hits = json::array();
  json misses = json::array();
  for (const auto& pt : points) {
    if (pt.form)
      hits.push_back({{"p", pt.p.str()}, {"q", pt.q.str()}, {"form", io::to_json(*pt.form)}});
    else
      misses.push_back({{"p", pt.p.str()}, {"q", pt.q.str()}, {"failure", to_string(pt.failure)}});
  }
  result.document["grid_points"] = points.size();
  result.document["cyclotomic"] = std::move(hits);
  result.document["not_cyclotomic"] = std::move(misses);
  detail::finish(result, {});
  return result;
}

}  // namespace qips
