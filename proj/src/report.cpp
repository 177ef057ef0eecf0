#include "fqft/report.hpp"

#include "fqft/errors.hpp"
#include "fqft/formal.hpp"
#include "fqft/free_boson.hpp"
#include "fqft/geometry.hpp"
#include "fqft/observables.hpp"
#include "fqft/ope.hpp"
#include "fqft/qm.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <thread>

namespace fqft {

namespace {

const std::map<std::string, double> kDefaultTolerances = {
    {"cutting", 1e-12},     // float64 cutting residual
    {"ope", 1e-10},         // float64 OPE coefficient error
    {"qm_oracle", 1e-10},   // relative jet/Taylor mismatch
    {"qm_cutting", 1e-12},  // relative split residual per jet order
};

std::string arithmetic_name(Arithmetic a) { return a == Arithmetic::exact ? "exact" : "float64"; }

void check(Report& r, std::string name, bool passed, std::string detail = {}) {
  r.checks.push_back({std::move(name), passed, std::move(detail)});
}

nlohmann::json cutting_json(const CuttingReport& c) {
  nlohmann::json j = {{"checks", c.checks.size()}, {"max_residual", c.max_residual}, {"exact", c.exact}};
  std::size_t failures = 0;
  for (const auto& ch : c.checks) failures += ch.exact_match ? 0 : 1;
  j["inexact_checks"] = failures;
  if (c.offending_index) j["offending_state"] = c.offending_label;
  return j;
}

template <class S>
void cutting_families(Report& r, const SpacePtr& space, double tol) {
  const std::vector<Rational> radii{Rational(4), Rational(3), Rational(2), Rational(3, 2), Rational(1), Rational(1, 2)};
  const std::vector<Rational> positions{Rational(3), Rational(5, 2), Rational(1), Rational(1, 2), Rational(0)};
  const auto annuli = verify_cutting(annulus_family<S>(space), radii);
  const auto cylinders = verify_cutting(cylinder_family<S>(space), positions);
  r.results["annulus"] = cutting_json(annuli);
  r.results["cylinder"] = cutting_json(cylinders);
  const std::string bound = std::is_same_v<S, ExactPower> ? "exact" : fmt::format("< {}", tol);
  check(r, "annulus-cutting", annuli.passed(tol), fmt::format("max residual {} ({})", annuli.max_residual, bound));
  check(r, "cylinder-cutting", cylinders.passed(tol), fmt::format("max residual {} ({})", cylinders.max_residual, bound));
}

template <class S>
double coefficient_error(const S& value, const Rational& expected) {
  if constexpr (is_exact_v<S>) return value == expected ? 0.0 : std::abs(Rational(value - expected).get_d()) + 1e-300;
  else return std::abs(value - expected.get_d());
}

template <class S>
void ope_checks(Report& r, const SpacePtr& space, const OpeExtraction<S>& ext, const RunConfig& config) {
  const double tol = is_exact_v<S> ? 0.0 : config.tolerance("ope");
  auto within = [&](double err) { return is_exact_v<S> ? err == 0.0 : err < tol; };
  check(r, "span-residual", ext.max_residual <= 1e-8, fmt::format("max residual {}", ext.max_residual));
  if (ext.a == "j" && ext.b == "j") {
    const auto singular = std::count_if(ext.rows.begin(), ext.rows.end(), [](const auto& row) { return row.singular; });
    bool identity_ok = false;
    for (const auto& row : ext.rows)
      if (row.singular && row.z_power == -2 && row.zbar_power == 0 && row.target == "1")
        identity_ok = within(coefficient_error(row.coefficient, Rational(1)));
    check(r, "single-singular-row", singular == 1 && identity_ok, fmt::format("{} singular rows", singular));
    // Regular rows against the U(1) descendants j^{n+1} of j.
    const auto j = named_observable<Rational>(space, "j");
    double worst = 0;
    bool complete = true;
    for (int n = 0; n + 2 <= space->l_max(); ++n) {
      const auto desc = descendant_family(j, Partition({n + 1}), Partition());
      const auto expected = desc.representative.coefficient(Rational(-(n + 2)));
      for (std::size_t i = 0; i < expected.dim(); ++i) {
        if (is_zero(expected[i])) continue;
        const auto& state = space->state(i);
        auto it = std::find_if(ext.rows.begin(), ext.rows.end(), [&](const auto& row) {
          return row.z_power == n && row.zbar_power == 0 && row.target_state == state;
        });
        if (it == ext.rows.end()) {
          complete = false;
          continue;
        }
        worst = std::max(worst, coefficient_error(it->coefficient, expected[i]));
      }
    }
    check(r, "regular-rows-match-descendants", complete && within(worst), fmt::format("max error {}", worst));
  }
  if (ext.a == kMarginalLabel && ext.b == kMarginalLabel) {
    S k{}, c{};
    for (const auto& row : ext.rows) {
      if (row.target == "1" && row.z_power == -2 && row.zbar_power == -2) k = row.coefficient;
      if (row.target_state == observable_state(kMarginalLabel) && row.z_power == -1 && row.zbar_power == -1)
        c = row.coefficient;
    }
    check(r, "K-equals-one", within(coefficient_error(k, Rational(1))), "K = " + fmt::format("{}", to_double(k)));
    check(r, "C-equals-zero", within(coefficient_error(c, Rational(0))), "C = " + fmt::format("{}", to_double(c)));
  }
}

template <class S>
void run_free_boson_ope(Report& r, const RunConfig& config) {
  const auto space = build_space(config.l_max);
  const auto a = named_observable<S>(space, config.a);
  const auto b = named_observable<S>(space, config.b);
  const auto ext = ope_extract(a, b);
  r.results["extraction"] = extraction_json(ext);
  ope_checks(r, space, ext, config);
}

nlohmann::json jet_json(const Jet<Rational>& jet) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [m, q] : jet.terms()) out.push_back({{"monomial", m}, {"coefficient", rational_json(q)}});
  return out;
}

OpeTable load_backend_table(const RunConfig& config) {
  if (config.backend == "formal") {
    if (config.theory_path.empty()) throw ContractViolation("--backend formal requires --theory PATH");
    return load_ope_table(config.theory_path);
  }
  if (config.backend == "free-boson") return free_boson_table(build_space(config.l_max));
  throw ContractViolation("backend " + config.backend + " has no OPE table");
}

}  // namespace

void RunConfig::validate() const {
  if (l_max < 0) throw ContractViolation("l_max must be >= 0");
  for (const auto& [k, v] : tolerances) {
    if (!kDefaultTolerances.count(k)) throw ContractViolation("unknown tolerance key " + k);
    if (!(v > 0)) throw ContractViolation("tolerance " + k + " must be positive");
  }
  if (backend != "free-boson" && backend != "formal" && backend != "qm")
    throw ContractViolation("unknown backend " + backend);
  if (threads < 1) throw ContractViolation("threads must be >= 1");
  if (dim < 1) throw ContractViolation("dim must be >= 1");
  if (orders < 0 || orders > 2) throw ContractViolation("orders must be 0, 1 or 2");
  if (instances < 1) throw ContractViolation("instances must be >= 1");
}

double RunConfig::tolerance(const std::string& key) const {
  auto it = tolerances.find(key);
  return it != tolerances.end() ? it->second : kDefaultTolerances.at(key);
}

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

nlohmann::json config_json(const RunConfig& c) {
  nlohmann::json tol = nlohmann::json::object();
  for (const auto& [k, v] : kDefaultTolerances) tol[k] = c.tolerance(k);
  return {{"l_max", c.l_max},   {"arithmetic", arithmetic_name(c.arithmetic)},
          {"tolerances", tol},  {"backend", c.backend},
          {"theory", c.theory_path}, {"seed", c.seed},
          {"threads", c.threads}, {"dim", c.dim},
          {"orders", c.orders}, {"instances", c.instances},
          {"a", c.a},           {"b", c.b}};
}

nlohmann::json Report::to_json() const {
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : checks) cs.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return {{"schema_version", kReportSchemaVersion},
          {"command", command},
          {"config", config_json(config)},
          {"results", results},
          {"checks", cs},
          {"passed", passed()}};
}

Report run_verify_cutting(const RunConfig& config) {
  Report r{"verify-cutting", config};
  const auto space = build_space(config.l_max);
  r.results["dim"] = space->dim();
  if (config.arithmetic == Arithmetic::exact) cutting_families<ExactPower>(r, space, 0.0);
  else cutting_families<double>(r, space, config.tolerance("cutting"));
  return r;
}

Report run_ope(const RunConfig& config) {
  Report r{"ope", config};
  if (config.backend == "formal") {
    const auto table = load_backend_table(config);
    r.results["table"] = to_json(table);
    check(r, "table-valid", true);
    return r;
  }
  if (config.backend != "free-boson") throw ContractViolation("ope supports the free-boson and formal backends");
  if (config.arithmetic == Arithmetic::exact) run_free_boson_ope<Rational>(r, config);
  else run_free_boson_ope<double>(r, config);
  return r;
}

Report run_beta(const RunConfig& config) {
  Report r{"beta", config};
  const FormalTheory theory(load_backend_table(config));
  const auto b = beta(theory);
  const auto dd = double_deform(theory, config.l_max);
  const auto extracted = beta_from_rescaling(theory, dd.pf);
  const auto shift = rescale_radius(theory, dd.pf) - dd.pf;

  nlohmann::json constants = nlohmann::json::array();
  for (const auto& [key, c] : b.structure_constants) {
    const auto& [x, y, z] = key;
    constants.push_back({{"a", x}, {"b", y}, {"c", z}, {"value", rational_json(c)}});
  }
  const auto& table = theory.table();
  nlohmann::json k_constants = nlohmann::json::array(), corrections = nlohmann::json::array();
  for (const auto& alpha : b.marginals)
    for (const auto& beta_label : b.marginals) {
      for (const auto& a : table.dimension_zero())
        if (const Rational k = table.k_constant(alpha, beta_label, a); k != 0)
          k_constants.push_back({{"alpha", alpha}, {"beta", beta_label}, {"a", a}, {"value", rational_json(k)}});
      corrections.push_back({{"alpha", alpha},
                             {"beta", beta_label},
                             {"delta_v", compute_correction(theory, alpha, beta_label).expansion.to_string()}});
    }
  nlohmann::json betas = nlohmann::json::object(), running = nlohmann::json::object(),
                 from_rescaling = nlohmann::json::object();
  bool agree = true, zero = true;
  for (const auto& gamma : b.marginals) {
    betas[gamma] = jet_json(b.beta.at(gamma));
    from_rescaling[gamma] = jet_json(extracted.at(gamma));
    running[gamma] = b.running.at(gamma).to_string();
    agree = agree && extracted.at(gamma) == b.beta.at(gamma);
    zero = zero && b.beta.at(gamma).is_zero();
  }
  r.results["marginals"] = b.marginals;
  r.results["structure_constants"] = constants;
  r.results["k_constants"] = k_constants;
  r.results["delta_v"] = corrections;
  r.results["beta"] = betas;
  r.results["beta_from_rescaling"] = from_rescaling;
  r.results["running"] = running;
  r.results["rescaling_shift"] = shift.to_string();
  check(r, "rescaling-matches-beta", shift == predicted_anomaly(theory, b),
        "rescale_radius(pf) - pf against log(lambda) beta^c * integral of O_c");
  check(r, "beta-from-rescaling", agree);
  if (config.backend == "free-boson") check(r, "free-boson-beta-vanishes", zero);
  return r;
}

Report run_qm(const RunConfig& config) {
  Report r{"qm", config};
  const auto n = static_cast<std::size_t>(config.instances);
  std::vector<QmOracleResult> results(n);
  std::vector<std::string> errors(n);
  auto work = [&](std::size_t begin) {
    for (std::size_t i = begin; i < n; i += static_cast<std::size_t>(config.threads)) {
      try {
        results[i] = qm_oracle_check(random_instance(config.seed + i, config.dim), config.orders);
      } catch (const Error& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < config.threads; ++t) pool.emplace_back([&work, t] { work(static_cast<std::size_t>(t)); });
  work(0);
  for (auto& t : pool) t.join();
  double worst_oracle = 0, worst_cut = 0;
  nlohmann::json items = nlohmann::json::array();
  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i].empty()) {
      items.push_back({{"seed", config.seed + i}, {"error", errors[i]}});
      continue;
    }
    worst_oracle = std::max(worst_oracle, results[i].max_order_error());
    worst_cut = std::max(worst_cut, results[i].max_cutting_error());
    items.push_back({{"seed", config.seed + i},
                     {"dim", results[i].dim},
                     {"order_errors", results[i].order_errors},
                     {"cutting_errors", results[i].cutting_errors}});
  }
  const bool clean = std::all_of(errors.begin(), errors.end(), [](const auto& e) { return e.empty(); });
  r.results["instances"] = items;
  r.results["max_oracle_error"] = worst_oracle;
  r.results["max_cutting_error"] = worst_cut;
  check(r, "oracle", clean && worst_oracle < config.tolerance("qm_oracle"), fmt::format("max relative error {}", worst_oracle));
  check(r, "cutting", clean && worst_cut < config.tolerance("qm_cutting"), fmt::format("max relative residual {}", worst_cut));
  return r;
}

Report run_all(const RunConfig& config) {
  Report r{"all", config};
  auto merge = [&](const Report& sub) {
    r.results[sub.command] = sub.results;
    for (const auto& c : sub.checks) r.checks.push_back({sub.command + "/" + c.name, c.passed, c.detail});
  };
  RunConfig fb = config;
  if (fb.backend == "qm") fb.backend = "free-boson";
  merge(run_verify_cutting(fb));
  RunConfig ope_cfg = fb;
  ope_cfg.backend = "free-boson";
  merge(run_ope(ope_cfg));
  merge(run_beta(fb));
  merge(run_qm(config));
  return r;
}

Report run_command(const std::string& command, const RunConfig& config) {
  config.validate();
  spdlog::debug("running {} (l_max={}, backend={})", command, config.l_max, config.backend);
  if (command == "verify-cutting") return run_verify_cutting(config);
  if (command == "ope") return run_ope(config);
  if (command == "beta") return run_beta(config);
  if (command == "qm") return run_qm(config);
  if (command == "all") return run_all(config);
  throw ContractViolation("unknown command " + command);
}

}  // namespace fqft
