#include "fqft/errors.hpp"
#include "fqft/report.hpp"
#include "fqft/space_json.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <utility>
#include <vector>

namespace {

void configure_logging() {
  spdlog::set_default_logger(spdlog::stderr_color_st("fqft"));
  const char* level = std::getenv("FQFT_LOG");
  spdlog::set_level(level ? spdlog::level::from_str(level) : spdlog::level::warn);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw fqft::ResourceError("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"Functorial QFT toolkit: cutting checks, OPE extraction, beta functions, QM oracle"};
  app.require_subcommand(1);

  fqft::RunConfig config;
  std::string arithmetic = "exact";
  std::string out_path;
  std::vector<std::string> tolerances;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--lmax", config.l_max, "Fock truncation level")->check(CLI::NonNegativeNumber);
    sub->add_option("--arithmetic", arithmetic, "exact or float64")->check(CLI::IsMember({"exact", "float64"}));
    sub->add_option("--backend", config.backend, "free-boson, formal or qm")
        ->check(CLI::IsMember({"free-boson", "formal", "qm"}));
    sub->add_option("--theory", config.theory_path, "OPE table JSON for the formal backend");
    sub->add_option("--out", out_path, "write the JSON report here instead of stdout");
    sub->add_option("--seed", config.seed, "random seed");
    sub->add_option("--threads", config.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--tolerance", tolerances, "KEY=VAL threshold override");
  };

  const std::vector<std::pair<std::string, std::string>> commands{
      {"verify-cutting", "check that annuli and cylinders compose under cutting"},
      {"ope", "extract the OPE rows of two observables"},
      {"beta", "deform by the marginal couplings and report the beta function"},
      {"qm", "compare the quantum-mechanics deformation against its Taylor oracle"},
      {"all", "run every check above"}};
  for (const auto& [name, description] : commands) {
    auto* sub = app.add_subcommand(name, description);
    add_common(sub);
    if (name == "ope") {
      sub->add_option("--a", config.a, "observable at z");
      sub->add_option("--b", config.b, "observable at the origin");
    }
    if (name == "qm" || name == "all") {
      sub->add_option("--dim", config.dim, "Hilbert space dimension")->check(CLI::PositiveNumber);
      sub->add_option("--orders", config.orders, "highest coupling order compared")->check(CLI::Range(0, 2));
      sub->add_option("--instances", config.instances, "random instances")->check(CLI::PositiveNumber);
    }
  }

  auto* dump = app.add_subcommand("dump-space", "print the truncated Fock basis and mode matrices as JSON");
  dump->add_option("--lmax", config.l_max, "Fock truncation level")->check(CLI::NonNegativeNumber);
  dump->add_option("--out", out_path, "write the dump here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Error& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    config.arithmetic = arithmetic == "exact" ? fqft::Arithmetic::exact : fqft::Arithmetic::float64;
    for (const auto& kv : tolerances) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw fqft::ContractViolation("--tolerance expects KEY=VAL, got " + kv);
      config.tolerances[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
    const std::string command = app.get_subcommands().front()->get_name();
    if (command == "dump-space") {
      const auto space = fqft::build_space(config.l_max);
      const std::string json = fqft::space_json(space, fqft::standard_modes(space)).dump() + "\n";
      if (out_path.empty()) std::cout << json;
      else write_file(out_path, json);
      return 0;
    }
    const auto start = std::chrono::steady_clock::now();
    const auto report = fqft::run_command(command, config);
    const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start;
    const std::string json = report.to_json().dump(2) + "\n";
    if (out_path.empty()) {
      std::cout << json;
    } else {
      write_file(out_path, json);
    }
    std::cerr << command << ": " << (report.passed() ? "pass" : "FAIL") << " in " << wall.count() << " s\n";
    return report.passed() ? 0 : 1;
  } catch (const fqft::ContractViolation& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
