#include "fqft/errors.hpp"
#include "fqft/report.hpp"

#include <doctest.h>

using namespace fqft;

TEST_SUITE("report") {
  TEST_CASE("exact cutting passes and reports its configuration") {
    RunConfig c;
    c.l_max = 3;
    const auto r = run_command("verify-cutting", c);
    CHECK(r.passed());
    const auto j = r.to_json();
    CHECK(j.at("schema_version") == kReportSchemaVersion);
    CHECK(j.at("command") == "verify-cutting");
    CHECK(j.at("config").at("l_max") == 3);
    CHECK(j.at("passed") == true);
    CHECK_FALSE(j.contains("wall_time"));
  }

  TEST_CASE("unknown commands and invalid configurations are contract violations") {
    RunConfig c;
    CHECK_THROWS_AS(run_command("bogus", c), ContractViolation);
    c.tolerances["nonsense"] = 1e-3;
    CHECK_THROWS_AS(run_command("verify-cutting", c), ContractViolation);
    c.tolerances = {{"cutting", -1.0}};
    CHECK_THROWS_AS(c.validate(), ContractViolation);
    c.tolerances.clear();
    c.threads = 0;
    CHECK_THROWS_AS(c.validate(), ContractViolation);
    c.threads = 1;
    c.backend = "lattice";
    CHECK_THROWS_AS(c.validate(), ContractViolation);
  }

  TEST_CASE("tolerance overrides fall back to defaults") {
    RunConfig c;
    CHECK(c.tolerance("cutting") == 1e-12);
    c.tolerances["cutting"] = 1e-6;
    CHECK(c.tolerance("cutting") == 1e-6);
    CHECK(c.tolerance("qm_oracle") == 1e-10);
  }

  TEST_CASE("qm reports are independent of the thread count") {
    RunConfig c;
    c.backend = "qm";
    c.instances = 6;
    c.dim = 3;
    c.seed = 5;
    const auto serial = run_command("qm", c);
    c.threads = 3;
    const auto parallel = run_command("qm", c);
    CHECK(serial.passed());
    CHECK(serial.results == parallel.results);
  }

  TEST_CASE("formal beta of the single-marginal theory is ½ g_c²") {
    RunConfig c;
    c.backend = "formal";
    c.theory_path = std::string(FQFT_DATA_DIR) + "/theories/single-marginal.json";
    const auto r = run_command("beta", c);
    CHECK(r.passed());
    CHECK(r.results.at("beta") == r.results.at("beta_from_rescaling"));
    CHECK(r.results.at("beta").at("phi").dump().find("1/2") != std::string::npos);
  }

  TEST_CASE("free-boson beta vanishes") {
    RunConfig c;
    const auto r = run_command("beta", c);
    CHECK(r.passed());
    const auto names = [&] {
      std::vector<std::string> out;
      for (const auto& ch : r.checks) out.push_back(ch.name);
      return out;
    }();
    CHECK(std::find(names.begin(), names.end(), "free-boson-beta-vanishes") != names.end());
    const auto& k = r.results.at("k_constants");
    REQUIRE(k.size() == 1);
    CHECK(k[0].at("a") == "1");
    CHECK(k[0].at("value") == "1");
    CHECK(r.results.at("delta_v").size() == 1);
  }

  TEST_CASE("formal backend without a theory file is a resource error") {
    RunConfig c;
    c.backend = "formal";
    c.theory_path = "/nonexistent.json";
    CHECK_THROWS_AS(run_command("beta", c), ResourceError);
  }
}
