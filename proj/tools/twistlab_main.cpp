// twistlab — exact arithmetic for the twisted supersingular elliptic surfaces
// attached to y² = x³ − x over GF(3^(2n))(t).
//
// Subcommands: twist, rank, lfun, fibers, surface, verify-example.
// JSON goes to stdout, diagnostics to stderr.  Exit codes: 0 success,
// 2 invalid input, 3 enumeration budget exceeded, 4 internal consistency
// failure.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>

#include "twistlab/errors.hpp"
#include "twistlab/pipeline.hpp"

namespace {

struct CliState {
  twistlab::pipeline::Options opts;
  std::string kind, f, g;
  int json_indent = 2;
};

void add_common(CLI::App* sub, CliState& st, bool takes_kind) {
  sub->add_option("--n", st.opts.n, "tower parameter: base field GF(3^(2n))")
      ->check(CLI::Range(1u, 10u));
  if (takes_kind) {
    sub->add_option("--kind", st.kind,
                    "twist kind: quad, cubic-tau, cubic-tau2, quartic-tau, quartic-tau3, "
                    "sextic-tau, sextic-tau5");
    sub->add_option("--f", st.f, "twisting function f (e.g. \"t^3 - t\")");
    sub->add_option("--g", st.g, "twisting function g (e.g. \"z*t^4\")");
  }
  sub->add_option("--seed", st.opts.seed, "seed for randomized factorization (default 0)");
  sub->add_option("--budget", st.opts.budget_exponent,
                  "enumeration budget exponent: fields up to 3^budget (default 20)");
  sub->add_option("--threads", st.opts.threads,
                  "worker threads for point counting (0 = hardware concurrency)");
  sub->add_option("--mx", st.opts.mX,
                  "supersingular multiplicity of the base curve (P¹: 0)");
  sub->add_option("--json-indent", st.json_indent, "JSON indentation (-1 = compact, default 2)")
      ->check(CLI::Range(-1, 8));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "exact ranks and fiber types of twisted supersingular elliptic surfaces "
      "over GF(3^(2n))(t)"};
  app.require_subcommand(1);
  CliState st;

  const struct {
    const char* name;
    const char* help;
    bool takes_kind;
  } commands[] = {
      {"twist", "construct a twisted Weierstrass model and its invariants", true},
      {"rank", "Mordell–Weil rank from L-function multiplicities", true},
      {"lfun", "L-polynomials of the covers attached to a twist", true},
      {"fibers", "Kodaira fiber types, closed form and Tate's algorithm side by side", true},
      {"surface", "Euler number, b2, fiber inventory and Shioda–Tate bookkeeping", true},
      {"verify-example", "check the headline rank-2·3ⁿ example end to end (odd n)", false},
  };
  for (const auto& c : commands) add_common(app.add_subcommand(c.name, c.help), st, c.takes_kind);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  const auto given = [&](const std::string& flag) {
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    return opt != nullptr && opt->count() > 0;
  };
  if (given("--kind")) st.opts.kind = st.kind;
  if (given("--f")) st.opts.f = st.f;
  if (given("--g")) st.opts.g = st.g;

  if (const char* env = std::getenv("TWISTLAB_THREADS")) {
    try {
      st.opts.threads = static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception&) {
      std::cerr << "error: BadParameter: TWISTLAB_THREADS must be a nonnegative integer\n";
      return 2;
    }
  }

  try {
    const auto report = twistlab::pipeline::run_command(sub->get_name(), st.opts);
    std::cout << report.dump(st.json_indent) << "\n";
    return 0;
  } catch (const twistlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: Unexpected: " << e.what() << "\n";
    return 4;
  }
}
