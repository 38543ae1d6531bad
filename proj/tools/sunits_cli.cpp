#include <chrono>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "sunits/sunits.hpp"

namespace {

using namespace sunits;

struct Options {
  std::string config, out, csv, suite = "all";
  std::optional<long> height;
  std::optional<int> steps;
  std::optional<unsigned> threads;
};

int exit_code(const Error& e) {
  if (e.is_internal_assertion()) return 3;
  return 1;
}

void emit(const json& report, const Options& o) {
  const std::string text = report.dump(2);
  if (o.out.empty()) std::cout << text << "\n";
  else {
    std::ofstream f(o.out);
    require(f.good(), ErrorKind::ConfigError, "cannot write " + o.out);
    f << text << "\n";
  }
  if (!o.csv.empty()) {
    std::ofstream f(o.csv);
    require(f.good(), ErrorKind::ConfigError, "cannot write " + o.csv);
    f << witnesses_csv(report);
  }
}

int run_experiment(const std::string& name, const Options& o) {
  Overrides ov{o.height, o.steps, o.threads};
  Config c = load_config_file(o.config, ov);
  auto t0 = std::chrono::steady_clock::now();
  json r;
  if (name == "image-count") r = image_count_experiment(c);
  else if (name == "orbit-count") r = orbit_count_experiment(c);
  else if (name == "unit-eq") r = unit_eq_experiment(c);
  else if (name == "curves") r = curves_experiment(c);
  else if (name == "escape-cert") r = escape_cert_experiment(c);
  else if (name == "families") r = families_experiment(c);
  else r = interpolate_experiment(c);
  r["timing"] = json{{"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()},
                     {"threads", resolve_threads(c.threads)}};
  emit(r, o);
  return 0;
}

int run_verify(const Options& o) {
  auto results = run_property_suites(o.suite);
  bool ok = true;
  for (auto& r : results) {
    std::cerr << (r.passed() ? "PASS " : "FAIL ") << r.name << " (" << r.checks << " checks, " << r.seconds << " s)\n";
    for (std::size_t i = 0; i < r.failures.size() && i < 10; ++i) std::cerr << "  " << r.failures[i] << "\n";
    ok = ok && r.passed();
  }
  json rep{{"pipeline", "verify"}, {"suite", o.suite}, {"results", suites_json(results)}, {"passed", ok}};
  emit(rep, o);
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"S-units in arithmetic dynamics: experiments and verification"};
  app.require_subcommand(1);
  Options o;
  const std::vector<std::pair<std::string, std::string>> experiments = {
      {"image-count", "count S-unit values of phi on a height box"},
      {"orbit-count", "count S-unit values along an orbit"},
      {"unit-eq", "solve the unit equation attached to a monic map"},
      {"curves", "build superelliptic twists and search their points"},
      {"escape-cert", "build and check a valuation-escape certificate"},
      {"families", "explicit infinite and power-map families"},
      {"interpolate", "Lagrange-interpolated polynomial through a chain"},
  };
  for (auto& [name, help] : experiments) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", o.config, "JSON config")->required();
    sub->add_option("--height", o.height, "height bound H");
    sub->add_option("--steps", o.steps, "orbit steps N");
    sub->add_option("--threads", o.threads, "worker threads (0 = hardware)");
    sub->add_option("--out", o.out, "write the JSON report here");
    sub->add_option("--csv", o.csv, "write the witness table here");
  }
  auto* verify = app.add_subcommand("verify", "run the seeded property suites");
  verify->add_option("--suite", o.suite, "kernel, places, lemma-poles, dynamics, reduction, trajectory, interpolation or all");
  verify->add_option("--out", o.out, "write the JSON summary here");
  verify->add_option("--threads", o.threads, "unused");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  try {
    for (auto* sub : app.get_subcommands()) {
      if (sub->get_name() == "verify") return run_verify(o);
      return run_experiment(sub->get_name(), o);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e);
  }
  return 1;
}
