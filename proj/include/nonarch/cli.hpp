#pragma once

// Command-line front end: nonarch <subcommand> [--p P] [--json] [--seed S].
// Exit codes: 0 success, 1 input or validation error, 2 inconclusive
// certificate or failed assertion.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>

#include "nonarch/boundedness.hpp"
#include "nonarch/json_io.hpp"
#include "nonarch/measures.hpp"
#include "nonarch/normspace.hpp"
#include "nonarch/scenarios.hpp"

namespace nonarch {

namespace detail {

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw validation_error(path + ": " + e.what());
  }
}

inline long max_iter_default() {
  if (const char* env = std::getenv("NONARCH_MAX_ITER")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) throw validation_error("NONARCH_MAX_ITER must be a positive integer");
    return v;
  }
  return kDefaultMaxIter;
}

inline void emit(std::ostream& out, const nlohmann::json& j) { out << j.dump(2) << '\n'; }

}  // namespace detail

inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Exact p-adic norms, bounded groups and finite measures"};
  app.require_subcommand(1);
  long p = 3;
  bool as_json = false;
  std::uint64_t seed = 0;
  app.add_option("--p", p, "prime p")->capture_default_str();
  app.add_flag("--json", as_json, "machine-readable JSON output");
  app.add_option("--seed", seed, "seed for randomized sampling")->capture_default_str();
  app.fallthrough();

  std::string n1_path, n2_path;
  auto* dist = app.add_subcommand("dist-norms", "Goldman-Iwahori distance between two norms");
  dist->add_option("--n1", n1_path)->required();
  dist->add_option("--n2", n2_path)->required();

  std::string gens_path;
  long max_iter = 0;
  std::size_t max_word_len = kDefaultMaxWordLen;
  auto* bounded = app.add_subcommand("bounded", "certify boundedness of a generated matrix group");
  bounded->add_option("--gens", gens_path)->required();
  bounded->add_option("--max-iter", max_iter, "lattice closure iterations (default 64 or NONARCH_MAX_ITER)");
  bounded->add_option("--max-word-len", max_word_len)->capture_default_str();

  std::string mu_path, nu_path;
  bool use_oracle = false;
  auto* prok = app.add_subcommand("prokhorov", "exact Prokhorov distance");
  prok->add_option("--mu", mu_path)->required();
  prok->add_option("--nu", nu_path)->required();
  prok->add_flag("--oracle", use_oracle, "also run the subset-enumeration oracle");
  auto* wass = app.add_subcommand("wasserstein", "exact Wasserstein distance (ground metric min(d,1))");
  wass->add_option("--mu", mu_path)->required();
  wass->add_option("--nu", nu_path)->required();

  std::string scenario_name;
  ScenarioOptions sopt;
  auto* scen = app.add_subcommand("scenario", "run a named scenario");
  scen->add_option("name", scenario_name)->required();
  scen->add_option("--level", sopt.level)->capture_default_str();
  scen->add_option("--word-len", sopt.word_len)->capture_default_str();
  scen->add_option("--sample-size", sopt.sample_size)->capture_default_str();
  scen->add_option("--n-max", sopt.n_max)->capture_default_str();
  auto* list = app.add_subcommand("list-scenarios", "list scenario names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    const FieldSpec f(p);
    if (*list) {
      nlohmann::json names = nlohmann::json::array();
      for (const auto& [name, fn] : scenario_registry()) names.push_back(name);
      if (as_json) {
        detail::emit(out, names);
      } else {
        for (const auto& n : names) out << n.get<std::string>() << '\n';
      }
      return 0;
    }
    if (*dist) {
      const SplitNorm a = json_io::norm_from(f, detail::read_json_file(n1_path));
      const SplitNorm b = json_io::norm_from(f, detail::read_json_file(n2_path));
      const auto [s12, s21] = equivalence_constant(a, b);
      const Scalar d = s12 + s21;
      if (as_json) {
        detail::emit(out, {{"distance", d.str()}, {"sup_exponents", {s12.str(), s21.str()}}, {"homothetic", d.is_zero()}});
      } else {
        out << "distance " << d << " (log p units)\n"
            << "log_p sup n1/n2 = " << s12 << ", log_p sup n2/n1 = " << s21 << '\n';
      }
      return 0;
    }
    if (*bounded) {
      const MatGroup g(f, json_io::generators_from(detail::read_json_file(gens_path)));
      if (g.size() > kMaxGenerators) throw validation_error("at most 4 generators are supported");
      const long iters = max_iter > 0 ? max_iter : detail::max_iter_default();
      const BoundednessCert cert = certify(g, iters, max_word_len);
      if (as_json) {
        detail::emit(out, json_io::to_json(cert));
      } else {
        out << "verdict: " << verdict_name(cert) << '\n';
        if (const auto* b = std::get_if<Bounded>(&cert)) {
          out << "invariant lattice basis (generators are columns): " << json_io::to_json(b->invariant_lattice.basis()).dump() << '\n'
              << "stabilized after " << b->iterations << " iterations\n";
        } else if (const auto* u = std::get_if<Unbounded>(&cert)) {
          out << "witness: " << word_str(u->witness_word) << " (" << to_string(u->reason) << ", eigenvalue valuation "
              << u->slope << ")\n";
        } else {
          out << "no certificate after " << std::get<Inconclusive>(cert).iterations << " iterations\n";
        }
      }
      return std::holds_alternative<Inconclusive>(cert) ? 2 : 0;
    }
    if (*prok || *wass) {
      const auto mu = json_io::measure_from(f, detail::read_json_file(mu_path));
      const auto nu = json_io::measure_from(f, detail::read_json_file(nu_path));
      if (mu.index() != nu.index()) throw validation_error("measures live on different spaces");
      nlohmann::json result;
      std::visit(
          [&](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            const M& n = std::get<M>(nu);
            if (*wass) {
              result["wasserstein"] = wasserstein(m, n).str();
              return;
            }
            result["prokhorov"] = prokhorov(m, n).str();
            if (use_oracle) result["oracle"] = prokhorov_oracle(m, n).str();
          },
          mu);
      if (as_json) {
        detail::emit(out, result);
      } else {
        for (const auto& [k, v] : result.items()) out << k << ' ' << v.get<std::string>() << '\n';
      }
      if (result.contains("oracle") && result["oracle"] != result["prokhorov"]) return 2;
      return 0;
    }
    if (*scen) {
      sopt.p = p;
      sopt.seed = seed;
      const ScenarioReport rep = run_scenario(scenario_name, sopt);
      if (as_json) {
        detail::emit(out, rep.to_json());
      } else {
        out << "scenario " << rep.name << ": " << (rep.pass() ? "PASS" : "FAIL") << '\n';
        for (const auto& a : rep.assertions)
          out << "  [" << (a.pass ? "ok" : "FAIL") << "] " << a.description << ": expected " << a.expected
              << ", observed " << a.observed << '\n';
      }
      return rep.pass() ? 0 : 2;
    }
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed input: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace nonarch
