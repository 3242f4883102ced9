// irh: phase-diagram and pressure solver for the infinite-range-hopping
// Bose-Hubbard model with random site energies.
//
// Subcommands: curve, constants, pressure, oracle, ids.
// Exit codes: 0 ok, 2 config error, 3 internal invariant violation.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "irh/disorder.hpp"
#include "irh/errors.hpp"
#include "irh/oracle.hpp"
#include "irh/phase.hpp"
#include "irh/pressure.hpp"
#include "irh/singlesite.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

json default_config() {
  return json{
      {"seed", 0},
      {"jobs", 0},  // 0 -> logical cores
      {"out", "out"},
      {"model", {{"interaction", "finite"}, {"lambda", 1.0}}},
      {"disorder", {{"kind", "point"}, {"eps", 0.0}}},
      {"sweep",
       {{"rho_min", 0.02},
        {"rho_max", 1.98},
        {"points", 99},
        {"beta_max", 500.0}}},
      {"pressure",
       {{"beta_min", 0.5},
        {"beta_max", 8.0},
        {"beta_points", 10},
        {"mu_min", -1.0},
        {"mu_max", 2.0},
        {"mu_points", 10}}},
      {"oracle",
       {{"V", json::array({2, 3, 4})},
        {"n_max", 3},
        {"beta", 1.0},
        {"mu", 0.5},
        {"lambda", 1.0}}},
      {"ids",
       {{"V", 500},
        {"samples", 50},
        {"E_min", 0.0},
        {"E_max", 4.0},
        {"E_points", 41}}},
  };
}

// overlay `user` onto `base`, rejecting keys absent from the skeleton; the
// disorder section is schema'd by kind instead
void merge_config(json& base, const json& user, const std::string& path) {
  if (!user.is_object())
    throw config_error("config: expected an object at '" + path + "'");
  for (const auto& [key, value] : user.items()) {
    const std::string here = path.empty() ? key : path + "." + key;
    if (key == "disorder" && path.empty()) {
      static const std::map<std::string, std::set<std::string>> allowed = {
          {"point", {"kind", "eps"}},
          {"bernoulli", {"kind", "p", "eps"}},
          {"multinomial", {"kind", "m", "eps"}},
          {"uniform", {"kind", "eps"}},
          {"discrete", {"kind", "atoms"}},
      };
      if (!value.is_object() || !value.contains("kind"))
        throw config_error("config: disorder needs a 'kind'");
      const auto it = allowed.find(value["kind"].get<std::string>());
      if (it == allowed.end())
        throw config_error("config: unknown disorder kind");
      for (const auto& [dk, dv] : value.items())
        if (!it->second.count(dk))
          throw config_error("config: unknown key 'disorder." + dk + "'");
      base["disorder"] = value;
      continue;
    }
    if (!base.contains(key))
      throw config_error("config: unknown key '" + here + "'");
    if (base[key].is_object())
      merge_config(base[key], value, here);
    else
      base[key] = value;
  }
}

irh::Interaction interaction_from(const json& model) {
  const std::string kind = model.at("interaction").get<std::string>();
  if (kind == "finite") return irh::Interaction::finite(model.at("lambda").get<double>());
  if (kind == "hardcore") return irh::Interaction::hard_core();
  if (kind == "perfect") return irh::Interaction::perfect();
  throw config_error("config: model.interaction must be finite|hardcore|perfect");
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw config_error("config: grid needs at least one point");
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i)
    v[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return v;
}

void write_file(const fs::path& p, const std::string& body) {
  fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << body;
}

// execution details that must not affect output bytes
json strip_runtime_keys(json cfg) {
  cfg.erase("out");
  cfg.erase("jobs");
  return cfg;
}

// leading comment block stamped into every text output
std::string stamp(const json& resolved) {
  return "# format_version: 1\n# config: " + strip_runtime_keys(resolved).dump() +
         "\n";
}

std::string gnuplot_script(const irh::CriticalCurve& curve, const json& resolved) {
  std::string gp = stamp(resolved);
  gp += "set datafile separator ','\n"
        "set xlabel 'rho'\nset ylabel 'beta_c'\nset key off\n";
  for (const auto& pt : curve.points)
    if (pt.status == irh::PointStatus::Divergent)
      gp += "set arrow from " + fmt(pt.rho) + ", graph 0 to " + fmt(pt.rho) +
            ", graph 1 nohead dt 2\n";
  gp += "plot 'curve.csv' skip 1 using 1:2 with linespoints pt 7 ps 0.4\n";
  return gp;
}

struct CurveJob {
  std::string label;  // empty -> write directly into out/
  irh::Interaction interaction;
  irh::DisorderSpec spec;
  std::vector<double> rho;
};

std::vector<double> step_grid(double lo, double hi, double step) {
  std::vector<double> v;
  for (int i = 0;; ++i) {
    const double x = lo + i * step;
    if (x > hi + 1e-12) break;
    v.push_back(x);
  }
  return v;
}

std::vector<CurveJob> preset_jobs(const std::string& preset) {
  const auto bern = irh::DisorderSpec::bernoulli(0.5, 2.0);
  const auto nonrandom = irh::DisorderSpec::point_mass();
  const auto full = step_grid(0.02, 1.98, 0.02);
  const auto hc_grid = step_grid(0.02, 0.98, 0.02);
  std::vector<CurveJob> jobs;
  if (preset == "fig1") {
    for (double l : {3.0, 3.3, 4.0, 6.0, 10.0})
      jobs.push_back({"lambda" + fmt(l), irh::Interaction::finite(l), bern, full});
    jobs.push_back({"hardcore", irh::Interaction::hard_core(), bern, hc_grid});
  } else if (preset == "fig2") {
    const auto tri = irh::DisorderSpec::multinomial_equidistant(3, 10.0);
    for (double l : {3.0, 4.0, 6.0, 8.0})
      jobs.push_back({"lambda" + fmt(l), irh::Interaction::finite(l), tri, full});
  } else if (preset == "fig3") {
    const auto multi = irh::DisorderSpec::multinomial_equidistant(10, 10.0);
    jobs.push_back({"lambda8", irh::Interaction::finite(8.0), multi, full});
  } else if (preset == "fig4") {
    const auto multi = irh::DisorderSpec::multinomial_equidistant(10, 3.0);
    jobs.push_back({"lambda10", irh::Interaction::finite(10.0), multi, full});
    jobs.push_back({"nonrandom", irh::Interaction::finite(10.0), nonrandom, full});
  } else if (preset == "fig5") {
    jobs.push_back({"lambda0.1", irh::Interaction::finite(0.1), bern, full});
    jobs.push_back({"nonrandom", irh::Interaction::finite(0.1), nonrandom, full});
  } else {
    throw config_error("unknown preset '" + preset + "'");
  }
  return jobs;
}

int cmd_curve(const json& cfg, const std::string& preset) {
  const double beta_max = cfg["sweep"]["beta_max"].get<double>();
  int jobs_n = cfg["jobs"].get<int>();
  if (jobs_n <= 0) jobs_n = std::max(1u, std::thread::hardware_concurrency());

  std::vector<CurveJob> jobs;
  if (!preset.empty()) {
    jobs = preset_jobs(preset);
  } else {
    const auto& sw = cfg["sweep"];
    const int points = sw["points"].get<int>();
    if (points < 1) throw config_error("config: sweep.points must be >= 1");
    jobs.push_back({"", interaction_from(cfg["model"]),
                    irh::DisorderSpec::from_json(cfg["disorder"]),
                    linspace(sw["rho_min"].get<double>(),
                             sw["rho_max"].get<double>(), points)});
  }

  const fs::path out = cfg["out"].get<std::string>();
  for (const auto& job : jobs) {
    const auto curve =
        irh::curve_sweep(job.rho, job.interaction, job.spec, beta_max, jobs_n);
    json resolved = cfg;
    resolved["model"] =
        job.interaction.kind == irh::InteractionKind::Finite
            ? json{{"interaction", "finite"}, {"lambda", job.interaction.lambda}}
        : job.interaction.kind == irh::InteractionKind::HardCore
            ? json{{"interaction", "hardcore"}}
            : json{{"interaction", "perfect"}};
    resolved["disorder"] = job.spec.to_json();
    if (!preset.empty()) resolved["preset"] = preset;

    const fs::path dir = job.label.empty() ? out : out / job.label;
    write_file(dir / "curve.csv", stamp(resolved) + irh::curve_to_csv(curve));
    json jc = irh::curve_to_json(curve);
    jc["config"] = strip_runtime_keys(resolved);
    write_file(dir / "curve.json", jc.dump(2) + "\n");
    write_file(dir / "curve.gp", gnuplot_script(curve, resolved));
    std::cout << "wrote " << (dir / "curve.csv").string() << " ("
              << curve.points.size() << " points)\n";
  }
  return 0;
}

int cmd_constants(const json& cfg) {
  namespace kc = irh::constants;
  const auto& model = cfg["model"];
  const double lambda =
      model["interaction"] == "finite" ? model["lambda"].get<double>() : 0.0;
  double p = 0.5, eps = 2.0;
  if (cfg["disorder"]["kind"] == "bernoulli") {
    p = cfg["disorder"]["p"].get<double>();
    eps = cfg["disorder"]["eps"].get<double>();
  } else if (cfg["disorder"].contains("eps")) {
    eps = cfg["disorder"]["eps"].get<double>();
  }

  json out;
  out["format_version"] = 1;
  out["config"] = strip_runtime_keys(cfg);
  auto emit = [&](const std::string& name, auto&& compute) {
    try {
      out[name] = compute();
    } catch (const std::exception&) {
      out[name] = nullptr;
    }
  };
  emit("bernoulli_hc_eps_cr", [] { return kc::bernoulli_hc_eps_cr; });
  emit("eps_cr_bernoulli", [&] { return kc::eps_cr_bernoulli(lambda, p); });
  emit("lambda_c1", [&] { return kc::lambda_c1(eps, p); });
  emit("lambda_c1_nonrandom", [] { return kc::lambda_ck_nonrandom(1); });
  emit("lambda_c2_nonrandom", [] { return kc::lambda_ck_nonrandom(2); });
  emit("lambda_c_1mp", [&] { return kc::lambda_c_1mp(eps, p); });
  emit("eps_cr2_minus", [&] { return kc::eps_cr2_pm(lambda, p).first; });
  emit("eps_cr2_plus", [&] { return kc::eps_cr2_pm(lambda, p).second; });
  emit("lambda_c_2mp", [&] { return kc::lambda_c_2mp(eps, p); });
  emit("trinomial_hc_eps_cr", [] { return kc::trinomial_hc_eps_cr; });
  emit("trinomial_eps_cr", [&] { return kc::trinomial_eps_cr(lambda); });
  emit("uniform_lambda_c1", [&] { return kc::uniform_lambda_ck(eps, 1); });
  emit("uniform_lambda_c2", [&] { return kc::uniform_lambda_ck(eps, 2); });
  emit("small_lambda_mu", [&] { return kc::small_lambda_mu(eps); });
  emit("mu_minus", [&] {
    auto v = kc::mu_pm(eps, p);
    if (!v) throw std::domain_error("n/a");
    return v->first;
  });
  emit("mu_plus", [&] {
    auto v = kc::mu_pm(eps, p);
    if (!v) throw std::domain_error("n/a");
    return v->second;
  });

  for (const auto& [k, v] : out.items())
    if (k != "config" && k != "format_version")
      std::cout << k << " = " << (v.is_null() ? "n/a" : fmt(v.get<double>()))
                << "\n";
  write_file(fs::path(cfg["out"].get<std::string>()) / "constants.json",
             out.dump(2) + "\n");
  return 0;
}

int cmd_pressure(const json& cfg) {
  const auto& pc = cfg["pressure"];
  const auto betas = linspace(pc["beta_min"].get<double>(),
                              pc["beta_max"].get<double>(),
                              pc["beta_points"].get<int>());
  const auto mus = linspace(pc["mu_min"].get<double>(),
                            pc["mu_max"].get<double>(),
                            pc["mu_points"].get<int>());
  const auto interaction = interaction_from(cfg["model"]);
  const auto spec = irh::DisorderSpec::from_json(cfg["disorder"]);

  std::string csv = stamp(cfg) + "beta,mu,p,r_star,bec\n";
  for (double beta : betas) {
    for (double mu : mus) {
      if (interaction.kind == irh::InteractionKind::Perfect) {
        csv += fmt(beta) + "," + fmt(mu) + "," +
               fmt(irh::perfect_pressure(spec, beta, mu)) + ",0,0\n";
        continue;
      }
      const auto res =
          irh::variational_pressure({beta, mu, interaction}, spec);
      csv += fmt(beta) + "," + fmt(mu) + "," + fmt(res.pressure) + "," +
             fmt(res.r_star) + "," + (res.bec ? "1" : "0") + "\n";
    }
  }
  write_file(fs::path(cfg["out"].get<std::string>()) / "pressure.csv", csv);
  return 0;
}

int cmd_ids(const json& cfg) {
  const auto& ic = cfg["ids"];
  const auto grid = linspace(ic["E_min"].get<double>(),
                             ic["E_max"].get<double>(),
                             ic["E_points"].get<int>());
  const auto spec = irh::DisorderSpec::from_json(cfg["disorder"]);
  const auto pts =
      irh::ids_empirical(ic["V"].get<int>(), spec, ic["samples"].get<int>(),
                         grid, cfg["seed"].get<std::uint64_t>());
  std::string csv = stamp(cfg) + "E,N_bar,stderr\n";
  for (const auto& pt : pts)
    csv += fmt(pt.E) + "," + fmt(pt.n_bar) + "," + fmt(pt.stderr_) + "\n";
  write_file(fs::path(cfg["out"].get<std::string>()) / "ids.csv", csv);
  return 0;
}

int cmd_oracle(const json& cfg) {
  const auto& oc = cfg["oracle"];
  const auto spec = irh::DisorderSpec::from_json(cfg["disorder"]);
  const auto seed = cfg["seed"].get<std::uint64_t>();
  std::string csv = stamp(cfg) + "V,beta,mu,lambda,seed,p_exact,p_appr,gap\n";
  for (int V : oc["V"].get<std::vector<int>>()) {
    const auto real = irh::LatticeRealization::sample(
        V, oc["n_max"].get<int>(), oc["beta"].get<double>(),
        oc["mu"].get<double>(), oc["lambda"].get<double>(), spec, seed);
    const double exact = irh::exact_pressure(real);
    const double appr = irh::approx_pressure_sup(real).value;
    csv += std::to_string(V) + "," + fmt(real.beta) + "," + fmt(real.mu) +
           "," + fmt(real.lambda) + "," + std::to_string(seed) + "," +
           fmt(exact) + "," + fmt(appr) + "," + fmt(exact - appr) + "\n";
    if (exact - appr < -1e-9)
      throw irh::solver_error("oracle: variational bound violated");
  }
  write_file(fs::path(cfg["out"].get<std::string>()) / "gap.csv", csv);
  return cmd_ids(cfg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"infinite-range-hopping Bose-Hubbard phase diagram solver"};
  app.require_subcommand(1);

  std::string config_path, preset, out_dir;
  std::optional<int> jobs;
  std::optional<std::uint64_t> seed;
  std::optional<double> beta_max;
  for (const char* name : {"curve", "constants", "pressure", "oracle", "ids"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON config file");
    if (std::string(name) == "curve")
      sub->add_option("--preset", preset)
          ->check(CLI::IsMember({"fig1", "fig2", "fig3", "fig4", "fig5"}));
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--jobs", jobs, "worker threads (0 = logical cores)");
    sub->add_option("--seed", seed);
    sub->add_option("--beta-max", beta_max);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    json cfg = default_config();
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw config_error("cannot open config " + config_path);
      json user;
      try {
        user = json::parse(f);
      } catch (const json::parse_error& e) {
        throw config_error(std::string("config parse: ") + e.what());
      }
      merge_config(cfg, user, "");
    }
    if (!out_dir.empty()) cfg["out"] = out_dir;
    if (jobs) cfg["jobs"] = *jobs;
    if (seed) cfg["seed"] = *seed;
    if (beta_max) cfg["sweep"]["beta_max"] = *beta_max;

    const std::string sub = app.get_subcommands().front()->get_name();
    if (sub == "curve") return cmd_curve(cfg, preset);
    if (sub == "constants") return cmd_constants(cfg);
    if (sub == "pressure") return cmd_pressure(cfg);
    if (sub == "oracle") return cmd_oracle(cfg);
    if (sub == "ids") return cmd_ids(cfg);
    return 2;
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
