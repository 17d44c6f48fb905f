// liesys: exact Lie-bracket analysis of ODE systems, t-dependent scaling
// transforms, numerical integration, and (t-dependent) superposition rules
// for the second-order Riccati family.
//
// Exit codes: 0 success / verdict true, 1 verdict false, 2 input error,
// 3 numerical failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "liesys/liesys.hpp"

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;
constexpr int kExitOk = 0;
constexpr int kExitVerdictFalse = 1;
constexpr int kExitInputError = 2;
constexpr int kExitNumericalError = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw liesys::InputError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw liesys::InputError("cannot open file for writing: " + path);
  out << text;
}

json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw liesys::InputError("invalid JSON in " + origin + ": " + e.what());
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<double> parse_double_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  for (const std::string& part : split_list(s)) {
    try {
      std::size_t used = 0;
      const double v = std::stod(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
      out.push_back(v);
    } catch (const std::exception&) {
      throw liesys::InputError("cannot parse " + what + " entry: '" + part + "'");
    }
  }
  return out;
}

std::pair<double, double> parse_span(const std::string& s) {
  const std::size_t colon = s.find(':');
  if (colon == std::string::npos)
    throw liesys::InputError("span must have the form A:B, got '" + s + "'");
  const std::vector<double> ab{
      parse_double_list(s.substr(0, colon), "span")[0],
      parse_double_list(s.substr(colon + 1), "span")[0]};
  if (!(ab[0] < ab[1]))
    throw liesys::InputError("span must satisfy A < B, got '" + s + "'");
  return {ab[0], ab[1]};
}

// ---------------------------------------------------------------------------
// Config documents.

struct GeneratorsFile {
  std::vector<std::string> variables;
  std::vector<liesys::PolyVectorField> fields;
};

GeneratorsFile load_generators(const std::string& path) {
  const json j = parse_json(read_file(path), path);
  GeneratorsFile out;
  try {
    out.variables = j.at("variables").get<std::vector<std::string>>();
    for (const auto& f : j.at("fields"))
      out.fields.push_back(liesys::parse_field(f.get<std::string>(), out.variables));
  } catch (const json::exception& e) {
    throw liesys::InputError("bad generators document " + path + ": " + e.what());
  }
  if (out.fields.empty())
    throw liesys::InputError("generators document " + path + " lists no fields");
  return out;
}

liesys::FieldSpace load_basis(const std::string& name_or_path) {
  if (name_or_path == "sl3")
    return liesys::FieldSpace::span(liesys::catalog("sl3_realization"));
  const GeneratorsFile g = load_generators(name_or_path);
  return liesys::FieldSpace::span(g.fields);
}

struct SystemConfig {
  std::vector<std::string> variables;
  liesys::TDVF system;
  std::optional<liesys::SODE> sode;
  std::optional<liesys::Riccati2Spec> riccati2;
  std::optional<liesys::GhjCoefficients> ghj;
  double window_lo = liesys::kWorkingLo;
  double window_hi = liesys::kWorkingHi;
  liesys::IvpConfig ivp;
  std::uint64_t seed = 0;
};

SystemConfig load_system(const std::string& path) {
  const json j = parse_json(read_file(path), path);
  SystemConfig out;

  int forms = 0;
  for (const char* key : {"fields", "sode", "riccati2", "family_ghj"})
    if (j.contains(key)) ++forms;
  if (forms != 1)
    throw liesys::InputError(
        "system config must contain exactly one of: fields, sode, riccati2, "
        "family_ghj (" +
        path + " has " + std::to_string(forms) + ")");

  try {
    if (j.contains("window")) {
      out.window_lo = j.at("window").at(0).get<double>();
      out.window_hi = j.at("window").at(1).get<double>();
    }
    if (j.contains("rtol")) out.ivp.rtol = j.at("rtol").get<double>();
    if (j.contains("atol")) out.ivp.atol = j.at("atol").get<double>();
    if (j.contains("max_step")) out.ivp.max_step = j.at("max_step").get<double>();
    if (j.contains("blowup_threshold"))
      out.ivp.blowup_threshold = j.at("blowup_threshold").get<double>();
    if (j.contains("seed")) {
      out.seed = j.at("seed").get<std::uint64_t>();
    } else if (const char* env = std::getenv("LIESYS_SEED")) {
      out.seed = std::strtoull(env, nullptr, 10);
    }

    if (j.contains("fields")) {
      out.variables = j.at("variables").get<std::vector<std::string>>();
      liesys::TDVF sys(out.variables);
      for (const auto& pair : j.at("fields")) {
        const liesys::TimeExpr c = liesys::parse_time_expr(pair.at(0).get<std::string>());
        const liesys::PolyVectorField f =
            liesys::parse_field(pair.at(1).get<std::string>(), out.variables);
        sys.add_term(c, f);
      }
      out.system = sys;
      return out;
    }

    if (j.contains("sode")) {
      out.variables = j.at("variables").get<std::vector<std::string>>();
      if (out.variables.empty() || out.variables.size() % 2 != 0)
        throw liesys::InputError(
            "sode systems need an even variable list: positions then velocities");
      std::vector<liesys::MixedPoly> rhs;
      for (const auto& expr : j.at("sode"))
        rhs.push_back(liesys::parse_mixed(expr.get<std::string>(), out.variables));
      out.sode = liesys::SODE(out.variables, std::move(rhs));
      out.system = liesys::lift_sode(*out.sode);
      return out;
    }

    if (j.contains("riccati2")) {
      const json& r = j.at("riccati2");
      out.riccati2 = liesys::Riccati2Spec::from_a(
          liesys::parse_time_expr(r.at("a0").get<std::string>()),
          liesys::parse_time_expr(r.at("a1").get<std::string>()),
          liesys::parse_time_expr(r.at("a2").get<std::string>()),
          liesys::parse_time_expr(r.at("a3").get<std::string>()));
      out.sode = liesys::riccati2(*out.riccati2, out.window_lo, out.window_hi);
      out.variables = out.sode->state_variables();
      out.system = liesys::lift_sode(*out.sode);
      return out;
    }

    const json& f = j.at("family_ghj");
    out.ghj = liesys::GhjCoefficients{
        liesys::parse_time_expr(f.at("g").get<std::string>()),
        liesys::parse_time_expr(f.at("h").get<std::string>()),
        liesys::parse_time_expr(f.at("j").get<std::string>())};
    out.sode = liesys::family_ghj(out.ghj->g, out.ghj->h, out.ghj->j);
    out.variables = out.sode->state_variables();
    out.system = liesys::lift_sode(*out.sode);
    return out;
  } catch (const json::exception& e) {
    throw liesys::InputError("bad system config " + path + ": " + e.what());
  }
}

liesys::Trajectory load_solution(const std::string& path, const liesys::TDVF& system) {
  liesys::Trajectory traj = liesys::Trajectory::from_csv(read_file(path));
  traj.attach_derivatives(system);
  return traj;
}

// ---------------------------------------------------------------------------
// Report fragments.

json witnesses_to_json(const std::vector<liesys::BracketWitness>& ws) {
  json out = json::array();
  for (const auto& w : ws)
    out.push_back({{"i", w.i}, {"j", w.j}, {"bracket", w.value.to_string()}});
  return out;
}

json scheme_to_json(const liesys::SchemeReport& rep) {
  return {{"w_closed", rep.w_closed},
          {"action_ok", rep.action_ok},
          {"v2_closed", rep.v2_closed},
          {"is_scheme", rep.is_scheme()},
          {"witnesses",
           {{"w", witnesses_to_json(rep.w_witnesses)},
            {"action", witnesses_to_json(rep.action_witnesses)},
            {"v2", witnesses_to_json(rep.v2_witnesses)}}}};
}

json decomposition_to_json(const liesys::Decomposition& d) {
  json out = {{"ok", d.ok}};
  if (d.ok) {
    json coeffs = json::array();
    for (const auto& c : d.coefficients) coeffs.push_back(c.to_string());
    out["coefficients"] = coeffs;
  } else {
    out["failed_coefficient"] = d.failed_coefficient.to_string();
    out["failed_field"] = d.failed_field.to_string();
    out["residual"] = d.residual.to_string();
  }
  return out;
}

json constants_to_json(const liesys::SuperpositionConstants& c) {
  const auto norm = c.normalized();
  return {{"c", {c.c[0], c.c[1], c.c[2]}},
          {"normalized", {norm[0], norm[1], norm[2]}},
          {"degenerate_fit", c.degenerate_fit}};
}

void print_report(const json& j) { std::cout << j.dump(2) << "\n"; }

const char* status_name(liesys::TrajStatus s) {
  switch (s) {
    case liesys::TrajStatus::completed: return "completed";
    case liesys::TrajStatus::blew_up: return "blew_up";
    default: return "step_failure";
  }
}

// ---------------------------------------------------------------------------
// Subcommands.

int cmd_bracket(const std::string& vars_csv, const std::string& a_src,
                const std::string& b_src) {
  const std::vector<std::string> vars = split_list(vars_csv);
  const liesys::PolyVectorField a = liesys::parse_field(a_src, vars);
  const liesys::PolyVectorField b = liesys::parse_field(b_src, vars);
  std::cout << liesys::bracket(a, b).to_string() << "\n";
  return kExitOk;
}

int cmd_close(const std::string& generators_path, std::size_t max_dim) {
  const GeneratorsFile g = load_generators(generators_path);
  const liesys::ClosureResult res = liesys::close_under_bracket(g.fields, max_dim);

  json rep = {{"format_version", kFormatVersion},
              {"dimension", res.space.dimension()},
              {"closed", res.closed}};
  json basis = json::array();
  for (const auto& f : res.space.basis()) basis.push_back(f.to_string());
  rep["basis"] = basis;
  // The library records every bracket that escaped the span it was tested
  // against, including ones later adjoined; the report only lists brackets
  // that still escape the final span (empty exactly when closed).
  std::vector<liesys::BracketWitness> outside;
  for (const auto& w : res.escapes)
    if (!res.space.query(w.value).contained) outside.push_back(w);
  rep["escapes"] = witnesses_to_json(outside);
  if (res.closed) {
    const liesys::StructureConstants& sc = *res.constants;
    json entries = json::array();
    for (std::size_t a = 0; a < sc.dimension(); ++a)
      for (std::size_t b = 0; b < sc.dimension(); ++b)
        for (std::size_t c = 0; c < sc.dimension(); ++c)
          if (sc.c(a, b, c) != 0)
            entries.push_back({a, b, c, liesys::to_string(sc.c(a, b, c))});
    rep["structure_constants"] = entries;
    const liesys::Signature sig = liesys::killing_signature(sc);
    rep["killing_signature"] = {
        {"plus", sig.n_plus}, {"minus", sig.n_minus}, {"zero", sig.n_zero}};
  }
  print_report(rep);
  return res.closed ? kExitOk : kExitVerdictFalse;
}

int cmd_scheme(const std::string& w_path, const std::string& v2_path,
               bool use_catalog) {
  liesys::FieldSpace w, v2;
  if (use_catalog) {
    w = liesys::FieldSpace::span(liesys::catalog("riccati2_scheme_W"));
    v2 = liesys::FieldSpace::span(liesys::catalog("riccati2_scheme_V2"));
  } else {
    if (w_path.empty() || v2_path.empty())
      throw liesys::InputError("scheme needs --w and --v2 files (or --scheme catalog)");
    w = load_basis(w_path);
    v2 = load_basis(v2_path);
  }
  const liesys::SchemeReport rep = liesys::check_scheme(w, v2);
  json out = scheme_to_json(rep);
  out["format_version"] = kFormatVersion;
  print_report(out);
  return rep.is_scheme() ? kExitOk : kExitVerdictFalse;
}

int cmd_lift(const std::string& system_path) {
  const SystemConfig cfg = load_system(system_path);
  if (!cfg.sode)
    throw liesys::InputError("lift needs a second-order system (sode, riccati2, or "
                             "family_ghj config)");
  json terms = json::array();
  for (const auto& [c, f] : cfg.system.terms())
    terms.push_back({{"coefficient", c.to_string()}, {"field", f.to_string()}});
  print_report({{"format_version", kFormatVersion},
                {"variables", cfg.variables},
                {"terms", terms}});
  return kExitOk;
}

int cmd_decompose(const std::string& system_path, const std::string& basis_arg) {
  const SystemConfig cfg = load_system(system_path);
  const liesys::FieldSpace basis = load_basis(basis_arg);
  const liesys::Decomposition d = liesys::decompose_onto_basis(cfg.system, basis);
  json rep = decomposition_to_json(d);
  rep["format_version"] = kFormatVersion;
  print_report(rep);
  return d.ok ? kExitOk : kExitVerdictFalse;
}

int cmd_certify(const std::string& system_path, const std::string& scheme_arg,
                const std::string& transform_arg, const std::string& target_arg) {
  const SystemConfig cfg = load_system(system_path);

  liesys::FieldSpace w, v2;
  if (scheme_arg == "catalog") {
    w = liesys::FieldSpace::span(liesys::catalog("riccati2_scheme_W"));
    v2 = liesys::FieldSpace::span(liesys::catalog("riccati2_scheme_V2"));
  } else {
    const std::vector<std::string> parts = split_list(scheme_arg);
    if (parts.size() != 2)
      throw liesys::InputError(
          "--scheme expects 'catalog' or two files 'W_FILE,V2_FILE'");
    w = load_basis(parts[0]);
    v2 = load_basis(parts[1]);
  }

  const std::vector<std::string> factor_srcs = split_list(transform_arg);
  if (factor_srcs.size() != cfg.variables.size())
    throw liesys::InputError("--transform needs one factor expression per variable (" +
                             std::to_string(cfg.variables.size()) + " expected, " +
                             std::to_string(factor_srcs.size()) + " given)");
  std::vector<liesys::TimeExpr> factors;
  factors.reserve(factor_srcs.size());
  for (const auto& src : factor_srcs) factors.push_back(liesys::parse_time_expr(src));
  const liesys::ScalingTransform tr(cfg.variables, factors);

  const liesys::FieldSpace target = load_basis(target_arg);
  const liesys::QuasiLieCertificate cert = liesys::certify_quasi_lie(
      cfg.system, w, v2, tr, target, cfg.window_lo, cfg.window_hi);

  json transformed = json::array();
  for (const auto& [c, f] : cert.transformed.terms())
    transformed.push_back({{"coefficient", c.to_string()}, {"field", f.to_string()}});
  json rep = {{"format_version", kFormatVersion},
              {"verdict", cert.verdict},
              {"values_in_v2", cert.values_in_v2},
              {"scheme", scheme_to_json(cert.scheme)},
              {"transformed", transformed},
              {"decomposition", decomposition_to_json(cert.decomposition)},
              {"failure", cert.failure}};
  print_report(rep);
  return cert.verdict ? kExitOk : kExitVerdictFalse;
}

int cmd_integrate(const std::string& system_path, const std::string& ic_arg,
                  const std::string& span_arg, const std::string& out_arg,
                  unsigned random_count, const std::string& box_arg) {
  const SystemConfig cfg = load_system(system_path);
  double t0 = cfg.window_lo, t1 = cfg.window_hi;
  if (!span_arg.empty()) std::tie(t0, t1) = parse_span(span_arg);

  if (random_count > 0) {
    if (out_arg.empty())
      throw liesys::InputError("--random-count needs --out PREFIX for the CSV files");
    if (box_arg.empty())
      throw liesys::InputError("--random-count needs --box lo:hi,... per variable");
    std::vector<std::pair<double, double>> box;
    for (const auto& part : split_list(box_arg)) box.push_back(parse_span(part));
    if (box.size() != cfg.variables.size())
      throw liesys::InputError("--box needs one lo:hi range per variable");
    liesys::Lcg rng(cfg.seed);
    json statuses = json::array();
    for (unsigned k = 0; k < random_count; ++k) {
      std::vector<double> ic;
      ic.reserve(box.size());
      for (const auto& [lo, hi] : box) ic.push_back(rng.uniform(lo, hi));
      const liesys::Trajectory traj = liesys::solve_ivp(cfg.system, ic, t0, t1, cfg.ivp);
      const std::string path = out_arg + std::to_string(k + 1) + ".csv";
      write_file(path, traj.to_csv());
      statuses.push_back({{"file", path},
                          {"ic", ic},
                          {"status", status_name(traj.status())},
                          {"event_time", traj.event_time()}});
    }
    std::cerr << json{{"format_version", kFormatVersion}, {"runs", statuses}}.dump(2)
              << "\n";
    return kExitOk;
  }

  if (ic_arg.empty()) throw liesys::InputError("integrate needs --ic (or --random-count)");
  const std::vector<double> ic = parse_double_list(ic_arg, "--ic");
  const liesys::Trajectory traj = liesys::solve_ivp(cfg.system, ic, t0, t1, cfg.ivp);
  if (out_arg.empty())
    std::cout << traj.to_csv();
  else
    write_file(out_arg, traj.to_csv());
  std::cerr << json{{"format_version", kFormatVersion},
                    {"status", status_name(traj.status())},
                    {"event_time", traj.event_time()}}
                   .dump(2)
            << "\n";
  return traj.status() == liesys::TrajStatus::step_failure ? kExitNumericalError
                                                           : kExitOk;
}

// The family equation and the lifted first-order system for superposition
// commands; riccati2 configs superpose through the scaling pipeline.
struct FamilyContext {
  SystemConfig cfg;
  liesys::SODE family;

  explicit FamilyContext(const std::string& path)
      : cfg(load_system(path)),
        family(cfg.sode ? *cfg.sode : liesys::family_ghj(liesys::TimeExpr::zero(),
                                                         liesys::TimeExpr::zero(),
                                                         liesys::TimeExpr::zero())) {
    if (!cfg.ghj && !cfg.riccati2)
      throw liesys::InputError(
          "this command needs a family_ghj or riccati2 system config");
  }
};

int cmd_superpose(const std::string& family_path, const std::string& solutions_arg,
                  const std::string& target_ic_arg, double t0,
                  const std::string& eval_arg) {
  const FamilyContext ctx(family_path);
  const std::vector<std::string> files = split_list(solutions_arg);
  if (files.size() != 3)
    throw liesys::InputError("superpose needs exactly 3 solution CSV files");
  const std::vector<double> target_ic = parse_double_list(target_ic_arg, "--target-ic");
  if (target_ic.size() != 2)
    throw liesys::InputError("--target-ic needs exactly x0,v0");
  const std::vector<double> eval_times = parse_double_list(eval_arg, "--eval-at");

  std::vector<liesys::Trajectory> sols;
  sols.reserve(3);
  for (const auto& f : files) sols.push_back(load_solution(f, ctx.cfg.system));

  json values = json::array();
  json rep = {{"format_version", kFormatVersion}};
  if (ctx.cfg.riccati2) {
    rep["mode"] = "riccati2";
    const liesys::Riccati2SuperpositionRun run = liesys::superpose_riccati2_run(
        *ctx.cfg.riccati2, sols, target_ic[0], target_ic[1], t0, eval_times,
        ctx.cfg.ivp);
    rep["constants"] = constants_to_json(run.constants);
    rep["wronskian_det"] = run.wronskian_det;
    for (std::size_t k = 0; k < eval_times.size(); ++k)
      values.push_back({{"t", eval_times[k]},
                        {"x", run.values[k].x},
                        {"v", run.values[k].v},
                        {"pole", run.values[k].pole}});
  } else {
    rep["mode"] = "family";
    const liesys::CompanionBasis basis(ctx.family, sols, t0, ctx.cfg.ivp);
    const liesys::SuperpositionConstants c =
        liesys::fit_constants(basis, target_ic[0], target_ic[1]);
    rep["constants"] = constants_to_json(c);
    rep["wronskian_det"] = basis.wronskian_det();
    for (double t : eval_times) {
      const liesys::SuperposedState s = liesys::superpose_eval(basis, c, t);
      values.push_back({{"t", t}, {"x", s.x}, {"v", s.v}, {"pole", s.pole}});
    }
  }
  rep["values"] = values;
  print_report(rep);
  return kExitOk;
}

int cmd_verify(const std::string& family_path, const std::string& solutions_arg,
               const std::string& target_path, const std::string& window_arg,
               double t0_arg, bool t0_given, double max_deviation, double max_drift) {
  const FamilyContext ctx(family_path);
  const std::vector<std::string> files = split_list(solutions_arg);
  if (files.size() != 3)
    throw liesys::InputError("verify needs exactly 3 solution CSV files");

  double lo = ctx.cfg.window_lo, hi = ctx.cfg.window_hi;
  if (!window_arg.empty()) std::tie(lo, hi) = parse_span(window_arg);
  const double t0 = t0_given ? t0_arg : lo;

  std::vector<liesys::Trajectory> sols;
  sols.reserve(3);
  for (const auto& f : files) sols.push_back(load_solution(f, ctx.cfg.system));
  liesys::Trajectory target = load_solution(target_path, ctx.cfg.system);

  liesys::SODE family = ctx.family;
  if (ctx.cfg.riccati2) {
    // Verification happens in the scaled family coordinates.
    const liesys::GhjCoefficients fam = liesys::riccati2_scaled_family(*ctx.cfg.riccati2);
    family = liesys::family_ghj(fam.g, fam.h, fam.j);
    for (auto& s : sols) s = liesys::riccati2_scale_solution(*ctx.cfg.riccati2, s);
    target = liesys::riccati2_scale_solution(*ctx.cfg.riccati2, target);
  }

  const liesys::VerificationReport vr =
      liesys::verify_superposition(family, sols, target, t0, lo, hi, ctx.cfg.ivp);
  const bool verdict = vr.sup_deviation <= max_deviation && vr.constants_drift <= max_drift;

  json refits = json::array();
  for (const auto& r : vr.refits) refits.push_back({r[0], r[1], r[2]});
  print_report({{"format_version", kFormatVersion},
                {"verdict", verdict},
                {"t0", vr.t0},
                {"window", {vr.window_lo, vr.window_hi}},
                {"constants", constants_to_json(vr.constants)},
                {"wronskian_det", vr.wronskian_det},
                {"sup_deviation", vr.sup_deviation},
                {"ode_residual", vr.ode_residual},
                {"constants_drift", vr.constants_drift},
                {"refits", refits},
                {"thresholds",
                 {{"max_deviation", max_deviation}, {"max_drift", max_drift}}}});
  return verdict ? kExitOk : kExitVerdictFalse;
}

void emit_error(const std::string& code, const std::string& message) {
  std::cerr << json{{"format_version", kFormatVersion},
                    {"error", code},
                    {"message", message}}
                   .dump(2)
            << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "liesys: exact Lie-bracket analysis of ODE systems, scaling transforms, "
      "and superposition rules"};
  app.require_subcommand(1);

  // bracket
  std::string br_vars, br_a, br_b;
  CLI::App* bracket = app.add_subcommand("bracket", "Lie bracket of two fields");
  bracket->add_option("--vars", br_vars, "comma-separated variable list")->required();
  bracket->add_option("A", br_a, "first field (DSL)")->required();
  bracket->add_option("B", br_b, "second field (DSL)")->required();

  // close
  std::string cl_generators;
  std::size_t cl_max_dim = 64;
  CLI::App* close = app.add_subcommand("close", "bracket closure of generators");
  close->add_option("--generators", cl_generators, "generators JSON file")->required();
  close->add_option("--max-dim", cl_max_dim, "dimension cap (default 64)");

  // scheme
  std::string sc_w, sc_v2, sc_catalog;
  CLI::App* scheme = app.add_subcommand("scheme", "check quasi-Lie scheme conditions");
  scheme->add_option("--w", sc_w, "W generators JSON file");
  scheme->add_option("--v2", sc_v2, "V2 generators JSON file");
  scheme->add_option("--scheme", sc_catalog, "'catalog' for the built-in W, V2 pair");

  // lift
  std::string lf_system;
  CLI::App* lift = app.add_subcommand("lift", "first-order lift of a SODE");
  lift->add_option("--sode", lf_system, "system config JSON file")->required();

  // decompose
  std::string dc_system, dc_basis;
  CLI::App* decompose =
      app.add_subcommand("decompose", "project a system onto a basis");
  decompose->add_option("--system", dc_system, "system config JSON file")->required();
  decompose->add_option("--basis", dc_basis, "'sl3' or generators JSON file")->required();

  // certify
  std::string ct_system, ct_scheme, ct_transform, ct_target;
  CLI::App* certify = app.add_subcommand("certify", "quasi-Lie certificate");
  certify->add_option("--system", ct_system, "system config JSON file")->required();
  certify->add_option("--scheme", ct_scheme, "'catalog' or W_FILE,V2_FILE")->required();
  certify->add_option("--transform", ct_transform,
                      "comma-separated scaling factor expressions")->required();
  certify->add_option("--target", ct_target, "'sl3' or generators JSON file")->required();

  // integrate
  std::string in_system, in_ic, in_span, in_out, in_box;
  unsigned in_random = 0;
  CLI::App* integrate = app.add_subcommand("integrate", "integrate an initial value problem");
  integrate->add_option("--system", in_system, "system config JSON file")->required();
  integrate->add_option("--ic", in_ic, "comma-separated initial condition");
  integrate->add_option("--span", in_span, "time span A:B (default: config window)");
  integrate->add_option("--out", in_out, "output CSV file (default: stdout)");
  integrate->add_option("--random-count", in_random,
                        "integrate N seeded random initial conditions");
  integrate->add_option("--box", in_box, "per-variable lo:hi ranges for --random-count");

  // superpose
  std::string sp_family, sp_solutions, sp_target_ic, sp_eval;
  double sp_t0 = 0.0;
  CLI::App* superpose = app.add_subcommand("superpose", "superposition-rule evaluation");
  superpose->add_option("--family", sp_family, "family config JSON file")->required();
  superpose->add_option("--solutions", sp_solutions, "3 comma-separated CSV files")
      ->required();
  superpose->add_option("--target-ic", sp_target_ic, "target x0,v0 at t0")->required();
  superpose->add_option("--t0", sp_t0, "fitting time")->required();
  superpose->add_option("--eval-at", sp_eval, "comma-separated evaluation times")
      ->required();

  // verify
  std::string vf_family, vf_solutions, vf_target, vf_window;
  double vf_t0 = 0.0, vf_max_dev = 1e-6, vf_max_drift = 1e-6;
  CLI::App* verify = app.add_subcommand("verify", "verify a superposition rule");
  verify->add_option("--family", vf_family, "family config JSON file")->required();
  verify->add_option("--solutions", vf_solutions, "3 comma-separated CSV files")
      ->required();
  verify->add_option("--target", vf_target, "target trajectory CSV file")->required();
  verify->add_option("--window", vf_window, "verification window A:B");
  CLI::Option* vf_t0_opt = verify->add_option("--t0", vf_t0, "fitting time (default: window start)");
  verify->add_option("--max-deviation", vf_max_dev,
                     "verdict threshold for sup deviation (default 1e-6)");
  verify->add_option("--max-drift", vf_max_drift,
                     "verdict threshold for constants drift (default 1e-6)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  }

  try {
    if (app.got_subcommand(bracket)) return cmd_bracket(br_vars, br_a, br_b);
    if (app.got_subcommand(close)) return cmd_close(cl_generators, cl_max_dim);
    if (app.got_subcommand(scheme))
      return cmd_scheme(sc_w, sc_v2, sc_catalog == "catalog");
    if (app.got_subcommand(lift)) return cmd_lift(lf_system);
    if (app.got_subcommand(decompose)) return cmd_decompose(dc_system, dc_basis);
    if (app.got_subcommand(certify))
      return cmd_certify(ct_system, ct_scheme, ct_transform, ct_target);
    if (app.got_subcommand(integrate))
      return cmd_integrate(in_system, in_ic, in_span, in_out, in_random, in_box);
    if (app.got_subcommand(superpose))
      return cmd_superpose(sp_family, sp_solutions, sp_target_ic, sp_t0, sp_eval);
    if (app.got_subcommand(verify))
      return cmd_verify(vf_family, vf_solutions, vf_target, vf_window, vf_t0,
                        vf_t0_opt->count() > 0, vf_max_dev, vf_max_drift);
    emit_error("input", "no subcommand given");
    return kExitInputError;
  } catch (const liesys::NumericalError& e) {
    emit_error("numerical", e.what());
    return kExitNumericalError;
  } catch (const liesys::DomainError& e) {
    emit_error("domain", e.what());
    return kExitNumericalError;
  } catch (const liesys::ParseError& e) {
    emit_error("parse", e.what());
    return kExitInputError;
  } catch (const liesys::InputError& e) {
    emit_error("input", e.what());
    return kExitInputError;
  } catch (const std::exception& e) {
    emit_error("internal", e.what());
    return kExitInputError;
  }
}
