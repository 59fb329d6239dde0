// prym: enum | periods | theta | verify | map
// JSON report on stdout, human summary on stderr.
// Exit codes: 0 success, 1 verification failure, 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "prym/forms.hpp"
#include "prym/verify.hpp"

using json = nlohmann::ordered_json;
using namespace prym;

namespace {

constexpr const char* kSchema = "prym.report/1";

struct RunConfig {
  std::vector<double> points{1, 2, 3, 4, 5, 6, 7, 8};
  double theta_tol = 1e-12;
  double quad_tol = 1e-12;
  std::string precision = "double";
  std::vector<std::string> suites{"full"};
  std::uint64_t seed = 20240917;
  int random = 0;
  bool pretty = false;
  int shape = 2222;
  bool refine = false;
  bool corrupt_U = false;
  std::string config_file;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class Real>
json cx(const Cx<Real>& z) {
  return json::array({double(z.real()), double(z.imag())});
}
template <class Real>
json cmat(const CMat<Real>& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (int j = 0; j < m.cols(); ++j) r.push_back(cx(m(i, j)));
    rows.push_back(r);
  }
  return rows;
}
json qrow(const QMatrix& v) {
  json a = json::array();
  for (int i = 0; i < v.cols(); ++i) a.push_back(v[i].get_str());
  return a;
}
json suite_json(const SuiteResult& s) {
  json c = json::array();
  for (auto& k : s.checks)
    c.push_back({{"name", k.name}, {"value", k.value}, {"tol", k.tol}, {"pass", k.pass}, {"detail", k.detail}});
  return {{"suite", s.suite}, {"pass", s.pass()}, {"seconds", s.seconds}, {"checks", c}};
}

void load_config_file(RunConfig& rc) {
  std::ifstream in(rc.config_file);
  if (!in) throw UsageError("cannot open config file " + rc.config_file);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw UsageError(std::string("config file is not valid JSON: ") + e.what());
  }
  if (j.contains("points")) rc.points = j["points"].get<std::vector<double>>();
  if (j.contains("theta_tol")) rc.theta_tol = j["theta_tol"];
  if (j.contains("quad_tol")) rc.quad_tol = j["quad_tol"];
  if (j.contains("precision")) rc.precision = j["precision"];
  if (j.contains("seed")) rc.seed = j["seed"];
  if (j.contains("suites")) rc.suites = j["suites"].get<std::vector<std::string>>();
}

template <class Real>
BranchConfig<Real> make_cfg(const RunConfig& rc) {
  try {
    return BranchConfig<Real>::from(rc.points);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("invalid --points: ") + e.what());
  }
}

template <class Real>
VerifyOptions<Real> make_options(const RunConfig& rc) {
  if (!(rc.theta_tol > 0) || !(rc.quad_tol > 0)) throw UsageError("tolerances must be positive");
  VerifyOptions<Real> o;
  o.cfg = make_cfg<Real>(rc);
  o.quad.tol = Real(rc.quad_tol);
  o.theta.tol = Real(rc.theta_tol);
  o.seed = rc.seed;
  o.random_configs = rc.random;
  o.corrupt_U = rc.corrupt_U;
  return o;
}

json header(const RunConfig& rc, const std::string& cmd) {
  return {{"schema", kSchema},
          {"command", cmd},
          {"points", rc.points},
          {"theta_tol", rc.theta_tol},
          {"quad_tol", rc.quad_tol},
          {"precision", rc.precision},
          {"seed", rc.seed}};
}

// ---- enum ----------------------------------------------------------------

int cmd_enum(const RunConfig& rc, json& out) {
  if (rc.shape == 44) {
    json rows = json::array();
    for (auto& s : enumerate_partitions44())
      rows.push_back({{"split", s.str()}, {"class_coords", s.to_class().coords()}, {"q", quadratic_form(s.to_class())}});
    out["shape"] = "44";
    out["count"] = rows.size();
    out["rows"] = rows;
    std::cerr << rows.size() << " (4,4)-splits\n";
    return 0;
  }
  if (rc.shape != 2222) throw UsageError("--shape must be 2222 or 44");
  json rows = json::array();
  QMatrix SB = basis_sigmaB();
  for (auto& c : coset_representatives()) {
    QMatrix d = translation_vector(basis_change(basis_sigma1() * c.G, SB));
    rows.push_back({{"partition", c.partition.str()},
                    {"word", word_str(c.word)},
                    {"perm", perm_str(c.perm)},
                    {"pairing_sign", c.partition.pairing_sign()},
                    {"delta", qrow(d)},
                    {"delta_ok", delta_membership(d)},
                    {"half_delta_class", half_delta_class(d).coords()}});
  }
  out["shape"] = "2222";
  out["count"] = rows.size();
  out["rows"] = rows;
  std::cerr << rows.size() << " (2,2,2,2)-partitions with coset words and translation vectors\n";
  return 0;
}

// ---- periods -------------------------------------------------------------

template <class Real>
int cmd_periods(const RunConfig& rc, json& out) {
  auto o = make_options<Real>(rc);
  auto pm = period_matrix(o.cfg, o.quad);
  json rows = json::array();
  const char* diff[6] = {"z^0 dz/w^3", "z^1 dz/w^3", "z^2 dz/w^3", "z^3 dz/w^3", "z^4 dz/w^3", "dz/w"};
  json cols = json::array();
  for (int j = 1; j <= 6; ++j) cols.push_back("A" + std::to_string(j));
  for (int j = 1; j <= 6; ++j) cols.push_back("B" + std::to_string(j));
  out["period_matrix"] = {{"rows", diff}, {"columns", cols}, {"values", cmat(pm.Pi)},
                          {"error_estimate", double(pm.error)}, {"nodes", pm.max_nodes}, {"converged", pm.converged}};
  auto nt = normalized_tau(pm, basis_sigma1(), "Sigma_1", false);
  auto [b1, b2] = boundary_residuals(pm);
  auto bp = ball_point(pm);
  auto bc = branch_continuation_check(o.cfg);
  out["tau1"] = cmat(nt.tau);
  json res = {{"symmetry", double(nt.symmetry)},
              {"symmetric", nt.symmetry < 1e-8},
              {"min_eig_imag", double(nt.min_imag_eig)},
              {"imag_positive", nt.min_imag_eig > 0},
              {"rho_relation", double(rho_relation_residual(nt.tau))},
              {"sum_A", double(b1)},
              {"rho_boundary", double(b2)},
              {"det_minus_U_tau_plus_I", cx(det_minus_U_tau_plus_I(nt.tau))},
              {"branch_phase_error", double(bc.max_phase_error)},
              {"branch_closure", double(bc.closure_error)}};
  out["residuals"] = res;
  json f = json::array();
  for (int i = 0; i < 6; ++i) f.push_back(cx(bp.f(i)));
  out["ball_point"] = {{"f", f}, {"norm", double(bp.norm)}, {"in_ball", bp.norm < 0}};
  if (rc.refine) {
    auto q2 = o.quad;
    q2.nodes *= 2;
    q2.max_nodes *= 2;
    auto pm2 = period_matrix(o.cfg, q2);
    double delta = double((pm2.Pi - pm.Pi).cwiseAbs().maxCoeff());
    out["refine"] = {{"nodes", q2.nodes}, {"max_delta", delta}};
    std::cerr << "refine: nodes " << q2.nodes << ", max |delta Pi| = " << delta << "\n";
  }
  std::cerr << "tau1 symmetric: " << (nt.symmetry < 1e-8 ? "yes" : "no") << " (" << double(nt.symmetry)
            << "), Im tau1 > 0: " << (nt.min_imag_eig > 0 ? "yes" : "no") << ", ball norm " << double(bp.norm) << "\n";
  return 0;
}

// ---- theta ---------------------------------------------------------------

template <class Real>
int cmd_theta(const RunConfig& rc, json& out) {
  auto o = make_options<Real>(rc);
  auto pm = period_matrix(o.cfg, o.quad);
  auto tau = normalized_tau(pm, basis_sigma1()).tau;
  ThetaEvaluator<Real> ev(tau, o.theta);
  auto q = theta_quadruple(ev);
  auto cr = cross_ratio_check(o.cfg, q);
  json th = json::array();
  for (auto& t : q) th.push_back(cx(t));
  out["theta_constants"] = th;
  out["cross_ratio"] = {{"lhs", cx(cr.lhs)}, {"rhs", double(cr.rhs)}, {"residual", double(cr.residual)},
                        {"t1t3_minus_t2t4", double(cr.product)}, {"auxiliary", double(cr.auxiliary)}};
  RMat<Real> vt = normalized_vanishing_table(ev);
  json tab = json::array();
  for (int k = 0; k < 4; ++k) {
    json row = json::array();
    for (int j = 0; j < 8; ++j) row.push_back(double(vt(k, j)));
    tab.push_back(row);
  }
  out["vanishing_table"] = {{"normalized_abs", tab}, {"orders", vanishing_orders()}};
  out["theta_radius2"] = double(ev.radius2());
  std::cerr << "cross-ratio residual " << double(cr.residual) << ", t1t3 - t2t4 " << double(cr.product) << "\n";
  return 0;
}

// ---- map -----------------------------------------------------------------

template <class Real>
json map_json(const ThetaMapReport<Real>& rep) {
  json e = json::array();
  for (auto& x : rep.entries)
    e.push_back({{"partition", x.r.str()},
                 {"word", x.word},
                 {"sign", x.sign},
                 {"P_ratio", double(x.P_ratio)},
                 {"T2_ratio", cx(x.T_ratio)},
                 {"residual", double(x.residual)},
                 {"unsigned_residual", double(x.unsigned_residual)},
                 {"tau_agreement", double(x.tau_agreement)}});
  return {{"reference", rep.reference},
          {"max_residual", double(rep.max_residual)},
          {"max_unsigned_residual", double(rep.max_unsigned_residual)},
          {"max_tau_agreement", double(rep.max_tau_agreement)},
          {"negative_signs", rep.negative_signs},
          {"entries", e}};
}

template <class Real>
int cmd_map(const RunConfig& rc, json& out) {
  auto o = make_options<Real>(rc);
  Stopwatch sw;
  auto pm = period_matrix(o.cfg, o.quad);
  auto rep = theta_map(o.cfg, pm, o.theta);
  out["map"] = map_json(rep);
  out["seconds"] = sw.seconds();
  std::cerr << "max |T_r^2/T_1^2 - eps_r P_r/P_1| = " << double(rep.max_residual)
            << ", tau# agreement " << double(rep.max_tau_agreement) << " (" << sw.seconds() << " s)\n";
  return rep.max_residual < 1e-5 && rep.max_tau_agreement < 1e-6 ? 0 : 1;
}

// ---- verify --------------------------------------------------------------

template <class Real>
int cmd_verify(const RunConfig& rc, json& out) {
  auto o = make_options<Real>(rc);
  std::set<std::string> want(rc.suites.begin(), rc.suites.end());
  const std::set<std::string> known{"combinatorics", "lattice", "periods", "theta", "forms", "full"};
  for (auto& s : want)
    if (!known.count(s)) throw UsageError("unknown suite '" + s + "'");
  bool full = want.count("full") > 0;
  auto on = [&](const char* s) { return full || want.count(s) > 0; };
  auto cfgs = config_list(o);
  std::vector<SuiteResult> results;
  if (on("combinatorics")) results.push_back(suite_combinatorics());
  if (on("lattice")) results.push_back(suite_lattice(o.corrupt_U));
  if (on("periods")) results.push_back(suite_periods(cfgs, o.quad));
  if (on("theta")) {
    results.push_back(suite_theta_kernel(o.cfg, o));
    results.push_back(suite_vanishing(o.cfg, o));
    results.push_back(suite_quadratic(o.cfg, o));
  }
  if (on("forms")) {
    results.push_back(suite_cross_ratio(cfgs, o));
    results.push_back(suite_main_theorem(cfgs, o));
    results.push_back(suite_chi_const<Real>());
  }
  json arr = json::array();
  bool ok = true;
  for (auto& s : results) {
    arr.push_back(suite_json(s));
    ok = ok && s.pass();
    std::cerr << (s.pass() ? "PASS " : "FAIL ") << s.suite << " (" << s.seconds << " s)\n";
    for (auto& c : s.checks)
      if (!c.pass) std::cerr << "  failed: " << c.name << " value " << c.value << " tol " << c.tol << "\n";
  }
  out["suites"] = arr;
  out["pass"] = ok;
  return ok ? 0 : 1;
}

template <class Real>
int dispatch(const std::string& cmd, const RunConfig& rc, json& out) {
  if (cmd == "periods") return cmd_periods<Real>(rc, out);
  if (cmd == "theta") return cmd_theta<Real>(rc, out);
  if (cmd == "map") return cmd_map<Real>(rc, out);
  if (cmd == "verify") return cmd_verify<Real>(rc, out);
  return cmd_enum(rc, out);
}

void add_common(CLI::App* s, RunConfig& rc) {
  s->add_option("--points", rc.points, "8 increasing branch points")->delimiter(',')->expected(1, 64);
  s->add_option("--theta-tol", rc.theta_tol, "theta truncation tolerance");
  s->add_option("--quad-tol", rc.quad_tol, "quadrature tolerance");
  s->add_option("--precision", rc.precision, "double | extended")->check(CLI::IsMember({"double", "extended"}));
  s->add_option("--suite", rc.suites, "combinatorics | lattice | periods | theta | forms | full")->delimiter(',');
  s->add_option("--seed", rc.seed, "seed for random configurations and probes");
  s->add_option("--random", rc.random, "number of extra seeded random configurations")->check(CLI::NonNegativeNumber);
  s->add_flag("--json", rc.pretty, "pretty-print the JSON report");
  s->add_option("--shape", rc.shape, "partition shape for enum: 2222 or 44");
  s->add_flag("--refine", rc.refine, "periods: repeat with doubled nodes and report the change");
  s->add_option("--config", rc.config_file, "JSON file with points, tolerances, precision, seed, suites");
  s->add_flag("--test-corrupt-U", rc.corrupt_U, "")->group("");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Theta constants, periods and the 105 forms of the 4-fold cover branched at 8 points"};
  app.require_subcommand(1);
  RunConfig rc;
  const std::pair<const char*, const char*> subs[] = {
      {"enum", "list the 105 partitions (or 35 splits) with coset words and translation vectors"},
      {"periods", "period matrix, tau on Sigma_1, ball point and Riemann-relation residuals"},
      {"theta", "theta quadruple, cross ratio and vanishing table"},
      {"verify", "run verification suites; exit 1 if any check fails"},
      {"map", "all 105 squared forms against the partition polynomials"},
  };
  for (auto [name, help] : subs) add_common(app.add_subcommand(name, help), rc);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  std::string cmd = app.get_subcommands().front()->get_name();
  json out;
  int code = 0;
  try {
    if (!rc.config_file.empty()) load_config_file(rc);
    out = header(rc, cmd);
    code = rc.precision == "extended" ? dispatch<long double>(cmd, rc, out) : dispatch<double>(cmd, rc, out);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    out["error"] = e.what();
    code = 1;
  }
  out["exit_code"] = code;
  std::cout << (rc.pretty ? out.dump(2) : out.dump()) << "\n";
  return code;
}
