// Command-line front end: parse a system, run the nonexistence/normal-form
// screen, count and realize limit cycles, classify centers, local types and
// infinity, and confirm every symbolic verdict with the flow oracle.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sqh/jsonio.hpp"
#include "sqh/phaseflow.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kDisagree = 1;
constexpr int kInvalidInput = 2;
constexpr int kNumericalFailure = 3;

struct GlobalOpts {
  bool json = false;
  long long seed = 0;
  double tol_rel = 1e-12;
  double tol_abs = 1e-14;
  double eps = 1e-3;
  std::string out;
  std::string input;  // path or "-" for stdin
  std::string poly_p, poly_q;
  int wp = 1, wq = 1;
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

std::vector<sqh::Rational> parse_rational_list(const std::string& text) {
  std::vector<sqh::Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(sqh::parse_rational(item));
  }
  return out;
}

sqh::SystemInput load_system(const GlobalOpts& g) {
  if (!g.input.empty()) {
    std::string text;
    if (g.input == "-") {
      std::stringstream buffer;
      buffer << std::cin.rdbuf();
      text = buffer.str();
    } else {
      std::ifstream in(g.input);
      if (!in) throw sqh::Error("cannot open input file: " + g.input);
      std::stringstream buffer;
      buffer << in.rdbuf();
      text = buffer.str();
    }
    return sqh::system_from_json(sqh::json::parse(text));
  }
  if (g.poly_p.empty() || g.poly_q.empty())
    throw sqh::Error("no input: pass --input FILE (or '-') or --P/--Q with --p/--q");
  sqh::SystemInput in;
  in.P = sqh::parse_polynomial(g.poly_p);
  in.Q = sqh::parse_polynomial(g.poly_q);
  in.w = sqh::WeightVector(g.wp, g.wq);
  return in;
}

std::string hash_of(const GlobalOpts& g, const std::string& command,
                    const std::string& extras = "") {
  std::ostringstream os;
  os << command << '|' << g.input << '|' << g.poly_p << '|' << g.poly_q << '|' << g.wp << '|'
     << g.wq << '|' << g.seed << '|' << g.tol_rel << '|' << g.tol_abs << '|' << g.eps << '|'
     << extras;
  return sqh::config_hash(os.str());
}

void emit(const GlobalOpts& g, const sqh::json& report, const std::string& text) {
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!g.out.empty()) {
    file.open(g.out);
    if (!file) throw sqh::Error("cannot open output file: " + g.out);
    os = &file;
  }
  if (g.json) *os << report.dump(2) << "\n";
  else *os << text << "\n";
}

sqh::ReturnOptions make_return_options(const GlobalOpts& g) {
  sqh::ReturnOptions opt;
  opt.integ.rel_tol = g.tol_rel;
  opt.integ.abs_tol = g.tol_abs;
  return opt;
}

// ---------------------------------------------------------------------------

int cmd_classify(const GlobalOpts& g, bool normal_form_focus) {
  const auto in = load_system(g);
  const auto sys = sqh::classify_system(in.P, in.Q, in.w);
  const auto verdict = sqh::existence_screen(sys);
  sqh::json rep{{"command", normal_form_focus ? "normal-form" : "classify"},
                {"system", sqh::system_to_json(sys)},
                {"screen", sqh::screen_verdict_to_json(verdict)},
                {"config_hash", hash_of(g, "classify")}};
  std::ostringstream text;
  if (const auto* nf = std::get_if<sqh::NormalForm>(&verdict)) {
    text << "normal form; " << to_string(nf->parity_case) << "; r1=" << nf->r1
         << " r2=" << nf->r2 << " l1=" << nf->l1 << " l2=" << nf->l2 << " (m=" << nf->m
         << ", n=" << nf->n << ")";
    if (sys.swapped_xy) text << " [x and y exchanged to meet the convention]";
    if (normal_form_focus) {
      text << "\n  a =";
      for (const auto& c : nf->a) text << " " << sqh::to_string(c);
      text << "\n  b =";
      for (const auto& c : nf->b) text << " " << sqh::to_string(c);
    }
    if (nf->parity_case == sqh::ParityCase::QEven) {
      const bool sym = sqh::symmetry_center_check(*nf);
      rep["symmetry_center"] = sym;
      text << "\n  reflection symmetry holds: any periodic behavior forces a center (thm1.2.iv)";
    }
  } else {
    const auto& npo = std::get<sqh::NoPeriodicOrbit>(verdict);
    text << "no periodic orbit (" << npo.code << "): " << npo.detail;
    if (!npo.witness.empty()) text << " [" << npo.witness << "]";
  }
  emit(g, rep, text.str());
  return kOk;
}

int cmd_lower_bound(const GlobalOpts& g, int m, int n) {
  int p = g.wp, q = g.wq;
  if (!g.input.empty() || (!g.poly_p.empty() && !g.poly_q.empty())) {
    const auto in = load_system(g);
    const auto sys = sqh::classify_system(in.P, in.Q, in.w);
    p = sys.w.p;
    q = sys.w.q;
    m = sys.m;
    n = sys.n;
  }
  const int bound = sqh::lower_bound(p, q, m, n);
  sqh::json rep{{"command", "lower-bound"}, {"p", p}, {"q", q}, {"m", m}, {"n", n},
                {"lower_bound", bound},     {"config_hash", hash_of(g, "lower-bound")}};
  std::ostringstream text;
  text << "N(" << p << "," << q << "," << m << "," << n << ") >= " << bound;
  emit(g, rep, text.str());
  return kOk;
}

sqh::NormalForm frame_from_options(const GlobalOpts& g, int m, int n) {
  if (!g.input.empty() || (!g.poly_p.empty() && !g.poly_q.empty())) {
    const auto in = load_system(g);
    const auto sys = sqh::classify_system(in.P, in.Q, in.w);
    const auto verdict = sqh::existence_screen(sys);
    if (const auto* npo = std::get_if<sqh::NoPeriodicOrbit>(&verdict))
      throw sqh::Error("system admits no periodic orbit (" + npo->code + "): " + npo->detail);
    return std::get<sqh::NormalForm>(verdict);
  }
  return sqh::hamiltonian_frame(g.wp, g.wq, m, n);
}

int cmd_abelian(const GlobalOpts& g, int m, int n, const std::string& a_list,
                const std::string& b_list) {
  const auto nf = frame_from_options(g, m, n);
  sqh::MomentTable mt(sqh::TrigParams(nf.l1, nf.l2));
  sqh::PerturbationSpec pert;
  pert.a = parse_list(a_list);
  pert.b = parse_list(b_list);
  pert.epsilon = g.eps;
  const auto af = sqh::abelian_coefficients(nf, pert, mt);
  auto report = sqh::count_positive_simple_zeros(af);
  report.lower_bound = sqh::lower_bound(nf.w.p, nf.w.q, nf.m, nf.n);
  sqh::json rep{{"command", "abelian"},
                {"frame", sqh::normal_form_to_json(nf)},
                {"abelian", sqh::abelian_to_json(af)},
                {"report", sqh::cycle_report_to_json(report)},
                {"config_hash", hash_of(g, "abelian", a_list + ";" + b_list)}};
  std::ostringstream text;
  text << "F(xi) coefficients (xi = rho^" << af.xi_power << "):";
  for (double c : af.F) text << " " << c;
  if (report.identically_zero) {
    text << "\nF is identically zero: first-order center candidate";
  } else {
    text << "\npositive zeros:";
    for (const auto& z : report.zeros)
      text << " xi=" << z.xi << " (rho=" << z.rho << (z.simple ? ", simple)" : ", non-simple)");
    text << "\ncount " << report.zero_count << ", lower bound " << report.lower_bound;
  }
  emit(g, rep, text.str());
  return kOk;
}

int cmd_design(const GlobalOpts& g, int m, int n, const std::string& radii_list) {
  const auto nf = frame_from_options(g, m, n);
  sqh::MomentTable mt(sqh::TrigParams(nf.l1, nf.l2));
  const auto radii = parse_list(radii_list);
  const auto pert = sqh::design_perturbation(nf, radii, mt, g.eps);
  const auto af = sqh::abelian_coefficients(nf, pert, mt);
  auto report = sqh::count_positive_simple_zeros(af);
  report.lower_bound = sqh::lower_bound(nf.w.p, nf.w.q, nf.m, nf.n);
  sqh::json rep{{"command", "design"},
                {"frame", sqh::normal_form_to_json(nf)},
                {"design", sqh::perturbation_to_json(pert)},
                {"abelian", sqh::abelian_to_json(af)},
                {"report", sqh::cycle_report_to_json(report)},
                {"config_hash", hash_of(g, "design", radii_list)}};
  std::ostringstream text;
  text << "designed perturbation (epsilon = " << pert.epsilon << ")\n  a =";
  for (double c : pert.a) text << " " << c;
  text << "\n  b =";
  for (double c : pert.b) text << " " << c;
  text << "\npredicted radii:";
  for (const auto& z : report.zeros) text << " " << z.rho;
  emit(g, rep, text.str());
  return kOk;
}

int cmd_cycles(const GlobalOpts& g, int m, int n, const std::string& radii_list, double x_lo,
               double x_hi, int grid) {
  const auto nf = frame_from_options(g, m, n);
  sqh::MomentTable mt(sqh::TrigParams(nf.l1, nf.l2));
  const int bound = sqh::lower_bound(nf.w.p, nf.w.q, nf.m, nf.n);

  sqh::json rep{{"command", "cycles"},
                {"frame", sqh::normal_form_to_json(nf)},
                {"lower_bound", bound},
                {"config_hash", hash_of(g, "cycles", radii_list)}};
  std::ostringstream text;
  text << "lower bound: " << bound;

  if (radii_list.empty()) {
    emit(g, rep, text.str());
    return kOk;
  }

  const auto radii = parse_list(radii_list);
  const auto pert = sqh::design_perturbation(nf, radii, mt, g.eps);
  const auto af = sqh::abelian_coefficients(nf, pert, mt);
  auto report = sqh::count_positive_simple_zeros(af);
  report.lower_bound = bound;

  const auto field = sqh::PlanarField::perturbed_hamiltonian(nf, pert);
  if (x_lo <= 0 || x_hi <= x_lo) {
    // pick a sweep window that encloses the predicted section radii
    double lo = 1e300, hi = 0;
    for (const auto& z : report.zeros) {
      const double x = sqh::section_x_from_rho(z.rho, nf.l1, nf.l2);
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    x_lo = 0.5 * lo;
    x_hi = 1.6 * hi;
  }
  const auto search = sqh::find_limit_cycles(field, x_lo, x_hi, grid, make_return_options(g));

  int missed = 0;
  for (const auto& z : report.zeros) {
    if (!z.simple) continue;
    sqh::CycleConfirmation conf;
    conf.rho_predicted = z.rho;
    conf.residual = 1e300;
    for (const auto& est : search.cycles) {
      const double rel = std::abs(est.rho_equiv - z.rho) / z.rho;
      if (rel < conf.residual) {
        conf.residual = rel;
        conf.rho_observed = est.rho_equiv;
      }
    }
    conf.confirmed = conf.residual <= 0.10;
    if (!conf.confirmed) ++missed;
    report.confirmed.push_back(conf);
  }

  rep["design"] = sqh::perturbation_to_json(pert);
  rep["report"] = sqh::cycle_report_to_json(report);
  rep["found_cycles"] = sqh::json::array();
  for (const auto& est : search.cycles)
    rep["found_cycles"].push_back(
        {{"x_fixed", est.x_fixed}, {"rho_equiv", est.rho_equiv}, {"residual", est.residual}});
  rep["no_return_samples"] = search.no_return_samples;

  text << "\npredicted radii:";
  for (const auto& z : report.zeros) text << " " << z.rho;
  text << "\nconfirmed cycles:";
  for (const auto& est : search.cycles) text << " rho=" << est.rho_equiv;
  text << "\n" << (missed == 0 ? "all predicted cycles confirmed" : "MISSED a predicted cycle");
  emit(g, rep, text.str());
  if (search.no_return_samples == search.samples) return kNumericalFailure;
  return missed == 0 ? kOk : kDisagree;
}

// Builds the one-coefficient-column family from a parsed system.
sqh::CenterFamily center_family_from(const sqh::NormalForm& nf) {
  sqh::CenterFamily fam;
  fam.w = nf.w;
  fam.r1 = nf.r1;
  fam.r2 = nf.r2;
  fam.a = nf.a;
  fam.b0 = nf.b[0];
  for (std::size_t j = 1; j < nf.b.size(); ++j)
    if (!nf.b[j].is_zero())
      throw sqh::Error("center command needs the one-column family y' = b0 x^{r2}");
  return fam;
}

int cmd_center(const GlobalOpts& g) {
  const auto in = load_system(g);
  const auto sys = sqh::classify_system(in.P, in.Q, in.w);
  const auto verdict = sqh::existence_screen(sys);
  if (const auto* npo = std::get_if<sqh::NoPeriodicOrbit>(&verdict))
    throw sqh::Error("system admits no periodic orbit (" + npo->code + "): " + npo->detail);
  const auto nf = std::get<sqh::NormalForm>(verdict);
  const auto fam = center_family_from(nf);
  sqh::MomentTable mt(sqh::TrigParams(fam.l1(), fam.l2()));
  const auto v = sqh::center_at_origin(fam, mt);

  const auto field = sqh::PlanarField::from_center_family(fam);
  const auto ropt = make_return_options(g);
  sqh::json rep{{"command", "center"},
                {"verdict", sqh::center_verdict_to_json(v)},
                {"config_hash", hash_of(g, "center")}};
  std::ostringstream text;
  int rc = kOk;
  if (v.kind == sqh::CenterVerdict::Kind::Center) {
    const double x_lo = sqh::section_x_from_rho(0.45, fam.l1(), fam.l2());
    const double x_hi = sqh::section_x_from_rho(0.8, fam.l1(), fam.l2());
    auto popt = sqh::probe_return_options();
    popt.integ = ropt.integ;
    const auto probe = sqh::detect_center(field, x_lo, x_hi, 5, 1e-8, popt);
    rep["oracle"] = {{"is_center", probe.is_center},
                     {"max_rel_displacement", probe.max_rel_displacement},
                     {"no_return_samples", probe.no_return_samples}};
    text << "Center (" << v.code << "); oracle displacement " << probe.max_rel_displacement;
    if (probe.no_return_samples > 0) rc = kNumericalFailure;
    else if (!probe.is_center) rc = kDisagree;
  } else {
    auto fp = sqh::weak_focus_probe(fam, mt, 2 * v.order_index - 1);
    fp.options.integ = ropt.integ;
    const double x_probe = fp.x;
    const auto ret = sqh::return_map(field, x_probe, fp.options);
    if (ret.outcome != sqh::ReturnOutcome::Returned) {
      text << "WeakFocus (" << v.code << "); oracle failed: " << to_string(ret.outcome);
      rc = kNumericalFailure;
    } else {
      const double d = ret.sample->x_out - ret.sample->x_in;
      const int oracle_sign = d > 0 ? 1 : -1;
      rep["oracle"] = {{"probe_x", x_probe}, {"displacement", d}, {"sign", oracle_sign}};
      const bool agree = oracle_sign == v.stability_sign;
      text << "WeakFocus order " << v.order_index << " (" << v.code << "), stability_sign "
           << v.stability_sign << ", cyclicity " << v.cyclicity << "; oracle displacement " << d
           << (agree ? " agrees" : " DISAGREES");
      if (!agree) rc = kDisagree;
    }
  }
  emit(g, rep, text.str());
  return rc;
}

int cmd_infinity(const GlobalOpts& g, int r1, int r2, const std::string& b_list, double annulus_lo,
                 double annulus_hi) {
  sqh::InfinityFamily fam;
  fam.w = sqh::WeightVector(g.wp, g.wq);
  fam.r1 = r1;
  fam.r2 = r2;
  fam.b = parse_rational_list(b_list);
  const auto v = sqh::infinity_analysis(fam);
  const auto field = sqh::PlanarField::from_infinity_family(fam);
  auto ropt = make_return_options(g);
  ropt.time_limit = 1e4;

  sqh::json rep{{"command", "infinity"},
                {"verdict", sqh::infinity_verdict_to_json(v)},
                {"config_hash", hash_of(g, "infinity", b_list)}};
  std::ostringstream text;
  int rc = kOk;
  const auto probe = sqh::detect_center(field, annulus_lo, annulus_hi, 5, 1e-6, ropt);
  rep["oracle"] = {{"is_center", probe.is_center},
                   {"max_rel_displacement", probe.max_rel_displacement},
                   {"no_return_samples", probe.no_return_samples}};
  if (probe.no_return_samples > 0) rc = kNumericalFailure;
  if (v.kind == sqh::InfinityVerdict::Kind::CenterAtInfinity) {
    text << "CenterAtInfinity (" << v.code << "), cyclicity " << v.cyclicity
         << "; annulus displacement <= " << probe.max_rel_displacement;
    if (rc == kOk && !probe.is_center) rc = kDisagree;
  } else {
    text << "FocusAtInfinity order " << v.order_index << " (" << v.code << "), sign of b_{2i-1} "
         << v.stability_sign << ", cyclicity " << v.cyclicity
         << "; annulus displacement " << probe.max_rel_displacement
         << " (empirical orientation: displacement recorded by the oracle)";
    if (rc == kOk && probe.is_center) rc = kDisagree;
  }
  emit(g, rep, text.str());
  return rc;
}

int cmd_local_type(const GlobalOpts& g, const std::string& a0_s, const std::string& a1_s,
                   const std::string& b_list, int p, int n, bool run_oracle) {
  const sqh::Rational a0 = sqh::parse_rational(a0_s);
  const sqh::Rational a1 = sqh::parse_rational(a1_s);
  const auto b = parse_rational_list(b_list);
  const auto t = sqh::local_type_m1(a0, a1, b, p, n);
  sqh::json rep{{"command", "local-type"},
                {"verdict", sqh::local_type_to_json(t)},
                {"config_hash", hash_of(g, "local-type", a0_s + ";" + a1_s + ";" + b_list)}};
  std::ostringstream text;
  text << to_string(t.kind) << " (" << t.code << "); " << t.witness;
  int rc = kOk;
  if (run_oracle) {
    sqh::Polynomial P, Q;
    P.add_term(a1, 1, 0);
    P.add_term(a0, 0, p);
    for (int j = 0; j < static_cast<int>(b.size()); ++j) Q.add_term(b[j], n / p - j, j * p);
    const auto field = sqh::PlanarField::from_polynomials(P, Q);
    const auto probe = sqh::classify_local_numeric(field);
    rep["oracle"] = {{"kind", to_string(probe.kind)},
                     {"forward_contracting", probe.forward_contracting},
                     {"backward_contracting", probe.backward_contracting},
                     {"some_return", probe.some_return}};
    text << "; oracle " << to_string(probe.kind);
    using LK = sqh::LocalType::Kind;
    using PK = sqh::LocalProbe::Kind;
    const bool agree =
        (t.kind == LK::TopologicalSaddle && probe.kind == PK::Saddle) ||
        (t.kind == LK::UnstableNode && probe.kind == PK::UnstableNode) ||
        (t.kind == LK::StableNode && probe.kind == PK::StableNode) ||
        (t.kind == LK::SaddleNode && probe.kind == PK::SaddleNode) ||
        ((t.kind == LK::Center || t.kind == LK::Focus) && probe.kind == PK::CenterOrFocus) ||
        t.kind == LK::Undetermined;
    if (!agree) rc = kDisagree;
  }
  emit(g, rep, text.str());
  return rc;
}

int cmd_simulate(const GlobalOpts& g, double x0, double y0, double t_end) {
  const auto in = load_system(g);
  const auto field = sqh::PlanarField::from_polynomials(in.P, in.Q);
  sqh::IntegrationOptions opt;
  opt.rel_tol = g.tol_rel;
  opt.abs_tol = g.tol_abs;
  opt.max_sample_dt = std::abs(t_end) / 2000.0;
  const auto trace = sqh::integrate(field, x0, y0, t_end, opt);
  const auto& last = trace.samples.back();
  sqh::json rep{{"command", "simulate"},
                {"status", trace.status == sqh::IntegrateStatus::Ok
                               ? "ok"
                               : (trace.status == sqh::IntegrateStatus::Blowup ? "blowup"
                                                                               : "step-limit")},
                {"final", {{"t", last.t}, {"x", last.x}, {"y", last.y}}},
                {"crossings", trace.crossings.size()},
                {"config_hash", hash_of(g, "simulate")}};
  std::ostringstream text;
  text << "status " << rep["status"].get<std::string>() << "; final (" << last.x << ", " << last.y
       << ") at t = " << last.t << "; section crossings: " << trace.crossings.size();
  if (!g.out.empty()) {
    sqh::export_portrait({trace}, g.out);
    text << "; trace written to " << g.out;
    GlobalOpts quiet = g;
    quiet.out.clear();
    emit(quiet, rep, text.str());
  } else {
    emit(g, rep, text.str());
  }
  return trace.status == sqh::IntegrateStatus::Ok ? kOk : kNumericalFailure;
}

int cmd_portrait(const GlobalOpts& g, const std::string& starts, double t_end,
                 const std::string& csv_path, const std::string& svg_path) {
  const auto in = load_system(g);
  const auto field = sqh::PlanarField::from_polynomials(in.P, in.Q);
  sqh::IntegrationOptions opt;
  opt.rel_tol = g.tol_rel;
  opt.abs_tol = g.tol_abs;
  opt.max_sample_dt = std::abs(t_end) / 1500.0;
  std::vector<sqh::Trace> traces;
  std::stringstream ss(starts);
  std::string item;
  while (std::getline(ss, item, ';')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw sqh::Error("starts must look like x:y;x:y");
    traces.push_back(sqh::integrate(field, std::stod(item.substr(0, colon)),
                                    std::stod(item.substr(colon + 1)), t_end, opt));
  }
  sqh::export_portrait(traces, csv_path, svg_path);
  sqh::json rep{{"command", "portrait"},
                {"traces", traces.size()},
                {"csv", csv_path},
                {"svg", svg_path},
                {"config_hash", hash_of(g, "portrait", starts)}};
  emit(g, rep, "wrote " + std::to_string(traces.size()) + " traces to " + csv_path +
                   (svg_path.empty() ? "" : " and " + svg_path));
  return kOk;
}

int cmd_moments(const GlobalOpts& g, int l1, int l2, int max_deg) {
  sqh::MomentTable mt(sqh::TrigParams(l1, l2));
  mt.prefill(max_deg);
  if (!g.out.empty()) {
    std::ofstream out(g.out);
    if (!out) throw sqh::Error("cannot open output file: " + g.out);
    mt.dump_csv(out);
  } else {
    mt.dump_csv(std::cout);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"limit-cycle analysis for planar semi-quasi-homogeneous vector fields"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_flag("--json", g.json, "emit JSON reports");
  app.add_option("--seed", g.seed, "seed for randomized suites");
  app.add_option("--tol-rel", g.tol_rel, "integrator relative tolerance");
  app.add_option("--tol-abs", g.tol_abs, "integrator absolute tolerance");
  app.add_option("--eps", g.eps, "perturbation scale epsilon");
  app.add_option("--out", g.out, "write the report (or data) to this path");
  app.add_option("--input,-i", g.input, "system JSON file, or '-' for stdin");
  app.add_option("--P", g.poly_p, "P(x,y) as polynomial text");
  app.add_option("--Q", g.poly_q, "Q(x,y) as polynomial text");
  app.add_option("--p", g.wp, "weight of x");
  app.add_option("--q", g.wq, "weight of y");

  auto* classify = app.add_subcommand("classify", "screen for nonexistence / normal form");
  auto* normal_form = app.add_subcommand("normal-form", "print the reduced coefficient form");
  int m = 0, n = 0;
  auto* lower = app.add_subcommand("lower-bound", "limit-cycle count lower bound");
  lower->add_option("--m", m, "degree offset m");
  lower->add_option("--n", n, "degree offset n");

  std::string a_list, b_list, radii_list;
  auto* abelian = app.add_subcommand("abelian", "first-order displacement polynomial F");
  abelian->add_option("--m", m);
  abelian->add_option("--n", n);
  abelian->add_option("--a", a_list, "perturbation a_1,a_2,... (comma list)");
  abelian->add_option("--b", b_list, "perturbation b_1,b_2,...");

  auto* design = app.add_subcommand("design", "perturbation realizing prescribed cycle radii");
  design->add_option("--m", m);
  design->add_option("--n", n);
  design->add_option("--radii", radii_list, "target radii (comma list)")->required();

  double x_lo = 0, x_hi = 0;
  int grid = 24;
  auto* cycles = app.add_subcommand("cycles", "design, sweep, and confirm limit cycles");
  cycles->add_option("--m", m);
  cycles->add_option("--n", n);
  cycles->add_option("--radii", radii_list, "target radii; omit for the bound only");
  cycles->add_option("--x-lo", x_lo, "sweep window low end");
  cycles->add_option("--x-hi", x_hi, "sweep window high end");
  cycles->add_option("--grid", grid, "sweep grid size");

  auto* center = app.add_subcommand("center", "center / weak focus at the origin plus oracle");

  int r1 = 0, r2 = 0;
  double annulus_lo = 10, annulus_hi = 20;
  auto* infinity = app.add_subcommand("infinity", "behavior at infinity plus annulus oracle");
  infinity->add_option("--r1", r1)->required();
  infinity->add_option("--r2", r2)->required();
  infinity->add_option("--b", b_list, "coefficients b_1,b_2,...");
  infinity->add_option("--annulus-lo", annulus_lo);
  infinity->add_option("--annulus-hi", annulus_hi);

  std::string a0_s = "0", a1_s = "0";
  int ltp = 1, ltn = 1;
  bool oracle = false;
  auto* local = app.add_subcommand("local-type", "local type for the m = 1 family");
  local->add_option("--a0", a0_s)->required();
  local->add_option("--a1", a1_s)->required();
  local->add_option("--b", b_list, "coefficients b_0,...,b_{n/p}")->required();
  local->add_option("--lp", ltp, "weight p")->required();
  local->add_option("--ln", ltn, "degree n")->required();
  local->add_flag("--oracle", oracle, "cross-check with the flow oracle");

  double x0 = 1, y0 = 0, t_end = 10;
  auto* simulate = app.add_subcommand("simulate", "integrate one trajectory");
  simulate->add_option("--x0", x0);
  simulate->add_option("--y0", y0);
  simulate->add_option("--t", t_end, "integration time (may be negative)");

  std::string starts = "1:0", csv_path = "portrait.csv", svg_path;
  auto* portrait = app.add_subcommand("portrait", "trace orbits and export CSV/SVG");
  portrait->add_option("--starts", starts, "initial points x:y;x:y;...");
  portrait->add_option("--t", t_end);
  portrait->add_option("--csv", csv_path);
  portrait->add_option("--svg", svg_path);

  int l1 = 1, l2 = 1, max_deg = 8;
  auto* moments = app.add_subcommand("moments", "dump a moment table as CSV");
  moments->add_option("--l1", l1)->required();
  moments->add_option("--l2", l2)->required();
  moments->add_option("--max-deg", max_deg, "largest alpha+beta");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(classify)) return cmd_classify(g, false);
    if (app.got_subcommand(normal_form)) return cmd_classify(g, true);
    if (app.got_subcommand(lower)) return cmd_lower_bound(g, m, n);
    if (app.got_subcommand(abelian)) return cmd_abelian(g, m, n, a_list, b_list);
    if (app.got_subcommand(design)) return cmd_design(g, m, n, radii_list);
    if (app.got_subcommand(cycles)) return cmd_cycles(g, m, n, radii_list, x_lo, x_hi, grid);
    if (app.got_subcommand(center)) return cmd_center(g);
    if (app.got_subcommand(infinity))
      return cmd_infinity(g, r1, r2, b_list, annulus_lo, annulus_hi);
    if (app.got_subcommand(local))
      return cmd_local_type(g, a0_s, a1_s, b_list, ltp, ltn, oracle);
    if (app.got_subcommand(simulate)) return cmd_simulate(g, x0, y0, t_end);
    if (app.got_subcommand(portrait))
      return cmd_portrait(g, starts, t_end, csv_path, svg_path);
    if (app.got_subcommand(moments)) return cmd_moments(g, l1, l2, max_deg);
  } catch (const sqh::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const sqh::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const sqh::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
  return kOk;
}
