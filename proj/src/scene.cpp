#include "geoloop/scene.hpp"

#include "geoloop/generators.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace geoloop {

namespace fs = std::filesystem;

namespace {

constexpr double kWitnessTol = 1e-9;
// The deformation maximum is a closed form; its witness frame is re-measured from geometry.
constexpr double kClosedFormTol = 1e-6;
constexpr double kResidualOk = 1e-3;

const char* kCurvesDir = "curves";

Point point_field(const Json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing '") + key + "'");
  return point_from_json(j.at(key));
}

std::string num(double x) { return format_number(x); }

Json slack_json(const SlackPolicy& p) {
  Json j{{"c0_per_a", p.c0_per_a}, {"c_delta", p.c_delta}, {"c_epsilon", p.c_epsilon}};
  if (p.c0) j["c0"] = *p.c0;
  return j;
}

SlackPolicy slack_from_json(const Json& j) {
  SlackPolicy p;
  p.c0_per_a = j.value("c0_per_a", p.c0_per_a);
  p.c_delta = j.value("c_delta", p.c_delta);
  p.c_epsilon = j.value("c_epsilon", p.c_epsilon);
  if (j.contains("c0")) p.c0 = j.at("c0").get<double>();
  return p;
}

Json params_json(const Scene& s) {
  Json j{{"l", s.params.l}, {"a", s.params.a}, {"delta", s.params.delta}, {"refine", s.params.refine}};
  if (s.mode != "shorten") j["epsilon"] = s.epsilon;
  return j;
}

class Writer {
 public:
  Writer(const Scene& s, fs::path out) : s_(s), out_(std::move(out)) {}

  std::string curves(const std::string& file, const std::vector<PLCurve>& frames, Json extra = Json::object()) {
    Json j = frames_to_json(s_.manifold_spec, frames);
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    write_text(out_ / kCurvesDir / file, canonical_json(j, 17));
    return file;
  }

  std::string curve(const std::string& file, const PLCurve& c) {
    Json j = curve_to_json(c);
    j["manifold"] = s_.manifold_spec;
    write_text(out_ / kCurvesDir / file, canonical_json(j, 17));
    return file;
  }

  void csv(const std::string& file, const std::vector<std::string>& header,
           const std::vector<std::vector<std::string>>& rows) {
    write_csv(out_ / file, header, rows);
  }

  const fs::path& dir() const { return out_; }

 private:
  const Scene& s_;
  fs::path out_;
};

Json frames_witness(const std::string& file, double tol = kWitnessTol) {
  return Json{{"kind", "frames"}, {"file", file}, {"tolerance", tol}};
}

Json count_witness(std::size_t n) { return Json{{"kind", "count"}, {"value", n}}; }

Json cert_entry(const BoundCertificate& c, Json witness) {
  Json j = certificate_to_json(c);
  j["witness"] = std::move(witness);
  return j;
}

std::size_t argmax_frame(const std::vector<PLCurve>& frames) {
  std::size_t best = 0;
  double len = -1.0;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const double x = remeasure(frames[i]);
    if (x > len) {
      len = x;
      best = i;
    }
  }
  return best;
}

Json base_report(const Scene& s) {
  Json r;
  r["scene"] = s.name;
  r["mode"] = s.mode;
  r["manifold"] = s.manifold_spec;
  r["params"] = params_json(s);
  r["seed"] = s.seed;
  r["slack_policy"] = slack_json(s.slack);
  r["curves_dir"] = kCurvesDir;
  return r;
}

bool all_pass(const Json& report) {
  for (const Json& c : report.at("certificates"))
    if (!c.at("pass").get<bool>()) return false;
  for (auto it = report.at("checks").begin(); it != report.at("checks").end(); ++it)
    if (!it.value().get<bool>()) return false;
  return true;
}

int finish(Json& report, Writer& w, std::ostream& log) {
  const bool ok = all_pass(report);
  report["status"] = ok ? "ok" : "certificate_failure";
  write_text(w.dir() / "report.json", canonical_json(report));
  for (const Json& c : report.at("certificates"))
    log << (c.at("pass").get<bool>() ? "PASS " : "FAIL ") << c.at("formula").get<std::string>() << ": "
        << num(c.at("measured_max").get<double>()) << " <= " << num(c.at("value").get<double>()) << " + "
        << num(c.at("slack").get<double>()) << "\n";
  for (auto it = report.at("checks").begin(); it != report.at("checks").end(); ++it)
    if (!it.value().get<bool>()) log << "FAIL check " << it.key() << "\n";
  log << "status: " << report.at("status").get<std::string>() << "\n";
  return ok ? kExitOk : kExitCertificate;
}

int violated(const Scene& s, Writer& w, const HypothesisViolated& e, std::ostream& log) {
  Json report = base_report(s);
  report["status"] = "hypothesis_violated";
  report["message"] = e.what();
  report["refuting_loop"] = Json{{"length", e.loop_length}, {"file", w.curve("refuting_loop.json", e.loop)}};
  report["certificates"] = Json::array();
  report["checks"] = Json::object();
  write_curve_csv(w.dir() / "refuting_loop.csv", e.loop);
  write_text(w.dir() / "report.json", canonical_json(report));
  log << "hypothesis violated: " << e.what() << "\n"
      << "refuting loop length " << num(e.loop_length) << "\n";
  return kExitHypothesis;
}

int run_shorten(const Scene& s, Writer& w, std::ostream& log) {
  const PLCurve alpha = build_curve(s);
  const ShorteningResult r = shorten_curve(alpha, s.params);
  const ShorteningFamily& fam = r.family;
  const double L0 = remeasure(alpha);
  const double slack = s.slack(s.params.symbols(L0));
  const FamilyCheck chk = check_family(r, s.params, slack);

  std::vector<PLCurve> gammas, partial;
  Json tau = Json::array(), svals = Json::array();
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < fam.frame_count(); ++i) {
    gammas.push_back(fam.frame(i));
    partial.push_back(partial_frame(fam, i));
    tau.push_back(fam.tau(i));
    svals.push_back(fam.s(i));
    rows.push_back({std::to_string(i), num(fam.s(i)), num(fam.tau(i)), num(gammas.back().length()),
                    fam.in_frozen(i) ? "1" : "0"});
  }
  w.curve("input.json", alpha);
  w.curve("final.json", r.final);
  w.curves("family.json", gammas, Json{{"tau", tau}, {"s", svals}, {"P", fam.P()}, {"Q", fam.Q()}});
  w.curves("homotopy.json", partial);
  w.csv("family.csv", {"index", "s", "tau", "length", "frozen"}, rows);
  write_curve_csv(w.dir() / "final.csv", r.final);

  Json report = base_report(s);
  Json certs = Json::array();
  for (const BoundCertificate& c : chk.certs) {
    switch (c.formula) {
      case Formula::l_plus_a:
        certs.push_back(cert_entry(c, frames_witness("final.json")));
        break;
      case Formula::L_plus_2a:
        certs.push_back(cert_entry(c, frames_witness("homotopy.json")));
        break;
      case Formula::l_plus_3a_delta:
        certs.push_back(cert_entry(c, frames_witness("family.json")));
        break;
      default:
        certs.push_back(cert_entry(c, count_witness(r.steps)));
    }
  }
  report["certificates"] = certs;
  report["checks"] = Json{{"tau_monotone", chk.tau_monotone}, {"frozen_endpoints", chk.frozen_endpoints},
                          {"moving_spans", chk.moving_spans}, {"last_is_final", chk.last_is_final},
                          {"partitions", chk.partitions},     {"loops_ok", chk.loops_ok},
                          {"even_points", chk.even_points}};
  Json loops = Json::array();
  for (const SplicedLoop& lp : r.loops)
    loops.push_back(Json{{"t", lp.t}, {"loop_length", lp.loop_length}, {"limit_length", lp.limit_length},
                         {"converged", lp.converged}});
  report["summary"] = Json{{"input_length", L0},          {"final_length", chk.final_length},
                           {"steps", r.steps},            {"predicted_steps", r.predicted_steps},
                           {"frames", fam.frame_count()}, {"vacuous", r.vacuous},
                           {"max_gamma", chk.max_gamma},  {"max_homotopy", chk.max_homotopy},
                           {"loops", loops}};
  log << "shortened " << num(L0) << " -> " << num(chk.final_length) << " in " << r.steps << " steps ("
      << fam.frame_count() << " frames)\n";
  return finish(report, w, log);
}

struct FamilyRun {
  FamilyResult result;
  Json certs = Json::array();
  Json checks;
  Json summary;
};

FamilyRun run_family_part(const Scene& s, Writer& w, std::ostream& log) {
  FamilyOptions opt;
  opt.epsilon = s.epsilon;
  opt.sample_gaps = s.sample_gaps;
  opt.sample_states = s.sample_states;
  opt.slack = s.slack;
  opt.L = s.L;
  FamilyRun out;
  out.result = shorten_family(build_family(s), s.params, opt);
  const FamilyResult& r = out.result;
  const LoopFamily& f = r.family;
  log << "family: " << f.nodes() << " nodes after refinement, L = " << num(r.L) << "\n";

  std::size_t gc = 0, gt = 0, gd = 0;
  for (const GapSummary& g : r.gaps) {
    if (g.max_contraction_measured > r.gaps[gc].max_contraction_measured) gc = g.gap;
    if (g.max_tilde_measured > r.gaps[gt].max_tilde_measured) gt = g.gap;
    if (g.max_deformation > r.gaps[gd].max_deformation) gd = g.gap;
  }
  const double slack = s.slack(r.certs.front().params);
  const std::vector<PLCurve> C = contraction_frames(f, s.params, gc);
  const std::vector<PLCurve> T = shortened_gap_frames(f, s.params, gt, slack);
  const std::vector<PLCurve> D = deformation_frames(f, s.params, gd, r.gaps[gd].argmax_deformation, slack);
  const std::size_t sd = r.gaps[gd].argmax_deformation;

  for (const BoundCertificate& c : r.certs) {
    if (c.formula == Formula::two_l_4a)
      out.certs.push_back(cert_entry(c, frames_witness(w.curve("two_l_4a.json", C[argmax_frame(C)]))));
    else if (c.formula == Formula::three_l_5a)
      out.certs.push_back(cert_entry(c, frames_witness(w.curve("three_l_5a.json", T[argmax_frame(T)]))));
    else
      out.certs.push_back(
          cert_entry(c, frames_witness(w.curve("L_5a_3l.json", D[argmax_frame(D)]), kClosedFormTol)));
  }
  w.curves("nodes.json", f.loops, Json{{"t", f.t}});
  w.curves("beta.json", r.beta);

  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < f.nodes(); ++i)
    rows.push_back({std::to_string(i), num(f.t[i]), num(f.loops[i].length()), num(r.beta[i].length()),
                    std::to_string(r.steps[i])});
  w.csv("nodes.csv", {"node", "t", "input_length", "shortened_length", "steps"}, rows);
  rows.clear();
  for (const GapSummary& g : r.gaps)
    rows.push_back({std::to_string(g.gap), std::to_string(g.states), num(g.max_contraction_measured),
                    num(g.max_tilde_measured), num(g.max_deformation), num(g.max_short_side), num(g.max_vertical),
                    g.doubled_b ? "B" : "A"});
  w.csv("gaps.csv",
        {"gap", "states", "max_contraction", "max_tilde", "max_deformation", "max_short_side", "max_vertical",
         "doubled"},
        rows);
  rows.clear();
  for (const DeformationSample& d : r.samples)
    rows.push_back({std::to_string(d.gap), std::to_string(d.state), num(d.closed_form), num(d.measured),
                    std::to_string(d.frames)});
  w.csv("samples.csv", {"gap", "state", "closed_form", "measured", "frames"}, rows);

  double closed_gap = 0.0;
  for (const DeformationSample& d : r.samples) closed_gap = std::max(closed_gap, std::abs(d.closed_form - d.measured));
  out.checks = Json{{"disjoint", r.disjoint},
                    {"based", r.based},
                    {"start_matches", r.start_matches},
                    {"end_matches", r.end_matches},
                    {"closed_form_matches", closed_gap <= kClosedFormTol}};
  out.summary = Json{{"nodes", f.nodes()},
                     {"input_nodes", s.family.value("nodes", 0)},
                     {"epsilon", r.epsilon},
                     {"L", r.L},
                     {"max_vertical", r.max_vertical},
                     {"max_short_side", r.max_short_side},
                     {"max_deformation", r.max_deformation},
                     {"argmax_deformation", Json{{"gap", gd}, {"state", sd}}},
                     {"sampled_states", r.samples.size()},
                     {"closed_form_gap", closed_gap}};
  return out;
}

int run_family(const Scene& s, Writer& w, std::ostream& log, bool sweep) {
  FamilyRun fr = run_family_part(s, w, log);
  Json report = base_report(s);
  if (sweep) {
    const double slack = s.slack(fr.result.certs.front().params);
    const std::vector<PLCurve> members = sweepout_members(fr.result.family, s.params, s.spacing, slack);
    MinimaxOptions opt = s.minimax;
    opt.slack = s.slack;
    const MinimaxResult mm = minimax_geodesic(members, opt);
    log << "minimax: " << members.size() << " members, max " << num(mm.minimax_length) << ", residual "
        << num(mm.geodesic_residual) << " after " << mm.sweeps << " sweeps\n";
    fr.certs.push_back(cert_entry(mm.bound, frames_witness(w.curve("critical_loop.json", mm.critical_loop))));
    write_curve_csv(w.dir() / "critical_loop.csv", mm.critical_loop);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < mm.stage_max.size(); ++i) rows.push_back({std::to_string(i), num(mm.stage_max[i])});
    w.csv("minimax.csv", {"sweep", "max_length"}, rows);
    fr.checks["geodesic"] = mm.geodesic_residual <= kResidualOk;
    fr.checks["nondegenerate"] = !mm.degenerate;
    fr.checks["monotone"] = mm.monotone;
    fr.summary["minimax"] = Json{{"length", mm.minimax_length},
                                 {"geodesic_residual", mm.geodesic_residual},
                                 {"initial_max", mm.initial_max},
                                 {"members", mm.members},
                                 {"family_members", members.size()},
                                 {"brackets", mm.brackets},
                                 {"refined", mm.refined},
                                 {"sweeps", mm.sweeps},
                                 {"stagnated", mm.stagnated},
                                 {"spacing", s.spacing},
                                 {"file", "critical_loop.json"}};
  }
  report["certificates"] = fr.certs;
  report["checks"] = fr.checks;
  report["summary"] = fr.summary;
  return finish(report, w, log);
}

bool close(double x, double y, double tol) { return std::abs(x - y) <= tol * std::max(1.0, std::abs(y)); }

}  // namespace

Scene parse_scene(const Json& j) {
  if (!j.is_object()) throw ConfigError("scene must be a JSON object");
  try {
    Scene s;
    s.name = j.value("name", std::string("scene"));
    s.mode = j.value("mode", std::string("shorten"));
    if (s.mode != "shorten" && s.mode != "family" && s.mode != "sweepout")
      throw ConfigError("unknown mode '" + s.mode + "'");
    s.manifold_spec = j.at("manifold");
    s.manifold = manifold_from_json(s.manifold_spec);
    const Json& p = j.at("params");
    s.params.l = p.at("l").get<double>();
    s.params.a = p.at("a").get<double>();
    s.params.delta = p.at("delta").get<double>();
    s.params.refine = p.value("refine", 1);
    s.params.validate();
    if (s.params.a < s.manifold->diameter_bound() * (1.0 - 1e-9))
      throw ConfigError("a = " + num(s.params.a) + " is below the diameter bound " + num(s.manifold->diameter_bound()));
    s.epsilon = p.value("epsilon", s.epsilon);
    if (!(s.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (p.contains("L")) s.L = p.at("L").get<double>();
    s.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("slack")) s.slack = slack_from_json(j.at("slack"));
    if (s.mode == "shorten") {
      s.curve = j.at("curve");
    } else {
      s.family = j.at("family");
      s.sample_gaps = s.family.value("sample_gaps", s.sample_gaps);
      s.sample_states = s.family.value("sample_states", s.sample_states);
    }
    if (j.contains("sweepout")) {
      const Json& w = j.at("sweepout");
      s.spacing = w.value("spacing", s.spacing);
      s.minimax.points = w.value("points", s.minimax.points);
      s.minimax.q = w.value("q", s.minimax.q);
      s.minimax.max_sweeps = w.value("max_sweeps", s.minimax.max_sweeps);
    }
    return s;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("scene: ") + e.what());
  }
}

Scene load_scene(const fs::path& p) { return parse_scene(read_json(p)); }

PLCurve build_curve(const Scene& s) {
  const Json& c = s.curve;
  try {
    const std::string g = c.at("generator").get<std::string>();
    if (g == "random_wiggle")
      return random_wiggle(s.manifold, point_field(c, "p"), point_field(c, "q"), c.at("length").get<double>(), s.seed,
                           c.value("wiggle", 6.0));
    if (g == "winding_line") {
      const auto w = c.at("class").get<std::vector<double>>();
      if (w.size() != 2) throw ConfigError("winding_line class needs two entries");
      return winding_line(s.manifold, point_field(c, "p"), w[0], w[1], c.value("wobble", 0.0), c.value("waves", 3));
    }
    if (g == "geodesic") return PLCurve::geodesic(s.manifold, point_field(c, "p"), point_field(c, "q"));
    if (g == "meridian_loop") return meridian_loop(s.manifold, c.at("t").get<double>());
    if (g == "breakpoints") {
      std::vector<Point> pts;
      for (const Json& x : c.at("points")) pts.push_back(s.manifold->canonical(point_from_json(x)));
      if (pts.empty()) throw ConfigError("breakpoints: empty");
      const PLCurve raw(s.manifold, std::move(pts));
      return max_segment(raw) > kDefaultGap ? refine(raw, kDefaultGap) : raw;
    }
    throw ConfigError("unknown curve generator '" + g + "'");
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("curve: ") + e.what());
  }
}

LoopFamily build_family(const Scene& s) {
  const Json& c = s.family;
  try {
    const std::string g = c.at("generator").get<std::string>();
    const int nodes = c.value("nodes", 16);
    if (nodes < 2) throw ConfigError("family needs at least 2 nodes");
    const ManifoldPtr m = s.manifold;
    if (g == "meridian_sweep")
      return make_family(m, [m](double t) { return meridian_loop(m, t); }, static_cast<std::size_t>(nodes));
    if (g == "constant") {
      const Point p = c.contains("p") ? point_field(c, "p") : north_pole(m);
      return make_family(m, [m, p](double) { return PLCurve::constant(m, p); }, static_cast<std::size_t>(nodes));
    }
    throw ConfigError("unknown family generator '" + g + "'");
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("family: ") + e.what());
  }
}

int run_scene(const Scene& s, const fs::path& out, std::ostream& log) {
  fs::create_directories(out / kCurvesDir);
  Writer w(s, out);
  try {
    if (s.mode == "shorten") return run_shorten(s, w, log);
    return run_family(s, w, log, s.mode == "sweepout");
  } catch (const HypothesisViolated& e) {
    return violated(s, w, e, log);
  }
}

int verify_report(const fs::path& report_path, const std::optional<fs::path>& curves_dir, std::ostream& log) {
  const Json report = read_json(report_path);
  try {
    const fs::path base = curves_dir ? *curves_dir
                                     : report_path.parent_path() / report.value("curves_dir", std::string(kCurvesDir));
    bool ok = true;
    auto mismatch = [&](const std::string& what) {
      log << "MISMATCH " << what << "\n";
      ok = false;
    };
    if (report.at("status").get<std::string>() == "hypothesis_violated") {
      const Json& rl = report.at("refuting_loop");
      const std::vector<PLCurve> loop = frames_from_json(read_json(base / rl.at("file").get<std::string>()));
      const double len = remeasure(loop.front());
      if (!close(len, rl.at("length").get<double>(), kWitnessTol)) mismatch("refuting loop length");
      if (!loop.front().is_closed()) mismatch("refuting loop is not closed");
      if (!(len > report.at("params").at("l").get<double>())) mismatch("refuting loop is not longer than l");
      log << (ok ? "verified" : "verification failed") << "\n";
      return ok ? kExitOk : kExitMismatch;
    }
    const SlackPolicy policy = slack_from_json(report.at("slack_policy"));
    bool all = true;
    for (const Json& cj : report.at("certificates")) {
      const BoundCertificate c = certificate_from_json(cj);
      const std::string name = formula_name(c.formula);
      if (!close(evaluate(c.formula, c.params), c.claimed, kWitnessTol)) mismatch(name + ": value");
      const double slack = c.formula == Formula::step_count ? 1.0 : policy(c.params);
      if (!close(slack, c.slack, kWitnessTol)) mismatch(name + ": slack");
      const Json& w = cj.at("witness");
      const std::string kind = w.at("kind").get<std::string>();
      if (kind == "count") {
        if (w.at("value").get<double>() != c.measured) mismatch(name + ": count");
      } else if (kind == "frames") {
        const std::vector<PLCurve> frames = frames_from_json(read_json(base / w.at("file").get<std::string>()));
        const BoundCertificate re = verify(c, frames);
        const double tol = w.value("tolerance", kWitnessTol);
        if (re.measured > c.measured + tol * std::max(1.0, c.measured) || !close(re.measured, c.measured, tol))
          mismatch(name + ": measured " + num(c.measured) + " vs " + num(re.measured));
      } else {
        mismatch(name + ": unknown witness kind '" + kind + "'");
      }
      if ((c.measured <= c.claimed + c.slack) != c.pass) mismatch(name + ": pass flag");
      all = all && c.pass;
    }
    if (report.at("summary").contains("minimax")) {
      const Json& mm = report.at("summary").at("minimax");
      const std::vector<PLCurve> loop = frames_from_json(read_json(base / mm.at("file").get<std::string>()));
      const double res = geodesic_residual(loop.front(), true);
      if (std::abs(res - mm.at("geodesic_residual").get<double>()) > kWitnessTol) mismatch("geodesic_residual");
    }
    if (!ok) {
      log << "verification failed\n";
      return kExitMismatch;
    }
    log << "verified " << report.at("certificates").size() << " certificates\n";
    return all ? kExitOk : kExitCertificate;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("report: ") + e.what());
  }
}

void trace_scene(const Scene& s, std::ostream& out) {
  if (s.mode != "shorten") throw ConfigError("trace needs a shorten-mode scene");
  const ShorteningResult r = shorten_curve(build_curve(s), s.params);
  const ShorteningFamily& fam = r.family;
  out << csv_row({"index", "s", "tau", "length", "frozen"});
  for (std::size_t i = 0; i < fam.frame_count(); ++i)
    out << csv_row({std::to_string(i), num(fam.s(i)), num(fam.tau(i)), num(fam.frame_length(i)),
                    fam.in_frozen(i) ? "1" : "0"});
}

}  // namespace geoloop
