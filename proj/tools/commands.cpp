#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "irslab/chabauty.hpp"
#include "irslab/domains.hpp"
#include "irslab/error.hpp"
#include "irslab/fuchsian.hpp"
#include "irslab/irs.hpp"
#include "irslab/surfaces.hpp"

namespace irslab::cli {

namespace {

std::string default_threads() { return std::to_string(std::max(1u, std::thread::hardware_concurrency())); }

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << content;
  if (!out) throw ConfigError("failed writing '" + path + "'");
}

FuchsianGroup fixture(const ExperimentConfig& c, const std::string& key) {
  const std::string path = c.text(key);
  if (!std::ifstream(path)) throw ConfigError("group fixture '" + path + "' does not exist");
  try {
    return load_group(path);
  } catch (const Error& e) {
    throw ConfigError("group fixture '" + path + "': " + e.what());
  }
}

SurfaceSig signature(const ExperimentConfig& c, const std::string& key) {
  const std::vector<double> gp = c.numbers(key);
  if (gp.size() != 2 || gp[0] != std::floor(gp[0]) || gp[1] != std::floor(gp[1])) {
    throw ConfigError("key '" + key + "': expected g,p");
  }
  try {
    return SurfaceSig(static_cast<int>(gp[0]), static_cast<int>(gp[1]));
  } catch (const Error& e) {
    throw ConfigError("key '" + key + "': " + e.what());
  }
}

std::vector<TestFunctional> functionals(const ExperimentConfig& c) {
  std::vector<TestFunctional> out;
  for (const std::string& item : c.items("functionals")) {
    try {
      out.push_back(parse_functional(item));
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }
  return out;
}

std::size_t positive_count(const ExperimentConfig& c, const std::string& key) {
  const long long v = c.integer(key);
  if (v <= 0) throw ConfigError("key '" + key + "' must be positive");
  return static_cast<std::size_t>(v);
}

double positive(const ExperimentConfig& c, const std::string& key) {
  const double v = c.number(key);
  if (!(v > 0.0)) throw ConfigError("key '" + key + "' must be positive");
  return v;
}

unsigned thread_count(const ExperimentConfig& c) { return static_cast<unsigned>(positive_count(c, "threads")); }

std::string fixed(double v, int digits = 10) {
  std::ostringstream s;
  s << std::setprecision(digits) << v;
  return s.str();
}

// ---------------------------------------------------------------------------

int area_check(const ExperimentConfig& c, std::ostream& out, std::ostream&) {
  const double tol = c.number("tolerance");
  if (tol < 0.0) throw ConfigError("tolerance must be non-negative");
  const std::vector<double> deltas = c.numbers("deltas");
  const std::vector<double> lengths = c.numbers("funnel-lengths");
  const std::vector<double> funnel_deltas = c.numbers("funnel-deltas");
  for (double d : deltas) {
    if (!(d > 0.0)) throw ConfigError("deltas must be positive");
  }
  for (double l : lengths) {
    for (double d : funnel_deltas) {
      if (!(l > 0.0) || !(l < d)) throw ConfigError("funnel grid needs 0 < length < delta");
    }
  }
  bool ok = true;
  out << "kind,length,delta,closed_form,quadrature,relative_error,cusp_bound,status\n";
  auto report = [&](const char* kind, const ThinAreaCheck& r, bool within_bound) {
    const bool pass = r.relative_error <= tol && within_bound;
    ok = ok && pass;
    out << kind << ',' << fixed(r.len) << ',' << fixed(r.delta) << ',' << fixed(r.closed_form, 15) << ','
        << fixed(r.quadrature, 15) << ',' << fixed(r.relative_error, 3) << ',' << fixed(r.cusp_bound, 15) << ','
        << (pass ? "ok" : "BREACH") << '\n';
  };
  for (double d : deltas) report("cusp", check_cusp_strip(d), true);
  for (double l : lengths) {
    for (double d : funnel_deltas) {
      const ThinAreaCheck r = check_funnel_sector(l, d);
      report("funnel", r, r.quadrature <= r.cusp_bound);
    }
  }
  out << (ok ? "area-check: PASS" : "area-check: FAIL") << " (tolerance " << tol << ")\n";
  return ok ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------

int dirichlet(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  const FuchsianGroup g = fixture(c, "group");
  SvgOptions svg;
  std::tie(svg.x_min, svg.x_max) = c.range("x-range");
  std::tie(svg.y_min, svg.y_max) = c.range("y-range");
  svg.stroke_width = positive(c, "stroke-width");
  svg.width = positive(c, "width");
  const double tol = c.number("tolerance");

  auto emit = [&](const HyperbolicPolygon& p) {
    if (c.has("svg")) write_file(c.text("svg"), to_svg(p, svg));
    if (c.has("text")) write_file(c.text("text"), to_text(p));
  };

  if (!g.signature) {
    const HyperbolicPolygon d = dirichlet_domain(g);
    out << "not a lattice: the group has no surface signature; emitting its Dirichlet domain\n";
    out << "sides " << d.sides.size() << ", bounded " << (d.bounded() ? "yes" : "no") << '\n';
    emit(d);
    return kExitPass;
  }

  const double target = g.core_area();
  HyperbolicPolygon d;
  try {
    d = truncate_domain(g, dirichlet_domain(g));
  } catch (const Error& e) {
    err << "certification failed: " << e.what() << '\n';
    return kExitFail;
  }
  emit(d);
  const double area = polygon_area(d);
  const bool pass = std::abs(area - target) <= tol * std::max(1.0, target);
  out << "signature " << g.signature->to_string() << ", sides " << d.sides.size() << '\n';
  out << std::setprecision(15) << "area " << area << ", 2 pi |chi| " << target << ", gap " << std::abs(area - target)
      << '\n';
  out << "verdict " << (pass ? "PASS" : "FAIL") << '\n';
  if (!pass) err << "certification failed: area differs from 2 pi |chi| by more than " << tol << '\n';
  return pass ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------

int degenerate(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  PinchFamily family;
  try {
    family = parse_pinch_family(c.text("family"));
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  DegenerationConfig cfg;
  cfg.schedule = c.numbers("schedule");
  for (std::size_t k = 0; k < cfg.schedule.size(); ++k) {
    if (!(cfg.schedule[k] > 0.0)) throw ConfigError("schedule entries must be positive");
    if (k > 0 && !(cfg.schedule[k] < cfg.schedule[k - 1])) throw ConfigError("schedule must be strictly decreasing");
  }
  cfg.functionals = functionals(c);
  cfg.radius = positive(c, "radius");
  cfg.delta = positive(c, "delta");
  cfg.n = positive_count(c, "n");
  cfg.seed = c.seed("seed");
  cfg.options.threads = thread_count(c);
  for (const TestFunctional& f : cfg.functionals) {
    if (cfg.radius < f.support()) throw ConfigError("radius is below the support of " + f.name());
  }
  if (cfg.schedule.size() == 1) err << "warning: a single schedule point cannot show convergence; verdict is inconclusive\n";

  const DegenerationResult result =
      degeneration_experiment([family](double t) { return pinch_member(family, t); }, pinch_target(family), cfg);
  const std::string csv = to_csv(result);
  if (c.has("csv")) write_file(c.text("csv"), csv);
  if (c.has("json")) write_file(c.text("json"), to_json(result));
  if (!c.has("csv")) out << csv;

  bool ok = true;
  for (const FunctionalVerdict& v : result.verdicts) {
    const char* verdict = v.inconclusive ? "INCONCLUSIVE" : v.pass ? "PASS" : "FAIL";
    out << std::setprecision(6) << v.functional.name() << ": final gap " << v.final_gap << ", band " << v.band
        << ", target " << v.target << " +- " << v.target_error << " -> " << verdict << '\n';
    ok = ok && (v.pass || v.inconclusive);
  }
  return ok ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------

int chabauty_dist(const ExperimentConfig& c, std::ostream& out, std::ostream&) {
  const std::string family = c.text("family");
  if (family != "converging" && family != "constant") throw ConfigError("family must be converging or constant");
  const std::size_t steps = positive_count(c, "steps");
  const double radius = positive(c, "radius");
  const double eps_factor = positive(c, "eps-factor");

  // punctured tori with lenA = 2 + 2^-k converge to lenA = 2; the constant
  // family repeats the limit
  const FuchsianGroup limit_group = punctured_torus(2, 2, 0);
  const SubgroupSnapshot limit = snapshot(TileWalker(dirichlet_domain(limit_group)), Isometry{}, kI, radius, "limit");
  std::vector<SubgroupSnapshot> seq;
  double scale = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    if (family == "constant") {
      seq.push_back(limit);
      continue;
    }
    const FuchsianGroup g = punctured_torus(2.0 + std::ldexp(1.0, -static_cast<int>(k)), 2, 0);
    seq.push_back(snapshot(TileWalker(dirichlet_domain(g)), Isometry{}, kI, radius, "step " + std::to_string(k)));
    if (k >= steps / 2) {
      for (std::size_t j = 0; j < g.generators.size(); ++j) {
        scale = std::max(scale, frobenius_distance(g.generators[j], limit_group.generators[j]));
      }
    }
  }
  const double eps = family == "constant" ? eps_factor * 1e-12 : eps_factor * scale;
  const ConvergenceReport report = check_convergence(seq, limit, eps);
  if (c.has("json")) write_file(c.text("json"), to_json(report));

  bool shape = true;
  out << "step,distance\n";
  for (std::size_t k = 0; k < report.distances.size(); ++k) {
    out << k << ',' << std::setprecision(12) << report.distances[k] << '\n';
    if (family == "constant") shape = shape && report.distances[k] == 0.0;
    if (family == "converging" && k > 0) shape = shape && report.distances[k] < report.distances[k - 1];
  }
  out << "eps " << eps << ", C1 " << (report.c1 ? "pass" : "fail") << ", C2 " << (report.c2 ? "pass" : "fail")
      << '\n';
  out << (family == "constant" ? "distances all zero: " : "distances strictly decreasing: ") << (shape ? "yes" : "no")
      << '\n';
  const bool ok = shape && report.passed();
  out << "verdict " << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------

int escape(const ExperimentConfig& c, std::ostream& out, std::ostream&) {
  const std::string mode = c.text("mode");
  if (mode != "cusp" && mode != "bounded") throw ConfigError("mode must be cusp or bounded");
  const FuchsianGroup g = c.has("group") ? fixture(c, "group") : punctured_torus(2, 2, 0);
  const int steps = static_cast<int>(c.integer("steps"));
  if (steps < 0) throw ConfigError("steps must be non-negative");
  const double radius = positive(c, "radius");

  if (mode == "cusp") {
    const long long index = c.integer("peripheral");
    if (index < 0 || index >= static_cast<long long>(g.peripheral_words.size())) {
      throw ConfigError("the group has no peripheral word " + std::to_string(index));
    }
    const EscapeReport r = escape_dichotomy(g, g.peripheral_words[static_cast<std::size_t>(index)], steps, radius);
    if (c.has("json")) write_file(c.text("json"), to_json(r));
    out << "depth,size,noncommuting_pairs,distance_to_start\n";
    for (const EscapeStep& s : r.steps) {
      out << s.depth << ',' << s.size << ',' << s.noncommuting_pairs << ',' << std::setprecision(10)
          << s.distance_to_start << '\n';
    }
    out << "terminal abelian " << (r.terminal_abelian ? "yes" : "no") << ", parabolic "
        << (r.terminal_parabolic ? "yes" : "no") << '\n';
    out << "verdict " << (r.terminal_abelian ? "abelian horn" : "non-abelian") << '\n';
    return r.terminal_abelian ? kExitPass : kExitFail;
  }

  // conjugators gamma_n * k with gamma_n cycling through the generators and
  // their inverses: the base orbit stays in a compact set, and every snapshot
  // is the conjugate of the group by the fixed k
  const double tol = c.number("tolerance");
  const TileWalker walker(dirichlet_domain(g));
  const Isometry k = rotation_about_i(c.number("angle")) * dilation(std::exp(c.number("shift")));
  const SubgroupSnapshot target = snapshot(walker, k, kI, radius, "conjugate");
  const std::size_t count = g.generators.size();
  double last = 0.0;
  out << "step,distance_to_conjugate\n";
  for (int n = 0; n <= steps; ++n) {
    const std::size_t i = static_cast<std::size_t>(n);
    const Isometry& s = g.generators[i % count];
    const Isometry gamma = (i / count) % 2 == 0 ? s : s.inverse();
    last = snapshot_distance(snapshot(walker, gamma * k, kI, radius), target);
    out << n << ',' << std::setprecision(10) << last << '\n';
  }
  const bool ok = last <= tol;
  out << "verdict " << (ok ? "conjugate of the group" : "no conjugate found") << '\n';
  return ok ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------

int irs_estimate(const ExperimentConfig& c, std::ostream& out, std::ostream&) {
  const FuchsianGroup g = fixture(c, "group");
  if (!g.is_lattice()) throw ConfigError("irs-estimate needs a lattice fixture");
  const std::vector<TestFunctional> fs = functionals(c);
  const double radius = positive(c, "radius");
  const double delta = positive(c, "delta");
  const std::size_t n = positive_count(c, "n");
  const std::uint64_t seed = c.seed("seed");
  EstimateOptions options;
  options.threads = thread_count(c);
  const ThickDomain domain(g, delta);
  std::ostringstream csv;
  csv << "functional,mean,std_error,bias_bound,n,seed,acceptance\n";
  for (std::size_t k = 0; k < fs.size(); ++k) {
    if (radius < fs[k].support()) throw ConfigError("radius is below the support of " + fs[k].name());
    const IRSEstimate e = estimate_functional(domain, fs[k], radius, n, split_seed(seed, k), options);
    csv << std::setprecision(17) << '"' << fs[k].name() << "\"," << e.mean << ',' << e.std_error << ','
        << e.truncation_bias_bound << ',' << e.n_samples << ',' << e.seed << ',' << e.acceptance << '\n';
  }
  if (c.has("csv")) write_file(c.text("csv"), csv.str());
  out << csv.str();
  return kExitPass;
}

// ---------------------------------------------------------------------------

int fiber_bound_cmd(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  const SurfaceSig s = signature(c, "surface");
  try {
    out << "fiber_bound(" << s.to_string() << ") = " << fiber_bound(s) << '\n';
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Overflow) throw;
    err << e.what() << '\n';
    return kExitFail;
  }
  return kExitPass;
}

}  // namespace

const std::vector<Command>& commands() {
  static const std::vector<Command> all = {
      {"area-check",
       "closed-form vs quadrature areas of cusp strips and funnel sectors",
       {{"deltas", "0.5,1,2,4", "cusp thickness grid"},
        {"funnel-lengths", "0.5,1,1.5", "funnel boundary lengths"},
        {"funnel-deltas", "2,3,4", "funnel thickness grid"},
        {"tolerance", "1e-4", "largest accepted relative error"}},
       area_check},
      {"dirichlet",
       "Dirichlet (truncated) domain of a group fixture with its area certificate",
       {{"group", "", "group fixture path"},
        {"svg", "", "SVG output path"},
        {"text", "", "polygon text output path"},
        {"x-range", "-3,3", "SVG viewport x range"},
        {"y-range", "0,3", "SVG viewport y range"},
        {"stroke-width", "1.5", "SVG stroke width"},
        {"width", "800", "SVG width in pixels"},
        {"tolerance", "1e-6", "relative area tolerance"}},
       dirichlet},
      {"degenerate",
       "pinching family IRS estimates against the weighted component mixture",
       {{"family", "torus", "torus or genus2"},
        {"schedule", "1,0.5,0.25,0.125,0.0625", "strictly decreasing pinch lengths"},
        {"functionals", "ClippedInjRad(1);SoftCount(1,0.5)", "';'-separated test functionals"},
        {"radius", "3", "snapshot radius"},
        {"delta", "0.2", "thick-part threshold"},
        {"n", "10000", "samples per estimate"},
        {"seed", "1", "master seed"},
        {"threads", default_threads(), "worker threads"},
        {"csv", "", "CSV output path"},
        {"json", "", "JSON output path"}},
       degenerate},
      {"chabauty-dist",
       "snapshot distances of a converging or constant family to its limit",
       {{"family", "converging", "converging or constant"},
        {"steps", "12", "sequence length"},
        {"radius", "4", "snapshot radius"},
        {"eps-factor", "10", "eps as a multiple of the tail generator gap"},
        {"json", "", "report output path"}},
       chabauty_dist},
      {"escape",
       "limits of conjugates: cusp escape or bounded conjugators",
       {{"mode", "cusp", "cusp or bounded"},
        {"group", "", "group fixture path (default: punctured torus 2,2,0)"},
        {"peripheral", "0", "index of the peripheral word to escape along"},
        {"steps", "8", "number of unit steps"},
        {"radius", "3", "snapshot radius"},
        {"angle", "0.7", "bounded mode: rotation of the fixed conjugator"},
        {"shift", "0.4", "bounded mode: translation of the fixed conjugator"},
        {"tolerance", "1e-6", "bounded mode: largest accepted snapshot distance"},
        {"json", "", "report output path"}},
       escape},
      {"irs-estimate",
       "Monte Carlo IRS estimates for a lattice fixture",
       {{"group", "", "group fixture path"},
        {"functionals", "ClippedInjRad(1);SoftCount(1,0.5)", "';'-separated test functionals"},
        {"radius", "3", "snapshot radius"},
        {"delta", "0.2", "thick-part threshold"},
        {"n", "10000", "samples per estimate"},
        {"seed", "1", "master seed"},
        {"threads", default_threads(), "worker threads"},
        {"csv", "", "CSV output path"}},
       irs_estimate},
      {"fiber-bound",
       "(|chi|+2)!^|chi| |chi|! for a signature",
       {{"surface", "2,0", "signature g,p"}},
       fiber_bound_cmd},
  };
  return all;
}

}  // namespace irslab::cli
