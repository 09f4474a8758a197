#include "mrchialvo_cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "mrchialvo/attractors.hpp"
#include "mrchialvo/bifurcation.hpp"
#include "mrchialvo/fixed_points.hpp"
#include "mrchialvo/io/manifest.hpp"
#include "mrchialvo/io/presets.hpp"
#include "mrchialvo/io/table.hpp"
#include "mrchialvo/map.hpp"
#include "mrchialvo/memristor.hpp"
#include "mrchialvo/neimark_sacker.hpp"
#include "mrchialvo/network.hpp"
#include "mrchialvo/parallel.hpp"

namespace mrchialvo::cli {

namespace {

namespace fs = std::filesystem;
using io::Cell;
using io::Column;
using io::DataTable;

struct FlagDef {
  std::string name;
  std::string def;
  std::string help;
  bool is_flag = false;
};

std::vector<FlagDef> map_flags(const std::string& k0 = "0", const std::string& k1 = "0",
                               const std::string& k2 = "0", const std::string& k = "0",
                               const std::string& r = "0") {
  return {{"k0", k0, "bias k0"},
          {"k1", k1, "flux gain k1"},
          {"k2", k2, "flux decay k2"},
          {"k", k, "memristive coupling k"},
          {"r", r, "recovery parameter r"}};
}

std::vector<FlagDef> operator+(std::vector<FlagDef> a, const std::vector<FlagDef>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

/// Flag values after applying command line, then preset, then defaults.
struct Resolved {
  std::string command;
  std::string preset;
  std::vector<std::pair<std::string, std::string>> values;

  const std::string& str(const std::string& name) const {
    for (const auto& [k, v] : values) {
      if (k == name) return v;
    }
    throw InvalidArgument("internal: no flag --" + name);
  }

  double num(const std::string& name) const {
    const std::string& s = str(name);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
      throw InvalidArgument("--" + name + ": expected a finite number, got '" + s + "'");
    }
    return v;
  }

  std::size_t count(const std::string& name) const {
    const std::string& s = str(name);
    std::size_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
      throw InvalidArgument("--" + name + ": expected a non-negative integer, got '" + s + "'");
    }
    return v;
  }

  bool flag(const std::string& name) const { return str(name) == "true"; }

  MapParams map() const {
    MapParams p;
    p.k0 = num("k0");
    p.k1 = num("k1");
    p.k2 = num("k2");
    p.k = num("k");
    p.r = num("r");
    return p;
  }
};

class Command {
 public:
  using Handler = std::function<int(const Resolved&)>;

  Command(CLI::App& app, const std::string& name, const std::string& help, std::vector<FlagDef> defs,
          Handler handler)
      : name_(name), defs_(std::move(defs)), handler_(std::move(handler)) {
    sub_ = app.add_subcommand(name, help);
    sub_->add_option("--preset", preset_, "named figure recipe; explicit flags override it");
    sub_->add_option("--out", out_, "output directory")->default_str(".");
    sub_->add_option("--threads", threads_, "worker threads (0: MRCHIALVO_THREADS or all cores)");
    for (const auto& d : defs_) {
      if (d.is_flag) {
        sub_->add_flag("--" + d.name, flags_[d.name], d.help);
      } else {
        sub_->add_option("--" + d.name, values_[d.name], d.help)->default_str(d.def);
      }
    }
  }

  bool parsed() const { return sub_->parsed(); }
  const std::string& name() const { return name_; }
  const std::string& out_dir() const { return out_; }
  unsigned threads() const { return threads_; }
  const std::vector<FlagDef>& defs() const { return defs_; }

  Resolved resolve() const {
    const io::Preset* pr = nullptr;
    if (!preset_.empty()) {
      pr = &io::preset(preset_);
      if (pr->command != name_) {
        throw InvalidArgument("preset '" + preset_ + "' belongs to '" + pr->command + "', not '" + name_ + "'");
      }
      for (const auto& [k, v] : pr->settings) {
        const bool known = std::any_of(defs_.begin(), defs_.end(), [&](const FlagDef& d) { return d.name == k; });
        if (!known) throw InvalidArgument("preset '" + preset_ + "' sets unknown flag --" + k);
      }
    }
    Resolved r{name_, preset_, {}};
    for (const auto& d : defs_) {
      const bool given = sub_->count("--" + d.name) > 0;
      std::string v;
      if (d.is_flag) {
        bool on = flags_.at(d.name);
        if (!given && pr) {
          if (auto s = pr->setting(d.name)) on = *s == "true";
        }
        v = on ? "true" : "false";
      } else if (given) {
        v = values_.at(d.name);
      } else if (pr && pr->setting(d.name)) {
        v = *pr->setting(d.name);
      } else {
        v = d.def;
      }
      r.values.emplace_back(d.name, v);
    }
    return r;
  }

  int invoke(const Resolved& r) const { return handler_(r); }

 private:
  std::string name_;
  std::vector<FlagDef> defs_;
  Handler handler_;
  CLI::App* sub_ = nullptr;
  std::string preset_;
  std::string out_ = ".";
  unsigned threads_ = 0;
  std::map<std::string, std::string> values_;
  std::map<std::string, bool> flags_;
};

/// Output bookkeeping for one run.
struct Run {
  fs::path out_dir;
  unsigned threads = 0;
  std::vector<std::string> outputs;
  io::Manifest results;
  std::ostream* out = nullptr;

  void write(const DataTable& t, const std::string& file) {
    t.write((out_dir / file).string());
    outputs.push_back(file);
  }
  void result(const std::string& key, double v) { results.set("result." + key, v); }
  void result(const std::string& key, const std::string& v) { results.set("result." + key, v); }
};

std::pair<std::string, std::vector<double>> parse_scan(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos || colon == 0) throw InvalidArgument("--scan expects name:v1,v2,...");
  std::pair<std::string, std::vector<double>> out{spec.substr(0, colon), {}};
  std::istringstream is(spec.substr(colon + 1));
  std::string tok;
  while (std::getline(is, tok, ',')) {
    double v = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
      throw InvalidArgument("--scan: bad value '" + tok + "'");
    }
    out.second.push_back(v);
  }
  if (out.second.empty()) throw InvalidArgument("--scan needs at least one value");
  return out;
}

std::vector<std::uint64_t> parse_seeds(const std::string& spec) {
  std::vector<std::uint64_t> out;
  std::istringstream is(spec);
  std::string tok;
  auto to_u64 = [](const std::string& s) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) throw InvalidArgument("--seeds: bad seed '" + s + "'");
    return v;
  };
  while (std::getline(is, tok, ',')) {
    const auto dash = tok.find('-');
    if (dash == std::string::npos) {
      out.push_back(to_u64(tok));
    } else {
      const auto lo = to_u64(tok.substr(0, dash));
      const auto hi = to_u64(tok.substr(dash + 1));
      if (hi < lo) throw InvalidArgument("--seeds: empty range '" + tok + "'");
      for (auto s = lo; s <= hi; ++s) out.push_back(s);
    }
  }
  return out;
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string label(StabilityClass c) { return std::string(to_string(c)); }

// ---- subcommands ----------------------------------------------------------

int cmd_phl(const Resolved& a, Run& run) {
  MapParams p;
  p.k1 = a.num("k1");
  p.k2 = a.num("k2");
  p.h = a.num("h");
  validate(p);
  const double phi0 = a.num("phi0");
  DriveSignal drive{a.num("vm"), a.num("omega"), a.count("steps")};
  if (drive.n_steps == 0) throw InvalidArgument("--steps must be positive");

  DataTable summary({{"vm", "drive amplitude"},
                     {"omega", "rad/step"},
                     {"loop_area", "v*i"},
                     {"signed_area", "v*i"},
                     {"transient", "steps"}});
  const std::string scan = a.str("scan");
  if (scan.empty()) {
    const PhlTrace tr = phl_trace(drive, p, phi0);
    DataTable t({{"n", "step"}, {"v", "voltage"}, {"i", "current"}, {"phi", "flux"}});
    for (std::size_t n = 0; n < tr.samples.size(); ++n) {
      const auto& s = tr.samples[n];
      t.add_row({static_cast<std::int64_t>(n), s.v, s.i, s.phi});
    }
    run.write(t, "phl.csv");
    summary.add_row({drive.amplitude, drive.omega, tr.loop_area, tr.signed_area,
                     static_cast<std::int64_t>(tr.transient_steps)});
    run.result("loop_area", tr.loop_area);
    *run.out << "loop_area " << io::format_double(tr.loop_area) << "\n";
  } else {
    const auto [which, values] = parse_scan(scan);
    if (which != "vm" && which != "omega") throw InvalidArgument("phl --scan accepts vm or omega");
    for (double v : values) {
      DriveSignal d = drive;
      (which == "vm" ? d.amplitude : d.omega) = v;
      const PhlTrace tr = phl_trace(d, p, phi0);
      summary.add_row({d.amplitude, d.omega, tr.loop_area, tr.signed_area,
                       static_cast<std::int64_t>(tr.transient_steps)});
      *run.out << which << "=" << io::format_double(v) << " loop_area " << io::format_double(tr.loop_area) << "\n";
    }
  }
  run.write(summary, "phl_summary.csv");
  return kOk;
}

int cmd_orbit(const Resolved& a, Run& run) {
  const MapParams p = a.map();
  validate(p);
  const Orbit o = iterate({a.num("x0"), a.num("phi0")}, p, a.count("transient"), a.count("steps"));
  DataTable t({{"n", "step after transient"}, {"x", "membrane potential"}, {"phi", "flux"}});
  for (std::size_t n = 0; n < o.states.size(); ++n) {
    t.add_row({static_cast<std::int64_t>(n), o.states[n].x, o.states[n].phi});
  }
  run.write(t, "orbit.csv");
  if (o.escaped) {
    run.result("escape_index", static_cast<double>(*o.escape_index));
    *run.out << "orbit escaped after " << *o.escape_index << " steps\n";
    return kEscapeDominated;
  }
  if (!o.states.empty()) {
    const double lyap = largest_lyapunov(o.states.front(), p, o.states.size());
    run.result("lyapunov", lyap);
    *run.out << "lyapunov " << io::format_double(lyap) << "\n";
  }
  return kOk;
}

int cmd_firing(const Resolved& a, Run& run) {
  const MapParams p = a.map();
  validate(p);
  const Orbit o = iterate({a.num("x0"), a.num("phi0")}, p, a.count("transient"), a.count("steps"));
  if (o.escaped) {
    *run.out << "orbit escaped after " << *o.escape_index << " steps\n";
    return kEscapeDominated;
  }
  std::optional<double> thr;
  if (!a.str("threshold").empty()) thr = a.num("threshold");
  const FiringStats st = firing_stats(o, thr);
  DataTable t({{"n", "step after transient"}, {"x", "membrane potential"}, {"phi", "flux"}});
  for (std::size_t n = 0; n < o.states.size(); ++n) {
    t.add_row({static_cast<std::int64_t>(n), o.states[n].x, o.states[n].phi});
  }
  run.write(t, "firing.csv");
  DataTable isi({{"index", ""}, {"interval", "steps"}});
  for (std::size_t i = 0; i < st.inter_spike_intervals.size(); ++i) {
    isi.add_row({static_cast<std::int64_t>(i), static_cast<std::int64_t>(st.inter_spike_intervals[i])});
  }
  run.write(isi, "firing_isi.csv");
  run.result("spike_count", static_cast<double>(st.spike_count));
  run.result("isi_cv", st.isi_cv);
  run.result("threshold", st.threshold);
  *run.out << "spikes " << st.spike_count << " isi_cv " << io::format_double(st.isi_cv) << "\n";
  return kOk;
}

int cmd_fixed_points(const Resolved& a, Run& run) {
  const MapParams p = a.map();
  validate(p);
  RootScan scan;
  scan.x_lo = a.num("xlo");
  scan.x_hi = a.num("xhi");
  scan.scan_points = a.count("scan-points");
  scan.threads = run.threads;
  if (!(scan.x_hi > scan.x_lo) || scan.scan_points < 2) throw InvalidArgument("need xlo < xhi and scan-points >= 2");
  const auto fps = find_fixed_points(p, scan);
  DataTable t({{"x_star", ""},
               {"phi_star", ""},
               {"residual", "|F(x*)|"},
               {"trace", "p"},
               {"det", "q"},
               {"ev1_re", ""},
               {"ev1_im", ""},
               {"ev2_re", ""},
               {"ev2_im", ""},
               {"class", "stable|saddle|repeller|non_hyperbolic"},
               {"degenerate", "0|1"}});
  for (const auto& f : fps) {
    const auto& s = f.stability;
    t.add_row({f.x_star, f.phi_star, f.residual, s.p_trace, s.q_det, s.eigenvalues[0].real(),
               s.eigenvalues[0].imag(), s.eigenvalues[1].real(), s.eigenvalues[1].imag(), label(s.cls),
               static_cast<std::int64_t>(f.degenerate)});
    *run.out << "x*=" << io::format_double(f.x_star) << " phi*=" << io::format_double(f.phi_star) << " "
             << label(s.cls) << "\n";
  }
  run.write(t, "fixed_points.csv");
  run.result("count", static_cast<double>(fps.size()));
  return kOk;
}

int cmd_sweep(const Resolved& a, Run& run) {
  SweepConfig cfg;
  cfg.param = parse_param(a.str("param"));
  cfg.p_start = a.num("start");
  cfg.p_end = a.num("end");
  cfg.n_steps = a.count("steps");
  cfg.n_transient = a.count("transient");
  cfg.n_record = a.count("record");
  cfg.seed_state = {a.num("x0"), a.num("phi0")};
  const std::string dir = a.str("direction");
  if (dir != "both" && dir != "forward" && dir != "backward") {
    throw InvalidArgument("--direction must be forward, backward or both");
  }
  const MapParams base = a.map();

  std::vector<BifurcationDiagram> diagrams;
  for (auto d : {SweepDirection::forward, SweepDirection::backward}) {
    if (dir == "both" || (dir == "forward") == (d == SweepDirection::forward)) {
      cfg.direction = d;
      diagrams.push_back(attractor_sweep(cfg, base));
    }
  }
  DataTable t({{"direction", "forward|backward"}, {"index", "grid index"}, {"param", a.str("param")}, {"x", ""}});
  std::size_t escaped = 0, total = 0;
  for (const auto& d : diagrams) {
    const char* name = d.direction == SweepDirection::forward ? "forward" : "backward";
    for (std::size_t i = 0; i < d.param_values.size(); ++i) {
      ++total;
      if (d.escaped[i]) ++escaped;
      for (double x : d.samples[i]) t.add_row({std::string(name), static_cast<std::int64_t>(i), d.param_values[i], x});
    }
  }
  run.write(t, "sweep.csv");

  DataTable s({{"direction", ""}, {"index", ""}, {"param", a.str("param")}, {"distinct", "levels at 1e-4"}, {"escaped", "0|1"}});
  for (const auto& d : diagrams) {
    const char* name = d.direction == SweepDirection::forward ? "forward" : "backward";
    for (std::size_t i = 0; i < d.param_values.size(); ++i) {
      s.add_row({std::string(name), static_cast<std::int64_t>(i), d.param_values[i],
                 static_cast<std::int64_t>(distinct_count(d.samples[i])), static_cast<std::int64_t>(d.escaped[i])});
    }
  }
  run.write(s, "sweep_summary.csv");

  std::size_t bubbles = 0;
  for (const auto& d : diagrams) bubbles += find_bubbles(d).size();
  run.result("bubbles", static_cast<double>(bubbles));
  *run.out << "bubbles " << bubbles << "\n";
  if (diagrams.size() == 2) {
    const double h = hysteresis_fraction(diagrams[0], diagrams[1]);
    run.result("hysteresis_fraction", h);
    *run.out << "hysteresis_fraction " << io::format_double(h) << "\n";
  }
  return escaped * 100 > total * 99 ? kEscapeDominated : kOk;
}

int cmd_branch(const Resolved& a, Run& run) {
  const Param param = parse_param(a.str("param"));
  const Branch br = branch_track(a.map(), param, a.num("start"), a.num("end"), a.count("steps"), a.num("x0"));
  DataTable t({{"param", a.str("param")},
               {"x_star", ""},
               {"phi_star", ""},
               {"trace", "p"},
               {"det", "q"},
               {"mod1", "|lambda1|"},
               {"mod2", "|lambda2|"},
               {"class", ""}});
  for (const auto& bp : br.points) {
    const auto& s = bp.fixed_point.stability;
    t.add_row({bp.param_value, bp.fixed_point.x_star, bp.fixed_point.phi_star, s.p_trace, s.q_det,
               std::abs(s.eigenvalues[0]), std::abs(s.eigenvalues[1]), label(s.cls)});
  }
  run.write(t, "branch.csv");
  DataTable c({{"kind", "LP|PD|NS"},
               {"param", a.str("param")},
               {"x_star", ""},
               {"ev1_re", ""},
               {"ev1_im", ""},
               {"ev2_re", ""},
               {"ev2_im", ""}});
  for (const auto& cp : br.crit_points) {
    c.add_row({std::string(to_string(cp.kind)), cp.param_value, cp.branch_x, cp.eigen_evidence[0].real(),
               cp.eigen_evidence[0].imag(), cp.eigen_evidence[1].real(), cp.eigen_evidence[1].imag()});
    *run.out << to_string(cp.kind) << " at " << a.str("param") << "=" << io::format_double(cp.param_value) << "\n";
  }
  run.write(c, "branch_crit.csv");
  run.result("terminated", br.terminated ? "true" : "false");
  return kOk;
}

int cmd_ns(const Resolved& a, Run& run) {
  const MapParams p = a.map();
  validate(p);
  NSReport rep;
  if (a.flag("one-shot")) {
    const auto x = root_near(a.num("x0"), p, 0.05);
    if (!x) throw NumericalFailure("no fixed point near --x0");
    rep = ns_critical_k(*x, fixed_point_phi(*x, p), p);
  } else {
    rep = ns_self_consistent(p, a.num("x0"));
  }
  DataTable t({{"k_prime", ""},
               {"x_star", ""},
               {"phi_star", ""},
               {"trace", "p at k'"},
               {"denominator", "k1 gamma2 - k2 cos"},
               {"admissible", "|p|<2"},
               {"non_resonant", "0|1"},
               {"modulus_derivative", "d|lambda|/dk"},
               {"alpha", ""},
               {"beta", ""},
               {"theta", "first Lyapunov coefficient"},
               {"iterations", ""}});
  t.add_row({rep.k_prime, rep.x_star, rep.phi_star, rep.trace, rep.denominator,
             static_cast<std::int64_t>(rep.admissible), static_cast<std::int64_t>(rep.non_resonant),
             rep.modulus_derivative, rep.alpha, rep.beta, rep.theta, static_cast<std::int64_t>(rep.iterations)});
  run.write(t, "ns.csv");
  run.result("k_prime", rep.k_prime);
  run.result("theta", rep.theta);
  *run.out << "k'=" << io::format_double(rep.k_prime) << " theta=" << io::format_double(rep.theta)
           << (rep.admissible ? "" : " (not admissible: |p| >= 2)") << "\n";
  return kOk;
}

int cmd_basin(const Resolved& a, Run& run) {
  const MapParams p = a.map();
  GridRegion region{a.num("xlo"), a.num("xhi"), a.num("philo"), a.num("phihi")};
  ClassifyBudget budget;
  budget.transient = a.count("transient");
  budget.tail = a.count("tail");
  const BasinGrid g = basin_grid(region, a.count("nx"), a.count("nphi"), p, budget, run.threads);

  DataTable cells({{"ix", ""}, {"iphi", ""}, {"x0", ""}, {"phi0", ""}, {"label", "attractor id"}});
  std::size_t divergent = 0;
  for (std::size_t j = 0; j < g.nphi; ++j) {
    for (std::size_t i = 0; i < g.nx; ++i) {
      const NeuronState s = g.cell_state(i, j);
      const auto l = g.at(i, j);
      if (g.attractors[l].kind == AttractorKind::divergent) ++divergent;
      cells.add_row({static_cast<std::int64_t>(i), static_cast<std::int64_t>(j), s.x, s.phi, static_cast<std::int64_t>(l)});
    }
  }
  run.write(cells, "basin.csv");
  DataTable att({{"label", ""},
                 {"kind", "divergent|periodic|quasiperiodic|chaotic"},
                 {"period", ""},
                 {"lyapunov", ""},
                 {"x_lo", ""},
                 {"x_hi", ""},
                 {"phi_lo", ""},
                 {"phi_hi", ""},
                 {"cells", ""}});
  for (std::size_t l = 0; l < g.attractors.size(); ++l) {
    const auto& r = g.attractors[l];
    const auto n = std::count(g.labels.begin(), g.labels.end(), static_cast<std::uint32_t>(l));
    att.add_row({static_cast<std::int64_t>(l), std::string(to_string(r.kind)), static_cast<std::int64_t>(r.period),
                 r.lyapunov, r.bounds.x_lo, r.bounds.x_hi, r.bounds.phi_lo, r.bounds.phi_hi,
                 static_cast<std::int64_t>(n)});
    *run.out << l << " " << to_string(r.kind) << (r.kind == AttractorKind::periodic ? "(" + std::to_string(r.period) + ")" : "")
             << " cells=" << n << "\n";
  }
  run.write(att, "basin_attractors.csv");
  run.result("attractors", static_cast<double>(g.attractors.size()));
  return divergent * 100 > g.labels.size() * 99 ? kEscapeDominated : kOk;
}

int cmd_corrdim(const Resolved& a, Run& run) {
  MapParams p = a.map();
  std::vector<std::pair<double, MapParams>> cases;
  std::string which = "k";
  if (a.str("scan").empty()) {
    cases.emplace_back(p.k, p);
  } else {
    auto [name, values] = parse_scan(a.str("scan"));
    which = name;
    const Param prm = parse_param(name);
    for (double v : values) {
      MapParams q = p;
      set(q, prm, v);
      cases.emplace_back(v, q);
    }
  }
  CorrelationOptions opts;
  opts.threads = run.threads;
  opts.standardize = !a.flag("raw");
  opts.fit_lo = a.num("fit-lo");
  opts.fit_hi = a.num("fit-hi");

  DataTable t({{which, "parameter value"}, {"dimension", ""}, {"fit_points", ""}});
  DataTable curve({{which, ""}, {"radius", "standardized units unless --raw"}, {"C", "correlation sum"}});
  for (const auto& [v, q] : cases) {
    validate(q);
    const auto pts = attractor_points({a.num("x0"), a.num("phi0")}, q, a.count("transient"), a.count("points"));
    const CorrelationResult res = correlation_dimension(pts, opts);
    t.add_row({v, res.dimension, static_cast<std::int64_t>(res.fit_points)});
    for (std::size_t i = 0; i < res.radii.size(); ++i) curve.add_row({v, res.radii[i], res.correlation_sum[i]});
    *run.out << which << "=" << io::format_double(v) << " dimension " << io::format_double(res.dimension) << "\n";
  }
  run.write(t, "corrdim.csv");
  run.write(curve, "corrdim_curve.csv");
  return kOk;
}

int cmd_network(const Resolved& a, Run& run) {
  NetworkConfig cfg;
  cfg.n_nodes = a.count("n");
  cfg.r_neighbors = a.count("R");
  cfg.sigma = a.num("sigma");
  cfg.mu = a.num("mu");
  cfg.map = a.map();
  cfg.init_lo = a.num("init-lo");
  cfg.init_hi = a.num("init-hi");
  cfg.random_phi = !a.flag("zero-phi");
  validate(cfg);
  const auto seeds = parse_seeds(a.str("seeds"));
  if (seeds.empty()) throw InvalidArgument("--seeds is empty");
  const std::size_t transient = a.count("transient");
  const std::size_t record = a.count("record");
  const double tol = a.num("cluster-tol");

  DataTable summary({{"seed", ""},
                     {"escaped", "0|1"},
                     {"sync_error", "time-averaged population std of x"},
                     {"clusters", "levels at cluster-tol"},
                     {"coherent_groups", ""},
                     {"incoherent_fraction", ""},
                     {"deviating_nodes", ""},
                     {"pattern", ""}});
  // Seeds run in parallel; each simulation is serial, and rows are written in
  // seed order afterwards.
  struct SeedResult {
    bool escaped = false;
    bool recorded = false;
    PatternMetrics metrics;
  };
  std::vector<SeedResult> results(seeds.size());
  NetworkHistory first;
  parallel_for(seeds.size(), run.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t si = begin; si < end; ++si) {
      NetworkConfig c = cfg;
      c.seed = seeds[si];
      NetworkHistory h = simulate(c, transient, record, 1);
      results[si].escaped = h.escaped;
      results[si].recorded = !h.escaped && !h.snapshots.empty();
      if (results[si].recorded) results[si].metrics = analyze(h, tol);
      if (si == 0) first = std::move(h);
    }
  });

  if (!first.snapshots.empty()) {
    DataTable st({{"t", "recorded step"}, {"node", "0 is the hub"}, {"x", ""}, {"phi", ""}});
    for (std::size_t t = 0; t < first.snapshots.size(); ++t) {
      for (std::size_t m = 0; m < cfg.n_nodes; ++m) {
        st.add_row({static_cast<std::int64_t>(t), static_cast<std::int64_t>(m), first.snapshots[t].x[m], first.snapshots[t].phi[m]});
      }
    }
    run.write(st, "network.csv");
  }
  std::size_t escaped = 0;
  for (std::size_t si = 0; si < seeds.size(); ++si) {
    const auto seed = seeds[si];
    const SeedResult& res = results[si];
    if (!res.recorded) {
      if (res.escaped) ++escaped;
      summary.add_row({static_cast<std::int64_t>(seed), static_cast<std::int64_t>(res.escaped), 0.0,
                       std::int64_t{0}, std::int64_t{0}, 0.0, std::int64_t{0}, std::string(res.escaped ? "escaped" : "none")});
      *run.out << "seed " << seed << (res.escaped ? " escaped" : " nothing recorded") << "\n";
      continue;
    }
    const PatternMetrics& m = res.metrics;
    summary.add_row({static_cast<std::int64_t>(seed), std::int64_t{0}, m.sync_error,
                     static_cast<std::int64_t>(m.clusters.count), static_cast<std::int64_t>(m.coherence.groups.size()),
                     m.coherence.incoherent_fraction, static_cast<std::int64_t>(m.deviating_nodes),
                     std::string(to_string(m.pattern))});
    *run.out << "seed " << seed << " sync_error " << io::format_double(m.sync_error) << " clusters "
             << m.clusters.count << " groups " << m.coherence.groups.size() << " " << to_string(m.pattern) << "\n";
  }
  run.write(summary, "network_summary.csv");
  return escaped * 100 > seeds.size() * 99 ? kEscapeDominated : kOk;
}

std::vector<std::string> args_from_manifest(const io::Manifest& m) {
  std::vector<std::string> args{m.get("command")};
  if (args[0].empty()) throw InvalidArgument("manifest has no command");
  // Every value is explicit below, so the preset only labels the run.
  if (const auto p = m.get("preset"); !p.empty()) args.insert(args.end(), {"--preset", p});
  for (const auto& [k, v] : m.section("params")) {
    if (v == "true") {
      args.push_back("--" + k);
    } else if (v != "false") {
      args.push_back("--" + k);
      args.push_back(v);
    }
  }
  return args;
}

int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return execute(args, out, err);
  } catch (const InvalidArgument& e) {
    err << "error: invalid-argument: " << e.what() << "\n";
    return kInvalidArgument;
  } catch (const NumericalFailure& e) {
    err << "error: numerical-failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const std::exception& e) {
    err << "error: failure: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

namespace {

int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Memristive reduced-Chialvo neuron map toolkit", "mrchialvo"};
  app.require_subcommand(1);
  // -h would clash with the memristor constant --h.
  app.set_help_flag("--help", "print help and exit");
  app.set_version_flag("--version", kToolVersion);

  Run run;
  run.out = &out;
  std::vector<std::unique_ptr<Command>> cmds;
  auto add = [&](const std::string& name, const std::string& help, std::vector<FlagDef> defs,
                 int (*fn)(const Resolved&, Run&)) {
    cmds.push_back(std::make_unique<Command>(app, name, help, std::move(defs),
                                             [fn, &run](const Resolved& r) { return fn(r, run); }));
  };

  add("phl", "drive the memristor and measure the pinched hysteresis loop",
      {{"vm", "1", "drive amplitude"},
       {"omega", "3.7", "drive frequency (rad/step)"},
       {"k1", "0.7", "flux gain"},
       {"k2", "0.2", "flux decay"},
       {"h", "1", "material constant"},
       {"phi0", "0", "initial flux"},
       {"steps", "2000", "drive samples"},
       {"scan", "", "vm:v1,v2,... or omega:w1,w2,... (summary only)"}},
      cmd_phl);
  add("orbit", "iterate the map from one initial state",
      map_flags() + std::vector<FlagDef>{{"x0", "0.5", "initial x"},
                                         {"phi0", "0", "initial phi"},
                                         {"transient", "1000", "discarded steps"},
                                         {"steps", "1000", "recorded steps"}},
      cmd_orbit);
  add("firing", "firing trace and inter-spike statistics",
      map_flags() + std::vector<FlagDef>{{"x0", "0.5", "initial x"},
                                         {"phi0", "0", "initial phi"},
                                         {"transient", "1000", "discarded steps"},
                                         {"steps", "1000", "recorded steps"},
                                         {"threshold", "", "spike threshold (default: 10/90 percentile midpoint)"}},
      cmd_firing);
  add("fixed-points", "fixed points and their stability",
      map_flags() + std::vector<FlagDef>{{"xlo", "-1", "scan interval start"},
                                         {"xhi", "10", "scan interval end"},
                                         {"scan-points", "20000", "grid points for the sign-change scan"}},
      cmd_fixed_points);
  add("sweep", "forward/backward attractor sweep with state carry-over",
      map_flags() + std::vector<FlagDef>{{"param", "r", "swept parameter"},
                                         {"start", "0", "lower end"},
                                         {"end", "1", "upper end"},
                                         {"steps", "100", "parameter values"},
                                         {"transient", "2000", "steps discarded per value"},
                                         {"record", "200", "samples recorded per value"},
                                         {"x0", "0.5", "seed x"},
                                         {"phi0", "0", "seed phi"},
                                         {"direction", "both", "forward, backward or both"}},
      cmd_sweep);
  add("branch", "follow a fixed point and locate LP/PD/NS points",
      map_flags() + std::vector<FlagDef>{{"param", "r", "continuation parameter"},
                                         {"start", "0", "start value"},
                                         {"end", "1", "end value"},
                                         {"steps", "200", "continuation steps"},
                                         {"x0", "0", "fixed point at the start value"}},
      cmd_branch);
  add("ns", "critical coupling and first Lyapunov coefficient",
      map_flags() + std::vector<FlagDef>{{"x0", "1", "guess for the fixed point"},
                                         {"one-shot", "false", "k' at the given k without self-consistency", true}},
      cmd_ns);
  add("basin", "classify attractors over a grid of initial states",
      map_flags() + std::vector<FlagDef>{{"xlo", "0", ""},
                                         {"xhi", "1", ""},
                                         {"philo", "0", ""},
                                         {"phihi", "1", ""},
                                         {"nx", "100", "grid columns"},
                                         {"nphi", "100", "grid rows"},
                                         {"transient", "5000", "discarded steps per cell"},
                                         {"tail", "2000", "steps used for classification"}},
      cmd_basin);
  add("corrdim", "correlation dimension of the attractor",
      map_flags() + std::vector<FlagDef>{{"x0", "0.5", "initial x"},
                                         {"phi0", "0", "initial phi"},
                                         {"transient", "5000", ""},
                                         {"points", "20000", "attractor points"},
                                         {"fit-lo", "0", "fit window start (fraction of log-radius range)"},
                                         {"fit-hi", "0.4", "fit window end"},
                                         {"raw", "false", "skip per-axis standardization", true},
                                         {"scan", "", "name:v1,v2,..."}},
      cmd_corrdim);
  add("network", "ring / star / ring-star network simulation and pattern metrics",
      map_flags() + std::vector<FlagDef>{{"n", "100", "nodes"},
                                         {"R", "10", "ring neighbours per side"},
                                         {"sigma", "0", "ring coupling"},
                                         {"mu", "0", "star coupling"},
                                         {"seeds", "0", "seed list, e.g. 0-19 or 1,4,7"},
                                         {"transient", "20000", ""},
                                         {"record", "1000", "recorded snapshots"},
                                         {"init-lo", "0", "initial-condition lower bound"},
                                         {"init-hi", "1", "initial-condition upper bound"},
                                         {"zero-phi", "false", "start every phi at 0", true},
                                         {"cluster-tol", "0.05", "single-linkage gap"}},
      cmd_network);

  auto* preset_cmd = app.add_subcommand("preset", "figure recipes");
  preset_cmd->require_subcommand(1);
  auto* preset_list = preset_cmd->add_subcommand("list", "list presets");
  std::string show_name;
  auto* preset_show = preset_cmd->add_subcommand("show", "print one preset");
  preset_show->add_option("name", show_name)->required();

  std::string manifest_path, rerun_out = ".";
  unsigned rerun_threads = 0;
  auto* rerun = app.add_subcommand("rerun", "repeat a run from its manifest");
  rerun->add_option("manifest", manifest_path)->required();
  rerun->add_option("--out", rerun_out, "output directory");
  rerun->add_option("--threads", rerun_threads, "worker threads");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kOk;
    }
    throw InvalidArgument(e.what());
  }

  if (preset_list->parsed()) {
    for (const auto& p : io::all_presets()) out << p.name << "\t" << p.command << "\t" << p.description << "\n";
    return kOk;
  }
  if (preset_show->parsed()) {
    const auto& p = io::preset(show_name);
    out << p.name << " (" << p.command << "): " << p.description << "\n";
    for (const auto& [k, v] : p.settings) out << "  --" << k << " " << v << "\n";
    return kOk;
  }
  if (rerun->parsed()) {
    auto re = args_from_manifest(io::Manifest::read(manifest_path));
    re.insert(re.end(), {"--out", rerun_out, "--threads", std::to_string(rerun_threads)});
    return execute(re, out, err);
  }

  for (const auto& c : cmds) {
    if (!c->parsed()) continue;
    const Resolved r = c->resolve();
    run.out_dir = c->out_dir();
    run.threads = c->threads();
    std::error_code ec;
    fs::create_directories(run.out_dir, ec);
    if (!fs::is_directory(run.out_dir)) throw InvalidArgument("cannot create output directory " + run.out_dir.string());

    const auto t0 = std::chrono::steady_clock::now();
    const int code = c->invoke(r);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    io::Manifest m;
    m.set("tool.name", "mrchialvo");
    m.set("tool.version", kToolVersion);
    m.set("command", r.command);
    if (!r.preset.empty()) m.set("preset", r.preset);
    for (const auto& [k, v] : r.values) m.set("params." + k, v);
    m.set("run.threads", std::to_string(resolve_threads(run.threads)));
    m.set("run.exit_code", std::to_string(code));
    for (const auto& [k, v] : run.results.entries()) m.set(k, v);
    for (std::size_t i = 0; i < run.outputs.size(); ++i) m.set("outputs." + std::to_string(i), run.outputs[i]);
    m.set("run.timestamp", utc_timestamp());
    m.set("run.duration_s", secs);
    m.write((run.out_dir / (r.command + ".manifest")).string());
    return code;
  }
  return kInvalidArgument;
}

}  // namespace

}  // namespace mrchialvo::cli
