#include "commands.hpp"

#include <cmath>
#include <cstdio>

#include "csv.hpp"

namespace levygen::cli {

namespace {

json to_json(const Vector& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string hex(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%llX", static_cast<unsigned long long>(v));
  return buf;
}

Vector state(const Node& n, const std::string& key, int d) {
  if (!n.has(key)) return zeros(d);
  Vector x = n.vec(key);
  if (x.size() != d) fail(n.child(key), "expected " + std::to_string(d) + " components");
  return x;
}

std::uint64_t tag_of(const Node& n) { return n.has("tag") ? as_seed(n.value("tag"), n.child("tag")) : 1; }

std::vector<std::string> axis_names(const std::string& stem, int d) {
  std::vector<std::string> out;
  for (int i = 1; i <= d; ++i) out.push_back(stem + std::to_string(i));
  return out;
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

Vector unit(int d) {
  Vector e = zeros(d);
  e[0] = 1.0;
  return e;
}

// ---------------------------------------------------------------- symbol

CommandResult cmd_symbol(const Node& root, const RunOptions&) {
  CommandResult res;
  Symbol sym = symbol(root.value("symbol"), root.child("symbol"));
  const int d = sym.dim();
  Vector x = state(root, "x", d);
  json& s = res.summary;
  s["family"] = sym.family_name();
  s["description"] = sym.describe();
  s["x"] = to_json(x);

  std::vector<Vector> xis = root.has("xi") ? grid(root.value("xi"), root.child("xi")) : std::vector<Vector>{unit(d)};
  json values = json::array();
  for (std::size_t i = 0; i < xis.size(); ++i) {
    if (xis[i].size() != d) fail(root.child("xi") + "[" + std::to_string(i) + "]", "dimension differs from the symbol");
    Complex q = sym(x, xis[i]);
    values.push_back({{"xi", to_json(xis[i])}, {"re", q.real()}, {"im", q.imag()}});
  }
  s["values"] = values;

  if (root.flag("beta_infinity", true)) {
    BGOptions bo;
    if (auto b = root.opt("bg")) {
      bo.r_max = b->num("r_max", bo.r_max);
      bo.points = static_cast<int>(b->integer("points", bo.points));
      b->done();
    }
    auto bg = bg_index_infinity(sym, x, bo);
    s["beta_infinity"] = {{"value", bg.value}, {"slope_stderr", bg.slope_stderr}, {"band", bg.band}, {"bounded", bg.bounded}};
  }
  if (root.flag("sector", true)) {
    auto sc = sector_constant(sym, x);
    s["sector"] = {{"constant", finite_or_null(sc.constant)}, {"unbounded", sc.unbounded}, {"grid", sc.grid},
                   {"argmax_xi", to_json(sc.argmax_xi)}};
  }
  {
    Vector eta = unit(d);
    double r_max = 1048576.0;
    if (auto dn = root.opt("diffusion")) {
      if (dn->has("eta")) eta = state(*dn, "eta", d);
      r_max = dn->num("r_max", r_max);
      dn->done();
    }
    auto de = diffusion_estimate(sym, x, eta, r_max);
    s["diffusion"] = {{"value", de.value}, {"trend", de.trend}, {"eta", to_json(eta)}};
  }
  {
    std::vector<Vector> K{x}, gx;
    if (auto g = root.opt("growth")) {
      if (g->has("K")) K = grid(g->value("K"), g->child("K"));
      if (g->has("xi")) gx = grid(g->value("xi"), g->child("xi"));
      g->done();
    }
    if (gx.empty()) {
      std::vector<Vector> dirs{unit(d)};
      if (d > 1) dirs.push_back(Vector::Ones(d) / std::sqrt(static_cast<double>(d)));
      for (const auto& e : dirs)
        for (int k = -10; k <= 20; k += 2) gx.push_back(std::ldexp(1.0, k) * e);
    }
    auto gc = quadratic_growth_check(sym, K, gx);
    s["growth"] = {{"pass", gc.pass}, {"C_K", gc.C_K}, {"worst_ratio", gc.worst_ratio}, {"message", gc.message}};
    res.pass = gc.pass;
  }
  if (auto rays = root.opt("rays")) {
    std::vector<Vector> dirs = rays->has("directions") ? grid(rays->value("directions"), rays->child("directions"))
                                                       : std::vector<Vector>{unit(d)};
    const double r_min = rays->num("r_min", 1.0 / 64.0), r_max = rays->num("r_max", 64.0);
    const long points = rays->integer("points", 25);
    rays->done();
    if (!(r_min > 0.0 && r_max > r_min) || points < 2) fail(rays->path(), "need 0 < r_min < r_max and points >= 2");
    Csv csv(concat(concat({"ray"}, axis_names("eta", d)), {"r", "re", "im"}));
    for (std::size_t k = 0; k < dirs.size(); ++k) {
      if (dirs[k].size() != d || dirs[k].norm() == 0.0) fail(rays->child("directions"), "directions must be nonzero d-vectors");
      Vector e = dirs[k] / dirs[k].norm();
      for (long i = 0; i < points; ++i) {
        double r = r_min * std::pow(r_max / r_min, static_cast<double>(i) / static_cast<double>(points - 1));
        Complex q = sym(x, Vector(r * e));
        csv.cell(static_cast<long>(k));
        for (int c = 0; c < d; ++c) csv.cell(e[c]);
        csv.cell(r).cell(q.real()).cell(q.imag()).end();
      }
    }
    res.files.push_back({"symbol_rays.csv", csv.text()});
  }
  root.done();
  return res;
}

// ---------------------------------------------------------------- generator

CommandResult cmd_generator(const Node& root, const RunOptions& opt) {
  CommandResult res;
  const std::string op = root.str("operator", "symbol");
  std::optional<Symbol> sym;
  double alpha = 0.0;
  int d = 1;
  if (op == "fractional_laplacian") {
    d = static_cast<int>(root.integer("d", 1));
    alpha = root.num("alpha");
    if (!(alpha > 0.0 && alpha < 2.0)) fail(root.child("alpha"), "alpha must lie in (0, 2)");
  } else if (op == "symbol") {
    sym = symbol(root.value("symbol"), root.child("symbol"));
    d = sym->dim();
  } else {
    fail(root.child("operator"), "operator must be symbol or fractional_laplacian");
  }
  TestFunction f = function(root.value("function"), root.child("function"), d);
  std::vector<Vector> pts = grid(root.value("grid"), root.child("grid"));
  for (const auto& p : pts)
    if (p.size() != d) fail(root.child("grid"), "grid points must have " + std::to_string(d) + " components");
  GeneratorOptions go;
  go.tol = root.num("tol", go.tol);
  const std::string ref_mode = root.str("reference", "none");
  const double rel_tol = root.num("rel_tol", 0.01);
  std::vector<double> expected;
  if (ref_mode == "expected") {
    expected = root.list("expected");
    if (expected.size() != pts.size()) fail(root.child("expected"), "needs one value per grid point");
  } else if (ref_mode == "eigen") {
    if (!f.frequency) fail(root.child("reference"), "eigen reference needs a cosine test function");
  } else if (ref_mode != "none") {
    fail(root.child("reference"), "reference must be none, eigen or expected");
  }

  std::vector<GridRow> rows;
  if (sym) {
    VariableOrderFn a = order(root.value("order"), root.child("order"), pts);
    rows = apply_on_grid(sym->state_triplet(), a.alpha, f, pts, go, opt.workers).rows;
  } else {
    for (const auto& p : pts) {
      GridRow r;
      r.x = p;
      try {
        auto g = fractional_laplacian(f, p, alpha, go);
        r.value = g.value;
        r.abs_error = g.abs_error;
        r.form = g.form;
        r.ok = true;
        r.status = "ok";
      } catch (const InsufficientRegularity& e) {
        r.status = e.what();
      } catch (const NonConvergence& e) {
        r.status = e.what();
      }
      rows.push_back(r);
    }
  }
  root.done();

  Csv csv(concat(axis_names("x", d), {"value", "abs_error", "form", "ok", "status", "reference", "rel_err"}));
  json& s = res.summary;
  long failed = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    double ref = std::nan("");
    if (ref_mode == "expected") {
      ref = expected[i];
    } else if (ref_mode == "eigen") {
      double lam;
      if (sym) {
        Complex q = (*sym)(r.x, *f.frequency);
        if (std::abs(q.imag()) > 1e-12 * std::max(1.0, std::abs(q)))
          throw ContractError("eigen reference needs a real symbol at the frequency");
        lam = q.real();
      } else {
        lam = std::pow(f.frequency->norm(), alpha);
      }
      ref = -lam * f(r.x);
    }
    double rel = std::nan("");
    if (!std::isnan(ref)) {
      rel = std::abs(r.value - ref) / std::max(std::abs(ref), 1e-12);
      worst = std::max(worst, rel);
      if (!(rel <= rel_tol)) ++failed;
    }
    if (!r.ok) ++failed;
    for (int c = 0; c < d; ++c) csv.cell(r.x[c]);
    csv.cell(r.value).cell(r.abs_error).cell(to_string(r.form)).cell(r.ok).cell(r.status);
    if (std::isnan(ref))
      csv.cell("").cell("");
    else
      csv.cell(ref).cell(rel);
    csv.end();
  }
  s["operator"] = op;
  s["points"] = rows.size();
  s["failed"] = failed;
  s["reference"] = ref_mode;
  if (ref_mode != "none") {
    s["worst_rel_err"] = worst;
    s["rel_tol"] = rel_tol;
  }
  res.pass = failed == 0;
  res.files.push_back({"generator.csv", csv.text()});
  return res;
}

// ---------------------------------------------------------------- simulate

CommandResult cmd_simulate(const Node& root, const RunOptions& opt, const SeedPolicy& seed) {
  CommandResult res;
  ProcessModel m = model(root.value("model"), root.child("model"));
  const int d = m.d;
  Vector x0 = state(root, "x0", d);
  const std::uint64_t tag = tag_of(root);
  const std::string mode = root.str("mode", "path");
  json& s = res.summary;
  s["model"] = m.desc;
  s["mode"] = mode;
  if (mode == "path") {
    const double T = root.num("T"), h = root.num("h");
    PathOptions po;
    po.exit_radius = root.num("exit_radius", kInf);
    root.done();
    if (!(T > 0.0 && h > 0.0)) fail(root.path(), "T and h must be positive");
    if (T / h > 1e7) fail(root.child("h"), "more than 10^7 steps");
    PathSample p = simulate_path(m, x0, T, h, seed, tag, po);
    Csv csv(concat(concat({"t"}, axis_names("X", d)), {"runsup", "exited"}));
    for (std::size_t i = 0; i < p.t.size(); ++i) {
      csv.cell(p.t[i]);
      for (int c = 0; c < d; ++c) csv.cell(p.x[i][c]);
      csv.cell(p.runsup[i]).cell(p.t[i] >= p.exit_time).end();
    }
    s["steps"] = p.t.size() - 1;
    s["jumps"] = p.jumps.size();
    s["exit_time"] = finite_or_null(p.exit_time);
    s["final"] = to_json(p.x.back());
    s["sup"] = p.runsup.back();
    res.files.push_back({"simulate.csv", csv.text()});
  } else if (mode == "increments") {
    const double t = root.num("t");
    const long n = root.integer("n");
    root.done();
    if (n < 1 || n > 100000000) fail(root.child("n"), "n must lie in [1, 10^8]");
    auto inc = sample_levy_increment(m, t, n, seed, tag, opt.workers);
    Csv csv(concat({"i"}, axis_names("dX", d)));
    Vector mean = zeros(d);
    for (std::size_t i = 0; i < inc.size(); ++i) {
      csv.cell(static_cast<long>(i));
      for (int c = 0; c < d; ++c) csv.cell(inc[i][c]);
      csv.end();
      mean += inc[i];
    }
    s["n"] = n;
    s["mean"] = to_json(mean / static_cast<double>(n));
    res.files.push_back({"simulate.csv", csv.text()});
  } else {
    fail(root.child("mode"), "mode must be path or increments");
  }
  return res;
}

// ---------------------------------------------------------------- asymptotics

json rows_json(const ConvergenceReport& r) {
  json out = {{"statistic", r.statistic},
              {"limit", r.limit},
              {"limit_std_error", r.limit_std_error},
              {"reference", r.reference},
              {"reference_error", r.reference_error},
              {"stat_allowance", r.stat_allowance},
              {"model_allowance", r.model_allowance},
              {"discrepancy", r.discrepancy},
              {"pass", r.pass},
              {"notes", r.notes}};
  return out;
}

Csv convergence_csv(const ConvergenceReport& r) {
  Csv csv({"t", "mean", "stderr", "reference", "discrepancy"});
  for (std::size_t i = 0; i < r.rows.size(); ++i)
    csv.cell(r.rows[i].t).cell(r.rows[i].estimate.mean).cell(r.rows[i].estimate.std_error).cell(r.reference)
        .cell(r.discrepancy_at(i)).end();
  return csv;
}

CommandResult cmd_asymptotics(const Node& root, const RunOptions& opt, const SeedPolicy& seed) {
  CommandResult res;
  const std::string kind = root.str("experiment");
  ProcessModel m = model(root.value("model"), root.child("model"));
  const int d = m.d;
  Vector x = state(root, "x", d);

  LimitExperiment ex = LimitExperiment::geometric();
  if (root.has("t_grid")) ex.t_grid = t_grid(root.value("t_grid"), root.child("t_grid"));
  ex.N = root.integer("N", ex.N);
  const std::string extrap = root.str("extrapolation", "last");
  if (extrap == "last")
    ex.extrapolation = LimitExperiment::Extrapolation::LastPoint;
  else if (extrap == "richardson")
    ex.extrapolation = LimitExperiment::Extrapolation::Richardson;
  else
    fail(root.child("extrapolation"), "extrapolation must be last or richardson");
  ex.seed = seed;
  ex.tag = tag_of(root);
  ex.workers = opt.workers;
  ex.steps = static_cast<int>(root.integer("steps", ex.steps));
  try {
    ex.validate();
  } catch (const ContractError& e) {
    fail(root.path(), e.what());
  }

  json& s = res.summary;
  s["experiment"] = kind;
  s["model"] = m.desc;
  s["x"] = to_json(x);
  s["N"] = ex.N;
  s["t_grid"] = ex.t_grid;
  if (kind == "limit") {
    TestFunction f = function(root.value("function"), root.child("function"), d);
    MomentOptions mo;
    mo.steps = ex.steps;
    if (root.has("stop_radius")) mo.stop_radius = root.num("stop_radius");
    if (root.has("growth")) mo.growth = growth(root.value("growth"), root.child("growth"));
    std::optional<double> ref;
    if (root.has("reference")) ref = root.num("reference");
    root.done();
    auto r = limit_study(ex, m, f, x, mo, ref);
    s.update(rows_json(r));
    res.pass = r.pass;
    res.files.push_back({"asymptotics.csv", convergence_csv(r).text()});
  } else if (kind == "vague") {
    TargetSet A = target(root.value("target"), root.child("target"));
    root.done();
    auto r = vague_convergence_experiment(ex, m, x, A);
    s.update(rows_json(r));
    s["target"] = A.describe();
    res.pass = r.pass;
    res.files.push_back({"asymptotics.csv", convergence_csv(r).text()});
  } else if (kind == "maximal") {
    std::vector<double> rg = root.list("r_grid");
    root.done();
    auto r = maximal_inequality_experiment(ex, m, x, rg);
    Csv csv({"r", "t", "mean", "stderr", "reference", "discrepancy"});
    json rows = json::array();
    for (const auto& row : r.rows) {
      for (std::size_t i = 0; i < row.per_t.size(); ++i)
        csv.cell(row.r).cell(r.t_grid[i]).cell(row.per_t[i].mean).cell(row.per_t[i].std_error).cell(row.bound)
            .cell(row.bound > 0.0 ? row.per_t[i].mean / row.bound : std::nan("")).end();
      rows.push_back({{"r", row.r}, {"rate", row.rate}, {"rate_std_error", row.rate_std_error}, {"bound", row.bound},
                      {"ratio", row.ratio}});
    }
    s["rows"] = rows;
    s["slope"] = r.slope;
    s["bound_slope"] = r.bound_slope;
    s["slope_defined"] = r.slope_defined;
    s["max_ratio"] = r.max_ratio;
    s["ratio_cap"] = r.ratio_cap;
    s["slope_tol"] = r.slope_tol;
    s["ratio_ok"] = r.ratio_ok;
    s["slope_ok"] = r.slope_ok;
    s["pass"] = r.pass;
    s["notes"] = r.notes;
    res.pass = r.pass;
    res.files.push_back({"asymptotics.csv", csv.text()});
  } else if (kind == "moment_tail") {
    const double a = root.num("a"), R = root.num("R");
    root.done();
    auto r = moment_tail_bound_experiment(ex, m, x, a, R);
    Csv csv({"t", "mean", "stderr", "reference", "discrepancy"});
    for (const auto& row : r.rows)
      csv.cell(row.t).cell(row.estimate.mean).cell(row.estimate.std_error).cell(r.reference)
          .cell(r.tail_term + row.estimate.mean + 3.0 * row.estimate.std_error - r.reference).end();
    s["a"] = a;
    s["R"] = R;
    s["reference"] = finite_or_null(r.reference);
    s["reference_divergent"] = r.reference_divergent;
    s["tail_term"] = r.tail_term;
    s["liminf"] = r.liminf;
    s["liminf_std_error"] = r.liminf_std_error;
    s["margin"] = finite_or_null(r.margin);
    s["pass"] = r.pass;
    s["notes"] = r.notes;
    res.pass = r.pass;
    res.files.push_back({"asymptotics.csv", csv.text()});
  } else if (kind == "uniform") {
    TestFunction f = function(root.value("function"), root.child("function"), d);
    std::vector<Vector> pts = grid(root.value("grid"), root.child("grid"));
    VariableOrderFn a = order(root.value("order"), root.child("order"), pts);
    root.done();
    VerdictOptions vo;
    vo.workers = opt.workers;
    auto r = uniform_limit_sweep(ex, m, f, a, pts, vo);
    Csv csv({"t", "mean", "stderr", "reference", "discrepancy"});
    json rows = json::array();
    for (const auto& row : r.rows) {
      const double allowance = row.noise_floor + 0.05 * r.scale;
      csv.cell(row.t).cell(row.sup_discrepancy).cell(row.noise_floor / 3.0).cell(r.scale)
          .cell(allowance > 0.0 ? row.sup_discrepancy / allowance : 0.0).end();
      rows.push_back({{"t", row.t}, {"sup_discrepancy", row.sup_discrepancy}, {"noise_floor", row.noise_floor},
                      {"worst_state", to_json(row.worst_state)}});
    }
    s["verdict"] = to_string(r.verdict.status);
    s["states"] = r.states.size();
    s["scale"] = r.scale;
    s["rows"] = rows;
    s["pass"] = r.pass;
    s["notes"] = r.notes;
    res.pass = r.pass;
    res.files.push_back({"asymptotics.csv", csv.text()});
  } else {
    fail(root.child("experiment"), "experiment must be limit, vague, maximal, moment_tail or uniform");
  }
  return res;
}

// ---------------------------------------------------------------- verify

struct Checks {
  json list = json::array();
  bool pass = true;
  void add(const std::string& name, bool ok, double margin, const std::string& detail = "") {
    list.push_back({{"name", name}, {"pass", ok}, {"margin", finite_or_null(margin)}, {"detail", detail}});
    pass = pass && ok;
  }
};

std::vector<double> list_or(const Node& n, const std::string& key, std::vector<double> fallback) {
  return n.has(key) ? n.list(key) : fallback;
}

CommandResult cmd_verify(const Node& root, const RunOptions& opt) {
  CommandResult res;
  const std::string suite = root.str("suite");
  Checks checks;
  json& s = res.summary;
  s["suite"] = suite;
  if (suite == "kernel") {
    auto ys = list_or(root, "y", {0.1, 0.5, 1.0, 2.0});
    auto as = list_or(root, "alpha", {0.3, 0.7, 1.0, 1.5});
    const double tol = root.num("tol", 0.01);
    root.done();
    Csv csv({"y", "alpha", "lhs", "rhs", "rel_err", "pass"});
    for (double y : ys)
      for (double a : as) {
        auto ic = kernel_identity_check(y, a);
        bool ok = ic.rel_err <= tol;
        checks.add("y=" + fmt(y) + " alpha=" + fmt(a), ok, tol - ic.rel_err);
        csv.cell(y).cell(a).cell(ic.lhs).cell(ic.rhs).cell(ic.rel_err).cell(ok).end();
      }
    res.files.push_back({"verify.csv", csv.text()});
  } else if (suite == "aux1") {
    auto as = list_or(root, "alpha", {0.3, 0.6, 0.9, 1.2});
    auto gaps = list_or(root, "gaps", {0.2, 0.5});
    const double trunc = root.num("truncation", 1.0);
    const double tol = root.num("tol", 0.01);
    root.done();
    Csv csv({"alpha", "kappa", "lhs", "rhs", "rel_err", "lhs_divergent", "rhs_divergent", "pass"});
    for (double a : as) {
      auto nu = LevyMeasureSpec::isotropic_power(1, c_alpha(a, 1), a, trunc);
      for (double g : gaps) {
        const double k = a + g;
        if (!(k < 2.0)) continue;
        auto ic = aux1_moment_identity(nu, k);
        bool ok = !ic.lhs_divergent && !ic.rhs_divergent && ic.rel_err <= tol;
        checks.add("alpha=" + fmt(a) + " kappa=" + fmt(k), ok, tol - ic.rel_err);
        csv.cell(a).cell(k).cell(ic.lhs).cell(ic.rhs).cell(ic.rel_err).cell(ic.lhs_divergent).cell(ic.rhs_divergent)
            .cell(ok).end();
      }
      auto dv = aux1_moment_identity(nu, a);
      bool ok = dv.lhs_divergent && dv.rhs_divergent;
      checks.add("alpha=" + fmt(a) + " kappa=alpha diverges", ok, ok ? 1.0 : -1.0,
                 ok ? "both sides divergent" : "divergence not flagged on both sides");
      csv.cell(a).cell(a).cell(dv.lhs).cell(dv.rhs).cell(dv.rel_err).cell(dv.lhs_divergent).cell(dv.rhs_divergent)
          .cell(ok).end();
    }
    res.files.push_back({"verify.csv", csv.text()});
  } else if (suite == "app7") {
    Symbol sym = symbol(root.value("symbol"), root.child("symbol"));
    const int d = sym.dim();
    Vector x = state(root, "x", d);
    Vector eta = root.has("eta") ? state(root, "eta", d) : unit(d);
    const double threshold = root.num("threshold", 0.01);
    root.done();
    auto bg = bg_index_infinity(sym, x);
    auto de = diffusion_estimate(sym, x, eta);
    const bool applicable = bg.value + bg.band < 2.0;
    s["beta_infinity"] = bg.value;
    s["band"] = bg.band;
    s["diffusion"] = de.value;
    s["trend"] = de.trend;
    s["applicable"] = applicable;
    if (applicable)
      checks.add("diffusion estimate below threshold", de.value <= threshold, threshold - de.value,
                 "2 Re q(r eta)/r^2 at r=" + fmt(de.radii.empty() ? 0.0 : de.radii.back()));
    else
      checks.add("beta_infinity below 2", true, 0.0, "index not below 2; no diffusion constraint");
    Csv csv({"r", "diffusion"});
    for (std::size_t i = 0; i < de.radii.size(); ++i) csv.cell(de.radii[i]).cell(de.values[i]).end();
    res.files.push_back({"verify.csv", csv.text()});
  } else if (suite == "domain") {
    Symbol sym = symbol(root.value("symbol"), root.child("symbol"));
    const int d = sym.dim();
    TestFunction f = function(root.value("function"), root.child("function"), d);
    std::vector<Vector> pts = grid(root.value("grid"), root.child("grid"));
    VariableOrderFn a = order(root.value("order"), root.child("order"), pts);
    std::optional<std::string> expected;
    if (root.has("expected")) expected = root.str("expected");
    root.done();
    VerdictOptions vo;
    vo.workers = opt.workers;
    auto v = domain_verdict(sym, f, a, pts, vo);
    const std::string status = to_string(v.status);
    s["status"] = status;
    s["indeterminate_band"] = v.indeterminate_band;
    if (expected)
      checks.add("status " + *expected, status == *expected, status == *expected ? 1.0 : -1.0, "got " + status);
    else
      checks.add("certified", v.certified(), v.certified() ? 1.0 : -1.0, status);
    Csv csv({"route", "name", "pass", "margin", "detail"});
    for (const auto& r : v.reasons) csv.cell(r.route).cell(r.name).cell(r.pass).cell(r.margin).cell(r.detail).end();
    res.files.push_back({"verify.csv", csv.text()});
  } else {
    fail(root.child("suite"), "suite must be kernel, aux1, app7 or domain");
  }
  s["checks"] = checks.list;
  s["pass"] = checks.pass;
  res.pass = checks.pass;
  return res;
}

}  // namespace

CommandResult run_command(const std::string& command, const json& config, const RunOptions& opt) {
  Node root(config, "$");
  if (root.has("command") && root.str("command") != command)
    fail(root.child("command"), "config is for '" + root.str("command") + "', not '" + command + "'");
  SeedPolicy seed;
  if (root.has("seed")) seed.master = as_seed(root.value("seed"), root.child("seed"));
  if (opt.seed) seed.master = *opt.seed;
  if (opt.workers < 1) fail("--workers", "must be at least 1");

  CommandResult res;
  if (command == "symbol")
    res = cmd_symbol(root, opt);
  else if (command == "generator")
    res = cmd_generator(root, opt);
  else if (command == "simulate")
    res = cmd_simulate(root, opt, seed);
  else if (command == "asymptotics")
    res = cmd_asymptotics(root, opt, seed);
  else if (command == "verify")
    res = cmd_verify(root, opt);
  else
    fail("command", "unknown command '" + command + "'");
  res.summary["command"] = command;
  res.summary["seed"] = hex(seed.master);
  if (!res.summary.contains("pass")) res.summary["pass"] = res.pass;
  return res;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ContractError*>(&e) ||
      dynamic_cast<const DomainError*>(&e))
    return 2;
  return 3;
}

}  // namespace levygen::cli
