#include "config.hpp"

#include <fstream>

namespace levygen::cli {

void fail(const std::string& path, const std::string& what) { throw ConfigError(path, what); }

Node::Node(const json& j, std::string path) : j_(&j), path_(std::move(path)), seen_(std::make_shared<std::set<std::string>>()) {
  if (!j.is_object()) fail(path_, "expected an object");
}

bool Node::has(const std::string& key) const { return j_->contains(key); }

const json& Node::value(const std::string& key) const {
  auto it = j_->find(key);
  if (it == j_->end()) fail(child(key), "missing required key");
  seen_->insert(key);
  return *it;
}

Node Node::at(const std::string& key) const { return Node(value(key), child(key)); }

std::optional<Node> Node::opt(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return at(key);
}

double Node::num(const std::string& key) const { return as_number(value(key), child(key)); }
double Node::num(const std::string& key, double fallback) const { return has(key) ? num(key) : fallback; }

long Node::integer(const std::string& key) const {
  const json& v = value(key);
  if (!v.is_number_integer()) fail(child(key), "expected an integer");
  return v.get<long>();
}
long Node::integer(const std::string& key, long fallback) const { return has(key) ? integer(key) : fallback; }

bool Node::flag(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const json& v = value(key);
  if (!v.is_boolean()) fail(child(key), "expected true or false");
  return v.get<bool>();
}

std::string Node::str(const std::string& key) const {
  const json& v = value(key);
  if (!v.is_string()) fail(child(key), "expected a string");
  return v.get<std::string>();
}
std::string Node::str(const std::string& key, const std::string& fallback) const { return has(key) ? str(key) : fallback; }

Vector Node::vec(const std::string& key) const { return as_vector(value(key), child(key)); }

std::vector<double> Node::list(const std::string& key) const {
  const json& v = value(key);
  if (!v.is_array()) fail(child(key), "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], child(key) + "[" + std::to_string(i) + "]"));
  return out;
}

Matrix Node::mat(const std::string& key) const { return as_matrix(value(key), child(key)); }

void Node::done() const {
  for (auto it = j_->begin(); it != j_->end(); ++it)
    if (!seen_->count(it.key())) fail(child(it.key()), "unknown key");
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

Vector as_vector(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of numbers");
  if (static_cast<int>(j.size()) > kMaxDim) fail(path, "dimension above " + std::to_string(kMaxDim));
  Vector v(static_cast<int>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = as_number(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

Matrix as_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of rows");
  const int rows = static_cast<int>(j.size());
  Vector first = as_vector(j[0], path + "[0]");
  Matrix m(rows, first.size());
  for (int i = 0; i < rows; ++i) {
    Vector r = as_vector(j[static_cast<std::size_t>(i)], path + "[" + std::to_string(i) + "]");
    if (r.size() != first.size()) fail(path, "rows have different lengths");
    m.row(i) = r.transpose();
  }
  return m;
}

std::uint64_t parse_seed(const std::string& text, const std::string& path) {
  try {
    std::size_t used = 0;
    unsigned long long v = std::stoull(text, &used, 0);
    if (used != text.size()) fail(path, "seed '" + text + "' is not an unsigned integer");
    return v;
  } catch (const std::logic_error&) {
    fail(path, "seed '" + text + "' is not an unsigned 64-bit integer");
  }
}

std::uint64_t as_seed(const json& j, const std::string& path) {
  if (j.is_number_unsigned() || (j.is_number_integer() && j.get<long long>() >= 0)) return j.get<std::uint64_t>();
  if (j.is_string()) return parse_seed(j.get<std::string>(), path);
  fail(path, "expected an unsigned integer or a string like \"0x4C455659\"");
}

namespace {

Expression parse_expr(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected an expression string");
  try {
    return Expression::parse(j.get<std::string>());
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

TailClass tail_class(const std::string& s, const std::string& path) {
  if (s == "exponential") return TailClass::Exponential;
  if (s == "power") return TailClass::Power;
  if (s == "compact") return TailClass::Compact;
  fail(path, "tail must be exponential, power or compact");
}

std::vector<Atom> atoms(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of atoms");
  std::vector<Atom> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    Node a(j[i], path + "[" + std::to_string(i) + "]");
    out.push_back({a.vec("at"), a.num("weight")});
    a.done();
  }
  return out;
}

}  // namespace

ScalarField scalar_field(const json& j, const std::string& path, std::string* desc) {
  if (j.is_number()) {
    double c = j.get<double>();
    if (desc) *desc = std::to_string(c);
    return [c](const Vector&) { return c; };
  }
  Expression e = parse_expr(j, path);
  if (desc) *desc = e.text();
  return [e](const Vector& x) { return e(x); };
}

MatrixField matrix_field(const json& s, const std::string& sp, int k, int* rows, std::string* desc) {
  if (!s.is_array() || s.empty()) fail(sp, "expected an array of rows");
  if (static_cast<int>(s.size()) > kMaxDim) fail(sp, "more than " + std::to_string(kMaxDim) + " rows");
  std::vector<std::vector<ScalarField>> cells;
  std::string text = "[";
  for (std::size_t i = 0; i < s.size(); ++i) {
    const std::string rp = sp + "[" + std::to_string(i) + "]";
    if (!s[i].is_array() || static_cast<int>(s[i].size()) != k) fail(rp, "row length must equal the driver dimension");
    cells.emplace_back();
    for (std::size_t c = 0; c < s[i].size(); ++c) {
      std::string e;
      cells.back().push_back(scalar_field(s[i][c], rp + "[" + std::to_string(c) + "]", &e));
      text += (c ? "," : (i ? ";" : "")) + e;
    }
  }
  *desc = text + "]";
  const int d = static_cast<int>(cells.size());
  *rows = d;
  return [cells, d, k](const Vector& x) {
    Matrix m(d, k);
    for (int i = 0; i < d; ++i)
      for (int c = 0; c < k; ++c) m(i, c) = cells[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)](x);
    return m;
  };
}

LevyMeasureSpec measure(const json& j, const std::string& path) {
  Node n(j, path);
  const std::string kind = n.str("kind");
  LevyMeasureSpec out = LevyMeasureSpec::zero(1);
  if (kind == "zero") {
    out = LevyMeasureSpec::zero(static_cast<int>(n.integer("d", 1)));
  } else if (kind == "stable" || kind == "power") {
    const int d = static_cast<int>(n.integer("d", 1));
    const double alpha = n.num("alpha");
    double intensity = 0.0;
    if (kind == "stable") {
      intensity = c_alpha(alpha, d);
    } else {
      const json& v = n.value("intensity");
      if (v.is_string() && v.get<std::string>() == "c_alpha")
        intensity = c_alpha(alpha, d);
      else
        intensity = as_number(v, n.child("intensity"));
    }
    out = LevyMeasureSpec::isotropic_power(d, intensity, alpha, n.num("truncation", kInf));
  } else if (kind == "atoms") {
    auto a = atoms(n.value("atoms"), n.child("atoms"));
    out = LevyMeasureSpec::atoms(static_cast<int>(a.front().location.size()), std::move(a));
  } else if (kind == "density") {
    DensitySpec spec;
    const int d = static_cast<int>(n.integer("d", 1));
    spec.n = scalar_field(n.value("n"), n.child("n"), &spec.description);
    spec.singularity = n.num("singularity", 0.0);
    spec.tail = tail_class(n.str("tail", "exponential"), n.child("tail"));
    spec.tail_param = n.num("tail_param", 1.0);
    spec.symmetric = n.flag("symmetric", false);
    out = LevyMeasureSpec::density(d, spec);
  } else if (kind == "pushforward") {
    out = LevyMeasureSpec::pushforward(measure(n.value("base"), n.child("base")), n.mat("map"));
  } else {
    fail(n.child("kind"), "unknown measure kind '" + kind + "' (zero, stable, power, atoms, density, pushforward)");
  }
  n.done();
  return out;
}

LevyTriplet triplet(const Node& n) {
  LevyMeasureSpec nu = measure(n.value("nu"), n.child("nu"));
  const int d = nu.dim();
  Vector b = n.has("b") ? n.vec("b") : zeros(d);
  Matrix Q = n.has("Q") ? n.mat("Q") : Matrix::Zero(d, d);
  if (b.size() != d) fail(n.child("b"), "length differs from the measure dimension");
  if (Q.rows() != d || Q.cols() != d) fail(n.child("Q"), "must be d x d");
  return LevyTriplet::make(b, Q, nu);
}

Symbol symbol(const json& j, const std::string& path) {
  Node n(j, path);
  const std::string family = n.str("family");
  std::optional<Symbol> out;
  if (family == "stable_like") {
    const int d = static_cast<int>(n.integer("d", 1));
    const json& g = n.value("gamma");
    if (g.is_number()) {
      out = Symbol::stable_like(d, g.get<double>());
    } else {
      std::string desc;
      auto f = scalar_field(g, n.child("gamma"), &desc);
      out = Symbol::stable_like(d, f, desc);
    }
  } else if (family == "relativistic" || family == "tlp" || family == "lamperti") {
    const int d = static_cast<int>(n.integer("d", 1));
    const json& m = n.value("m");
    const json& g = n.value("gamma");
    if (m.is_number() && g.is_number()) {
      double mv = m.get<double>(), gv = g.get<double>();
      out = family == "relativistic" ? Symbol::relativistic(d, mv, gv)
            : family == "tlp"        ? Symbol::tlp_like(d, mv, gv)
                                     : Symbol::lamperti(d, mv, gv);
    } else {
      std::string dm, dg;
      auto mf = scalar_field(m, n.child("m"), &dm);
      auto gf = scalar_field(g, n.child("gamma"), &dg);
      std::string desc = "m=" + dm + ", gamma=" + dg;
      out = family == "relativistic" ? Symbol::relativistic(d, mf, gf, desc)
            : family == "tlp"        ? Symbol::tlp_like(d, mf, gf, desc)
                                     : Symbol::lamperti(d, mf, gf, desc);
    }
  } else if (family == "levy") {
    out = Symbol::levy_constant(triplet(n));
  } else if (family == "sde") {
    Symbol driver = symbol(n.value("driver"), n.child("driver"));
    std::string desc;
    int d = 0;
    MatrixField sigma = matrix_field(n.value("sigma"), n.child("sigma"), driver.dim(), &d, &desc);
    out = Symbol::sde_composed(d, driver, sigma, desc);
  } else {
    fail(n.child("family"), "unknown symbol family '" + family + "' (stable_like, relativistic, tlp, lamperti, levy, sde)");
  }
  n.done();
  return *out;
}

TestFunction function(const json& j, const std::string& path, int d) {
  if (j.is_string()) {
    try {
      return catalog::by_name(j.get<std::string>(), d);
    } catch (const Error& e) {
      fail(path, e.what());
    }
  }
  Node n(j, path);
  TestFunction f;
  if (n.has("expr")) {
    Expression e = parse_expr(n.value("expr"), n.child("expr"));
    std::vector<Expression> grad, hess;
    if (n.has("grad")) {
      const json& g = n.value("grad");
      if (!g.is_array()) fail(n.child("grad"), "expected an array of expressions");
      for (std::size_t i = 0; i < g.size(); ++i) grad.push_back(parse_expr(g[i], n.child("grad") + "[" + std::to_string(i) + "]"));
    }
    if (n.has("hess")) {
      const json& h = n.value("hess");
      if (!h.is_array()) fail(n.child("hess"), "expected an array of expressions");
      for (std::size_t i = 0; i < h.size(); ++i) hess.push_back(parse_expr(h[i], n.child("hess") + "[" + std::to_string(i) + "]"));
    }
    try {
      f = TestFunction::from_expression(d, e, grad, hess, n.flag("vanishes", false));
    } catch (const Error& err) {
      fail(path, err.what());
    }
  } else {
    const std::string name = n.str("name");
    const double beta = n.num("beta", 0.8);
    std::optional<Vector> xi0;
    if (n.has("xi0")) xi0 = n.vec("xi0");
    try {
      f = catalog::by_name(name, d, beta, xi0 ? &*xi0 : nullptr);
    } catch (const Error& e) {
      fail(path, e.what());
    }
  }
  n.done();
  return f;
}

std::vector<Vector> grid(const json& j, const std::string& path) {
  std::vector<Vector> out;
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_vector(j[i], path + "[" + std::to_string(i) + "]"));
    if (out.empty()) fail(path, "grid is empty");
    return out;
  }
  Node n(j, path);
  if (n.has("points")) {
    out = grid(n.value("points"), n.child("points"));
  } else {
    Vector lo = n.vec("lo"), hi = n.vec("hi");
    if (lo.size() != hi.size()) fail(path, "lo and hi differ in length");
    const int d = static_cast<int>(lo.size());
    std::vector<long> counts;
    const json& c = n.value("n");
    if (c.is_number_integer()) {
      counts.assign(static_cast<std::size_t>(d), c.get<long>());
    } else if (c.is_array() && static_cast<int>(c.size()) == d) {
      for (const auto& v : c) {
        if (!v.is_number_integer()) fail(n.child("n"), "expected integers");
        counts.push_back(v.get<long>());
      }
    } else {
      fail(n.child("n"), "expected an integer or one integer per axis");
    }
    long total = 1;
    for (long k : counts) {
      if (k < 1 || k > 100000) fail(n.child("n"), "points per axis must lie in [1, 100000]");
      total *= k;
    }
    if (total > 1000000) fail(n.child("n"), "grid has more than 10^6 points");
    for (long idx = 0; idx < total; ++idx) {
      Vector x(d);
      long rest = idx;
      for (int a = d - 1; a >= 0; --a) {
        long k = counts[static_cast<std::size_t>(a)];
        long i = rest % k;
        rest /= k;
        x[a] = k == 1 ? lo[a] : lo[a] + (hi[a] - lo[a]) * static_cast<double>(i) / static_cast<double>(k - 1);
      }
      out.push_back(x);
    }
  }
  n.done();
  return out;
}

VariableOrderFn order(const json& j, const std::string& path, const std::vector<Vector>& sample) {
  if (j.is_number()) return VariableOrderFn::constant(j.get<double>());
  Node n(j, path);
  const double eps = n.num("eps", 0.05);
  std::optional<VariableOrderFn> out;
  if (n.has("constant")) {
    out = VariableOrderFn::constant(n.num("constant"), eps);
  } else if (n.has("sine")) {
    Node s = n.at("sine");
    out = VariableOrderFn::sine(s.num("base"), s.num("amp"), s.num("freq", 1.0), eps);
    s.done();
  } else if (n.has("expr")) {
    Expression e = parse_expr(n.value("expr"), n.child("expr"));
    out = VariableOrderFn::from_expression(e, sample, eps, e.text());
  } else {
    fail(path, "order needs one of constant, sine, expr");
  }
  n.done();
  return *out;
}

TargetSet target(const json& j, const std::string& path) {
  Node n(j, path);
  std::optional<TargetSet> out;
  if (n.has("box")) {
    Node b = n.at("box");
    out = TargetSet::box(b.vec("lo"), b.vec("hi"), b.flag("open", false));
    b.done();
  } else if (n.has("annulus")) {
    Node a = n.at("annulus");
    out = TargetSet::annulus(static_cast<int>(a.integer("d", 1)), a.num("r_lo"), a.num("r_hi"), a.flag("open", false));
    a.done();
  } else {
    fail(path, "target needs box or annulus");
  }
  n.done();
  return *out;
}

SmallJumpOptions small_jumps(const json& j, const std::string& path) {
  Node n(j, path);
  SmallJumpOptions o;
  const std::string mode = n.str("mode", "drop");
  if (mode == "drop")
    o.mode = SmallJumpOptions::Mode::DropCompensated;
  else if (mode == "gaussian")
    o.mode = SmallJumpOptions::Mode::GaussianSubstitute;
  else
    fail(n.child("mode"), "mode must be drop or gaussian");
  o.cutoff = n.num("cutoff", o.cutoff);
  o.variance_target = n.num("variance_target", o.variance_target);
  o.max_rate = n.num("max_rate", o.max_rate);
  n.done();
  return o;
}

ProcessModel model(const json& j, const std::string& path) {
  Node n(j, path);
  const std::string kind = n.str("kind");
  SmallJumpOptions sj;
  if (n.has("small_jumps")) sj = small_jumps(n.value("small_jumps"), n.child("small_jumps"));
  auto probe = [&](int d) {
    if (n.has("probe")) return grid(n.value("probe"), n.child("probe"));
    std::vector<Vector> g;
    for (int i = -8; i <= 8; ++i) {
      Vector x = zeros(d);
      x[0] = 0.5 * i;
      g.push_back(x);
    }
    return g;
  };
  std::optional<ProcessModel> out;
  if (kind == "stable") {
    out = ProcessModel::stable(static_cast<int>(n.integer("d", 1)), n.num("alpha"));
  } else if (kind == "compound_poisson") {
    auto a = atoms(n.value("atoms"), n.child("atoms"));
    const int d = static_cast<int>(a.front().location.size());
    Vector v = n.has("velocity") ? n.vec("velocity") : zeros(d);
    out = ProcessModel::compound_poisson(std::move(a), v);
  } else if (kind == "levy") {
    out = ProcessModel::levy(triplet(n), sj);
  } else if (kind == "symbol") {
    Symbol s = symbol(n.value("symbol"), n.child("symbol"));
    out = ProcessModel::from_symbol(s, probe(s.dim()));
    out->small_jumps = sj;
  } else if (kind == "stable_like") {
    const int d = static_cast<int>(n.integer("d", 1));
    std::string desc;
    auto g = scalar_field(n.value("gamma"), n.child("gamma"), &desc);
    out = ProcessModel::stable_like(d, g, probe(d), desc);
  } else if (kind == "relativistic") {
    const int d = static_cast<int>(n.integer("d", 1));
    std::string dm, dg;
    auto m = scalar_field(n.value("m"), n.child("m"), &dm);
    auto g = scalar_field(n.value("gamma"), n.child("gamma"), &dg);
    out = ProcessModel::relativistic_stable_like(d, m, g, probe(d), "m=" + dm + ", gamma=" + dg);
  } else if (kind == "sde") {
    ProcessModel driver = model(n.value("driver"), n.child("driver"));
    std::string desc;
    int d = 0;
    MatrixField sigma = matrix_field(n.value("sigma"), n.child("sigma"), driver.d, &d, &desc);
    out = ProcessModel::sde(d, sigma, driver, n.num("bound"), n.num("lipschitz"), probe(d), desc);
  } else {
    fail(n.child("kind"), "unknown model kind '" + kind + "' (stable, compound_poisson, levy, symbol, stable_like, relativistic, sde)");
  }
  n.done();
  return *out;
}

std::vector<double> t_grid(const json& j, const std::string& path) {
  if (j.is_array()) {
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_number(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
  }
  Node n(j, path);
  auto ex = LimitExperiment::geometric(n.num("t_max", 1e-1), n.num("t_min", 1e-4), static_cast<int>(n.integer("points", 8)));
  n.done();
  return ex.t_grid;
}

GrowthFunction growth(const json& j, const std::string& path) {
  Node n(j, path);
  GrowthFunction g{n.num("p", 0.0), n.num("beta", 0.0), n.num("kappa", 1.0)};
  n.done();
  try {
    g.validate();
  } catch (const Error& e) {
    fail(path, e.what());
  }
  return g;
}

json load(const std::string& file) {
  std::ifstream in(file);
  if (!in) fail(file, "cannot open config file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(file, std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace levygen::cli
