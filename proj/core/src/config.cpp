#include "kamlab/config.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

#include "kamlab/reduction.hpp"

namespace kamlab {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

const json& require(const json& doc, const char* key, const std::string& path) {
  auto it = doc.find(key);
  if (it == doc.end()) fail(path + "." + key, "missing");
  return *it;
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

long get_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long>();
}

std::vector<int> get_int_vector(const json& j, int expected, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  std::vector<int> out;
  for (const auto& e : j) {
    if (!e.is_number_integer()) fail(path, "expected integer entries");
    out.push_back(e.get<int>());
  }
  if (static_cast<int>(out.size()) != expected)
    fail(path, "length " + std::to_string(out.size()) + ", expected " + std::to_string(expected));
  return out;
}

std::vector<Interval> get_box(const json& j, int expected, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of [lo, hi] pairs");
  std::vector<Interval> out;
  for (std::size_t idx = 0; idx < j.size(); ++idx) {
    const auto& e = j[idx];
    const std::string p = path + "[" + std::to_string(idx) + "]";
    if (!e.is_array() || e.size() != 2) fail(p, "expected [lo, hi]");
    out.push_back({get_number(e[0], p), get_number(e[1], p)});
  }
  if (static_cast<int>(out.size()) != expected)
    fail(path, "length " + std::to_string(out.size()) + ", expected " + std::to_string(expected));
  return out;
}

std::vector<FieldTerm> parse_terms(const json& j, int k, int zdim, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of terms");
  std::vector<FieldTerm> terms;
  for (std::size_t idx = 0; idx < j.size(); ++idx) {
    const auto& e = j[idx];
    const std::string p = path + "[" + std::to_string(idx) + "]";
    if (!e.is_object()) fail(p, "expected a term object");
    FieldTerm t;
    t.coeff = get_number(require(e, "coeff", p), p + ".coeff");
    t.i_pow = e.contains("i_pow") ? get_int_vector(e["i_pow"], k, p + ".i_pow")
                                  : std::vector<int>(k, 0);
    t.z_pow = e.contains("z_pow") ? get_int_vector(e["z_pow"], zdim, p + ".z_pow")
                                  : std::vector<int>(zdim, 0);
    t.wave = e.contains("wave") ? get_int_vector(e["wave"], k, p + ".wave")
                                : std::vector<int>(k, 0);
    t.phase = e.contains("phase") ? get_number(e["phase"], p + ".phase") : 0.0;
    for (int v : t.i_pow)
      if (v < 0) fail(p + ".i_pow", "negative exponent");
    for (int v : t.z_pow)
      if (v < 0) fail(p + ".z_pow", "negative exponent");
    terms.push_back(std::move(t));
  }
  return terms;
}

bool is_zero_field(const ScalarField& f) {
  for (const auto& t : f.terms())
    if (t.coeff != 0.0) return false;
  return true;
}

json terms_to_json(const ScalarField& f) {
  json arr = json::array();
  for (const auto& t : f.terms()) {
    json e;
    e["coeff"] = t.coeff;
    e["i_pow"] = t.i_pow;
    e["z_pow"] = t.z_pow;
    e["wave"] = t.wave;
    e["phase"] = t.phase;
    arr.push_back(std::move(e));
  }
  return arr;
}

}  // namespace

SystemConfig parse_config_json(const json& doc) {
  if (!doc.is_object()) fail("$", "top level must be an object");

  ChartSpec chart;
  {
    const json& jc = require(doc, "chart", "$");
    chart.k = static_cast<int>(get_integer(require(jc, "k", "chart"), "chart.k"));
    chart.n = static_cast<int>(get_integer(require(jc, "n", "chart"), "chart.n"));
    if (chart.k < 1) fail("chart.k", "must be >= 1");
    if (chart.n < chart.k) fail("chart.n", "must be >= k");
    chart.V_box = get_box(require(jc, "V_box", "chart"), chart.k, "chart.V_box");
    if (chart.zdim() > 0)
      chart.W_box = get_box(require(jc, "W_box", "chart"), chart.zdim(), "chart.W_box");
    else if (jc.contains("W_box"))
      chart.W_box = get_box(jc["W_box"], 0, "chart.W_box");
    chart.validate();
  }
  const int k = chart.k;
  const int m = chart.zdim();

  std::vector<std::vector<ScalarField>> zz(
      m, std::vector<ScalarField>(m, ScalarField::constant(k, m, 0.0)));
  std::vector<std::vector<ScalarField>> iz(
      k, std::vector<ScalarField>(m, ScalarField::constant(k, m, 0.0)));
  if (doc.contains("form")) {
    const json& jf = doc["form"];
    if (!jf.is_object()) fail("form", "expected an object");
    if (jf.contains("zz_block")) {
      const json& jz = jf["zz_block"];
      if (!jz.is_array()) fail("form.zz_block", "expected an array");
      for (std::size_t idx = 0; idx < jz.size(); ++idx) {
        const std::string p = "form.zz_block[" + std::to_string(idx) + "]";
        const json& e = jz[idx];
        const int mu = static_cast<int>(get_integer(require(e, "mu", p), p + ".mu"));
        const int nu = static_cast<int>(get_integer(require(e, "nu", p), p + ".nu"));
        if (mu < 0 || nu < 0 || mu >= m || nu >= m) fail(p, "index out of range");
        if (mu >= nu) fail(p, "entries are given for mu < nu only");
        zz[mu][nu] = ScalarField(k, m, parse_terms(require(e, "terms", p), k, m, p + ".terms"));
      }
    }
    if (jf.contains("Iz_block")) {
      const json& ji = jf["Iz_block"];
      if (!ji.is_array()) fail("form.Iz_block", "expected an array");
      for (std::size_t idx = 0; idx < ji.size(); ++idx) {
        const std::string p = "form.Iz_block[" + std::to_string(idx) + "]";
        const json& e = ji[idx];
        const int i = static_cast<int>(get_integer(require(e, "i", p), p + ".i"));
        const int mu = static_cast<int>(get_integer(require(e, "mu", p), p + ".mu"));
        if (i < 0 || i >= k || mu < 0 || mu >= m) fail(p, "index out of range");
        iz[i][mu] = ScalarField(k, m, parse_terms(require(e, "terms", p), k, m, p + ".terms"));
      }
    }
  } else if (m > 0) {
    // canonical constant pairing dz^{2l-1} ^ dz^{2l}
    for (int l = 0; l + 1 < m; l += 2) zz[l][l + 1] = ScalarField::constant(k, m, 1.0);
  }

  const json& jh = require(doc, "hamiltonian", "$");
  ScalarField base(k, m, parse_terms(require(jh, "base", "hamiltonian"), k, m, "hamiltonian.base"));
  ScalarField pert(k, m, parse_terms(require(jh, "perturbation", "hamiltonian"), k, m,
                                     "hamiltonian.perturbation"));
  const double eps = get_number(require(jh, "epsilon", "hamiltonian"), "hamiltonian.epsilon");
  if (!base.angle_independent() || !base.z_independent())
    fail("hamiltonian.base", "must depend on actions only");
  if (!pert.z_independent()) fail("hamiltonian.perturbation", "must be z-independent");
  if (eps < 0.0) fail("hamiltonian.epsilon", "must be >= 0");

  IntegratorConfig integ;
  if (doc.contains("integrator")) {
    const json& ji = doc["integrator"];
    if (!ji.is_object()) fail("integrator", "expected an object");
    if (ji.contains("method")) {
      const std::string mth = ji["method"].get<std::string>();
      if (mth == "splitting2")
        integ.method = Method::splitting2;
      else if (mth == "midpoint")
        integ.method = Method::midpoint;
      else
        fail("integrator.method", "must be splitting2 or midpoint");
    }
    if (ji.contains("step")) integ.step = get_number(ji["step"], "integrator.step");
    if (ji.contains("steps")) integ.steps = get_integer(ji["steps"], "integrator.steps");
    if (ji.contains("record_every"))
      integ.record_every = get_integer(ji["record_every"], "integrator.record_every");
    if (ji.contains("newton_tol"))
      integ.newton_tol = get_number(ji["newton_tol"], "integrator.newton_tol");
    if (ji.contains("newton_max_iter"))
      integ.newton_max_iter =
          static_cast<int>(get_integer(ji["newton_max_iter"], "integrator.newton_max_iter"));
    integ.validate();
  }

  AnalysisConfig ana;
  ana.diophantine.tau = k;  // conventional default tau = k (> k - 1)
  if (doc.contains("analysis")) {
    const json& ja = doc["analysis"];
    if (!ja.is_object()) fail("analysis", "expected an object");
    if (ja.contains("T_total")) ana.T_total = get_number(ja["T_total"], "analysis.T_total");
    if (ja.contains("tol_torus"))
      ana.tolerances.tol_torus = get_number(ja["tol_torus"], "analysis.tol_torus");
    if (ja.contains("diophantine")) {
      const json& jd = ja["diophantine"];
      if (jd.contains("gamma"))
        ana.diophantine.gamma = get_number(jd["gamma"], "analysis.diophantine.gamma");
      if (jd.contains("tau"))
        ana.diophantine.tau = get_number(jd["tau"], "analysis.diophantine.tau");
      if (jd.contains("K_max"))
        ana.diophantine.K_max =
            static_cast<int>(get_integer(jd["K_max"], "analysis.diophantine.K_max"));
    }
    if (ja.contains("resonance")) {
      const json& jr = ja["resonance"];
      if (jr.contains("gamma"))
        ana.tolerances.res_gamma = get_number(jr["gamma"], "analysis.resonance.gamma");
      if (jr.contains("K"))
        ana.tolerances.res_K = static_cast<int>(get_integer(jr["K"], "analysis.resonance.K"));
    }
  }

  std::uint64_t seed = 0;
  if (doc.contains("seed")) seed = static_cast<std::uint64_t>(get_integer(doc["seed"], "seed"));

  SymplecticFormSpec form(chart, std::move(zz), std::move(iz));
  return SystemConfig{std::move(chart),
                      std::move(form),
                      HamiltonianSpec(std::move(base), std::move(pert), eps),
                      integ,
                      ana,
                      seed};
}

SystemConfig parse_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError("parse error in " + path.string() + ": " + e.what());
  }
  return parse_config_json(doc);
}

json config_to_json(const SystemConfig& cfg) {
  json doc;
  doc["chart"]["k"] = cfg.chart.k;
  doc["chart"]["n"] = cfg.chart.n;
  json vbox = json::array();
  for (const auto& iv : cfg.chart.V_box) vbox.push_back({iv.lo, iv.hi});
  doc["chart"]["V_box"] = std::move(vbox);
  json wbox = json::array();
  for (const auto& iv : cfg.chart.W_box) wbox.push_back({iv.lo, iv.hi});
  doc["chart"]["W_box"] = std::move(wbox);

  json zz = json::array();
  json iz = json::array();
  const int m = cfg.chart.zdim();
  for (int mu = 0; mu < m; ++mu)
    for (int nu = mu + 1; nu < m; ++nu) {
      const ScalarField& f = cfg.form.zz(mu, nu);
      if (is_zero_field(f)) continue;
      zz.push_back({{"mu", mu}, {"nu", nu}, {"terms", terms_to_json(f)}});
    }
  for (int i = 0; i < cfg.chart.k; ++i)
    for (int mu = 0; mu < m; ++mu) {
      const ScalarField& f = cfg.form.Iz(i, mu);
      if (is_zero_field(f)) continue;
      iz.push_back({{"i", i}, {"mu", mu}, {"terms", terms_to_json(f)}});
    }
  doc["form"]["zz_block"] = std::move(zz);
  doc["form"]["Iz_block"] = std::move(iz);

  doc["hamiltonian"]["base"] = terms_to_json(cfg.hamiltonian.base());
  doc["hamiltonian"]["perturbation"] = terms_to_json(cfg.hamiltonian.perturbation());
  doc["hamiltonian"]["epsilon"] = cfg.hamiltonian.epsilon();

  doc["integrator"]["method"] =
      cfg.integrator.method == Method::splitting2 ? "splitting2" : "midpoint";
  doc["integrator"]["step"] = cfg.integrator.step;
  doc["integrator"]["steps"] = cfg.integrator.steps;
  doc["integrator"]["record_every"] = cfg.integrator.record_every;
  doc["integrator"]["newton_tol"] = cfg.integrator.newton_tol;
  doc["integrator"]["newton_max_iter"] = cfg.integrator.newton_max_iter;

  doc["analysis"]["T_total"] = cfg.analysis.T_total;
  doc["analysis"]["tol_torus"] = cfg.analysis.tolerances.tol_torus;
  doc["analysis"]["diophantine"]["gamma"] = cfg.analysis.diophantine.gamma;
  doc["analysis"]["diophantine"]["tau"] = cfg.analysis.diophantine.tau;
  doc["analysis"]["diophantine"]["K_max"] = cfg.analysis.diophantine.K_max;
  doc["analysis"]["resonance"]["gamma"] = cfg.analysis.tolerances.res_gamma;
  doc["analysis"]["resonance"]["K"] = cfg.analysis.tolerances.res_K;

  doc["seed"] = cfg.seed;
  return doc;
}

json reduced_config_json(const SystemConfig& cfg, const Section& section) {
  const ReducedSystem red = reduce(cfg.chart, cfg.hamiltonian, section);
  SystemConfig out{red.chart,
                   SymplecticFormSpec::canonical(red.chart),
                   red.hamiltonian,
                   cfg.integrator,
                   cfg.analysis,
                   cfg.seed};
  return config_to_json(out);
}

}  // namespace kamlab
