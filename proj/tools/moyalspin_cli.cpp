// Scenario runner for the moyalspin library. Talks to the library only
// through the C interface.

#include <moyalspin/moyalspin.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace {

using json = nlohmann::json;

enum Exit : int {
  kOk = 0,
  kConfigInvalid = 2,
  kIOFailure = 3,
  kQuantizerCheckFailed = 10,
  kWignerFailed = 11,
  kStarCheckFailed = 12,
  kLandauFailed = 13,
  kResonanceFailed = 14,
};

const std::vector<std::string> kScenarios = {"quantizer-check", "wigner", "star-check",
                                             "landau", "resonance"};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IOError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Library failure inside a scenario; reported like a configuration error.
struct LibraryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(ms_status st, const char* what) {
  if (st != MS_OK)
    throw LibraryError(std::string(what) + ": " + ms_status_name(st) + ": " + ms_last_error());
}

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

struct ScenarioConfig {
  std::string scenario = "quantizer-check";
  int spin_dim = 2;
  std::string kernel = "cosine";
  std::optional<double> epsilon;  // default per dimension
  ms_grid_spec grid = ms_grid_default();
  ms_em_params physics = ms_em_default();
  int landau_N = 0;
  int lambda0 = 1;
  double p10 = 0.0;
  double p30 = 1.0;
  int wigner_level = 0;
  int wigner_spin_index = 0;
  std::optional<double> a;  // empty means the pure amplitude
  std::optional<double> t_end;
  std::optional<double> dt;
  int star_pairs = 100;
  std::uint64_t seed = 20240601;
  std::string output_path;
  std::string format = "csv";
};

json to_json(const ScenarioConfig& c) {
  json j;
  j["scenario"] = c.scenario;
  j["spin_dim"] = c.spin_dim;
  j["kernel"] = {{"variant", c.kernel},
                 {"epsilon", c.epsilon ? json(*c.epsilon) : json(nullptr)}};
  j["grid"] = {{"d", c.grid.d},
               {"n_points", c.grid.n_points},
               {"length", c.grid.length},
               {"hbar", c.grid.hbar}};
  j["physics"] = {{"m0", c.physics.m0}, {"e0", c.physics.e0},       {"c", c.physics.c},
                  {"B3", c.physics.B3}, {"b", c.physics.b},         {"omega", c.physics.omega},
                  {"mu0", c.physics.mu0}};
  j["landau"] = {{"N", c.landau_N}, {"lambda0", c.lambda0}, {"p10", c.p10}, {"p30", c.p30}};
  j["wigner"] = {{"level", c.wigner_level}, {"spin_index", c.wigner_spin_index}};
  j["resonance"] = {{"a", c.a ? json(*c.a) : json("auto")},
                    {"t_end", c.t_end ? json(*c.t_end) : json(nullptr)},
                    {"dt", c.dt ? json(*c.dt) : json(nullptr)}};
  j["star"] = {{"pairs", c.star_pairs}, {"seed", c.seed}};
  j["output"] = {{"path", c.output_path}, {"format", c.format}};
  return j;
}

template <class T>
T get_as(const json& v, const std::string& key) {
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw ConfigError("");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError("");
    } else {
      if (!v.is_string()) throw ConfigError("");
    }
    return v.get<T>();
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

const json& section(const json& root, const std::string& name,
                    const std::set<std::string>& allowed) {
  static const json empty = json::object();
  if (!root.contains(name)) return empty;
  const json& s = root.at(name);
  if (!s.is_object()) throw ConfigError("config key '" + name + "' must be an object");
  for (const auto& [k, _] : s.items())
    if (!allowed.count(k)) throw ConfigError("unknown config key '" + name + "." + k + "'");
  return s;
}

void apply_json(ScenarioConfig& c, const json& root) {
  if (!root.is_object()) throw ConfigError("config root must be a JSON object");
  static const std::set<std::string> top = {"scenario", "spin_dim", "kernel", "grid",
                                            "physics",  "landau",   "wigner", "resonance",
                                            "star",     "output"};
  for (const auto& [k, _] : root.items())
    if (!top.count(k)) throw ConfigError("unknown config key '" + k + "'");
  if (root.contains("scenario")) c.scenario = get_as<std::string>(root["scenario"], "scenario");
  if (root.contains("spin_dim")) c.spin_dim = get_as<int>(root["spin_dim"], "spin_dim");

  const json& k = section(root, "kernel", {"variant", "epsilon"});
  if (k.contains("variant")) c.kernel = get_as<std::string>(k["variant"], "kernel.variant");
  if (k.contains("epsilon")) {
    if (k["epsilon"].is_null())
      c.epsilon.reset();
    else
      c.epsilon = get_as<double>(k["epsilon"], "kernel.epsilon");
  }

  const json& g = section(root, "grid", {"d", "n_points", "length", "hbar"});
  if (g.contains("d")) c.grid.d = get_as<int>(g["d"], "grid.d");
  if (g.contains("n_points")) c.grid.n_points = get_as<int>(g["n_points"], "grid.n_points");
  if (g.contains("length")) c.grid.length = get_as<double>(g["length"], "grid.length");
  if (g.contains("hbar")) c.grid.hbar = get_as<double>(g["hbar"], "grid.hbar");

  const json& p = section(root, "physics", {"m0", "e0", "c", "B3", "b", "omega", "mu0"});
  const std::map<std::string, double*> fields = {
      {"m0", &c.physics.m0}, {"e0", &c.physics.e0}, {"c", &c.physics.c},
      {"B3", &c.physics.B3}, {"b", &c.physics.b},   {"omega", &c.physics.omega},
      {"mu0", &c.physics.mu0}};
  for (const auto& [name, dst] : fields)
    if (p.contains(name)) *dst = get_as<double>(p[name], "physics." + name);

  const json& l = section(root, "landau", {"N", "lambda0", "p10", "p30"});
  if (l.contains("N")) c.landau_N = get_as<int>(l["N"], "landau.N");
  if (l.contains("lambda0")) c.lambda0 = get_as<int>(l["lambda0"], "landau.lambda0");
  if (l.contains("p10")) c.p10 = get_as<double>(l["p10"], "landau.p10");
  if (l.contains("p30")) c.p30 = get_as<double>(l["p30"], "landau.p30");

  const json& w = section(root, "wigner", {"level", "spin_index"});
  if (w.contains("level")) c.wigner_level = get_as<int>(w["level"], "wigner.level");
  if (w.contains("spin_index"))
    c.wigner_spin_index = get_as<int>(w["spin_index"], "wigner.spin_index");

  const json& r = section(root, "resonance", {"a", "t_end", "dt"});
  if (r.contains("a")) {
    if (r["a"].is_string()) {
      if (r["a"].get<std::string>() != "auto")
        throw ConfigError("config key 'resonance.a' must be a number or \"auto\"");
      c.a.reset();
    } else {
      c.a = get_as<double>(r["a"], "resonance.a");
    }
  }
  auto opt_double = [](const json& v, const std::string& key) -> std::optional<double> {
    if (v.is_null()) return std::nullopt;
    return get_as<double>(v, key);
  };
  if (r.contains("t_end")) c.t_end = opt_double(r["t_end"], "resonance.t_end");
  if (r.contains("dt")) c.dt = opt_double(r["dt"], "resonance.dt");

  const json& s = section(root, "star", {"pairs", "seed"});
  if (s.contains("pairs")) c.star_pairs = get_as<int>(s["pairs"], "star.pairs");
  if (s.contains("seed")) c.seed = get_as<std::uint64_t>(s["seed"], "star.seed");

  const json& o = section(root, "output", {"path", "format"});
  if (o.contains("path")) c.output_path = get_as<std::string>(o["path"], "output.path");
  if (o.contains("format")) c.format = get_as<std::string>(o["format"], "output.format");
}

void load_file(ScenarioConfig& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IOError("cannot read config file '" + path + "'");
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
  apply_json(c, root);
}

std::optional<double> parse_number(const std::string& text, const std::string& flag) {
  double v = 0.0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size())
    throw ConfigError("flag " + flag + " expects a number, got '" + text + "'");
  return v;
}

void validate(const ScenarioConfig& c) {
  bool known = false;
  for (const auto& s : kScenarios) known |= (s == c.scenario);
  if (!known) throw ConfigError("unknown scenario '" + c.scenario + "'");
  if (c.spin_dim < 1) throw ConfigError("spin_dim must be >= 1 (flag --spin-dim)");
  if (c.kernel != "cosine" && c.kernel != "parity")
    throw ConfigError("kernel must be 'parity' or 'cosine' (flag --kernel)");
  if (c.epsilon && !std::isfinite(*c.epsilon))
    throw ConfigError("epsilon must be finite (flag --epsilon)");
  if (ms_grid_validate(&c.grid) != MS_OK)
    throw ConfigError(std::string("invalid grid: ") + ms_last_error());
  if (c.format != "csv" && c.format != "json")
    throw ConfigError("output format must be 'csv' or 'json' (flag --format)");
  if (c.star_pairs < 1) throw ConfigError("star.pairs must be >= 1");
  if (c.wigner_level < 0) throw ConfigError("wigner.level must be >= 0 (flag --level)");
  if (c.wigner_spin_index < 0 || c.wigner_spin_index >= c.spin_dim)
    throw ConfigError("wigner.spin_index must lie in [0, spin_dim) (flag --spin-index)");
  for (const auto* v : {&c.t_end, &c.dt})
    if (*v && !(std::isfinite(**v) && **v > 0.0))
      throw ConfigError("resonance t_end and dt must be positive (flags --t-end, --dt)");
  if (c.a && !std::isfinite(*c.a)) throw ConfigError("resonance amplitude must be finite");
}

struct KernelHandle {
  ms_kernel* k = nullptr;
  ~KernelHandle() { ms_kernel_destroy(k); }
};

ms_kernel* build_kernel(const ScenarioConfig& c, KernelHandle& h) {
  ms_status st;
  if (c.kernel == "parity") {
    const ms_kernel_variant v =
        c.spin_dim % 2 == 1 ? MS_KERNEL_PARITY_ODD : MS_KERNEL_PARITY_EVEN_HALF_ODD;
    st = ms_kernel_create(c.spin_dim, v, 0.0, &h.k);
  } else {
    const double eps = c.epsilon ? *c.epsilon : ms_default_epsilon(c.spin_dim);
    st = ms_kernel_create(c.spin_dim, MS_KERNEL_COSINE, eps, &h.k);
  }
  if (st != MS_OK) throw ConfigError(std::string("kernel: ") + ms_last_error());
  return h.k;
}

json kernel_json(const ms_kernel* k) {
  const int D = ms_kernel_dim(k);
  std::vector<ms_complex> t(static_cast<std::size_t>(D) * D);
  check(ms_kernel_table(k, t.data()), "kernel table");
  json rows = json::array();
  for (int i = 0; i < D; ++i) {
    json row = json::array();
    for (int j = 0; j < D; ++j) row.push_back({t[i * D + j].re, t[i * D + j].im});
    rows.push_back(row);
  }
  const char* names[] = {"parity_odd", "parity_even_half_odd", "cosine", "custom"};
  return {{"variant", names[ms_kernel_get_variant(k)]},
          {"epsilon", ms_kernel_epsilon(k)},
          {"dim", D},
          {"table", rows}};
}

json tolerance_json() {
  const ms_tolerances t = ms_default_tolerances();
  return {{"algebra", t.algebra}, {"star", t.star}, {"state", t.state}, {"purity", t.purity}};
}

// Tabular output: columns and rows of preformatted cells.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct CheckLine {
  std::string name;
  double residual;
  double tolerance;
  bool passed;
  bool required = true;
};

json checks_json(const std::vector<CheckLine>& checks) {
  json arr = json::array();
  for (const auto& c : checks)
    arr.push_back({{"name", c.name},
                   {"residual", c.residual},
                   {"tolerance", c.tolerance},
                   {"passed", c.passed},
                   {"required", c.required}});
  return arr;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IOError("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IOError("write to '" + path + "' failed");
}

void emit(const ScenarioConfig& c, json header, const Table& table) {
  const std::string prefix = c.output_path.empty() ? c.scenario : c.output_path;
  if (c.format == "csv") {
    std::ostringstream csv;
    for (std::size_t i = 0; i < table.columns.size(); ++i)
      csv << (i ? "," : "") << table.columns[i];
    csv << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) csv << (i ? "," : "") << row[i];
      csv << '\n';
    }
    header["data_file"] = prefix + ".csv";
    header["columns"] = table.columns;
    write_text(prefix + ".csv", csv.str());
  } else {
    json data = json::array();
    for (const auto& row : table.rows) {
      json r = json::array();
      for (const auto& cell : row) {
        double v = 0.0;
        const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (res.ec == std::errc() && res.ptr == cell.data() + cell.size())
          r.push_back(v);
        else
          r.push_back(cell);
      }
      data.push_back(r);
    }
    header["columns"] = table.columns;
    header["data"] = data;
  }
  write_text(prefix + ".json", header.dump(2) + "\n");
}

// Reports check lines; returns false if a required check failed.
bool report(const std::vector<CheckLine>& checks) {
  bool ok = true;
  for (const auto& c : checks) {
    const char* tag = c.passed ? "PASS" : (c.required ? "FAIL" : "INFO");
    std::cout << tag << "  " << c.name << "  residual=" << fmt(c.residual)
              << "  tolerance=" << fmt(c.tolerance) << '\n';
    if (!c.passed && c.required) {
      std::cerr << "invariant failure: " << c.name << " (residual " << fmt(c.residual)
                << " > " << fmt(c.tolerance) << ")\n";
      ok = false;
    }
  }
  return ok;
}

json base_header(const ScenarioConfig& c) {
  return {{"scenario", c.scenario},
          {"parameters", to_json(c)},
          {"tolerances", tolerance_json()},
          {"library_version", ms_version()}};
}

std::vector<CheckLine> read_report(ms_report* r) {
  std::vector<CheckLine> out;
  for (std::size_t i = 0; i < ms_report_count(r); ++i) {
    const char* name = nullptr;
    double res = 0, tol = 0;
    int passed = 0, required = 0;
    check(ms_report_entry(r, i, &name, &res, &tol, &passed, &required), "report");
    out.push_back({name, res, tol, passed != 0, required != 0});
  }
  return out;
}

Table checks_table(const std::vector<CheckLine>& checks) {
  Table t{{"check", "residual", "tolerance", "passed", "required"}, {}};
  for (const auto& c : checks)
    t.rows.push_back({c.name, fmt(c.residual), fmt(c.tolerance), c.passed ? "1" : "0",
                      c.required ? "1" : "0"});
  return t;
}

int run_check_suite(const ScenarioConfig& c, bool star) {
  KernelHandle kh;
  ms_kernel* K = build_kernel(c, kh);
  ms_report* r = nullptr;
  if (star)
    check(ms_star_checks(K, c.star_pairs, c.seed, &r), "star checks");
  else
    check(ms_quantizer_checks(K, &r), "quantizer checks");
  std::unique_ptr<ms_report, void (*)(ms_report*)> guard(r, ms_report_destroy);
  const auto checks = read_report(r);
  json header = base_header(c);
  header["kernel"] = kernel_json(K);
  header["checks"] = checks_json(checks);
  const bool ok = report(checks);
  header["all_passed"] = ok;
  emit(c, header, checks_table(checks));
  if (ok) return kOk;
  return star ? kStarCheckFailed : kQuantizerCheckFailed;
}

int run_wigner(const ScenarioConfig& c) {
  KernelHandle kh;
  ms_kernel* K = build_kernel(c, kh);
  const ms_grid_spec g = c.grid;
  const std::size_t P = ms_grid_points(&g);
  const int D = c.spin_dim;

  std::vector<ms_complex> osc(P);
  check(ms_oscillator_state(&g, c.wigner_level, 1.0, 1.0, osc.data()), "oscillator state");
  std::vector<ms_complex> amps(static_cast<std::size_t>(D) * P, ms_complex{0.0, 0.0});
  for (std::size_t q = 0; q < P; ++q) amps[c.wigner_spin_index * P + q] = osc[q];

  ms_wigner* w = nullptr;
  check(ms_wigner_pure(&g, D, amps.data(), K, &w), "full Wigner function");
  std::unique_ptr<ms_wigner, void (*)(ms_wigner*)> guard(w, ms_wigner_destroy);
  std::vector<double> values(ms_wigner_size(w));
  check(ms_wigner_values(w, values.data()), "Wigner values");
  std::vector<double> pos(P), mom(P), num(D), phase(D);
  check(ms_wigner_marginals(w, pos.data(), mom.data(), num.data(), phase.data()), "marginals");

  double pos_err = 0.0, num_err = 0.0;
  for (std::size_t q = 0; q < P; ++q) {
    const double expect = osc[q].re * osc[q].re + osc[q].im * osc[q].im;
    pos_err = std::max(pos_err, std::abs(pos[q] - expect));
  }
  for (int n = 0; n < D; ++n)
    num_err = std::max(num_err, std::abs(num[n] - (n == c.wigner_spin_index ? 1.0 : 0.0)));
  const std::vector<CheckLine> checks = {
      {"normalization", std::abs(ms_wigner_total(w) - 1.0), 1e-8, false},
      {"position_marginal", pos_err, 1e-8, false},
      {"number_marginal", num_err, 1e-8, false}};
  std::vector<CheckLine> judged = checks;
  for (auto& ch : judged) ch.passed = ch.residual <= ch.tolerance;

  Table t;
  t.columns = {"q_index", "p_index"};
  for (int a = 0; a < g.d; ++a) t.columns.push_back("q" + std::to_string(a + 1));
  for (int a = 0; a < g.d; ++a) t.columns.push_back("p" + std::to_string(a + 1));
  for (int m = 0; m < D; ++m)
    for (int n = 0; n < D; ++n)
      t.columns.push_back("W_" + std::to_string(m) + "_" + std::to_string(n));
  auto axis_index = [&](std::size_t flat, int axis) {
    std::size_t stride = 1;
    for (int a = axis + 1; a < g.d; ++a) stride *= static_cast<std::size_t>(g.n_points);
    return static_cast<int>((flat / stride) % static_cast<std::size_t>(g.n_points));
  };
  t.rows.reserve(P * P);
  for (std::size_t q = 0; q < P; ++q) {
    for (std::size_t p = 0; p < P; ++p) {
      std::vector<std::string> row = {std::to_string(q), std::to_string(p)};
      for (int a = 0; a < g.d; ++a) row.push_back(fmt(ms_grid_position(&g, axis_index(q, a))));
      for (int a = 0; a < g.d; ++a) row.push_back(fmt(ms_grid_momentum(&g, axis_index(p, a))));
      for (int m = 0; m < D; ++m)
        for (int n = 0; n < D; ++n)
          row.push_back(fmt(values[((static_cast<std::size_t>(m) * D + n) * P + p) * P + q]));
      t.rows.push_back(std::move(row));
    }
  }

  json header = base_header(c);
  header["kernel"] = kernel_json(K);
  header["state"] = {{"oscillator_level", c.wigner_level}, {"spin_index", c.wigner_spin_index}};
  header["marginals"] = {{"number", num}, {"phase", phase}};
  header["total"] = ms_wigner_total(w);
  header["checks"] = checks_json(judged);
  const bool ok = report(judged);
  header["all_passed"] = ok;
  emit(c, header, t);
  return ok ? kOk : kWignerFailed;
}

ms_landau_mode landau_mode(const ScenarioConfig& c) {
  ms_landau_mode m = ms_landau_default();
  m.N = c.landau_N;
  m.lambda0 = c.lambda0;
  m.p10 = c.p10;
  m.p30 = c.p30;
  m.params = c.physics;
  m.params.hbar = c.grid.hbar;
  return m;
}

int run_landau(const ScenarioConfig& c) {
  const ms_landau_mode mode = landau_mode(c);
  double energy = 0.0, centre = 0.0;
  if (ms_landau_energy(&mode, &energy) != MS_OK)
    throw ConfigError(std::string("landau: ") + ms_last_error());
  check(ms_landau_centre(&mode, &centre), "landau centre");
  ms_landau_residuals res{};
  check(ms_landau_residuals_compute(&mode, &res), "landau residuals");
  double spin[4];
  check(ms_landau_spin_vector(mode.lambda0, spin), "landau spin vector");

  std::vector<CheckLine> checks = {{"ode_residual", res.ode, 1e-9, false},
                                   {"transport_residual", res.transport, 1e-5, false},
                                   {"eigen_p_residual", res.eigen_p, 0.0, false},
                                   {"normalization", res.normalization, 1e-8, false}};
  for (auto& ch : checks) ch.passed = ch.residual <= ch.tolerance;

  const ms_grid_spec g = c.grid;
  Table t{{"p2", "q2", "rho"}, {}};
  for (int j = 0; j < g.n_points; ++j) {
    const double p2 = ms_grid_momentum(&g, j);
    for (int k = 0; k < g.n_points; ++k) {
      const double q2 = centre + ms_grid_position(&g, k);
      double rho = 0.0;
      check(ms_landau_wigner(&mode, p2, q2, &rho), "landau Wigner function");
      t.rows.push_back({fmt(p2), fmt(q2), fmt(rho)});
    }
  }
  json header = base_header(c);
  header["energy"] = energy;
  header["orbit_centre_q2"] = centre;
  header["spin_vector"] = {spin[0], spin[1], spin[2], spin[3]};
  header["checks"] = checks_json(checks);
  const bool ok = report(checks);
  header["all_passed"] = ok;
  std::cout << "E_N = " << fmt(energy) << '\n';
  emit(c, header, t);
  return ok ? kOk : kLandauFailed;
}

int run_resonance(const ScenarioConfig& c) {
  ms_em_params params = c.physics;
  params.hbar = c.grid.hbar;
  double omega_rabi = 0.0, period = 0.0, pure_a = 0.0;
  if (ms_rabi_period(&params, &period) != MS_OK)
    throw ConfigError(std::string("resonance: ") + ms_last_error());
  check(ms_rabi_frequency(&params, &omega_rabi), "Rabi frequency");
  if (ms_pure_amplitude(&params, &pure_a) != MS_OK)
    throw ConfigError(std::string("resonance: ") + ms_last_error());
  const double a = c.a ? *c.a : pure_a;
  const double t_end = c.t_end ? *c.t_end : 10.0 * period;
  const double dt = c.dt ? *c.dt : period / 1000.0;

  ms_trajectory* tr = nullptr;
  double max_dev = 0.0;
  const ms_status st = ms_resonance_compare(&params, a, t_end, dt, &tr, &max_dev);
  if (st != MS_OK) throw ConfigError(std::string("resonance: ") + ms_last_error());
  std::unique_ptr<ms_trajectory, void (*)(ms_trajectory*)> guard(tr, ms_trajectory_destroy);

  double fit_omega = 0.0, fit_amp = 0.0;
  int peaks = 0;
  check(ms_trajectory_rabi_fit(tr, &fit_omega, &fit_amp, &peaks), "Rabi fit");

  Table t{{"t", "gamma0", "gamma1", "gamma2", "p_plus"}, {}};
  double g0norm = 0.0, drift = 0.0;
  for (std::size_t i = 0; i < ms_trajectory_length(tr); ++i) {
    double time = 0.0, g[3];
    check(ms_trajectory_sample(tr, i, &time, g), "trajectory");
    const double n2 = g[0] * g[0] + g[1] * g[1] + g[2] * g[2];
    if (i == 0) g0norm = n2;
    drift = std::max(drift, std::abs(n2 - g0norm));
    t.rows.push_back({fmt(time), fmt(g[0]), fmt(g[1]), fmt(g[2]), fmt(0.5 * (g[1] + 1.0))});
  }

  std::vector<CheckLine> checks = {{"analytic_deviation", max_dev, 1e-6, false},
                                   {"purity_drift", drift, 1e-8, false}};
  if (peaks >= 2) {
    checks.push_back({"rabi_frequency_fit", std::abs(fit_omega / omega_rabi - 1.0), 1e-3, false});
    checks.push_back({"rabi_amplitude_fit", std::abs(fit_amp - a), 1e-6, false});
  }
  for (auto& ch : checks) ch.passed = ch.residual <= ch.tolerance;

  json header = base_header(c);
  header["amplitude"] = a;
  header["pure_amplitude"] = pure_a;
  header["rabi_frequency"] = omega_rabi;
  header["rabi_period"] = period;
  header["t_end"] = t_end;
  header["dt"] = dt;
  header["fit"] = {{"omega", fit_omega}, {"amplitude", fit_amp}, {"peaks", peaks}};
  header["checks"] = checks_json(checks);
  const bool ok = report(checks);
  header["all_passed"] = ok;
  emit(c, header, t);
  return ok ? kOk : kResonanceFailed;
}

int run(const ScenarioConfig& c) {
  if (c.scenario == "quantizer-check") return run_check_suite(c, false);
  if (c.scenario == "star-check") return run_check_suite(c, true);
  if (c.scenario == "wigner") return run_wigner(c);
  if (c.scenario == "landau") return run_landau(c);
  return run_resonance(c);
}

struct Flags {
  std::string config;
  std::optional<int> spin_dim, d, n_points, N, lambda0, level, spin_index, pairs;
  std::optional<std::string> kernel, a, output, format, scenario;
  std::optional<double> epsilon, length, hbar, m0, e0, c, B3, b, omega, mu0, p10, p30, t_end,
      dt;
  std::optional<std::uint64_t> seed;
};

void add_flags(CLI::App& app, Flags& f) {
  app.add_option("--config", f.config, "JSON config file; flags override its values");
  app.add_option("--spin-dim", f.spin_dim, "Hilbert dimension s+1 of the spin factor");
  app.add_option("--kernel", f.kernel, "parity or cosine");
  app.add_option("--epsilon", f.epsilon, "cosine kernel parameter (radians)");
  app.add_option("--d", f.d, "spatial dimension");
  app.add_option("--n-points", f.n_points, "lattice points per axis");
  app.add_option("--length", f.length, "box length per axis");
  app.add_option("--hbar", f.hbar, "Planck constant");
  app.add_option("--m0", f.m0, "mass");
  app.add_option("--e0", f.e0, "charge");
  app.add_option("--c", f.c, "speed of light");
  app.add_option("--B3", f.B3, "static field along axis 3");
  app.add_option("--b", f.b, "rotating field amplitude");
  app.add_option("--omega", f.omega, "drive angular frequency");
  app.add_option("--mu0", f.mu0, "magnetic moment");
  app.add_option("--N", f.N, "Landau level index");
  app.add_option("--lambda0", f.lambda0, "spin quantum number, +1 or -1");
  app.add_option("--p10", f.p10, "conserved momentum p1");
  app.add_option("--p30", f.p30, "conserved momentum p3");
  app.add_option("--a", f.a, "resonance amplitude, a number or 'auto'");
  app.add_option("--t-end", f.t_end, "integration end time");
  app.add_option("--dt", f.dt, "RK4 step");
  app.add_option("--level", f.level, "oscillator level of the wigner scenario state");
  app.add_option("--spin-index", f.spin_index, "number-basis spin state of the wigner scenario");
  app.add_option("--pairs", f.pairs, "random operator pairs for star-check");
  app.add_option("--seed", f.seed, "random seed for star-check");
  app.add_option("--output", f.output, "output prefix; writes PREFIX.csv and PREFIX.json");
  app.add_option("--format", f.format, "csv or json");
}

void apply_flags(ScenarioConfig& c, const Flags& f) {
  if (f.spin_dim) c.spin_dim = *f.spin_dim;
  if (f.kernel) c.kernel = *f.kernel;
  if (f.epsilon) c.epsilon = *f.epsilon;
  if (f.d) c.grid.d = *f.d;
  if (f.n_points) c.grid.n_points = *f.n_points;
  if (f.length) c.grid.length = *f.length;
  if (f.hbar) c.grid.hbar = *f.hbar;
  if (f.m0) c.physics.m0 = *f.m0;
  if (f.e0) c.physics.e0 = *f.e0;
  if (f.c) c.physics.c = *f.c;
  if (f.B3) c.physics.B3 = *f.B3;
  if (f.b) c.physics.b = *f.b;
  if (f.omega) c.physics.omega = *f.omega;
  if (f.mu0) c.physics.mu0 = *f.mu0;
  if (f.N) c.landau_N = *f.N;
  if (f.lambda0) c.lambda0 = *f.lambda0;
  if (f.p10) c.p10 = *f.p10;
  if (f.p30) c.p30 = *f.p30;
  if (f.a) {
    if (*f.a == "auto")
      c.a.reset();
    else
      c.a = parse_number(*f.a, "--a");
  }
  if (f.t_end) c.t_end = *f.t_end;
  if (f.dt) c.dt = *f.dt;
  if (f.level) c.wigner_level = *f.level;
  if (f.spin_index) c.wigner_spin_index = *f.spin_index;
  if (f.pairs) c.star_pairs = *f.pairs;
  if (f.seed) c.seed = *f.seed;
  if (f.output) c.output_path = *f.output;
  if (f.format) c.format = *f.format;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-space quantum mechanics with spin: scenario runner"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags flags;
  add_flags(app, flags);

  std::vector<CLI::App*> subs;
  for (const auto& name : kScenarios) subs.push_back(app.add_subcommand(name, "run " + name));
  CLI::App* run_cmd = app.add_subcommand("run", "run the scenario named in the config");
  CLI::App* emit_cmd =
      app.add_subcommand("emit-config", "print the resolved configuration as canonical JSON");
  emit_cmd->add_option("--scenario", flags.scenario, "scenario recorded in the config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigInvalid;
  }

  try {
    ScenarioConfig cfg;
    if (!flags.config.empty()) load_file(cfg, flags.config);
    apply_flags(cfg, flags);
    for (std::size_t i = 0; i < subs.size(); ++i)
      if (subs[i]->parsed()) cfg.scenario = kScenarios[i];
    if (emit_cmd->parsed() && flags.scenario) cfg.scenario = *flags.scenario;
    validate(cfg);

    if (emit_cmd->parsed()) {
      std::cout << to_json(cfg).dump(2) << '\n';
      return kOk;
    }
    (void)run_cmd;
    return run(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "ConfigInvalid: " << e.what() << '\n';
    return kConfigInvalid;
  } catch (const LibraryError& e) {
    std::cerr << "ConfigInvalid: " << e.what() << '\n';
    return kConfigInvalid;
  } catch (const IOError& e) {
    std::cerr << "IOFailure: " << e.what() << '\n';
    return kIOFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigInvalid;
  }
}
