#include "sparsetone/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sparsetone/errors.hpp"

namespace sparsetone {

using json = nlohmann::ordered_json;

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> known, const char* what) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok) throw ConfigError(std::string(what) + ": unknown key '" + it.key() + "'");
  }
}

json parse(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw ConfigError(std::string(what) + ": invalid JSON");
  return j;
}

}  // namespace

std::string signal_to_json(const FourierSparseSignal& sig, double T, double F) {
  json j;
  j["tones"] = json::array();
  for (const Tone& t : sig.tones()) {
    j["tones"].push_back({{"f", t.freq}, {"re", t.amp.real()}, {"im", t.amp.imag()}});
  }
  j["T"] = T;
  j["F"] = F;
  return j.dump(2) + "\n";
}

SignalFile signal_from_json(const std::string& text) {
  const json j = parse(text, "signal");
  reject_unknown(j, {"tones", "T", "F"}, "signal");
  if (!j.contains("tones") || !j["tones"].is_array() || j["tones"].empty())
    throw ConfigError("signal: 'tones' array required");
  std::vector<Tone> tones;
  for (const json& t : j["tones"]) {
    reject_unknown(t, {"f", "re", "im"}, "signal tone");
    tones.push_back({t.at("f").get<double>(), cplx{t.at("re").get<double>(), t.value("im", 0.0)}});
  }
  SignalFile out{FourierSparseSignal(std::move(tones)), j.value("T", 1.0), j.value("F", 0.0)};
  if (out.F == 0.0) {
    for (const Tone& t : out.signal.tones()) out.F = std::max(out.F, std::abs(t.freq));
    out.F = std::max(out.F, 1.0);
  }
  return out;
}

std::string model_to_json(const MixedBasisModel& model) {
  json j;
  j["terms"] = json::array();
  for (const MixedTerm& mt : model.terms()) {
    json coeffs = json::array();
    for (const cplx& c : mt.poly.coeffs()) coeffs.push_back({c.real(), c.imag()});
    j["terms"].push_back({{"f", mt.freq}, {"t0", mt.poly.t0()}, {"t1", mt.poly.t1()}, {"coeffs", coeffs}});
  }
  return j.dump(2) + "\n";
}

MixedBasisModel model_from_json(const std::string& text) {
  const json j = parse(text, "model");
  reject_unknown(j, {"terms"}, "model");
  std::vector<MixedTerm> terms;
  for (const json& t : j.at("terms")) {
    reject_unknown(t, {"f", "t0", "t1", "coeffs"}, "model term");
    std::vector<cplx> coeffs;
    for (const json& c : t.at("coeffs")) coeffs.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
    terms.push_back({t.at("f").get<double>(), Polynomial(std::move(coeffs), t.at("t0").get<double>(),
                                                         t.at("t1").get<double>())});
  }
  return MixedBasisModel(std::move(terms));
}

std::string report_to_json(const RecoveryReport& rep) {
  json j;
  j["model"] = json::parse(model_to_json(rep.model));
  j["n_samples"] = rep.n_samples;
  j["err_T"] = rep.err_T;
  j["noise_level"] = rep.noise_level;
  j["seed"] = rep.seed;
  j["wall_time_ms"] = rep.wall_time_ms;
  return j.dump(2) + "\n";
}

RecoveryConfig config_from_json(const std::string& text, const RecoveryConfig& base) {
  const json j = parse(text, "config");
  reject_unknown(j,
                 {"T", "F", "k", "delta", "Delta", "Delta_h", "B", "seed", "c_delta", "repeat_scale", "r_loc",
                  "t_regions", "c_beta", "alpha", "bin_floor", "degree_cap", "c_m", "m_cap", "m_floor",
                  "stage_runs", "boost_runs", "list_cap", "h_c1", "h_s1_min", "h_ell", "h_s1", "g_c2", "g_l"},
                 "config");
  RecoveryConfig c = base;
  c.T = j.value("T", c.T);
  c.F = j.value("F", c.F);
  c.k = j.value("k", c.k);
  c.delta = j.value("delta", c.delta);
  c.Delta = j.value("Delta", c.Delta);
  c.Delta_h = j.value("Delta_h", c.Delta_h);
  c.B = j.value("B", c.B);
  c.seed = j.value("seed", c.seed);
  c.c_delta = j.value("c_delta", c.c_delta);
  c.repeat_scale = j.value("repeat_scale", c.repeat_scale);
  c.r_loc = j.value("r_loc", c.r_loc);
  c.t_regions = j.value("t_regions", c.t_regions);
  c.c_beta = j.value("c_beta", c.c_beta);
  c.alpha = j.value("alpha", c.alpha);
  c.bin_floor = j.value("bin_floor", c.bin_floor);
  c.degree_cap = j.value("degree_cap", c.degree_cap);
  c.c_m = j.value("c_m", c.c_m);
  c.m_cap = j.value("m_cap", c.m_cap);
  c.m_floor = j.value("m_floor", c.m_floor);
  c.stage_runs = j.value("stage_runs", c.stage_runs);
  c.boost_runs = j.value("boost_runs", c.boost_runs);
  c.list_cap = j.value("list_cap", c.list_cap);
  c.h_knobs.c1 = j.value("h_c1", c.h_knobs.c1);
  c.h_knobs.s1_min = j.value("h_s1_min", c.h_knobs.s1_min);
  c.h_knobs.ell_override = j.value("h_ell", c.h_knobs.ell_override);
  c.h_knobs.s1_override = j.value("h_s1", c.h_knobs.s1_override);
  c.g_knobs.c2 = j.value("g_c2", c.g_knobs.c2);
  c.g_knobs.l_override = j.value("g_l", c.g_knobs.l_override);
  c.validate();
  return c;
}

std::string config_to_json(const RecoveryConfig& cfg) {
  json j;
  j["T"] = cfg.T;
  j["F"] = cfg.F;
  j["k"] = cfg.k;
  j["delta"] = cfg.delta;
  j["Delta"] = cfg.Delta;
  j["Delta_h"] = cfg.Delta_h;
  j["B"] = cfg.B;
  j["seed"] = cfg.seed;
  j["c_delta"] = cfg.c_delta;
  j["repeat_scale"] = cfg.repeat_scale;
  j["r_loc"] = cfg.r_loc;
  j["t_regions"] = cfg.t_regions;
  j["c_beta"] = cfg.c_beta;
  j["alpha"] = cfg.alpha;
  j["bin_floor"] = cfg.bin_floor;
  j["degree_cap"] = cfg.degree_cap;
  j["c_m"] = cfg.c_m;
  j["m_cap"] = cfg.m_cap;
  j["m_floor"] = cfg.m_floor;
  j["stage_runs"] = cfg.stage_runs;
  j["boost_runs"] = cfg.boost_runs;
  j["list_cap"] = cfg.list_cap;
  return j.dump(2) + "\n";
}

std::string samples_to_csv(const std::vector<double>& ts, const std::vector<cplx>& vals) {
  std::ostringstream os;
  os.precision(17);
  os << "t,re,im\n";
  for (size_t i = 0; i < ts.size(); ++i)
    os << ts[i] << "," << vals[i].real() << "," << vals[i].imag() << "\n";
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write file: " + path);
  out << content;
}

}  // namespace sparsetone
