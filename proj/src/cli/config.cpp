#include "randop/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "randop/errors.hpp"
#include "randop/estimators.hpp"

namespace randop::cli {

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

std::string at_index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw ConfigError(path + ": " + msg); }

double as_number(const Json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path, "expected a finite number");
  return x;
}

std::int64_t as_integer(const Json& v, const std::string& path, std::int64_t min_value) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
    fail(path, "integer out of range");
  const auto x = v.get<std::int64_t>();
  if (x < min_value) fail(path, "must be >= " + std::to_string(min_value));
  return x;
}

std::uint64_t as_seed(const Json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  fail(path, "expected a non-negative 64-bit integer");
}

std::string as_string(const Json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

const Json& as_array(const Json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array");
  return v;
}

std::vector<double> number_list(const Json& v, const std::string& path) {
  std::vector<double> out;
  for (std::size_t i = 0; i < as_array(v, path).size(); ++i) out.push_back(as_number(v[i], at_index(path, i)));
  return out;
}

std::vector<std::int64_t> integer_list(const Json& v, const std::string& path, std::int64_t min_value) {
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < as_array(v, path).size(); ++i) out.push_back(as_integer(v[i], at_index(path, i), min_value));
  return out;
}

// Tracks which keys of one JSON object were consumed; finish() rejects the rest.
class Fields {
 public:
  Fields(const Json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) fail(path_.empty() ? "config" : path_, "expected an object");
  }

  const std::string& path() const { return path_; }
  std::string path(const std::string& key) const { return join(path_, key); }

  const Json* find(const std::string& key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  const Json& require(const std::string& key) {
    const Json* v = find(key);
    if (!v) fail(path(key), "missing required key");
    return *v;
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (!seen_.count(it.key())) fail(path(it.key()), "unknown key");
  }

 private:
  const Json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

Interval parse_interval(const Json& v, const std::string& path) {
  const auto ends = number_list(v, path);
  if (ends.size() != 2) fail(path, "expected [lo, hi]");
  if (!(ends[1] > ends[0])) fail(path, "interval must have hi > lo");
  return {ends[0], ends[1]};
}

// Either an explicit list or {"start", "stop", "count"} (inclusive, evenly spaced).
std::vector<double> parse_energies(const Json& v, const std::string& path, Json& echo) {
  if (v.is_array()) {
    auto e = number_list(v, path);
    if (e.empty()) fail(path, "energy list is empty");
    echo = v;
    return e;
  }
  Fields f(v, path);
  const double start = as_number(f.require("start"), f.path("start"));
  const double stop = as_number(f.require("stop"), f.path("stop"));
  const auto count = as_integer(f.require("count"), f.path("count"), 1);
  f.finish();
  if (count > 1 && !(stop > start)) fail(path, "grid needs stop > start");
  std::vector<double> e;
  for (std::int64_t k = 0; k < count; ++k)
    e.push_back(count == 1 ? start : start + (stop - start) * static_cast<double>(k) / static_cast<double>(count - 1));
  echo = Json{{"start", start}, {"stop", stop}, {"count", count}};
  return e;
}

BackgroundOperator parse_background(const Json& v, const std::string& path, std::size_t dim, Json& echo) {
  Fields f(v, path);
  const auto type = as_string(f.require("type"), f.path("type"));
  echo = Json{{"type", type}};
  BackgroundOperator op;
  if (type == "laplacian") {
    op = LaplacianHopping{};
  } else if (type == "none") {
    op = NoHopping{};
  } else if (type == "periodic") {
    const auto period = integer_list(f.require("period"), f.path("period"), 1);
    if (period.size() != dim) fail(f.path("period"), "needs one entry per dimension");
    const auto values = number_list(f.require("values"), f.path("values"));
    echo["period"] = period;
    echo["values"] = values;
    op = PeriodicPotential{period, values};
  } else if (type == "magnetic") {
    const double flux = as_number(f.require("flux"), f.path("flux"));
    const Json* bp = f.find("bond_phase");
    const double bond_phase = bp ? as_number(*bp, f.path("bond_phase")) : 0.0;
    echo["flux"] = flux;
    echo["bond_phase"] = bond_phase;
    op = landau_gauge(flux, bond_phase);
  } else if (type == "decaying") {
    const Json* amp = f.find("amplitude");
    const double amplitude = amp ? as_number(*amp, f.path("amplitude")) : 1.0;
    const double rate = as_number(f.require("rate"), f.path("rate"));
    std::optional<double> radius;
    if (const Json* r = f.find("radius")) radius = as_number(*r, f.path("radius"));
    echo["amplitude"] = amplitude;
    echo["rate"] = rate;
    if (radius) echo["radius"] = *radius;
    op = DecayingHopping{amplitude, rate, radius};
  } else {
    fail(f.path("type"), "unknown background '" + type + "' (laplacian, periodic, magnetic, decaying, none)");
  }
  f.finish();
  return op;
}

DisorderDensity parse_density(const Json& v, const std::string& path, Json& echo) {
  Fields f(v, path);
  const auto type = as_string(f.require("type"), f.path("type"));
  try {
    if (type == "uniform") {
      const double lo = as_number(f.require("lower"), f.path("lower"));
      const double hi = as_number(f.require("upper"), f.path("upper"));
      f.finish();
      echo = Json{{"type", type}, {"lower", lo}, {"upper", hi}};
      return DisorderDensity::uniform(lo, hi);
    }
    if (type == "piecewise") {
      auto bp = number_list(f.require("breakpoints"), f.path("breakpoints"));
      auto w = number_list(f.require("weights"), f.path("weights"));
      f.finish();
      echo = Json{{"type", type}, {"breakpoints", bp}, {"weights", w}};
      return DisorderDensity::piecewise(std::move(bp), std::move(w));
    }
  } catch (const InvalidArgument& e) {
    fail(path, e.what());
  }
  fail(f.path("type"), "unknown density '" + type + "' (uniform, piecewise)");
}

LatticeBox make_box(const std::vector<std::int64_t>& sides, const std::string& path) {
  try {
    return LatticeBox(sides);
  } catch (const InvalidArgument& e) {
    fail(path, e.what());
  }
}

ModelSpec parse_model(const Json& v, Json& echo) {
  Fields f(v, "model");
  const auto sides = integer_list(f.require("sides"), f.path("sides"), 1);
  if (sides.empty()) fail(f.path("sides"), "needs at least one side");
  if (const Json* d = f.find("dimension")) {
    if (as_integer(*d, f.path("dimension"), 1) != static_cast<std::int64_t>(sides.size()))
      fail(f.path("dimension"), "does not match the number of sides");
  }
  const Json& bg_json = f.require("background");
  const Json& density_json = f.require("density");
  f.finish();

  auto box = make_box(sides, f.path("sides"));
  Json bg_echo, density_echo;
  auto op = parse_background(bg_json, f.path("background"), sides.size(), bg_echo);
  auto density = parse_density(density_json, f.path("density"), density_echo);
  try {
    (void)build_background(LatticeBox(std::vector<std::int64_t>(sides.size(), 2)), op);
  } catch (const InvalidArgument& e) {
    fail(f.path("background"), e.what());
  }
  echo = Json{{"dimension", sides.size()}, {"sides", sides}, {"background", bg_echo}, {"density", density_echo}};
  return ModelSpec{std::move(box), std::move(op), std::move(density)};
}

std::vector<SiteIndex> parse_delta(const Json& v, const std::string& path, SiteIndex volume) {
  const auto sites = integer_list(v, path, 0);
  if (sites.empty()) fail(path, "Delta must not be empty");
  std::set<SiteIndex> distinct;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (sites[i] >= volume) fail(at_index(path, i), "site index outside the box (volume " + std::to_string(volume) + ")");
    if (!distinct.insert(sites[i]).second) fail(at_index(path, i), "duplicate site");
  }
  return sites;
}

bool uses_samples(const std::string& type) { return type != "identities"; }

ExperimentParams parse_experiment(Fields& f, const std::string& type, const std::optional<ModelSpec>& model,
                                  Json& echo) {
  const auto& p = f.path();
  auto number = [&](const std::string& key) { return as_number(f.require(key), f.path(key)); };
  auto number_or = [&](const std::string& key, double fallback) {
    const Json* v = f.find(key);
    return v ? as_number(*v, f.path(key)) : fallback;
  };
  auto positive = [&](const std::string& key, double x) {
    if (!(x > 0)) fail(f.path(key), "must be > 0");
    return x;
  };

  if (type == "minami") {
    MinamiParams m;
    const Json* interval = f.find("interval");
    const Json* energy = f.find("energy");
    const Json* eps = f.find("eps");
    if (interval) {
      if (energy || eps) fail(p, "give either interval or energy/eps, not both");
      const auto j = parse_interval(*interval, f.path("interval"));
      m.z = wegner_energy(j);
      echo["interval"] = {j.lo, j.hi};
    } else {
      if (!energy) fail(f.path("energy"), "missing required key (or give interval)");
      if (!eps) fail(f.path("eps"), "missing required key (or give interval)");
      const double e = as_number(*energy, f.path("energy"));
      const double ep = positive("eps", as_number(*eps, f.path("eps")));
      m.z = ComplexEnergy(e, ep);
      echo["energy"] = e;
      echo["eps"] = ep;
    }
    const Json& d = f.require("delta");
    const auto path = f.path("delta");
    const auto volume = model->box.volume();
    if (as_array(d, path).empty()) fail(path, "Delta must not be empty");
    if (d[0].is_array()) {
      for (std::size_t i = 0; i < d.size(); ++i) m.deltas.push_back(parse_delta(d[i], at_index(path, i), volume));
    } else {
      m.deltas.push_back(parse_delta(d, path, volume));
    }
    echo["delta"] = m.deltas;
    return m;
  }
  if (type == "wegner") {
    WegnerParams w;
    w.interval = parse_interval(f.require("interval"), f.path("interval"));
    const Json& n = f.require("n");
    if (n.is_array()) {
      if (n.empty()) fail(f.path("n"), "level list is empty");
      for (auto k : integer_list(n, f.path("n"), 1)) w.levels.push_back(static_cast<int>(k));
    } else {
      w.levels.push_back(static_cast<int>(as_integer(n, f.path("n"), 1)));
    }
    echo["interval"] = {w.interval.lo, w.interval.hi};
    echo["n"] = w.levels;
    return w;
  }
  if (type == "ids") {
    IdsParams i;
    Json e;
    i.energies = parse_energies(f.require("energies"), f.path("energies"), e);
    echo["energies"] = e;
    return i;
  }
  if (type == "dos") {
    DosParams d;
    Json e;
    d.energies = parse_energies(f.require("energies"), f.path("energies"), e);
    d.h = positive("h", number_or("h", 0.05));
    echo["energies"] = e;
    echo["h"] = d.h;
    return d;
  }
  if (type == "spacing") {
    SpacingParams s;
    s.energy = number("energy");
    s.window = positive("window", number("window"));
    s.h = positive("h", number_or("h", 0.05));
    echo["energy"] = s.energy;
    echo["window"] = s.window;
    echo["h"] = s.h;
    if (const Json* sched = f.find("box_schedule")) {
      const auto path = f.path("box_schedule");
      if (as_array(*sched, path).empty()) fail(path, "schedule is empty");
      for (std::size_t i = 0; i < sched->size(); ++i) {
        auto sides = integer_list((*sched)[i], at_index(path, i), 1);
        if (sides.size() != static_cast<std::size_t>(model->box.dimension())) fail(at_index(path, i), "dimension differs from model.sides");
        (void)make_box(sides, at_index(path, i));
        s.box_schedule.push_back(std::move(sides));
      }
      echo["box_schedule"] = s.box_schedule;
    }
    return s;
  }
  if (type == "fracmoment") {
    FracMomentParams fm;
    fm.energy = number("energy");
    fm.eps = positive("eps", number("eps"));
    fm.s = number_or("s", 0.5);
    if (!(fm.s > 0 && fm.s < 1)) fail(f.path("s"), "must lie in (0, 1)");
    if (model->box.sides().front() < 4) fail("model.sides[0]", "fracmoment needs side >= 4 along axis 0");
    echo["energy"] = fm.energy;
    echo["eps"] = fm.eps;
    echo["s"] = fm.s;
    return fm;
  }
  IdentitiesParams id;
  auto count = [&](const std::string& key, std::int64_t fallback, std::int64_t min_value) {
    const Json* v = f.find(key);
    return v ? as_integer(*v, f.path(key), min_value) : fallback;
  };
  id.triples = static_cast<std::size_t>(count("triples", 1000, 1));
  id.max_volume = count("max_volume", 64, 2);
  id.minor_matrices_per_size = static_cast<std::size_t>(count("minor_matrices_per_size", 20, 1));
  id.minor_max_size = count("minor_max_size", 10, 1);
  if (id.minor_max_size > kBruteForceMinorLimit)
    fail(f.path("minor_max_size"), "brute force is capped at " + std::to_string(kBruteForceMinorLimit));
  echo["triples"] = id.triples;
  echo["max_volume"] = id.max_volume;
  echo["minor_matrices_per_size"] = id.minor_matrices_per_size;
  echo["minor_max_size"] = id.minor_max_size;
  return id;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"minami",  "wegner",     "ids",       "dos",
                                                 "spacing", "fracmoment", "identities"};
  return names;
}

Format parse_format(const std::string& name) {
  if (name == "json-lines" || name == "jsonl") return Format::json_lines;
  if (name == "csv") return Format::csv;
  throw ConfigError("runtime.format: unknown format '" + name + "' (json-lines, csv)");
}

std::string format_name(Format f) { return f == Format::csv ? "csv" : "json-lines"; }

ExperimentConfig parse_config(const Json& doc, const Overrides& overrides) {
  Fields top(doc, "");
  const Json* model_json = top.find("model");
  const Json* experiment_json = top.find("experiment");
  const Json* runtime_json = top.find("runtime");
  top.finish();

  ExperimentConfig cfg;

  // experiment type first: it decides whether a model is needed
  Json experiment_block = experiment_json ? *experiment_json : Json::object();
  if (!experiment_block.is_object()) fail("experiment", "expected an object");
  if (overrides.experiment) {
    const auto it = experiment_block.find("type");
    if (it == experiment_block.end() || !it->is_string() || it->get<std::string>() != *overrides.experiment)
      experiment_block = Json{{"type", *overrides.experiment}};
  } else if (!experiment_json) {
    fail("experiment", "missing required block");
  }
  Fields ef(experiment_block, "experiment");
  const auto type = as_string(ef.require("type"), ef.path("type"));
  if (std::find(experiment_names().begin(), experiment_names().end(), type) == experiment_names().end())
    fail(ef.path("type"), "unknown experiment '" + type + "'");
  cfg.experiment = type;

  Json model_echo;
  if (model_json) {
    cfg.model = parse_model(*model_json, model_echo);
  } else if (type != "identities") {
    fail("model", "missing required block");
  }

  Json experiment_echo{{"type", type}};
  if (uses_samples(type)) {
    const Json* s = ef.find("samples");
    cfg.samples = s ? static_cast<std::size_t>(as_integer(*s, ef.path("samples"), 1)) : 1000;
    if (overrides.samples) {
      if (*overrides.samples < 1) fail("--samples", "must be >= 1");
      cfg.samples = *overrides.samples;
    }
    experiment_echo["samples"] = cfg.samples;
  }
  cfg.params = parse_experiment(ef, type, cfg.model, experiment_echo);
  ef.finish();

  if (runtime_json) {
    Fields rf(*runtime_json, "runtime");
    if (const Json* v = rf.find("seed")) cfg.seed = as_seed(*v, rf.path("seed"));
    if (const Json* v = rf.find("workers")) cfg.workers = static_cast<int>(as_integer(*v, rf.path("workers"), 1));
    if (const Json* v = rf.find("out")) cfg.out = as_string(*v, rf.path("out"));
    if (const Json* v = rf.find("format")) cfg.format = parse_format(as_string(*v, rf.path("format")));
    rf.finish();
  }
  if (overrides.seed) cfg.seed = *overrides.seed;
  if (overrides.workers) {
    if (*overrides.workers < 1) fail("--workers", "must be >= 1");
    cfg.workers = *overrides.workers;
  }
  if (overrides.out) cfg.out = *overrides.out;
  if (overrides.format) cfg.format = parse_format(*overrides.format);

  if (cfg.model) cfg.echo["model"] = model_echo;
  cfg.echo["experiment"] = experiment_echo;
  cfg.echo["runtime"] = Json{{"seed", cfg.seed}};
  return cfg;
}

ExperimentConfig load_config(const std::string& path, const Overrides& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config: cannot open '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("--config: " + path + ": " + e.what());
  }
  return parse_config(doc, overrides);
}

ExperimentConfig default_config(const Overrides& overrides) {
  if (!overrides.experiment) throw ConfigError("--config: required unless --experiment identities is given");
  return parse_config(Json::object(), overrides);
}

}  // namespace randop::cli
