#include "randop/cli/run.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "randop/errors.hpp"
#include "randop/estimators.hpp"
#include "randop/identity_suite.hpp"

namespace randop::cli {

namespace {

const char* verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

Record start_record(const ExperimentConfig& cfg, const std::string& kind) {
  return Record{{"schema", kSchemaTag}, {"experiment", cfg.experiment}, {"record", kind}, {"seed", cfg.seed}};
}

void put_estimate(Record& r, const McEstimate& e) {
  r["mean"] = e.mean;
  r["stderr"] = e.std_error;
  r["samples"] = e.samples;
}

void put_bound(Record& r, const BoundCheck& c) {
  put_estimate(r, c.estimate);
  r["bound"] = c.bound;
  r["slack"] = c.slack;
  r["z_score"] = c.z_score;
  r["verdict"] = verdict(c.pass);
}

McConfig mc_config(const ExperimentConfig& cfg, const ModelSpec& model) {
  return McConfig{model, cfg.samples, cfg.seed, Execution{cfg.workers, Backend::openmp}};
}

void run_minami(const ExperimentConfig& cfg, const MinamiParams& p, std::vector<Record>& out) {
  const auto mc = mc_config(cfg, *cfg.model);
  for (const auto& delta : p.deltas) {
    const auto c = mc_minami(mc, p.z, delta);
    auto r = start_record(cfg, "bound_check");
    r["n"] = delta.size();
    r["delta"] = delta;
    r["energy"] = p.z.energy();
    r["eps"] = p.z.eps();
    put_bound(r, c);
    out.push_back(std::move(r));
  }
}

void run_wegner(const ExperimentConfig& cfg, const WegnerParams& p, std::vector<Record>& out) {
  const auto mc = mc_config(cfg, *cfg.model);
  const int n_max = *std::max_element(p.levels.begin(), p.levels.end());
  const auto levels = mc_wegner_levels(mc, p.interval, n_max);
  for (int n : p.levels) {
    auto r = start_record(cfg, "bound_check");
    r["n"] = n;
    r["interval_lo"] = p.interval.lo;
    r["interval_hi"] = p.interval.hi;
    r["volume"] = cfg.model->box.volume();
    put_bound(r, levels.checks[static_cast<std::size_t>(n - 1)]);
    r["zero_count_frequency"] = levels.zero_count_frequency;
    // keep verdict after the statistic-specific fields
    const auto v = r["verdict"];
    r.erase("verdict");
    r["verdict"] = v;
    out.push_back(std::move(r));
  }
}

void run_curve(const ExperimentConfig& cfg, const std::vector<double>& energies, const std::vector<McEstimate>& est,
               std::optional<double> h, std::vector<Record>& out) {
  for (std::size_t k = 0; k < energies.size(); ++k) {
    auto r = start_record(cfg, cfg.experiment);
    r["energy"] = energies[k];
    if (h) r["h"] = *h;
    put_estimate(r, est[k]);
    r["verdict"] = nullptr;
    out.push_back(std::move(r));
  }
}

void run_spacing(const ExperimentConfig& cfg, const SpacingParams& p, std::vector<Record>& out) {
  std::vector<std::vector<std::int64_t>> schedule = p.box_schedule;
  if (schedule.empty()) schedule.push_back(cfg.model->box.sides());
  for (const auto& sides : schedule) {
    ModelSpec model = *cfg.model;
    model.box = LatticeBox(sides);
    const auto st = spacing_experiment(mc_config(cfg, model), p.energy, p.window, p.h);
    auto r = start_record(cfg, "spacing");
    r["sides"] = sides;
    r["volume"] = model.box.volume();
    r["energy"] = st.energy;
    r["window"] = st.window;
    r["intensity"] = st.intensity;
    r["intensity_stderr"] = st.intensity_stderr;
    r["h"] = st.bandwidth;
    r["samples"] = cfg.samples;
    r["gaps"] = st.gaps.size();
    r["pooled_points"] = st.pooled_points;
    r["ks_distance"] = st.ks_distance;
    r["chi_square"] = st.count_test.statistic;
    r["dof"] = st.count_test.dof;
    r["p_value"] = st.count_test.p_value;
    r["verdict"] = nullptr;
    out.push_back(std::move(r));
    for (const auto& bin : st.count_test.bins) {
      auto b = start_record(cfg, "spacing.histogram");
      b["sides"] = sides;
      b["volume"] = model.box.volume();
      b["count_lo"] = bin.lo;
      if (bin.hi == SIZE_MAX)
        b["count_hi"] = nullptr;
      else
        b["count_hi"] = bin.hi;
      b["observed"] = bin.observed;
      b["expected"] = bin.expected;
      b["verdict"] = nullptr;
      out.push_back(std::move(b));
    }
  }
}

void run_fracmoment(const ExperimentConfig& cfg, const FracMomentParams& p, std::vector<Record>& out) {
  const auto fit = frac_moment_decay(mc_config(cfg, *cfg.model), p.energy, p.eps, p.s);
  auto r = start_record(cfg, "fracmoment");
  r["energy"] = p.energy;
  r["eps"] = p.eps;
  r["s"] = p.s;
  r["samples"] = cfg.samples;
  r["distances"] = fit.distances;
  r["mean_moments"] = fit.mean_moments;
  r["moment_stderr"] = fit.moment_stderr;
  r["fitted_points"] = fit.fitted_points;
  r["below_floor"] = fit.below_floor;
  r["slope"] = fit.slope;
  r["intercept"] = fit.intercept;
  r["r_squared"] = fit.r_squared;
  r["note"] = "x is site 0; y runs over every site on axis 0, not only the box boundary";
  r["verdict"] = nullptr;
  out.push_back(std::move(r));
}

void run_identities(const ExperimentConfig& cfg, const IdentitiesParams& p, std::vector<Record>& out) {
  const auto rep = run_identity_suite(cfg.seed, p.triples, Execution{cfg.workers, Backend::openmp});
  auto r = start_record(cfg, "identity_suite");
  r["triples"] = rep.triples;
  r["max_volume"] = p.max_volume;
  r["max_krein"] = rep.max_krein;
  r["max_krein_scaled"] = rep.max_krein_scaled;
  r["max_det_identity"] = rep.max_det_identity;
  r["max_schur"] = rep.max_schur;
  r["min_positivity_g"] = rep.min_positivity_g;
  r["min_positivity_gtilde"] = rep.min_positivity_gtilde;
  r["worst_krein_triple"] = rep.worst_krein_triple;
  r["worst_det_triple"] = rep.worst_det_triple;
  r["worst_schur_triple"] = rep.worst_schur_triple;
  const bool pass = rep.max_krein <= 1e-9 && rep.max_det_identity <= 1e-8 && rep.max_schur <= 1e-9 &&
                    rep.min_positivity_g > -1e-12 && rep.min_positivity_gtilde > -1e-12;
  r["verdict"] = verdict(pass);
  out.push_back(std::move(r));

  const auto minors = run_minor_sum_suite(cfg.seed, p.minor_matrices_per_size, p.minor_max_size);
  auto m = start_record(cfg, "minor_sum");
  m["max_size"] = p.minor_max_size;
  m["comparisons"] = minors.comparisons;
  m["worst_normalized"] = minors.worst_normalized;
  m["worst_relative"] = minors.worst_relative;
  m["threshold"] = 1e-9;
  m["verdict"] = verdict(minors.worst_normalized <= 1e-9);
  out.push_back(std::move(m));

  for (const auto& c : run_oracle_suite(cfg.seed)) {
    auto o = start_record(cfg, "oracle");
    o["check"] = c.name;
    o["draws"] = c.draws;
    o["excluded"] = c.excluded;
    o["value"] = c.value;
    o["threshold"] = c.threshold;
    o["error_estimate"] = c.error_estimate;
    o["verdict"] = verdict(c.pass);
    out.push_back(std::move(o));
  }
}

}  // namespace

std::vector<Record> execute(const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Record> out;
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, MinamiParams>) {
          run_minami(cfg, p, out);
        } else if constexpr (std::is_same_v<P, WegnerParams>) {
          run_wegner(cfg, p, out);
        } else if constexpr (std::is_same_v<P, IdsParams>) {
          run_curve(cfg, p.energies, ids_curve(mc_config(cfg, *cfg.model), p.energies), std::nullopt, out);
        } else if constexpr (std::is_same_v<P, DosParams>) {
          run_curve(cfg, p.energies, dos_curve(mc_config(cfg, *cfg.model), p.energies, p.h), p.h, out);
        } else if constexpr (std::is_same_v<P, SpacingParams>) {
          run_spacing(cfg, p, out);
        } else if constexpr (std::is_same_v<P, FracMomentParams>) {
          run_fracmoment(cfg, p, out);
        } else {
          run_identities(cfg, p, out);
        }
      },
      cfg.params);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (auto& r : out) {
    r["config"] = cfg.echo;
    r["duration_s"] = seconds;
  }
  return out;
}

bool any_failed(const std::vector<Record>& records) {
  for (const auto& r : records) {
    const auto it = r.find("verdict");
    if (it != r.end() && it->is_string() && it->get<std::string>() == "FAIL") return true;
  }
  return false;
}

std::string output_path(const ExperimentConfig& cfg) {
  if (!cfg.out.empty()) return cfg.out;
  const char* dir = std::getenv(kOutputDirEnv);
  if (!dir || !*dir) return {};
  const auto name = cfg.experiment + (cfg.format == Format::csv ? ".csv" : ".jsonl");
  return (std::filesystem::path(dir) / name).string();
}

int run(const std::optional<std::string>& config_path, const Overrides& overrides, std::ostream& out,
        std::ostream& err) {
  ExperimentConfig cfg;
  std::vector<Record> records;
  try {
    cfg = config_path ? load_config(*config_path, overrides) : default_config(overrides);
    records = execute(cfg);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const InvalidArgument& e) {
    err << "config error: experiment " << cfg.experiment << ": " << e.what() << '\n';
    return kConfigError;
  } catch (const NumericalFault& e) {
    err << "numerical fault: experiment " << cfg.experiment << ": " << e.what() << '\n';
    return kFault;
  } catch (const std::exception& e) {
    err << "fault: experiment " << cfg.experiment << ": " << e.what() << '\n';
    return kFault;
  }

  const auto path = output_path(cfg);
  if (path.empty()) {
    write_records(out, records, cfg.format);
    out.flush();
    if (!out) {
      err << "i/o error: writing standard output\n";
      return kFault;
    }
  } else {
    std::error_code ec;
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent, ec);
    std::ofstream file(path, std::ios::binary);
    if (!file) {
      err << "i/o error: cannot open '" << path << "' for writing\n";
      return kFault;
    }
    write_records(file, records, cfg.format);
    file.close();
    if (!file) {
      err << "i/o error: writing '" << path << "'\n";
      return kFault;
    }
  }
  for (const auto& r : records) {
    if (r.contains("verdict") && r["verdict"].is_string() && r["verdict"] == "FAIL") {
      err << "FAIL: " << cfg.experiment << " " << r["record"].get<std::string>();
      if (r.contains("check")) err << " " << r["check"].get<std::string>();
      if (r.contains("n")) err << " n=" << r["n"].dump();
      err << '\n';
    }
  }
  return any_failed(records) ? kVerdictFail : kPass;
}

}  // namespace randop::cli
