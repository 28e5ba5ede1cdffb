#include "cli/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include "sligeo/error.hpp"

namespace sligeo::cli {
namespace {

constexpr int kModelFormatVersion = 1;

void allow_keys(const json& obj, const std::string& where, std::set<std::string> keys) {
  if (!obj.is_object()) throw ConfigError("'" + where + "' must be an object");
  for (const auto& [k, v] : obj.items()) {
    if (!keys.count(k)) {
      std::string list;
      for (const auto& a : keys) list += (list.empty() ? "" : ", ") + a;
      throw ConfigError("unknown key '" + where + "." + k + "' (allowed: " + list + ")");
    }
  }
}

template <typename T>
T get(const json& obj, const std::string& key, const std::string& where, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("'" + where + "." + key + "' has the wrong type");
  }
}

double number(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError("missing '" + where + "." + key + "'");
  if (!obj.at(key).is_number()) throw ConfigError("'" + where + "." + key + "' must be a number");
  return obj.at(key).get<double>();
}

std::size_t count(const json& obj, const std::string& key, const std::string& where,
                  std::size_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    throw ConfigError("'" + where + "." + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

template <typename Fn>
auto wrap(const std::string& where, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

Bound bound(const json& obj, const std::string& key, const std::string& where, Bound fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_array() || v.size() != 2)
    throw ConfigError("'" + where + "." + key + "' must be a two-element array [lo, hi]");
  Bound b = fallback;
  b.lo = v[0].is_null() ? fallback.lo : v[0].get<double>();
  b.hi = v[1].is_null() ? std::numeric_limits<double>::infinity() : v[1].get<double>();
  return b;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

KernelSpec kernel_spec(const json& obj, const std::string& where) {
  KernelSpec k;
  if (obj.is_string()) {
    k.family = wrap(where, [&] { return parse_kernel(obj.get<std::string>()); });
    return k;
  }
  allow_keys(obj, where, {"family", "cutoff"});
  k.family = wrap(where, [&] { return parse_kernel(get<std::string>(obj, "family", where, "spherical")); });
  k.cutoff = get<double>(obj, "cutoff", where, k.cutoff);
  if (!(k.cutoff > 0.0)) throw ConfigError("'" + where + ".cutoff' must be > 0");
  return k;
}

void parse_estimation(const json& e, EstimationConfig& est) {
  const std::string w = "sli.estimation";
  allow_keys(e, w, {"kernels", "k", "mu_bounds", "c1_bounds", "c1_init", "mu_init", "cost",
                    "starts", "mode", "max_iterations", "cutoff"});
  const double cutoff = get<double>(e, "cutoff", w, 5.0);
  if (e.contains("kernels")) {
    est.kernels.clear();
    const json& ks = e.at("kernels");
    if (ks.is_string() && ks.get<std::string>() == "all") {
      for (auto f : kAllKernelFamilies) est.kernels.push_back({f, cutoff});
    } else {
      if (!ks.is_array()) throw ConfigError("'" + w + ".kernels' must be an array or \"all\"");
      for (const auto& k : ks) {
        KernelSpec spec = kernel_spec(k, w + ".kernels[]");
        if (k.is_string()) spec.cutoff = cutoff;
        est.kernels.push_back(spec);
      }
    }
  } else {
    est.kernels = {KernelSpec{KernelFamily::spherical, cutoff}};
  }
  if (e.contains("k")) {
    const json& ks = e.at("k");
    est.k_values.clear();
    if (ks.is_number()) {
      est.k_values.push_back(ks.get<std::size_t>());
    } else if (ks.is_array()) {
      for (const auto& k : ks) est.k_values.push_back(k.get<std::size_t>());
    } else {
      throw ConfigError("'" + w + ".k' must be an integer or an array of integers");
    }
  }
  est.mu_bounds = bound(e, "mu_bounds", w, est.mu_bounds);
  est.c1_bounds = bound(e, "c1_bounds", w, est.c1_bounds);
  est.c1_init = get<double>(e, "c1_init", w, est.c1_init);
  est.mu_init = get<double>(e, "mu_init", w, est.mu_init);
  est.cost = wrap(w, [&] { return parse_cost_metric(get<std::string>(e, "cost", w, "mae")); });
  est.starts = count(e, "starts", w, est.starts);
  est.mode = wrap(w, [&] { return parse_bandwidth_mode(get<std::string>(e, "mode", w, "fast")); });
  est.optimizer.max_iterations = count(e, "max_iterations", w, est.optimizer.max_iterations);
  wrap(w, [&] {
    est.validate();
    return 0;
  });
}

}  // namespace

json variogram_model_to_json(const VariogramModel& m) {
  json j{{"family", variogram_family_name(m.family)}, {"sigma2", m.sigma2}, {"xi", m.xi},
         {"c0", m.c0}};
  if (m.family == VariogramFamily::power) j["exponent"] = m.exponent;
  return j;
}

VariogramModel variogram_model_from_json(const json& doc, const std::string& where) {
  allow_keys(doc, where, {"family", "sigma2", "xi", "c0", "exponent"});
  VariogramModel m;
  m.family = wrap(where, [&] {
    return parse_variogram_family(get<std::string>(doc, "family", where, "spherical"));
  });
  m.sigma2 = number(doc, "sigma2", where);
  m.xi = number(doc, "xi", where);
  m.c0 = get<double>(doc, "c0", where, 0.0);
  m.exponent = get<double>(doc, "exponent", where, 1.0);
  wrap(where, [&] {
    m.validate();
    return 0;
  });
  return m;
}

json model_to_json(const FittedModel& model) {
  const SliParams& p = model.params;
  json cands = json::array();
  for (const auto& c : model.candidates) {
    json row{{"kernel", kernel_name(c.kernel.family)}, {"k", c.k}, {"ok", c.ok},
             {"evaluations", c.evaluations}, {"starts_converged", c.starts_converged}};
    if (c.ok) {
      row["c1"] = c.c1;
      row["mu"] = c.mu;
      row["lambda"] = c.lambda;
      row["cost"] = c.cost;
    } else {
      row["message"] = c.message;
    }
    cands.push_back(row);
  }
  return json{{"format", "sligeo-sli-model"},
              {"version", kModelFormatVersion},
              {"kernel", kernel_name(p.kernel.family)},
              {"cutoff", p.kernel.cutoff},
              {"k", p.k},
              {"c1", p.c1},
              {"mu", p.mu},
              {"lambda", p.lambda},
              {"mean", p.mean},
              {"cost", model.cost},
              {"metric", cost_metric_name(model.metric)},
              {"mode", bandwidth_mode_name(model.mode)},
              {"variance_defined", model.variance_defined},
              {"candidates", cands}};
}

FittedModel model_from_json(const json& doc) {
  const std::string w = "model";
  if (!doc.is_object() || doc.value("format", "") != "sligeo-sli-model")
    throw ConfigError("model document is not a sligeo SLI model");
  if (doc.value("version", 0) != kModelFormatVersion)
    throw ConfigError("unsupported model version " + doc.value("version", json(0)).dump());
  FittedModel m;
  m.params.kernel.family = wrap(w, [&] { return parse_kernel(doc.at("kernel").get<std::string>()); });
  m.params.kernel.cutoff = number(doc, "cutoff", w);
  m.params.k = doc.at("k").get<std::size_t>();
  m.params.c1 = number(doc, "c1", w);
  m.params.mu = number(doc, "mu", w);
  m.params.lambda = number(doc, "lambda", w);
  m.params.mean = number(doc, "mean", w);
  m.cost = get<double>(doc, "cost", w, 0.0);
  m.metric = wrap(w, [&] { return parse_cost_metric(get<std::string>(doc, "metric", w, "mae")); });
  m.mode = wrap(w, [&] { return parse_bandwidth_mode(get<std::string>(doc, "mode", w, "fast")); });
  m.variance_defined = m.params.lambda > 0.0;
  return m;
}

RunConfig parse_config(const json& doc, const fs::path& base_dir) {
  allow_keys(doc, "config", {"input", "grid", "mask", "output", "seed", "workers", "sli",
                             "variogram", "kriging", "validation", "compare"});
  RunConfig cfg;
  cfg.document = doc;
  cfg.base_dir = base_dir;

  if (!doc.contains("input")) throw ConfigError("missing 'input' section");
  {
    const json& in = doc.at("input");
    const std::string w = "input";
    allow_keys(in, w, {"path", "x", "y", "value", "delimiter", "duplicates"});
    cfg.input.path = resolve(base_dir, get<std::string>(in, "path", w, ""));
    if (!in.contains("path")) throw ConfigError("missing 'input.path'");
    cfg.input.columns.x = get<std::string>(in, "x", w, "x");
    cfg.input.columns.y = get<std::string>(in, "y", w, "y");
    cfg.input.columns.value = get<std::string>(in, "value", w, "value");
    const auto delim = get<std::string>(in, "delimiter", w, ",");
    if (delim.size() != 1) throw ConfigError("'input.delimiter' must be a single character");
    cfg.input.columns.delimiter = delim == "\\t" ? '\t' : delim[0];
    cfg.input.duplicates =
        wrap(w, [&] { return parse_duplicate_policy(get<std::string>(in, "duplicates", w, "average")); });
  }

  if (doc.contains("grid")) {
    const json& g = doc.at("grid");
    const std::string w = "grid";
    allow_keys(g, w, {"x0", "y0", "dx", "dy", "cols", "rows", "cell_size"});
    if (g.contains("cell_size")) {
      if (g.size() != 1) throw ConfigError("'grid.cell_size' (auto grid) excludes the explicit grid keys");
      cfg.grid.auto_cell_size = number(g, "cell_size", w);
      if (!(cfg.grid.auto_cell_size > 0.0)) throw ConfigError("'grid.cell_size' must be > 0");
    } else {
      GridSpec s;
      s.x0 = number(g, "x0", w);
      s.y0 = number(g, "y0", w);
      s.dx = number(g, "dx", w);
      s.dy = g.contains("dy") ? number(g, "dy", w) : s.dx;
      s.cols = count(g, "cols", w, 0);
      s.rows = count(g, "rows", w, 0);
      wrap(w, [&] {
        s.validate();
        return 0;
      });
      cfg.grid.grid = s;
    }
  }

  if (doc.contains("mask")) cfg.mask = resolve(base_dir, get<std::string>(doc, "mask", "config", ""));

  if (doc.contains("output")) {
    const json& o = doc.at("output");
    allow_keys(o, "output", {"directory", "raster_format"});
    if (o.contains("directory")) cfg.output_dir = resolve(base_dir, o.at("directory").get<std::string>());
    cfg.raster_format = wrap("output", [&] {
      return parse_raster_format(get<std::string>(o, "raster_format", "output", "xyz"));
    });
  }
  cfg.seed = get<std::uint64_t>(doc, "seed", "config", 0);
  cfg.workers = static_cast<unsigned>(count(doc, "workers", "config", 1));

  if (doc.contains("sli")) {
    const json& s = doc.at("sli");
    const std::string w = "sli";
    allow_keys(s, w, {"model", "params", "estimation"});
    if (s.contains("model")) cfg.sli.model_path = resolve(base_dir, s.at("model").get<std::string>());
    if (s.contains("params")) {
      const json& p = s.at("params");
      const std::string pw = "sli.params";
      allow_keys(p, pw, {"kernel", "cutoff", "k", "c1", "mu", "lambda", "mean"});
      SliParams sp;
      sp.kernel.family = wrap(pw, [&] { return parse_kernel(get<std::string>(p, "kernel", pw, "spherical")); });
      sp.kernel.cutoff = get<double>(p, "cutoff", pw, 5.0);
      sp.k = count(p, "k", pw, 3);
      sp.c1 = number(p, "c1", pw);
      sp.mu = number(p, "mu", pw);
      cfg.sli.lambda_given = p.contains("lambda");
      cfg.sli.mean_given = p.contains("mean");
      sp.lambda = get<double>(p, "lambda", pw, 1.0);
      sp.mean = get<double>(p, "mean", pw, 0.0);
      wrap(pw, [&] {
        sp.validate();
        return 0;
      });
      cfg.sli.params = sp;
    }
    if (cfg.sli.model_path && cfg.sli.params)
      throw ConfigError("'sli.model' and 'sli.params' are mutually exclusive");
    if (s.contains("estimation")) parse_estimation(s.at("estimation"), cfg.sli.estimation);
  }
  cfg.sli.estimation.seed = cfg.seed;

  if (doc.contains("variogram")) {
    const json& v = doc.at("variogram");
    const std::string w = "variogram";
    allow_keys(v, w, {"bins", "max_lag", "normalization", "families", "nugget", "starts"});
    cfg.variogram.bins.count = count(v, "bins", w, 25);
    cfg.variogram.bins.max_lag = get<double>(v, "max_lag", w, 0.0);
    cfg.variogram.bins.normalization = wrap(w, [&] {
      return parse_robust_normalization(get<std::string>(v, "normalization", w, "standard"));
    });
    if (v.contains("families")) {
      cfg.variogram.families.clear();
      for (const auto& f : v.at("families"))
        cfg.variogram.families.push_back(wrap(w, [&] { return parse_variogram_family(f.get<std::string>()); }));
      if (cfg.variogram.families.empty()) throw ConfigError("'variogram.families' is empty");
    }
    cfg.variogram.fit.nugget = get<bool>(v, "nugget", w, true);
    cfg.variogram.fit.starts = count(v, "starts", w, cfg.variogram.fit.starts);
    if (cfg.variogram.bins.count == 0) throw ConfigError("'variogram.bins' must be >= 1");
    if (cfg.variogram.fit.starts == 0) throw ConfigError("'variogram.starts' must be >= 1");
  }
  cfg.variogram.fit.seed = cfg.seed;

  if (doc.contains("kriging")) {
    const json& k = doc.at("kriging");
    const std::string w = "kriging";
    allow_keys(k, w, {"model", "radius", "max_neighbors", "no_neighbor"});
    if (k.contains("model")) cfg.kriging.model = variogram_model_from_json(k.at("model"), "kriging.model");
    if (k.contains("radius")) {
      cfg.kriging.radius = number(k, "radius", w);
      if (!(*cfg.kriging.radius > 0.0)) throw ConfigError("'kriging.radius' must be > 0");
    }
    cfg.kriging.max_neighbors = count(k, "max_neighbors", w, 64);
    cfg.kriging.policy = wrap(w, [&] {
      return parse_no_neighbor_policy(get<std::string>(k, "no_neighbor", w, "nodata"));
    });
  }

  if (doc.contains("validation")) {
    const json& v = doc.at("validation");
    const std::string w = "validation";
    allow_keys(v, w, {"loo", "lpo", "outlier_rule", "methods"});
    cfg.validation.loo = get<bool>(v, "loo", w, true);
    if (v.contains("lpo")) {
      const json& l = v.at("lpo");
      allow_keys(l, "validation.lpo", {"rate", "folds"});
      LpoSection lpo;
      lpo.rate = get<double>(l, "rate", "validation.lpo", lpo.rate);
      lpo.folds = count(l, "folds", "validation.lpo", lpo.folds);
      if (!(lpo.rate > 0.0 && lpo.rate < 1.0)) throw ConfigError("'validation.lpo.rate' must lie in (0, 1)");
      if (lpo.folds == 0) throw ConfigError("'validation.lpo.folds' must be >= 1");
      cfg.validation.lpo = lpo;
    }
    cfg.validation.outlier_rule = wrap(w, [&] {
      return parse_outlier_rule(get<std::string>(v, "outlier_rule", w, "standard"));
    });
    if (v.contains("methods")) {
      cfg.validation.sli = cfg.validation.ok = false;
      for (const auto& m : v.at("methods")) {
        const auto name = m.get<std::string>();
        if (name == "sli") cfg.validation.sli = true;
        else if (name == "ok") cfg.validation.ok = true;
        else throw ConfigError("unknown validation method '" + name + "' (expected sli or ok)");
      }
    }
  }

  if (doc.contains("compare")) {
    const json& c = doc.at("compare");
    allow_keys(c, "compare", {"bands"});
    if (c.contains("bands")) {
      const json& b = c.at("bands");
      if (!b.is_array() || b.size() != 3) throw ConfigError("'compare.bands' must hold three edges");
      for (std::size_t i = 0; i < 3; ++i) cfg.compare.bands[i] = b[i].get<double>();
      if (!(cfg.compare.bands[0] < cfg.compare.bands[1] && cfg.compare.bands[1] < cfg.compare.bands[2]))
        throw ConfigError("'compare.bands' must be strictly increasing");
    }
  }
  return cfg;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  try {
    return parse_config(doc, path.parent_path());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

}  // namespace sligeo::cli
