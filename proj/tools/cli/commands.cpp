#include "cli/commands.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>

#include "cli/config.hpp"
#include "cli/manifest.hpp"
#include "sligeo/error.hpp"
#include "sligeo/sli_predict.hpp"

namespace sligeo::cli {
namespace {

struct Context {
  RunConfig cfg;
  std::ostream& log;
  Manifest manifest;
};

fs::path out_path(Context& ctx, const std::string& name) {
  const fs::path p = ctx.cfg.output_dir / name;
  ctx.manifest.add_output(p);
  return p;
}

void write_json(Context& ctx, const std::string& name, const json& doc) {
  std::ofstream out(out_path(ctx, name), std::ios::binary);
  if (!out) throw DataError("cannot write '" + name + "'");
  out << doc.dump(2) << '\n';
}

void write_table(Context& ctx, const std::string& name, const std::string& header,
                 const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(out_path(ctx, name), std::ios::binary);
  if (!out) throw DataError("cannot write '" + name + "'");
  out << header << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

void write_raster_out(Context& ctx, const std::string& stem, const Raster& r) {
  write_raster(out_path(ctx, stem + std::string(raster_extension(ctx.cfg.raster_format))), r,
               ctx.cfg.raster_format);
}

std::string num(double v) { return std::isfinite(v) ? format_double(v) : "nan"; }

json num_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

SampleSet load_samples(Context& ctx) {
  auto res = read_samples(ctx.cfg.input.path, ctx.cfg.input.columns, ctx.cfg.input.duplicates);
  ctx.log << "input: " << res.rows << " rows";
  if (res.duplicate_groups > 0)
    ctx.log << ", " << res.duplicate_groups << " duplicated locations (" << res.merged_rows
            << " rows merged by " << duplicate_policy_name(ctx.cfg.input.duplicates) << ")";
  ctx.log << '\n';
  ctx.manifest.note("duplicate_locations", res.duplicate_groups);
  ctx.manifest.note("merged_rows", res.merged_rows);
  return std::move(res.samples);
}

GridSpec resolve_grid(const Context& ctx, const SampleSet& samples) {
  if (ctx.cfg.grid.grid) return *ctx.cfg.grid.grid;
  if (ctx.cfg.grid.auto_cell_size > 0.0)
    return GridSpec::covering(samples.points.coords(), ctx.cfg.grid.auto_cell_size);
  throw ConfigError("this command needs a 'grid' section (explicit grid or {\"cell_size\": ...})");
}

std::optional<std::vector<bool>> load_mask(const Context& ctx, const GridSpec& grid) {
  if (!ctx.cfg.mask) return std::nullopt;
  const Polygon poly(read_polygon_vertices(*ctx.cfg.mask));
  return cell_mask(grid, &poly);
}

json grid_json(const GridSpec& g) {
  return json{{"x0", g.x0}, {"y0", g.y0}, {"dx", g.dx}, {"dy", g.dy},
              {"cols", g.cols}, {"rows", g.rows}};
}

FittedModel fit_and_report(Context& ctx, const SampleSet& samples) {
  EstimationConfig est = ctx.cfg.sli.estimation;
  est.workers = ctx.cfg.workers;
  FittedModel model = fit(samples, est);
  std::vector<std::vector<std::string>> rows;
  for (const auto& c : model.candidates) {
    rows.push_back({std::string(kernel_name(c.kernel.family)), std::to_string(c.k),
                    c.ok ? num(c.c1) : "", c.ok ? num(c.mu) : "", c.ok ? num(c.lambda) : "",
                    c.ok ? num(c.cost) : "", std::to_string(c.evaluations),
                    c.ok ? "ok" : "failed"});
  }
  write_table(ctx, "sli_costs.csv", "kernel,k,c1,mu,lambda,cost,evaluations,status", rows);
  ctx.log << "fit: " << kernel_name(model.params.kernel.family) << " k=" << model.params.k
          << " c1=" << num(model.params.c1) << " mu=" << num(model.params.mu)
          << " lambda=" << num(model.params.lambda) << " " << cost_metric_name(model.metric)
          << "=" << num(model.cost) << '\n';
  if (!model.variance_defined)
    ctx.log << "warning: data are constant; lambda* = 0 and prediction variances are undefined\n";
  return model;
}

FittedModel resolve_sli(Context& ctx, const SampleSet& samples) {
  const SliSection& s = ctx.cfg.sli;
  if (s.model_path) {
    std::ifstream in(*s.model_path);
    if (!in) throw ConfigError("cannot open SLI model '" + s.model_path->string() + "'");
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError("SLI model '" + s.model_path->string() + "' is not valid JSON");
    }
    FittedModel m = model_from_json(doc);
    ctx.log << "sli: model loaded from " << s.model_path->filename().string() << '\n';
    return m;
  }
  if (s.params) {
    FittedModel m;
    m.params = *s.params;
    if (!s.mean_given) m.params.mean = samples.mean();
    if (!s.lambda_given) {
      const auto ls = lambda_star(samples, m.params, ctx.cfg.workers);
      m.params.lambda = ls.value;
    }
    m.variance_defined = m.params.lambda > 0.0;
    m.mode = s.estimation.mode;
    m.metric = s.estimation.cost;
    m.cost = loo_cost(samples, m.params.kernel, m.params.k, m.params.c1, m.params.mu, m.metric,
                      m.mode, ctx.cfg.workers);
    return m;
  }
  return fit_and_report(ctx, samples);
}

json variogram_report(Context& ctx, const SampleSet& samples, VariogramFitReport& fits) {
  const auto emp = empirical_variogram(samples, ctx.cfg.variogram.bins, ctx.cfg.workers);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < emp.size(); ++i) {
    rows.push_back({std::to_string(emp.bin_ids[i]), num(emp.edges[emp.bin_ids[i]]),
                    num(emp.edges[emp.bin_ids[i] + 1]), num(emp.centers[i]),
                    num(emp.mean_lags[i]), num(emp.gamma[i]), std::to_string(emp.counts[i])});
  }
  write_table(ctx, "variogram_empirical.csv", "bin,lag_lo,lag_hi,lag_center,mean_lag,gamma,pairs",
              rows);
  fits = fit_variogram(emp, ctx.cfg.variogram.families, ctx.cfg.variogram.fit);
  json ranked = json::array();
  for (const auto& f : fits.ranked) {
    json j = variogram_model_to_json(f.model);
    j["error"] = f.error;
    ranked.push_back(j);
    ctx.log << "variogram: " << variogram_family_name(f.model.family) << " error=" << num(f.error)
            << '\n';
  }
  for (const auto& w : fits.warnings) ctx.log << "warning: " << w << '\n';
  return json{{"normalization", robust_normalization_name(emp.normalization)},
              {"bins", ctx.cfg.variogram.bins.count},
              {"max_lag", emp.edges.back()},
              {"ranked", ranked},
              {"warnings", fits.warnings}};
}

KrigingConfig resolve_kriging(Context& ctx, const SampleSet& samples) {
  KrigingConfig k;
  if (ctx.cfg.kriging.model) {
    k.model = *ctx.cfg.kriging.model;
  } else {
    VariogramFitReport fits;
    write_json(ctx, "variogram_fit.json", variogram_report(ctx, samples, fits));
    k.model = fits.ranked.front().model;
  }
  k.radius = ctx.cfg.kriging.radius.value_or(k.model.xi);
  k.max_neighbors = ctx.cfg.kriging.max_neighbors;
  k.policy = ctx.cfg.kriging.policy;
  k.validate();
  ctx.log << "kriging: " << variogram_family_name(k.model.family) << " sigma2=" << num(k.model.sigma2)
          << " xi=" << num(k.model.xi) << " c0=" << num(k.model.c0) << " radius=" << num(k.radius)
          << '\n';
  return k;
}

json kriging_json(const KrigingConfig& k) {
  return json{{"model", variogram_model_to_json(k.model)},
              {"radius", k.radius},
              {"max_neighbors", k.max_neighbors},
              {"no_neighbor", no_neighbor_policy_name(k.policy)}};
}

json report_json(const CvReport& r) {
  return json{{"me", num_json(r.me)},       {"mae", num_json(r.mae)},
              {"mare", num_json(r.mare)},   {"rmse", num_json(r.rmse)},
              {"rmsre", num_json(r.rmsre)}, {"maxae", num_json(r.maxae)},
              {"r", num_json(r.r)},         {"r_defined", r.r_defined},
              {"count", r.count},           {"zero_truth_excluded", r.zero_truth_excluded},
              {"failed", r.failed}};
}

json box_json(const BoxSummary& b) {
  return json{{"median", b.median},         {"q1", b.q1},
              {"q3", b.q3},                 {"fence_lo", b.fence_lo},
              {"fence_hi", b.fence_hi},     {"whisker_lo", b.whisker_lo},
              {"whisker_hi", b.whisker_hi}, {"outliers", b.outliers}};
}

const std::vector<std::pair<std::string, double CvReport::*>> kMeasures = {
    {"ME", &CvReport::me},     {"MAE", &CvReport::mae},     {"MARE", &CvReport::mare},
    {"RMSE", &CvReport::rmse}, {"RMSRE", &CvReport::rmsre}, {"MaxAE", &CvReport::maxae},
    {"R", &CvReport::r}};

void write_side_by_side(Context& ctx, const std::string& name, const CvReport* sli,
                        const CvReport* ok) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& [label, field] : kMeasures) {
    rows.push_back({label, sli ? num(sli->*field) : "", ok ? num(ok->*field) : ""});
  }
  write_table(ctx, name, "measure,sli,ok", rows);
}

// ---- subcommands ----

void cmd_fit(Context& ctx) {
  const SampleSet samples = load_samples(ctx);
  const FittedModel model = fit_and_report(ctx, samples);
  write_json(ctx, "sli_model.json", model_to_json(model));
}

struct SliMaps {
  GridPrediction maps;
  FittedModel model;
};

SliMaps sli_maps(Context& ctx, const SampleSet& samples, const GridSpec& grid,
                 const std::vector<bool>* mask) {
  FittedModel model = resolve_sli(ctx, samples);
  const SliPredictor predictor(samples, model.params, ctx.cfg.workers);
  return {predictor.predict_grid(grid, mask, ctx.cfg.workers), std::move(model)};
}

void cmd_predict(Context& ctx) {
  const SampleSet samples = load_samples(ctx);
  const GridSpec grid = resolve_grid(ctx, samples);
  const auto mask = load_mask(ctx, grid);
  auto [maps, model] = sli_maps(ctx, samples, grid, mask ? &*mask : nullptr);
  write_raster_out(ctx, "sli_value", maps.value);
  write_raster_out(ctx, "sli_std", maps.std);
  write_raster_out(ctx, "sli_neighbors", maps.neighbors);
  write_raster_out(ctx, "sli_bandwidth", maps.bandwidth);
  const double volume = total_volume(maps.value);
  write_json(ctx, "sli_model.json", model_to_json(model));
  write_json(ctx, "predict_summary.json",
             json{{"grid", grid_json(grid)},
                  {"cells", grid.cells()},
                  {"predicted_cells", maps.value.valid_cells()},
                  {"cell_area", grid.cell_area()},
                  {"total_volume", volume},
                  {"variance_defined", model.variance_defined},
                  {"nodata", maps.value.nodata}});
  ctx.log << "total volume: " << num(volume) << " (" << maps.value.valid_cells()
          << " cells of area " << num(grid.cell_area()) << ")\n";
}

void cmd_variogram(Context& ctx) {
  const SampleSet samples = load_samples(ctx);
  VariogramFitReport fits;
  const json report = variogram_report(ctx, samples, fits);
  write_json(ctx, "variogram_fit.json", report);
  std::vector<std::vector<std::string>> rows;
  for (const auto& f : fits.ranked) {
    rows.push_back({std::string(variogram_family_name(f.model.family)), num(f.error),
                    num(f.model.sigma2), num(f.model.xi), num(f.model.c0),
                    f.model.family == VariogramFamily::power ? num(f.model.exponent) : ""});
  }
  write_table(ctx, "variogram_ranking.csv", "family,error,sigma2,xi,c0,exponent", rows);
}

void cmd_krige(Context& ctx) {
  const SampleSet samples = load_samples(ctx);
  const GridSpec grid = resolve_grid(ctx, samples);
  const auto mask = load_mask(ctx, grid);
  const KrigingConfig k = resolve_kriging(ctx, samples);
  const SpatialIndex index(samples.points);
  const KrigingGrid maps = ok_predict_grid(grid, samples, index, k, mask ? &*mask : nullptr,
                                           ctx.cfg.workers);
  write_raster_out(ctx, "ok_value", maps.value);
  write_raster_out(ctx, "ok_std", maps.std);
  write_raster_out(ctx, "ok_neighbors", maps.neighbors);
  const double volume = total_volume(maps.value);
  write_json(ctx, "krige_summary.json",
             json{{"grid", grid_json(grid)},
                  {"kriging", kriging_json(k)},
                  {"cells", grid.cells()},
                  {"predicted_cells", maps.value.valid_cells()},
                  {"no_neighbor_cells", maps.no_neighbor_cells},
                  {"clamped_variances", maps.clamped},
                  {"cell_area", grid.cell_area()},
                  {"total_volume", volume}});
  if (maps.clamped > 0)
    ctx.log << "warning: " << maps.clamped << " negative kriging variances clamped to 0\n";
  ctx.log << "total volume: " << num(volume) << '\n';
}

struct LooPair {
  std::optional<CvReport> sli;
  std::optional<CvReport> ok;
  json detail = json::object();
};

LooPair loo_both(Context& ctx, const SampleSet& samples, const FittedModel* model,
                 const KrigingConfig* k) {
  LooPair res;
  std::vector<std::vector<std::string>> rows(samples.size());
  std::vector<double> sli_err(samples.size(), NAN), ok_err(samples.size(), NAN);
  auto scatter = [](const CvReport& r, std::vector<double>& dst) {
    std::size_t e = 0, f = 0;
    for (std::size_t i = 0; i < dst.size(); ++i) {
      if (f < r.failed.size() && r.failed[f] == i) {
        ++f;
        continue;
      }
      dst[i] = r.errors[e++];
    }
  };
  if (model != nullptr) {
    res.sli = run_loo_sli(samples, model->params, model->mode, ctx.cfg.workers);
    scatter(*res.sli, sli_err);
    res.detail["sli"] = report_json(*res.sli);
    res.detail["sli"]["box"] = box_json(box_summary(res.sli->errors, ctx.cfg.validation.outlier_rule));
    res.detail["sli"]["mode"] = bandwidth_mode_name(model->mode);
  }
  if (k != nullptr) {
    res.ok = run_loo_ok(samples, *k, ctx.cfg.workers);
    scatter(*res.ok, ok_err);
    res.detail["ok"] = report_json(*res.ok);
    res.detail["ok"]["box"] = box_json(box_summary(res.ok->errors, ctx.cfg.validation.outlier_rule));
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto p = samples.points[i];
    rows[i] = {std::to_string(i), num(p[0]), num(p[1]), num(samples.values[i]),
               model ? num(sli_err[i]) : "", k ? num(ok_err[i]) : ""};
  }
  write_table(ctx, "loo_errors.csv", "index,x,y,truth,sli_error,ok_error", rows);
  return res;
}

void cmd_validate(Context& ctx) {
  const SampleSet samples = load_samples(ctx);
  const ValidationSection& v = ctx.cfg.validation;
  if (!v.sli && !v.ok) throw ConfigError("'validation.methods' selects no method");
  std::optional<FittedModel> model;
  std::optional<KrigingConfig> k;
  if (v.sli) model = resolve_sli(ctx, samples);
  if (v.ok) k = resolve_kriging(ctx, samples);

  json report{{"outlier_rule", outlier_rule_name(v.outlier_rule)}, {"seed", ctx.cfg.seed}};
  if (model) report["sli_model"] = model_to_json(*model);
  if (k) report["kriging"] = kriging_json(*k);
  if (v.loo) {
    auto loo = loo_both(ctx, samples, model ? &*model : nullptr, k ? &*k : nullptr);
    report["loo"] = loo.detail;
    write_side_by_side(ctx, "loo_comparison.csv", loo.sli ? &*loo.sli : nullptr,
                       loo.ok ? &*loo.ok : nullptr);
    if (loo.sli) ctx.log << "loo sli: MAE=" << num(loo.sli->mae) << " RMSE=" << num(loo.sli->rmse) << '\n';
    if (loo.ok) ctx.log << "loo ok: MAE=" << num(loo.ok->mae) << " RMSE=" << num(loo.ok->rmse) << '\n';
  }
  if (v.lpo) {
    EstimationConfig est = ctx.cfg.sli.estimation;
    if (model) {
      // Folds refit (c1, mu) for the selected kernel and k only.
      est.kernels = {model->params.kernel};
      est.k_values = {model->params.k};
    }
    const auto folds = run_lpo(samples, model ? &est : nullptr, k ? &*k : nullptr, v.lpo->rate,
                               v.lpo->folds, ctx.cfg.seed, ctx.cfg.workers);
    json fold_docs = json::array();
    std::vector<std::vector<std::string>> rows;
    std::vector<FittedModel> fitted;
    std::vector<std::size_t> ids;
    for (const auto& f : folds) {
      json d{{"fold", f.split.fold}, {"seed", f.split.seed}, {"test", f.split.test.size()},
             {"train", f.split.train.size()}};
      if (f.sli) d["sli"] = report_json(*f.sli);
      if (!f.sli_error.empty()) d["sli_error"] = f.sli_error;
      if (f.ok) d["ok"] = report_json(*f.ok);
      if (!f.ok_error.empty()) d["ok_error"] = f.ok_error;
      if (f.model) {
        d["c1"] = f.model->params.c1;
        d["mu"] = f.model->params.mu;
        d["lambda"] = f.model->params.lambda;
        fitted.push_back(*f.model);
        ids.push_back(f.split.fold);
      }
      fold_docs.push_back(d);
      rows.push_back({std::to_string(f.split.fold),
                      f.model ? num(f.model->params.c1) : "", f.model ? num(f.model->params.mu) : "",
                      f.model ? num(f.model->params.lambda) : "",
                      f.sli ? num(f.sli->mae) : "", f.sli ? num(f.sli->rmse) : "",
                      f.ok ? num(f.ok->mae) : "", f.ok ? num(f.ok->rmse) : ""});
    }
    write_table(ctx, "lpo_folds.csv", "fold,c1,mu,lambda,sli_mae,sli_rmse,ok_mae,ok_rmse", rows);
    json lpo{{"rate", v.lpo->rate}, {"folds", fold_docs}};
    if (fitted.size() >= 2) {
      try {
        const auto st = parameter_stability_report(fitted, ids);
        auto disp = [](const Dispersion& d) {
          return json{{"median", num_json(d.median)}, {"q1", num_json(d.q1)}, {"q3", num_json(d.q3)},
                      {"min", num_json(d.min)}, {"max", num_json(d.max)},
                      {"relative_iqr", num_json(d.relative_iqr)}};
        };
        lpo["stability"] = json{{"c1_over_lambda", disp(st.ratio)}, {"mu", disp(st.mu)},
                                {"c1", disp(st.c1)}};
      } catch (const DataError& e) {
        lpo["stability_error"] = e.what();
      }
    }
    report["lpo"] = lpo;
  }
  write_json(ctx, "cv_report.json", report);
}

void cmd_compare(Context& ctx) {
  const SampleSet samples = load_samples(ctx);
  const GridSpec grid = resolve_grid(ctx, samples);
  const auto mask = load_mask(ctx, grid);
  const std::vector<bool>* mp = mask ? &*mask : nullptr;

  auto [sli, model] = sli_maps(ctx, samples, grid, mp);
  const KrigingConfig k = resolve_kriging(ctx, samples);
  const SpatialIndex index(samples.points);
  const KrigingGrid ok = ok_predict_grid(grid, samples, index, k, mp, ctx.cfg.workers);

  write_raster_out(ctx, "sli_value", sli.value);
  write_raster_out(ctx, "sli_std", sli.std);
  write_raster_out(ctx, "ok_value", ok.value);
  write_raster_out(ctx, "ok_std", ok.std);
  const Raster dv = raster_difference(sli.value, ok.value);
  const Raster ds = raster_difference(sli.std, ok.std);
  const Raster cls = classify_difference(dv, ctx.cfg.compare.bands);
  write_raster_out(ctx, "diff_value", dv);
  write_raster_out(ctx, "diff_std", ds);
  write_raster_out(ctx, "diff_class", cls);

  std::map<int, std::size_t> counts{{1, 0}, {2, 0}, {3, 0}, {4, 0}};
  for (std::size_t c = 0; c < cls.values.size(); ++c) {
    if (!cls.is_nodata(c)) ++counts[static_cast<int>(cls.values[c])];
  }
  const auto& b = ctx.cfg.compare.bands;
  json classes = json::array();
  const char* labels[] = {"OK>SLI", "OK=SLI", "SLI>OK", "SLI>>OK"};
  for (int c = 1; c <= 4; ++c)
    classes.push_back(json{{"code", c}, {"label", labels[c - 1]}, {"cells", counts[c]}});

  auto loo = loo_both(ctx, samples, &model, &k);
  write_side_by_side(ctx, "cv_comparison.csv", &*loo.sli, &*loo.ok);
  write_json(ctx, "compare_summary.json",
             json{{"grid", grid_json(grid)},
                  {"bands", b},
                  {"classes", classes},
                  {"sli_volume", total_volume(sli.value)},
                  {"ok_volume", total_volume(ok.value)},
                  {"sli_model", model_to_json(model)},
                  {"kriging", kriging_json(k)},
                  {"loo", loo.detail}});
  ctx.log << "compare: classes " << counts[1] << "/" << counts[2] << "/" << counts[3] << "/"
          << counts[4] << " (OK>SLI / OK=SLI / SLI>OK / SLI>>OK)\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"sligeo: stochastic local interaction interpolation and ordinary kriging"};
  app.require_subcommand(1);
  std::string config_path, output_dir;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  const std::map<std::string, std::pair<std::string, std::function<void(Context&)>>> commands = {
      {"fit", {"estimate SLI parameters by leave-one-out cross validation", cmd_fit}},
      {"predict", {"SLI prediction and standard deviation rasters", cmd_predict}},
      {"variogram", {"robust empirical variogram and ranked model fits", cmd_variogram}},
      {"krige", {"ordinary kriging rasters", cmd_krige}},
      {"validate", {"leave-one-out and leave-p-out cross validation", cmd_validate}},
      {"compare", {"SLI versus kriging difference maps and statistics", cmd_compare}},
  };
  std::vector<CLI::App*> subs;
  for (const auto& [name, entry] : commands) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--output", output_dir, "output directory (overrides output.directory)");
    sub->add_option("--seed", seed, "run seed (overrides the config seed)");
    sub->add_option("--workers", workers, "worker threads, 0 for all cores");
    subs.push_back(sub);
  }

  std::vector<std::string> argv_store{"sligeo"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  try {
    Context ctx{load_config(config_path), err, Manifest(chosen->get_name())};
    if (!output_dir.empty()) ctx.cfg.output_dir = output_dir;
    if (chosen->count("--seed") > 0) {
      ctx.cfg.seed = seed;
      ctx.cfg.sli.estimation.seed = seed;
      ctx.cfg.variogram.fit.seed = seed;
    }
    if (chosen->count("--workers") > 0) ctx.cfg.workers = workers;
    auto require = [](const fs::path& p, const char* what) {
      if (!fs::exists(p)) throw ConfigError(std::string(what) + " '" + p.string() + "' does not exist");
    };
    require(ctx.cfg.input.path, "input file");
    if (ctx.cfg.mask) require(*ctx.cfg.mask, "mask file");
    if (ctx.cfg.sli.model_path) require(*ctx.cfg.sli.model_path, "SLI model file");
    std::error_code ec;
    fs::create_directories(ctx.cfg.output_dir, ec);
    if (ec) throw DataError("cannot create output directory '" + ctx.cfg.output_dir.string() + "'");
    commands.at(chosen->get_name()).second(ctx);
    ctx.manifest.write(ctx.cfg, ctx.cfg.output_dir);
    out << "wrote " << ctx.cfg.output_dir.string() << '\n';
    return kOk;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const fs::filesystem_error& e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  }
}

}  // namespace sligeo::cli
