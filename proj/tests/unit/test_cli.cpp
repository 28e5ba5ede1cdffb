#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "cli/manifest.hpp"
#include "sligeo/io.hpp"
#include "sligeo/synthetic.hpp"

namespace fs = std::filesystem;
using namespace sligeo;
using sligeo::cli::json;

namespace {

struct Workspace {
  fs::path dir;

  explicit Workspace(const std::string& name) : dir(fs::temp_directory_path() / name) {
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto pts = uniform_points(90, {0, 20, 0, 20}, 4);
    const auto v = smooth_field(pts, 0.3, 0.05, 5);
    std::ofstream out(dir / "samples.csv");
    out << "x,y,value\n";
    for (std::size_t i = 0; i < pts.size(); ++i)
      out << format_double(pts[i][0]) << ',' << format_double(pts[i][1]) << ','
          << format_double(v[i]) << '\n';
  }
  ~Workspace() { fs::remove_all(dir); }

  fs::path config(const json& doc, const std::string& name = "run.json") const {
    std::ofstream(dir / name) << doc.dump(2);
    return dir / name;
  }

  int run(const std::vector<std::string>& args, std::string* err_text = nullptr) const {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    if (err_text) *err_text = err.str();
    return code;
  }
};

json base_config() {
  return json{{"input", {{"path", "samples.csv"}}},
              {"grid", {{"x0", 0}, {"y0", 0}, {"dx", 2}, {"dy", 2}, {"cols", 10}, {"rows", 10}}},
              {"output", {{"directory", "out"}}},
              {"seed", 3},
              {"sli", {{"estimation", {{"k", json::array({3})}, {"starts", 2}, {"max_iterations", 60}}}}},
              {"variogram", {{"bins", 12}, {"starts", 2}}},
              {"validation", {{"lpo", {{"rate", 0.2}, {"folds", 2}}}}}};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("cli: every subcommand writes its outputs and a manifest") {
  const Workspace ws("sligeo_cli_all");
  const auto cfg = ws.config(base_config());
  for (const std::string cmd : {"fit", "predict", "variogram", "krige", "validate", "compare"}) {
    CAPTURE(cmd);
    const fs::path out = ws.dir / ("out_" + cmd);
    std::string err;
    REQUIRE(ws.run({cmd, "--config", cfg.string(), "--output", out.string()}, &err) == 0);
    const auto manifest = json::parse(slurp(out / "manifest.json"));
    CHECK(manifest["command"] == cmd);
    CHECK(manifest["version"] == std::string(cli::kToolVersion));
    CHECK(manifest["input"]["crc32"].get<std::string>().size() == 8);
    for (const auto& o : manifest["outputs"]) {
      const fs::path f = out / o["file"].get<std::string>();
      CHECK(fs::exists(f));
      CHECK(o["bytes"] == fs::file_size(f));
    }
  }
  CHECK(fs::exists(ws.dir / "out_fit" / "sli_model.json"));
  CHECK(fs::exists(ws.dir / "out_predict" / "sli_value.xyz"));
  CHECK(fs::exists(ws.dir / "out_variogram" / "variogram_empirical.csv"));
  CHECK(fs::exists(ws.dir / "out_krige" / "ok_std.xyz"));
  CHECK(fs::exists(ws.dir / "out_validate" / "cv_report.json"));
  CHECK(fs::exists(ws.dir / "out_compare" / "diff_class.xyz"));

  const auto model = json::parse(slurp(ws.dir / "out_fit" / "sli_model.json"));
  const auto fitted = cli::model_from_json(model);
  auto echoed = cli::model_to_json(fitted);
  auto stripped = model;
  echoed.erase("candidates");
  stripped.erase("candidates");
  CHECK(echoed == stripped);

  // Reusing the fitted model reproduces the prediction rasters.
  auto doc = base_config();
  doc["sli"] = {{"model", (ws.dir / "out_fit" / "sli_model.json").string()}};
  const auto reuse = ws.config(doc, "reuse.json");
  REQUIRE(ws.run({"predict", "--config", reuse.string(), "--output", (ws.dir / "reuse").string()}) == 0);
  CHECK(slurp(ws.dir / "reuse" / "sli_value.xyz") == slurp(ws.dir / "out_predict" / "sli_value.xyz"));
}

TEST_CASE("cli: reruns are byte identical") {
  const Workspace ws("sligeo_cli_repeat");
  auto doc = base_config();
  doc["output"]["raster_format"] = "esri_ascii";
  const auto cfg = ws.config(doc);
  REQUIRE(ws.run({"predict", "--config", cfg.string(), "--output", (ws.dir / "a").string()}) == 0);
  REQUIRE(ws.run({"predict", "--config", cfg.string(), "--output", (ws.dir / "b").string(), "--workers", "3"}) == 0);
  for (const auto& e : fs::directory_iterator(ws.dir / "a"))
    CHECK(slurp(e.path()) == slurp(ws.dir / "b" / e.path().filename()));
}

TEST_CASE("cli: exit codes") {
  const Workspace ws("sligeo_cli_codes");
  std::string err;
  CHECK(ws.run({}, &err) == 1);
  CHECK(ws.run({"predict"}, &err) == 1);
  CHECK(ws.run({"predict", "--config", (ws.dir / "absent.json").string()}, &err) == 1);

  auto doc = base_config();
  doc["sli"]["bogus"] = 1;
  CHECK(ws.run({"fit", "--config", ws.config(doc, "a.json").string()}, &err) == 1);
  CHECK(err.find("bogus") != std::string::npos);

  doc = base_config();
  doc["input"]["path"] = "nowhere.csv";
  CHECK(ws.run({"fit", "--config", ws.config(doc, "b.json").string()}, &err) == 1);

  std::ofstream(ws.dir / "broken.csv") << "x,y,value\n0,0,1\n1,1,oops\n";
  doc = base_config();
  doc["input"]["path"] = "broken.csv";
  CHECK(ws.run({"fit", "--config", ws.config(doc, "c.json").string()}, &err) == 2);
  CHECK(err.find("oops") != std::string::npos);

  std::ofstream(ws.dir / "tiny.csv") << "x,y,value\n0,0,1\n1,1,2\n2,0,3\n0,2,4\n";
  doc = base_config();
  doc["input"]["path"] = "tiny.csv";
  doc["sli"]["estimation"]["k"] = json::array({3});
  CHECK(ws.run({"fit", "--config", ws.config(doc, "d.json").string()}, &err) == 3);

  std::ofstream(ws.dir / "bad.json") << "{ not json";
  CHECK(ws.run({"fit", "--config", (ws.dir / "bad.json").string()}, &err) == 1);
}

TEST_CASE("config parsing") {
  const fs::path base = "/data";
  auto cfg = cli::parse_config(base_config(), base);
  CHECK(cfg.input.path == fs::path("/data/samples.csv"));
  CHECK(cfg.output_dir == fs::path("/data/out"));
  CHECK(cfg.seed == 3);
  CHECK(cfg.grid.grid->cols == 10);
  CHECK(cfg.sli.estimation.k_values == std::vector<std::size_t>{3});
  CHECK(cfg.validation.lpo->folds == 2);

  auto doc = base_config();
  doc["grid"] = {{"cell_size", 1.5}};
  CHECK(cli::parse_config(doc, base).grid.auto_cell_size == 1.5);
  doc["grid"] = {{"cell_size", 1.5}, {"cols", 3}};
  CHECK_THROWS_AS(cli::parse_config(doc, base), cli::ConfigError);

  doc = base_config();
  doc["sli"] = {{"estimation", {{"kernels", "all"}}}};
  CHECK(cli::parse_config(doc, base).sli.estimation.kernels.size() == kAllKernelFamilies.size());
  doc["sli"] = {{"params", {{"kernel", "gaussian"}, {"k", 2}, {"c1", 10}, {"mu", 2}}}};
  cfg = cli::parse_config(doc, base);
  CHECK(cfg.sli.params->kernel.family == KernelFamily::gaussian);
  CHECK_FALSE(cfg.sli.lambda_given);

  doc = base_config();
  doc["kriging"] = {{"model", {{"family", "spherical"}, {"sigma2", 8.05}, {"xi", 29.1}, {"c0", 1.07}}}};
  cfg = cli::parse_config(doc, base);
  CHECK(cfg.kriging.model->xi == 29.1);
  doc["compare"] = {{"bands", {3, 2, 1}}};
  CHECK_THROWS_AS(cli::parse_config(doc, base), cli::ConfigError);
  CHECK(cli::crc32_bytes("123456789") == 0xCBF43926u);
}
