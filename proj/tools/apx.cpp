#include "apx/experiments.hpp"
#include "apx/greens.hpp"
#include "apx/lineops.hpp"
#include "apx/numkit.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr int kValidation = 2;
constexpr int kNumerical = 3;

double scalar_from_json(const std::string& key, const json& v) {
  if (v.is_boolean()) return v.get<bool>() ? 1.0 : 0.0;
  if (v.is_number()) return v.get<double>();
  throw std::invalid_argument("config value for '" + key + "' is not a scalar number");
}

double scalar_from_text(const std::string& key, const std::string& text) {
  if (text == "true") return 1.0;
  if (text == "false") return 0.0;
  std::size_t used = 0;
  double v;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw std::invalid_argument("value for '" + key + "' is not a number: " + text);
  return v;
}

apx::Params load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file " + path);
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config is not valid JSON: " + std::string(e.what()));
  }
  if (!cfg.is_object()) throw std::invalid_argument("config must be a JSON object");
  const json& params = cfg.contains("params") ? cfg["params"] : cfg;
  if (!params.is_object()) throw std::invalid_argument("config params must be an object");
  apx::Params out;
  for (const auto& [k, v] : params.items()) out[k] = scalar_from_json(k, v);
  return out;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

int run(const std::string& name, const std::string& config, const std::vector<std::string>& sets,
        std::string out_dir, int jobs) {
  apx::ExperimentSpec spec;
  spec.name = name;
  const apx::ExperimentDef& def = apx::find_experiment(name);
  if (!config.empty()) spec.params = load_config(config);
  for (const std::string& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw std::invalid_argument("--set expects key=value, got " + s);
    const std::string key = s.substr(0, eq);
    spec.params[key] = scalar_from_text(key, s.substr(eq + 1));
  }
  const apx::Params params = apx::resolve_params(def, spec.params);
  if (jobs < 1) throw std::invalid_argument("--jobs must be at least 1");

  const apx::ExperimentOutput result = def.run(params, apx::RunContext{jobs});

  if (const char* env = std::getenv("APX_OUT"); env && *env) out_dir = env;
  fs::create_directories(out_dir);
  json outputs = json::array();
  for (const apx::Table& t : result.tables) {
    const fs::path file = fs::path(out_dir) / (name + (t.suffix.empty() ? "" : "_" + t.suffix) + ".csv");
    std::ofstream os(file);
    if (!os) throw std::runtime_error("cannot write " + file.string());
    apx::write_csv(os, t);
    spec.outputs.push_back(file.string());
    outputs.push_back(file.filename().string());
  }
  json summary;
  summary["experiment"] = name;
  summary["params"] = json::object();
  for (const auto& [k, v] : params) summary["params"][k] = v;
  summary["metrics"] = json::object();
  for (const apx::Metric& m : result.metrics) summary["metrics"][m.name] = number_or_null(m.value);
  summary["outputs"] = outputs;
  const fs::path jfile = fs::path(out_dir) / (name + ".json");
  std::ofstream js(jfile);
  if (!js) throw std::runtime_error("cannot write " + jfile.string());
  js << summary.dump(2) << '\n';
  for (const std::string& f : spec.outputs) std::cout << f << '\n';
  std::cout << jfile.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asymptotic and perturbation experiments with numerical oracles"};
  std::string experiment, config, out_dir = "apx_out";
  std::vector<std::string> sets;
  int jobs = 1;
  bool list = false;
  app.add_option("experiment", experiment, "experiment name, or 'list'");
  app.add_option("--config", config, "JSON file with parameter values");
  app.add_option("--set", sets, "override one parameter, key=value")->allow_extra_args(false);
  app.add_option("--out", out_dir, "output directory (APX_OUT takes precedence)");
  app.add_option("--jobs", jobs, "worker threads for parameter sweeps");
  app.add_flag("--list", list, "list experiments");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidation;
  }

  if (list || experiment == "list") {
    for (const apx::ExperimentDef& d : apx::list_experiments()) std::cout << d.name << "  " << d.description << '\n';
    return 0;
  }
  if (experiment.empty()) {
    std::cerr << "no experiment given; try 'apx list'\n";
    return kValidation;
  }
  try {
    return run(experiment, config, sets, out_dir, jobs);
  } catch (const apx::DivergedError& e) {
    std::cerr << "numerical failure: " << e.what() << " (t = " << e.last_time << ")\n";
    return kNumerical;
  } catch (const apx::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const apx::Unsolvable& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const apx::NoSolution& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
