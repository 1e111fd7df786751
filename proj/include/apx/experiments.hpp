#pragma once

#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace apx {

using Params = std::map<std::string, double>;
using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::string suffix;  // empty for the main file, else "<experiment>_<suffix>.csv"
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

struct Metric {
  std::string name;
  double value;
};

struct ExperimentOutput {
  std::vector<Table> tables;
  std::vector<Metric> metrics;  // theory and measured values side by side
};

struct RunContext {
  int jobs = 1;
};

struct ExperimentDef {
  std::string name;
  std::string description;
  Params defaults;
  std::function<ExperimentOutput(const Params&, const RunContext&)> run;
};

struct ExperimentSpec {
  std::string name;
  Params params;  // overrides on top of the defaults
  std::vector<std::string> outputs;
};

// Lexicographic by name.
const std::vector<ExperimentDef>& list_experiments();

const ExperimentDef& find_experiment(const std::string& name);  // std::invalid_argument if unknown

// Defaults merged with overrides; unknown keys raise std::invalid_argument.
Params resolve_params(const ExperimentDef& def, const Params& overrides);

ExperimentOutput run_experiment(const ExperimentSpec& spec, const RunContext& ctx = {});

// 17 significant digits, '.' decimal, header row first.
void write_csv(std::ostream& os, const Table& t);
std::string format_number(double v);

// Runs fn(i) for i in [0, n) on up to `jobs` threads; fn writes disjoint slots.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn);

}  // namespace apx
