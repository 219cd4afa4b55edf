// seep: generate synthetic hierarchies, detect hierarchical equitable
// partitions, score them, and run SNR sweeps.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "seep/errors.h"
#include "seep/evaluation.h"
#include "seep/hierarchy.h"
#include "seep/io.h"
#include "seep/rng.h"
#include "seep/synthetic.h"

namespace {

using nlohmann::json;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

struct ModelFlags {
  std::string model = "symmetric";
  int n = 0;
  int groups = 0;
  int group_size = 0;
  std::string schedule;
  double avg_degree = 0.0;
};

struct DetectFlags {
  int samples = 100;
  double gamma_rel = 0.05;
  int restarts = 10;
};

void AddModelFlags(CLI::App* cmd, ModelFlags& f) {
  cmd->add_option("--model", f.model,
                  "flat | assortative | disassortative | symmetric | asymmetric")
      ->capture_default_str();
  cmd->add_option("--n", f.n, "number of nodes");
  cmd->add_option("--groups", f.groups, "flat model: number of groups");
  cmd->add_option("--group-size", f.group_size, "flat model: nodes per group");
  cmd->add_option("--schedule", f.schedule,
                  "group counts coarse to fine, e.g. 3,9,27");
  cmd->add_option("--avg-degree", f.avg_degree,
                  "expected degree (flat default: group size)");
}

void AddDetectFlags(CLI::App* cmd, DetectFlags& f) {
  cmd->add_option("--samples", f.samples, "perturbation samples per level")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--gamma-rel", f.gamma_rel, "relative perturbation size")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--restarts", f.restarts, "k-means restarts")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

seep::DetectionConfig MakeDetectionConfig(const DetectFlags& f) {
  seep::DetectionConfig config;
  config.samples = f.samples;
  config.gamma_rel = f.gamma_rel;
  config.kmeans.restarts = f.restarts;
  config.bethe.kmeans.restarts = f.restarts;
  return config;
}

std::vector<int> ParseSchedule(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--schedule", "bad group count '" + item + "'");
    }
  }
  return out;
}

std::optional<double> ParseSnr(const std::string& text) {
  if (text == "max") return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw CLI::ValidationError("--snr", "expected a number or 'max'");
  }
}

seep::SynthSpec MakeSpec(const ModelFlags& f, std::optional<double> snr,
                         std::uint64_t seed) {
  seep::SynthSpec spec;
  spec.model = seep::ParseModelKind(f.model);
  spec.snr = snr;
  spec.seed = seed;
  if (spec.model == seep::ModelKind::kFlat) {
    if (f.groups <= 0 || f.group_size <= 0) {
      throw CLI::ValidationError("flat model needs --groups and --group-size");
    }
    spec.n = f.groups * f.group_size;
    spec.schedule = {f.groups};
    spec.avg_degree = f.avg_degree > 0 ? f.avg_degree : f.group_size;
  } else {
    if (f.n <= 0) throw CLI::ValidationError("--n is required");
    if (f.schedule.empty()) throw CLI::ValidationError("--schedule is required");
    if (!(f.avg_degree > 0)) throw CLI::ValidationError("--avg-degree is required");
    spec.n = f.n;
    spec.schedule = ParseSchedule(f.schedule);
    spec.avg_degree = f.avg_degree;
  }
  return spec;
}

json SpecMeta(const seep::SynthSpec& spec) {
  json m;
  m["model"] = seep::ModelKindName(spec.model);
  m["n"] = spec.n;
  m["schedule"] = spec.schedule;
  m["avg_degree"] = spec.avg_degree;
  if (spec.snr) {
    m["snr"] = *spec.snr;
  } else {
    m["snr"] = "max";
  }
  m["seed"] = spec.seed;
  return m;
}

void WriteText(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw seep::DataError("cannot write '" + path + "'");
  out << text;
}

json ReadJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw seep::DataError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw seep::DataError(path + ": " + e.what());
  }
}

int Threads(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("SEEP_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<double> SnrGrid(const std::string& range) {
  double a = 0, b = 0, step = 0;
  char c1 = 0, c2 = 0;
  std::stringstream ss(range);
  if (!(ss >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' ||
      !ss.eof()) {
    throw CLI::ValidationError("--snr-range", "expected a:b:step");
  }
  if (!(step > 0) || b < a) {
    throw CLI::ValidationError("--snr-range", "need step > 0 and a <= b");
  }
  std::vector<double> out;
  const int count = static_cast<int>(std::floor((b - a) / step + 1e-9)) + 1;
  for (int i = 0; i < count; ++i) out.push_back(a + i * step);
  return out;
}

std::string FormatNumber(double v) {
  std::ostringstream s;
  s.precision(10);
  s << v;
  return s.str();
}

struct BenchRow {
  double snr = 0;
  int rep = 0;
  std::uint64_t seed = 0;
  std::string status = "ok";
  int levels = 0;
  double precision = 0;
  double recall = 0;
  std::vector<double> level_ami;
};

BenchRow RunBenchmarkCase(const ModelFlags& model, const DetectFlags& detect,
                          double snr, int rep, std::uint64_t seed) {
  BenchRow row;
  row.snr = snr;
  row.rep = rep;
  row.seed = seed;
  try {
    const seep::SynthSpec spec = MakeSpec(model, snr, seed);
    const seep::SynthSample sample = seep::GenerateHierarchical(spec);
    const seep::HierarchyResult result = seep::InferHierarchy(
        sample.graph, MakeDetectionConfig(detect), seed);
    std::vector<seep::Partition> inferred;
    for (const auto& level : result.levels) inferred.push_back(level.composed);
    const seep::ScoreReport report =
        seep::ScoreHierarchy(sample.truth.partitions, inferred);
    row.levels = report.n_levels_inferred;
    row.precision = report.precision;
    row.recall = report.recall;
    for (int i = 0; i < report.n_levels_true; ++i) {
      row.level_ami.push_back(report.xi.row(i).maxCoeff());
    }
  } catch (const seep::InfeasibleError& e) {
    row.status = "infeasible";
  } catch (const seep::DataError& e) {
    row.status = "data_error";
  } catch (const seep::NumericalError& e) {
    row.status = "numerical_error";
  }
  return row;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical community detection via stochastic externally "
               "equitable partitions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "seep 0.1.0");

  // generate
  ModelFlags gen_model;
  std::string gen_snr = "max";
  std::uint64_t gen_seed = 0;
  std::string gen_out_dir, gen_edges, gen_truth;
  CLI::App* gen = app.add_subcommand("generate", "sample a synthetic network");
  AddModelFlags(gen, gen_model);
  gen->add_option("--snr", gen_snr, "signal-to-noise ratio or 'max'")
      ->capture_default_str();
  gen->add_option("--seed", gen_seed, "random seed")->capture_default_str();
  gen->add_option("--out-dir", gen_out_dir,
                  "directory for edges.tsv and truth.json");
  gen->add_option("--edges", gen_edges, "edge list output path");
  gen->add_option("--truth", gen_truth, "ground truth output path");

  // detect
  std::string det_edges, det_out;
  std::uint64_t det_seed = 0;
  std::optional<int> det_nodes;
  DetectFlags det_flags;
  CLI::App* det = app.add_subcommand("detect", "infer a hierarchy of partitions");
  det->add_option("--edges", det_edges, "edge list")->required();
  det->add_option("--out", det_out, "hierarchy JSON (default: stdout)");
  det->add_option("--seed", det_seed, "random seed")->capture_default_str();
  det->add_option("--nodes", det_nodes, "node count (default: from file)");
  AddDetectFlags(det, det_flags);

  // eval
  std::string ev_truth, ev_pred, ev_out;
  CLI::App* ev = app.add_subcommand("eval", "score a hierarchy against truth");
  ev->add_option("--truth", ev_truth, "truth JSON")->required();
  ev->add_option("--pred", ev_pred, "inferred hierarchy JSON")->required();
  ev->add_option("--out", ev_out, "scores JSON (default: stdout)");

  // benchmark
  ModelFlags bench_model;
  std::string bench_range, bench_out;
  int bench_reps = 1;
  int bench_threads = 0;
  std::uint64_t bench_seed = 0;
  DetectFlags bench_detect;
  CLI::App* bench =
      app.add_subcommand("benchmark", "sweep SNR and score detection");
  AddModelFlags(bench, bench_model);
  bench->add_option("--snr-range", bench_range, "a:b:step")->required();
  bench->add_option("--reps", bench_reps, "repetitions per SNR")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  bench->add_option("--out", bench_out, "CSV output (default: stdout)");
  bench->add_option("--seed", bench_seed, "base seed")->capture_default_str();
  bench->add_option("--threads", bench_threads,
                    "worker threads (default: SEEP_THREADS or all cores)");
  AddDetectFlags(bench, bench_detect);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) {
      const seep::SynthSpec spec = MakeSpec(gen_model, ParseSnr(gen_snr), gen_seed);
      std::string edges_path = gen_edges, truth_path = gen_truth;
      if (!gen_out_dir.empty()) {
        std::filesystem::create_directories(gen_out_dir);
        if (edges_path.empty()) edges_path = gen_out_dir + "/edges.tsv";
        if (truth_path.empty()) truth_path = gen_out_dir + "/truth.json";
      }
      if (edges_path.empty() || truth_path.empty()) {
        throw CLI::ValidationError("need --out-dir or both --edges and --truth");
      }
      const seep::SynthSample sample = seep::GenerateHierarchical(spec);
      std::ostringstream edges;
      seep::WriteEdgeList(edges, sample.graph);
      WriteText(edges_path, edges.str());
      WriteText(truth_path,
                seep::TruthToJson(sample.truth, SpecMeta(spec)).dump(2) + "\n");
      std::cerr << "generated " << sample.graph.num_nodes() << " nodes, "
                << sample.graph.num_edges() << " edges, "
                << sample.truth.partitions.size() << " truth levels\n";
    } else if (*det) {
      const seep::Graph graph = seep::ReadEdgeListFile(det_edges, det_nodes);
      const seep::HierarchyResult result =
          seep::InferHierarchy(graph, MakeDetectionConfig(det_flags), det_seed);
      json meta = {{"seed", det_seed},
                   {"samples", det_flags.samples},
                   {"gamma_rel", det_flags.gamma_rel},
                   {"restarts", det_flags.restarts},
                   {"edges", det_edges}};
      WriteText(det_out, seep::HierarchyToJson(result, meta).dump(2) + "\n");
      std::cerr << "levels:";
      for (const auto& level : result.levels) std::cerr << ' ' << level.k;
      std::cerr << '\n';
    } else if (*ev) {
      const auto truth = seep::PartitionsFromJson(ReadJson(ev_truth));
      const auto pred = seep::PartitionsFromJson(ReadJson(ev_pred));
      const seep::ScoreReport report = seep::ScoreHierarchy(truth, pred);
      WriteText(ev_out, seep::ScoreToJson(report).dump(2) + "\n");
    } else if (*bench) {
      const std::vector<double> grid = SnrGrid(bench_range);
      // Validate the model flags up front; per-row failures are reported in
      // the status column instead.
      const seep::SynthSpec probe = MakeSpec(bench_model, grid.front(), 0);
      const int n_truth = seep::ParseModelKind(bench_model.model) ==
                                  seep::ModelKind::kFlat
                              ? 1
                              : static_cast<int>(probe.schedule.size());
      const int total = static_cast<int>(grid.size()) * bench_reps;
      std::vector<BenchRow> rows(total);
      std::atomic<int> next{0};
      std::mutex log_mutex;
      auto worker = [&]() {
        for (int i = next++; i < total; i = next++) {
          const int s = i / bench_reps, rep = i % bench_reps;
          const std::uint64_t seed = seep::SubSeed(bench_seed, i);
          rows[i] = RunBenchmarkCase(bench_model, bench_detect, grid[s], rep, seed);
          std::lock_guard<std::mutex> lock(log_mutex);
          std::cerr << "snr " << grid[s] << " rep " << rep << ": "
                    << rows[i].status << '\n';
        }
      };
      const int threads = std::min(Threads(bench_threads), total);
      std::vector<std::thread> pool;
      for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();

      std::ostringstream csv;
      csv << "model,snr,rep,seed,status,n_levels_inferred,precision,recall";
      for (int i = 1; i <= n_truth; ++i) csv << ",ami_level_" << i;
      csv << '\n';
      for (const BenchRow& r : rows) {
        csv << bench_model.model << ',' << FormatNumber(r.snr) << ',' << r.rep
            << ',' << r.seed << ',' << r.status << ',';
        if (r.status == "ok") {
          csv << r.levels << ',' << FormatNumber(r.precision) << ','
              << FormatNumber(r.recall);
          for (double a : r.level_ami) csv << ',' << FormatNumber(a);
        } else {
          csv << ",,";
          for (int i = 0; i < n_truth; ++i) csv << ',';
        }
        csv << '\n';
      }
      WriteText(bench_out, csv.str());
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const seep::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const seep::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
