// Experiment runner for the ds2cf library. Talks to the core strictly
// through the C interface; everything here is protocol and bookkeeping.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ds2cf.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitValidation = 2;

struct CliError {
  int exit_code;
  std::string message;
};

// ---------- small utilities ----------

std::string fmt(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t x = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buffer[20];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(value));
  return buffer;
}

void check(ds2cf_status status, const std::string& what) {
  if (status != DS2CF_OK)
    throw CliError{kExitRuntime, what + ": " + ds2cf_status_name(status) + " (" +
                                     ds2cf_last_error() + ")"};
}

// RAII over the C handles
struct Dataset {
  ds2cf_dataset* ptr = nullptr;
  Dataset() = default;
  explicit Dataset(ds2cf_dataset* p) : ptr(p) {}
  Dataset(Dataset&& other) noexcept : ptr(other.ptr) { other.ptr = nullptr; }
  Dataset& operator=(Dataset&& other) noexcept {
    std::swap(ptr, other.ptr);
    return *this;
  }
  Dataset(const Dataset&) = delete;
  ~Dataset() { ds2cf_dataset_free(ptr); }
};

struct Split {
  ds2cf_split* ptr = nullptr;
  ~Split() { ds2cf_split_free(ptr); }
  Split() = default;
  Split(const Split&) = delete;
};

struct Model {
  ds2cf_model* ptr = nullptr;
  ~Model() { ds2cf_model_free(ptr); }
  Model() = default;
  Model(const Model&) = delete;
};

// ---------- configuration ----------

struct Config {
  std::string dataset = "synthetic";  // synthetic | csv | idx
  std::string csv_path;
  std::string csv_orientation = "rows";  // rows | columns
  std::string csv_labels = "first";      // first | none
  std::string idx_images;
  std::string idx_labels;
  int synthetic_classes = 5;
  int synthetic_per_class = 40;
  int synthetic_dim = 64;
  double synthetic_separation = 1.0;
  double synthetic_noise = 0.45;

  std::string method = "ds2cf";  // ds2cf | cf | ccf
  int k = 3;
  double labeled_proportion = 0.4;
  double alpha = 0.1;
  double beta = 1e-4;
  double gamma = 1e-3;
  int layers = 3;
  double epsilon = 1e-3;
  int max_iters = 200;
  std::uint64_t seed = 0;
  int repeats = 10;
  int restarts = 30;
  int kmeans_max_iters = 100;
  bool trace = true;
  int threads = 0;  // 0 = hardware default
};

bool parse_bool(const std::string& value, bool& out) {
  if (value == "true" || value == "1") {
    out = true;
    return true;
  }
  if (value == "false" || value == "0") {
    out = false;
    return true;
  }
  return false;
}

Config parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw CliError{kExitValidation, "cannot open config file: " + path};

  Config config;
  std::vector<std::string> failures;
  std::map<std::string, std::string> seen;

  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    if (strip(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      failures.push_back("line " + std::to_string(line_number) + ": expected key = value");
      continue;
    }
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    if (seen.count(key)) failures.push_back("duplicate key '" + key + "'");
    seen[key] = value;

    const auto as_int = [&](int& slot) {
      try {
        slot = std::stoi(value);
      } catch (...) {
        failures.push_back("key '" + key + "': not an integer: " + value);
      }
    };
    const auto as_double = [&](double& slot) {
      try {
        slot = std::stod(value);
      } catch (...) {
        failures.push_back("key '" + key + "': not a number: " + value);
      }
    };
    const auto as_seed = [&](std::uint64_t& slot) {
      try {
        slot = std::stoull(value);
      } catch (...) {
        failures.push_back("key '" + key + "': not a nonnegative integer: " + value);
      }
    };

    if (key == "dataset") config.dataset = value;
    else if (key == "csv.path") config.csv_path = value;
    else if (key == "csv.orientation") config.csv_orientation = value;
    else if (key == "csv.labels") config.csv_labels = value;
    else if (key == "idx.images") config.idx_images = value;
    else if (key == "idx.labels") config.idx_labels = value;
    else if (key == "synthetic.classes") as_int(config.synthetic_classes);
    else if (key == "synthetic.per_class") as_int(config.synthetic_per_class);
    else if (key == "synthetic.dim") as_int(config.synthetic_dim);
    else if (key == "synthetic.separation") as_double(config.synthetic_separation);
    else if (key == "synthetic.noise") as_double(config.synthetic_noise);
    else if (key == "method") config.method = value;
    else if (key == "k") as_int(config.k);
    else if (key == "labeled_proportion") as_double(config.labeled_proportion);
    else if (key == "alpha") as_double(config.alpha);
    else if (key == "beta") as_double(config.beta);
    else if (key == "gamma") as_double(config.gamma);
    else if (key == "layers") as_int(config.layers);
    else if (key == "epsilon") as_double(config.epsilon);
    else if (key == "max_iters") as_int(config.max_iters);
    else if (key == "seed") as_seed(config.seed);
    else if (key == "repeats") as_int(config.repeats);
    else if (key == "restarts") as_int(config.restarts);
    else if (key == "kmeans_max_iters") as_int(config.kmeans_max_iters);
    else if (key == "trace") {
      if (!parse_bool(value, config.trace))
        failures.push_back("key 'trace': expected true or false");
    } else if (key == "threads") as_int(config.threads);
    else failures.push_back("unknown key '" + key + "'");
  }

  // structural validation, reported all at once
  if (config.dataset != "synthetic" && config.dataset != "csv" && config.dataset != "idx")
    failures.push_back("dataset must be synthetic, csv or idx");
  if (config.dataset == "csv") {
    if (config.csv_path.empty())
      failures.push_back("csv.path is required for dataset = csv");
    else if (!fs::exists(config.csv_path))
      failures.push_back("csv.path does not exist: " + config.csv_path);
    if (config.csv_orientation != "rows" && config.csv_orientation != "columns")
      failures.push_back("csv.orientation must be rows or columns");
    if (config.csv_labels != "first" && config.csv_labels != "none")
      failures.push_back("csv.labels must be first or none");
  }
  if (config.dataset == "idx") {
    for (const auto& [name, p] :
         {std::pair<std::string, std::string>{"idx.images", config.idx_images},
          {"idx.labels", config.idx_labels}}) {
      if (p.empty())
        failures.push_back(name + " is required for dataset = idx");
      else if (!fs::exists(p))
        failures.push_back(name + " does not exist: " + p);
    }
  }
  if (config.method != "ds2cf" && config.method != "cf" && config.method != "ccf")
    failures.push_back("method must be ds2cf, cf or ccf");
  if (config.k < 2) failures.push_back("k must be at least 2");
  if (config.labeled_proportion <= 0.0 || config.labeled_proportion > 1.0)
    failures.push_back("labeled_proportion must be in (0, 1]");
  if (config.layers < 1) failures.push_back("layers must be positive");
  if (config.epsilon <= 0.0) failures.push_back("epsilon must be positive");
  if (config.max_iters < 1) failures.push_back("max_iters must be positive");
  if (config.repeats < 1) failures.push_back("repeats must be positive");
  if (config.restarts < 1) failures.push_back("restarts must be positive");
  if (config.alpha < 0 || config.beta < 0 || config.gamma < 0)
    failures.push_back("alpha, beta and gamma must be nonnegative");

  if (!failures.empty()) {
    std::string message = "config validation failed:";
    for (const auto& f : failures) message += "\n  - " + f;
    throw CliError{kExitValidation, message};
  }
  return config;
}

std::vector<std::string> resolved_config_lines(const Config& c) {
  std::vector<std::string> lines;
  lines.push_back("dataset = " + c.dataset);
  if (c.dataset == "csv") {
    lines.push_back("csv.path = " + c.csv_path);
    lines.push_back("csv.orientation = " + c.csv_orientation);
    lines.push_back("csv.labels = " + c.csv_labels);
  }
  if (c.dataset == "idx") {
    lines.push_back("idx.images = " + c.idx_images);
    lines.push_back("idx.labels = " + c.idx_labels);
  }
  if (c.dataset == "synthetic") {
    lines.push_back("synthetic.classes = " + std::to_string(c.synthetic_classes));
    lines.push_back("synthetic.per_class = " + std::to_string(c.synthetic_per_class));
    lines.push_back("synthetic.dim = " + std::to_string(c.synthetic_dim));
    lines.push_back("synthetic.separation = " + fmt(c.synthetic_separation));
    lines.push_back("synthetic.noise = " + fmt(c.synthetic_noise));
  }
  lines.push_back("method = " + c.method);
  lines.push_back("k = " + std::to_string(c.k));
  lines.push_back("labeled_proportion = " + fmt(c.labeled_proportion));
  lines.push_back("alpha = " + fmt(c.alpha));
  lines.push_back("beta = " + fmt(c.beta));
  lines.push_back("gamma = " + fmt(c.gamma));
  lines.push_back("layers = " + std::to_string(c.layers));
  lines.push_back("epsilon = " + fmt(c.epsilon));
  lines.push_back("max_iters = " + std::to_string(c.max_iters));
  lines.push_back("seed = " + std::to_string(c.seed));
  lines.push_back("repeats = " + std::to_string(c.repeats));
  lines.push_back("restarts = " + std::to_string(c.restarts));
  lines.push_back("kmeans_max_iters = " + std::to_string(c.kmeans_max_iters));
  lines.push_back("trace = " + std::string(c.trace ? "true" : "false"));
  return lines;
}

std::string config_hash(const Config& c) {
  std::string all;
  for (const auto& line : resolved_config_lines(c)) all += line + "\n";
  return hex64(fnv1a(all));
}

void write_header_block(std::ofstream& out, const Config& c) {
  out << "# config_hash = " << config_hash(c) << "\n";
  for (const auto& line : resolved_config_lines(c)) out << "# " << line << "\n";
}

// ---------- experiment protocol ----------

Dataset load_dataset(const Config& c) {
  ds2cf_dataset* ptr = nullptr;
  if (c.dataset == "synthetic") {
    check(ds2cf_dataset_synthetic_blobs(c.synthetic_classes, c.synthetic_per_class,
                                        c.synthetic_dim, c.synthetic_separation,
                                        c.synthetic_noise, mix_seed(c.seed, 1), &ptr),
          "synthetic generation");
  } else if (c.dataset == "csv") {
    check(ds2cf_dataset_from_csv(c.csv_path.c_str(), c.csv_orientation == "rows",
                                 c.csv_labels == "first", &ptr),
          "csv load");
  } else {
    check(ds2cf_dataset_from_idx(c.idx_images.c_str(), c.idx_labels.c_str(), &ptr), "idx load");
  }
  return Dataset(ptr);
}

struct RepeatResult {
  std::vector<int> classes;
  double ac = 0.0;
  double f = 0.0;
  double f_classwise = 0.0;
};

RepeatResult run_repeat(const Config& c, const Dataset& full, int repeat,
                        const std::string& artifact_dir) {
  const int total_classes = ds2cf_dataset_num_classes(full.ptr);

  // sample K categories, reproducibly per (seed, repeat)
  std::vector<int> ids(total_classes);
  for (int i = 0; i < total_classes; ++i) ids[i] = i + 1;
  std::uint64_t state = mix_seed(c.seed, 1000 + std::uint64_t(repeat));
  for (int i = 0; i < c.k; ++i) {
    state = mix_seed(state, i);
    const int j = i + int(state % std::uint64_t(total_classes - i));
    std::swap(ids[i], ids[j]);
  }
  RepeatResult result;
  result.classes.assign(ids.begin(), ids.begin() + c.k);
  std::sort(result.classes.begin(), result.classes.end());

  Dataset sub;
  check(ds2cf_dataset_select_classes(full.ptr, result.classes.data(), c.k, &sub.ptr),
        "class selection");
  Dataset norm;
  check(ds2cf_dataset_normalized(sub.ptr, &norm.ptr), "normalization");

  Split split;
  check(ds2cf_split_create(norm.ptr, c.labeled_proportion,
                           mix_seed(c.seed, 2000 + std::uint64_t(repeat)), &split.ptr),
        "split");

  const int rank = c.k + 1;
  const std::uint64_t fit_seed = mix_seed(c.seed, 3000 + std::uint64_t(repeat));
  Model model;
  if (c.method == "cf") {
    check(ds2cf_cf_fit(norm.ptr, rank, c.max_iters, c.epsilon, fit_seed, &model.ptr), "cf fit");
  } else if (c.method == "ccf") {
    check(ds2cf_ccf_fit(norm.ptr, split.ptr, rank, c.max_iters, c.epsilon, fit_seed, &model.ptr),
          "ccf fit");
  } else {
    ds2cf_config fc;
    ds2cf_config_defaults(&fc);
    fc.alpha = c.alpha;
    fc.beta = c.beta;
    fc.gamma = c.gamma;
    fc.layers = c.layers;
    fc.rank = rank;
    fc.epsilon = c.epsilon;
    fc.max_iters_per_layer = c.max_iters;
    fc.seed = fit_seed;
    fc.record_trace = c.trace ? 1 : 0;
    check(ds2cf_fit(norm.ptr, split.ptr, &fc, &model.ptr), "ds2cf fit");
  }

  int rows = 0, cols = 0;
  check(ds2cf_model_representation_size(model.ptr, &rows, &cols), "representation size");
  std::vector<double> rep(std::size_t(rows) * cols);
  check(ds2cf_model_representation(model.ptr, rep.data()), "representation");

  std::vector<int> assignment(rows);
  check(ds2cf_kmeans_cosine(rep.data(), rows, cols, c.k, c.restarts, c.kmeans_max_iters,
                            mix_seed(c.seed, 4000 + std::uint64_t(repeat)), assignment.data(),
                            nullptr),
        "kmeans");

  std::vector<int> truth(rows);
  check(ds2cf_dataset_labels(norm.ptr, truth.data()), "labels");
  check(ds2cf_clustering_accuracy(assignment.data(), truth.data(), rows, &result.ac), "accuracy");
  check(ds2cf_pairwise_f_measure(assignment.data(), truth.data(), rows, &result.f), "f-measure");
  check(ds2cf_classwise_f_measure(assignment.data(), truth.data(), rows, &result.f_classwise),
        "class-wise f-measure");

  if (!artifact_dir.empty()) {
    fs::create_directories(artifact_dir);
    std::string header = "config_hash = " + config_hash(c) + "\nrepeat = " +
                         std::to_string(repeat) + "\nseed = " + std::to_string(c.seed);
    check(ds2cf_model_export_csv(model.ptr, "representation",
                                 (artifact_dir + "/representation.csv").c_str(), header.c_str()),
          "representation export");
    if (c.trace)
      check(ds2cf_model_export_csv(model.ptr, "trace", (artifact_dir + "/trace.csv").c_str(),
                                   header.c_str()),
            "trace export");
    if (c.method == "ds2cf") {
      check(ds2cf_model_export_csv(model.ptr, "sv", (artifact_dir + "/sv.csv").c_str(),
                                   header.c_str()),
            "sv export");
      check(ds2cf_model_export_csv(model.ptr, "su", (artifact_dir + "/su.csv").c_str(),
                                   header.c_str()),
            "su export");
      check(ds2cf_model_export_csv(model.ptr, "q", (artifact_dir + "/q.csv").c_str(),
                                   header.c_str()),
            "q export");
    }
  }
  return result;
}

struct Aggregate {
  double mean_ac = 0.0, std_ac = 0.0, mean_f = 0.0, std_f = 0.0;
  double mean_fc = 0.0;
};

Aggregate aggregate(const std::vector<RepeatResult>& results) {
  Aggregate agg;
  const double n = double(results.size());
  for (const auto& r : results) {
    agg.mean_ac += r.ac;
    agg.mean_f += r.f;
    agg.mean_fc += r.f_classwise;
  }
  agg.mean_ac /= n;
  agg.mean_f /= n;
  agg.mean_fc /= n;
  if (results.size() > 1) {
    double ssq_ac = 0.0, ssq_f = 0.0;
    for (const auto& r : results) {
      ssq_ac += (r.ac - agg.mean_ac) * (r.ac - agg.mean_ac);
      ssq_f += (r.f - agg.mean_f) * (r.f - agg.mean_f);
    }
    agg.std_ac = std::sqrt(ssq_ac / (n - 1.0));
    agg.std_f = std::sqrt(ssq_f / (n - 1.0));
  }
  return agg;
}

std::vector<RepeatResult> run_protocol(const Config& c, const Dataset& full,
                                       bool write_artifacts, const std::string& out_dir) {
  const int total_classes = ds2cf_dataset_num_classes(full.ptr);
  if (total_classes == 0)
    throw CliError{kExitValidation, "dataset carries no labels; the protocol needs classes"};
  if (total_classes < c.k)
    throw CliError{kExitValidation, "dataset has " + std::to_string(total_classes) +
                                        " classes but k = " + std::to_string(c.k)};
  std::vector<RepeatResult> results;
  for (int repeat = 0; repeat < c.repeats; ++repeat) {
    char dirname[32];
    std::snprintf(dirname, sizeof(dirname), "repeat_%02d", repeat);
    results.push_back(run_repeat(c, full, repeat,
                                 write_artifacts ? out_dir + "/" + dirname : std::string()));
  }
  return results;
}

int threads_for(const Config& c, std::size_t cells) {
  int n = c.threads > 0 ? c.threads : int(std::thread::hardware_concurrency());
  n = std::max(1, std::min({n, 8, int(cells)}));
  return n;
}

// ---------- commands ----------

int cmd_run(const Config& config, const std::string& out_dir, bool fmeasure_variant) {
  fs::create_directories(out_dir);
  const Dataset full = load_dataset(config);
  const auto results = run_protocol(config, full, true, out_dir);
  const auto agg = aggregate(results);

  {
    std::ofstream out(out_dir + "/repeats.csv");
    write_header_block(out, config);
    out << "repeat,classes,ac,f" << (fmeasure_variant ? ",f_classwise" : "") << "\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
      std::string classes;
      for (std::size_t j = 0; j < results[i].classes.size(); ++j) {
        if (j) classes += ';';
        classes += std::to_string(results[i].classes[j]);
      }
      out << i << ',' << classes << ',' << fmt(results[i].ac) << ',' << fmt(results[i].f);
      if (fmeasure_variant) out << ',' << fmt(results[i].f_classwise);
      out << "\n";
    }
  }
  {
    std::ofstream out(out_dir + "/summary.csv");
    write_header_block(out, config);
    out << "method,k,repeats,mean_ac,std_ac,mean_f,std_f"
        << (fmeasure_variant ? ",mean_f_classwise" : "") << "\n";
    out << config.method << ',' << config.k << ',' << config.repeats << ',' << fmt(agg.mean_ac)
        << ',' << fmt(agg.std_ac) << ',' << fmt(agg.mean_f) << ',' << fmt(agg.std_f);
    if (fmeasure_variant) out << ',' << fmt(agg.mean_fc);
    out << "\n";
  }
  std::cout << "run: mean AC " << fmt(agg.mean_ac) << ", mean F " << fmt(agg.mean_f) << " over "
            << config.repeats << " repeats -> " << out_dir << "\n";
  return 0;
}

struct GridCell {
  int stage;
  double alpha, beta, gamma;
  Aggregate agg;
};

int cmd_grid(const Config& base, const std::string& out_dir) {
  fs::create_directories(out_dir);
  const Dataset full = load_dataset(base);

  const std::vector<double> candidates = {1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0,
                                          1e1,  1e2,  1e3,  1e4,  1e5};

  const auto evaluate_cell = [&](double alpha, double beta, double gamma) {
    Config c = base;
    c.alpha = alpha;
    c.beta = beta;
    c.gamma = gamma;
    c.trace = false;
    return aggregate(run_protocol(c, full, false, out_dir));
  };

  const auto run_cells = [&](std::vector<GridCell>& cells) {
    std::atomic<std::size_t> next{0};
    const int workers = threads_for(base, cells.size());
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= cells.size()) return;
          cells[i].agg = evaluate_cell(cells[i].alpha, cells[i].beta, cells[i].gamma);
        }
      });
    }
    for (auto& th : pool) th.join();
  };

  // stage 1: gamma pinned to 1, alpha x beta
  std::vector<GridCell> stage1;
  for (double alpha : candidates)
    for (double beta : candidates) stage1.push_back({1, alpha, beta, 1.0, {}});
  run_cells(stage1);

  std::size_t best1 = 0;
  for (std::size_t i = 1; i < stage1.size(); ++i)
    if (stage1[i].agg.mean_ac > stage1[best1].agg.mean_ac) best1 = i;

  // stage 2: gamma sweep at the selected alpha, beta
  std::vector<GridCell> stage2;
  for (double gamma : candidates)
    stage2.push_back({2, stage1[best1].alpha, stage1[best1].beta, gamma, {}});
  run_cells(stage2);

  std::vector<GridCell> all = stage1;
  all.insert(all.end(), stage2.begin(), stage2.end());
  std::size_t best = 0;
  for (std::size_t i = 1; i < all.size(); ++i)
    if (all[i].agg.mean_ac > all[best].agg.mean_ac) best = i;

  std::ofstream out(out_dir + "/grid.csv");
  write_header_block(out, base);
  out << "stage,alpha,beta,gamma,mean_ac,std_ac,mean_f,std_f,best\n";
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto& cell = all[i];
    out << cell.stage << ',' << fmt(cell.alpha) << ',' << fmt(cell.beta) << ','
        << fmt(cell.gamma) << ',' << fmt(cell.agg.mean_ac) << ',' << fmt(cell.agg.std_ac) << ','
        << fmt(cell.agg.mean_f) << ',' << fmt(cell.agg.std_f) << ',' << (i == best ? 1 : 0)
        << "\n";
  }
  std::cout << "grid: best alpha " << fmt(all[best].alpha) << ", beta " << fmt(all[best].beta)
            << ", gamma " << fmt(all[best].gamma) << " with mean AC " << fmt(all[best].agg.mean_ac)
            << " -> " << out_dir << "/grid.csv\n";
  return 0;
}

int cmd_ablate(const Config& base, const std::string& axis, const std::string& out_dir) {
  if (axis != "layers" && axis != "labeled_proportion")
    throw CliError{kExitValidation, "axis must be layers or labeled_proportion"};
  fs::create_directories(out_dir);
  const Dataset full = load_dataset(base);

  struct Point {
    double value;
    Config config;
    Aggregate agg;
  };
  std::vector<Point> points;
  if (axis == "layers") {
    for (int m = 1; m <= 10; ++m) {
      Config c = base;
      c.layers = m;
      c.trace = false;
      points.push_back({double(m), c, {}});
    }
  } else {
    for (int i = 1; i <= 9; ++i) {
      Config c = base;
      c.labeled_proportion = 0.1 * i;
      c.trace = false;
      points.push_back({0.1 * i, c, {}});
    }
  }

  std::atomic<std::size_t> next{0};
  const int workers = threads_for(base, points.size());
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= points.size()) return;
        points[i].agg = aggregate(run_protocol(points[i].config, full, false, out_dir));
      }
    });
  }
  for (auto& th : pool) th.join();

  std::ofstream out(out_dir + "/ablate_" + axis + ".csv");
  write_header_block(out, base);
  out << "axis,value,mean_ac,std_ac,mean_f,std_f,config_hash\n";
  for (const auto& point : points) {
    out << axis << ',' << fmt(point.value) << ',' << fmt(point.agg.mean_ac) << ','
        << fmt(point.agg.std_ac) << ',' << fmt(point.agg.mean_f) << ',' << fmt(point.agg.std_f)
        << ',' << config_hash(point.config) << "\n";
  }
  std::cout << "ablate(" << axis << "): " << points.size() << " points -> " << out_dir << "\n";
  return 0;
}

int cmd_export(const std::string& run_dir, const std::string& artifact, int repeat,
               const std::string& out_path) {
  const std::set<std::string> known = {"sv", "su", "q", "trace", "representation"};
  if (!known.count(artifact))
    throw CliError{kExitValidation, "unknown artifact '" + artifact + "'"};
  char dirname[32];
  std::snprintf(dirname, sizeof(dirname), "repeat_%02d", repeat);
  const fs::path source = fs::path(run_dir) / dirname / (artifact + ".csv");
  if (!fs::exists(source))
    throw CliError{kExitRuntime, "artifact not found: " + source.string()};
  fs::create_directories(fs::path(out_path).parent_path().empty()
                             ? fs::path(".")
                             : fs::path(out_path).parent_path());
  fs::copy_file(source, out_path, fs::copy_options::overwrite_existing);
  std::cout << "export: " << source.string() << " -> " << out_path << "\n";
  return 0;
}

int cmd_synth(const Config& config, const std::string& out_dir) {
  fs::create_directories(out_dir);
  const Dataset ds = load_dataset(config);
  const int rows = ds2cf_dataset_rows(ds.ptr);
  const int cols = ds2cf_dataset_cols(ds.ptr);
  std::vector<double> values(std::size_t(rows) * cols);
  check(ds2cf_dataset_values(ds.ptr, values.data()), "values");
  std::vector<int> labels(cols);
  check(ds2cf_dataset_labels(ds.ptr, labels.data()), "labels");

  // rows-are-samples with a leading label column; loadable back via csv
  const std::string path = out_dir + "/data.csv";
  std::ofstream out(path);
  write_header_block(out, config);
  for (int j = 0; j < cols; ++j) {
    out << labels[j];
    for (int i = 0; i < rows; ++i) out << ',' << fmt(values[std::size_t(j) * rows + i]);
    out << "\n";
  }
  std::cout << "synth: " << cols << " samples x " << rows << " features -> " << path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ds2cf experiment runner"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", axis = "layers", run_dir, artifact = "sv",
              out_path = "export.csv";
  int repeat = 0;
  bool fmeasure_variant = false;
  std::int64_t seed_override = -1;

  const auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* opt = cmd->add_option("--config", config_path, "key = value configuration file");
    if (needs_config) opt->required();
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--seed", seed_override, "override the config seed");
    cmd->add_flag("--fmeasure-variant", fmeasure_variant,
                  "also report the class-wise F-measure");
  };

  auto* run = app.add_subcommand("run", "category-sampled clustering runs with a summary");
  add_common(run, true);
  auto* grid = app.add_subcommand("grid", "two-stage alpha/beta then gamma search");
  add_common(grid, true);
  auto* ablate = app.add_subcommand("ablate", "sweep layers or labeled proportion");
  add_common(ablate, true);
  ablate->add_option("--axis", axis, "layers | labeled_proportion");
  auto* exp = app.add_subcommand("export", "copy a stored artifact out of a run directory");
  exp->add_option("--run", run_dir, "run directory produced by `run`")->required();
  exp->add_option("--artifact", artifact, "sv | su | q | trace | representation");
  exp->add_option("--repeat", repeat, "repeat index to read from");
  exp->add_option("--out", out_path, "destination CSV path");
  auto* synth = app.add_subcommand("synth", "write the configured synthetic dataset as CSV");
  add_common(synth, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (exp->parsed()) return cmd_export(run_dir, artifact, repeat, out_path);

    Config config = parse_config_file(config_path);
    if (seed_override >= 0) config.seed = std::uint64_t(seed_override);

    if (run->parsed()) return cmd_run(config, out_dir, fmeasure_variant);
    if (grid->parsed()) return cmd_grid(config, out_dir);
    if (ablate->parsed()) return cmd_ablate(config, axis, out_dir);
    if (synth->parsed()) return cmd_synth(config, out_dir);
    return kExitValidation;
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
