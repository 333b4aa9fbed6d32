// Command-line driver: embed, eval-lp, eval-nr, eval-mh, rwr-dump, cluster.
// Exit codes: 0 success, 1 usage/configuration error, 2 runtime error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "CLI11.hpp"
#include "multiverse/clustering.hpp"
#include "multiverse/edge_features.hpp"
#include "multiverse/embedding.hpp"
#include "multiverse/evaluation.hpp"
#include "multiverse/graph.hpp"
#include "multiverse/rng.hpp"
#include "multiverse/rwr.hpp"

namespace fs = std::filesystem;
using namespace multiverse;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StageError : std::runtime_error {
  StageError(const std::string& stage, const std::string& what)
      : std::runtime_error("error [" + stage + "]: " + what) {}
};

template <typename F>
auto run_stage(const std::string& stage, F&& fn) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

std::uint64_t fnv1a_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open input file '" + path.string() + "'");
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  char buf[1 << 14];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 0x100000001b3ULL;
    }
  }
  return hash;
}

struct Inputs {
  std::vector<fs::path> files;  // everything read, for manifest hashing

  std::vector<ParsedEdge> read_edges(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open edge list '" + path.string() + "'");
    files.push_back(path);
    return parse_edge_list(in);
  }

  MultiplexGraph read_multiplex(const fs::path& manifest) {
    std::ifstream in(manifest);
    if (!in) throw UsageError("cannot open multiplex manifest '" + manifest.string() + "'");
    files.push_back(manifest);
    std::vector<std::vector<ParsedEdge>> layers;
    std::string line;
    while (std::getline(in, line)) {
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
      std::size_t start = line.find_first_not_of(" \t");
      if (start == std::string::npos || line[start] == '#') continue;
      fs::path layer_path(line.substr(start));
      if (layer_path.is_relative()) layer_path = manifest.parent_path() / layer_path;
      layers.push_back(read_edges(layer_path));
    }
    if (layers.empty()) throw UsageError("manifest lists no layer files");
    return build_multiplex(layers);
  }
};

struct CommonOptions {
  std::uint64_t seed = 42;
  RwrParams rwr;
  TrainParams train;
  SplitConfig split;
  LogisticParams classifier;
  bool halved_average = false;

  // range checks before any file is read or stage runs
  void validate() const {
    try {
      rwr.validate();
      if (!rwr.tau.empty()) {
        double sum = 0.0;
        for (double t : rwr.tau) {
          if (t < 0.0) throw std::invalid_argument("tau entries must be non-negative");
          sum += t;
        }
        if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("tau must sum to 1");
      }
      if (train.d < 1) throw std::invalid_argument("embedding dimension must be >= 1");
      if (train.n_max < 0) throw std::invalid_argument("n_max must be >= 0 (0 = auto)");
      if (train.s < 1) throw std::invalid_argument("negatives per positive must be >= 1");
      if (!(train.lr > 0.0)) throw std::invalid_argument("learning rate must be positive");
      if (train.total_steps < -1) throw std::invalid_argument("steps must be >= 0 (-1 = auto)");
      if (train.workers < 1) throw std::invalid_argument("workers must be >= 1");
      split.validate();
      if (classifier.epochs < 1) throw std::invalid_argument("classifier epochs must be >= 1");
      if (classifier.l2 < 0.0) throw std::invalid_argument("classifier l2 must be >= 0");
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }

  PipelineConfig pipeline() const {
    PipelineConfig cfg;
    cfg.rwr = rwr;
    cfg.train = train;
    cfg.split = split;
    cfg.classifier = classifier;
    cfg.seed = seed;
    cfg.halved_average = halved_average;
    return cfg;
  }
};

void add_rwr_options(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--restart", opt.rwr.r, "restart probability r")->check(CLI::Range(1e-9, 1.0));
  cmd->add_option("--delta", opt.rwr.delta, "inter-layer jump probability");
  cmd->add_option("--lambda", opt.rwr.lambda, "inter-multiplex jump probability");
  cmd->add_option("--eta", opt.rwr.eta, "restart split for mixed seed sets");
  cmd->add_option("--tau", opt.rwr.tau, "restart layer weights (default uniform)");
  cmd->add_option("--tol", opt.rwr.tol, "RWR convergence threshold");
  cmd->add_option("--max-iter", opt.rwr.max_iter, "RWR iteration cap");
}

void add_train_options(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--dim", opt.train.d, "embedding dimension");
  cmd->add_option("--n-max", opt.train.n_max, "similarity row truncation (0 = auto)");
  cmd->add_option("--negatives", opt.train.s, "negative samples per positive");
  cmd->add_option("--lr", opt.train.lr, "learning rate");
  cmd->add_option("--steps", opt.train.total_steps, "training steps (-1 = 5000 n)");
  cmd->add_option("--workers", opt.train.workers, "parallel lanes");
  cmd->add_option("--bias-n", opt.train.bias_n, "override N in the NCE bias terms");
}

void add_classifier_options(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--epochs", opt.classifier.epochs, "classifier epochs");
  cmd->add_option("--l2", opt.classifier.l2, "classifier L2 penalty");
  cmd->add_flag("--halved-average", opt.halved_average, "divide the average operator by 2");
}

void write_manifest(const fs::path& output, const std::string& command, const CommonOptions& opt,
                    const Inputs& inputs,
                    const std::vector<std::pair<std::string, std::string>>& extra = {}) {
  std::ofstream out(output.string() + ".manifest");
  out << "command " << command << '\n';
  out << "seed " << opt.seed << '\n';
  std::ostringstream params;
  params.precision(17);
  params << "restart " << opt.rwr.r << "\ndelta " << opt.rwr.delta << "\nlambda " << opt.rwr.lambda
         << "\neta " << opt.rwr.eta << "\ntol " << opt.rwr.tol << "\nmax_iter " << opt.rwr.max_iter
         << "\ndim " << opt.train.d << "\nn_max " << opt.train.n_max << "\nnegatives "
         << opt.train.s << "\nlr " << opt.train.lr << "\nsteps " << opt.train.total_steps
         << "\nworkers " << opt.train.workers << "\ntest_fraction " << opt.split.test_fraction
         << "\nepochs " << opt.classifier.epochs << "\nl2 " << opt.classifier.l2;
  out << params.str() << '\n';
  if (!opt.rwr.tau.empty()) {
    out << "tau";
    std::ostringstream tau;
    tau.precision(17);
    for (double t : opt.rwr.tau) tau << ' ' << t;
    out << tau.str() << '\n';
  }
  for (const auto& [key, value] : extra) out << key << ' ' << value << '\n';
  char hex[32];
  for (const auto& file : inputs.files) {
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(fnv1a_file(file)));
    out << "input " << file.string() << " fnv1a=" << hex << '\n';
  }
  out << "output " << output.string() << '\n';
}

std::vector<std::string> combined_labels(const MultiHetGraph& g) {
  std::vector<std::string> labels = g.mplex1.nodes.labels();
  const auto& right = g.mplex2.nodes.labels();
  labels.insert(labels.end(), right.begin(), right.end());
  return labels;
}

// ---------------------------------------------------------------------------

struct EmbedCmd {
  std::string multiplex, m1, m2, bipartite, out, dump_similarity;
  CommonOptions opt;

  int run() {
    opt.validate();
    Inputs inputs;
    SimilarityMatrix sim;
    std::vector<std::string> labels;
    if (!multiplex.empty()) {
      MultiplexGraph g = run_stage("graph", [&] { return inputs.read_multiplex(multiplex); });
      labels = g.nodes.labels();
      sim = run_stage("rwr", [&] { return similarity_matrix(g, opt.rwr, opt.train.workers); });
    } else {
      MultiHetGraph g = run_stage("graph", [&] {
        return build_multihet(inputs.read_multiplex(m1), inputs.read_multiplex(m2),
                              inputs.read_edges(bipartite));
      });
      labels = combined_labels(g);
      sim = run_stage("rwr", [&] { return similarity_matrix(g, opt.rwr, opt.train.workers); });
    }
    TrainParams train_cfg = opt.train;
    train_cfg.rng_seed = Rng::derive(opt.seed, 1);
    EmbeddingMatrix w = run_stage("train", [&] { return train(sim, train_cfg); });

    if (!dump_similarity.empty()) {
      std::ofstream dump(dump_similarity);
      if (!dump) throw UsageError("cannot write '" + dump_similarity + "'");
      save_similarity(dump, sim, labels);
    }
    std::ofstream file(out);
    if (!file) throw UsageError("cannot write '" + out + "'");
    save_embeddings(file, w, labels);
    write_manifest(out, "embed", opt, inputs);
    return 0;
  }
};

struct EvalCmd {
  std::string kind;  // lp | nr | mh
  std::string multiplex, m1, m2, bipartite, out;
  double subset_fraction = 0.95;
  CommonOptions opt;

  int run() {
    opt.validate();
    if (kind == "nr" && !(subset_fraction > 0.0 && subset_fraction <= 1.0))
      throw UsageError("subset-fraction must be in (0,1]");
    Inputs inputs;
    EvalReport report;
    if (kind == "mh") {
      MultiHetGraph g = run_stage("graph", [&] {
        return build_multihet(inputs.read_multiplex(m1), inputs.read_multiplex(m2),
                              inputs.read_edges(bipartite));
      });
      report = run_stage("eval", [&] { return evaluate_mh_link_prediction(g, opt.pipeline()); });
    } else {
      MultiplexGraph g = run_stage("graph", [&] { return inputs.read_multiplex(multiplex); });
      if (kind == "lp") {
        report = run_stage("eval", [&] { return evaluate_link_prediction(g, opt.pipeline()); });
      } else {
        report = run_stage("eval", [&] {
          return evaluate_network_reconstruction(g, subset_fraction, opt.pipeline());
        });
      }
    }
    std::ofstream file(out);
    if (!file) throw UsageError("cannot write '" + out + "'");
    report.write_tsv(file);
    std::vector<std::pair<std::string, std::string>> extra;
    if (kind == "nr") extra.emplace_back("subset_fraction", std::to_string(subset_fraction));
    write_manifest(out, "eval-" + kind, opt, inputs, extra);
    return 0;
  }
};

struct RwrDumpCmd {
  std::string multiplex, seed_node, out;
  CommonOptions opt;

  int run() {
    opt.validate();
    Inputs inputs;
    MultiplexGraph g = run_stage("graph", [&] { return inputs.read_multiplex(multiplex); });
    auto seed_id = g.nodes.find(seed_node);
    if (!seed_id) throw UsageError("unknown seed node label '" + seed_node + "'");
    auto scores = run_stage("rwr", [&] {
      SupraTransition t = build_supra_transition_m(g, opt.rwr);
      return aggregate_layers(rwr(*seed_id, t, opt.rwr), t);
    });
    std::vector<int> order(scores.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (scores[a] != scores[b]) return scores[a] > scores[b];
      return a < b;
    });
    std::ofstream file(out);
    if (!file) throw UsageError("cannot write '" + out + "'");
    char buf[64];
    for (int id : order) {
      std::snprintf(buf, sizeof(buf), "%.17g", scores[static_cast<std::size_t>(id)]);
      file << g.nodes.label(id) << '\t' << buf << '\n';
    }
    write_manifest(out, "rwr-dump", opt, inputs, {{"seed_node", seed_node}});
    return 0;
  }
};

struct ClusterCmd {
  std::string embedding, out, query, types_file;
  ClusteringParams params;
  CommonOptions opt;

  int run() {
    if (params.k < 1) throw UsageError("k must be >= 1");
    if (params.restarts < 1 || params.max_iter < 1)
      throw UsageError("restarts and iteration caps must be >= 1");
    Inputs inputs;
    std::ifstream in(embedding);
    if (!in) throw UsageError("cannot open embedding file '" + embedding + "'");
    inputs.files.push_back(embedding);
    LoadedEmbeddings loaded = run_stage("load", [&] { return load_embeddings(in); });

    std::vector<std::string> types;
    if (!types_file.empty()) {
      std::ifstream tin(types_file);
      if (!tin) throw UsageError("cannot open types file '" + types_file + "'");
      inputs.files.push_back(types_file);
      std::unordered_map<std::string, std::string> by_label;
      std::string label, tag;
      while (tin >> label >> tag) by_label[label] = tag;
      types.reserve(loaded.labels.size());
      for (const auto& l : loaded.labels) {
        auto it = by_label.find(l);
        types.push_back(it == by_label.end() ? "node" : it->second);
      }
    }

    params.rng_seed = Rng::derive(opt.seed, 5);
    ClusterAssignment assignment =
        run_stage("cluster", [&] { return spherical_kmeans(loaded.matrix, params); });
    std::ofstream file(out);
    if (!file) throw UsageError("cannot write '" + out + "'");
    save_assignment(file, assignment, loaded.labels);
    if (!query.empty()) {
      std::cout << cluster_report(assignment, loaded.labels, types, query);
    }
    write_manifest(out, "cluster", opt, inputs,
                   {{"k", std::to_string(params.k)},
                    {"restarts", std::to_string(params.restarts)},
                    {"cluster_max_iter", std::to_string(params.max_iter)}});
    return 0;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multiplex and multiplex-heterogeneous network embedding"};
  app.require_subcommand(1);

  // plain key=value config per subcommand; command-line flags win
  auto add_config = [](CLI::App* cmd) {
    cmd->set_config("--config", "", "plain key=value configuration file (flags win)");
  };

  EmbedCmd embed;
  auto* embed_cmd = app.add_subcommand("embed", "compute node embeddings");
  add_config(embed_cmd);
  embed_cmd->add_option("--multiplex", embed.multiplex, "multiplex manifest file");
  embed_cmd->add_option("--m1", embed.m1, "first multiplex manifest (heterogeneous mode)");
  embed_cmd->add_option("--m2", embed.m2, "second multiplex manifest (heterogeneous mode)");
  embed_cmd->add_option("--bipartite", embed.bipartite, "bipartite edge list (heterogeneous mode)");
  embed_cmd->add_option("--out", embed.out, "embedding output file")->required();
  embed_cmd->add_option("--dump-similarity", embed.dump_similarity,
                        "also write the similarity matrix (triples)");
  embed_cmd->add_option("--seed", embed.opt.seed, "global seed");
  add_rwr_options(embed_cmd, embed.opt);
  add_train_options(embed_cmd, embed.opt);

  EvalCmd eval_lp{"lp"}, eval_nr{"nr"}, eval_mh{"mh"};
  auto* lp_cmd = app.add_subcommand("eval-lp", "multiplex link prediction (ROC-AUC)");
  add_config(lp_cmd);
  lp_cmd->add_option("--multiplex", eval_lp.multiplex, "multiplex manifest")->required();
  lp_cmd->add_option("--out", eval_lp.out, "report file")->required();
  lp_cmd->add_option("--seed", eval_lp.opt.seed, "global seed");
  lp_cmd->add_option("--test-fraction", eval_lp.opt.split.test_fraction, "held-out edge fraction");
  add_rwr_options(lp_cmd, eval_lp.opt);
  add_train_options(lp_cmd, eval_lp.opt);
  add_classifier_options(lp_cmd, eval_lp.opt);

  auto* nr_cmd = app.add_subcommand("eval-nr", "network reconstruction (precision@K)");
  add_config(nr_cmd);
  nr_cmd->add_option("--multiplex", eval_nr.multiplex, "multiplex manifest")->required();
  nr_cmd->add_option("--out", eval_nr.out, "report file")->required();
  nr_cmd->add_option("--seed", eval_nr.opt.seed, "global seed");
  nr_cmd->add_option("--subset-fraction", eval_nr.subset_fraction, "pair universe fraction");
  add_rwr_options(nr_cmd, eval_nr.opt);
  add_train_options(nr_cmd, eval_nr.opt);
  add_classifier_options(nr_cmd, eval_nr.opt);

  auto* mh_cmd = app.add_subcommand("eval-mh", "bipartite link prediction (ROC-AUC)");
  add_config(mh_cmd);
  mh_cmd->add_option("--m1", eval_mh.m1, "first multiplex manifest")->required();
  mh_cmd->add_option("--m2", eval_mh.m2, "second multiplex manifest")->required();
  mh_cmd->add_option("--bipartite", eval_mh.bipartite, "bipartite edge list")->required();
  mh_cmd->add_option("--out", eval_mh.out, "report file")->required();
  mh_cmd->add_option("--seed", eval_mh.opt.seed, "global seed");
  mh_cmd->add_option("--test-fraction", eval_mh.opt.split.test_fraction, "held-out fraction");
  add_rwr_options(mh_cmd, eval_mh.opt);
  add_train_options(mh_cmd, eval_mh.opt);
  add_classifier_options(mh_cmd, eval_mh.opt);

  RwrDumpCmd rwr_dump;
  auto* dump_cmd = app.add_subcommand("rwr-dump", "write one seed's RWR distribution");
  add_config(dump_cmd);
  dump_cmd->add_option("--multiplex", rwr_dump.multiplex, "multiplex manifest")->required();
  dump_cmd->add_option("--seed-node", rwr_dump.seed_node, "seed node label")->required();
  dump_cmd->add_option("--out", rwr_dump.out, "output file")->required();
  dump_cmd->add_option("--seed", rwr_dump.opt.seed, "global seed");
  add_rwr_options(dump_cmd, rwr_dump.opt);

  ClusterCmd cluster;
  auto* cluster_cmd = app.add_subcommand("cluster", "spherical k-means over embeddings");
  add_config(cluster_cmd);
  cluster_cmd->add_option("--embedding", cluster.embedding, "embedding file")->required();
  cluster_cmd->add_option("--out", cluster.out, "assignment output file")->required();
  cluster_cmd->add_option("--k", cluster.params.k, "cluster count");
  cluster_cmd->add_option("--restarts", cluster.params.restarts, "independent restarts");
  cluster_cmd->add_option("--cluster-max-iter", cluster.params.max_iter, "iteration cap");
  cluster_cmd->add_option("--query", cluster.query, "print the query node's cluster");
  cluster_cmd->add_option("--types", cluster.types_file, "optional 'label type' file");
  cluster_cmd->add_option("--seed", cluster.opt.seed, "global seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (embed_cmd->parsed()) {
      const bool mono = !embed.multiplex.empty();
      const bool het = !embed.m1.empty() || !embed.m2.empty() || !embed.bipartite.empty();
      if (mono == het || (het && (embed.m1.empty() || embed.m2.empty() || embed.bipartite.empty())))
        throw UsageError("embed needs either --multiplex or all of --m1/--m2/--bipartite");
      return embed.run();
    }
    if (lp_cmd->parsed()) return eval_lp.run();
    if (nr_cmd->parsed()) return eval_nr.run();
    if (mh_cmd->parsed()) return eval_mh.run();
    if (dump_cmd->parsed()) return rwr_dump.run();
    if (cluster_cmd->parsed()) return cluster.run();
  } catch (const UsageError& e) {
    std::cerr << "error [config]: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
  return 1;
}
