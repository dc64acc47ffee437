// Command-line driver: corpus ingestion, training, guided generation,
// summarization, grid search and evaluation as reproducible batch runs.
//
// Exit codes: 0 success, 1 partial failure (some blocks failed),
// 2 usage/config error, 3 data error, 4 numeric failure.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "amrsumm/amr.hpp"
#include "amrsumm/corpus.hpp"
#include "amrsumm/guided_decode.hpp"
#include "amrsumm/metrics.hpp"
#include "amrsumm/ngram_lm.hpp"
#include "amrsumm/seq2seq.hpp"
#include "amrsumm/side_info.hpp"
#include "amrsumm/summarize.hpp"

using namespace amrsumm;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kPartial = 1;
constexpr int kUsage = 2;
constexpr int kData = 3;
constexpr int kNumeric = 4;

std::string data_dir;

std::string resolve_path(const std::string& path) {
  namespace fs = std::filesystem;
  if (path.empty() || fs::exists(path) || data_dir.empty()) return path;
  fs::path joined = fs::path(data_dir) / path;
  return fs::exists(joined) ? joined.string() : path;
}

std::string read_file(const std::string& path) {
  std::ifstream in(resolve_path(path), std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Temp-file-and-rename so concurrent runs never interleave partial output.
void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output for writing: " + path);
    out << contents;
    if (!out) throw std::runtime_error("write failed: " + path);
  }
  fs::rename(tmp, target);
}

void write_config_echo(const std::string& out_path, const json& config) {
  json echo = config;
  echo["output"] = out_path;
  write_file_atomic(out_path + ".config.json", echo.dump(2) + "\n");
}

std::vector<TokenSeq> read_token_lines(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<TokenSeq> out;
  std::string line;
  while (std::getline(in, line)) out.push_back(split_tokens(line));
  return out;
}

std::string trim_copy(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Expands `--config FILE` into `--key value` tokens placed right after the
// subcommand name, so explicit command-line flags override the file.
std::vector<std::string> expand_config_args(int argc, char** argv) {
  std::vector<std::string> tokens(argv + 1, argv + argc);
  std::vector<std::string> expansion;
  std::size_t subcommand_end = tokens.size();
  static const char* kSubcommands[] = {"parse",     "linearize",   "train",   "generate",
                                       "summarize", "grid-search", "evaluate"};
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    for (const char* name : kSubcommands)
      if (tokens[i] == name) {
        subcommand_end = i + 1;
        break;
      }
    if (subcommand_end != tokens.size()) break;
  }

  for (std::size_t i = 0; i < tokens.size();) {
    std::string value;
    if (tokens[i] == "--config" && i + 1 < tokens.size()) {
      value = tokens[i + 1];
      tokens.erase(tokens.begin() + static_cast<long>(i), tokens.begin() + static_cast<long>(i) + 2);
    } else if (tokens[i].rfind("--config=", 0) == 0) {
      value = tokens[i].substr(9);
      tokens.erase(tokens.begin() + static_cast<long>(i));
    } else {
      ++i;
      continue;
    }
    std::istringstream in(read_file(value));
    std::string line;
    while (std::getline(in, line)) {
      line = trim_copy(line);
      if (line.empty() || line[0] == '#') continue;
      std::size_t eq = line.find('=');
      if (eq == std::string::npos)
        throw std::runtime_error("config " + value + ": expected key=value, got: " + line);
      std::string key = trim_copy(line.substr(0, eq));
      std::string val = trim_copy(line.substr(eq + 1));
      if (val == "false") continue;
      expansion.push_back("--" + key);
      if (val != "true") expansion.push_back(val);
    }
  }
  tokens.insert(tokens.begin() + static_cast<long>(std::min(subcommand_end, tokens.size())),
                expansion.begin(), expansion.end());
  return tokens;
}

std::vector<double> parse_grid(const std::string& spec, const char* what) {
  std::vector<double> out;
  std::istringstream in(spec);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    cell = trim_copy(cell);
    if (cell.empty()) continue;
    out.push_back(std::stod(cell));
  }
  if (out.empty()) throw CLI::ValidationError(what, "grid must contain at least one value");
  return out;
}

struct ParsedDoc {
  std::vector<ParsedSentence> sentences;
  const Document* doc = nullptr;
};

ParsedDoc parse_document(const Document& doc) {
  if (doc.amrs.empty())
    throw std::runtime_error("document " + doc.id + " carries no AMR parses");
  ParsedDoc out;
  out.doc = &doc;
  for (std::size_t i = 0; i < doc.amrs.size(); ++i) {
    try {
      out.sentences.push_back({split_tokens(doc.sentences[i]), parse_penman(doc.amrs[i])});
    } catch (const ParseError& e) {
      throw std::runtime_error("document " + doc.id + ", sentence " + std::to_string(i + 1) +
                               ": " + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// parse / linearize
// ---------------------------------------------------------------------------

int run_blocks(const std::vector<std::string>& files, const std::string& out_path,
               bool emit_linearization, const LinearizeOptions& opts) {
  std::ostringstream out;
  std::size_t failures = 0;
  for (const std::string& file : files) {
    std::vector<AmrBlock> blocks = read_amr_blocks(read_file(file));
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const AmrBlock& block = blocks[i];
      std::string name = block.id.empty() ? file + "#" + std::to_string(i + 1) : block.id;
      try {
        AmrGraph g = parse_penman(block.penman);
        if (emit_linearization) {
          out << join_tokens(linearize(g, opts)) << '\n';
        } else {
          out << name << " nodes=" << g.nodes.size() << " edges=" << g.edges.size()
              << " root=" << g.find_node(g.root)->label << '\n';
        }
      } catch (const std::exception& e) {
        ++failures;
        std::cerr << file << ":" << block.line << ": " << name << ": " << e.what() << '\n';
      }
    }
  }
  if (out_path.empty())
    std::cout << out.str();
  else
    write_file_atomic(out_path, out.str());
  return failures ? kPartial : kOk;
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

struct TrainCli {
  std::string corpus_path;
  std::string out_path;
  std::size_t embed_dim = 16;
  std::size_t hidden_dim = 32;
  std::size_t vocab_limit = 50000;
  TrainOptions opts;
};

int run_train(const TrainCli& cli, const LinearizeOptions& lin_opts) {
  std::vector<Document> docs = read_jsonl_corpus(resolve_path(cli.corpus_path));
  std::vector<TrainPair> pairs;
  std::vector<TokenSeq> sources, targets;
  for (const Document& doc : docs) {
    ParsedDoc parsed = parse_document(doc);
    for (std::size_t i = 0; i < parsed.sentences.size(); ++i) {
      TokenSeq lin = linearize(parsed.sentences[i].parse, lin_opts);
      pairs.emplace_back(lin, parsed.sentences[i].sentence);
      sources.push_back(lin);
      targets.push_back(parsed.sentences[i].sentence);
    }
  }
  if (pairs.empty()) throw std::runtime_error("training corpus is empty");

  Vocab src = Vocab::build(sources);
  Vocab tgt = Vocab::build(targets);
  if (src.size() > cli.vocab_limit || tgt.size() > cli.vocab_limit)
    throw std::runtime_error("vocabulary exceeds --vocab-limit (" +
                             std::to_string(std::max(src.size(), tgt.size())) + " > " +
                             std::to_string(cli.vocab_limit) + ")");

  Seq2SeqParams params =
      Seq2SeqParams::init(src, tgt, cli.embed_dim, cli.hidden_dim, cli.opts.seed);
  std::ostringstream loss_log;
  TrainResult result = train(std::move(params), pairs, cli.opts, &loss_log);

  std::ostringstream ckpt;
  save_checkpoint(result.params, ckpt);
  write_file_atomic(cli.out_path, ckpt.str());
  write_file_atomic(cli.out_path + ".loss", loss_log.str());
  write_config_echo(cli.out_path,
                    json{{"command", "train"},
                         {"corpus", cli.corpus_path},
                         {"epochs", cli.opts.epochs},
                         {"learning_rate", cli.opts.learning_rate},
                         {"clip_norm", cli.opts.clip_norm},
                         {"seed", cli.opts.seed},
                         {"embed_dim", cli.embed_dim},
                         {"hidden_dim", cli.hidden_dim},
                         {"vocab_limit", cli.vocab_limit},
                         {"pairs", pairs.size()}});
  std::cerr << "trained " << cli.opts.epochs << " epochs over " << pairs.size()
            << " pairs; final mean loss "
            << (result.epoch_mean_loss.empty() ? 0.0 : result.epoch_mean_loss.back()) << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------------

struct GenerateCli {
  std::string checkpoint;
  std::string input;
  std::string out_path;
  std::string guidance = "none";
  std::string trace_path;
  double psi = 0.95;
  double theta = 2.5;
  std::size_t top_k = 15;
  std::size_t beam = 5;
  std::size_t max_length = 100;
};

struct GuidanceSource {
  GuidanceMode mode = GuidanceMode::None;
  std::string path;  // oracle summaries or document corpus
};

GuidanceSource parse_guidance(const std::string& spec) {
  if (spec == "none") return {};
  if (spec.rfind("oracle:", 0) == 0) return {GuidanceMode::Oracle, spec.substr(7)};
  if (spec.rfind("doc:", 0) == 0) return {GuidanceMode::LcsPruned, spec.substr(4)};
  throw CLI::ValidationError("--guidance",
                             "expected none, oracle:<summaries>, or doc:<corpus>");
}

int run_generate(const GenerateCli& cli, const LinearizeOptions& lin_opts) {
  GuidanceSource source = parse_guidance(cli.guidance);
  Seq2SeqParams params = load_checkpoint_file(resolve_path(cli.checkpoint));
  std::vector<AmrBlock> blocks = read_amr_blocks(read_file(cli.input));
  if (blocks.empty()) throw std::runtime_error("no AMR blocks in " + cli.input);

  std::vector<TokenSeq> oracle_lines;
  std::vector<Document> guide_docs;
  std::string refs_path;
  if (source.mode == GuidanceMode::Oracle) {
    oracle_lines = read_token_lines(source.path);
    if (oracle_lines.size() != blocks.size())
      throw std::runtime_error("guidance summaries (" + std::to_string(oracle_lines.size()) +
                               ") do not align with AMR blocks (" +
                               std::to_string(blocks.size()) + ")");
    refs_path = resolve_path(source.path);
  } else if (source.mode == GuidanceMode::LcsPruned) {
    guide_docs = read_jsonl_corpus(resolve_path(source.path));
    if (guide_docs.size() != blocks.size())
      throw std::runtime_error("guidance documents (" + std::to_string(guide_docs.size()) +
                               ") do not align with AMR blocks (" +
                               std::to_string(blocks.size()) + ")");
  }

  InterpolationWeights weights = lambdas_from_theta(cli.theta);
  FusionConfig fusion;
  fusion.psi = cli.psi;
  fusion.beam_width = cli.beam;
  fusion.max_length = cli.max_length;
  std::ofstream trace_stream;
  if (!cli.trace_path.empty()) {
    trace_stream.open(cli.trace_path);
    if (!trace_stream) throw std::runtime_error("cannot open trace file: " + cli.trace_path);
    fusion.trace = &trace_stream;
  }

  Seq2SeqBeamModel beam_model(params);
  std::ostringstream out;
  json items = json::array();
  std::vector<std::string> reference_lines;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    AmrGraph graph = parse_penman(blocks[i].penman);
    TokenSeq lin = linearize(graph, lin_opts);

    std::optional<NGramModel> lm;
    std::optional<Guidance> side;
    if (source.mode == GuidanceMode::Oracle) {
      lm = build_counts(oracle_side({oracle_lines[i]}), kDefaultNgramOrder);
      side = Guidance{&*lm, weights};
    } else if (source.mode == GuidanceMode::LcsPruned) {
      ParsedDoc parsed = parse_document(guide_docs[i]);
      SideDocument pruned = select_side_sentences(parsed.sentences, graph, cli.top_k, lin_opts);
      lm = build_counts(pruned, kDefaultNgramOrder);
      side = Guidance{&*lm, weights};
      if (!guide_docs[i].summary.empty()) reference_lines.push_back(guide_docs[i].summary);
    }

    auto ranked = beam_search(beam_model, lin, side, fusion);
    const auto& [tokens, score] = ranked.front();
    out << join_tokens(tokens) << '\n';
    items.push_back({{"id", blocks[i].id.empty() ? "block" + std::to_string(i + 1) : blocks[i].id},
                     {"score", score},
                     {"length", tokens.size()}});
  }

  write_file_atomic(cli.out_path, out.str());
  if (source.mode == GuidanceMode::LcsPruned && reference_lines.size() == blocks.size()) {
    std::string refs;
    for (const auto& line : reference_lines) refs += line + '\n';
    refs_path = cli.out_path + ".refs";
    write_file_atomic(refs_path, refs);
  }

  json config{{"command", "generate"},   {"checkpoint", cli.checkpoint},
              {"input", cli.input},      {"guidance", cli.guidance},
              {"psi", cli.psi},          {"theta", cli.theta},
              {"top_k", cli.top_k},      {"beam", cli.beam},
              {"max_length", cli.max_length}};
  write_config_echo(cli.out_path, config);
  json manifest{{"config", config},
                {"items", items},
                {"hypotheses", cli.out_path},
                {"references", refs_path.empty() ? json() : json(refs_path)}};
  write_file_atomic(cli.out_path + ".manifest.json", manifest.dump(2) + "\n");
  return kOk;
}

// ---------------------------------------------------------------------------
// summarize
// ---------------------------------------------------------------------------

struct SummarizeCli {
  std::string corpus_path;
  std::string checkpoint;
  std::string out_path;
  std::string guidance = "doc";
  double psi = 0.95;
  double theta = 2.5;
  std::size_t top_k = 15;
  std::size_t beam = 5;
  std::size_t max_length = 100;
  double budget_fraction = 0.15;
};

int run_summarize(const SummarizeCli& cli, const LinearizeOptions& lin_opts) {
  if (cli.guidance != "none" && cli.guidance != "doc" && cli.guidance != "oracle")
    throw CLI::ValidationError("--guidance", "expected none, doc, or oracle");
  Seq2SeqParams params = load_checkpoint_file(resolve_path(cli.checkpoint));
  std::vector<Document> docs = read_jsonl_corpus(resolve_path(cli.corpus_path));
  if (docs.empty()) throw std::runtime_error("empty corpus: " + cli.corpus_path);

  InterpolationWeights weights = lambdas_from_theta(cli.theta);
  FusionConfig fusion;
  fusion.psi = cli.psi;
  fusion.beam_width = cli.beam;
  fusion.max_length = cli.max_length;

  std::ostringstream out, refs;
  bool have_refs = true;
  for (const Document& doc : docs) {
    ParsedDoc parsed = parse_document(doc);
    std::vector<AmrGraph> graphs;
    for (const auto& s : parsed.sentences) graphs.push_back(s.parse);
    AmrGraph merged = merge_graphs(graphs);
    SubgraphObjective obj = make_default_objective(graphs, merged, cli.budget_fraction);

    GuidanceSpec spec;
    if (cli.guidance == "doc") {
      spec.mode = GuidanceMode::LcsPruned;
      spec.k = cli.top_k;
    } else if (cli.guidance == "oracle") {
      if (doc.summary.empty())
        throw std::runtime_error("document " + doc.id + " has no summary for oracle guidance");
      spec.mode = GuidanceMode::Oracle;
      spec.gold = {split_tokens(doc.summary)};
    }

    TokenSeq summary =
        summarize_document(parsed.sentences, obj, params, spec, fusion, weights, lin_opts);
    out << join_tokens(summary) << '\n';
    if (doc.summary.empty())
      have_refs = false;
    else
      refs << doc.summary << '\n';
  }

  write_file_atomic(cli.out_path, out.str());
  if (have_refs) write_file_atomic(cli.out_path + ".refs", refs.str());
  write_config_echo(cli.out_path, json{{"command", "summarize"},
                                       {"corpus", cli.corpus_path},
                                       {"checkpoint", cli.checkpoint},
                                       {"guidance", cli.guidance},
                                       {"psi", cli.psi},
                                       {"theta", cli.theta},
                                       {"top_k", cli.top_k},
                                       {"beam", cli.beam},
                                       {"max_length", cli.max_length},
                                       {"budget_fraction", cli.budget_fraction}});
  return kOk;
}

// ---------------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------------

MetricReport evaluate_files(const std::string& hyp_path, const std::string& ref_path) {
  std::vector<TokenSeq> hyps = read_token_lines(hyp_path);
  std::vector<TokenSeq> refs = read_token_lines(ref_path);
  if (hyps.size() != refs.size())
    throw std::runtime_error("line-count mismatch: " + std::to_string(hyps.size()) +
                             " hypotheses vs " + std::to_string(refs.size()) + " references");
  return evaluate_corpus(hyps, refs);
}

int run_evaluate(const std::string& hyp_path, const std::string& ref_path,
                 const std::string& json_out) {
  MetricReport report = evaluate_files(hyp_path, ref_path);
  std::cout << report.to_json() << '\n';
  report.print_table(std::cout);
  if (!json_out.empty()) {
    write_file_atomic(json_out, report.to_json() + "\n");
    write_config_echo(json_out, json{{"command", "evaluate"},
                                     {"hypotheses", hyp_path},
                                     {"references", ref_path}});
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// grid-search
// ---------------------------------------------------------------------------

struct GridCli {
  std::string corpus_path;
  std::string checkpoint;
  std::string out_path;
  std::string psi_grid = "0.95";
  std::string theta_grid = "2.5";
  std::string k_grid = "15";
  std::size_t beam = 5;
  std::size_t max_length = 100;
};

int run_grid_search(const GridCli& cli, const LinearizeOptions& lin_opts) {
  std::vector<double> psi_grid = parse_grid(cli.psi_grid, "--psi-grid");
  std::vector<double> theta_grid = parse_grid(cli.theta_grid, "--theta-grid");
  std::vector<std::size_t> k_grid;
  for (double k : parse_grid(cli.k_grid, "--k-grid")) {
    if (k < 1.0) throw CLI::ValidationError("--k-grid", "k must be >= 1");
    k_grid.push_back(static_cast<std::size_t>(k));
  }
  Seq2SeqParams params = load_checkpoint_file(resolve_path(cli.checkpoint));
  std::vector<Document> docs = read_jsonl_corpus(resolve_path(cli.corpus_path));
  if (docs.empty()) throw std::runtime_error("empty dev corpus: " + cli.corpus_path);

  // Parse all documents once; generation is per grid cell.
  struct DevDoc {
    ParsedDoc parsed;
    AmrGraph summary_graph;
    TokenSeq summary_lin;
    TokenSeq gold;
  };
  std::vector<DevDoc> dev;
  for (const Document& doc : docs) {
    if (doc.summary_amr.empty() || doc.summary.empty())
      throw std::runtime_error("document " + doc.id +
                               " needs summary_amr and summary for grid search");
    DevDoc d;
    d.parsed = parse_document(doc);
    d.summary_graph = parse_penman(doc.summary_amr);
    d.summary_lin = linearize(d.summary_graph, lin_opts);
    d.gold = split_tokens(doc.summary);
    dev.push_back(std::move(d));
  }

  Seq2SeqBeamModel beam_model(params);
  struct Row {
    double psi, theta;
    std::size_t k;
    MetricReport report;
  };
  std::vector<Row> rows;
  for (double psi : psi_grid)
    for (double theta : theta_grid)
      for (std::size_t k : k_grid) {
        InterpolationWeights weights = lambdas_from_theta(theta);
        FusionConfig fusion;
        fusion.psi = psi;
        fusion.beam_width = cli.beam;
        fusion.max_length = cli.max_length;

        std::vector<TokenSeq> hyps, refs;
        for (const DevDoc& d : dev) {
          SideDocument pruned =
              select_side_sentences(d.parsed.sentences, d.summary_graph, k, lin_opts);
          NGramModel lm = build_counts(pruned, kDefaultNgramOrder);
          auto ranked = beam_search(beam_model, d.summary_lin,
                                    Guidance{&lm, weights}, fusion);
          hyps.push_back(ranked.front().first);
          refs.push_back(d.gold);
        }
        rows.push_back({psi, theta, k, evaluate_corpus(hyps, refs)});
      }

  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.report.rouge2.f1 != b.report.rouge2.f1) return a.report.rouge2.f1 > b.report.rouge2.f1;
    if (a.psi != b.psi) return a.psi < b.psi;
    if (a.theta != b.theta) return a.theta < b.theta;
    return a.k < b.k;
  });

  std::ostringstream out;
  out << "psi theta k bleu rouge1_f rouge2_f rougeL_f\n";
  out.setf(std::ios::fixed);
  out.precision(6);
  for (const Row& r : rows)
    out << r.psi << ' ' << r.theta << ' ' << r.k << ' ' << r.report.bleu << ' '
        << r.report.rouge1.f1 << ' ' << r.report.rouge2.f1 << ' ' << r.report.rouge_l.f1
        << '\n';
  if (cli.out_path.empty())
    std::cout << out.str();
  else {
    write_file_atomic(cli.out_path, out.str());
    write_config_echo(cli.out_path, json{{"command", "grid-search"},
                                         {"corpus", cli.corpus_path},
                                         {"checkpoint", cli.checkpoint},
                                         {"psi_grid", psi_grid},
                                         {"theta_grid", theta_grid},
                                         {"k_grid", k_grid},
                                         {"beam", cli.beam},
                                         {"max_length", cli.max_length}});
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AMR-to-text summarization with source-document-guided decoding"};
  app.require_subcommand(1);
  app.add_option("--data-dir", data_dir, "base directory for relative data paths")
      ->envname("AMRSUMM_DATA_DIR");

  // Config files are expanded into ordinary arguments before parsing (see
  // expand_config_args); the option here only documents the flag. Options
  // take their last occurrence so command-line flags override file values.
  std::string config_doc;
  auto add_config_option = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_doc, "key=value config file; flags override it");
    for (const CLI::Option* opt : cmd->get_options()) {
      auto* mutable_opt = const_cast<CLI::Option*>(opt);
      if (mutable_opt->get_expected_min() > 0)
        mutable_opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    }
  };

  // parse
  auto* parse_cmd = app.add_subcommand("parse", "validate AMR block files");
  std::vector<std::string> parse_files;
  std::string parse_out;
  parse_cmd->add_option("files", parse_files, "AMR block files")->required();
  parse_cmd->add_option("--out", parse_out, "output path (default stdout)");

  // linearize
  auto* lin_cmd = app.add_subcommand("linearize", "linearize AMR block files");
  std::vector<std::string> lin_files;
  std::string lin_out;
  lin_cmd->add_option("files", lin_files, "AMR block files")->required();
  lin_cmd->add_option("--out", lin_out, "output path (default stdout)");
  auto lin_opts = std::make_shared<LinearizeOptions>();
  auto add_linearize_flags = [&](CLI::App* cmd, std::shared_ptr<LinearizeOptions> target) {
    cmd->add_option("--max-reentrancy-depth", target->max_reentrancy_depth)
        ->capture_default_str();
    cmd->add_flag_callback("--keep-senses", [target] { target->strip_senses = false; },
                           "keep -NN sense suffixes");
    cmd->add_flag_callback("--keep-wiki", [target] { target->strip_wiki = false; },
                           "keep :wiki edges");
    cmd->add_flag_callback("--keep-case", [target] { target->lowercase = false; },
                           "do not lowercase tokens");
  };
  add_linearize_flags(lin_cmd, lin_opts);

  // train
  auto* train_cmd = app.add_subcommand("train", "train the attention encoder-decoder");
  auto train_cli = std::make_shared<TrainCli>();
  auto train_lin = std::make_shared<LinearizeOptions>();
  train_cmd->add_option("--corpus", train_cli->corpus_path, "JSON-lines training corpus")
      ->required();
  train_cmd->add_option("--out", train_cli->out_path, "checkpoint output path")->required();
  train_cmd->add_option("--epochs", train_cli->opts.epochs)->capture_default_str();
  train_cmd->add_option("--lr", train_cli->opts.learning_rate)->check(CLI::NonNegativeNumber)->capture_default_str();
  train_cmd->add_option("--clip", train_cli->opts.clip_norm)->capture_default_str();
  train_cmd->add_option("--seed", train_cli->opts.seed)->capture_default_str();
  train_cmd->add_option("--embed-dim", train_cli->embed_dim)->capture_default_str();
  train_cmd->add_option("--hidden-dim", train_cli->hidden_dim)->capture_default_str();
  train_cmd->add_option("--vocab-limit", train_cli->vocab_limit)->capture_default_str();
  add_linearize_flags(train_cmd, train_lin);
  add_config_option(train_cmd);

  // generate
  auto* gen_cmd = app.add_subcommand("generate", "generate text from summary AMR graphs");
  auto gen_cli = std::make_shared<GenerateCli>();
  auto gen_lin = std::make_shared<LinearizeOptions>();
  gen_cmd->add_option("--checkpoint", gen_cli->checkpoint)->required();
  gen_cmd->add_option("--input", gen_cli->input, "AMR block file of summary graphs")
      ->required();
  gen_cmd->add_option("--out", gen_cli->out_path)->required();
  gen_cmd->add_option("--guidance", gen_cli->guidance,
                      "none | oracle:<summaries file> | doc:<jsonl corpus>")
      ->capture_default_str();
  gen_cmd->add_option("--psi", gen_cli->psi)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  gen_cmd->add_option("--theta", gen_cli->theta)->check(CLI::PositiveNumber)->capture_default_str();
  gen_cmd->add_option("--top-k", gen_cli->top_k)->check(CLI::PositiveNumber)->capture_default_str();
  gen_cmd->add_option("--beam", gen_cli->beam)->check(CLI::PositiveNumber)->capture_default_str();
  gen_cmd->add_option("--max-length", gen_cli->max_length)->check(CLI::PositiveNumber)->capture_default_str();
  gen_cmd->add_option("--trace", gen_cli->trace_path, "per-step JSON-lines trace");
  add_linearize_flags(gen_cmd, gen_lin);
  add_config_option(gen_cmd);

  // summarize
  auto* sum_cmd = app.add_subcommand("summarize", "full document-to-summary pipeline");
  auto sum_cli = std::make_shared<SummarizeCli>();
  auto sum_lin = std::make_shared<LinearizeOptions>();
  sum_cmd->add_option("--corpus", sum_cli->corpus_path)->required();
  sum_cmd->add_option("--checkpoint", sum_cli->checkpoint)->required();
  sum_cmd->add_option("--out", sum_cli->out_path)->required();
  sum_cmd->add_option("--guidance", sum_cli->guidance, "none | doc | oracle")
      ->capture_default_str();
  sum_cmd->add_option("--psi", sum_cli->psi)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  sum_cmd->add_option("--theta", sum_cli->theta)->check(CLI::PositiveNumber)->capture_default_str();
  sum_cmd->add_option("--top-k", sum_cli->top_k)->check(CLI::PositiveNumber)->capture_default_str();
  sum_cmd->add_option("--beam", sum_cli->beam)->check(CLI::PositiveNumber)->capture_default_str();
  sum_cmd->add_option("--max-length", sum_cli->max_length)->check(CLI::PositiveNumber)->capture_default_str();
  sum_cmd->add_option("--budget-fraction", sum_cli->budget_fraction)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  add_linearize_flags(sum_cmd, sum_lin);
  add_config_option(sum_cmd);

  // grid-search
  auto* grid_cmd = app.add_subcommand("grid-search", "hyper-parameter grid over the dev set");
  auto grid_cli = std::make_shared<GridCli>();
  auto grid_lin = std::make_shared<LinearizeOptions>();
  grid_cmd->add_option("--corpus", grid_cli->corpus_path, "dev corpus (JSON lines)")
      ->required();
  grid_cmd->add_option("--checkpoint", grid_cli->checkpoint)->required();
  grid_cmd->add_option("--out", grid_cli->out_path, "table output (default stdout)");
  grid_cmd->add_option("--psi-grid", grid_cli->psi_grid)->delimiter(',')->capture_default_str();
  grid_cmd->add_option("--theta-grid", grid_cli->theta_grid)
      ->delimiter(',')
      ->capture_default_str();
  grid_cmd->add_option("--k-grid", grid_cli->k_grid)->delimiter(',')->capture_default_str();
  grid_cmd->add_option("--beam", grid_cli->beam)->check(CLI::PositiveNumber)->capture_default_str();
  grid_cmd->add_option("--max-length", grid_cli->max_length)->check(CLI::PositiveNumber)->capture_default_str();
  add_linearize_flags(grid_cmd, grid_lin);
  add_config_option(grid_cmd);

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "corpus BLEU and ROUGE-1/2/L F1");
  std::string eval_hyp, eval_ref, eval_json;
  eval_cmd->add_option("--hyp", eval_hyp, "hypotheses, one per line")->required();
  eval_cmd->add_option("--ref", eval_ref, "references, one per line")->required();
  eval_cmd->add_option("--json-out", eval_json, "also write the JSON report here");

  std::vector<std::string> tokens;
  try {
    tokens = expand_config_args(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
  std::reverse(tokens.begin(), tokens.end());  // CLI11 consumes args back to front
  try {
    app.parse(std::move(tokens));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*parse_cmd) return run_blocks(parse_files, parse_out, false, {});
    if (*lin_cmd) return run_blocks(lin_files, lin_out, true, *lin_opts);
    if (*train_cmd) return run_train(*train_cli, *train_lin);
    if (*gen_cmd) return run_generate(*gen_cli, *gen_lin);
    if (*sum_cmd) return run_summarize(*sum_cli, *sum_lin);
    if (*grid_cmd) return run_grid_search(*grid_cli, *grid_lin);
    if (*eval_cmd) return run_evaluate(eval_hyp, eval_ref, eval_json);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return std::string(e.what()).find("non-finite") != std::string::npos ? kNumeric : kData;
  }
  return kUsage;
}
