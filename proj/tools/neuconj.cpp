// neuconj: dataset building, language-model training and decoding, premise
// prediction, harness evaluation and the completion server.

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "neuconj/dataset/builders.hpp"
#include "neuconj/eval/evaluate.hpp"
#include "neuconj/lm/checkpoint.hpp"
#include "neuconj/lm/corpus.hpp"
#include "neuconj/lm/decode.hpp"
#include "neuconj/lm/train.hpp"
#include "neuconj/prefix/codec.hpp"
#include "neuconj/service/completion.hpp"
#include "neuconj/tptp/printer.hpp"

using namespace neuconj;

namespace {

struct BuildTextArgs {
  std::string out;
  std::vector<std::string> inputs;
};

struct Dataset4Args {
  std::string library, derivations, sig, out;
};

struct TrainArgs {
  std::string config, corpus, out, trace, tokenizer = "whitespace", valid;
  std::size_t log_every = 100;
};

struct DecodeArgs {
  std::string ckpt, prompt_file;
  double temperature = 1.0;
  std::size_t top_k = 0;
  std::size_t width = 10;
  std::size_t max_new_tokens = 128;
  std::size_t count = 1;
  double length_penalty = 1.0;
  std::uint64_t seed = 0;
};

struct PredictArgs {
  std::string ckpt, library, sig, names, out;
  std::size_t samples = 10;
  std::size_t beam = 0;
  double temperature = 1.0;
  std::size_t top_k = 0;
  std::size_t max_new_tokens = 256;
  std::uint64_t seed = 0;
};

struct EvalArgs {
  std::string library, sig, predictions, prover = "stub", report, csv, new_formulas, prover_args;
  double cs_limit = 1, proof_limit = 6;
  std::size_t jobs = 0;
  bool strict = false;
};

struct ServeArgs {
  std::string ckpt, library, sig, host = "127.0.0.1", static_dir;
  int port = 8080;
  std::size_t max_concurrent = 2;
};

std::vector<int> prompt_ids(const lm::Vocabulary& vocab, const std::string& text) {
  std::vector<int> ids{lm::BOS};
  for (int id : vocab.encode(lm::tokenize_document(text, vocab.kind()))) ids.push_back(id);
  return ids;
}

std::string continuation_text(const lm::Vocabulary& vocab, std::vector<int> tokens) {
  if (!tokens.empty() && tokens.back() == lm::EOS) tokens.pop_back();
  return vocab.decode(tokens);
}

lm::DecodeParams decode_params(const DecodeArgs& a) {
  lm::DecodeParams p;
  p.temperature = a.temperature;
  p.top_k = a.top_k;
  p.max_new_tokens = a.max_new_tokens;
  p.length_penalty = a.length_penalty;
  p.seed = a.seed;
  p.stop_tokens = {lm::EOS};
  p.suppressed_tokens = {lm::PAD, lm::BOS, lm::UNK};
  return p;
}

void run_train(const TrainArgs& a) {
  const lm::RunConfig cfg = lm::parse_run_config(read_file(a.config));
  const auto kind = lm::tokenizer_from_string(a.tokenizer);
  const auto docs = lm::load_documents(a.corpus);
  const auto vocab = lm::Vocabulary::build(lm::tokenize_documents(docs, kind), kind);
  const auto ids = lm::encode_corpus(docs, vocab);

  lm::ModelConfig mc = cfg.model;
  mc.vocab_size = vocab.size();
  lm::Transformer<float> model(mc);
  std::cerr << "corpus: " << docs.size() << " documents, " << ids.size() << " tokens, vocabulary "
            << vocab.size() << "\n";

  std::ofstream trace;
  if (!a.trace.empty()) {
    trace.open(a.trace);
    if (!trace) throw IoError("cannot write " + a.trace);
    trace << "step,loss\n";
  }
  lm::train(model, ids, cfg.train, [&](const lm::LossPoint& pt) {
    if (trace.is_open()) trace << pt.step << ',' << pt.loss << '\n';
    if (a.log_every && (pt.step % a.log_every == 0 || pt.step == cfg.train.steps)) {
      std::cerr << "step " << pt.step << " loss " << pt.loss << "\n";
    }
  });
  if (!a.valid.empty()) {
    const auto held = lm::encode_corpus(lm::load_documents(a.valid), vocab);
    std::cerr << "held-out loss " << lm::evaluate_loss(model, std::span<const int>(held)) << "\n";
  }
  lm::save_checkpoint(a.out, model, vocab);
  std::cout << lm::fnv1a64_hex(read_file(a.out)) << "\n";
}

void run_sample(const DecodeArgs& a) {
  const auto loaded = lm::load_checkpoint(a.ckpt);
  const auto prompt = prompt_ids(loaded.vocab, a.prompt_file.empty() ? "" : read_file(a.prompt_file));
  lm::DecodeParams p = decode_params(a);
  for (std::size_t i = 0; i < a.count; ++i) {
    p.seed = a.seed + i;
    std::cout << continuation_text(loaded.vocab, lm::sample(*loaded.model, prompt, p)) << "\n";
  }
}

void run_beam(const DecodeArgs& a) {
  const auto loaded = lm::load_checkpoint(a.ckpt);
  const auto prompt = prompt_ids(loaded.vocab, a.prompt_file.empty() ? "" : read_file(a.prompt_file));
  lm::DecodeParams p = decode_params(a);
  p.mode = lm::DecodeMode::Beam;
  p.beam_width = a.width;
  for (const auto& h : lm::beam_search(*loaded.model, prompt, p)) {
    std::printf("%.6f\t%s\n", h.score, continuation_text(loaded.vocab, h.tokens).c_str());
  }
}

void run_predict(const PredictArgs& a) {
  const auto loaded = lm::load_checkpoint(a.ckpt);
  const FormulaLibrary library = load_library(a.library);
  prefix::SignatureMap sig = prefix::load_signature(a.sig);

  std::vector<std::string> names;
  if (a.names.empty()) {
    for (const auto& e : library.entries()) names.push_back(e.name);
  } else {
    std::istringstream in(read_file(a.names));
    for (std::string n; in >> n;) names.push_back(n);
  }

  lm::DecodeParams p;
  p.temperature = a.temperature;
  p.top_k = a.top_k;
  p.max_new_tokens = a.max_new_tokens;
  p.stop_tokens = {lm::EOS};
  p.suppressed_tokens = {lm::PAD, lm::BOS, lm::UNK};
  std::filesystem::create_directories(a.out);

  std::size_t written = 0;
  for (std::size_t n = 0; n < names.size(); ++n) {
    const std::string line = prefix::join_line(prefix::encode_formula(library.at(names[n]).formula, sig));
    std::vector<int> prompt = prompt_ids(loaded.vocab, line);
    prompt.push_back(lm::NEWLINE);
    std::vector<std::vector<int>> outputs;
    if (a.beam > 0) {
      p.mode = lm::DecodeMode::Beam;
      p.beam_width = a.beam;
      p.length_penalty = 1.0;
      for (auto& h : lm::beam_search(*loaded.model, prompt, p)) outputs.push_back(std::move(h.tokens));
    } else {
      for (std::size_t s = 0; s < a.samples; ++s) {
        p.seed = a.seed + n * a.samples + s;
        outputs.push_back(lm::sample(*loaded.model, prompt, p));
      }
    }
    for (std::size_t s = 0; s < outputs.size(); ++s) {
      eval::Prediction pred{names[n], s, {}};
      std::istringstream text(continuation_text(loaded.vocab, outputs[s]));
      for (std::string l; std::getline(text, l);) {
        if (l.find_first_not_of(" \t") != std::string::npos) pred.lines.push_back(l);
      }
      eval::write_prediction(a.out, pred);
      ++written;
    }
  }
  std::cerr << written << " prediction files for " << names.size() << " conjectures\n";
}

void run_eval(const EvalArgs& a) {
  const FormulaLibrary library = load_library(a.library);
  const prefix::SignatureMap sig = prefix::load_signature(a.sig);
  const auto predictions = eval::load_predictions(a.predictions);

  std::unique_ptr<eval::Prover> prover;
  if (a.prover == "stub") {
    prover = std::make_unique<eval::StubProver>();
  } else {
    prover = std::make_unique<eval::ExternalProver>(
        a.prover, a.prover_args.empty() ? eval::ExternalProver::kDefaultArgs : a.prover_args);
  }
  eval::EvalOptions opts;
  opts.cs_limit = a.cs_limit;
  opts.proof_limit = a.proof_limit;
  opts.jobs = a.jobs;
  opts.assemble.strict_chronology = a.strict;

  const eval::EvalResult result = eval::evaluate(predictions, library, sig, *prover, opts);
  const std::string json = eval::report_json(result.report);
  if (a.report.empty()) std::cout << json << "\n";
  else write_file(a.report, json + "\n");
  if (!a.csv.empty()) write_file(a.csv, eval::records_csv(result.records));
  if (!a.new_formulas.empty()) {
    std::string out;
    for (std::size_t i = 0; i < result.new_formulas.size(); ++i) {
      out += "fof(new_conjecture_" + std::to_string(i + 1) + ", conjecture, " +
             tptp::print_formula(result.new_formulas[i]) + ").\n";
    }
    write_file(a.new_formulas, out);
  }
  const auto& r = result.report;
  std::cerr << r.problems_attempted << " problems: " << r.verdicts.proved << " proved, "
            << r.verdicts.countersatisfiable << " countersatisfiable, " << r.verdicts.unknown
            << " unknown, " << r.errors << " errors\n";
}

volatile std::sig_atomic_t g_stop = 0;

void run_serve(const ServeArgs& a) {
  service::CompletionService svc(a.max_concurrent);
  service::HttpServer server(svc, a.static_dir);
  const int port = server.bind(a.host, a.port);
  std::signal(SIGINT, [](int) { g_stop = 1; });
  std::signal(SIGTERM, [](int) { g_stop = 1; });
  std::atomic<bool> done{false};
  std::thread watcher([&] {
    while (!g_stop && !done) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    server.stop();
  });
  std::cerr << "listening on " << a.host << ":" << port << "\n";
  std::thread loader([&] {
    try {
      svc.load(service::load_resources(a.ckpt, a.library, a.sig));
      std::cerr << "model loaded: " << svc.health().dump() << "\n";
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      server.stop();
    }
  });
  server.run();
  done = true;
  watcher.join();
  loader.join();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neural conjecturing: datasets, language model, prover evaluation, completion server"};
  app.require_subcommand(1);

  auto* build = app.add_subcommand("build", "Build training corpora")->require_subcommand(1);
  BuildTextArgs d1, d3;
  auto* ds1 = build->add_subcommand("dataset1", "Concatenated article text without comments");
  ds1->add_option("--out", d1.out, "Output file")->required();
  ds1->add_option("inputs", d1.inputs, "Article files")->required()->check(CLI::ExistingFile);
  auto* ds3 = build->add_subcommand("dataset3", "Tokenized derivations, one statement per line");
  ds3->add_option("--out", d3.out, "Output file")->required();
  ds3->add_option("inputs", d3.inputs, "Derivation files")->required()->check(CLI::ExistingFile);
  Dataset4Args d4;
  auto* ds4 = build->add_subcommand("dataset4", "Prefix-encoded conjecture and premise files");
  ds4->add_option("--library", d4.library, "TPTP library file or directory")->required();
  ds4->add_option("--derivations", d4.derivations, "Directory of derivations")
      ->required()
      ->check(CLI::ExistingDirectory);
  ds4->add_option("--sig", d4.sig, "Signature file to write")->required();
  ds4->add_option("--out", d4.out, "Output directory")->required();

  auto* lm_cmd = app.add_subcommand("lm", "Language model")->require_subcommand(1);
  TrainArgs ta;
  auto* train = lm_cmd->add_subcommand("train", "Train a model and write a checkpoint");
  train->add_option("--config", ta.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
  train->add_option("--corpus", ta.corpus, "Corpus file or directory")->required()->check(CLI::ExistingPath);
  train->add_option("--out", ta.out, "Checkpoint path")->required();
  train->add_option("--trace", ta.trace, "Loss trace CSV (step,loss)");
  train->add_option("--tokenizer", ta.tokenizer, "whitespace, tptp or bytes")
      ->check(CLI::IsMember({"whitespace", "tptp", "bytes"}))
      ->capture_default_str();
  train->add_option("--valid", ta.valid, "Held-out corpus to report the loss on")->check(CLI::ExistingPath);
  train->add_option("--log-every", ta.log_every, "Progress interval in steps (0 = quiet)")
      ->capture_default_str();

  DecodeArgs sa, ba;
  auto* sample = lm_cmd->add_subcommand("sample", "Temperature / top-k sampling");
  sample->add_option("--ckpt", sa.ckpt, "Checkpoint")->required()->check(CLI::ExistingFile);
  sample->add_option("--prompt-file", sa.prompt_file, "Prompt text (default: empty)")->check(CLI::ExistingFile);
  sample->add_option("--temperature", sa.temperature)->capture_default_str();
  sample->add_option("--top-k", sa.top_k, "0 = unlimited")->capture_default_str();
  sample->add_option("--max-new-tokens", sa.max_new_tokens)->capture_default_str();
  sample->add_option("--count", sa.count, "Number of samples")->capture_default_str();
  sample->add_option("--seed", sa.seed)->capture_default_str();
  auto* beam = lm_cmd->add_subcommand("beam", "Beam search");
  beam->add_option("--ckpt", ba.ckpt, "Checkpoint")->required()->check(CLI::ExistingFile);
  beam->add_option("--prompt-file", ba.prompt_file, "Prompt text (default: empty)")->check(CLI::ExistingFile);
  beam->add_option("--width", ba.width)->capture_default_str();
  beam->add_option("--temperature", ba.temperature)->capture_default_str();
  beam->add_option("--max-new-tokens", ba.max_new_tokens)->capture_default_str();
  beam->add_option("--length-penalty", ba.length_penalty)->capture_default_str();

  PredictArgs pa;
  auto* predict = lm_cmd->add_subcommand("predict", "Write premise predictions for library conjectures");
  predict->add_option("--ckpt", pa.ckpt, "Checkpoint")->required()->check(CLI::ExistingFile);
  predict->add_option("--library", pa.library, "TPTP library")->required();
  predict->add_option("--sig", pa.sig, "Signature file")->required()->check(CLI::ExistingFile);
  predict->add_option("--names", pa.names, "File of conjecture names (default: whole library)")
      ->check(CLI::ExistingFile);
  predict->add_option("--out", pa.out, "Prediction directory")->required();
  predict->add_option("--samples", pa.samples, "Samples per conjecture")->capture_default_str();
  predict->add_option("--beam", pa.beam, "Beam width; replaces sampling when > 0")->capture_default_str();
  predict->add_option("--temperature", pa.temperature)->capture_default_str();
  predict->add_option("--top-k", pa.top_k)->capture_default_str();
  predict->add_option("--max-new-tokens", pa.max_new_tokens)->capture_default_str();
  predict->add_option("--seed", pa.seed)->capture_default_str();

  auto* eval_cmd = app.add_subcommand("eval", "Prover evaluation")->require_subcommand(1);
  EvalArgs ea;
  auto* run = eval_cmd->add_subcommand("run", "Classify, assemble and prove predictions");
  run->add_option("--library", ea.library, "TPTP library")->required();
  run->add_option("--sig", ea.sig, "Signature file")->required()->check(CLI::ExistingFile);
  run->add_option("--predictions", ea.predictions, "Prediction directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  run->add_option("--prover", ea.prover, "Prover executable, or 'stub'")->capture_default_str();
  run->add_option("--prover-args", ea.prover_args, "Argument template with {limit} and {file}");
  run->add_option("--cs-limit", ea.cs_limit, "Seconds")->capture_default_str();
  run->add_option("--proof-limit", ea.proof_limit, "Seconds")->capture_default_str();
  run->add_option("--jobs", ea.jobs, "Parallel problems (0 = all cores)")->capture_default_str();
  run->add_option("--report", ea.report, "Report JSON (default: stdout)");
  run->add_option("--csv", ea.csv, "Per-problem CSV");
  run->add_option("--new-formulas", ea.new_formulas, "TPTP file of distinct new conjectures");
  run->add_flag("--strict-chronology", ea.strict, "Drop premises that do not precede the conjecture");

  ServeArgs va;
  auto* serve = app.add_subcommand("serve", "HTTP completion server");
  serve->add_option("--ckpt", va.ckpt, "Checkpoint")->required()->envname("NEUCONJ_CHECKPOINT");
  serve->add_option("--library", va.library, "TPTP library (premise mode)")->envname("NEUCONJ_LIBRARY");
  serve->add_option("--sig", va.sig, "Signature file (premise mode)")->envname("NEUCONJ_SIGNATURE");
  serve->add_option("--host", va.host)->envname("NEUCONJ_HOST")->capture_default_str();
  serve->add_option("--port", va.port)->envname("NEUCONJ_PORT")->capture_default_str();
  serve->add_option("--max-concurrent", va.max_concurrent, "Concurrent decodes")
      ->envname("NEUCONJ_MAX_CONCURRENT")
      ->capture_default_str();
  serve->add_option("--static", va.static_dir, "Directory served at /")->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    if (ds1->parsed()) {
      dataset::build_corpus({dataset::DatasetKind::ConcatenatedText, d1.inputs, d1.out});
    } else if (ds3->parsed()) {
      dataset::build_corpus({dataset::DatasetKind::TokenizedProofs, d3.inputs, d3.out});
    } else if (ds4->parsed()) {
      const auto s = dataset::build_dataset4(d4.library, d4.derivations, d4.sig, d4.out);
      for (const auto& skip : s.skipped) std::cerr << "skipped " << skip << "\n";
      std::cerr << s.files_written << " files written\n";
    } else if (train->parsed()) {
      run_train(ta);
    } else if (sample->parsed()) {
      run_sample(sa);
    } else if (beam->parsed()) {
      run_beam(ba);
    } else if (predict->parsed()) {
      run_predict(pa);
    } else if (run->parsed()) {
      run_eval(ea);
    } else if (serve->parsed()) {
      run_serve(va);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
