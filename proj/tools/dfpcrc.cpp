#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dfpcrc/error.hpp"
#include "dfpcrc/eval.hpp"
#include "dfpcrc/ingest.hpp"
#include "dfpcrc/kernels.hpp"
#include "dfpcrc/pipeline.hpp"
#include "dfpcrc/synth.hpp"

namespace {

using namespace dfpcrc;

constexpr int kUsage = 1;
constexpr int kData = 2;
constexpr int kInvariant = 3;

struct InputOptions {
  std::string requests;
  std::string requests_format = "jsonl";
  std::string revisions;
  std::string revisions_format = "jsonl";
  std::string link_mode = "both";
};

struct AnalysisOptions {
  std::string correlation_mode = "standard";
  std::string hits_mode = "converged";
  std::string k = "auto";
  std::uint64_t seed = 42;
  std::string effective = "max";
  std::string stem = "minimal";
  std::string stop_words;
  std::string rules;
};

void add_inputs(CLI::App* cmd, InputOptions& in) {
  cmd->add_option("--requests", in.requests, "Change requests file")->required();
  cmd->add_option("--requests-format", in.requests_format, "jsonl or csv")
      ->check(CLI::IsMember({"jsonl", "csv"}));
  cmd->add_option("--revisions", in.revisions, "Revision log file")->required();
  cmd->add_option("--revisions-format", in.revisions_format, "jsonl, cvs_rlog or git_log")
      ->check(CLI::IsMember({"jsonl", "cvs_rlog", "git_log"}));
  cmd->add_option("--link-mode", in.link_mode, "explicit_id, token_overlap or both")
      ->check(CLI::IsMember({"explicit_id", "token_overlap", "both"}));
}

void add_analysis(CLI::App* cmd, AnalysisOptions& a) {
  cmd->add_option("--correlation-mode", a.correlation_mode, "standard or paper_literal")
      ->check(CLI::IsMember({"standard", "paper_literal"}));
  cmd->add_option("--hits-mode", a.hits_mode, "converged or single_pass")
      ->check(CLI::IsMember({"converged", "single_pass"}));
  cmd->add_option("--k", a.k, "Number of correlated sets, or auto");
  cmd->add_option("--seed", a.seed, "Clustering and split seed");
  cmd->add_option("--effective-dfp", a.effective, "max or mean")->check(CLI::IsMember({"max", "mean"}));
  cmd->add_option("--stem", a.stem, "minimal or porter")->check(CLI::IsMember({"minimal", "porter"}));
  cmd->add_option("--stop-words", a.stop_words, "Stop-word list, one word per line");
  cmd->add_option("--rules", a.rules, "Classification rules file");
}

std::string read_file(const std::string& path, Stage stage) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(stage, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(Stage::cli, "cannot write '" + path + "'");
  out << text;
}

pipeline::AnalysisConfig make_config(const AnalysisOptions& a) {
  pipeline::AnalysisConfig c;
  c.chi_mode = a.correlation_mode == "standard" ? correlation::ChiSquareMode::standard
                                                : correlation::ChiSquareMode::paper_literal;
  c.hits.mode = a.hits_mode == "converged" ? graph::HitsMode::converged : graph::HitsMode::single_pass;
  if (a.k != "auto") {
    std::size_t pos = 0;
    unsigned long long k = 0;
    try {
      k = std::stoull(a.k, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != a.k.size() || k == 0) throw CLI::ValidationError("--k", "expected a positive integer or auto");
    c.k = static_cast<std::size_t>(k);
  }
  c.seed = a.seed;
  c.effective = *dfp::parse_effective_rule(a.effective);
  c.text.stem_mode = a.stem == "porter" ? textprep::StemMode::porter : textprep::StemMode::minimal;
  if (!a.stop_words.empty())
    c.stop_words = std::make_shared<const textprep::StopWords>(textprep::StopWords::from_file(a.stop_words));
  if (!a.rules.empty())
    c.rules = std::make_shared<const taxonomy::ClassificationRuleSet>(
        taxonomy::ClassificationRuleSet::from_file(a.rules));
  return c;
}

pipeline::Corpus load_corpus(const InputOptions& in, const pipeline::AnalysisConfig& config) {
  pipeline::Corpus corpus;
  corpus.requests =
      ingest::read_change_requests(in.requests, *ingest::parse_request_format(in.requests_format));
  auto events = ingest::read_revision_log(in.revisions, ingest::parse_revision_format(in.revisions_format));
  ingest::LinkOptions link;
  link.mode = *ingest::parse_link_mode(in.link_mode);
  link.text = config.text_options();
  corpus.events = ingest::link_revisions(std::move(events), corpus.requests, link);
  return corpus;
}

std::string score_rows(const std::vector<dfp::RequestClassification>& rows) {
  const auto csv = pipeline::classifications_csv(rows);
  return csv.substr(csv.find('\n') + 1);
}

int run(int argc, char** argv) {
  CLI::App app{"Fault-proneness forecasting for change requests"};
  app.set_config("--config", "", "TOML or INI file with option defaults; flags win");
  app.require_subcommand(1);
  std::string simd = "auto";
  app.add_option("--simd", simd, "Kernel set: auto, scalar or avx2")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

  InputOptions in;
  AnalysisOptions an;

  auto* ingest_cmd = app.add_subcommand("ingest", "Parse, link and normalize inputs to JSONL");
  add_inputs(ingest_cmd, in);
  std::string out_requests, out_revisions;
  ingest_cmd->add_option("--out-requests", out_requests, "Normalized change requests")->required();
  ingest_cmd->add_option("--out-revisions", out_revisions, "Normalized, linked revisions")->required();

  auto* analyze_cmd = app.add_subcommand("analyze", "Compute the dfp report");
  add_inputs(analyze_cmd, in);
  add_analysis(analyze_cmd, an);
  std::string report_out, graph_dump, correlation_out, classes_out;
  analyze_cmd->add_option("--out", report_out, "Report path (stdout when omitted)");
  analyze_cmd->add_option("--graph-dump", graph_dump, "Write graph edges as JSONL");
  analyze_cmd->add_option("--correlation-csv", correlation_out, "Write the correlation matrix");
  analyze_cmd->add_option("--csv", classes_out, "Write per-request classes as CSV");

  auto* score_cmd = app.add_subcommand("score", "Classify new requests against a report");
  std::string report_in, new_requests, new_format = "jsonl";
  score_cmd->add_option("--report", report_in, "Report written by analyze")->required();
  score_cmd->add_option("--requests", new_requests, "New change requests")->required();
  score_cmd->add_option("--requests-format", new_format, "jsonl or csv")->check(CLI::IsMember({"jsonl", "csv"}));
  add_analysis(score_cmd, an);

  auto* eval_cmd = app.add_subcommand("evaluate", "Holdout comparison of DFP-CRC and DFP");
  add_inputs(eval_cmd, in);
  add_analysis(eval_cmd, an);
  double split = 0.85;
  std::string eval_out, metrics_out, comparison_out;
  eval_cmd->add_option("--split", split, "Training fraction")->check(CLI::Range(0.0, 1.0));
  eval_cmd->add_option("--out", eval_out, "Evaluation JSON (stdout when omitted)");
  eval_cmd->add_option("--metrics-csv", metrics_out, "method,accuracy,precision,recall,f_measure");
  eval_cmd->add_option("--comparison-csv", comparison_out, "method,metric,value");

  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic corpus");
  auto sc = synth::SynthConfig::defaults();
  std::string synth_requests, synth_revisions;
  synth_cmd->add_option("--seed", sc.seed, "Generator seed");
  synth_cmd->add_option("--num-requests", sc.num_requests, "Number of change requests");
  synth_cmd->add_option("--num-blocks", sc.num_blocks, "Number of code blocks");
  synth_cmd->add_option("--multiplier", sc.multiplier, "Revision multiplier for planted kinds");
  synth_cmd->add_option("--continue-probability", sc.continue_probability, "Geometric continuation probability");
  synth_cmd->add_option("--out-requests", synth_requests, "Change requests JSONL")->required();
  synth_cmd->add_option("--out-revisions", synth_revisions, "Revisions JSONL")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  if (simd != "auto") {
    const auto isa = *kernels::parse_isa(simd);
    if (!kernels::isa_supported(isa)) {
      std::cerr << "cli: kernel set '" << simd << "' is not supported on this CPU\n";
      return kUsage;
    }
    kernels::set_active_isa(isa);
  }

  try {
    if (*ingest_cmd) {
      const auto corpus = load_corpus(in, pipeline::AnalysisConfig{});
      write_output(out_requests, ingest::write_change_requests_jsonl(corpus.requests));
      write_output(out_revisions, ingest::write_revisions_jsonl(corpus.events));
    } else if (*analyze_cmd) {
      const auto config = make_config(an);
      const auto corpus = load_corpus(in, config);
      const auto analysis = pipeline::analyze(corpus, config);
      write_output(report_out, pipeline::report_json(corpus, analysis, config));
      if (!graph_dump.empty()) write_output(graph_dump, graph::dump_graph_jsonl(analysis.graph));
      if (!correlation_out.empty()) {
        if (!analysis.correlation) throw DataError(Stage::correlation, "no correlation matrix was computed");
        write_output(correlation_out, correlation::correlation_csv(*analysis.correlation));
      }
      if (!classes_out.empty())
        write_output(classes_out, pipeline::classifications_csv(analysis.report.classifications));
    } else if (*score_cmd) {
      const auto config = make_config(an);
      const auto model = pipeline::load_model(read_file(report_in, Stage::dfp));
      const auto requests =
          ingest::read_change_requests(new_requests, *ingest::parse_request_format(new_format));
      std::cout << score_rows(pipeline::score_requests(model, requests, config));
    } else if (*eval_cmd) {
      const auto config = make_config(an);
      const auto corpus = load_corpus(in, config);
      const auto report = eval::evaluate(corpus, config, split);
      write_output(eval_out, eval::evaluation_json(report));
      if (!metrics_out.empty()) write_output(metrics_out, eval::metrics_csv(report));
      if (!comparison_out.empty()) write_output(comparison_out, eval::comparison_csv(report));
    } else if (*synth_cmd) {
      const auto corpus = synth::generate(sc);
      write_output(synth_requests, corpus.requests_jsonl);
      write_output(synth_revisions, corpus.revisions_jsonl);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "cli: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    std::cerr << e.what() << '\n';
    return kData;
  } catch (const InvariantError& e) {
    std::cerr << e.what() << '\n';
    return kInvariant;
  } catch (const std::exception& e) {
    std::cerr << "cli: internal error: " << e.what() << '\n';
    return kInvariant;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
