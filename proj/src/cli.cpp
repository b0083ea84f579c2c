#include "wag/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <ostream>
#include <set>
#include <sstream>

#include "wag/calibration.hpp"
#include "wag/local.hpp"
#include "wag/queryset.hpp"
#include "wag/text.hpp"

namespace wag::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

// Metric names across subjects, deduplicated by normalized name,
// first-seen spelling kept, sorted for determinism.
std::vector<std::string> metric_names(const std::vector<SubjectData>& subjects) {
  std::map<std::string, std::string> by_norm;
  for (const auto& s : subjects)
    for (const auto& [name, _] : s.series) by_norm.emplace(normalize_name(name), name);
  std::vector<std::string> names;
  for (const auto& [_, name] : by_norm) names.push_back(name);
  std::sort(names.begin(), names.end());
  return names;
}

void attach_embeddings(KnowledgeGraph& g, const EmbeddingProvider& embedder) {
  for (auto& [_, node] : g.nodes)
    if (!node.name_embedding) node.name_embedding = embedder.embed(node.name);
}

MetricSpec spec_for_column(const std::string& metric, const SubjectData& subject) {
  MetricSpec spec;
  spec.name = metric;
  spec.value_kind = subject.series.at(metric).kind;
  spec.dataset = subject.subject_id;
  spec.feature = metric;
  return spec;
}

ordered_json stats_json(const SubjectData& subject) {
  SelectionStats s = selection_stats(subject);
  ordered_json j;
  j["subject_id"] = subject.subject_id;
  j["missing_rate"] = s.md;
  j["valid_period_days"] = s.vl;
  j["cv"] = s.cv;
  j["cv_no_eligible_metrics"] = s.cv_no_eligible;
  j["pairwise_mi"] = s.mi;
  return j;
}

std::vector<double> parse_grid(const std::string& spec) {
  double lo = 0.0, hi = 0.0;
  int points = 0;
  char extra = 0;
  if (std::sscanf(spec.c_str(), "%lf,%lf,%d%c", &lo, &hi, &points, &extra) != 3)
    throw ArgumentError("--grid must be \"min,max,points\", got '" + spec + "'");
  return log_grid(lo, hi, points);
}

struct CommonFlags {
  std::string graph_path;
  std::string out_path;
  std::string cohort_dir;
  std::string subject_path;
  std::string query;
  std::string config_path;
  std::uint64_t seed = 0;
  double eta = 0.5;
  unsigned kappa = 0;
  std::string grid = "0.01,100,25";
  bool text = false;
};

RetrievalConfig load_config_or_default(const std::string& path) {
  return path.empty() ? RetrievalConfig{} : RetrievalConfig::load(path);
}

}  // namespace

std::string weight_report_csv(const KnowledgeGraph& graph,
                              const std::vector<SubjectData>& cohort,
                              const SubjectData& subject,
                              const std::vector<ParsedQuery>& queries,
                              const RetrievalConfig& cfg, const EmbeddingProvider& embedder) {
  std::string csv =
      "query,primary,neighbor,w_prior,r_pop,r_ind,mu_pop,mu_ind,w_global,w_local,w_final,"
      "fallback_path\n";
  int qid = 0;
  for (const auto& parsed : queries) {
    ++qid;
    RetrievalResult result = retrieve(graph, cohort, subject, parsed, cfg, embedder);
    if (result.no_match) continue;
    for (const auto& pr : result.retrieved) {
      // every neighbor row, not just the selected ones
      EdgeWeightBundle bundle =
          global_weights_for_node(graph, cohort, subject, pr.node_id, cfg.hbm());
      std::vector<Neighbor> nbs = neighborhood(graph, pr.node_id);
      std::map<std::string, LocalWeight> locals = local_weights_for_node(
          subject, nbs, result.reference_time, result.window_days, parsed.openness,
          cfg.gamma_local);
      for (const auto& nw : bundle.neighbors) {
        const LocalWeight& lw = locals.at(nw.node_id);
        double w_final = fuse(nw.w_global, lw.w_local, cfg.beta);
        csv += "q" + std::to_string(qid) + "," + pr.node_id + "," + nw.node_id + "," +
               fmt(nw.w_prior) + "," + (nw.r_pop ? fmt(*nw.r_pop) : "") + "," +
               (nw.r_ind ? fmt(*nw.r_ind) : "") + "," + fmt(nw.mu_pop) + "," +
               fmt(nw.mu_ind) + "," + fmt(nw.w_global) + "," + fmt(lw.w_local) + "," +
               fmt(w_final) + "," + to_string(nw.path) + "\n";
      }
    }
  }
  return csv;
}

namespace {

int dispatch(const CommonFlags& f, const std::string& command, std::ostream& out) {
  StubEmbedder embedder;
  StubKnowledgeProvider knowledge;

  if (command == "build-graph") {
    std::vector<SubjectData> subjects;
    if (!f.cohort_dir.empty()) subjects = load_cohort(f.cohort_dir);
    if (!f.subject_path.empty())
      subjects.push_back(load_subject_csv(f.subject_path,
                                          std::filesystem::path(f.subject_path).stem().string()));
    if (subjects.empty())
      throw ArgumentError("build-graph needs --cohort and/or --subject for metric names");
    KnowledgeGraph g = init_general_graph(metric_names(subjects), knowledge);
    attach_embeddings(g, embedder);
    if (f.out_path.empty()) throw ArgumentError("build-graph needs --out");
    save_graph(g, f.out_path);
    ordered_json j;
    j["nodes"] = g.nodes.size();
    j["edges"] = g.edges.size();
    j["out"] = f.out_path;
    out << j.dump(2) << "\n";
    return 0;
  }

  if (command == "integrate") {
    if (f.graph_path.empty() || f.subject_path.empty() || f.out_path.empty())
      throw ArgumentError("integrate needs --graph, --subject and --out");
    KnowledgeGraph g = load_graph(f.graph_path);
    SubjectData subject =
        load_subject_csv(f.subject_path, std::filesystem::path(f.subject_path).stem().string());
    ordered_json merged = ordered_json::array();
    ordered_json created = ordered_json::array();
    int new_edges = 0;
    for (const auto& [metric, _] : subject.series) {
      IntegrationReport report = integrate_metric(g, spec_for_column(metric, subject), knowledge);
      for (const auto& [incoming, id] : report.merged)
        merged.push_back({{"metric", incoming}, {"node_id", id}});
      for (const auto& id : report.created) created.push_back(id);
      new_edges += report.new_edges;
    }
    attach_embeddings(g, embedder);
    save_graph(g, f.out_path);
    ordered_json j;
    j["merged"] = std::move(merged);
    j["created"] = std::move(created);
    j["new_edges"] = new_edges;
    j["out"] = f.out_path;
    out << j.dump(2) << "\n";
    return 0;
  }

  if (command == "ingest-stats") {
    if (!f.subject_path.empty()) {
      SubjectData subject = load_subject_csv(
          f.subject_path, std::filesystem::path(f.subject_path).stem().string());
      out << stats_json(subject).dump(2) << "\n";
      return 0;
    }
    if (f.cohort_dir.empty()) throw ArgumentError("ingest-stats needs --subject or --cohort");
    std::vector<SubjectData> cohort = load_cohort(f.cohort_dir);
    ordered_json j;
    ordered_json per = ordered_json::array();
    for (const auto& s : cohort) per.push_back(stats_json(s));
    j["subjects"] = std::move(per);
    if (f.kappa > 0) {
      SelectionResult sel = select_participants(cohort, static_cast<int>(f.kappa), f.seed);
      j["selection"] = {{"ids", sel.ids}, {"shortfall", sel.shortfall}};
    }
    out << j.dump(2) << "\n";
    return 0;
  }

  if (command == "retrieve") {
    if (f.graph_path.empty() || f.subject_path.empty() || f.query.empty())
      throw ArgumentError("retrieve needs --graph, --subject and --query");
    KnowledgeGraph g = load_graph(f.graph_path);
    SubjectData subject =
        load_subject_csv(f.subject_path, std::filesystem::path(f.subject_path).stem().string());
    std::vector<SubjectData> cohort;
    if (!f.cohort_dir.empty()) cohort = load_cohort(f.cohort_dir);
    RetrievalConfig cfg = load_config_or_default(f.config_path);

    std::vector<std::string> dictionary;
    for (const auto& [_, node] : g.nodes) dictionary.push_back(node.name);
    StubQueryParser parser(cfg.default_window);
    ParsedQuery parsed = parse_query(f.query, dictionary, parser);

    RetrievalResult result = retrieve(g, cohort, subject, parsed, cfg, embedder);
    if (f.text)
      out << result.context;
    else
      out << result.to_json_string();
    return 0;
  }

  if (command == "budget") {
    std::vector<int> budgets = neighbor_budget(f.eta, static_cast<int>(f.kappa), 1);
    out << budgets[0] << "\n";
    return 0;
  }

  if (command == "calibrate") {
    if (f.graph_path.empty() || f.cohort_dir.empty())
      throw ArgumentError("calibrate needs --graph and --cohort");
    KnowledgeGraph g = load_graph(f.graph_path);
    std::vector<SubjectData> cohort = load_cohort(f.cohort_dir);
    RetrievalConfig cfg = load_config_or_default(f.config_path);
    CalibrationResult result = calibrate(g, cohort, parse_grid(f.grid), cfg.hbm());
    if (!f.out_path.empty())
      write_text_file(f.out_path, curves_csv(result.population, result.individual));
    ordered_json j;
    j["alpha_pop"] = result.alpha_pop;
    j["alpha_ind"] = result.alpha_ind;
    out << j.dump(2) << "\n";
    return 0;
  }

  if (command == "queryset") {
    if (f.subject_path.empty()) throw ArgumentError("queryset needs --subject");
    SubjectData subject =
        load_subject_csv(f.subject_path, std::filesystem::path(f.subject_path).stem().string());
    std::vector<QueryInputTuple> tuples =
        sample_single_metric_inputs(subject, default_windows(), f.seed);
    int multi_count = f.kappa > 0 ? static_cast<int>(f.kappa) : 10;
    MultiSampleResult multi = sample_multi_metric_inputs(subject, multi_count, f.seed);
    for (auto& t : multi.tuples) tuples.push_back(std::move(t));
    std::string lines;
    for (const auto& t : tuples) lines += tuple_to_json_line(t) + "\n";
    if (!f.out_path.empty())
      write_text_file(f.out_path, lines);
    else
      out << lines;
    return 0;
  }

  if (command == "weight-report") {
    if (f.graph_path.empty() || f.subject_path.empty())
      throw ArgumentError("weight-report needs --graph and --subject");
    KnowledgeGraph g = load_graph(f.graph_path);
    SubjectData subject =
        load_subject_csv(f.subject_path, std::filesystem::path(f.subject_path).stem().string());
    std::vector<SubjectData> cohort;
    if (!f.cohort_dir.empty()) cohort = load_cohort(f.cohort_dir);
    RetrievalConfig cfg = load_config_or_default(f.config_path);

    std::vector<QueryInputTuple> tuples =
        sample_single_metric_inputs(subject, default_windows(), f.seed);
    std::vector<ParsedQuery> queries;
    for (size_t i = 0; i < tuples.size(); ++i)
      queries.push_back(tuple_to_query(tuples[i], mix_seed(f.seed, "wr" + std::to_string(i))));
    std::string csv = weight_report_csv(g, cohort, subject, queries, cfg, embedder);
    if (!f.out_path.empty())
      write_text_file(f.out_path, csv);
    else
      out << csv;
    return 0;
  }

  throw ArgumentError("unknown command: " + command);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Personalized knowledge-graph context retrieval over wearable metrics"};
  app.name("wag");
  app.require_subcommand(0, 1);

  CommonFlags f;
  std::string eval_agg_input;

  auto add_common = [&f](CLI::App* cmd) {
    cmd->add_option("--graph", f.graph_path, "Knowledge graph JSON path");
    cmd->add_option("--out", f.out_path, "Output path");
    cmd->add_option("--cohort", f.cohort_dir, "Cohort directory of per-subject CSVs");
    cmd->add_option("--subject", f.subject_path, "Subject CSV path");
    cmd->add_option("--query", f.query, "Query text");
    cmd->add_option("--config", f.config_path, "Retrieval config JSON path");
    cmd->add_option("--seed", f.seed, "Random seed");
    cmd->add_option("--eta", f.eta, "Openness in [0,1]");
    cmd->add_option("--kappa", f.kappa, "Count (max neighbors, selection or sample size)");
    cmd->add_option("--grid", f.grid, "Alpha grid as \"min,max,points\"");
    cmd->add_flag("--text", f.text, "Emit the rendered context document instead of JSON");
  };

  for (const char* name : {"build-graph", "integrate", "ingest-stats", "retrieve", "budget",
                           "calibrate", "queryset", "weight-report"})
    add_common(app.add_subcommand(name));
  CLI::App* eval_agg = app.add_subcommand("eval-agg");
  eval_agg->add_option("ranks", eval_agg_input, "Rank-record JSON Lines file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 1;
  }

  if (app.get_subcommands().empty()) {
    err << "error: a command is required\n" << app.help();
    return 1;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    if (command == "eval-agg") {
      std::vector<RankRecord> records;
      for (const auto& line : read_lines(eval_agg_input))
        records.push_back(rank_record_from_json_line(line));
      std::map<std::string, MethodSummary> summary = aggregate_rankings(records);
      ordered_json j;
      for (const auto& [method, s] : summary)
        j[method] = {{"mean_rank", s.mean_rank}, {"win_rate", s.win_rate}};
      out << j.dump(2) << "\n";
      return 0;
    }
    return dispatch(f, command, out);
  } catch (const CalibrationError& e) {
    err << "error: " << e.what() << "\n";
    err << curves_csv(e.curves(), CurvePair{});
    return 1;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace wag::cli
