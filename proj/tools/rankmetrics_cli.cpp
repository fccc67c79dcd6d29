// rankmetrics: command-line front end for the research-performance toolkit.
//
//   rankmetrics validate  --scientists S --publications P --authorships A
//   rankmetrics synth     --out DIR [--seed N] [--config FILE]
//   rankmetrics indicators|rank|analyze|report  <inputs> [--out DIR] [--format text|csv|md]
//
// Any config key can be given as `--key value`; flags win over the file.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rankmetrics/rankmetrics.hpp"

namespace rm = rankmetrics;

namespace {

struct CommonOptions {
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> flags;  // explicit flags actually given
};

// Named flags shared by the analysis subcommands. Values land in `opts.flags`
// so they override config-file keys of the same name.
void add_input_flags(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "flat key = value config file");
  for (const char* key : {"scientists", "publications", "authorships", "baselines", "indicators", "out", "format",
                          "top-fraction", "bottom-fraction", "sds-threshold", "reference-year", "life-science-udas",
                          "ratio-mode"}) {
    cmd->add_option_function<std::string>(
        std::string("--") + key, [&opts, key](const std::string& v) { opts.flags.emplace_back(key, v); });
  }
  cmd->allow_extras();
}

// Leftover `--key value` / `--key=value` tokens become config overrides.
void collect_extras(const CLI::App* cmd, CommonOptions& opts) {
  const auto extra = cmd->remaining();
  for (std::size_t i = 0; i < extra.size(); ++i) {
    const auto& tok = extra[i];
    if (!tok.starts_with("--")) throw rm::ConfigError("unexpected argument '" + tok + "'");
    const auto body = tok.substr(2);
    if (auto eq = body.find('='); eq != std::string::npos) {
      opts.flags.emplace_back(body.substr(0, eq), body.substr(eq + 1));
    } else {
      if (i + 1 >= extra.size()) throw rm::ConfigError("flag '" + tok + "' needs a value");
      opts.flags.emplace_back(body, extra[++i]);
    }
  }
}

rm::Config make_config(const CommonOptions& opts) {
  rm::Config cfg = opts.config_path.empty() ? rm::Config{} : rm::Config::load(opts.config_path);
  for (const auto& [k, v] : opts.flags) cfg.set_override(k, v);
  return cfg;
}

rm::Corpus load_inputs(const rm::RunConfig& rc) {
  rc.validate();
  return rm::load_corpus_files(rc.inputs.scientists, rc.inputs.publications, rc.inputs.authorships);
}

// Imported indicators when --indicators is given, otherwise computed.
std::vector<rm::IndicatorRecord> indicators_for(const rm::Config& cfg,
                                                rm::PipelineArtifacts& a) {
  if (auto path = cfg.get("input", "indicators")) return rm::indicators_from_records(rm::read_records(*path));
  return a.indicators;
}

void emit(const rm::RunConfig& rc, const std::string& name, const std::string& content) {
  if (rc.out_dir.empty()) {
    std::cout << content;
    return;
  }
  std::filesystem::create_directories(rc.out_dir);
  rm::write_file((std::filesystem::path(rc.out_dir) / name).string(), content);
}

void emit_table(const rm::RunConfig& rc, const rm::Table& t) {
  emit(rc, t.slug + "." + std::string(rm::file_extension(rc.format)), rm::format_table(t, rc.format));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rank-group research performance analysis from publication and citation records"};
  app.require_subcommand(1);

  CommonOptions opts;
  auto* validate = app.add_subcommand("validate", "Load and validate the three corpus files");
  auto* synth = app.add_subcommand("synth", "Generate a deterministic synthetic corpus");
  auto* indicators = app.add_subcommand("indicators", "Compute baselines and N_p / QI / FSS per scientist");
  auto* rank = app.add_subcommand("rank", "SDS percentiles and top-scientist flags");
  auto* analyze = app.add_subcommand("analyze", "Dominance, concentration and top-scientist analyses");
  auto* report = app.add_subcommand("report", "Full pipeline: every table");
  for (auto* cmd : {validate, synth, indicators, rank, analyze, report}) add_input_flags(cmd, opts);
  synth->add_option_function<std::string>("--seed", [&opts](const std::string& v) { opts.flags.emplace_back("seed", v); },
                                          "generator seed");

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* cmd = app.get_subcommands().front();
    collect_extras(cmd, opts);
    const rm::Config cfg = make_config(opts);

    if (cmd == synth) {
      const auto sc = rm::SynthConfig::from_config(cfg);
      const auto out = cfg.get("output", "out");
      if (!out) throw rm::ConfigError("synth needs --out DIR");
      const auto generated = rm::generate_corpus(sc);
      const auto paths = rm::write_synth_corpus(generated, *out);
      std::cout << "scientists=" << generated.scientists.size() << " publications=" << generated.publications.size()
                << " authorships=" << generated.authorships.size() << "\n"
                << paths.scientists << "\n"
                << paths.publications << "\n"
                << paths.authorships << "\n";
      return 0;
    }

    const auto rc = rm::RunConfig::from_config(cfg);

    if (cmd == validate) {
      const auto corpus = load_inputs(rc);
      std::cout << "ok: scientists=" << corpus.scientists().size()
                << " publications=" << corpus.publications().size()
                << " authorships=" << corpus.authorships().size() << " sds=" << corpus.sds_to_uda().size()
                << " uda=" << corpus.udas().size() << "\n";
      return 0;
    }

    if (cmd == report) {
      const auto result = rm::run_pipeline(rc);
      if (rc.out_dir.empty()) std::cout << rm::render_bundle(result.bundle, rc.format);
      return 0;
    }

    auto artifacts = rm::compute_artifacts(rc, load_inputs(rc));

    if (cmd == indicators) {
      emit(rc, "baselines.csv", rc.out_dir.empty() ? std::string() : rm::baselines_to_csv(artifacts.baselines));
      emit(rc, "indicators.csv", rm::indicators_to_csv(artifacts.indicators));
      return 0;
    }

    const auto records = indicators_for(cfg, artifacts);

    if (cmd == rank) {
      std::vector<rm::PercentileRecord> all;
      for (auto ind : rm::kIndicators) {
        auto p = rm::sds_percentiles(artifacts.corpus, records, ind);
        all.insert(all.end(), p.begin(), p.end());
      }
      emit(rc, "percentiles.csv", rm::percentiles_to_csv(all));
      emit(rc, "top_flags.csv",
           rm::top_flags_to_csv(rm::top_scientists(artifacts.corpus, records, rm::Indicator::Fss, rc.top_fraction)));
      return 0;
    }

    // analyze
    artifacts.indicators = records;
    for (std::size_t i = 0; i < rm::kIndicators.size(); ++i)
      artifacts.percentiles[i] = rm::sds_percentiles(artifacts.corpus, records, rm::kIndicators[i]);
    artifacts.top_fss = rm::top_scientists(artifacts.corpus, records, rm::Indicator::Fss, rc.top_fraction);
    const auto bundle = rm::build_report(rc, artifacts);
    for (const auto& t : bundle.tables)
      if (t.key == "T8" || t.key == "T9" || t.key == "T10" || t.key == "CHI") emit_table(rc, t);
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
