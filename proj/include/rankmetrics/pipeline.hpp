#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "rankmetrics/activity.hpp"
#include "rankmetrics/analysis.hpp"
#include "rankmetrics/baseline.hpp"
#include "rankmetrics/config.hpp"
#include "rankmetrics/corpus.hpp"
#include "rankmetrics/indicators.hpp"
#include "rankmetrics/log.hpp"
#include "rankmetrics/ranking.hpp"
#include "rankmetrics/synth.hpp"
#include "rankmetrics/table.hpp"

namespace rankmetrics {

struct RunConfig {
  CorpusPaths inputs;
  std::optional<std::string> baselines_path;
  WeightSchemeConfig schemes;
  double sds_threshold = 0.5;
  double top_fraction = 0.2;
  double bottom_fraction = 0.4;
  RatioMode ratio_mode = RatioMode::PerCapita;
  std::optional<int> reference_year;
  std::string out_dir;
  TableFormat format = TableFormat::Text;
  std::uint64_t config_hash = 0;

  void validate(bool check_paths = true) const {
    auto in_open_unit = [](double v) { return v > 0.0 && v < 1.0; };
    if (!(sds_threshold >= 0.0 && sds_threshold <= 1.0)) throw ConfigError("sds_threshold must lie in [0, 1]");
    if (!in_open_unit(top_fraction)) throw ConfigError("top_fraction must lie in (0, 1)");
    if (!in_open_unit(bottom_fraction)) throw ConfigError("bottom_fraction must lie in (0, 1)");
    if (!check_paths) return;
    for (const auto* p : {&inputs.scientists, &inputs.publications, &inputs.authorships}) {
      if (p->empty()) throw ConfigError("missing input path (scientists, publications and authorships are required)");
      if (!std::filesystem::exists(*p)) throw ConfigError("input not found: " + *p);
    }
    if (baselines_path && !std::filesystem::exists(*baselines_path))
      throw ConfigError("baseline file not found: " + *baselines_path);
  }

  static RunConfig from_config(const Config& cfg) {
    RunConfig rc;
    constexpr std::string_view sec = "run";
    rc.inputs.scientists = cfg.get("input", "scientists").value_or("");
    rc.inputs.publications = cfg.get("input", "publications").value_or("");
    rc.inputs.authorships = cfg.get("input", "authorships").value_or("");
    rc.baselines_path = cfg.get("input", "baselines");
    for (auto& uda : cfg.get_list("weights", "life_science_udas")) rc.schemes.positional_udas.insert(uda);
    rc.sds_threshold = cfg.get_double(sec, "sds_threshold", rc.sds_threshold);
    rc.top_fraction = cfg.get_double(sec, "top_fraction", rc.top_fraction);
    rc.bottom_fraction = cfg.get_double(sec, "bottom_fraction", rc.bottom_fraction);
    if (auto y = cfg.get(sec, "reference_year")) rc.reference_year = static_cast<int>(cfg.get_int(sec, "reference_year", 0));
    if (auto mode = cfg.get(sec, "ratio_mode")) {
      if (*mode == "per_capita")
        rc.ratio_mode = RatioMode::PerCapita;
      else if (*mode == "raw_sum")
        rc.ratio_mode = RatioMode::RawSum;
      else
        throw ConfigError("ratio_mode must be per_capita or raw_sum");
    }
    rc.out_dir = cfg.get("output", "out").value_or("");
    if (auto f = cfg.get("output", "format")) {
      auto parsed = parse_format(*f);
      if (!parsed) throw ConfigError("format must be text, csv or md");
      rc.format = *parsed;
    }
    rc.config_hash = cfg.hash();
    return rc;
  }
};

// Intermediate products of one run; every stage can be exported.
struct PipelineArtifacts {
  Corpus loaded;
  Corpus corpus;  // after the SDS activity filter
  BaselineTable baselines;
  std::vector<IndicatorRecord> indicators;
  std::array<std::vector<PercentileRecord>, 3> percentiles;  // by kIndicators order
  std::vector<TopFlag> top_fss;
};

struct ReportBundle {
  std::vector<Table> tables;  // T1..T10 then CHI
};

// ---------------------------------------------------------------------------
// Table builders

namespace detail {

inline std::vector<Column> rank_columns(std::vector<std::string> parts = {}) {
  std::vector<Column> cols;
  for (Rank r : kRanks) cols.push_back({std::string(to_string(r)), parts});
  return cols;
}

}  // namespace detail

inline Table roster_table(const RosterSummary& summary) {
  Table t{"T1", "Research personnel by UDA and academic rank", "t01_roster"};
  t.columns = {{"UDA"}, {"SDS"}};
  for (auto& c : detail::rank_columns({"count", "share"})) t.columns.push_back(c);
  t.columns.push_back({"Total"});
  auto row_of = [](const RosterRow& r) {
    std::vector<Cell> row{Cell::label(r.uda), Cell::count(static_cast<std::int64_t>(r.sds_count))};
    for (const auto& c : r.by_rank) row.push_back(Cell::count_share(c.headcount, c.share));
    row.push_back(Cell::count(r.total));
    return row;
  };
  for (const auto& r : summary.rows) t.rows.push_back(row_of(r));
  t.rows.push_back(row_of(summary.total));
  return t;
}

inline Table age_table(const RosterSummary& summary) {
  Table t{"T2", "Average age by UDA and academic rank", "t02_ages"};
  t.columns = {{"UDA"}};
  for (auto& c : detail::rank_columns()) t.columns.push_back(c);
  t.columns.push_back({"Average"});
  auto row_of = [](const RosterRow& r) {
    std::vector<Cell> row{Cell::label(r.uda)};
    for (const auto& c : r.by_rank) row.push_back(Cell::fixed(c.mean_age, 0));
    row.push_back(Cell::fixed(r.mean_age, 0));
    return row;
  };
  for (const auto& r : summary.rows) t.rows.push_back(row_of(r));
  t.rows.push_back(row_of(summary.total));
  t.metadata.emplace_back("reference_year", std::to_string(summary.reference_year));
  return t;
}

inline Table activity_table(const ActivityTable& activity, bool by_citation) {
  Table t = by_citation ? Table{"T4", "Scientists with at least one citation", "t04_cited"}
                        : Table{"T3", "Scientists with at least one publication", "t03_publishing"};
  t.columns = {{"UDA"}};
  for (auto& c : detail::rank_columns({"count", "share"})) t.columns.push_back(c);
  t.columns.push_back({"Total", {"count", "share"}});
  auto cell_of = [&](const ActivityCell& c) {
    return by_citation ? Cell::count_share(c.cited, c.cited_share())
                       : Cell::count_share(c.publishing, c.publishing_share());
  };
  auto row_of = [&](const ActivityRow& r) {
    std::vector<Cell> row{Cell::label(r.uda)};
    for (const auto& c : r.by_rank) row.push_back(cell_of(c));
    row.push_back(cell_of(r.total));
    return row;
  };
  for (const auto& r : activity.rows) t.rows.push_back(row_of(r));
  t.rows.push_back(row_of(activity.total));
  return t;
}

inline Table rank_average_table(const RankAverageTable& avg) {
  Table t;
  switch (avg.indicator) {
    case Indicator::Np: t = {"T5", "Average percentile for N_p by UDA and academic rank", "t05_percentile_np"}; break;
    case Indicator::Fss: t = {"T6", "Average percentile for FSS by UDA and academic rank", "t06_percentile_fss"}; break;
    case Indicator::Qi: t = {"T7", "Average percentile for QI by UDA and academic rank", "t07_percentile_qi"}; break;
  }
  t.columns = {{"UDA"}};
  for (auto& c : detail::rank_columns()) t.columns.push_back(c);
  auto row_of = [](const RankAverageRow& r) {
    std::vector<Cell> row{Cell::label(r.uda)};
    for (const auto& v : r.by_rank) row.push_back(Cell::fixed(v, 2));
    return row;
  };
  for (const auto& r : avg.rows) t.rows.push_back(row_of(r));
  t.rows.push_back(row_of(avg.total));
  return t;
}

// One column per indicator; `tables` in kIndicators order, same UDA rows.
inline Table dominance_table(const std::array<DominanceTable, 3>& tables) {
  const auto& first = tables.front();
  Table t{"T8",
          fmt::format("SDSs in which {} outperform {} (sequence criterion)", to_string(first.group_b),
                      to_string(first.group_a)),
          "t08_dominance"};
  t.columns = {{"UDA"}};
  for (const auto& d : tables) t.columns.push_back({std::string(to_string(d.indicator)), {"wins", "of"}});
  for (std::size_t i = 0; i < first.rows.size(); ++i) {
    std::vector<Cell> row{Cell::label(first.rows[i].uda)};
    for (const auto& d : tables) row.push_back(Cell::out_of(d.rows[i].b_wins, d.rows[i].compared));
    t.rows.push_back(std::move(row));
  }
  std::vector<Cell> total{Cell::label("Total")};
  for (const auto& d : tables) total.push_back(Cell::out_of(d.total.b_wins, d.total.compared));
  t.rows.push_back(std::move(total));
  for (const auto& d : tables)
    for (const auto& r : d.rows)
      if (r.excluded > 0)
        t.notes.push_back(fmt::format("{} {}: {} SDS(s) lacking {} or {} excluded from the denominator", r.uda,
                                      to_string(d.indicator), r.excluded, to_string(d.group_a),
                                      to_string(d.group_b)));
  return t;
}

inline Table concentration_report(const ConcentrationTable& conc) {
  Table t{"T9", fmt::format("Performance concentration ({}) by UDA and academic rank", to_string(conc.indicator)),
          "t09_concentration"};
  t.columns = {{"UDA"}};
  for (Rank r : kRanks) {
    t.columns.push_back({fmt::format("{} Gini", to_string(r))});
    t.columns.push_back({fmt::format("{} Bottom/Top", to_string(r))});
  }
  for (const auto& r : conc.rows) {
    std::vector<Cell> row{Cell::label(r.uda)};
    for (const auto& c : r.by_rank) {
      row.push_back(Cell::fixed(c.gini, 3));
      row.push_back(Cell::fixed(c.bottom_top_ratio, 3));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline Table top_distribution_report(const TopDistributionTable& top) {
  Table t{"T10",
          fmt::format("Distribution of top scientists (%) by {} among academic ranks (concentration index)",
                      to_string(top.indicator)),
          "t10_top_scientists"};
  t.columns = {{"UDA"}};
  for (auto& c : detail::rank_columns({"share", "index"})) t.columns.push_back(c);
  auto row_of = [](const TopDistributionRow& r) {
    std::vector<Cell> row{Cell::label(r.uda)};
    for (const auto& c : r.by_rank) row.push_back(Cell::share_index(c.top_share, c.index));
    return row;
  };
  for (const auto& r : top.rows) t.rows.push_back(row_of(r));
  t.rows.push_back(row_of(top.total));
  return t;
}

inline Table chi_square_report(const TopDistributionTable& top) {
  Table t{"CHI", fmt::format("Pearson chi-square: top-scientist status ({}) vs academic rank", to_string(top.indicator)),
          "chi_square"};
  t.columns = {{"UDA"}, {"chi2"}, {"df"}, {"p_value"}};
  auto row_of = [](const TopDistributionRow& r) {
    std::vector<Cell> row{Cell::label(r.uda)};
    if (r.chi_square) {
      row.push_back(Cell::fixed(r.chi_square->statistic, 3));
      row.push_back(Cell::count(r.chi_square->degrees_of_freedom));
      row.push_back(Cell::fixed(r.chi_square->p_value, 4));
    } else {
      row.insert(row.end(), 3, Cell::missing());
    }
    return row;
  };
  for (const auto& r : top.rows) t.rows.push_back(row_of(r));
  t.rows.push_back(row_of(top.total));
  return t;
}

// ---------------------------------------------------------------------------
// Pipeline stages

// Baselines come from the full loaded corpus (the national reference
// population) unless an override file is configured.
inline PipelineArtifacts compute_artifacts(const RunConfig& config, Corpus loaded) {
  PipelineArtifacts a;
  a.loaded = std::move(loaded);
  a.corpus = filter_active_sds(a.loaded, config.sds_threshold);
  logger().info("SDS filter kept {} of {} SDSs", a.corpus.sds_to_uda().size(), a.loaded.sds_to_uda().size());
  if (config.baselines_path)
    a.baselines = baselines_from_records(read_records(*config.baselines_path));
  else
    a.baselines = build_baselines(a.loaded);
  a.indicators = compute_indicators(a.corpus, a.baselines, config.schemes);
  for (std::size_t i = 0; i < kIndicators.size(); ++i)
    a.percentiles[i] = sds_percentiles(a.corpus, a.indicators, kIndicators[i]);
  a.top_fss = top_scientists(a.corpus, a.indicators, Indicator::Fss, config.top_fraction);
  return a;
}

inline ReportBundle build_report(const RunConfig& config, const PipelineArtifacts& a) {
  ReportBundle bundle;
  const auto summary = roster_summary(a.corpus, config.reference_year);
  bundle.tables.push_back(roster_table(summary));
  bundle.tables.push_back(age_table(summary));
  const auto activity = activity_rates(a.corpus, a.indicators);
  bundle.tables.push_back(activity_table(activity, false));
  bundle.tables.push_back(activity_table(activity, true));
  for (std::size_t i = 0; i < 3; ++i) {
    auto avg = uda_rank_average(a.percentiles[i], a.corpus);
    avg.indicator = kIndicators[i];
    bundle.tables.push_back(rank_average_table(avg));
  }
  std::array<DominanceTable, 3> dominance;
  for (std::size_t i = 0; i < 3; ++i) {
    dominance[i] = dominance_counts(a.corpus, a.percentiles[i], Rank::Full, Rank::Assistant);
    dominance[i].indicator = kIndicators[i];
  }
  bundle.tables.push_back(dominance_table(dominance));
  ConcentrationOptions conc{config.bottom_fraction, config.top_fraction, config.ratio_mode};
  bundle.tables.push_back(concentration_report(concentration_table(a.corpus, a.indicators, Indicator::Fss, conc)));
  const auto top = top_distribution(a.corpus, a.top_fss);
  bundle.tables.push_back(top_distribution_report(top));
  bundle.tables.push_back(chi_square_report(top));

  const std::vector<std::pair<std::string, std::string>> meta{
      {"config_hash", fmt::format("{:016x}", config.config_hash)},
      {"scientists", std::to_string(a.corpus.scientists().size())},
      {"publications", std::to_string(a.corpus.publications().size())},
      {"authorships", std::to_string(a.corpus.authorships().size())},
      {"sds", fmt::format("{} of {}", a.corpus.sds_to_uda().size(), a.loaded.sds_to_uda().size())},
  };
  for (auto& t : bundle.tables) t.metadata.insert(t.metadata.begin(), meta.begin(), meta.end());
  return bundle;
}

inline std::string render_bundle(const ReportBundle& bundle, TableFormat format) {
  std::string out;
  for (std::size_t i = 0; i < bundle.tables.size(); ++i) {
    if (i > 0) out += "\n";
    out += format_table(bundle.tables[i], format);
  }
  return out;
}

// One file per table plus the concatenated report.
inline void write_bundle(const ReportBundle& bundle, const std::filesystem::path& dir, TableFormat format) {
  std::filesystem::create_directories(dir);
  const auto ext = std::string(file_extension(format));
  for (const auto& t : bundle.tables) write_file((dir / (t.slug + "." + ext)).string(), format_table(t, format));
  write_file((dir / ("report." + ext)).string(), render_bundle(bundle, format));
}

inline void write_artifacts(const PipelineArtifacts& a, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file((dir / "baselines.csv").string(), baselines_to_csv(a.baselines));
  write_file((dir / "indicators.csv").string(), indicators_to_csv(a.indicators));
  std::vector<PercentileRecord> all;
  for (const auto& p : a.percentiles) all.insert(all.end(), p.begin(), p.end());
  write_file((dir / "percentiles.csv").string(), percentiles_to_csv(all));
  write_file((dir / "top_flags.csv").string(), top_flags_to_csv(a.top_fss));
}

struct PipelineResult {
  PipelineArtifacts artifacts;
  ReportBundle bundle;
};

// load -> filter -> baselines -> indicators -> percentiles -> analyses ->
// reports. Writes the bundle and artifacts when config.out_dir is set.
inline PipelineResult run_pipeline(const RunConfig& config) {
  config.validate();
  PipelineResult r;
  r.artifacts = compute_artifacts(
      config, load_corpus_files(config.inputs.scientists, config.inputs.publications, config.inputs.authorships));
  r.bundle = build_report(config, r.artifacts);
  if (!config.out_dir.empty()) {
    write_bundle(r.bundle, config.out_dir, config.format);
    write_artifacts(r.artifacts, config.out_dir);
  }
  return r;
}

}  // namespace rankmetrics
