#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "rankmetrics/config.hpp"
#include "rankmetrics/corpus.hpp"
#include "rankmetrics/error.hpp"

namespace rankmetrics {

// Parameters of the synthetic corpus generator. Randomness comes from
// std::mt19937_64 seeded with `seed`; the standard fixes its output sequence,
// and the distributions are those of the standard library in use, so output is
// byte-identical for a given config and toolchain.
struct SynthConfig {
  std::uint64_t seed = 20090630;
  int n_uda = 9;
  int sds_per_uda = 3;
  std::array<int, 3> scientists_per_sds{20, 20, 20};  // FULL, ASSOCIATE, ASSISTANT
  double pubs_per_scientist = 8.0;  // mean count for an active scientist at rank effect 1
  double pubs_dispersion = 4.0;     // gamma shape of the count mixture; larger = less spread
  double citation_mean = 2.0;       // mean citations per year since publication
  double citation_dispersion = 0.8;  // gamma shape of citations; small = heavy-tailed
  std::array<double, 3> rank_effect{1.3, 1.15, 1.0};
  std::array<double, 3> inactive_fraction{0.08, 0.14, 0.20};
  int year_first = 2004;
  int year_last = 2008;
  int categories_per_pub = 2;
  int categories_per_uda = 4;
  double authors_mean = 4.0;
  int max_authors = 50;
  double coauthor_share = 0.05;  // chance that a co-author slot goes to a roster colleague
  int universities = 30;
  double missing_affiliation = 0.02;

  void validate() const {
    auto fail = [](const char* field, const std::string& why) {
      throw ConfigError(fmt::format("synth config field '{}': {}", field, why));
    };
    if (n_uda < 1) fail("n_uda", "must be >= 1");
    if (sds_per_uda < 1) fail("sds_per_uda", "must be >= 1");
    const char* per_rank[] = {"full_per_sds", "associate_per_sds", "assistant_per_sds"};
    const char* effect[] = {"rank_effect_full", "rank_effect_associate", "rank_effect_assistant"};
    const char* inactive[] = {"inactive_full", "inactive_associate", "inactive_assistant"};
    for (std::size_t r = 0; r < 3; ++r) {
      if (scientists_per_sds[r] < 1) fail(per_rank[r], "must be >= 1");
      if (!(rank_effect[r] >= 0)) fail(effect[r], "must be >= 0");
      if (!(inactive_fraction[r] >= 0 && inactive_fraction[r] <= 1)) fail(inactive[r], "must lie in [0, 1]");
    }
    if (!(pubs_per_scientist >= 1)) fail("pubs_per_scientist", "must be >= 1");
    if (!(pubs_dispersion > 0)) fail("pubs_dispersion", "must be > 0");
    if (!(citation_mean >= 0)) fail("citation_mean", "must be >= 0");
    if (!(citation_dispersion > 0)) fail("citation_dispersion", "must be > 0");
    if (year_last < year_first) fail("year_last", "must be >= year_first");
    if (categories_per_uda < 1) fail("categories_per_uda", "must be >= 1");
    if (categories_per_pub < 1 || categories_per_pub > categories_per_uda)
      fail("categories_per_pub", "must lie in 1..categories_per_uda");
    if (!(authors_mean >= 1)) fail("authors_mean", "must be >= 1");
    if (max_authors < 1) fail("max_authors", "must be >= 1");
    if (!(coauthor_share >= 0 && coauthor_share <= 1)) fail("coauthor_share", "must lie in [0, 1]");
    if (universities < 1) fail("universities", "must be >= 1");
    if (!(missing_affiliation >= 0 && missing_affiliation <= 1)) fail("missing_affiliation", "must lie in [0, 1]");
  }

  // Reads keys from the [synth] section (or bare keys / overrides).
  static SynthConfig from_config(const Config& cfg) {
    SynthConfig c;
    constexpr std::string_view sec = "synth";
    c.seed = static_cast<std::uint64_t>(cfg.get_int(sec, "seed", static_cast<std::int64_t>(c.seed)));
    c.n_uda = static_cast<int>(cfg.get_int(sec, "n_uda", c.n_uda));
    c.sds_per_uda = static_cast<int>(cfg.get_int(sec, "sds_per_uda", c.sds_per_uda));
    c.scientists_per_sds[0] = static_cast<int>(cfg.get_int(sec, "full_per_sds", c.scientists_per_sds[0]));
    c.scientists_per_sds[1] = static_cast<int>(cfg.get_int(sec, "associate_per_sds", c.scientists_per_sds[1]));
    c.scientists_per_sds[2] = static_cast<int>(cfg.get_int(sec, "assistant_per_sds", c.scientists_per_sds[2]));
    c.pubs_per_scientist = cfg.get_double(sec, "pubs_per_scientist", c.pubs_per_scientist);
    c.pubs_dispersion = cfg.get_double(sec, "pubs_dispersion", c.pubs_dispersion);
    c.citation_mean = cfg.get_double(sec, "citation_mean", c.citation_mean);
    c.citation_dispersion = cfg.get_double(sec, "citation_dispersion", c.citation_dispersion);
    c.rank_effect[0] = cfg.get_double(sec, "rank_effect_full", c.rank_effect[0]);
    c.rank_effect[1] = cfg.get_double(sec, "rank_effect_associate", c.rank_effect[1]);
    c.rank_effect[2] = cfg.get_double(sec, "rank_effect_assistant", c.rank_effect[2]);
    c.inactive_fraction[0] = cfg.get_double(sec, "inactive_full", c.inactive_fraction[0]);
    c.inactive_fraction[1] = cfg.get_double(sec, "inactive_associate", c.inactive_fraction[1]);
    c.inactive_fraction[2] = cfg.get_double(sec, "inactive_assistant", c.inactive_fraction[2]);
    c.year_first = static_cast<int>(cfg.get_int(sec, "year_first", c.year_first));
    c.year_last = static_cast<int>(cfg.get_int(sec, "year_last", c.year_last));
    c.categories_per_pub = static_cast<int>(cfg.get_int(sec, "categories_per_pub", c.categories_per_pub));
    c.categories_per_uda = static_cast<int>(cfg.get_int(sec, "categories_per_uda", c.categories_per_uda));
    c.authors_mean = cfg.get_double(sec, "authors_mean", c.authors_mean);
    c.max_authors = static_cast<int>(cfg.get_int(sec, "max_authors", c.max_authors));
    c.coauthor_share = cfg.get_double(sec, "coauthor_share", c.coauthor_share);
    c.universities = static_cast<int>(cfg.get_int(sec, "universities", c.universities));
    c.missing_affiliation = cfg.get_double(sec, "missing_affiliation", c.missing_affiliation);
    c.validate();
    return c;
  }
};

struct SynthCorpus {
  std::vector<Scientist> scientists;
  std::vector<Publication> publications;
  std::vector<Authorship> authorships;

  Corpus to_corpus() const { return Corpus::build(scientists, publications, authorships); }
};

namespace detail {

// Gamma-Poisson (negative binomial) draw with the given mean and shape.
inline std::int64_t draw_negative_binomial(std::mt19937_64& rng, double mean, double shape) {
  if (mean <= 0) return 0;
  std::gamma_distribution<double> gamma(shape, mean / shape);
  const double lambda = gamma(rng);
  if (lambda <= 0) return 0;
  std::poisson_distribution<std::int64_t> poisson(lambda);
  return poisson(rng);
}

inline std::string university_code(int u) { return fmt::format("U{:02d}", u + 1); }

}  // namespace detail

// Publication counts: a zero mass for the inactive quota of each SDS x rank
// group, otherwise 1 + a negative-binomial count with mean
// pubs_per_scientist * rank_effect - 1. Citations are negative binomial with
// mean citation_mean * (years since publication + 1) and a small shape, so
// each (year, category) cell is right-skewed.
inline SynthCorpus generate_corpus(const SynthConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SynthCorpus out;

  struct Member {
    std::size_t scientist;
    std::string university;
  };
  constexpr std::array<double, 3> kMeanAge{60.0, 53.0, 45.0};
  const int reference_year = config.year_last + 1;

  // Roster.
  std::vector<std::string> sds_codes;
  std::vector<std::vector<std::string>> sds_categories;
  std::vector<std::string> home;
  for (int u = 0; u < config.n_uda; ++u) {
    const auto uda = fmt::format("UDA{:02d}", u + 1);
    std::vector<std::string> cats;
    for (int c = 0; c < config.categories_per_uda; ++c) cats.push_back(fmt::format("C{:02d}{:02d}", u + 1, c + 1));
    for (int s = 0; s < config.sds_per_uda; ++s) {
      const auto sds = fmt::format("{}-S{:02d}", uda, s + 1);
      sds_codes.push_back(sds);
      sds_categories.push_back(cats);
      for (Rank rank : kRanks) {
        const auto r = rank_index(rank);
        std::normal_distribution<double> age(kMeanAge[r], 5.0);
        for (int i = 0; i < config.scientists_per_sds[r]; ++i) {
          Scientist sci;
          sci.id = fmt::format("R{:06d}", out.scientists.size() + 1);
          sci.sds = sds;
          sci.uda = uda;
          sci.rank = rank;
          sci.birth_year = reference_year - static_cast<int>(std::lround(age(rng)));
          out.scientists.push_back(std::move(sci));
          home.push_back(detail::university_code(
              static_cast<int>(std::uniform_int_distribution<int>(0, config.universities - 1)(rng))));
        }
      }
    }
  }

  // Activity: an exact (stochastically rounded) inactive quota per SDS x rank.
  std::vector<bool> active(out.scientists.size(), true);
  {
    std::size_t begin = 0;
    while (begin < out.scientists.size()) {
      std::size_t end = begin;
      while (end < out.scientists.size() && out.scientists[end].sds == out.scientists[begin].sds &&
             out.scientists[end].rank == out.scientists[begin].rank)
        ++end;
      const double want = config.inactive_fraction[rank_index(out.scientists[begin].rank)] *
                          static_cast<double>(end - begin);
      auto quota = static_cast<std::size_t>(std::floor(want));
      if (unit(rng) < want - std::floor(want)) ++quota;
      std::vector<std::size_t> members(end - begin);
      for (std::size_t i = 0; i < members.size(); ++i) members[i] = begin + i;
      std::shuffle(members.begin(), members.end(), rng);
      for (std::size_t i = 0; i < quota && i < members.size(); ++i) active[members[i]] = false;
      begin = end;
    }
  }

  std::vector<std::vector<Member>> colleagues(sds_codes.size());
  std::vector<std::size_t> sds_of_scientist(out.scientists.size());
  for (std::size_t i = 0; i < out.scientists.size(); ++i) {
    const auto idx = static_cast<std::size_t>(
        std::find(sds_codes.begin(), sds_codes.end(), out.scientists[i].sds) - sds_codes.begin());
    sds_of_scientist[i] = idx;
    if (active[i]) colleagues[idx].push_back({i, home[i]});
  }

  std::uniform_int_distribution<int> year_dist(config.year_first, config.year_last);
  std::geometric_distribution<int> extra_authors(1.0 / config.authors_mean);
  std::uniform_int_distribution<int> university_dist(0, config.universities - 1);

  for (std::size_t i = 0; i < out.scientists.size(); ++i) {
    if (!active[i]) continue;
    const auto r = rank_index(out.scientists[i].rank);
    const double mean = config.pubs_per_scientist * config.rank_effect[r];
    const auto count = 1 + detail::draw_negative_binomial(rng, mean - 1.0, config.pubs_dispersion);
    const auto& pool = colleagues[sds_of_scientist[i]];
    const auto& cats = sds_categories[sds_of_scientist[i]];

    for (std::int64_t k = 0; k < count; ++k) {
      Publication pub;
      pub.id = fmt::format("P{:07d}", out.publications.size() + 1);
      pub.year = year_dist(rng);
      pub.author_count = std::min(config.max_authors, 1 + extra_authors(rng));
      const double citation_mean = config.citation_mean * static_cast<double>(config.year_last + 1 - pub.year);
      pub.citations = detail::draw_negative_binomial(rng, citation_mean, config.citation_dispersion);

      std::vector<std::string> chosen = cats;
      std::shuffle(chosen.begin(), chosen.end(), rng);
      const int n_cats = std::uniform_int_distribution<int>(1, config.categories_per_pub)(rng);
      chosen.resize(static_cast<std::size_t>(n_cats));
      std::sort(chosen.begin(), chosen.end());
      pub.categories = std::move(chosen);

      const int own_position = std::uniform_int_distribution<int>(1, pub.author_count)(rng);
      std::vector<std::size_t> on_byline{i};
      for (int pos = 1; pos <= pub.author_count; ++pos) {
        Authorship a;
        a.pub_id = pub.id;
        a.position = pos;
        if (pos == own_position) {
          a.scientist_id = out.scientists[i].id;
          a.affiliation = home[i];
        } else if (!pool.empty() && unit(rng) < config.coauthor_share) {
          const auto& m = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
          if (std::find(on_byline.begin(), on_byline.end(), m.scientist) == on_byline.end()) {
            on_byline.push_back(m.scientist);
            a.scientist_id = out.scientists[m.scientist].id;
            a.affiliation = m.university;
          } else {
            a.affiliation = detail::university_code(university_dist(rng));
          }
        } else {
          a.affiliation = unit(rng) < 0.5 ? home[i] : detail::university_code(university_dist(rng));
        }
        if (unit(rng) < config.missing_affiliation) a.affiliation.reset();
        out.authorships.push_back(std::move(a));
      }
      out.publications.push_back(std::move(pub));
    }
  }
  return out;
}

struct CorpusPaths {
  std::string scientists;
  std::string publications;
  std::string authorships;
};

inline CorpusPaths corpus_paths_in(const std::filesystem::path& dir) {
  return {(dir / "scientists.csv").string(), (dir / "publications.csv").string(),
          (dir / "authorships.csv").string()};
}

inline CorpusPaths write_synth_corpus(const SynthCorpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto paths = corpus_paths_in(dir);
  write_file(paths.scientists, scientists_to_csv(corpus.scientists));
  write_file(paths.publications, publications_to_csv(corpus.publications));
  write_file(paths.authorships, authorships_to_csv(corpus.authorships));
  return paths;
}

}  // namespace rankmetrics
