#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "rankmetrics/delimited.hpp"
#include "rankmetrics/error.hpp"

namespace rankmetrics {

enum class Rank { Full, Associate, Assistant };

// Reporting order.
inline constexpr std::array<Rank, 3> kRanks{Rank::Full, Rank::Associate, Rank::Assistant};

inline constexpr std::size_t rank_index(Rank r) { return static_cast<std::size_t>(r); }

inline std::string_view to_string(Rank r) {
  switch (r) {
    case Rank::Full: return "FULL";
    case Rank::Associate: return "ASSOCIATE";
    case Rank::Assistant: return "ASSISTANT";
  }
  return "?";
}

inline std::optional<Rank> parse_rank(std::string_view text) {
  if (text == "FULL") return Rank::Full;
  if (text == "ASSOCIATE") return Rank::Associate;
  if (text == "ASSISTANT") return Rank::Assistant;
  return std::nullopt;
}

struct Scientist {
  std::string id;
  std::string sds;
  std::string uda;
  Rank rank = Rank::Full;
  std::optional<int> birth_year;
};

struct Publication {
  std::string id;
  int year = 0;
  std::int64_t citations = 0;
  std::vector<std::string> categories;
  int author_count = 1;
};

struct Authorship {
  std::string pub_id;
  int position = 1;
  std::optional<std::string> scientist_id;  // absent for external co-authors
  std::optional<std::string> affiliation;
};

// A roster scientist's slot on one byline.
struct Credit {
  std::size_t publication = 0;  // index into Corpus::publications()
  int position = 1;
};

// Validated, immutable collection of scientists, publications and bylines.
// Construct through Corpus::build (or load_corpus), which enforces every
// referential and byline invariant.
class Corpus {
 public:
  static Corpus build(std::vector<Scientist> scientists, std::vector<Publication> publications,
                      std::vector<Authorship> authorships) {
    Corpus c;
    c.scientists_ = std::move(scientists);
    c.publications_ = std::move(publications);
    c.authorships_ = std::move(authorships);
    c.index_and_validate();
    return c;
  }

  Corpus() = default;

  std::span<const Scientist> scientists() const { return scientists_; }
  std::span<const Publication> publications() const { return publications_; }
  // Sorted by (publication order, position).
  std::span<const Authorship> authorships() const { return authorships_; }

  const std::map<std::string, std::string>& sds_to_uda() const { return sds_to_uda_; }

  std::optional<std::size_t> find_scientist(std::string_view id) const {
    auto it = scientist_index_.find(std::string(id));
    if (it == scientist_index_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<std::size_t> find_publication(std::string_view id) const {
    auto it = publication_index_.find(std::string(id));
    if (it == publication_index_.end()) return std::nullopt;
    return it->second;
  }

  // Authorship rows of publication `p`, ordered by position 1..author_count.
  std::span<const Authorship> byline(std::size_t p) const {
    return std::span<const Authorship>(authorships_).subspan(byline_offsets_[p],
                                                             byline_offsets_[p + 1] - byline_offsets_[p]);
  }

  std::span<const Credit> credits(std::size_t scientist) const { return credits_[scientist]; }

  // Sorted UDA codes.
  std::vector<std::string> udas() const {
    std::set<std::string> out;
    for (const auto& [sds, uda] : sds_to_uda_) out.insert(uda);
    return {out.begin(), out.end()};
  }

  // Sorted SDS codes belonging to `uda`.
  std::vector<std::string> sds_of(std::string_view uda) const {
    std::vector<std::string> out;
    for (const auto& [sds, u] : sds_to_uda_)
      if (u == uda) out.push_back(sds);
    return out;
  }

  std::optional<int> last_publication_year() const {
    std::optional<int> last;
    for (const auto& p : publications_)
      if (!last || p.year > *last) last = p.year;
    return last;
  }

 private:
  void index_and_validate();

  std::vector<Scientist> scientists_;
  std::vector<Publication> publications_;
  std::vector<Authorship> authorships_;
  std::map<std::string, std::string> sds_to_uda_;
  std::unordered_map<std::string, std::size_t> scientist_index_;
  std::unordered_map<std::string, std::size_t> publication_index_;
  std::vector<std::size_t> byline_offsets_;
  std::vector<std::vector<Credit>> credits_;
};

inline void Corpus::index_and_validate() {
  scientist_index_.reserve(scientists_.size());
  for (std::size_t i = 0; i < scientists_.size(); ++i) {
    const auto& s = scientists_[i];
    if (s.id.empty()) throw CorpusError("scientist #" + std::to_string(i + 1) + " has an empty scientist_id");
    if (s.sds.empty() || s.uda.empty()) throw CorpusError("scientist '" + s.id + "' lacks sds_code or uda_code");
    if (!scientist_index_.emplace(s.id, i).second) throw CorpusError("duplicate scientist_id '" + s.id + "'");
    auto [it, inserted] = sds_to_uda_.emplace(s.sds, s.uda);
    if (!inserted && it->second != s.uda)
      throw CorpusError("SDS '" + s.sds + "' belongs to both UDA '" + it->second + "' and '" + s.uda + "'");
  }

  publication_index_.reserve(publications_.size());
  for (std::size_t i = 0; i < publications_.size(); ++i) {
    const auto& p = publications_[i];
    if (p.id.empty()) throw CorpusError("publication #" + std::to_string(i + 1) + " has an empty pub_id");
    if (!publication_index_.emplace(p.id, i).second) throw CorpusError("duplicate pub_id '" + p.id + "'");
    if (p.citations < 0) throw CorpusError("pub_id '" + p.id + "' has negative citation_count");
    if (p.author_count < 1) throw CorpusError("pub_id '" + p.id + "' has author_count < 1");
    if (p.categories.empty()) throw CorpusError("pub_id '" + p.id + "' has no subject categories");
    for (const auto& cat : p.categories)
      if (cat.empty()) throw CorpusError("pub_id '" + p.id + "' has an empty subject category");
  }

  std::vector<std::size_t> pub_of(authorships_.size());
  for (std::size_t i = 0; i < authorships_.size(); ++i) {
    const auto& a = authorships_[i];
    auto p = find_publication(a.pub_id);
    if (!p) throw CorpusError("authorship references unknown pub_id '" + a.pub_id + "'");
    pub_of[i] = *p;
    if (a.scientist_id && !find_scientist(*a.scientist_id))
      throw CorpusError("authorship on '" + a.pub_id + "' references unknown scientist_id '" + *a.scientist_id + "'");
    const int n = publications_[*p].author_count;
    if (a.position < 1 || a.position > n)
      throw CorpusError("pub_id '" + a.pub_id + "': position " + std::to_string(a.position) + " outside 1.." +
                        std::to_string(n));
  }

  std::vector<std::size_t> order(authorships_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (pub_of[x] != pub_of[y]) return pub_of[x] < pub_of[y];
    return authorships_[x].position < authorships_[y].position;
  });
  std::vector<Authorship> sorted;
  sorted.reserve(authorships_.size());
  byline_offsets_.assign(publications_.size() + 1, 0);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto i = order[k];
    if (k > 0 && pub_of[order[k - 1]] == pub_of[i] && authorships_[order[k - 1]].position == authorships_[i].position)
      throw CorpusError("duplicate position " + std::to_string(authorships_[i].position) + " for pub_id '" +
                        authorships_[i].pub_id + "'");
    ++byline_offsets_[pub_of[i] + 1];
    sorted.push_back(std::move(authorships_[i]));
  }
  authorships_ = std::move(sorted);
  for (std::size_t p = 0; p < publications_.size(); ++p) {
    const auto rows = byline_offsets_[p + 1];
    if (rows != static_cast<std::size_t>(publications_[p].author_count))
      throw CorpusError("pub_id '" + publications_[p].id + "' declares author_count " +
                        std::to_string(publications_[p].author_count) + " but has " + std::to_string(rows) +
                        " authorship rows");
    byline_offsets_[p + 1] += byline_offsets_[p];
  }

  credits_.assign(scientists_.size(), {});
  for (std::size_t p = 0; p < publications_.size(); ++p) {
    std::unordered_set<std::string_view> seen;
    for (const auto& a : byline(p)) {
      if (!a.scientist_id) continue;
      if (!seen.insert(*a.scientist_id).second)
        throw CorpusError("scientist_id '" + *a.scientist_id + "' appears twice on pub_id '" + a.pub_id + "'");
      credits_[*find_scientist(*a.scientist_id)].push_back({p, a.position});
    }
  }
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

template <typename Int>
Int parse_int(const Record& rec, const std::string& field, std::string_view kind) {
  const auto text = trim(rec.at(field));
  Int value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end)
    throw CorpusError(std::string(kind) + " line " + std::to_string(rec.line) + ": field '" + field +
                      "' is not an integer: '" + std::string(text) + "'");
  return value;
}

inline std::optional<std::string> optional_text(const Record& rec, const std::string& field) {
  auto it = rec.fields.find(field);
  if (it == rec.fields.end()) return std::nullopt;
  auto t = trim(it->second);
  if (t.empty()) return std::nullopt;
  return std::string(t);
}

inline std::string required_text(const Record& rec, const std::string& field, std::string_view kind) {
  auto it = rec.fields.find(field);
  if (it == rec.fields.end())
    throw CorpusError(std::string(kind) + " line " + std::to_string(rec.line) + ": missing field '" + field + "'");
  auto t = trim(it->second);
  if (t.empty())
    throw CorpusError(std::string(kind) + " line " + std::to_string(rec.line) + ": empty field '" + field + "'");
  return std::string(t);
}

inline std::vector<std::string> split_categories(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto sep = text.find(';', pos);
    auto part = trim(text.substr(pos, sep == std::string_view::npos ? std::string_view::npos : sep - pos));
    if (!part.empty()) out.emplace_back(part);
    if (sep == std::string_view::npos) break;
    pos = sep + 1;
  }
  return out;
}

}  // namespace detail

inline Scientist parse_scientist(const Record& rec) {
  constexpr std::string_view kind = "scientists";
  Scientist s;
  s.id = detail::required_text(rec, "scientist_id", kind);
  s.sds = detail::required_text(rec, "sds_code", kind);
  s.uda = detail::required_text(rec, "uda_code", kind);
  const auto rank_text = detail::required_text(rec, "rank", kind);
  auto rank = parse_rank(rank_text);
  if (!rank) throw CorpusError("scientists line " + std::to_string(rec.line) + ": invalid rank '" + rank_text + "'");
  s.rank = *rank;
  if (detail::optional_text(rec, "birth_year")) s.birth_year = detail::parse_int<int>(rec, "birth_year", kind);
  return s;
}

inline Publication parse_publication(const Record& rec) {
  constexpr std::string_view kind = "publications";
  Publication p;
  p.id = detail::required_text(rec, "pub_id", kind);
  p.year = detail::parse_int<int>(rec, "year", kind);
  p.citations = detail::parse_int<std::int64_t>(rec, "citation_count", kind);
  if (p.citations < 0)
    throw CorpusError("publications line " + std::to_string(rec.line) + ": negative citation_count");
  p.categories = detail::split_categories(rec.at("subject_categories"));
  if (p.categories.empty())
    throw CorpusError("publications line " + std::to_string(rec.line) + ": subject_categories is empty");
  p.author_count = detail::parse_int<int>(rec, "author_count", kind);
  if (p.author_count < 1)
    throw CorpusError("publications line " + std::to_string(rec.line) + ": author_count must be >= 1");
  return p;
}

inline Authorship parse_authorship(const Record& rec) {
  constexpr std::string_view kind = "authorships";
  Authorship a;
  a.pub_id = detail::required_text(rec, "pub_id", kind);
  a.position = detail::parse_int<int>(rec, "position", kind);
  if (a.position < 1) throw CorpusError("authorships line " + std::to_string(rec.line) + ": position must be >= 1");
  a.scientist_id = detail::optional_text(rec, "scientist_id");
  a.affiliation = detail::optional_text(rec, "affiliation_id");
  return a;
}

inline Corpus load_corpus(std::span<const Record> scientist_rows, std::span<const Record> publication_rows,
                          std::span<const Record> authorship_rows) {
  std::vector<Scientist> scientists;
  scientists.reserve(scientist_rows.size());
  for (const auto& r : scientist_rows) scientists.push_back(parse_scientist(r));
  std::vector<Publication> publications;
  publications.reserve(publication_rows.size());
  for (const auto& r : publication_rows) publications.push_back(parse_publication(r));
  std::vector<Authorship> authorships;
  authorships.reserve(authorship_rows.size());
  for (const auto& r : authorship_rows) authorships.push_back(parse_authorship(r));
  return Corpus::build(std::move(scientists), std::move(publications), std::move(authorships));
}

inline Corpus load_corpus_files(const std::string& scientists_path, const std::string& publications_path,
                                const std::string& authorships_path) {
  const auto s = read_records(scientists_path);
  const auto p = read_records(publications_path);
  const auto a = read_records(authorships_path);
  return load_corpus(s, p, a);
}

// Writers emit the delimited schemas the loader reads.
inline std::string scientists_to_csv(std::span<const Scientist> scientists) {
  std::string out = "scientist_id,sds_code,uda_code,rank,birth_year\n";
  for (const auto& s : scientists)
    out += join_row({s.id, s.sds, s.uda, std::string(to_string(s.rank)),
                     s.birth_year ? std::to_string(*s.birth_year) : std::string()});
  return out;
}

inline std::string publications_to_csv(std::span<const Publication> publications) {
  std::string out = "pub_id,year,citation_count,subject_categories,author_count\n";
  for (const auto& p : publications) {
    std::string cats;
    for (const auto& c : p.categories) {
      if (!cats.empty()) cats.push_back(';');
      cats += c;
    }
    out += join_row({p.id, std::to_string(p.year), std::to_string(p.citations), cats, std::to_string(p.author_count)});
  }
  return out;
}

inline std::string authorships_to_csv(std::span<const Authorship> authorships) {
  std::string out = "pub_id,position,scientist_id,affiliation_id\n";
  for (const auto& a : authorships)
    out += join_row({a.pub_id, std::to_string(a.position), a.scientist_id.value_or(""), a.affiliation.value_or("")});
  return out;
}

// ---------------------------------------------------------------------------
// Roster summary (headcounts, shares and ages by UDA x rank)

struct RosterCell {
  std::int64_t headcount = 0;
  double share = 0.0;  // percent of the row's total, unrounded
  std::optional<double> mean_age;
};

struct RosterRow {
  std::string uda;  // "Total" for the totals row
  std::size_t sds_count = 0;
  std::array<RosterCell, 3> by_rank{};
  std::int64_t total = 0;
  std::optional<double> mean_age;  // all ranks pooled
};

struct RosterSummary {
  int reference_year = 0;
  std::vector<RosterRow> rows;
  RosterRow total;
};

// Default age reference: the year after the last observed publication year.
inline int default_reference_year(const Corpus& corpus) {
  auto last = corpus.last_publication_year();
  if (!last) throw ConfigError("reference year cannot be derived from a corpus without publications");
  return *last + 1;
}

inline RosterSummary roster_summary(const Corpus& corpus, std::optional<int> reference_year = std::nullopt) {
  RosterSummary out;
  out.reference_year = reference_year ? *reference_year : default_reference_year(corpus);

  struct Acc {
    std::array<std::int64_t, 3> count{};
    std::array<double, 3> age_sum{};
    std::array<std::int64_t, 3> age_n{};
  };
  std::map<std::string, Acc> per_uda;
  for (const auto& uda : corpus.udas()) per_uda[uda];
  for (const auto& s : corpus.scientists()) {
    auto& acc = per_uda[s.uda];
    const auto r = rank_index(s.rank);
    ++acc.count[r];
    if (s.birth_year) {
      acc.age_sum[r] += out.reference_year - *s.birth_year;
      ++acc.age_n[r];
    }
  }

  auto make_row = [](std::string label, std::size_t sds_count, const Acc& acc) {
    RosterRow row;
    row.uda = std::move(label);
    row.sds_count = sds_count;
    double age_sum = 0;
    std::int64_t age_n = 0;
    for (std::size_t r = 0; r < 3; ++r) row.total += acc.count[r];
    for (std::size_t r = 0; r < 3; ++r) {
      auto& cell = row.by_rank[r];
      cell.headcount = acc.count[r];
      cell.share = row.total == 0 ? 0.0 : 100.0 * static_cast<double>(acc.count[r]) / static_cast<double>(row.total);
      if (acc.age_n[r] > 0) cell.mean_age = acc.age_sum[r] / static_cast<double>(acc.age_n[r]);
      age_sum += acc.age_sum[r];
      age_n += acc.age_n[r];
    }
    if (age_n > 0) row.mean_age = age_sum / static_cast<double>(age_n);
    return row;
  };

  Acc grand;
  for (const auto& [uda, acc] : per_uda) {
    out.rows.push_back(make_row(uda, corpus.sds_of(uda).size(), acc));
    for (std::size_t r = 0; r < 3; ++r) {
      grand.count[r] += acc.count[r];
      grand.age_sum[r] += acc.age_sum[r];
      grand.age_n[r] += acc.age_n[r];
    }
  }
  out.total = make_row("Total", corpus.sds_to_uda().size(), grand);
  return out;
}

// ---------------------------------------------------------------------------
// SDS activity filter

// Keeps SDSs where the fraction of scientists with at least one authorship is
// >= threshold (inclusive). Bylines of dropped scientists survive only on
// publications that still carry a surviving roster author; on those, the
// dropped scientist's slot becomes an external co-author so author_count and
// positions stay intact.
inline Corpus filter_active_sds(const Corpus& corpus, double threshold = 0.5) {
  std::map<std::string, std::pair<std::int64_t, std::int64_t>> activity;  // sds -> (publishing, total)
  for (std::size_t i = 0; i < corpus.scientists().size(); ++i) {
    auto& [active, total] = activity[corpus.scientists()[i].sds];
    ++total;
    if (!corpus.credits(i).empty()) ++active;
  }
  std::set<std::string> kept_sds;
  for (const auto& [sds, counts] : activity) {
    const auto [active, total] = counts;
    // integer-exact comparison of active/total >= threshold where possible
    if (static_cast<double>(active) >= threshold * static_cast<double>(total) - 1e-9) kept_sds.insert(sds);
  }

  std::vector<Scientist> scientists;
  std::unordered_set<std::string_view> kept_ids;
  for (const auto& s : corpus.scientists())
    if (kept_sds.contains(s.sds)) scientists.push_back(s);
  for (const auto& s : scientists) kept_ids.insert(s.id);

  std::vector<Publication> publications;
  std::vector<Authorship> authorships;
  for (std::size_t p = 0; p < corpus.publications().size(); ++p) {
    const auto line = corpus.byline(p);
    const bool keep = std::any_of(line.begin(), line.end(), [&](const Authorship& a) {
      return a.scientist_id && kept_ids.contains(*a.scientist_id);
    });
    if (!keep) continue;
    publications.push_back(corpus.publications()[p]);
    for (auto a : line) {
      if (a.scientist_id && !kept_ids.contains(*a.scientist_id)) a.scientist_id.reset();
      authorships.push_back(std::move(a));
    }
  }
  return Corpus::build(std::move(scientists), std::move(publications), std::move(authorships));
}

}  // namespace rankmetrics
