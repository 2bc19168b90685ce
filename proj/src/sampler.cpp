#include "fame/sampler.hpp"

#include <algorithm>
#include <map>
#include <ostream>

#include "fame/errors.hpp"
#include "fame/hashing.hpp"

namespace fame {

std::vector<MonthVolume> month_volumes(std::span<const Document> docs) {
  std::map<YearMonth, std::int64_t> counts;
  for (const auto& d : docs) ++counts[month_of(d.timestamp)];
  std::vector<MonthVolume> out;
  out.reserve(counts.size());
  for (const auto& [month, n] : counts) out.push_back({month, n});
  return out;
}

double inclusion_probability(std::int64_t n_t, std::int64_t n_min) {
  if (n_t <= n_min) return 1.0;
  return static_cast<double>(n_min) / static_cast<double>(n_t);
}

bool coin_keeps(std::uint64_t seed, std::string_view id, double probability) {
  if (probability >= 1.0) return true;
  return unit_interval(combine_seed(seed, fnv1a64(id))) < probability;
}

SampleResult sample_uniform(std::span<const Document> docs, std::span<const MonthVolume> volumes,
                            const SamplerConfig& cfg, Execution exec) {
  if (cfg.n_min < 1) throw ConfigError("n_min must be >= 1");

  std::map<YearMonth, std::int64_t> volume_of;
  for (const auto& v : volumes) volume_of[v.month] = v.n;

  // Per-month probability; negative marks a dropped month.
  std::map<YearMonth, double> probability;
  for (const auto& [month, n] : volume_of) {
    if (n < cfg.n_min) {
      switch (cfg.underfull) {
        case UnderfullPolicy::Fail:
          throw DataError("month " + month.str() + " has " + std::to_string(n) +
                          " documents, fewer than n_min = " + std::to_string(cfg.n_min));
        case UnderfullPolicy::DropMonth: probability[month] = -1.0; break;
        case UnderfullPolicy::KeepAll: probability[month] = 1.0; break;
      }
    } else {
      probability[month] = inclusion_probability(n, cfg.n_min);
    }
  }

  const auto n_docs = static_cast<std::int64_t>(docs.size());
  std::vector<double> doc_prob(docs.size());
  for (std::int64_t i = 0; i < n_docs; ++i) {
    const auto month = month_of(docs[i].timestamp);
    const auto it = probability.find(month);
    if (it == probability.end()) {
      throw DataError("no volume entry for month " + month.str() + " (document " + docs[i].id + ")");
    }
    doc_prob[i] = it->second;
  }

  std::vector<unsigned char> keep(docs.size(), 0);
  const auto decide = [&](std::int64_t i) {
    keep[i] = doc_prob[i] >= 0.0 && coin_keeps(cfg.seed, docs[i].id, doc_prob[i]);
  };
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n_docs; ++i) decide(i);
  } else {
    for (std::int64_t i = 0; i < n_docs; ++i) decide(i);
  }

  SampleResult result;
  std::map<YearMonth, std::int64_t> kept_per_month;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (!keep[i]) continue;
    result.kept.push_back(docs[i]);
    ++kept_per_month[month_of(docs[i].timestamp)];
  }
  for (const auto& [month, n] : volume_of) {
    const auto k = kept_per_month.find(month);
    result.report.push_back({month, n, k == kept_per_month.end() ? 0 : k->second});
  }
  return result;
}

void write_sampling_report(std::ostream& out, std::span<const SamplingRow> rows) {
  out << "month,n_t,kept\n";
  for (const auto& r : rows) out << r.month.str() << ',' << r.n << ',' << r.kept << '\n';
}

UnderfullPolicy parse_underfull_policy(std::string_view s) {
  if (s == "drop-month") return UnderfullPolicy::DropMonth;
  if (s == "keep-all") return UnderfullPolicy::KeepAll;
  if (s == "fail") return UnderfullPolicy::Fail;
  throw ConfigError("unknown underfull policy '" + std::string(s) + "'");
}

}  // namespace fame
