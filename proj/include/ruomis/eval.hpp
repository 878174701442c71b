#pragma once

// Evaluation against manual labels. The positive class is "opinionated"
// (positive or negative) and the negative class is neutral.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ruomis/corpus.hpp"
#include "ruomis/error.hpp"
#include "ruomis/ratio.hpp"
#include "ruomis/rating.hpp"

namespace ruomis::eval {

struct Contingency {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const { return tp + fp + fn + tn; }
  friend bool operator==(const Contingency&, const Contingency&) = default;
};

using LabelPair = std::pair<Polarity, Polarity>;  // (predicted, actual)

inline bool is_opinionated(Polarity p) { return p != Polarity::kNeutral; }

/// Opinionated-detection tally. In strict mode a prediction with the wrong
/// sign on an opinionated comment counts as a false positive instead of a
/// true positive.
inline Contingency build_contingency(const std::vector<LabelPair>& pairs,
                                     bool strict = false) {
  if (pairs.empty()) throw Error(ErrorKind::kEmptyInput, "", "no labeled pairs");
  Contingency c;
  for (const auto& [predicted, actual] : pairs) {
    bool pred = is_opinionated(predicted), act = is_opinionated(actual);
    if (pred && act) {
      if (strict && predicted != actual) ++c.fp;
      else ++c.tp;
    } else if (pred) {
      ++c.fp;
    } else if (act) {
      ++c.fn;
    } else {
      ++c.tn;
    }
  }
  return c;
}

/// Unset when its denominator is zero.
using Metric = std::optional<Ratio>;

struct Metrics {
  Metric precision;
  Metric recall;
  Metric f_measure;
};

inline constexpr int kMetricDecimals = 3;

inline std::string format_metric(const Metric& m) {
  return m ? m->format(kMetricDecimals) : "n/a";
}

inline Metrics compute_metrics(const Contingency& c) {
  Metrics m;
  if (c.tp + c.fp > 0) m.precision = Ratio{c.tp, c.tp + c.fp};
  if (c.tp + c.fn > 0) m.recall = Ratio{c.tp, c.tp + c.fn};
  // 2PR/(P+R) with P = tp/(tp+fp), R = tp/(tp+fn) reduces to 2tp/(2tp+fp+fn);
  // undefined whenever an input is, or when P + R = 0.
  if (m.precision && m.recall && c.tp > 0)
    m.f_measure = Ratio{2 * c.tp, 2 * c.tp + c.fp + c.fn};
  return m;
}

struct ClassCounts {
  std::uint64_t positive = 0;
  std::uint64_t negative = 0;
  std::uint64_t neutral = 0;

  std::uint64_t total() const { return positive + negative + neutral; }
  static ClassCounts of(const rating::RatingSummary& s) {
    return {s.n_positive, s.n_negative, s.n_neutral};
  }
  friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

struct DeviationReport {
  Ratio dev_positive;
  Ratio dev_negative;
  Ratio dev_neutral;
  Ratio average;
};

inline constexpr int kDeviationDecimals = 3;

/// Per-class |predicted share - manual share| on exact ratios; the average is
/// taken over the unrounded deviations.
inline DeviationReport proportion_deviation(const ClassCounts& predicted,
                                            const ClassCounts& manual) {
  const std::uint64_t total = predicted.total();
  if (total != manual.total())
    throw Error(ErrorKind::kTotalMismatch,
                std::to_string(total) + " vs " + std::to_string(manual.total()),
                "summaries cover different totals");
  if (total == 0) throw Error(ErrorKind::kEmptyInput, "", "empty summaries");
  auto diff = [](std::uint64_t a, std::uint64_t b) { return a > b ? a - b : b - a; };
  std::uint64_t dp = diff(predicted.positive, manual.positive);
  std::uint64_t dn = diff(predicted.negative, manual.negative);
  std::uint64_t du = diff(predicted.neutral, manual.neutral);
  return {Ratio{dp, total}, Ratio{dn, total}, Ratio{du, total},
          Ratio{dp + dn + du, 3 * total}};
}

struct ProductBreakdown {
  std::string product_id;
  ClassCounts predicted;
  ClassCounts manual;
};

struct EvaluationReport {
  Contingency contingency;
  Metrics metrics;
  ClassCounts predicted;
  ClassCounts manual;
  DeviationReport deviation;
  std::vector<ProductBreakdown> products;
  std::size_t evaluated_units = 0;
  std::size_t skipped_unlabeled = 0;
};

namespace detail {

inline void bump(ClassCounts& c, Polarity p) {
  switch (p) {
    case Polarity::kPositive: ++c.positive; break;
    case Polarity::kNegative: ++c.negative; break;
    case Polarity::kNeutral: ++c.neutral; break;
  }
}

}  // namespace detail

/// Pairs every classification unit of a classified corpus with its comment's
/// gold polarity. Comments without gold labels or predictions are skipped.
inline EvaluationReport evaluate(const CorpusBatch& classified, bool strict = false) {
  EvaluationReport report;
  std::vector<LabelPair> pairs;
  for (const std::string& pid : rating::product_ids(classified)) {
    ProductBreakdown row{pid, {}, {}};
    bool any = false;
    for (const Comment& c : classified.comments) {
      if (c.product_id != pid) continue;
      if (!c.gold || !c.predicted) {
        ++report.skipped_unlabeled;
        continue;
      }
      for (Polarity u : c.predicted->units) {
        pairs.emplace_back(u, c.gold->polarity);
        detail::bump(row.predicted, u);
        detail::bump(row.manual, c.gold->polarity);
        detail::bump(report.predicted, u);
        detail::bump(report.manual, c.gold->polarity);
        any = true;
      }
    }
    if (any) report.products.push_back(std::move(row));
  }
  report.evaluated_units = pairs.size();
  report.contingency = build_contingency(pairs, strict);
  report.metrics = compute_metrics(report.contingency);
  report.deviation = proportion_deviation(report.predicted, report.manual);
  return report;
}

inline nlohmann::ordered_json to_json(const ClassCounts& c) {
  return {{"positive", c.positive}, {"negative", c.negative}, {"neutral", c.neutral}};
}

inline nlohmann::ordered_json to_json(const EvaluationReport& r) {
  using nlohmann::ordered_json;
  auto metric = [](const Metric& m) -> ordered_json {
    if (!m) return "n/a";
    return m->rounded(kMetricDecimals);
  };
  auto dev = [](const Ratio& x) { return x.rounded(kDeviationDecimals); };
  ordered_json products = ordered_json::array();
  for (const auto& p : r.products)
    products.push_back({{"product_id", p.product_id},
                        {"predicted", to_json(p.predicted)},
                        {"manual", to_json(p.manual)}});
  return {
      {"evaluated_units", r.evaluated_units},
      {"skipped_unlabeled", r.skipped_unlabeled},
      {"contingency",
       {{"tp", r.contingency.tp}, {"fp", r.contingency.fp},
        {"fn", r.contingency.fn}, {"tn", r.contingency.tn}}},
      {"metrics",
       {{"precision", metric(r.metrics.precision)},
        {"recall", metric(r.metrics.recall)},
        {"f_measure", metric(r.metrics.f_measure)}}},
      {"totals", {{"predicted", to_json(r.predicted)}, {"manual", to_json(r.manual)}}},
      {"deviation",
       {{"positive", dev(r.deviation.dev_positive)},
        {"negative", dev(r.deviation.dev_negative)},
        {"neutral", dev(r.deviation.dev_neutral)},
        {"average", dev(r.deviation.average)}}},
      {"products", products}};
}

}  // namespace ruomis::eval
