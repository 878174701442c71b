#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ruomis/corpus.hpp"
#include "ruomis/error.hpp"
#include "ruomis/opinion.hpp"
#include "ruomis/ratio.hpp"

namespace ruomis::rating {

struct RatingSummary {
  std::string product_id;
  std::uint64_t n_positive = 0;
  std::uint64_t n_negative = 0;
  std::uint64_t n_neutral = 0;
  std::uint64_t total = 0;

  static RatingSummary from_counts(std::string product_id, std::uint64_t pos,
                                   std::uint64_t neg, std::uint64_t neu) {
    if (pos + neg + neu == 0)
      throw Error(ErrorKind::kEmptyProduct, product_id, "no classified comments");
    return {std::move(product_id), pos, neg, neu, pos + neg + neu};
  }

  std::uint64_t count(Polarity p) const {
    switch (p) {
      case Polarity::kPositive: return n_positive;
      case Polarity::kNegative: return n_negative;
      case Polarity::kNeutral: return n_neutral;
    }
    return 0;
  }

  Ratio share(Polarity p) const { return {count(p), total}; }

  /// Percentage rounded half-up to one decimal, in tenths (325 = 32.5%).
  std::uint64_t pct_tenths(Polarity p) const { return Ratio{count(p) * 100, total}.scaled(1); }
  double pct(Polarity p) const { return static_cast<double>(pct_tenths(p)) / 10.0; }
  std::string pct_text(Polarity p) const { return Ratio{count(p) * 100, total}.format(1); }

  /// Extension: (positive - negative) / total, three decimals.
  std::string net_score_text() const {
    return format_signed_ratio(static_cast<std::int64_t>(n_positive) -
                                   static_cast<std::int64_t>(n_negative),
                               total, 3);
  }

  friend bool operator==(const RatingSummary&, const RatingSummary&) = default;
};

inline constexpr Polarity kClasses[] = {Polarity::kPositive, Polarity::kNegative,
                                        Polarity::kNeutral};

/// Counts every classification unit of the product's comments.
inline RatingSummary summarize_product(
    const std::vector<opinion::CommentClassification>& classifications,
    const std::string& product_id) {
  std::uint64_t counts[3] = {0, 0, 0};
  for (const auto& c : classifications) {
    if (c.product_id != product_id) continue;
    for (Polarity u : c.units) ++counts[static_cast<int>(u)];
  }
  if (counts[0] + counts[1] + counts[2] == 0)
    throw Error(ErrorKind::kEmptyProduct, product_id, "no classified comments");
  return RatingSummary::from_counts(product_id, counts[0], counts[1], counts[2]);
}

/// Same tally from predictions stored on corpus records.
inline RatingSummary summarize_product(const CorpusBatch& classified,
                                       const std::string& product_id) {
  std::uint64_t counts[3] = {0, 0, 0};
  for (const Comment& c : classified.comments) {
    if (c.product_id != product_id || !c.predicted) continue;
    for (Polarity u : c.predicted->units) ++counts[static_cast<int>(u)];
  }
  if (counts[0] + counts[1] + counts[2] == 0)
    throw Error(ErrorKind::kEmptyProduct, product_id, "no classified comments");
  return RatingSummary::from_counts(product_id, counts[0], counts[1], counts[2]);
}

/// Product ids in order of first appearance.
inline std::vector<std::string> product_ids(const CorpusBatch& batch) {
  std::vector<std::string> ids;
  for (const Comment& c : batch.comments)
    if (std::find(ids.begin(), ids.end(), c.product_id) == ids.end())
      ids.push_back(c.product_id);
  return ids;
}

inline nlohmann::ordered_json to_json(const RatingSummary& s) {
  return {{"product_id", s.product_id},
          {"n_positive", s.n_positive},
          {"n_negative", s.n_negative},
          {"n_neutral", s.n_neutral},
          {"total", s.total},
          {"pct_positive", s.pct(Polarity::kPositive)},
          {"pct_negative", s.pct(Polarity::kNegative)},
          {"pct_neutral", s.pct(Polarity::kNeutral)},
          {"net_score_extension", std::stod(s.net_score_text())}};
}

enum class ChartFormat { kSvgBar, kSvgPie, kAscii };

inline std::string_view to_string(ChartFormat f) {
  switch (f) {
    case ChartFormat::kSvgBar: return "svg_bar";
    case ChartFormat::kSvgPie: return "svg_pie";
    case ChartFormat::kAscii: return "ascii";
  }
  return "ascii";
}

inline ChartFormat parse_chart_format(std::string_view s) {
  for (ChartFormat f : {ChartFormat::kSvgBar, ChartFormat::kSvgPie, ChartFormat::kAscii})
    if (to_string(f) == s) return f;
  throw Error(ErrorKind::kUnsupportedFormat, std::string(s),
              "expected svg_bar, svg_pie or ascii");
}

namespace detail {

inline std::string fixed(double v, int decimals = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s = buf;
  return s == "-0.00" ? "0.00" : s;
}

inline std::string_view color(Polarity p) {
  switch (p) {
    case Polarity::kPositive: return "#2e7d32";
    case Polarity::kNegative: return "#c62828";
    case Polarity::kNeutral: return "#9e9e9e";
  }
  return "#000000";
}

inline std::string escape_xml(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string label(const RatingSummary& s, Polarity p) {
  return std::string(to_string(p)) + " " + std::to_string(s.count(p)) + " (" +
         s.pct_text(p) + "%)";
}

inline constexpr double kBarMaxHeight = 200.0;
inline constexpr double kPieRadius = 100.0;
inline constexpr double kPi = 3.14159265358979323846;

inline std::string svg_bar(const RatingSummary& s) {
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"420\" "
      "height=\"300\" viewBox=\"0 0 420 300\">\n";
  out += "  <title>Rating for " + escape_xml(s.product_id) + "</title>\n";
  out += "  <line x1=\"30\" y1=\"240\" x2=\"400\" y2=\"240\" stroke=\"#000000\"/>\n";
  int i = 0;
  for (Polarity p : kClasses) {
    double height = kBarMaxHeight * s.share(p).value();
    double x = 50 + 120 * i++;
    out += "  <rect class=\"bar " + std::string(to_string(p)) + "\" x=\"" +
           fixed(x) + "\" y=\"" + fixed(240 - height) +
           "\" width=\"80.00\" height=\"" + fixed(height) + "\" fill=\"" +
           std::string(color(p)) + "\" data-count=\"" +
           std::to_string(s.count(p)) + "\"/>\n";
    out += "  <text x=\"" + fixed(x + 40) + "\" y=\"262.00\" " +
           "text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
           escape_xml(label(s, p)) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

inline std::string svg_pie(const RatingSummary& s) {
  const double cx = 130, cy = 130, r = kPieRadius;
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"440\" "
      "height=\"260\" viewBox=\"0 0 440 260\">\n";
  out += "  <title>Rating for " + escape_xml(s.product_id) + "</title>\n";
  // Sectors run clockwise from twelve o'clock. Angles accumulate from exact
  // count prefixes so rounding never drifts the final edge off 360.
  std::uint64_t before = 0;
  for (Polarity p : kClasses) {
    std::uint64_t n = s.count(p);
    if (n == 0) continue;
    double start = 360.0 * Ratio{before, s.total}.value();
    double sweep = 360.0 * Ratio{n, s.total}.value();
    before += n;
    std::string attrs = "class=\"sector " + std::string(to_string(p)) +
                        "\" fill=\"" + std::string(color(p)) +
                        "\" data-start=\"" + fixed(start, 3) +
                        "\" data-sweep=\"" + fixed(sweep, 3) + "\"";
    if (n == s.total) {
      out += "  <circle " + attrs + " cx=\"" + fixed(cx) + "\" cy=\"" +
             fixed(cy) + "\" r=\"" + fixed(r) + "\"/>\n";
      continue;
    }
    auto point = [&](double deg) {
      double rad = (deg - 90.0) * kPi / 180.0;
      return fixed(cx + r * std::cos(rad)) + " " + fixed(cy + r * std::sin(rad));
    };
    out += "  <path " + attrs + " d=\"M " + fixed(cx) + " " + fixed(cy) +
           " L " + point(start) + " A " + fixed(r) + " " + fixed(r) + " 0 " +
           (sweep > 180.0 ? "1" : "0") + " 1 " + point(start + sweep) +
           " Z\"/>\n";
  }
  int row = 0;
  for (Polarity p : kClasses) {
    double y = 80 + 30 * row++;
    out += "  <rect class=\"legend " + std::string(to_string(p)) +
           "\" x=\"260.00\" y=\"" + fixed(y) + "\" width=\"14.00\" height=\"14.00\" fill=\"" +
           std::string(color(p)) + "\"/>\n";
    out += "  <text x=\"282.00\" y=\"" + fixed(y + 12) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" +
           escape_xml(label(s, p)) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

inline std::string ascii_table(const RatingSummary& s) {
  char buf[128];
  std::string out = "product: " + s.product_id + "\n";
  std::snprintf(buf, sizeof buf, "%-10s %8s %9s\n", "class", "comments", "percent");
  out += buf;
  for (Polarity p : kClasses) {
    std::snprintf(buf, sizeof buf, "%-10s %8llu %8s%%\n",
                  std::string(to_string(p)).c_str(),
                  static_cast<unsigned long long>(s.count(p)), s.pct_text(p).c_str());
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "%-10s %8llu\n", "total",
                static_cast<unsigned long long>(s.total));
  out += buf;
  out += "net score (extension): " + s.net_score_text() + "\n";
  return out;
}

}  // namespace detail

/// Deterministic text rendering of a summary.
inline std::string render_chart(const RatingSummary& summary, ChartFormat format) {
  switch (format) {
    case ChartFormat::kSvgBar: return detail::svg_bar(summary);
    case ChartFormat::kSvgPie: return detail::svg_pie(summary);
    case ChartFormat::kAscii: return detail::ascii_table(summary);
  }
  throw Error(ErrorKind::kUnsupportedFormat, "", "unknown chart format");
}

inline std::string render_chart(const RatingSummary& summary, std::string_view format) {
  return render_chart(summary, parse_chart_format(format));
}

}  // namespace ruomis::rating
