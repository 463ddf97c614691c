#include "commscape/quality.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "commscape/error.hpp"
#include "rng.hpp"

namespace commscape::quality {
namespace {

constexpr std::array<std::string_view, kFeatureCount> kNames{
    "total_direct_transactions",    "click_direct_transactions", "register_direct_transactions",
    "direct_purchases",             "guidance_direct_transactions", "indirect_transactions",
    "activity_days",                "social_network_role",       "social_network_size",
    "frequent_visits",              "various_visits",            "conversion_rate",
};

bool may_be_negative(Feature f) { return f == Feature::kSocialNetworkRole; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                          : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::string_view feature_name(Feature f) { return kNames[static_cast<std::size_t>(f)]; }

std::optional<Feature> feature_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (kNames[i] == name) return static_cast<Feature>(i);
  }
  return std::nullopt;
}

std::array<Feature, kFeatureCount> all_features() {
  std::array<Feature, kFeatureCount> out{};
  for (std::size_t i = 0; i < kFeatureCount; ++i) out[i] = static_cast<Feature>(i);
  return out;
}

std::vector<Feature> CustomerTable::absent_features() const {
  std::vector<Feature> out;
  for (Feature f : all_features()) {
    if (std::find(features.begin(), features.end(), f) == features.end()) out.push_back(f);
  }
  return out;
}

CustomerTable load_customers(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (!have_header && std::getline(in, line)) {
    ++line_no;
    have_header = !trim(line).empty();
  }
  if (!have_header) throw ParseError("missing CSV header", line_no);

  CustomerTable table;
  std::optional<std::size_t> id_col;
  std::vector<std::optional<std::size_t>> feature_slot;  // per column
  const auto header = split_csv(line);
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string_view name = header[c];
    if (name == "customer_id") {
      if (id_col) throw ParseError("repeated column customer_id", line_no, c + 1);
      id_col = c;
      feature_slot.emplace_back();
      continue;
    }
    const auto f = feature_from_name(name);
    if (!f) throw ParseError("unknown column '" + std::string(name) + "'", line_no, c + 1);
    if (std::find(table.features.begin(), table.features.end(), *f) != table.features.end()) {
      throw ParseError("repeated column '" + std::string(name) + "'", line_no, c + 1);
    }
    feature_slot.emplace_back(table.features.size());
    table.features.push_back(*f);
  }
  if (!id_col) throw ParseError("header lacks a customer_id column", line_no);

  const std::size_t width = table.features.size();
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " cells, found " +
                           std::to_string(cells.size()),
                       line_no);
    }
    std::vector<double> row(width, 0.0);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!feature_slot[c]) continue;
      const std::string_view cell = cells[c];
      if (cell.empty()) throw ParseError("missing value", line_no, c + 1);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw ParseError("non-numeric value '" + std::string(cell) + "'", line_no, c + 1);
      }
      const Feature f = table.features[*feature_slot[c]];
      if (!std::isfinite(v)) throw ParseError("non-finite value", line_no, c + 1);
      if (v < 0.0 && !may_be_negative(f)) {
        throw ParseError(std::string(feature_name(f)) + " must be non-negative", line_no, c + 1);
      }
      row[*feature_slot[c]] = v;
    }
    table.ids.emplace_back(cells[*id_col]);
    table.values.insert(table.values.end(), row.begin(), row.end());
  }
  return table;
}

CustomerTable load_customers_text(const std::string& text) {
  std::istringstream in(text);
  return load_customers(in);
}

void write_customers(std::ostream& out, const CustomerTable& table) {
  out << "customer_id";
  for (Feature f : table.features) out << ',' << feature_name(f);
  out << '\n';
  char buf[64];
  for (std::size_t r = 0; r < table.size(); ++r) {
    out << table.ids[r];
    for (std::size_t c = 0; c < table.features.size(); ++c) {
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, table.at(r, c));
      out << ',' << std::string_view(buf, static_cast<std::size_t>(ptr - buf));
    }
    out << '\n';
  }
}

SynthSpec SynthSpec::uniform(std::size_t clusters) {
  SynthSpec s;
  s.clusters = clusters;
  s.base.fill(50.0);
  s.separation.fill(0.0);
  s.noise.fill(1.0);
  return s;
}

SynthResult synth_customers(std::uint64_t seed, std::size_t n, const SynthSpec& spec) {
  if (n < 1) throw ArgumentError("need at least one customer");
  if (spec.clusters < 1) throw ArgumentError("need at least one planted cluster");
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    if (!(spec.separation[f] >= 0.0) || !std::isfinite(spec.separation[f])) {
      throw ArgumentError("separation must be finite and >= 0");
    }
    if (!(spec.noise[f] > 0.0) || !std::isfinite(spec.noise[f])) {
      throw ArgumentError("noise must be finite and > 0");
    }
    if (!std::isfinite(spec.base[f])) throw ArgumentError("base must be finite");
  }
  std::mt19937_64 rng(seed);
  SynthResult out;
  const auto features = all_features();
  out.table.features.assign(features.begin(), features.end());
  out.table.values.reserve(n * kFeatureCount);
  for (std::size_t i = 0; i < n; ++i) {
    const auto cluster = static_cast<int>(i % spec.clusters);
    out.planted.push_back(cluster);
    out.table.ids.push_back("c" + std::to_string(i));
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      double v = spec.base[f] + cluster * spec.separation[f] + spec.noise[f] * detail::standard_normal(rng);
      if (!may_be_negative(static_cast<Feature>(f))) v = std::max(0.0, v);
      out.table.values.push_back(v);
    }
  }
  return out;
}

CustomerClustering cluster_customers(const CustomerTable& table, std::size_t k, std::uint64_t seed) {
  const std::size_t n = table.size();
  const std::size_t d = table.features.size();
  if (n == 0) throw ArgumentError("no customers to cluster");
  if (d == 0) throw ArgumentError("no features to cluster on");

  CustomerClustering out;
  auto& z = out.standardization;
  z.mean.assign(d, 0.0);
  z.stddev.assign(d, 0.0);
  for (std::size_t c = 0; c < d; ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) mean += table.at(r, c);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t r = 0; r < n; ++r) var += (table.at(r, c) - mean) * (table.at(r, c) - mean);
    z.mean[c] = mean;
    z.stddev[c] = std::sqrt(var / static_cast<double>(n));
  }
  std::vector<double> scaled(n * d);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      scaled[r * d + c] = z.stddev[c] > 0.0 ? (table.at(r, c) - z.mean[c]) / z.stddev[c] : 0.0;
    }
  }
  const PointSet points(d, std::move(scaled), table.ids);
  ClusterOptions opts;
  opts.k = k;
  opts.seed = seed;
  opts.restarts = kCustomerRestarts;
  const KMeansResult result = cluster_points(points, opts);
  out.assignment = result.assignment;
  out.iterations = result.iterations;
  return out;
}

ImpactReport feature_impact(const CustomerTable& table, const Assignment& assignment) {
  const std::size_t n = table.size();
  const std::size_t d = table.features.size();
  if (assignment.labels.size() != n) throw ArgumentError("one label per customer required");
  if (d == 0) throw ArgumentError("no features present");
  std::map<int, std::size_t> cluster_of;
  for (int l : assignment.labels) cluster_of.emplace(l, 0);
  if (cluster_of.size() < 2) throw ArgumentError("impact needs at least two non-empty clusters");
  std::size_t next = 0;
  for (auto& [label, slot] : cluster_of) slot = next++;
  std::vector<std::size_t> cluster(n);
  std::vector<double> sizes(cluster_of.size(), 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    cluster[r] = cluster_of.at(assignment.labels[r]);
    sizes[cluster[r]] += 1.0;
  }

  ImpactReport report;
  report.absent = table.absent_features();
  for (std::size_t c = 0; c < d; ++c) {
    FeatureDecomposition fd;
    fd.feature = table.features[c];
    double lo = table.at(0, c);
    double hi = lo;
    double grand = 0.0;
    std::vector<double> means(sizes.size(), 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      const double v = table.at(r, c);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      grand += v;
      means[cluster[r]] += v;
    }
    grand /= static_cast<double>(n);
    for (std::size_t j = 0; j < means.size(); ++j) means[j] /= sizes[j];
    for (std::size_t r = 0; r < n; ++r) {
      const double v = table.at(r, c);
      fd.total += (v - grand) * (v - grand);
      fd.within += (v - means[cluster[r]]) * (v - means[cluster[r]]);
    }
    for (std::size_t j = 0; j < means.size(); ++j) {
      fd.between += sizes[j] * (means[j] - grand) * (means[j] - grand);
    }
    if (hi > lo && fd.total > 0.0) {
      fd.impact_pct = std::clamp(100.0 * fd.between / fd.total, 0.0, 100.0);
    }
    report.features.push_back(fd);
  }
  report.ranking.resize(d);
  for (std::size_t i = 0; i < d; ++i) report.ranking[i] = i;
  std::stable_sort(report.ranking.begin(), report.ranking.end(), [&](std::size_t a, std::size_t b) {
    return report.features[a].impact_pct > report.features[b].impact_pct;
  });
  return report;
}

}  // namespace commscape::quality
