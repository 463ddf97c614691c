#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "commscape/kmeans.hpp"

namespace commscape::quality {

/// The twelve customer-quality parameters, in canonical column order.
enum class Feature : std::size_t {
  kTotalDirectTransactions,
  kClickDirectTransactions,
  kRegisterDirectTransactions,
  kDirectPurchases,
  kGuidanceDirectTransactions,
  kIndirectTransactions,
  kActivityDays,
  kSocialNetworkRole,
  kSocialNetworkSize,
  kFrequentVisits,
  kVariousVisits,
  kConversionRate,
};

inline constexpr std::size_t kFeatureCount = 12;

std::string_view feature_name(Feature f);
std::optional<Feature> feature_from_name(std::string_view name);
std::array<Feature, kFeatureCount> all_features();

/// Customers with a subset of the twelve features present. Values are
/// stored row-major over `features`, in the order the columns were given.
struct CustomerTable {
  std::vector<Feature> features;
  std::vector<std::string> ids;
  std::vector<double> values;

  std::size_t size() const noexcept { return ids.size(); }
  double at(std::size_t row, std::size_t col) const { return values[row * features.size() + col]; }
  /// Features of the full set that are not present.
  std::vector<Feature> absent_features() const;
};

/// CSV with a header of `customer_id` plus feature names. Rejects unknown or
/// repeated columns, missing or non-numeric cells, non-finite values, and
/// negative values for every feature except social_network_role.
CustomerTable load_customers(std::istream& in);
CustomerTable load_customers_text(const std::string& text);

void write_customers(std::ostream& out, const CustomerTable& table);

/// Planted-cluster generator settings. Customer i belongs to cluster
/// i mod clusters; feature f is base[f] + cluster * separation[f] plus
/// Gaussian noise with standard deviation noise[f], floored at 0 where the
/// feature must be non-negative.
struct SynthSpec {
  std::size_t clusters = 2;
  std::array<double, kFeatureCount> base{};
  std::array<double, kFeatureCount> separation{};
  std::array<double, kFeatureCount> noise{};

  /// base 50, noise 1, no separation.
  static SynthSpec uniform(std::size_t clusters);
};

struct SynthResult {
  CustomerTable table;
  std::vector<int> planted;
};

/// Throws ArgumentError for n < 1, clusters < 1, negative separation, or
/// non-positive noise.
SynthResult synth_customers(std::uint64_t seed, std::size_t n, const SynthSpec& spec);

struct Standardization {
  std::vector<double> mean;
  /// Population standard deviation; constant columns record 0 and map to 0.
  std::vector<double> stddev;
};

struct CustomerClustering {
  Assignment assignment;
  Standardization standardization;
  int iterations = 0;
};

inline constexpr int kCustomerRestarts = 20;

/// z-scores every feature, then runs pruned k-means (Lloyd when k = 1), best
/// of kCustomerRestarts seedings.
CustomerClustering cluster_customers(const CustomerTable& table, std::size_t k, std::uint64_t seed);

/// Per-feature sums of squares around the grand and cluster means.
struct FeatureDecomposition {
  Feature feature;
  double total = 0.0;    // SST
  double between = 0.0;  // SSB
  double within = 0.0;   // SSW
  /// 100 * SSB / SST; 0 when SST is 0.
  double impact_pct = 0.0;
};

struct ImpactReport {
  /// In table column order.
  std::vector<FeatureDecomposition> features;
  /// Indices into `features`, by descending impact (ties by column order).
  std::vector<std::size_t> ranking;
  std::vector<Feature> absent;
};

/// Variance of each raw feature explained by the assignment. Throws
/// ArgumentError unless at least two clusters are non-empty and at least one
/// feature is present.
ImpactReport feature_impact(const CustomerTable& table, const Assignment& assignment);

}  // namespace commscape::quality
