#include "commscape/catalog.hpp"

#include <array>

namespace commscape::catalog {
namespace {

constexpr std::array<DatasetInfo, 8> kDatasets{{
    {"com-LiveJournal", 3'997'962, 34'681'189, 287'512},
    {"com-Friendster", 65'608'366, 1'806'067'135, 957'154},
    {"com-Orkut", 3'072'441, 117'185'083, 6'288'363},
    {"com-YouTube", 1'134'890, 2'987'624, 8'385},
    {"com-DBLP", 317'080, 1'049'866, 13'477},
    {"com-Amazon", 334'863, 925'872, 75'149},
    {"email-Eu-core", 1'005, 25'571, 42},
    {"wiki-topcats", 1'791'489, 28'511'807, 17'364},
}};

constexpr std::array<PublishedCount, 8> kCounts{{
    {"com-LiveJournal", 287'512, 275'451, 4.19},
    {"com-Friendster", 957'154, 843'692, 11.85},
    {"com-Orkut", 6'288'363, 5'459'713, 13.18},
    {"com-YouTube", 8'385, 6'930, 17.35},
    {"com-DBLP", 13'477, 12'572, 6.72},
    {"com-Amazon", 75'149, 70'349, 6.39},
    {"email-Eu-core", 42, 38, 9.52},
    {"wiki-topcats", 17'364, 15'707, 9.54},
}};

}  // namespace

std::span<const DatasetInfo> snap_datasets() { return kDatasets; }

const DatasetInfo* find_dataset(std::string_view name) {
  for (const auto& d : kDatasets) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

std::span<const PublishedCount> published_counts() { return kCounts; }

}  // namespace commscape::catalog
