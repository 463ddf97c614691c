#include "json_config.hpp"

#include "json.hpp"

namespace commscape::cli {
namespace {

using nlohmann::ordered_json;

std::string scalar(const ordered_json& j, const std::string& key) {
  if (j.is_boolean()) return j.get<bool>() ? "true" : "false";
  if (j.is_number()) return j.dump();
  if (j.is_string()) return j.get<std::string>();
  throw CLI::ConversionError("config value for '" + key + "' must be a scalar or array of scalars");
}

void collect(const ordered_json& j, const std::vector<std::string>& parents,
             std::vector<CLI::ConfigItem>& out) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it->is_object()) {
      auto nested = parents;
      nested.push_back(it.key());
      collect(*it, nested, out);
      continue;
    }
    CLI::ConfigItem item;
    item.parents = parents;
    item.name = it.key();
    if (it->is_array()) {
      for (const auto& v : *it) item.inputs.push_back(scalar(v, it.key()));
    } else {
      item.inputs.push_back(scalar(*it, it.key()));
    }
    out.push_back(std::move(item));
  }
}

ordered_json dump_app(const CLI::App* app, bool default_also) {
  ordered_json j = ordered_json::object();
  for (const CLI::Option* opt : app->get_options()) {
    if (!opt->get_configurable() || opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (opt->count() > 0) {
      const auto& results = opt->results();
      if (results.size() == 1) j[name] = results.front();
      else j[name] = results;
    } else if (default_also && !opt->get_default_str().empty()) {
      j[name] = opt->get_default_str();
    }
  }
  for (const CLI::App* sub : app->get_subcommands({})) {
    ordered_json nested = dump_app(sub, default_also);
    if (!nested.empty()) j[sub->get_name()] = std::move(nested);
  }
  return j;
}

}  // namespace

std::string JsonConfig::to_config(const CLI::App* app, bool default_also, bool, std::string) const {
  return dump_app(app, default_also).dump(2) + "\n";
}

std::vector<CLI::ConfigItem> JsonConfig::from_config(std::istream& input) const {
  ordered_json j;
  try {
    input >> j;
  } catch (const nlohmann::json::exception& e) {
    throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
  std::vector<CLI::ConfigItem> out;
  collect(j, {}, out);
  return out;
}

}  // namespace commscape::cli
