#pragma once

// CLI11 config-file reader/writer for flat JSON objects. Nested objects map
// onto subcommands; arrays become repeated values.

#include <CLI11.hpp>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

namespace lspp::cli {

class JsonConfig : public CLI::Config {
public:
    // Top-level scalar keys are attributed to this subcommand.
    void set_section(std::string section) { section_ = std::move(section); }

    std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
        nlohmann::json j = nlohmann::json::object();
        for (const CLI::Option* opt : app->get_options({})) {
            if (!opt->get_configurable() || opt->get_lnames().empty()) continue;
            const std::string name = opt->get_lnames().front();
            if (opt->count() > 0) {
                const auto& res = opt->results();
                if (opt->get_type_size() == 0) {
                    j[name] = opt->as<bool>();
                } else if (opt->get_expected_max() > 1 || res.size() > 1) {
                    j[name] = res;
                } else {
                    j[name] = res.empty() ? std::string() : res.front();
                }
            } else if (default_also && !opt->get_default_str().empty()) {
                j[name] = opt->get_default_str();
            }
        }
        for (const CLI::App* sub : app->get_subcommands({})) {
            std::stringstream ss(to_config(sub, default_also, false, ""));
            nlohmann::json sj = nlohmann::json::parse(ss);
            if (!sj.empty()) j[sub->get_name()] = sj;
        }
        return j.dump();
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        nlohmann::json j;
        try {
            input >> j;
        } catch (const nlohmann::json::exception& e) {
            throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
        }
        if (!j.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
        std::vector<std::string> root;
        if (!section_.empty()) root.push_back(section_);
        std::vector<CLI::ConfigItem> out;
        for (auto it = j.begin(); it != j.end(); ++it) {
            auto sub = it->is_object() ? items(*it, it.key(), {}) : items(*it, it.key(), root);
            out.insert(out.end(), sub.begin(), sub.end());
        }
        return out;
    }

private:
    static std::string scalar(const nlohmann::json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        if (v.is_number()) return v.dump();
        throw CLI::ConversionError("unsupported config value " + v.dump());
    }

    std::vector<CLI::ConfigItem> items(const nlohmann::json& j, const std::string& name,
                                       std::vector<std::string> prefix) const {
        std::vector<CLI::ConfigItem> out;
        if (j.is_object()) {
            if (!name.empty()) prefix.push_back(name);
            for (auto it = j.begin(); it != j.end(); ++it) {
                auto sub = items(*it, it.key(), prefix);
                out.insert(out.end(), sub.begin(), sub.end());
            }
            return out;
        }
        CLI::ConfigItem item;
        item.name = name;
        item.parents = prefix;
        if (j.is_array()) {
            for (const auto& v : j) item.inputs.push_back(scalar(v));
        } else {
            item.inputs = {scalar(j)};
        }
        out.push_back(std::move(item));
        return out;
    }

    std::string section_;
};

}  // namespace lspp::cli
