#include "htsroute/config_io.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <sstream>

namespace hts {

ConfigParseError::ConfigParseError(int line, std::string key, const std::string& message)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                         (key.empty() ? std::string() : "key '" + key + "': ") + message),
      line_(line),
      key_(std::move(key)) {}

namespace {

int line_of(const YAML::Node& node) { return node.Mark().line >= 0 ? node.Mark().line + 1 : 0; }

template <typename T>
T scalar(const YAML::Node& node, const std::string& key) {
    if (!node.IsScalar()) throw ConfigParseError(line_of(node), key, "expected a scalar value");
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigParseError(line_of(node), key, "cannot convert '" + node.Scalar() + "'");
    }
}

}  // namespace

ScenarioConfig parse_config(std::string_view text) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::ParserException& e) {
        throw ConfigParseError(e.mark.line + 1, "", e.msg);
    }
    ScenarioConfig c;
    if (root.IsNull()) return validate_config(c);
    if (!root.IsMap()) throw ConfigParseError(line_of(root), "", "config must be a key: value mapping");

    for (const auto& entry : root) {
        const std::string key = entry.first.as<std::string>();
        const YAML::Node& v = entry.second;
        if (key == "num_modules") c.num_modules = scalar<int>(v, key);
        else if (key == "num_priorities") c.num_priorities = scalar<int>(v, key);
        else if (key == "horizon") c.horizon = scalar<int>(v, key);
        else if (key == "window") c.window = scalar<int>(v, key);
        else if (key == "loss_costs") {
            if (!v.IsSequence()) throw ConfigParseError(line_of(v), key, "expected a list of numbers");
            c.loss_costs.clear();
            for (const auto& item : v) c.loss_costs.push_back(scalar<double>(item, key));
        }
        else if (key == "queue_capacity") c.queue_capacity = scalar<double>(v, key);
        else if (key == "initial_queue") c.initial_queue = scalar<double>(v, key);
        else if (key == "max_weight_step") c.max_weight_step = scalar<double>(v, key);
        else if (key == "scheduler_period") c.scheduler_period = scalar<double>(v, key);
        else if (key == "link_capacity") c.link_capacity = scalar<double>(v, key);
        else if (key == "lambda_start") c.lambda_start = scalar<double>(v, key);
        else if (key == "lambda_end") c.lambda_end = scalar<double>(v, key);
        else if (key == "ramp_two_sided") c.ramp_two_sided = scalar<bool>(v, key);
        else if (key == "terminal_flush") c.terminal_flush = scalar<bool>(v, key);
        else if (key == "num_runs") c.num_runs = scalar<int>(v, key);
        else if (key == "base_seed") c.base_seed = scalar<std::uint64_t>(v, key);
        else if (key == "time_step_duration") c.time_step_duration = scalar<double>(v, key);
        else throw ConfigParseError(line_of(entry.first), key, "unknown key");
    }
    return validate_config(c);
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigParseError(0, "", "cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string to_yaml(const ScenarioConfig& c) {
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    out << YAML::BeginMap;
    out << YAML::Key << "num_modules" << YAML::Value << c.num_modules;
    out << YAML::Key << "num_priorities" << YAML::Value << c.num_priorities;
    out << YAML::Key << "horizon" << YAML::Value << c.horizon;
    out << YAML::Key << "window" << YAML::Value << c.window;
    out << YAML::Key << "loss_costs" << YAML::Value << YAML::Flow << c.loss_costs;
    out << YAML::Key << "queue_capacity" << YAML::Value << c.queue_capacity;
    out << YAML::Key << "initial_queue" << YAML::Value << c.initial_queue;
    out << YAML::Key << "max_weight_step" << YAML::Value << c.max_weight_step;
    out << YAML::Key << "scheduler_period" << YAML::Value << c.scheduler_period;
    out << YAML::Key << "link_capacity" << YAML::Value << c.link_capacity;
    out << YAML::Key << "lambda_start" << YAML::Value << c.lambda_start;
    out << YAML::Key << "lambda_end" << YAML::Value << c.lambda_end;
    out << YAML::Key << "ramp_two_sided" << YAML::Value << c.ramp_two_sided;
    out << YAML::Key << "terminal_flush" << YAML::Value << c.terminal_flush;
    out << YAML::Key << "num_runs" << YAML::Value << c.num_runs;
    out << YAML::Key << "base_seed" << YAML::Value << c.base_seed;
    out << YAML::Key << "time_step_duration" << YAML::Value << c.time_step_duration;
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

}  // namespace hts
