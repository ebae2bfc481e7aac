#include "drlh/errors.hpp"
#include "drlh/trainer.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace drlh {

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_number(const std::string& key, const std::string& value)
{
    T out{};
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end)
        throw ConfigError("key '" + key + "': cannot parse '" + value + "'");
    return out;
}

std::vector<std::size_t> parse_list(const std::string& key, const std::string& value)
{
    std::vector<std::size_t> out;
    if (value == "none")
        return out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_number<std::size_t>(key, trim(item)));
    return out;
}

std::string format_double(double v)
{
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

std::string join(const std::vector<std::size_t>& v)
{
    if (v.empty())
        return "none";
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

using Setter = std::function<void(TrainConfig&, const std::string& key, const std::string& value)>;
using Getter = std::function<std::string(const TrainConfig&, const Codebook&)>;

struct KeyHandler {
    Setter set;
    Getter get;
};

template <class T>
KeyHandler number_key(T TrainConfig::*field)
{
    return {[field](TrainConfig& c, const std::string& k, const std::string& v) { c.*field = parse_number<T>(k, v); },
            [field](const TrainConfig& c, const Codebook&) {
                if constexpr (std::is_floating_point_v<T>)
                    return format_double(c.*field);
                else
                    return std::to_string(c.*field);
            }};
}

const std::map<std::string, KeyHandler>& handlers()
{
    static const std::map<std::string, KeyHandler> table = {
        {"epochs", number_key(&TrainConfig::epochs)},
        {"eps_start", number_key(&TrainConfig::eps_start)},
        {"eps_end", number_key(&TrainConfig::eps_end)},
        {"eps_decay_epochs", number_key(&TrainConfig::eps_decay_epochs)},
        {"gamma", number_key(&TrainConfig::gamma)},
        {"batch_size", number_key(&TrainConfig::batch_size)},
        {"buffer_capacity", number_key(&TrainConfig::buffer_capacity)},
        {"learning_rate", number_key(&TrainConfig::learning_rate)},
        {"target_sync_interval", number_key(&TrainConfig::target_sync_interval)},
        {"expert_prob", number_key(&TrainConfig::expert_prob)},
        {"seed", number_key(&TrainConfig::seed)},
        {"run_seed", number_key(&TrainConfig::run_seed)},
        {"dropout", number_key(&TrainConfig::dropout)},
        {"sigma", number_key(&TrainConfig::sigma)},
        {"hidden",
         {[](TrainConfig& c, const std::string& k, const std::string& v) { c.hidden = parse_list(k, v); },
          [](const TrainConfig& c, const Codebook&) { return join(c.hidden); }}},
        {"eta",
         {[](TrainConfig& c, const std::string& k, const std::string& v) { c.eta = parse_number<std::size_t>(k, v); },
          [](const TrainConfig& c, const Codebook& b) { return std::to_string(c.env_config(b).eta); }}},
        {"max_steps",
         {[](TrainConfig& c, const std::string& k, const std::string& v) {
              c.max_steps = parse_number<std::size_t>(k, v);
          },
          [](const TrainConfig& c, const Codebook& b) { return std::to_string(c.env_config(b).max_steps); }}},
    };
    return table;
}

}  // namespace

const std::vector<std::string>& TrainConfig::keys()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [k, h] : handlers())
            v.push_back(k);
        return v;
    }();
    return names;
}

void TrainConfig::validate() const
{
    auto require = [](bool ok, const char* what) {
        if (!ok)
            throw ConfigError(what);
    };
    require(epochs >= 1, "epochs must be at least 1");
    require(eps_decay_epochs >= 1, "eps_decay_epochs must be at least 1");
    require(eps_start > 0.0 && eps_start <= 1.0, "eps_start must be in (0, 1]");
    require(eps_end > 0.0 && eps_end <= eps_start, "eps_end must be in (0, eps_start]");
    require(gamma > 0.0 && gamma < 1.0, "gamma must be in (0, 1)");
    require(batch_size >= 1, "batch_size must be at least 1");
    require(buffer_capacity >= batch_size, "buffer_capacity must be at least batch_size");
    require(learning_rate > 0.0, "learning_rate must be positive");
    require(target_sync_interval >= 1, "target_sync_interval must be at least 1");
    require(expert_prob >= 0.0 && expert_prob <= 1.0, "expert_prob must be in [0, 1]");
    require(dropout >= 0.0 && dropout < 1.0, "dropout must be in [0, 1)");
    require(sigma > 0.0, "sigma must be positive");
    require(!max_steps || *max_steps >= 1, "max_steps must be at least 1");
    for (auto h : hidden)
        require(h >= 1, "hidden layer widths must be positive");
}

EnvConfig TrainConfig::env_config(const Codebook& book) const
{
    EnvConfig env = EnvConfig::defaults_for(book);
    if (eta)
        env.eta = *eta;
    if (max_steps)
        env.max_steps = *max_steps;
    env.sigma = sigma;
    return env;
}

ParsedConfig parse_train_config(std::istream& is)
{
    ParsedConfig out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const std::string body = trim(line);
        if (body.empty())
            continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value', got '" + body + "'");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        const auto it = handlers().find(key);
        if (it == handlers().end())
            throw ConfigError("unknown key '" + key + "'");
        if (!out.explicit_keys.insert(key).second)
            throw ConfigError("key '" + key + "' given twice");
        if (value.empty())
            throw ConfigError("key '" + key + "' has no value");
        it->second.set(out.config, key, value);
    }
    out.config.validate();
    return out;
}

ParsedConfig parse_train_config_file(const std::string& path)
{
    std::ifstream is(path);
    if (!is)
        throw IoError("cannot open config '" + path + "'");
    return parse_train_config(is);
}

std::string describe_config(const ParsedConfig& parsed, const Codebook& book)
{
    std::string out;
    for (const auto& [key, h] : handlers()) {
        out += "# " + key + " = " + h.get(parsed.config, book);
        if (!parsed.explicit_keys.count(key))
            out += " (default)";
        out += '\n';
    }
    return out;
}

}  // namespace drlh
