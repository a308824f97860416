#include "config.hpp"

#include "tcmdp/error.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace tcmdp::cli {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"run", {"n", "replications", "seed", "trajectory"}},
        {"model",
         {"kind", "noise_scale", "noise_slope", "noise_center", "noise_offset", "context",
          "context_values", "context_value", "control_role", "controls", "control_count",
          "control_gain", "x0", "clip"}},
        {"class",
         {"histograms", "x", "a", "g", "y", "tie_xg", "cell_budget", "splines", "degree",
          "spline_axes", "spline_context_cap", "spline_ridge"}},
        {"selector", {"penalty_weight"}},
        {"cost",
         {"name", "value", "threshold", "target", "control_weight", "table", "grid", "controls",
          "contexts", "fallback", "normalise"}},
        {"policy", {"control", "beta", "reward", "reward_value", "grid"}},
        {"shift", {"kind", "control_gain", "m", "constant"}},
        {"table1", {"models", "max_complexity", "context_depth", "histograms", "splines"}},
        {"minimax", {"d", "p_star1", "epsilon", "sigma", "path_length"}},
    };
    return keys;
}

void check_keys(const pt::ptree& tree, const std::string& path) {
    const auto& keys = known_keys();
    for (const auto& [section, body] : tree) {
        const auto it = keys.find(section);
        if (it == keys.end() || body.empty()) {
            throw ConfigError(path + ": unknown section [" + section + "]");
        }
        for (const auto& [key, value] : body) {
            if (it->second.count(key) == 0) {
                throw ConfigError(path + ": unknown key '" + key + "' in [" + section + "]");
            }
        }
    }
}

std::vector<std::string> split(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) {
            out.push_back(item.substr(b, e - b + 1));
        }
    }
    return out;
}

class Reader {
public:
    Reader(const pt::ptree& tree, std::string path) : tree_(tree), path_(std::move(path)) {}

    template <class T>
    T get(const std::string& key, T fallback) const {
        try {
            return tree_.get<T>(key, fallback);
        } catch (const pt::ptree_error&) {
            throw ConfigError(path_ + ": bad value for '" + key + "'");
        }
    }

    std::string text(const std::string& key, const std::string& fallback = "") const {
        return tree_.get<std::string>(key, fallback);
    }

    std::vector<double> numbers(const std::string& key) const {
        std::vector<double> out;
        for (const auto& s : split(text(key))) {
            try {
                std::size_t used = 0;
                out.push_back(std::stod(s, &used));
                if (used != s.size()) {
                    throw std::invalid_argument(s);
                }
            } catch (const std::exception&) {
                throw ConfigError(path_ + ": bad number '" + s + "' in '" + key + "'");
            }
        }
        return out;
    }

    //! "lo:hi" or a single depth.
    DepthRange range(const std::string& key, DepthRange fallback) const {
        const auto s = text(key);
        if (s.empty()) {
            return fallback;
        }
        try {
            const auto colon = s.find(':');
            if (colon == std::string::npos) {
                const int v = std::stoi(s);
                return {v, v};
            }
            return {std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1))};
        } catch (const std::exception&) {
            throw ConfigError(path_ + ": bad depth range '" + s + "' for '" + key + "'");
        }
    }

    const std::string& path() const { return path_; }

private:
    const pt::ptree& tree_;
    std::string path_;
};

ModelKind parse_kind(const std::string& s, const std::string& path) {
    if (s == "model_i" || s == "I" || s == "1") {
        return ModelKind::model_i;
    }
    if (s == "model_ii" || s == "II" || s == "2") {
        return ModelKind::model_ii;
    }
    if (s == "model_iii" || s == "III" || s == "3") {
        return ModelKind::model_iii;
    }
    throw ConfigError(path + ": unknown model kind '" + s + "'");
}

SimModel read_model(const Reader& r) {
    SimModel m;
    m.kind = parse_kind(r.text("model.kind", "model_i"), r.path());
    m.noise.scale = r.get("model.noise_scale", m.noise.scale);
    m.noise.slope = r.get("model.noise_slope", m.noise.slope);
    m.noise.center = r.get("model.noise_center", m.noise.center);
    m.noise.offset = r.get("model.noise_offset", m.noise.offset);
    const auto law = r.text("model.context", "uniform");
    if (law == "uniform") {
        m.context.kind = ContextLaw::Kind::uniform;
    } else if (law == "grid") {
        m.context.kind = ContextLaw::Kind::grid;
        m.context.values = r.numbers("model.context_values");
    } else if (law == "constant") {
        m.context.kind = ContextLaw::Kind::constant;
        m.context.value = r.get("model.context_value", 0.0);
    } else {
        throw ConfigError(r.path() + ": unknown context law '" + law + "'");
    }
    const auto role = r.text("model.control_role", "noise");
    if (role == "noise") {
        m.control_role = ControlRole::noise;
    } else if (role == "exogenous") {
        m.control_role = ControlRole::exogenous;
    } else {
        throw ConfigError(r.path() + ": unknown control role '" + role + "'");
    }
    if (!r.text("model.controls").empty()) {
        m.behavior_controls = r.numbers("model.controls");
    } else if (!r.text("model.control_count").empty()) {
        m.behavior_controls = uniform_control_grid(r.get<std::size_t>("model.control_count", 4));
    }
    m.control_gain = r.get("model.control_gain", m.control_gain);
    m.x0 = r.get("model.x0", m.x0);
    m.clip = r.get("model.clip", m.clip);
    m.validate();
    return m;
}

ClassConfig read_classes(const Reader& r) {
    ClassConfig c;
    c.histograms = r.get("class.histograms", true);
    c.x = r.range("class.x", {0, 1});
    c.a = r.range("class.a", {0, 0});
    c.g = r.range("class.g", {0, 1});
    c.y = r.range("class.y", {1, 6});
    c.tie_xg = r.get("class.tie_xg", false);
    c.cell_budget = r.get<std::size_t>("class.cell_budget", c.cell_budget);
    c.splines = r.get("class.splines", false);
    c.degree = r.range("class.degree", {1, 1});
    const auto axes = split(r.text("class.spline_axes", "x,a,g"));
    c.spline.context_axes = {false, false, false};
    for (const auto& a : axes) {
        if (a == "x") {
            c.spline.context_axes[0] = true;
        } else if (a == "a") {
            c.spline.context_axes[1] = true;
        } else if (a == "g") {
            c.spline.context_axes[2] = true;
        } else {
            throw ConfigError(r.path() + ": unknown spline axis '" + a + "'");
        }
    }
    c.spline.context_degree_cap = r.get("class.spline_context_cap", -1);
    c.spline.ridge = r.get("class.spline_ridge", c.spline.ridge);
    for (const auto* d : {&c.x, &c.a, &c.g, &c.y}) {
        if (d->lo < 0 || d->hi < d->lo) {
            throw ConfigError(r.path() + ": depth ranges need 0 <= lo <= hi");
        }
    }
    if (!c.histograms && !c.splines) {
        throw ConfigError(r.path() + ": the class admits no candidates");
    }
    return c;
}

CostBlock read_cost(const Reader& r) {
    CostBlock b;
    b.name = r.text("cost.name", "quadratic");
    std::vector<double> grid;
    if (!r.text("cost.controls").empty()) {
        grid = r.numbers("cost.controls");
    } else {
        grid = uniform_control_grid(r.get<std::size_t>("cost.grid", 64));
    }
    const double weight = r.get("cost.control_weight", 0.0);
    if (b.name == "constant") {
        b.spec = constant_cost(r.get("cost.value", 0.5), grid);
    } else if (b.name == "threshold") {
        b.spec = threshold_cost(r.get("cost.threshold", 0.5), grid);
    } else if (b.name == "quadratic") {
        b.spec = quadratic_cost(r.get("cost.target", 0.5), weight, grid);
    } else if (b.name == "threshold_control") {
        const double th = r.get("cost.threshold", 0.5);
        if (!(weight >= 0.0)) {
            throw ConfigError(r.path() + ": control_weight must be >= 0");
        }
        b.spec = {"threshold_control",
                  [th, weight](double, double a, double, double y) {
                      return (y > th ? 1.0 : 0.0) + weight * a * a;
                  },
                  1.0 + weight, grid};
    } else if (b.name == "table") {
        b.spec = table_cost(r.text("cost.table"), grid);
    } else if (b.name == "minimax") {
        b.spec = constant_cost(0.0, {0.0, 1.0});
    } else {
        throw ConfigError(r.path() + ": unknown cost '" + b.name + "'");
    }
    b.spec.validate();
    b.contexts = r.numbers("cost.contexts");
    b.options.fallback = r.get("cost.fallback", false);
    b.normalise = r.get("cost.normalise", false);
    return b;
}

} // namespace

PolicySpec PolicyBlock::spec() const {
    if (reward == "identity") {
        return constant_policy(control, beta, [](double x) { return x; }, 1.0);
    }
    const double v = reward_value;
    return constant_policy(control, beta, [v](double) { return v; }, std::abs(v));
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ExperimentConfig load_config(const std::string& path, const Overrides& overrides) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config: " + path);
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    pt::ptree tree;
    try {
        std::istringstream s(text);
        pt::read_ini(s, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(path + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
    }
    check_keys(tree, path);
    const Reader r(tree, path);

    ExperimentConfig cfg;
    cfg.run.n = r.get<std::size_t>("run.n", 1000);
    cfg.run.replications = r.get<std::size_t>("run.replications", 1);
    cfg.run.seed = overrides.seed.value_or(r.get<std::uint64_t>("run.seed", 1));
    cfg.run.trajectory = r.text("run.trajectory");
    if (cfg.run.replications < 1) {
        throw ConfigError(path + ": replications must be >= 1");
    }
    if (cfg.run.n < Trajectory::min_samples) {
        throw ConfigError(path + ": n must be >= 3");
    }

    cfg.model = read_model(r);
    cfg.classes = read_classes(r);
    cfg.selector.penalty_weight = r.get("selector.penalty_weight", 1.0);
    cfg.selector.jobs = overrides.jobs;
    cfg.selector.validate();
    cfg.cost = read_cost(r);

    cfg.policy.control = r.get("policy.control", 0.0);
    cfg.policy.beta = r.get("policy.beta", 0.9);
    cfg.policy.reward = r.text("policy.reward", "identity");
    cfg.policy.reward_value = r.get("policy.reward_value", 1.0);
    cfg.policy.grid = r.get<std::size_t>("policy.grid", 64);
    if (cfg.policy.reward != "identity" && cfg.policy.reward != "constant") {
        throw ConfigError(path + ": unknown reward '" + cfg.policy.reward + "'");
    }
    cfg.policy.spec().validate();

    cfg.shift.test_model = cfg.model;
    if (!r.text("shift.kind").empty()) {
        cfg.shift.test_model.kind = parse_kind(r.text("shift.kind"), path);
    }
    cfg.shift.test_model.control_gain = r.get("shift.control_gain", cfg.model.control_gain);
    cfg.shift.m = r.get<std::size_t>("shift.m", cfg.run.n);
    cfg.shift.config.constant = r.get("shift.constant", cfg.shift.config.constant);

    auto& t1 = cfg.table1;
    t1.base = cfg.model;
    t1.n = cfg.run.n;
    t1.replications = cfg.run.replications;
    t1.seed = cfg.run.seed;
    t1.jobs = overrides.jobs;
    t1.selector = cfg.selector;
    if (!r.text("table1.models").empty()) {
        t1.models.clear();
        for (const auto& k : split(r.text("table1.models"))) {
            t1.models.push_back(parse_kind(k, path));
        }
    }
    t1.max_complexity = r.get("table1.max_complexity", t1.max_complexity);
    t1.context_depth = r.get("table1.context_depth", t1.context_depth);
    t1.histograms = r.get("table1.histograms", t1.histograms);
    t1.splines = r.get("table1.splines", t1.splines);
    t1.validate();

    cfg.minimax.d = r.get("minimax.d", cfg.minimax.d);
    cfg.minimax.p_star1 = r.get("minimax.p_star1", cfg.minimax.p_star1);
    cfg.minimax.epsilon = r.get("minimax.epsilon", cfg.minimax.epsilon);
    if (!r.text("minimax.sigma").empty()) {
        cfg.minimax.sigma.clear();
        for (double s : r.numbers("minimax.sigma")) {
            cfg.minimax.sigma.push_back(static_cast<int>(s));
        }
    } else {
        cfg.minimax.sigma.assign(static_cast<std::size_t>(std::max(cfg.minimax.d / 2, 0)), 1);
    }
    cfg.minimax_path_length = r.get<std::size_t>("minimax.path_length", 5000);
    try {
        cfg.minimax.validate();
    } catch (const DomainError& e) {
        throw ConfigError(path + ": " + e.what());
    }

    cfg.hash = fnv1a_hex(text + "\nseed=" + std::to_string(cfg.run.seed));
    return cfg;
}

} // namespace tcmdp::cli
