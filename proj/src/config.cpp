// SPDX-License-Identifier: MIT
#include "shockld/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace shockld {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& what) {
    throw std::invalid_argument("config: " + key + ": " + what);
}

class Block {
public:
    Block(const json& node, std::string name) : node_(node), name_(std::move(name)) {
        if (!node_.is_object()) fail(name_, "must be an object");
    }

    std::string key(const std::string& k) const { return name_.empty() ? k : name_ + "." + k; }

    bool has(const std::string& k) {
        seen_.insert(k);
        return node_.contains(k);
    }

    const json& get(const std::string& k) {
        if (!has(k)) fail(key(k), "missing required key");
        return node_.at(k);
    }

    double number(const std::string& k) {
        const json& v = get(k);
        if (!v.is_number()) fail(key(k), "must be a number");
        return v.get<double>();
    }

    double number_or(const std::string& k, double fallback) { return has(k) ? number(k) : fallback; }

    std::uint64_t unsigned_or(const std::string& k, std::uint64_t fallback) {
        if (!has(k)) return fallback;
        const json& v = node_.at(k);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
            fail(key(k), "must be a non-negative integer");
        return v.get<std::uint64_t>();
    }

    std::string string(const std::string& k) {
        const json& v = get(k);
        if (!v.is_string()) fail(key(k), "must be a string");
        return v.get<std::string>();
    }

    std::string string_or(const std::string& k, const std::string& fallback) { return has(k) ? string(k) : fallback; }

    std::vector<double> numbers_or(const std::string& k, std::vector<double> fallback) {
        if (!has(k)) return fallback;
        const json& v = node_.at(k);
        if (v.is_number()) return {v.get<double>()};
        if (!v.is_array()) fail(key(k), "must be a number or an array of numbers");
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) fail(key(k), "must contain only numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }

    std::vector<std::string> strings_or(const std::string& k, std::vector<std::string> fallback) {
        if (!has(k)) return fallback;
        const json& v = node_.at(k);
        if (!v.is_array()) fail(key(k), "must be an array of strings");
        std::vector<std::string> out;
        for (const auto& e : v) {
            if (!e.is_string()) fail(key(k), "must contain only strings");
            out.push_back(e.get<std::string>());
        }
        return out;
    }

    Block child(const std::string& k) { return Block(get(k), key(k)); }

    void reject_unknown() const {
        for (const auto& item : node_.items()) {
            if (!seen_.count(item.key())) fail(key(item.key()), "unknown key");
        }
    }

private:
    const json& node_;
    std::string name_;
    std::set<std::string> seen_;
};

void require_positive(double v, const std::string& key) {
    if (!(v > 0.0)) fail(key, "must be positive");
}

WaveSpec parse_wave(Block& b, double gamma_fallback, bool need_gamma) {
    WaveSpec w;
    w.u_minus = b.number("u_minus");
    w.u_plus = b.number("u_plus");
    w.D = b.number("D");
    w.gamma = need_gamma ? b.number("gamma_frame") : b.number_or("gamma_frame", gamma_fallback);
    require_positive(w.D, b.key("D"));
    if (!(w.u_minus > w.u_plus)) fail(b.key("u_minus"), "must exceed u_plus");
    b.reject_unknown();
    return w;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    try {
        cfg.source = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: malformed JSON: ") + e.what());
    }
    Block root(cfg.source, "");

    {
        Block g = root.child("grid");
        cfg.grid_block = {g.number("L"), g.number("R"), g.number("dx"), g.number("T"), g.number("dt")};
        g.reject_unknown();
        require_positive(cfg.grid_block.dx, "grid.dx");
        require_positive(cfg.grid_block.T, "grid.T");
        require_positive(cfg.grid_block.dt, "grid.dt");
        if (!(cfg.grid_block.R > cfg.grid_block.L)) fail("grid.R", "must exceed grid.L");
        try {
            cfg.grid = SpaceTimeGrid::uniform(cfg.grid_block.L, cfg.grid_block.R, cfg.grid_block.dx, cfg.grid_block.T,
                                              cfg.grid_block.dt);
        } catch (const std::invalid_argument& e) {
            const std::string msg = e.what();
            fail(msg.find("dt") != std::string::npos ? "grid.dt" : "grid.dx", msg);
        }
    }
    {
        Block w = root.child("wave");
        cfg.wave = parse_wave(w, 0.0, true);
    }
    {
        Block n = root.child("noise");
        const std::string kind = n.string("kind");
        if (kind == "identity") {
            cfg.noise.kind = NoiseKind::Identity;
        } else if (kind == "exponential") {
            cfg.noise.kind = NoiseKind::Exponential;
        } else {
            fail("noise.kind", "expected \"identity\" or \"exponential\", got \"" + kind + "\"");
        }
        cfg.noise.sigma = n.number_or("sigma", 1.0);
        require_positive(cfg.noise.sigma, "noise.sigma");
        if (cfg.noise.kind == NoiseKind::Exponential) {
            cfg.noise.l_c = n.number("l_c");
            require_positive(cfg.noise.l_c, "noise.l_c");
        } else {
            cfg.noise.l_c = n.number_or("l_c", 1.0);
        }
        n.reject_unknown();
    }
    {
        Block s = root.child("scenario");
        try {
            cfg.scenario.kind = scenario_from_string(s.string_or("kind", "displacement"));
        } catch (const std::invalid_argument& e) {
            fail("scenario.kind", e.what());
        }
        cfg.scenario.x0 = s.number_or("x0", 0.0);
        cfg.scenario.delta = s.number_or("delta", 0.0);
        if (!(cfg.scenario.delta >= 0.0)) fail("scenario.delta", "must be non-negative");
        cfg.scenario.boundary_width = s.unsigned_or("boundary_width", 2);
        if (cfg.scenario.boundary_width < 1) fail("scenario.boundary_width", "must be at least 1");
        if (s.has("target")) {
            Block t = s.child("target");
            cfg.scenario.target = parse_wave(t, cfg.wave.gamma, false);
        }
        if (cfg.scenario.kind != ScenarioKind::Displacement && !cfg.scenario.target)
            fail("scenario.target", "required for scenario kind " + to_string(cfg.scenario.kind));
        s.reject_unknown();
    }
    {
        Block r = root.child("run");
        r.has("mode");  // informational; the subcommand selects the pipeline
        cfg.run.eps = r.numbers_or("eps", {});
        for (double e : cfg.run.eps)
            if (!(e >= 0.0)) fail("run.eps", "must be non-negative");
        cfg.run.K = r.unsigned_or("K", 10000);
        if (cfg.run.K < 1) fail("run.K", "must be at least 1");
        cfg.run.seed = r.unsigned_or("seed", 0);
        cfg.run.output = r.string_or("output", "out");
        cfg.run.estimators = r.strings_or("estimators", {"mc", "is-delta"});
        for (const auto& e : cfg.run.estimators)
            if (e != "mc" && e != "is-0" && e != "is-delta")
                fail("run.estimators", "unknown estimator \"" + e + "\" (expected mc, is-0 or is-delta)");
        cfg.run.x0_list = r.numbers_or("x0_list", {});
        cfg.run.T_list = r.numbers_or("T_list", {});
        for (double t : cfg.run.T_list) require_positive(t, "run.T_list");
        cfg.run.trials = r.unsigned_or("trials", 10000);
        const std::string guess = r.string_or("initial_guess", "linear");
        if (guess == "linear") {
            cfg.run.initial_guess = InitialGuess::Linear;
        } else if (guess == "random") {
            cfg.run.initial_guess = InitialGuess::Random;
        } else {
            fail("run.initial_guess", "expected \"linear\" or \"random\"");
        }
        r.reject_unknown();
    }
    if (root.has("optimizer")) {
        Block o = root.child("optimizer");
        auto& m = cfg.optimizer.minimizer;
        m.grad_tol = o.number_or("grad_tol", m.grad_tol);
        m.max_iterations = o.unsigned_or("max_iterations", m.max_iterations);
        m.dense_limit = o.unsigned_or("dense_limit", m.dense_limit);
        m.memory = o.unsigned_or("memory", m.memory);
        cfg.optimizer.kkt_tol = o.number_or("kkt_tol", cfg.optimizer.kkt_tol);
        cfg.optimizer.feasibility_tol = o.number_or("feasibility_tol", cfg.optimizer.feasibility_tol);
        require_positive(m.grad_tol, "optimizer.grad_tol");
        require_positive(cfg.optimizer.kkt_tol, "optimizer.kkt_tol");
        o.reject_unknown();
    }
    root.reject_unknown();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

SpaceTimeGrid grid_with_duration(const RunConfig& cfg, double T) {
    const auto& g = cfg.grid_block;
    return SpaceTimeGrid::uniform(g.L, g.R, g.dx, T, g.dt);
}

RareEventSpec build_scenario(const RunConfig& cfg, const SpaceTimeGrid& grid, double x0) {
    if (cfg.scenario.kind == ScenarioKind::Displacement)
        return make_displacement(grid, cfg.wave, x0, cfg.scenario.delta);
    return make_transition(cfg.scenario.kind, grid, cfg.wave, *cfg.scenario.target, cfg.scenario.delta,
                           cfg.scenario.boundary_width);
}

RareEventSpec build_scenario(const RunConfig& cfg) { return build_scenario(cfg, cfg.grid, cfg.scenario.x0); }

}  // namespace shockld
