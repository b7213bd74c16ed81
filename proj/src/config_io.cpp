#include "cqbm/config_io.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cqbm/error.hpp"

namespace cqbm {
namespace {

using json = nlohmann::json;

void flatten(const json& j, const std::string& prefix, std::map<std::string, json>& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    } else {
        out[prefix] = j;
    }
}

class Reader {
public:
    explicit Reader(std::map<std::string, json> kv) : kv_(std::move(kv)) {}

    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    double number(const std::string& key) {
        used_.insert(key);
        auto it = kv_.find(key);
        if (it == kv_.end()) throw Error(ErrorCode::invalid_config, "missing key " + key);
        if (!it->second.is_number()) throw Error(ErrorCode::invalid_config, key + " must be a number");
        return it->second.get<double>();
    }

    double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

    std::optional<double> optional_number(const std::string& key) {
        if (!has(key)) return std::nullopt;
        return number(key);
    }

    std::string text(const std::string& key, const std::string& fallback) {
        used_.insert(key);
        auto it = kv_.find(key);
        if (it == kv_.end()) return fallback;
        if (!it->second.is_string()) throw Error(ErrorCode::invalid_config, key + " must be a string");
        return it->second.get<std::string>();
    }

    std::vector<double> numbers(const std::string& key) {
        used_.insert(key);
        auto it = kv_.find(key);
        if (it == kv_.end() || !it->second.is_array()) return {};
        return it->second.get<std::vector<double>>();
    }

    void reject_unknown() const {
        for (const auto& [k, v] : kv_)
            if (!used_.count(k)) throw Error(ErrorCode::invalid_config, "unknown key " + k);
    }

private:
    std::map<std::string, json> kv_;
    std::set<std::string> used_;
};

OscillatorParams read_oscillator(Reader& r, const std::string& p) {
    OscillatorParams o;
    o.mass = r.number(p + ".mass");
    o.eigenfrequency = r.number(p + ".eigenfrequency");
    o.damping_rate = r.number(p + ".damping_rate", 0.0);
    o.initial_variance = r.optional_number(p + ".initial_variance");
    return o;
}

BathParams read_bath(Reader& r, const std::string& p, double default_cutoff) {
    return {r.number(p + ".temperature"), r.number(p + ".cutoff", default_cutoff)};
}

ForceSpec read_force(Reader& r, const std::string& p, const std::filesystem::path& base) {
    ForceSpec f;
    const std::string kind = r.text(p + ".kind", "zero");
    if (kind == "zero") {
        f.kind = ForceKind::zero;
    } else if (kind == "exponential_step") {
        f.kind = ForceKind::exponential_step;
        f.amplitude = r.optional_number(p + ".amplitude");
        f.amplitude_sign = r.number(p + ".amplitude_sign", 1.0);
        f.onset = r.number(p + ".onset", 0.0);
        f.decay = r.number(p + ".decay", 0.0);
    } else if (kind == "sampled") {
        const std::string csv = r.text(p + ".samples_csv", "");
        if (!csv.empty()) {
            std::filesystem::path path(csv);
            if (path.is_relative() && !base.empty()) path = base / path;
            f = load_sampled_force(path);
        } else {
            f.kind = ForceKind::sampled;
            f.sample_step = r.number(p + ".sample_step");
            f.samples = r.numbers(p + ".samples");
        }
    } else {
        throw Error(ErrorCode::invalid_config, p + ".kind must be zero, exponential_step or sampled");
    }
    return f;
}

void write_force(json& j, const std::string& p, const ForceSpec& f) {
    switch (f.kind) {
        case ForceKind::zero:
            j[p + ".kind"] = "zero";
            break;
        case ForceKind::exponential_step:
            j[p + ".kind"] = "exponential_step";
            if (f.amplitude) j[p + ".amplitude"] = *f.amplitude;
            j[p + ".amplitude_sign"] = f.amplitude_sign;
            j[p + ".onset"] = f.onset;
            j[p + ".decay"] = f.decay;
            break;
        case ForceKind::sampled:
            j[p + ".kind"] = "sampled";
            j[p + ".sample_step"] = f.sample_step;
            j[p + ".samples"] = f.samples;
            break;
    }
}

}  // namespace

SystemConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::invalid_config, std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw Error(ErrorCode::invalid_config, "config must be a JSON object");
    std::map<std::string, json> kv;
    flatten(doc, "", kv);
    Reader r(std::move(kv));

    SystemConfig c;
    c.osc1 = read_oscillator(r, "osc1");
    c.osc2 = read_oscillator(r, "osc2");
    const double default_cutoff = 50.0 * c.osc1.eigenfrequency;
    c.bath1 = read_bath(r, "bath1", default_cutoff);
    c.bath2 = read_bath(r, "bath2", default_cutoff);
    c.coupling_dimensionless = r.number("coupling_dimensionless", 0.0);
    c.force1 = read_force(r, "force1", base_dir);
    c.force2 = read_force(r, "force2", base_dir);
    c.time_grid.t_end = r.number("time_grid.t_end");
    c.time_grid.n_points = static_cast<int>(r.number("time_grid.n_points"));
    r.reject_unknown();
    return c;
}

SystemConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io, "cannot open config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.parent_path());
}

std::string dump_config(const SystemConfig& c) {
    json j = json::object();
    const std::pair<const char*, const OscillatorParams*> osc[] = {{"osc1", &c.osc1}, {"osc2", &c.osc2}};
    for (auto [name, o] : osc) {
        const std::string p(name);
        j[p + ".mass"] = o->mass;
        j[p + ".eigenfrequency"] = o->eigenfrequency;
        j[p + ".damping_rate"] = o->damping_rate;
        if (o->initial_variance) j[p + ".initial_variance"] = *o->initial_variance;
    }
    j["bath1.temperature"] = c.bath1.temperature;
    j["bath1.cutoff"] = c.bath1.cutoff;
    j["bath2.temperature"] = c.bath2.temperature;
    j["bath2.cutoff"] = c.bath2.cutoff;
    j["coupling_dimensionless"] = c.coupling_dimensionless;
    write_force(j, "force1", c.force1);
    write_force(j, "force2", c.force2);
    j["time_grid.t_end"] = c.time_grid.t_end;
    j["time_grid.n_points"] = c.time_grid.n_points;
    return j.dump(2);
}

}  // namespace cqbm
