#pragma once

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "flowtopo/claims.hpp"

namespace flowtopo {

/// Minimal JSON document builder. Exists so every numeric output is printed
/// with 17 significant digits (nlohmann::json prints shortest round-trip,
/// which is lossless but not fixed-width); reports must be byte-stable.
class JsonDoc {
  public:
    JsonDoc() : value_(nullptr) {}
    JsonDoc(std::nullptr_t) : value_(nullptr) {}
    JsonDoc(bool b) : value_(b) {}
    JsonDoc(int v) : value_(static_cast<double>(v)) {}
    JsonDoc(std::size_t v) : value_(static_cast<double>(v)) {}
    JsonDoc(double v) : value_(v) {}
    JsonDoc(const char* s) : value_(std::string(s)) {}
    JsonDoc(std::string s) : value_(std::move(s)) {}

    static JsonDoc object() {
        JsonDoc d;
        d.value_ = Object{};
        return d;
    }
    static JsonDoc array() {
        JsonDoc d;
        d.value_ = Array{};
        return d;
    }

    JsonDoc& set(const std::string& key, JsonDoc v);
    JsonDoc& push(JsonDoc v);

    std::string dump(int indent = 2) const;

  private:
    struct Object {
        std::vector<std::pair<std::string, JsonDoc>> items;  // insertion order
    };
    struct Array {
        std::vector<JsonDoc> items;
    };
    std::variant<std::nullptr_t, bool, double, std::string, Object, Array> value_;

    void dump_to(std::string& out, int indent, int depth) const;
};

/// %.17g with a trailing ".0" appended to integral values so JSON consumers
/// see a float where a float is meant.
std::string format_double(double v);

/// Writes content via a temp file in the same directory plus rename.
void write_file_atomic(const std::string& path, const std::string& content);

/// CLI-facing run configuration; round-trips losslessly through JSON.
struct RunConfig {
    std::string system = "nose-hoover";
    double Q = 1.0;
    double T = 27.0;
    double R = 100.0;
    double mu = 1.0;
    double omega = 1.0;
    std::string field_file;  // for --system custom

    IntegratorConfig integrator;
    unsigned seed = 0;
    std::string format = "json";  // json or csv
    std::string out_dir = ".";

    SystemParams make_params() const;
    JsonDoc to_json() const;
    static RunConfig from_json_text(const std::string& text);
};

JsonDoc system_params_json(const SystemParams& params);
JsonDoc integrator_config_json(const IntegratorConfig& cfg);

JsonDoc claim_report_json(const ClaimReport& report);
JsonDoc orbit_json(const PeriodicOrbit& orbit, const SystemParams& params);
JsonDoc braid_json(const BraidData& braid);
JsonDoc degree_json(const IndexResult& result, const SystemParams& params);
JsonDoc spectrum_json(const SpectrumClass& spectrum);
JsonDoc fate_json(const Fate& fate);
JsonDoc trajectory_meta_json(const Trajectory& traj, const Fate* fate);
JsonDoc sweep_json(const SweepCurve& curve);
JsonDoc manifold_json(const ManifoldBranch& branch);

}  // namespace flowtopo
