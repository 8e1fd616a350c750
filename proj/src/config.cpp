#include "cid/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "cid/errors.hpp"

namespace cid {
namespace {

using nlohmann::json;

[[noreturn]] void Fail(std::string_view path, std::string_view message) {
  throw Error(Errc::kConfig, fmt::format("{}: {}", path, message));
}

std::string Join(std::string_view parent, std::string_view key) {
  return parent.empty() ? std::string(key) : fmt::format("{}.{}", parent, key);
}

void RejectUnknown(const json& obj, std::string_view path,
                   const std::set<std::string>& allowed) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) Fail(Join(path, key), "unknown field");
  }
}

const json& RequireObject(const json& doc, std::string_view path) {
  if (!doc.is_object()) Fail(path.empty() ? "<root>" : path, "expected an object");
  return doc;
}

double GetNumber(const json& obj, std::string_view parent, const char* key,
                 std::optional<double> fallback = std::nullopt) {
  const auto path = Join(parent, key);
  if (!obj.contains(key)) {
    if (!fallback) Fail(path, "missing required field");
    return *fallback;
  }
  const auto& v = obj.at(key);
  if (!v.is_number()) Fail(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) Fail(path, "expected a finite number");
  return d;
}

std::uint64_t GetCount(const json& obj, std::string_view parent, const char* key,
                       std::optional<std::uint64_t> fallback = std::nullopt) {
  const auto path = Join(parent, key);
  if (!obj.contains(key)) {
    if (!fallback) Fail(path, "missing required field");
    return *fallback;
  }
  const auto& v = obj.at(key);
  if (!v.is_number_unsigned()) Fail(path, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string GetString(const json& obj, std::string_view parent, const char* key,
                      std::optional<std::string> fallback = std::nullopt) {
  const auto path = Join(parent, key);
  if (!obj.contains(key)) {
    if (!fallback) Fail(path, "missing required field");
    return *fallback;
  }
  const auto& v = obj.at(key);
  if (!v.is_string() || v.get<std::string>().empty()) {
    Fail(path, "expected a nonempty string");
  }
  return v.get<std::string>();
}

std::vector<double> GetNumberArray(const json& v, std::string_view path) {
  if (!v.is_array()) Fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) Fail(fmt::format("{}[{}]", path, i), "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

// Converts domain errors raised by type constructors into config errors with
// the field path attached.
template <typename Fn>
auto Validate(std::string_view path, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() == Errc::kConfig) throw;
    Fail(path, e.what());
  }
}

KnobGrid ParseGrid(const json& doc, Mode mode) {
  const bool election = mode == Mode::kElection;
  const double def_min = election ? -4.0 : -2.0;
  const double def_max = 4.0;
  const double def_step = election ? 0.02 : 0.05;
  if (!doc.contains("grid")) return KnobGrid(def_min, def_max, def_step, 0.0);
  const auto& g = RequireObject(doc.at("grid"), "grid");
  RejectUnknown(g, "grid", {"t_min", "t_max", "step", "t0"});
  const double t_min = GetNumber(g, "grid", "t_min", def_min);
  const double t_max = GetNumber(g, "grid", "t_max", def_max);
  const double step = GetNumber(g, "grid", "step", def_step);
  const double t0 = GetNumber(g, "grid", "t0", 0.0);
  return Validate("grid", [&] { return KnobGrid(t_min, t_max, step, t0); });
}

std::optional<KnobDistribution> ParseKnobDistribution(const json& block,
                                                      std::string_view parent) {
  if (!block.contains("knob_distribution")) return std::nullopt;
  const auto path = Join(parent, "knob_distribution");
  const auto& kd = RequireObject(block.at("knob_distribution"), path);
  RejectUnknown(kd, path, {"support", "weights"});
  if (!kd.contains("support")) Fail(Join(path, "support"), "missing required field");
  auto support = GetNumberArray(kd.at("support"), Join(path, "support"));
  std::vector<double> weights(support.size(), 1.0);
  if (kd.contains("weights")) weights = GetNumberArray(kd.at("weights"), Join(path, "weights"));
  return Validate(path, [&] { return KnobDistribution(support, weights); });
}

ElectionOptions ParseElection(const json& doc) {
  if (!doc.contains("election")) Fail("election", "missing required field");
  const auto& e = RequireObject(doc.at("election"), "election");
  RejectUnknown(e, "election",
                {"x0", "level", "interval_kind", "boundary", "plausible_region",
                 "knob_distribution"});
  ElectionOptions opt;
  opt.x0 = GetNumber(e, "election", "x0");
  opt.level = GetNumber(e, "election", "level", 0.95);
  if (!(opt.level > 0.0 && opt.level < 1.0)) Fail("election.level", "must lie in (0, 1)");
  const auto kind = GetString(e, "election", "interval_kind", "mean-response");
  opt.interval_kind =
      Validate("election.interval_kind", [&] { return ParseIntervalKind(kind); });
  opt.boundary = GetNumber(e, "election", "boundary", 50.0);
  if (e.contains("plausible_region")) {
    const auto v = GetNumberArray(e.at("plausible_region"), "election.plausible_region");
    if (v.size() != 2) Fail("election.plausible_region", "expected [lower, upper]");
    opt.plausible_region = Validate("election.plausible_region", [&] {
      return PlausibleRegion(v[0], v[1], "configured plausible measurement error");
    });
  }
  return opt;
}

LeadOptions ParseLead(const json& doc) {
  if (!doc.contains("lead")) Fail("lead", "missing required field");
  const auto& l = RequireObject(doc.at("lead"), "lead");
  RejectUnknown(l, "lead",
                {"n_total", "levels", "high_cutoff", "m", "threshold", "a", "b",
                 "mechanism", "snapshot_ts", "knob_distribution", "threads"});
  LeadOptions opt;
  opt.n_total = GetCount(l, "lead", "n_total");
  opt.levels = GetCount(l, "lead", "levels", 10);
  if (opt.levels < 2) Fail("lead.levels", "need at least 2 levels");
  opt.high_cutoff = GetCount(l, "lead", "high_cutoff", 3);
  if (opt.high_cutoff < 1 || opt.high_cutoff >= opt.levels) {
    Fail("lead.high_cutoff", "must lie in [1, levels)");
  }
  opt.m = GetCount(l, "lead", "m", 5);
  if (opt.m < 1) Fail("lead.m", "must be >= 1");
  opt.threshold = GetNumber(l, "lead", "threshold", 0.20);
  if (!(opt.threshold > 0.0 && opt.threshold < 1.0)) {
    Fail("lead.threshold", "must lie in (0, 1)");
  }
  opt.a = GetNumber(l, "lead", "a", 1.0);
  opt.b = GetNumber(l, "lead", "b", 1.0);
  if (opt.a < 0.0 || opt.b < 0.0 || (opt.a == 0.0 && opt.b == 0.0)) {
    Fail("lead.a", "cost weights must be >= 0 and not both zero");
  }
  opt.threads = static_cast<unsigned>(GetCount(l, "lead", "threads", 1));

  if (!l.contains("mechanism")) Fail("lead.mechanism", "missing required field");
  const auto& mech = l.at("mechanism");
  if (mech.is_string()) {
    opt.mechanism = MechanismByName(mech.get<std::string>());
    if (opt.mechanism.name == "mar") opt.mechanism = MarMechanism(opt.levels);
  } else {
    opt.mechanism = {"custom", GetNumberArray(mech, "lead.mechanism")};
  }
  if (opt.mechanism.weights.size() != opt.levels) {
    Fail("lead.mechanism", fmt::format("weight vector has length {}, expected {}",
                                       opt.mechanism.weights.size(), opt.levels));
  }
  for (const double w : opt.mechanism.weights) {
    if (!std::isfinite(w)) Fail("lead.mechanism", "weights must be finite");
  }
  if (l.contains("snapshot_ts")) {
    opt.snapshot_ts = GetNumberArray(l.at("snapshot_ts"), "lead.snapshot_ts");
  }
  return opt;
}

}  // namespace

std::string_view ModeName(Mode mode) {
  return mode == Mode::kElection ? "election" : "lead";
}

MnarMechanism MechanismByName(std::string_view name) {
  for (auto& m : BuiltinMechanisms()) {
    if (m.name == name) return m;
  }
  throw Error(Errc::kConfig,
              fmt::format("lead.mechanism: unknown mechanism '{}' (expected accordion, "
                          "parametric, mar or a weight array)",
                          std::string(name)));
}

AnalysisConfig ParseConfig(const nlohmann::json& doc,
                           const std::filesystem::path& base_dir) {
  RequireObject(doc, "");
  RejectUnknown(doc, "",
                {"mode", "dataset", "grid", "seed", "outputs", "election", "lead"});
  AnalysisConfig cfg;
  const auto mode = GetString(doc, "", "mode", "election");
  if (mode == "election") {
    cfg.mode = Mode::kElection;
  } else if (mode == "lead") {
    cfg.mode = Mode::kLead;
  } else {
    Fail("mode", fmt::format("unknown mode '{}' (expected election or lead)", mode));
  }

  std::filesystem::path dataset = GetString(doc, "", "dataset");
  cfg.dataset_path = dataset.is_relative() && !base_dir.empty() ? base_dir / dataset : dataset;
  cfg.grid = ParseGrid(doc, cfg.mode);
  cfg.seed = GetCount(doc, "", "seed", 20240101);

  std::string stem(ModeName(cfg.mode));
  if (cfg.mode == Mode::kElection) {
    cfg.election = ParseElection(doc);
    cfg.knob_distribution = ParseKnobDistribution(doc.at("election"), "election");
  } else {
    cfg.lead = ParseLead(doc);
    cfg.knob_distribution = ParseKnobDistribution(doc.at("lead"), "lead");
    stem += "_" + cfg.lead->mechanism.name;
  }

  cfg.csv_path = stem + "_cid.csv";
  cfg.svg_path = stem + "_cid.svg";
  if (doc.contains("outputs")) {
    const auto& out = RequireObject(doc.at("outputs"), "outputs");
    RejectUnknown(out, "outputs", {"csv", "svg"});
    cfg.csv_path = GetString(out, "outputs", "csv", cfg.csv_path.string());
    cfg.svg_path = GetString(out, "outputs", "svg", cfg.svg_path.string());
  }
  return cfg;
}

AnalysisConfig ParseConfigText(std::string_view text,
                               const std::filesystem::path& base_dir) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::kConfig, fmt::format("<document>: malformed JSON: {}", e.what()));
  }
  return ParseConfig(doc, base_dir);
}

AnalysisConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kConfig, fmt::format("cannot open config '{}'", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseConfigText(buffer.str(), path.parent_path());
}

void ApplyOverrides(AnalysisConfig& cfg, const ConfigOverrides& overrides) {
  if (overrides.seed) cfg.seed = *overrides.seed;
  if (overrides.grid_step) {
    cfg.grid = Validate("--grid-step", [&] {
      return KnobGrid(cfg.grid.t_min(), cfg.grid.t_max(), *overrides.grid_step,
                      cfg.grid.t0());
    });
  }
  if (overrides.out_dir) {
    if (cfg.csv_path.is_relative()) cfg.csv_path = *overrides.out_dir / cfg.csv_path;
    if (cfg.svg_path.is_relative()) cfg.svg_path = *overrides.out_dir / cfg.svg_path;
  }
}

}  // namespace cid
