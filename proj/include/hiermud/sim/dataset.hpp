#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

#include "hiermud/core/bytes.hpp"
#include "hiermud/core/rng.hpp"
#include "hiermud/sim/domains.hpp"
#include "hiermud/sim/passage.hpp"

namespace hiermud::sim {

using json = nlohmann::ordered_json;

// Grid of passages to synthesize: every (bridge, vehicle) pair runs the
// damage cells (undamaged + locations x severities) for trials_per_cell
// trials each.
struct ExperimentGrid {
  std::vector<std::string> bridges = {"B1", "B2"};
  std::vector<std::string> vehicles = {"V1", "V2", "V3"};
  int n_locations = 3;        // damage location classes (quarter-span points)
  int n_severities = 4;       // damage severity classes
  int trials_per_cell = 30;
  double sample_rate_hz = 1600.0;
  double speed_jitter = 0.005;
  double noise_ratio = 0.001;
  double entry_kick_ratio = 0.05;

  int cells() const { return n_locations * n_severities + 1; }
  std::size_t total_trials() const {
    return bridges.size() * vehicles.size() * static_cast<std::size_t>(cells()) *
           static_cast<std::size_t>(trials_per_cell);
  }

  void validate() const {
    if (bridges.empty() || vehicles.empty()) throw std::invalid_argument("empty grid axis");
    if (n_locations < 0 || n_locations > 3 || n_severities < 0 || n_severities > 4)
      throw std::invalid_argument("grid classes out of range");
    if ((n_locations == 0) != (n_severities == 0))
      throw std::invalid_argument("locations and severities must be zero together");
    if (trials_per_cell < 1) throw std::invalid_argument("trials_per_cell must be >= 1");
  }

  static ExperimentGrid paper_grid() { return {}; }
};

inline ExperimentGrid grid_from_json(const json& j) {
  ExperimentGrid g;
  if (j.contains("bridges")) g.bridges = j["bridges"].get<std::vector<std::string>>();
  if (j.contains("vehicles")) g.vehicles = j["vehicles"].get<std::vector<std::string>>();
  if (j.contains("n_locations")) g.n_locations = j["n_locations"].get<int>();
  if (j.contains("n_severities")) g.n_severities = j["n_severities"].get<int>();
  if (j.contains("trials_per_cell")) g.trials_per_cell = j["trials_per_cell"].get<int>();
  if (j.contains("sample_rate_hz")) g.sample_rate_hz = j["sample_rate_hz"].get<double>();
  if (j.contains("speed_jitter")) g.speed_jitter = j["speed_jitter"].get<double>();
  if (j.contains("noise_ratio")) g.noise_ratio = j["noise_ratio"].get<double>();
  if (j.contains("entry_kick_ratio")) g.entry_kick_ratio = j["entry_kick_ratio"].get<double>();
  g.validate();
  return g;
}

// Trial file: 16-byte header (magic "VBI1", u32 channel count, u32 sample
// count, u32 sample rate in Hz), then channel-major float32 little-endian
// samples.
inline std::string encode_trial(const SignalRecord& rec) {
  std::string out;
  out.reserve(16 + 4 * 4 * rec.n_samples());
  out += "VBI1";
  core::put_u32(out, 4);
  core::put_u32(out, static_cast<std::uint32_t>(rec.n_samples()));
  core::put_u32(out, static_cast<std::uint32_t>(rec.sample_rate_hz));
  for (const auto& channel : rec.channels)
    for (double v : channel) core::put_f32(out, static_cast<float>(v));
  return out;
}

inline SignalRecord decode_trial(const std::string& bytes) {
  core::ByteReader r(bytes);
  if (r.raw(4) != "VBI1") throw std::runtime_error("bad trial magic");
  const std::uint32_t n_channels = r.u32();
  const std::uint32_t n_samples = r.u32();
  const std::uint32_t rate = r.u32();
  if (n_channels != 4) throw std::runtime_error("expected 4 channels");
  SignalRecord rec;
  rec.sample_rate_hz = static_cast<double>(rate);
  for (auto& channel : rec.channels) {
    channel.resize(n_samples);
    for (std::uint32_t i = 0; i < n_samples; ++i) channel[i] = static_cast<double>(r.f32());
  }
  return rec;
}

struct ManifestEntry {
  std::string trial_id;
  std::string file;
  std::string bridge_id;
  std::string vehicle_id;
  int location_class = 0;
  int severity_class = 0;
  double severity_q = 0.0;
  double location_l = 0.0;
  int domain_tag = 0;
  std::uint64_t seed = 0;
};

struct Dataset {
  std::filesystem::path root;
  ExperimentGrid grid;
  std::uint64_t seed = 0;
  std::vector<ManifestEntry> entries;

  SignalRecord load(const ManifestEntry& e) const {
    SignalRecord rec = decode_trial(core::read_file((root / e.file).string()));
    rec.trial_id = e.trial_id;
    rec.bridge_id = e.bridge_id;
    rec.vehicle_id = e.vehicle_id;
    rec.domain_tag = e.domain_tag;
    rec.damage.location_class = e.location_class;
    rec.damage.severity_class = e.severity_class;
    rec.damage.severity_q = e.severity_q;
    rec.damage.location_l = e.location_l;
    return rec;
  }
};

inline json manifest_to_json(const Dataset& ds) {
  json j;
  j["format"] = "vbi-dataset";
  j["version"] = 1;
  j["seed"] = ds.seed;
  j["grid"] = {{"bridges", ds.grid.bridges},
               {"vehicles", ds.grid.vehicles},
               {"n_locations", ds.grid.n_locations},
               {"n_severities", ds.grid.n_severities},
               {"trials_per_cell", ds.grid.trials_per_cell},
               {"sample_rate_hz", ds.grid.sample_rate_hz},
               {"speed_jitter", ds.grid.speed_jitter},
               {"noise_ratio", ds.grid.noise_ratio},
               {"entry_kick_ratio", ds.grid.entry_kick_ratio}};
  json trials = json::array();
  for (const auto& e : ds.entries) {
    trials.push_back({{"trial_id", e.trial_id},
                      {"file", e.file},
                      {"bridge", e.bridge_id},
                      {"vehicle", e.vehicle_id},
                      {"location_class", e.location_class},
                      {"severity_class", e.severity_class},
                      {"severity_q", e.severity_q},
                      {"location_l", e.location_l},
                      {"domain", e.domain_tag},
                      {"seed", e.seed}});
  }
  j["trials"] = std::move(trials);
  return j;
}

inline Dataset manifest_from_json(const json& j, const std::filesystem::path& root) {
  Dataset ds;
  ds.root = root;
  ds.seed = j.at("seed").get<std::uint64_t>();
  ds.grid = grid_from_json(j.at("grid"));
  for (const auto& t : j.at("trials")) {
    ManifestEntry e;
    e.trial_id = t.at("trial_id").get<std::string>();
    e.file = t.at("file").get<std::string>();
    e.bridge_id = t.at("bridge").get<std::string>();
    e.vehicle_id = t.at("vehicle").get<std::string>();
    e.location_class = t.at("location_class").get<int>();
    e.severity_class = t.at("severity_class").get<int>();
    e.severity_q = t.at("severity_q").get<double>();
    e.location_l = t.at("location_l").get<double>();
    e.domain_tag = t.at("domain").get<int>();
    e.seed = t.at("seed").get<std::uint64_t>();
    ds.entries.push_back(std::move(e));
  }
  return ds;
}

inline Dataset load_dataset(const std::filesystem::path& dir) {
  const auto manifest_path = dir / "manifest.json";
  json j = json::parse(core::read_file(manifest_path.string()));
  return manifest_from_json(j, dir);
}

// Synthesizes the whole grid into out_dir (one VBI1 file per trial plus
// manifest.json). Trial seeds derive from (seed, bridge, vehicle, cell,
// trial), so generation order cannot change the data. Refuses to overwrite
// an existing manifest unless force is set.
inline Dataset dataset_generate(const ExperimentGrid& grid, const std::filesystem::path& out_dir,
                                std::uint64_t seed, bool force = false) {
  grid.validate();
  const auto manifest_path = out_dir / "manifest.json";
  if (!force && std::filesystem::exists(manifest_path))
    throw std::runtime_error("manifest already exists (use force to overwrite): " +
                             manifest_path.string());
  std::filesystem::create_directories(out_dir / "trials");

  Dataset ds;
  ds.root = out_dir;
  ds.grid = grid;
  ds.seed = seed;

  PassageOptions opt;
  opt.sample_rate_hz = grid.sample_rate_hz;
  opt.speed_jitter = grid.speed_jitter;
  opt.noise_ratio = grid.noise_ratio;
  opt.entry_kick_ratio = grid.entry_kick_ratio;

  int domain = 0;
  for (const auto& bid : grid.bridges) {
    const BridgeConfig bridge = bridge_by_id(bid);
    for (const auto& vid : grid.vehicles) {
      const VehicleConfig vehicle = vehicle_by_id(vid);
      std::vector<std::pair<int, int>> cells = {{0, 0}};
      for (int lc = 1; lc <= grid.n_locations; ++lc)
        for (int sc = 1; sc <= grid.n_severities; ++sc) cells.push_back({lc, sc});
      for (const auto& [lc, sc] : cells) {
        const DamageState damage = damage_for_cell(bridge, lc, sc);
        for (int trial = 0; trial < grid.trials_per_cell; ++trial) {
          const std::uint64_t trial_seed =
              core::derive_seed(seed, "trial", core::hash_str(bid + "/" + vid),
                                static_cast<std::uint64_t>(lc * 8 + sc),
                                static_cast<std::uint64_t>(trial));
          SignalRecord rec = simulate_passage_full(bridge, vehicle, damage, opt, trial_seed).record;
          ManifestEntry e;
          e.trial_id = bid + "_" + vid + "_l" + std::to_string(lc) + "_s" + std::to_string(sc) +
                       "_t" + std::to_string(trial);
          e.file = "trials/" + e.trial_id + ".vbi";
          e.bridge_id = bid;
          e.vehicle_id = vid;
          e.location_class = lc;
          e.severity_class = sc;
          e.severity_q = damage.severity_q;
          e.location_l = damage.location_l;
          e.domain_tag = domain;
          e.seed = trial_seed;
          core::write_file((out_dir / e.file).string(), encode_trial(rec));
          ds.entries.push_back(std::move(e));
        }
      }
    }
    ++domain;
  }
  core::write_file(manifest_path.string(), manifest_to_json(ds).dump(2) + "\n");
  return ds;
}

}  // namespace hiermud::sim
