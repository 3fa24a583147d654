#pragma once

#include <array>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "wlansim/macsim.hpp"
#include "wlansim/metrics.hpp"
#include "wlansim/network.hpp"
#include "wlansim/policies.hpp"
#include "wlansim/scenario.hpp"

namespace wlansim {

/// Scenario-file problem: syntax, unknown field, or invariant violation.
/// Distinct from runtime failures so the CLI can map it to its own exit code.
class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

using json = nlohmann::json;

inline void expect_keys(const json& obj, const std::string& where,
                        std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed)
      if (key == a) { known = true; break; }
    if (!known) throw ScenarioError(where + ": unknown field \"" + key + "\"");
  }
}

inline double get_number(const json& obj, const std::string& where, const char* key,
                         std::optional<double> fallback = std::nullopt) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    throw ScenarioError(where + ": missing field \"" + key + "\"");
  }
  if (!obj[key].is_number()) throw ScenarioError(where + "." + key + ": expected a number");
  return obj[key].get<double>();
}

inline std::string get_string(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) throw ScenarioError(where + ": missing field \"" + key + "\"");
  if (!obj[key].is_string()) throw ScenarioError(where + "." + key + ": expected a string");
  return obj[key].get<std::string>();
}

inline std::pair<double, double> get_position(const json& obj, const std::string& where) {
  if (!obj.contains("position")) throw ScenarioError(where + ": missing field \"position\"");
  const auto& p = obj["position"];
  if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
    throw ScenarioError(where + ".position: expected [x, y] in meters");
  return {p[0].get<double>(), p[1].get<double>()};
}

inline TrafficProfile parse_traffic(const json& obj, const std::string& where) {
  const std::string type = get_string(obj, where, "type");
  if (type == "video") {
    expect_keys(obj, where, {"type", "fps", "mean_frame_bits", "gop_length",
                             "i_frame_multiplier", "mtu_bytes"});
    VideoProfile v;
    v.fps = get_number(obj, where, "fps", v.fps);
    v.mean_frame_bits = get_number(obj, where, "mean_frame_bits", v.mean_frame_bits);
    v.gop_length = static_cast<int>(get_number(obj, where, "gop_length", v.gop_length));
    v.i_frame_multiplier = get_number(obj, where, "i_frame_multiplier", v.i_frame_multiplier);
    v.mtu_bytes = static_cast<int>(get_number(obj, where, "mtu_bytes", v.mtu_bytes));
    v.validate();
    return v;
  }
  if (type == "cbr") {
    expect_keys(obj, where, {"type", "rate_kbps", "packet_bytes"});
    CbrProfile c;
    c.rate_kbps = get_number(obj, where, "rate_kbps");
    c.packet_bytes = static_cast<int>(get_number(obj, where, "packet_bytes", c.packet_bytes));
    c.validate();
    return c;
  }
  throw ScenarioError(where + ".type: unknown traffic type \"" + type + "\"");
}

}  // namespace detail

inline Scenario parse_scenario(const std::string& text) {
  using detail::expect_keys;
  using detail::get_number;
  using detail::get_string;
  detail::json root;
  try {
    root = detail::json::parse(text);
  } catch (const std::exception& e) {
    throw ScenarioError(std::string("scenario: syntax error: ") + e.what());
  }
  if (!root.is_object()) throw ScenarioError("scenario: expected a JSON object");
  expect_keys(root, "scenario",
              {"name", "radio", "rate_table", "per_model", "aps", "stations", "snr_overrides",
               "associations", "policy", "sim"});

  Scenario sc;
  try {
    if (root.contains("name")) sc.name = get_string(root, "scenario", "name");

    if (root.contains("radio")) {
      const auto& r = root["radio"];
      expect_keys(r, "radio", {"tx_power_dbm", "noise_floor_dbm", "ref_loss_db",
                               "pathloss_exponent"});
      sc.radio.tx_power_dbm = get_number(r, "radio", "tx_power_dbm", sc.radio.tx_power_dbm);
      sc.radio.noise_floor_dbm = get_number(r, "radio", "noise_floor_dbm", sc.radio.noise_floor_dbm);
      sc.radio.ref_loss_db = get_number(r, "radio", "ref_loss_db", sc.radio.ref_loss_db);
      sc.radio.pathloss_exponent =
          get_number(r, "radio", "pathloss_exponent", sc.radio.pathloss_exponent);
    }
    sc.radio.validate();

    if (root.contains("rate_table")) {
      const auto& rt = root["rate_table"];
      if (rt.is_string()) {
        sc.rate_table = RateTable::named(rt.get<std::string>());
      } else if (rt.is_object()) {
        expect_keys(rt, "rate_table", {"tiers"});
        if (!rt.contains("tiers") || !rt["tiers"].is_array())
          throw ScenarioError("rate_table.tiers: expected an array of [min_snr_db, phy_rate_kbps]");
        RateTable table;
        for (const auto& tier : rt["tiers"]) {
          if (!tier.is_array() || tier.size() != 2 || !tier[0].is_number() || !tier[1].is_number())
            throw ScenarioError("rate_table.tiers: expected [min_snr_db, phy_rate_kbps] pairs");
          table.tiers.push_back({tier[0].get<double>(), tier[1].get<double>()});
        }
        sc.rate_table = table;
      } else {
        throw ScenarioError("rate_table: expected a name or an inline table");
      }
    }
    sc.rate_table.validate();

    double midpoint_offset = 5.0, slope = 1.0, ref_bits = 12000.0;
    if (root.contains("per_model")) {
      const auto& pm = root["per_model"];
      expect_keys(pm, "per_model", {"midpoint_offset_db", "slope_per_db", "reference_packet_bits"});
      midpoint_offset = get_number(pm, "per_model", "midpoint_offset_db", midpoint_offset);
      slope = get_number(pm, "per_model", "slope_per_db", slope);
      ref_bits = get_number(pm, "per_model", "reference_packet_bits", ref_bits);
    }
    sc.per_model = PerModel::for_table(sc.rate_table, midpoint_offset, slope, ref_bits);

    if (!root.contains("aps") || !root["aps"].is_array() || root["aps"].empty())
      throw ScenarioError("scenario.aps: expected a non-empty array");
    for (const auto& a : root["aps"]) {
      const std::string where = "aps[" + std::to_string(sc.aps.size()) + "]";
      expect_keys(a, where, {"id", "position", "channel"});
      AccessPoint ap;
      ap.id = get_string(a, where, "id");
      std::tie(ap.x_m, ap.y_m) = detail::get_position(a, where);
      ap.channel = static_cast<int>(get_number(a, where, "channel", 1.0));
      if (ap.channel <= 0) throw ScenarioError(where + ".channel: must be positive");
      for (const auto& other : sc.aps)
        if (other.id == ap.id) throw ScenarioError(where + ": duplicate ap id \"" + ap.id + "\"");
      sc.aps.push_back(ap);
    }

    if (!root.contains("stations") || !root["stations"].is_array())
      throw ScenarioError("scenario.stations: expected an array");
    for (const auto& s : root["stations"]) {
      const std::string where = "stations[" + std::to_string(sc.stations.size()) + "]";
      expect_keys(s, where, {"id", "position", "offered_kbps", "traffic"});
      Station st;
      st.id = get_string(s, where, "id");
      std::tie(st.x_m, st.y_m) = detail::get_position(s, where);
      st.offered_kbps = get_number(s, where, "offered_kbps", 0.0);
      if (st.offered_kbps < 0.0) throw ScenarioError(where + ".offered_kbps: must be >= 0");
      if (s.contains("traffic")) st.traffic = detail::parse_traffic(s["traffic"], where + ".traffic");
      for (const auto& other : sc.stations)
        if (other.id == st.id) throw ScenarioError(where + ": duplicate station id \"" + st.id + "\"");
      sc.stations.push_back(st);
    }

    if (root.contains("snr_overrides")) {
      if (!root["snr_overrides"].is_array())
        throw ScenarioError("scenario.snr_overrides: expected an array");
      std::size_t i = 0;
      for (const auto& o : root["snr_overrides"]) {
        const std::string where = "snr_overrides[" + std::to_string(i++) + "]";
        expect_keys(o, where, {"ap", "station", "snr_db"});
        const std::string ap = get_string(o, where, "ap");
        const std::string station = get_string(o, where, "station");
        sc.ap(ap);
        sc.station(station);
        sc.snr_overrides[{ap, station}] = get_number(o, where, "snr_db");
      }
    }

    if (root.contains("associations")) {
      if (!root["associations"].is_object())
        throw ScenarioError("scenario.associations: expected an object of station -> ap");
      for (const auto& [station, ap] : root["associations"].items()) {
        if (!ap.is_string())
          throw ScenarioError("associations." + station + ": expected an ap id string");
        sc.station(station);
        sc.ap(ap.get<std::string>());
        sc.initial_associations[station] = ap.get<std::string>();
      }
    }

    if (root.contains("policy")) {
      const auto& p = root["policy"];
      expect_keys(p, "policy", {"kind", "beta", "assoc_threshold_db", "max_handoffs"});
      if (p.contains("kind")) sc.policy = policy_kind_from_string(get_string(p, "policy", "kind"));
      sc.policy_params.beta = get_number(p, "policy", "beta", sc.policy_params.beta);
      sc.policy_params.assoc_threshold_db =
          get_number(p, "policy", "assoc_threshold_db", sc.policy_params.assoc_threshold_db);
      sc.policy_params.max_handoffs =
          static_cast<int>(get_number(p, "policy", "max_handoffs", sc.policy_params.max_handoffs));
    }
    sc.policy_params.guard_enabled = sc.policy == PolicyKind::SnrAwareLba;
    sc.policy_params.validate();

    if (root.contains("sim")) {
      const auto& s = root["sim"];
      expect_keys(s, "sim", {"duration_s", "seed", "queue_capacity", "retry_limit",
                             "per_packet_overhead_s"});
      sc.sim.duration_s = get_number(s, "sim", "duration_s", sc.sim.duration_s);
      sc.sim.seed = static_cast<std::uint64_t>(get_number(s, "sim", "seed", 1.0));
      sc.sim.queue_capacity =
          static_cast<int>(get_number(s, "sim", "queue_capacity", sc.sim.queue_capacity));
      sc.sim.retry_limit = static_cast<int>(get_number(s, "sim", "retry_limit", sc.sim.retry_limit));
      sc.sim.per_packet_overhead_s =
          get_number(s, "sim", "per_packet_overhead_s", sc.sim.per_packet_overhead_s);
    }
    sc.sim.validate();
  } catch (const ScenarioError&) {
    throw;
  } catch (const std::exception& e) {
    throw ScenarioError(std::string("scenario: ") + e.what());
  }
  return sc;
}

/// Scenario echo in the same schema parse_scenario accepts.
inline std::string emit_scenario(const Scenario& sc) {
  detail::json root;
  root["name"] = sc.name;
  root["radio"] = {{"tx_power_dbm", sc.radio.tx_power_dbm},
                   {"noise_floor_dbm", sc.radio.noise_floor_dbm},
                   {"ref_loss_db", sc.radio.ref_loss_db},
                   {"pathloss_exponent", sc.radio.pathloss_exponent}};
  detail::json tiers = detail::json::array();
  for (const auto& t : sc.rate_table.tiers)
    tiers.push_back({t.min_snr_db, t.phy_rate_kbps});
  root["rate_table"] = {{"tiers", tiers}};
  root["per_model"] = {
      {"midpoint_offset_db",
       sc.rate_table.tiers.front().min_snr_db - sc.per_model.tiers.front().midpoint_db},
      {"slope_per_db", sc.per_model.tiers.front().slope_per_db},
      {"reference_packet_bits", sc.per_model.reference_packet_bits}};
  root["aps"] = detail::json::array();
  for (const auto& ap : sc.aps)
    root["aps"].push_back(
        {{"id", ap.id}, {"position", {ap.x_m, ap.y_m}}, {"channel", ap.channel}});
  root["stations"] = detail::json::array();
  for (const auto& st : sc.stations) {
    detail::json s = {{"id", st.id}, {"position", {st.x_m, st.y_m}},
                      {"offered_kbps", st.offered_kbps}};
    if (const auto* v = std::get_if<VideoProfile>(&st.traffic))
      s["traffic"] = {{"type", "video"},
                      {"fps", v->fps},
                      {"mean_frame_bits", v->mean_frame_bits},
                      {"gop_length", v->gop_length},
                      {"i_frame_multiplier", v->i_frame_multiplier},
                      {"mtu_bytes", v->mtu_bytes}};
    else if (const auto* c = std::get_if<CbrProfile>(&st.traffic))
      s["traffic"] = {{"type", "cbr"}, {"rate_kbps", c->rate_kbps},
                      {"packet_bytes", c->packet_bytes}};
    root["stations"].push_back(s);
  }
  root["snr_overrides"] = detail::json::array();
  for (const auto& [link, snr] : sc.snr_overrides)
    root["snr_overrides"].push_back(
        {{"ap", link.first}, {"station", link.second}, {"snr_db", snr}});
  root["associations"] = detail::json::object();
  for (const auto& [station, ap] : sc.initial_associations) root["associations"][station] = ap;
  root["policy"] = {{"kind", to_string(sc.policy)},
                    {"beta", sc.policy_params.beta},
                    {"assoc_threshold_db", sc.policy_params.assoc_threshold_db},
                    {"max_handoffs", sc.policy_params.max_handoffs}};
  root["sim"] = {{"duration_s", sc.sim.duration_s},
                 {"seed", static_cast<double>(sc.sim.seed)},
                 {"queue_capacity", sc.sim.queue_capacity},
                 {"retry_limit", sc.sim.retry_limit},
                 {"per_packet_overhead_s", sc.sim.per_packet_overhead_s}};
  return root.dump(2);
}

inline Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("scenario: cannot open \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

// ---------------------------------------------------------------------------
// CSV

struct CsvRow {
  std::string scenario;
  std::string policy;
  std::int64_t seed = 0;  // -1 marks a per-cell median row
  double snr_db = 0.0;
  double offered_kbps = 0.0;
  std::string station;
  QosReport qos;
  std::int64_t handoffs = 0;
};

inline const char* kCsvHeader =
    "scenario,policy,seed,snr_db,offered_kbps,station,throughput_kbps,delay_mean_ms,"
    "delay_p95_ms,packet_jitter_ms,frame_jitter_ms,frame_rate_fps,loss_ratio,psnr_db,handoffs";

namespace detail {

inline std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string csv_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace detail

inline std::string emit_csv(const std::vector<CsvRow>& rows) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += detail::csv_quote(r.scenario);
    out += ',';
    out += detail::csv_quote(r.policy);
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    out += detail::csv_number(r.snr_db);
    out += ',';
    out += detail::csv_number(r.offered_kbps);
    out += ',';
    out += detail::csv_quote(r.station);
    out += ',';
    out += detail::csv_number(r.qos.throughput_kbps);
    out += ',';
    out += detail::csv_number(r.qos.delay_mean_ms);
    out += ',';
    out += detail::csv_number(r.qos.delay_p95_ms);
    out += ',';
    out += detail::csv_number(r.qos.packet_jitter_ms);
    out += ',';
    out += detail::csv_number(r.qos.frame_jitter_ms);
    out += ',';
    out += detail::csv_number(r.qos.frame_rate_fps);
    out += ',';
    out += detail::csv_number(r.qos.loss_ratio);
    out += ',';
    out += detail::csv_number(r.qos.psnr_db);
    out += ',';
    out += std::to_string(r.handoffs);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Experiment runners

enum class ComparisonMode { None, BalancedVsUnbalanced };

struct ExperimentSpec {
  Scenario scenario;
  std::vector<double> snr_axis;
  std::vector<double> load_axis;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  ComparisonMode comparison = ComparisonMode::None;
  int workers = 0;  // 0 = hardware concurrency
};

namespace detail {

inline void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  if (workers == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const auto count = std::min<std::size_t>(n, static_cast<std::size_t>(workers));
  pool.reserve(count);
  for (std::size_t w = 0; w < count; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (auto& t : pool) t.join();
}

inline double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

inline CsvRow median_row(const std::vector<CsvRow>& rows) {
  CsvRow m = rows.front();
  m.seed = -1;
  auto collect = [&](auto member) {
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(r.qos.*member);
    return median(v);
  };
  m.qos.throughput_kbps = collect(&QosReport::throughput_kbps);
  m.qos.delay_mean_ms = collect(&QosReport::delay_mean_ms);
  m.qos.delay_p95_ms = collect(&QosReport::delay_p95_ms);
  m.qos.packet_jitter_ms = collect(&QosReport::packet_jitter_ms);
  m.qos.frame_jitter_ms = collect(&QosReport::frame_jitter_ms);
  m.qos.frame_rate_fps = collect(&QosReport::frame_rate_fps);
  m.qos.loss_ratio = collect(&QosReport::loss_ratio);
  m.qos.psnr_db = collect(&QosReport::psnr_db);
  {
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(static_cast<double>(r.handoffs));
    m.handoffs = static_cast<std::int64_t>(std::llround(median(v)));
  }
  return m;
}

inline std::string cell_tag(const Scenario& sc, double snr, std::optional<double> load) {
  std::string tag = sc.name + "[snr=" + csv_number(snr);
  if (load) tag += ",load=" + csv_number(*load);
  tag += "]";
  return tag;
}

}  // namespace detail

/// Explicit associations from the file, then strongest-SNR association for
/// the rest (LBA policies additionally honor the admission rule).
inline NetworkState build_initial_state(const Scenario& scenario) {
  NetworkState state = initial_state(scenario);
  for (const auto& [station, ap] : scenario.initial_associations)
    state = associate(std::move(state), scenario, station, ap);
  for (const auto& station : scenario.stations) {
    if (state.association.count(station.id)) continue;
    if (scenario.policy == PolicyKind::StrongestSnr) {
      if (auto ap = strongest_snr_associate(station.id, scenario, scenario.policy_params))
        state = associate(std::move(state), scenario, station.id, *ap);
    } else {
      for (const auto& [ap, snr] :
           audible_aps(scenario, station.id, scenario.policy_params.assoc_threshold_db)) {
        if (admission_check(state, ap, scenario.policy_params)) {
          state = associate(std::move(state), scenario, station.id, ap);
          break;
        }
      }
    }
  }
  return state;
}

inline const Station* find_video_station(const Scenario& scenario) {
  const Station* found = nullptr;
  for (const auto& s : scenario.stations)
    if (std::holds_alternative<VideoProfile>(s.traffic)) {
      if (found) throw ScenarioError("scenario: more than one video station");
      found = &s;
    }
  return found;
}

/// One plain run under the scenario's own policy; one row per traffic sink.
inline std::vector<CsvRow> run_single(Scenario scenario, std::optional<std::uint64_t> seed) {
  if (seed) scenario.sim.seed = *seed;
  NetworkState state = build_initial_state(scenario);
  std::vector<Handoff> handoffs;
  if (scenario.policy != PolicyKind::StrongestSnr)
    std::tie(state, handoffs) = rebalance(std::move(state), scenario, scenario.policy_params,
                                          scenario.policy);
  SimResult result = run(scenario, state, scenario.sim);
  result.handoffs = handoffs;

  std::vector<CsvRow> rows;
  for (const auto& station : scenario.stations) {
    if (std::holds_alternative<std::monostate>(station.traffic)) continue;
    std::vector<PacketRecord> records;
    for (const auto& r : result.records)
      if (r.station == station.id) records.push_back(r);
    CsvRow row;
    row.scenario = scenario.name;
    row.policy = to_string(scenario.policy);
    row.seed = static_cast<std::int64_t>(scenario.sim.seed);
    row.snr_db = snr_db(scenario, state.association.at(station.id), station.id);
    row.offered_kbps = station.offered_kbps;
    row.station = station.id;
    row.qos = qos_report(records, scenario.sim.duration_s,
                         std::get_if<VideoProfile>(&station.traffic));
    row.handoffs = static_cast<std::int64_t>(handoffs.size());
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(),
            [](const CsvRow& a, const CsvRow& b) { return a.station < b.station; });
  return rows;
}

/// Exp1 sweep: pin the video link SNR, vary the background load, measure the
/// video sink. One row per (snr, load, seed) plus a median row per cell.
inline std::vector<CsvRow> run_exp1(const ExperimentSpec& spec) {
  if (spec.comparison != ComparisonMode::None)
    throw ScenarioError("exp1: comparison mode must be none");
  if (spec.snr_axis.empty() || spec.load_axis.empty() || spec.seeds.empty())
    throw ScenarioError("exp1: snr axis, load axis and seeds must be non-empty");
  const Station* video = find_video_station(spec.scenario);
  if (!video) throw ScenarioError("exp1: scenario has no video station");
  auto assoc = spec.scenario.initial_associations.find(video->id);
  if (assoc == spec.scenario.initial_associations.end())
    throw ScenarioError("exp1: video station needs an explicit association");
  const ApId video_ap = assoc->second;
  std::vector<const Station*> sinks;
  for (const auto& s : spec.scenario.stations)
    if (std::holds_alternative<CbrProfile>(s.traffic)) sinks.push_back(&s);
  if (sinks.empty()) throw ScenarioError("exp1: scenario has no background CBR sink");

  struct Cell {
    double snr;
    double load;
  };
  std::vector<Cell> cells;
  for (double snr : spec.snr_axis)
    for (double load : spec.load_axis) cells.push_back({snr, load});

  const std::size_t per_cell = spec.seeds.size();
  std::vector<CsvRow> data(cells.size() * per_cell);
  detail::parallel_for(data.size(), spec.workers, [&](std::size_t i) {
    const Cell& cell = cells[i / per_cell];
    const std::uint64_t seed = spec.seeds[i % per_cell];
    Scenario sc = spec.scenario;
    sc.snr_overrides[{video_ap, video->id}] = cell.snr;
    const double share = cell.load / static_cast<double>(sinks.size());
    for (auto& station : sc.stations)
      if (auto* cbr = std::get_if<CbrProfile>(&station.traffic)) {
        cbr->rate_kbps = share;
        station.offered_kbps = share;
      }
    sc.sim.seed = seed;
    NetworkState state = build_initial_state(sc);
    SimResult result = run(sc, state, sc.sim);
    std::vector<PacketRecord> records;
    for (const auto& r : result.records)
      if (r.station == video->id) records.push_back(r);
    CsvRow row;
    row.scenario = detail::cell_tag(sc, cell.snr, cell.load);
    row.policy = "fixed";
    row.seed = static_cast<std::int64_t>(seed);
    row.snr_db = cell.snr;
    row.offered_kbps = video->offered_kbps;
    row.station = video->id;
    row.qos = qos_report(records, sc.sim.duration_s, std::get_if<VideoProfile>(&video->traffic));
    data[i] = std::move(row);
  });

  std::vector<CsvRow> rows;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    std::vector<CsvRow> cell_rows(data.begin() + static_cast<std::ptrdiff_t>(c * per_cell),
                                  data.begin() + static_cast<std::ptrdiff_t>((c + 1) * per_cell));
    rows.insert(rows.end(), cell_rows.begin(), cell_rows.end());
    rows.push_back(detail::median_row(cell_rows));
  }
  return rows;
}

/// Exp2 sweep: for each target-link SNR, compare the unbalanced baseline
/// against LBA and SNR-guarded LBA applied to the same starting state.
inline std::vector<CsvRow> run_exp2(const ExperimentSpec& spec) {
  if (spec.comparison != ComparisonMode::BalancedVsUnbalanced)
    throw ScenarioError("exp2: comparison mode must be balanced-vs-unbalanced");
  if (spec.snr_axis.empty() || spec.seeds.empty())
    throw ScenarioError("exp2: snr axis and seeds must be non-empty");
  if (spec.scenario.aps.size() < 2) throw ScenarioError("exp2: scenario needs at least 2 APs");
  const Station* video = find_video_station(spec.scenario);
  if (!video) throw ScenarioError("exp2: scenario has no video station");
  auto assoc = spec.scenario.initial_associations.find(video->id);
  if (assoc == spec.scenario.initial_associations.end())
    throw ScenarioError("exp2: video station needs an explicit association");
  const ApId source_ap = assoc->second;

  NetworkState base = build_initial_state(spec.scenario);
  {
    auto classes = classify_load(base, spec.scenario.policy_params);
    bool over = false, under = false;
    for (const auto& [ap, cls] : classes) {
      over = over || cls == BalanceClass::Overloaded;
      under = under || cls == BalanceClass::Underloaded;
    }
    if (!over || !under) throw ScenarioError("exp2: base scenario is not unbalanced");
  }
  ApId target_ap;
  for (const auto& ap : spec.scenario.aps) {
    if (ap.id == source_ap) continue;
    if (target_ap.empty() || base.loads_kbps.at(ap.id) < base.loads_kbps.at(target_ap))
      target_ap = ap.id;
  }

  static const char* kTags[3] = {"unbalanced", "lba", "snr-lba"};
  const std::size_t per_point = spec.seeds.size();
  std::vector<std::array<CsvRow, 3>> data(spec.snr_axis.size() * per_point);
  detail::parallel_for(data.size(), spec.workers, [&](std::size_t i) {
    const double target_snr = spec.snr_axis[i / per_point];
    const std::uint64_t seed = spec.seeds[i % per_point];
    Scenario sc = spec.scenario;
    sc.snr_overrides[{target_ap, video->id}] = target_snr;
    sc.sim.seed = seed;
    const NetworkState start = build_initial_state(sc);
    for (int p = 0; p < 3; ++p) {
      NetworkState state = start;
      std::vector<Handoff> handoffs;
      if (p == 1)
        std::tie(state, handoffs) =
            rebalance(std::move(state), sc, sc.policy_params, PolicyKind::Lba);
      else if (p == 2)
        std::tie(state, handoffs) =
            rebalance(std::move(state), sc, sc.policy_params, PolicyKind::SnrAwareLba);
      SimResult result = run(sc, state, sc.sim);
      std::vector<PacketRecord> records;
      for (const auto& r : result.records)
        if (r.station == video->id) records.push_back(r);
      CsvRow row;
      row.scenario = detail::cell_tag(sc, target_snr, std::nullopt);
      row.policy = kTags[p];
      row.seed = static_cast<std::int64_t>(seed);
      row.snr_db = target_snr;
      row.offered_kbps = video->offered_kbps;
      row.station = video->id;
      row.qos = qos_report(records, sc.sim.duration_s, std::get_if<VideoProfile>(&video->traffic));
      row.handoffs = static_cast<std::int64_t>(handoffs.size());
      data[i][p] = std::move(row);
    }
  });

  std::vector<CsvRow> rows;
  for (std::size_t s = 0; s < spec.snr_axis.size(); ++s) {
    for (int p = 0; p < 3; ++p) {
      std::vector<CsvRow> point_rows;
      for (std::size_t k = 0; k < per_point; ++k) point_rows.push_back(data[s * per_point + k][p]);
      rows.insert(rows.end(), point_rows.begin(), point_rows.end());
      rows.push_back(detail::median_row(point_rows));
    }
  }
  return rows;
}

}  // namespace wlansim
