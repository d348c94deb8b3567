#include "heraldsim/config.hpp"

#include <cmath>

namespace heraldsim {

const char* channel_name(Channel c) {
  switch (c) {
    case Channel::herald: return "herald";
    case Channel::idler: return "idler";
    case Channel::idler_b: return "idler_b";
  }
  return "?";
}

namespace {

bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

void check_detector(const DetectorConfig& det, const std::string& prefix,
                    std::vector<std::string>& violations) {
  if (!in_unit_interval(det.efficiency))
    violations.push_back(prefix + ".efficiency out of [0,1]");
  if (!(det.dark_rate >= 0.0))
    violations.push_back(prefix + ".dark_rate must be >= 0");
  if (!(det.dead_time_s >= 0.0))
    violations.push_back(prefix + ".dead_time_s must be >= 0");
}

}  // namespace

ValidationReport validate(const ExperimentConfig& cfg) {
  ValidationReport report;
  auto& v = report.violations;

  if (!(cfg.source.pair_rate > 0.0)) v.push_back("source.pair_rate must be > 0");
  if (!(cfg.source.duration > 0.0)) v.push_back("source.duration must be > 0");
  if (!in_unit_interval(cfg.source.signal_channel_efficiency))
    v.push_back("source.signal_channel_efficiency out of [0,1]");

  if (!in_unit_interval(cfg.sample.transmission))
    v.push_back("sample.transmission out of [0,1]");

  if (!in_unit_interval(cfg.idler_channel.setup_efficiency))
    v.push_back("idler_channel.setup_efficiency out of [0,1]");
  if (!(cfg.idler_channel.delay_s >= 0.0))
    v.push_back("idler_channel.delay_s must be >= 0");

  const auto& sw = cfg.optical_switch;
  if (sw.enabled && !(sw.gate_width_s > 0.0))
    v.push_back("switch.gate_width_s must be > 0 when the switch is enabled");
  if (!(sw.electronic_latency_s >= 0.0))
    v.push_back("switch.electronic_latency_s must be >= 0");
  if (!in_unit_interval(sw.off_state_leakage))
    v.push_back("switch.off_state_leakage out of [0,1]");
  if (!in_unit_interval(sw.on_state_transmission))
    v.push_back("switch.on_state_transmission out of [0,1]");

  check_detector(cfg.herald_detector, "herald_detector", v);
  check_detector(cfg.idler_detector, "idler_detector", v);

  if (!(cfg.coincidence.window_s > 0.0)) v.push_back("coincidence.window_s must be > 0");
  if (!std::isfinite(cfg.coincidence.nominal_offset_s))
    v.push_back("coincidence.nominal_offset_s must be finite");

  if (cfg.repetitions < 2) v.push_back("repetitions must be >= 2");
  if (!(cfg.jitter_std >= 0.0)) v.push_back("jitter_std must be >= 0");

  // Legal but suspicious timing: the heralded photon reaches the switch at
  // delay_s after its herald click, the gate spans [latency, latency + width).
  if (sw.enabled && report.ok()) {
    if (cfg.idler_channel.delay_s < sw.electronic_latency_s) {
      report.warnings.push_back("heralded photon precedes gate opening");
    } else if (cfg.idler_channel.delay_s >= sw.electronic_latency_s + sw.gate_width_s) {
      report.warnings.push_back("heralded photon arrives after gate closes");
    }
    const double mismatch =
        std::abs(cfg.coincidence.nominal_offset_s - cfg.idler_channel.delay_s);
    if (mismatch > cfg.coincidence.window_s / 2.0) {
      report.warnings.push_back(
          "coincidence.nominal_offset_s differs from idler_channel.delay_s by more "
          "than half a window; heralded coincidences will be missed");
    }
  }

  return report;
}

}  // namespace heraldsim
