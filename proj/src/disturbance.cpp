#include "chemostat/disturbance.hpp"

#include <cmath>
#include <memory>
#include <random>
#include <vector>

namespace chemostat {

std::string to_string(DisturbanceKind kind) {
  switch (kind) {
    case DisturbanceKind::zero: return "zero";
    case DisturbanceKind::exp_decay: return "exp_decay";
    case DisturbanceKind::constant: return "const";
    case DisturbanceKind::random: return "random";
  }
  return "zero";
}

DisturbanceKind disturbance_kind_from_string(const std::string& text) {
  if (text == "zero") return DisturbanceKind::zero;
  if (text == "exp_decay") return DisturbanceKind::exp_decay;
  if (text == "const") return DisturbanceKind::constant;
  if (text == "random") return DisturbanceKind::random;
  throw std::invalid_argument("unknown disturbance kind '" + text +
                              "' (expected zero, exp_decay, const or random)");
}

DisturbanceSpec make_disturbance(const DisturbanceConfig& cfg, double t0, double tf,
                                 double h) {
  if (!(cfg.ubar >= 0.0)) throw AdmissibilityError("ubar must be >= 0");
  const double ubar = cfg.ubar;
  switch (cfg.kind) {
    case DisturbanceKind::zero:
      return DisturbanceSpec::zero(ubar, cfg.mode);

    case DisturbanceKind::exp_decay: {
      if (cfg.channel != 1 && cfg.channel != 2) {
        throw AdmissibilityError("exp_decay channel must be 1 or 2");
      }
      if (std::abs(cfg.amplitude) > ubar) {
        throw AdmissibilityError("exp_decay amplitude exceeds ubar");
      }
      if (!(cfg.rate >= 0.0)) throw AdmissibilityError("exp_decay rate must be >= 0");
      const double amp = cfg.amplitude;
      const double rate = cfg.rate;
      const bool first = cfg.channel == 1;
      return {[=](double t) {
                const double v = amp * std::exp(-rate * (t - t0));
                return first ? Disturbance{v, 0.0} : Disturbance{0.0, v};
              },
              ubar, cfg.mode};
    }

    case DisturbanceKind::constant: {
      if (std::abs(cfg.u1) > ubar || std::abs(cfg.u2) > ubar) {
        throw AdmissibilityError("constant disturbance exceeds ubar");
      }
      const Disturbance u{cfg.u1, cfg.u2};
      return {[u](double) { return u; }, ubar, cfg.mode};
    }

    case DisturbanceKind::random: {
      const double interval = cfg.interval > 0.0 ? cfg.interval : 10.0 * h;
      if (!(interval > 0.0) || !(tf > t0)) {
        throw AdmissibilityError("random disturbance needs a positive interval and horizon");
      }
      const auto count = static_cast<std::size_t>(std::ceil((tf - t0) / interval)) + 1;
      auto table = std::make_shared<std::vector<Disturbance>>(count);
      std::mt19937_64 rng(cfg.seed);
      auto draw = [&] {
        // 53 random mantissa bits in [0, 1), mapped onto [-ubar, ubar].
        const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        return ubar * (2.0 * unit - 1.0);
      };
      for (auto& u : *table) {
        u.u1 = draw();
        u.u2 = draw();
      }
      return {[table, t0, interval](double t) {
                const double pos = (t - t0) / interval + 1e-9;
                std::size_t idx = pos <= 0.0 ? 0 : static_cast<std::size_t>(pos);
                if (idx >= table->size()) idx = table->size() - 1;
                return (*table)[idx];
              },
              ubar, cfg.mode};
    }
  }
  throw std::invalid_argument("unhandled disturbance kind");
}

}  // namespace chemostat
