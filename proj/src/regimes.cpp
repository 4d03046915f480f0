#include "geomphase/regimes.hpp"

#include <cmath>

#include "geomphase/errors.hpp"

namespace geomphase::regimes {

std::string to_string(TableId table) {
  return table == TableId::kRotatingE ? "rotating-E" : "rotating-B";
}

std::string to_string(CaseId case_id) {
  switch (case_id) {
    case CaseId::kI: return "I";
    case CaseId::kII: return "II";
    case CaseId::kIII: return "III";
    case CaseId::kIV: return "IV";
  }
  return "?";
}

RegimeScales regime_scales(const systems::ParityDoubletSystem& sys, Real ez,
                           Real bz) {
  const auto mix = systems::static_mix(sys, ez, bz);
  RegimeScales s;
  s.mu_bz = std::abs(mix.zeeman_z);
  s.d_ez = std::abs(sys.d0 * ez);
  s.abs_delta1 = std::abs(mix.delta1);
  s.two_b = 2.0 * sys.half_splitting_B;
  return s;
}

namespace {

bool wide(Real lo, Real hi, Real factor) { return hi >= factor * lo; }

RegimeCase make_case(TableId t, CaseId c, const char* ordering,
                     const char* formula) {
  return RegimeCase{t, c, ordering, formula};
}

}  // namespace

std::optional<RegimeCase> classify(TableId table, const RegimeScales& s,
                                   Real separation_factor) {
  if (!(separation_factor > 1.0)) {
    throw ConfigError("separation_factor must exceed 1");
  }
  const Real f = separation_factor;
  if (table == TableId::kRotatingE) {
    if (wide(s.mu_bz, s.abs_delta1, f) && wide(s.mu_bz, s.d_ez, f)) {
      return make_case(table, CaseId::kI, "mu0 Bz << |Delta1|, d0 Ez",
                       "(Eperp/Ez)^2 wT");
    }
    if (wide(s.abs_delta1, s.mu_bz, f) && wide(s.mu_bz, s.d_ez, f)) {
      return make_case(table, CaseId::kII, "|Delta1| << mu0 Bz << d0 Ez",
                       "(Eperp/Ez)^2 (Delta1 / mu0 Bz)^2 wT");
    }
    if (wide(s.d_ez, s.mu_bz, f) && wide(s.mu_bz, s.two_b, f)) {
      return make_case(table, CaseId::kIII, "d0 Ez << mu0 Bz << 2B",
                       "(Eperp/Ez)^2 (d0 Ez / 2B)^2 wT");
    }
    if (wide(s.d_ez, s.mu_bz, f) && wide(s.two_b, s.mu_bz, f)) {
      return make_case(table, CaseId::kIV, "d0 Ez, 2B << mu0 Bz",
                       "(Eperp/Ez)^2 (d0 Ez / mu0 Bz)^2 wT");
    }
    return std::nullopt;
  }
  if (wide(s.abs_delta1, s.two_b, f) && wide(s.two_b, s.mu_bz, f)) {
    return make_case(table, CaseId::kI, "|Delta1| << 2B << mu0 Bz",
                     "(Bperp/Bz)^2 wT");
  }
  if (wide(s.abs_delta1, s.mu_bz, f) && wide(s.mu_bz, s.two_b, f)) {
    return make_case(table, CaseId::kII, "|Delta1| << mu0 Bz << 2B",
                     "(Bperp/Bz)^2 wT");
  }
  if (wide(s.mu_bz, s.abs_delta1, f) && wide(s.abs_delta1, s.two_b, f)) {
    return make_case(table, CaseId::kIII, "mu0 Bz << |Delta1| << 2B",
                     "(mu0 Bperp / Delta1)^2 wT");
  }
  return std::nullopt;
}

Real limiting_phase(const RegimeCase& c,
                    const systems::ParityDoubletSystem& sys, Real ez, Real bz,
                    Real perp_amplitude, Real wt) {
  if (!std::isfinite(perp_amplitude) || !std::isfinite(wt)) {
    throw ConfigError("limiting_phase needs finite inputs");
  }
  const auto mix = systems::static_mix(sys, ez, bz);
  if (c.table == TableId::kRotatingE) {
    if (ez == 0.0) throw ConfigError("rotating-E limits need Ez != 0");
    const Real tilt2 = (perp_amplitude / ez) * (perp_amplitude / ez);
    switch (c.case_id) {
      case CaseId::kI:
        return tilt2 * wt;
      case CaseId::kII: {
        if (mix.zeeman_z == 0.0) {
          throw ConfigError("this limit needs mu0 Bz != 0");
        }
        const Real r = mix.delta1 / mix.zeeman_z;
        return tilt2 * r * r * wt;
      }
      case CaseId::kIII: {
        const Real r = sys.d0 * ez / (2.0 * sys.half_splitting_B);
        return tilt2 * r * r * wt;
      }
      case CaseId::kIV: {
        if (mix.zeeman_z == 0.0) {
          throw ConfigError("this limit needs mu0 Bz != 0");
        }
        const Real r = sys.d0 * ez / mix.zeeman_z;
        return tilt2 * r * r * wt;
      }
    }
    throw ConfigError("unknown rotating-E case");
  }
  switch (c.case_id) {
    case CaseId::kI:
    case CaseId::kII: {
      if (bz == 0.0) throw ConfigError("this limit needs Bz != 0");
      const Real r = perp_amplitude / bz;
      return r * r * wt;
    }
    case CaseId::kIII: {
      if (mix.delta1 == 0.0) {
        throw ConfigError("this limit needs Delta1 != 0");
      }
      const Real r = sys.mu0 * perp_amplitude / mix.delta1;
      return r * r * wt;
    }
    default:
      throw ConfigError("unknown rotating-B case");
  }
}

}  // namespace geomphase::regimes
