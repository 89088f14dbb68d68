#include "eon/phy.hpp"

#include <cmath>
#include <numbers>

namespace eon {

void PhyParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw PhyError(std::string(name) + " must be positive");
  };
  if (!std::isfinite(tx_power_dbm)) throw PhyError("tx_power_dbm must be finite");
  positive(slot_width_hz, "slot_width_hz");
  positive(attenuation_db_per_km, "attenuation_db_per_km");
  positive(span_length_km, "span_length_km");
  positive(gamma_per_w_per_km, "gamma_per_w_per_km");
  positive(beta2_ps2_per_km, "beta2_ps2_per_km");
  positive(light_frequency_hz, "light_frequency_hz");
  positive(planck, "planck");
  if (!std::isfinite(noise_figure_db)) throw PhyError("noise_figure_db must be finite");
}

double PhyParams::tx_power_w() const { return 1e-3 * db_to_linear(tx_power_dbm); }

double PhyParams::alpha_np_per_m() const {
  return attenuation_db_per_km * std::numbers::ln10 / 10.0 / 1e3;
}

double PhyParams::gamma_per_w_per_m() const { return gamma_per_w_per_km / 1e3; }

double PhyParams::beta2_s2_per_m() const { return beta2_ps2_per_km * 1e-24 / 1e3; }

double PhyParams::phi() const {
  const double g = gamma_per_w_per_m();
  return 3.0 * g * g / (2.0 * std::numbers::pi * alpha_np_per_m() * beta2_s2_per_m());
}

double PhyParams::rho() const {
  return std::numbers::pi * std::numbers::pi * beta2_s2_per_m() / (2.0 * alpha_np_per_m());
}

double db_to_linear(double x_db) { return std::pow(10.0, x_db / 10.0); }

double linear_to_db(double x) {
  if (!(x > 0.0)) throw PhyError("linear_to_db of non-positive value");
  return 10.0 * std::log10(x);
}

double slot_center_frequency(const SlotBlock& block, const PhyParams& params) {
  return params.grid_origin_hz + (block.start + block.width / 2.0) * params.slot_width_hz;
}

Channel make_channel(const SlotBlock& block, double power_w, const PhyParams& params,
                     bool is_jammer) {
  if (block.width < 1) throw PhyError("channel needs a positive width");
  const double bw = block.width * params.slot_width_hz;
  return Channel{slot_center_frequency(block, params), bw, power_w / bw, is_jammer, block};
}

const std::vector<Modulation>& modulation_table() {
  static const std::vector<Modulation> table{
      {"BPSK", 1, 9.0},    {"QPSK", 2, 9.0},    {"8QAM", 3, 12.0},
      {"16QAM", 4, 15.0},  {"32QAM", 5, 18.0},  {"64QAM", 6, 21.0},
  };
  return table;
}

const Modulation& modulation_by_name(const std::string& name) {
  for (const auto& m : modulation_table())
    if (m.name == name) return m;
  throw PhyError("unknown modulation '" + name + "'");
}

double g0_ase(const PhyParams& params) {
  return std::expm1(params.alpha_np_per_m() * params.span_length_m()) *
         db_to_linear(params.noise_figure_db) * params.planck * params.light_frequency_hz;
}

double ase_psd(int total_spans, const PhyParams& params) {
  if (total_spans < 0) throw PhyError("negative span count");
  return total_spans * g0_ase(params);
}

double self_nli_term(const Channel& target, const PhyParams& params) {
  const double g = target.psd;
  return params.phi() * g * g * g *
         std::asinh(params.rho() * target.bandwidth_hz * target.bandwidth_hz);
}

double spacing_log_term(const Channel& target, const Channel& other) {
  const double spacing = std::abs(target.center_frequency_hz - other.center_frequency_hz);
  const double half = other.bandwidth_hz / 2.0;
  // Non-overlap needs spacing >= (bw + bw') / 2; the log only needs spacing > bw'/2
  // but anything closer than the sum of half-widths is a bookkeeping error.
  if (spacing - half - target.bandwidth_hz / 2.0 < -1e-6 * other.bandwidth_hz || spacing <= half)
    throw PhyError("overlapping channels in NLI sum");
  return std::log((spacing + half) / (spacing - half));
}

double cross_nli_term(const Channel& target, const Channel& other, const PhyParams& params) {
  return params.phi() * target.psd * other.psd * other.psd * spacing_log_term(target, other);
}

double jamming_nli_term(const Channel& target, const Channel& jammer, double excess_power_w,
                        const PhyParams& params) {
  const double p = params.tx_power_w();
  const double bw = jammer.bandwidth_hz;
  const double eps = excess_power_w;
  return params.phi() * target.psd * (eps * eps + 2.0 * eps * p) / (bw * bw) *
         spacing_log_term(target, jammer);
}

double inband_jamming_term(const Channel& target, const Channel& jammer, double excess_power_w) {
  const int overlap = target.block.overlap_width(jammer.block);
  if (overlap == 0) return 0.0;
  const double excess_psd = excess_power_w / jammer.bandwidth_hz;
  return excess_psd * static_cast<double>(overlap) / target.block.width;
}

double nli_secure_psd(const Channel& target, std::span<const LinkChannels> per_link,
                      const PhyParams& params) {
  double total = 0.0;
  for (const auto& link : per_link) {
    double per_span = self_nli_term(target, params);
    for (const auto& other : link.channels)
      if (!other.is_jammer) per_span += cross_nli_term(target, other, params);
    total += link.span_count * per_span;
  }
  return total;
}

double jamming_psd(const Channel& target, std::span<const LinkChannels> per_link,
                   double excess_power_w, const PhyParams& params) {
  if (excess_power_w < 0.0) throw PhyError("negative jamming excess power");
  double total = 0.0;
  for (const auto& link : per_link) {
    double per_span = 0.0;
    for (const auto& jammer : link.channels) {
      if (target.block.overlaps(jammer.block)) continue;
      per_span += jamming_nli_term(target, jammer, excess_power_w, params);
    }
    total += link.span_count * per_span;
  }
  return total;
}

double inband_jamming_psd(const Channel& target, std::span<const LinkChannels> per_link,
                          double excess_power_w) {
  double total = 0.0;
  for (const auto& link : per_link)
    for (const auto& jammer : link.channels)
      total += inband_jamming_term(target, jammer, excess_power_w);
  return total;
}

NoiseBreakdown noise_breakdown(const Channel& target, std::span<const RouteLink> route,
                               const JammerState* jammer, const PhyParams& params) {
  if (route.empty()) throw PhyError("SNR of an empty route");
  NoiseBreakdown out;
  int spans = 0;
  std::vector<LinkChannels> secure;
  std::vector<LinkChannels> jammed;
  secure.reserve(route.size());
  for (const auto& link : route) {
    spans += link.span_count;
    secure.push_back(LinkChannels{link.span_count, link.co_channels});
    if (jammer && link.attacked) jammed.push_back(LinkChannels{link.span_count, jammer->channels});
  }
  out.ase = ase_psd(spans, params);
  out.nli = nli_secure_psd(target, secure, params);
  if (jammer) {
    out.jamming = jamming_psd(target, jammed, jammer->excess_power_w, params);
    out.inband = inband_jamming_psd(target, jammed, jammer->excess_power_w);
  }
  return out;
}

double snr(const Channel& target, std::span<const RouteLink> route, const JammerState* jammer,
           const PhyParams& params) {
  return target.psd / noise_breakdown(target, route, jammer, params).total();
}

bool qot_verdict(double snr_linear, const Modulation& modulation) {
  return linear_to_db(snr_linear) >= modulation.snr_threshold_db;
}

}  // namespace eon
