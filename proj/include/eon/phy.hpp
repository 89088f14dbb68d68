#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "eon/spectrum.hpp"

namespace eon {

class PhyError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Physical constants in the units they are usually quoted in. The SI
/// conversions used by the noise model live in the accessor functions.
struct PhyParams {
  double tx_power_dbm = 0.0;
  double slot_width_hz = 12.5e9;
  double attenuation_db_per_km = 0.2;
  double span_length_km = 100.0;
  double gamma_per_w_per_km = 1.22;
  double beta2_ps2_per_km = 16.0;
  double light_frequency_hz = 1.93e14;
  double noise_figure_db = 6.0;
  double planck = 6.62607015e-34;
  /// Frequency of the lower edge of slot 0. Only differences matter.
  double grid_origin_hz = 0.0;

  void validate() const;

  double tx_power_w() const;
  double alpha_np_per_m() const;
  double gamma_per_w_per_m() const;
  double beta2_s2_per_m() const;
  double span_length_m() const { return span_length_km * 1e3; }
  /// 3 gamma^2 / (2 pi alpha |beta2|), SI.
  double phi() const;
  /// pi^2 |beta2| / (2 alpha), SI.
  double rho() const;
};

double db_to_linear(double x_db);
/// Throws PhyError for x <= 0.
double linear_to_db(double x);

struct Channel {
  double center_frequency_hz = 0.0;
  double bandwidth_hz = 0.0;
  double psd = 0.0;
  bool is_jammer = false;
  /// Spectral extent on the grid; used to detect in-band overlap.
  SlotBlock block{};
};

double slot_center_frequency(const SlotBlock& block, const PhyParams& params);

/// Channel carrying `power_w` spread uniformly over `block`.
Channel make_channel(const SlotBlock& block, double power_w, const PhyParams& params,
                     bool is_jammer = false);

struct Modulation {
  std::string name;
  int bits_per_symbol = 1;
  double snr_threshold_db = 0.0;
};

/// BPSK..64QAM with thresholds 9, 9, 12, 15, 18, 21 dB, ordered by
/// increasing bits per symbol.
const std::vector<Modulation>& modulation_table();
const Modulation& modulation_by_name(const std::string& name);

// ---------------------------------------------------------------------------
// Noise terms. All return PSDs in W/Hz.

/// Per-span ASE PSD, (e^{alpha L} - 1) F h nu.
double g0_ase(const PhyParams& params);
double ase_psd(int total_spans, const PhyParams& params);

/// phi G^3 asinh(rho df^2) for one span.
double self_nli_term(const Channel& target, const PhyParams& params);

/// ln((d + bw'/2) / (d - bw'/2)) with d the centre spacing. Throws PhyError if
/// the spectra overlap.
double spacing_log_term(const Channel& target, const Channel& other);

/// phi G_m G_m'^2 ln(...) for one span.
double cross_nli_term(const Channel& target, const Channel& other, const PhyParams& params);

/// phi G_m (eps^2 + 2 eps P) / bw_j^2 ln(...) for one span, with bw_j the
/// jammer channel bandwidth and P the nominal per-channel power.
double jamming_nli_term(const Channel& target, const Channel& jammer, double excess_power_w,
                        const PhyParams& params);

/// Excess jammer PSD landing inside the target band, weighted by the fraction
/// of the target's bandwidth that overlaps the jammed range. Zero without
/// overlap.
double inband_jamming_term(const Channel& target, const Channel& jammer, double excess_power_w);

/// Channels co-propagating with the target on one link.
struct LinkChannels {
  int span_count = 1;
  std::vector<Channel> channels;
};

/// Secure NLI along a route. Jammer-flagged entries are skipped.
double nli_secure_psd(const Channel& target, std::span<const LinkChannels> per_link,
                      const PhyParams& params);

/// Out-of-band jamming NLI. `per_link` lists only jammer channels present on
/// each link; jammer channels overlapping the target are left to the in-band
/// term.
double jamming_psd(const Channel& target, std::span<const LinkChannels> per_link,
                   double excess_power_w, const PhyParams& params);

/// In-band jamming noise summed over the links in `per_link`.
double inband_jamming_psd(const Channel& target, std::span<const LinkChannels> per_link,
                          double excess_power_w);

/// One link of a route as the SNR estimator sees it.
struct RouteLink {
  int span_count = 1;
  std::vector<Channel> co_channels;
  bool attacked = false;
};

/// Jammer channels and excess power present on every attacked link.
struct JammerState {
  std::vector<Channel> channels;
  double excess_power_w = 0.0;
};

struct NoiseBreakdown {
  double ase = 0.0;
  double nli = 0.0;
  double jamming = 0.0;
  double inband = 0.0;
  double total() const { return ase + nli + jamming + inband; }
};

NoiseBreakdown noise_breakdown(const Channel& target, std::span<const RouteLink> route,
                               const JammerState* jammer, const PhyParams& params);

/// Linear SNR of `target` along `route`. `jammer == nullptr` gives the
/// jammer-free estimate.
double snr(const Channel& target, std::span<const RouteLink> route, const JammerState* jammer,
           const PhyParams& params);

/// Pass iff the SNR in dB reaches the modulation threshold (inclusive).
bool qot_verdict(double snr_linear, const Modulation& modulation);

}  // namespace eon
