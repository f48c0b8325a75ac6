#pragma once

// Monte-Carlo FER/TEP simulation campaigns and bound curve evaluation.
//
// Frames are keyed by (master seed, snr index, frame index), so a campaign's
// counts are reproducible and independent of the worker count: frames are
// computed in fixed-size batches, and the run stops exactly at the first
// frame index where the error budget is met, discarding any overshoot.

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgmc/bounds.hpp"
#include "sgmc/channel.hpp"
#include "sgmc/code.hpp"
#include "sgmc/decode.hpp"
#include "sgmc/mathutil.hpp"
#include "sgmc/parallel.hpp"
#include "sgmc/rcu.hpp"
#include "sgmc/rng.hpp"
#include "sgmc/spectrum.hpp"

namespace sgmc {

enum class DecoderKind { LcRosd, LcOsd, Osd, Ml };

inline const char* decoder_name(DecoderKind d) {
  switch (d) {
    case DecoderKind::LcRosd: return "lc-rosd";
    case DecoderKind::LcOsd: return "lc-osd";
    case DecoderKind::Osd: return "osd";
    case DecoderKind::Ml: return "ml";
  }
  return "?";
}

struct SimConfig {
  Profile profile;
  std::uint64_t code_seed = 1;
  ChannelKind channel = ChannelKind::AwgnBpsk;
  std::vector<double> snr_db;
  DecoderKind decoder = DecoderKind::LcRosd;
  int delta = 8;
  std::uint64_t lmax = std::uint64_t{1} << 14;
  int order = 2;
  std::uint64_t min_errors = 100;
  std::uint64_t max_frames = 10000000;
  std::uint64_t master_seed = 1;
  int workers = 0;

  void validate() const {
    profile.validate();
    if (snr_db.empty()) throw std::invalid_argument("sim config: snr list is empty");
    if (min_errors < 1) throw std::invalid_argument("sim config: min_errors must be >= 1");
    if (max_frames < 1) throw std::invalid_argument("sim config: max_frames must be >= 1");
    if (decoder == DecoderKind::Ml && profile.k() > 24)
      throw std::invalid_argument("sim config: ml decoder needs k <= 24");
    if (delta < 0 || delta > profile.n() - profile.k())
      throw std::invalid_argument("sim config: delta out of [0, n-k]");
    if (lmax < 1) throw std::invalid_argument("sim config: lmax must be >= 1");
    if (order < 0) throw std::invalid_argument("sim config: order must be >= 0");
  }
};

struct SimRecord {
  double snr_db = 0;
  std::uint64_t frames = 0;
  std::uint64_t frame_errors = 0;
  double fer = 0;
  double fer_ci_low = 0;
  double fer_ci_high = 0;
  double avg_teps = 0;
  double avg_ms = 0;  // informational; excluded from determinism guarantees
  double opt_rate = 0;
};

namespace detail {

struct FrameOutcome {
  bool error = false;
  bool optimal = false;
  std::uint64_t teps = 0;
  double ms = 0;
};

inline FrameOutcome run_frame(const SgmcCode& code, const ChannelSpec& spec,
                              const SimConfig& cfg, std::uint64_t frame_key) {
  BitVec u(code.k());
  rng::Stream msg(rng::derive(frame_key, 1));
  for (int w = 0; w < u.word_count(); ++w) u.set_word(w, msg.next_u64());
  const BitVec c = encode(u, code.generator);
  const SoftObservation obs = transmit(c, spec, rng::derive(frame_key, 2));
  const auto t0 = std::chrono::steady_clock::now();
  DecodeResult res;
  switch (cfg.decoder) {
    case DecoderKind::LcRosd:
      res = lc_rosd_decode(code, obs, cfg.delta, cfg.lmax);
      break;
    case DecoderKind::LcOsd:
      res = lc_osd_decode(code.generator, obs, cfg.delta, cfg.lmax);
      break;
    case DecoderKind::Osd:
      res = osd_decode(code.generator, obs, cfg.order);
      break;
    case DecoderKind::Ml:
      res = ml_bruteforce(code.generator, obs);
      break;
  }
  const auto t1 = std::chrono::steady_clock::now();
  FrameOutcome out;
  out.error = res.message != u;
  out.optimal = res.optimal;
  out.teps = res.teps_examined;
  out.ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return out;
}

}  // namespace detail

inline std::vector<SimRecord> run_simulation(const SimConfig& cfg) {
  cfg.validate();
  const SgmcCode code = sample_generator(cfg.profile, cfg.code_seed);
  const double rate = cfg.profile.rate();
  std::vector<SimRecord> records;
  constexpr std::uint64_t kBatch = 1024;

  for (std::size_t si = 0; si < cfg.snr_db.size(); ++si) {
    const double snr = cfg.snr_db[si];
    const ChannelSpec spec = cfg.channel == ChannelKind::AwgnBpsk
                                 ? ChannelSpec::awgn(sigma_from_ebn0(snr, rate))
                                 : ChannelSpec::bsc(bsc_epsilon_from_ebn0(snr, rate));
    SimRecord rec;
    rec.snr_db = snr;
    double teps_sum = 0, ms_sum = 0, opt_sum = 0;
    std::uint64_t done = 0, errors = 0;
    bool stopped = false;
    std::vector<detail::FrameOutcome> batch(kBatch);
    while (!stopped && done < cfg.max_frames) {
      const std::uint64_t count = std::min(kBatch, cfg.max_frames - done);
      parallel_for(count, cfg.workers, [&](std::uint64_t i) {
        const std::uint64_t fi = done + i;
        batch[i] = detail::run_frame(code, spec, cfg,
                                     rng::derive(cfg.master_seed, si, fi));
      }, 4);
      for (std::uint64_t i = 0; i < count; ++i) {
        const auto& f = batch[i];
        ++done;
        errors += f.error;
        teps_sum += static_cast<double>(f.teps);
        ms_sum += f.ms;
        opt_sum += f.optimal;
        if (errors >= cfg.min_errors) {  // stop exactly here; overshoot discarded
          stopped = true;
          break;
        }
      }
    }
    rec.frames = done;
    rec.frame_errors = errors;
    rec.fer = static_cast<double>(errors) / static_cast<double>(done);
    const Interval ci = wilson_interval(errors, done);
    rec.fer_ci_low = ci.low;
    rec.fer_ci_high = ci.high;
    rec.avg_teps = teps_sum / static_cast<double>(done);
    rec.avg_ms = ms_sum / static_cast<double>(done);
    rec.opt_rate = opt_sum / static_cast<double>(done);
    records.push_back(rec);
  }
  return records;
}

// ---------------------------------------------------------------------------
// Bound curve evaluation.

enum class BoundKind { UnionBound, PartialRcu, ConventionalRcu, BonferroniLb, ExponentUb };

inline const char* bound_kind_name(BoundKind k) {
  switch (k) {
    case BoundKind::UnionBound: return "UB";
    case BoundKind::PartialRcu: return "partialRCU";
    case BoundKind::ConventionalRcu: return "RCU";
    case BoundKind::BonferroniLb: return "BonferroniLB";
    case BoundKind::ExponentUb: return "exponentUB";
  }
  return "?";
}

inline BoundKind bound_kind_from(const std::string& s) {
  if (s == "UB") return BoundKind::UnionBound;
  if (s == "partialRCU") return BoundKind::PartialRcu;
  if (s == "RCU") return BoundKind::ConventionalRcu;
  if (s == "BonferroniLB") return BoundKind::BonferroniLb;
  if (s == "exponentUB") return BoundKind::ExponentUb;
  throw std::invalid_argument("unknown bound kind: " + s);
}

struct BoundConfig {
  Profile profile;
  std::uint64_t code_seed = 1;  // BonferroniLB evaluates a fixed sampled code
  std::vector<double> snr_db;
  std::vector<BoundKind> kinds;
  RcuOptions rcu;
  int bonferroni_count = 1023;
  bool bonferroni_lowest_weight = false;

  void validate() const {
    profile.validate();
    if (snr_db.empty()) throw std::invalid_argument("bound config: snr list is empty");
    if (kinds.empty()) throw std::invalid_argument("bound config: no bound kinds requested");
  }
};

struct BoundPoint {
  double snr_db = 0;
  BoundKind kind = BoundKind::UnionBound;
  double value = 0;
  double ci_low = 0;
  double ci_high = 0;
};

inline std::vector<BoundPoint> run_bounds(const BoundConfig& cfg) {
  cfg.validate();
  const double rate = cfg.profile.rate();
  std::vector<BoundPoint> out;
  WeightSpectrum ws;
  bool have_ws = false;
  SgmcCode code;
  bool have_code = false;
  for (BoundKind kind : cfg.kinds) {
    for (double snr : cfg.snr_db) {
      const double sigma = sigma_from_ebn0(snr, rate);
      BoundPoint pt;
      pt.snr_db = snr;
      pt.kind = kind;
      switch (kind) {
        case BoundKind::UnionBound: {
          if (!have_ws) {
            ws = sgmc_spectrum(cfg.profile);
            have_ws = true;
          }
          pt.value = union_bound(ws, sigma);
          pt.ci_low = pt.ci_high = pt.value;
          break;
        }
        case BoundKind::PartialRcu: {
          const auto est = partial_rcu(cfg.profile, ChannelSpec::awgn(sigma), cfg.rcu);
          pt.value = est.value;
          pt.ci_low = est.ci_low;
          pt.ci_high = est.ci_high;
          break;
        }
        case BoundKind::ConventionalRcu: {
          const auto est =
              conventional_rcu(cfg.profile.n(), cfg.profile.k(), ChannelSpec::awgn(sigma), cfg.rcu);
          pt.value = est.value;
          pt.ci_low = est.ci_low;
          pt.ci_high = est.ci_high;
          break;
        }
        case BoundKind::BonferroniLb: {
          if (!have_code) {
            code = sample_generator(cfg.profile, cfg.code_seed);
            have_code = true;
          }
          BonferroniOptions bopt;
          bopt.count = cfg.bonferroni_count;
          bopt.lowest_weight = cfg.bonferroni_lowest_weight;
          pt.value = bonferroni_lb(code, sigma, bopt);
          pt.ci_low = pt.ci_high = pt.value;
          break;
        }
        case BoundKind::ExponentUb: {
          pt.value = staircase_exponent(cfg.profile, ChannelSpec::awgn(sigma)).fer_bound;
          pt.ci_low = pt.ci_high = pt.value;
          break;
        }
      }
      out.push_back(pt);
    }
  }
  return out;
}

}  // namespace sgmc
