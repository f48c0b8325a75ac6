// Command-line front end: profile construction, generator sampling, FER/TEP
// simulation campaigns, bound curves, ensemble spectra, the w0 design recipe,
// and small-code oracle cross-checks.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sgmc/decode.hpp"
#include "sgmc/io.hpp"
#include "sgmc/rcu.hpp"
#include "sgmc/simulate.hpp"

using namespace sgmc;

namespace {

struct ProfileArgs {
  std::vector<int> rm;   // r m
  std::vector<int> nu;   // n k w0
  std::string file;
  std::vector<int> widths;
};

void add_profile_options(CLI::App* app, ProfileArgs& args) {
  auto* rm = app->add_option("--rm", args.rm, "RM-derived profile: r m")->expected(2);
  auto* nu = app->add_option("--nu", args.nu, "nearly uniform profile: n k w0")->expected(3);
  auto* file = app->add_option("--profile-file", args.file, "profile file (comma-separated widths)");
  auto* w = app->add_option("--widths", args.widths, "explicit widths");
  rm->excludes(nu)->excludes(file)->excludes(w);
  nu->excludes(file)->excludes(w);
  file->excludes(w);
}

Profile resolve_profile(const ProfileArgs& args) {
  if (!args.rm.empty()) return rm_profile(args.rm[0], args.rm[1]);
  if (!args.nu.empty()) return nu_profile(args.nu[0], args.nu[1], args.nu[2]);
  if (!args.file.empty()) return load_profile(args.file);
  if (!args.widths.empty()) return Profile(args.widths);
  throw CLI::ValidationError("profile", "specify --rm, --nu, --profile-file or --widths");
}

DecoderKind decoder_from(const std::string& s) {
  if (s == "lc-rosd") return DecoderKind::LcRosd;
  if (s == "lc-osd") return DecoderKind::LcOsd;
  if (s == "osd") return DecoderKind::Osd;
  if (s == "ml") return DecoderKind::Ml;
  throw CLI::ValidationError("--decoder", "unknown decoder: " + s);
}

// JSON config for `simulate`; every CLI flag overrides its field.
SimConfig config_from_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config: " + path);
  nlohmann::json j;
  f >> j;
  SimConfig cfg;
  if (j.contains("profile")) {
    const auto& p = j["profile"];
    if (p.contains("rm")) cfg.profile = rm_profile(p["rm"][0], p["rm"][1]);
    else if (p.contains("nu")) cfg.profile = nu_profile(p["nu"][0], p["nu"][1], p["nu"][2]);
    else if (p.contains("file")) cfg.profile = load_profile(p["file"]);
    else if (p.contains("widths")) cfg.profile = Profile(p["widths"].get<std::vector<int>>());
  }
  if (j.contains("code_seed")) cfg.code_seed = j["code_seed"];
  if (j.contains("channel")) cfg.channel = j["channel"] == "bsc" ? ChannelKind::Bsc : ChannelKind::AwgnBpsk;
  if (j.contains("snr_db")) cfg.snr_db = j["snr_db"].get<std::vector<double>>();
  if (j.contains("decoder")) cfg.decoder = decoder_from(j["decoder"]);
  if (j.contains("delta")) cfg.delta = j["delta"];
  if (j.contains("lmax")) cfg.lmax = j["lmax"];
  if (j.contains("order")) cfg.order = j["order"];
  if (j.contains("min_errors")) cfg.min_errors = j["min_errors"];
  if (j.contains("max_frames")) cfg.max_frames = j["max_frames"];
  if (j.contains("master_seed")) cfg.master_seed = j["master_seed"];
  if (j.contains("workers")) cfg.workers = j["workers"];
  return cfg;
}

int cmd_profile(const ProfileArgs& pargs, const std::string& out) {
  const Profile p = resolve_profile(pargs);
  std::printf("n=%d k=%d rate=%.6f\n", p.n(), p.k(), p.rate());
  std::printf("widths: %s\n", format_profile(p).c_str());
  const auto rates = p.partial_rates();
  std::printf("partial rates: ");
  for (std::size_t l = 0; l < rates.size(); ++l)
    std::printf("%s%.4f", l ? "," : "", rates[l]);
  std::printf("\n");
  if (!out.empty()) {
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot open for write: " + out);
    f << format_profile(p) << '\n';
    std::printf("wrote %s\n", out.c_str());
  }
  return 0;
}

int cmd_sample(const ProfileArgs& pargs, std::uint64_t seed, const std::string& out) {
  const SgmcCode code = sample_generator(resolve_profile(pargs), seed);
  std::printf("sampled [%d,%d] generator, seed=%llu, rank=%d\n", code.n(), code.k(),
              static_cast<unsigned long long>(seed), gf2_rank(code.generator));
  if (!out.empty()) {
    save_generator(out, code);
    std::printf("wrote %s\n", out.c_str());
  } else {
    save_generator(std::cout, code);
  }
  return 0;
}

int cmd_simulate(const SimConfig& cfg, const std::string& out) {
  const auto records = run_simulation(cfg);
  Metadata meta = base_metadata();
  meta["profile"] = format_profile(cfg.profile);
  meta["code_seed"] = std::to_string(cfg.code_seed);
  meta["master_seed"] = std::to_string(cfg.master_seed);
  meta["channel"] = cfg.channel == ChannelKind::Bsc ? "bsc" : "awgn";
  meta["decoder"] = decoder_name(cfg.decoder);
  meta["delta"] = std::to_string(cfg.delta);
  meta["lmax"] = std::to_string(cfg.lmax);
  meta["order"] = std::to_string(cfg.order);
  emit_csv(records, meta, std::cout);
  if (!out.empty()) {
    emit_file(records, meta, out);
    std::fprintf(stderr, "wrote %s\n", out.c_str());
  }
  return 0;
}

int cmd_bounds(const BoundConfig& cfg, const std::string& out, const std::string& params) {
  const auto points = run_bounds(cfg);
  Metadata meta = base_metadata();
  meta["profile"] = format_profile(cfg.profile);
  meta["n_outer"] = std::to_string(cfg.rcu.n_outer);
  emit_csv(points, meta, std::cout, params);
  if (!out.empty()) {
    emit_file(points, meta, out, params);
    std::fprintf(stderr, "wrote %s\n", out.c_str());
  }
  return 0;
}

int cmd_spectrum(const ProfileArgs& pargs, const std::vector<int>& random_nk,
                 const std::string& out) {
  WeightSpectrum ws;
  std::string label;
  if (!random_nk.empty()) {
    ws = random_code_spectrum(random_nk[0], random_nk[1]);
    label = "random[" + std::to_string(random_nk[0]) + "," + std::to_string(random_nk[1]) + "]";
  } else {
    const Profile p = resolve_profile(pargs);
    ws = sgmc_spectrum(p);
    label = "sgmc(" + format_profile(p) + ")";
  }
  std::ostream* os = &std::cout;
  std::ofstream f;
  if (!out.empty()) {
    f.open(out);
    if (!f) throw std::runtime_error("cannot open for write: " + out);
    os = &f;
  }
  *os << "# spectrum=" << label << '\n' << "d,A_d\n";
  for (int d = 0; d <= ws.n; ++d)
    *os << d << ',' << format_double(ws.coeff(d)) << '\n';
  if (!out.empty()) std::printf("wrote %s\n", out.c_str());
  return 0;
}

int cmd_design(int n, int k, std::vector<double> targets, double gap_tol,
               std::uint64_t n_outer, std::uint64_t seed) {
  RcuOptions opt;
  opt.n_outer = n_outer;
  opt.seed = seed;
  for (double t : targets) {
    const DesignResult r = design_w0_detailed(n, k, t, gap_tol, opt);
    std::printf("target=%.1e  w0=%d  snr(partialRCU)=%.3f dB  snr(RCU)=%.3f dB  gap=%.3f dB\n",
                t, r.w0, r.snr_partial_db, r.snr_conv_db, r.gap_db);
  }
  return 0;
}

// Small-code cross-checks runnable from the command line.
int cmd_oracle(const std::string& check, int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  int failures = 0;
  if (check == "ml-equivalence") {
    const SgmcCode code = sample_generator(nu_profile(16, 8, 4), seed);
    for (int t = 0; t < trials; ++t) {
      BitVec u(8);
      for (int i = 0; i < 8; ++i) u.set(i, rng() & 1);
      const auto obs = transmit(encode(u, code.generator), ChannelSpec::awgn(0.6), rng());
      const auto a = lc_rosd_decode(code, obs, 8, std::uint64_t{1} << 16);
      const auto b = ml_bruteforce(code.generator, obs);
      if (std::fabs(a.soft_weight - b.soft_weight) > 1e-9) ++failures;
    }
  } else if (check == "ge-equivalence") {
    for (int t = 0; t < trials; ++t) {
      const int k = 2 + static_cast<int>(rng() % 63);
      const int n = k + static_cast<int>(rng() % (129 - k));
      BitMatrix g(k, n);
      for (int r = 0; r < k; ++r) {
        for (int c = 0; c < r; ++c) g.set(r, c, rng() & 1);
        g.set(r, r, true);
        for (int c = k; c < n; ++c) g.set(r, c, rng() & 1);
      }
      auto red = reduce_staircase(g);
      BitMatrix serial = g;
      for (int j = 0; j < k; ++j)
        for (int r = 0; r < k; ++r)
          if (r != j && serial.get(r, j)) serial.row_xor_row(r, j);
      if (!(red.gtilde == serial) || !(matmul(red.transform, g) == red.gtilde)) ++failures;
    }
  } else if (check == "slva-order") {
    for (int t = 0; t < trials; ++t) {
      const int k = 8, delta = 3;
      BitMatrix p1(k, delta);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < delta; ++j) p1.set(i, j, rng() & 1);
      BitVec s0(delta);
      for (int j = 0; j < delta; ++j) s0.set(j, rng() & 1);
      std::vector<double> rel(k + delta);
      for (auto& r : rel) r = (rng() % 10000) / 1000.0;
      TepStream stream(p1, s0, rel);
      double prev = -1;
      for (int i = 0; i < 50 && !stream.exhausted(); ++i) {
        const auto c = stream.next();
        if (c.partial_weight < prev - 1e-12) ++failures;
        prev = c.partial_weight;
      }
    }
  } else if (check == "pep") {
    std::normal_distribution<double> g(3.0, 3.0);
    for (int t = 0; t < trials; ++t) {
      const int m = 10 + static_cast<int>(rng() % 8);
      std::vector<double> lam(m);
      for (auto& l : lam) l = g(rng);
      const double block = 2.0 * g(rng);
      const double exact = pep_exact(lam, block).value();
      const auto dp = pep_exact(lam, block, 0, 0.01);
      if (exact < dp.lower - 1e-12 || exact > dp.upper + 1e-12) ++failures;
    }
  } else {
    throw CLI::ValidationError("--check", "unknown oracle: " + check);
  }
  std::printf("%s: %d/%d trials ok\n", check.c_str(), trials - failures, trials);
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random staircase generator matrix codes: construction, LC-ROSD decoding, bounds"};
  app.require_subcommand(1);

  // profile
  auto* sc_profile = app.add_subcommand("profile", "construct and inspect a profile");
  ProfileArgs prof_args;
  add_profile_options(sc_profile, prof_args);
  std::string prof_out;
  sc_profile->add_option("--out", prof_out, "write the profile file");

  // sample
  auto* sc_sample = app.add_subcommand("sample", "sample a random generator matrix");
  ProfileArgs sample_args;
  add_profile_options(sc_sample, sample_args);
  std::uint64_t sample_seed = 1;
  std::string sample_out;
  sc_sample->add_option("--seed", sample_seed, "code seed");
  sc_sample->add_option("--out", sample_out, "generator file path");

  // simulate
  auto* sc_sim = app.add_subcommand("simulate", "Monte-Carlo FER/TEP campaign");
  ProfileArgs sim_pargs;
  add_profile_options(sc_sim, sim_pargs);
  std::string sim_config, sim_out, sim_decoder, sim_channel;
  std::vector<double> sim_snr;
  std::uint64_t sim_seed = 0, sim_lmax = 0, sim_min_errors = 0, sim_max_frames = 0;
  std::uint64_t sim_code_seed = 0;
  int sim_delta = -1, sim_order = -1, sim_workers = -1;
  sc_sim->add_option("--config", sim_config, "JSON config (flags override fields)");
  sc_sim->add_option("--snr", sim_snr, "Eb/N0 list in dB");
  sc_sim->add_option("--decoder", sim_decoder, "lc-rosd | lc-osd | osd | ml");
  sc_sim->add_option("--delta", sim_delta, "extended basis size delta");
  sc_sim->add_option("--lmax", sim_lmax, "TEP budget");
  sc_sim->add_option("--order", sim_order, "OSD order t");
  sc_sim->add_option("--seed", sim_seed, "master seed");
  sc_sim->add_option("--code-seed", sim_code_seed, "generator seed");
  sc_sim->add_option("--channel", sim_channel, "awgn | bsc");
  sc_sim->add_option("--min-errors", sim_min_errors, "stop after this many frame errors");
  sc_sim->add_option("--max-frames", sim_max_frames, "frame budget per SNR point");
  sc_sim->add_option("--workers", sim_workers, "worker threads (0 = all)");
  sc_sim->add_option("--out", sim_out, "output file (.csv or .json)");

  // bounds
  auto* sc_bounds = app.add_subcommand("bounds", "evaluate bound curves");
  ProfileArgs bounds_pargs;
  add_profile_options(sc_bounds, bounds_pargs);
  std::vector<std::string> bound_kinds;
  std::vector<double> bounds_snr;
  std::uint64_t bounds_nouter = 20000, bounds_seed = 1, bounds_code_seed = 1;
  int bonf_count = 1023;
  bool bonf_lowest = false;
  std::string bounds_out;
  sc_bounds->add_option("--kinds", bound_kinds, "UB partialRCU RCU BonferroniLB exponentUB")->required();
  sc_bounds->add_option("--snr", bounds_snr, "Eb/N0 list in dB")->required();
  sc_bounds->add_option("--n-outer", bounds_nouter, "Monte-Carlo samples for RCU bounds");
  sc_bounds->add_option("--seed", bounds_seed, "Monte-Carlo seed");
  sc_bounds->add_option("--code-seed", bounds_code_seed, "code seed for BonferroniLB");
  sc_bounds->add_option("--bonferroni-count", bonf_count, "codeword count for BonferroniLB");
  sc_bounds->add_flag("--bonferroni-lowest-weight", bonf_lowest, "lowest-weight codeword selection");
  sc_bounds->add_option("--out", bounds_out, "output file (.csv or .json)");

  // spectrum
  auto* sc_spec = app.add_subcommand("spectrum", "ensemble weight spectrum CSV");
  ProfileArgs spec_pargs;
  add_profile_options(sc_spec, spec_pargs);
  std::vector<int> spec_random;
  std::string spec_out;
  sc_spec->add_option("--random", spec_random, "totally random code: n k")->expected(2);
  sc_spec->add_option("--out", spec_out, "output CSV path");

  // design-w0
  auto* sc_design = app.add_subcommand("design-w0", "w0 design recipe for NU profiles");
  int design_n = 128, design_k = 64;
  std::vector<double> design_targets{1e-5};
  double design_gap = kDesignGapTolDb;
  std::uint64_t design_nouter = 10000, design_seed = 1;
  sc_design->add_option("--n", design_n, "code length")->required();
  sc_design->add_option("--k", design_k, "code dimension")->required();
  sc_design->add_option("--target", design_targets, "target FER list");
  sc_design->add_option("--gap-tol", design_gap, "gap tolerance in dB");
  sc_design->add_option("--n-outer", design_nouter, "Monte-Carlo samples per bound point");
  sc_design->add_option("--seed", design_seed, "Monte-Carlo seed");

  // oracle
  auto* sc_oracle = app.add_subcommand("oracle", "run a small-code cross-check");
  std::string oracle_check = "ml-equivalence";
  int oracle_trials = 200;
  std::uint64_t oracle_seed = 1;
  sc_oracle->add_option("--check", oracle_check,
                        "ml-equivalence | ge-equivalence | slva-order | pep");
  sc_oracle->add_option("--trials", oracle_trials, "number of trials");
  sc_oracle->add_option("--seed", oracle_seed, "seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sc_profile->parsed()) return cmd_profile(prof_args, prof_out);
    if (sc_sample->parsed()) return cmd_sample(sample_args, sample_seed, sample_out);
    if (sc_sim->parsed()) {
      SimConfig cfg;
      bool have_config = false;
      if (!sim_config.empty()) {
        cfg = config_from_json(sim_config);
        have_config = true;
      }
      if (!have_config || !sim_pargs.rm.empty() || !sim_pargs.nu.empty() ||
          !sim_pargs.file.empty() || !sim_pargs.widths.empty())
        cfg.profile = resolve_profile(sim_pargs);
      if (!sim_snr.empty()) cfg.snr_db = sim_snr;
      if (!sim_decoder.empty()) cfg.decoder = decoder_from(sim_decoder);
      if (!sim_channel.empty())
        cfg.channel = sim_channel == "bsc" ? ChannelKind::Bsc : ChannelKind::AwgnBpsk;
      if (sim_delta >= 0) cfg.delta = sim_delta;
      if (sim_lmax > 0) cfg.lmax = sim_lmax;
      if (sim_order >= 0) cfg.order = sim_order;
      if (sim_seed > 0) cfg.master_seed = sim_seed;
      if (sim_code_seed > 0) cfg.code_seed = sim_code_seed;
      if (sim_min_errors > 0) cfg.min_errors = sim_min_errors;
      if (sim_max_frames > 0) cfg.max_frames = sim_max_frames;
      if (sim_workers >= 0) cfg.workers = sim_workers;
      return cmd_simulate(cfg, sim_out);
    }
    if (sc_bounds->parsed()) {
      BoundConfig cfg;
      cfg.profile = resolve_profile(bounds_pargs);
      cfg.snr_db = bounds_snr;
      for (const auto& s : bound_kinds) cfg.kinds.push_back(bound_kind_from(s));
      cfg.rcu.n_outer = bounds_nouter;
      cfg.rcu.seed = bounds_seed;
      cfg.code_seed = bounds_code_seed;
      cfg.bonferroni_count = bonf_count;
      cfg.bonferroni_lowest_weight = bonf_lowest;
      std::string params = "n_outer=" + std::to_string(bounds_nouter) +
                           ";bonferroni_count=" + std::to_string(bonf_count);
      return cmd_bounds(cfg, bounds_out, params);
    }
    if (sc_spec->parsed()) return cmd_spectrum(spec_pargs, spec_random, spec_out);
    if (sc_design->parsed())
      return cmd_design(design_n, design_k, design_targets, design_gap, design_nouter,
                        design_seed);
    if (sc_oracle->parsed()) return cmd_oracle(oracle_check, oracle_trials, oracle_seed);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
