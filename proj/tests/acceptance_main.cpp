// Copyright 2026 The arfdcn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance suite: one criterion per run block, one PASS/FAIL line each,
// nonzero exit if anything fails. Runs standalone (no test framework).

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "arfdcn/attention.h"
#include "arfdcn/checkpoint.h"
#include "arfdcn/conv.h"
#include "arfdcn/layers.h"
#include "arfdcn/manifest.h"
#include "arfdcn/model.h"
#include "arfdcn/msf.h"
#include "arfdcn/objective.h"
#include "arfdcn/ops.h"
#include "arfdcn/rng.h"
#include "arfdcn/synth.h"
#include "arfdcn/trainer.h"
#include "arfdcn/wav.h"

using namespace arfdcn;

namespace {

int g_failures = 0;

void report(int index, bool ok, const std::string& detail) {
  std::cout << "[" << (index < 10 ? " " : "") << index << "] "
            << (ok ? "PASS" : "FAIL") << " " << detail << std::endl;
  if (!ok) ++g_failures;
}

void run_criterion(int index, const std::function<std::pair<bool, std::string>()>& fn) {
  try {
    const auto [ok, detail] = fn();
    report(index, ok, detail);
  } catch (const std::exception& e) {
    report(index, false, std::string("exception: ") + e.what());
  }
}

Tensor random_tensor(Shape shape, Rng& rng, double lo = -1.0, double hi = 1.0,
                     bool requires_grad = true) {
  std::vector<double> data(static_cast<std::size_t>(shape_size(shape)));
  for (double& v : data) v = rng.uniform(lo, hi);
  return Tensor(std::move(shape), std::move(data), requires_grad);
}

// Central finite differences; |a-f| <= atol + rtol*max(|a|,|f|).
bool fd_ok(const std::vector<Tensor>& params,
           const std::function<Tensor()>& make_loss, std::string* why,
           double h = 1e-5, double rtol = 1e-4, double atol = 1e-7) {
  for (Tensor p : params) p.zero_grad();
  backward(make_loss());
  std::vector<std::vector<double>> analytic;
  for (const Tensor& p : params) analytic.push_back(p.grad());
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    Tensor p = params[pi];
    double* data = p.mutable_data();
    for (std::int64_t i = 0; i < p.size(); ++i) {
      const double saved = data[i];
      double fp = 0.0;
      double fm = 0.0;
      {
        NoGradGuard ng;
        data[i] = saved + h;
        fp = make_loss().item();
        data[i] = saved - h;
        fm = make_loss().item();
        data[i] = saved;
      }
      const double fd = (fp - fm) / (2.0 * h);
      const double an = analytic[pi][static_cast<std::size_t>(i)];
      if (std::fabs(an - fd) >
          atol + rtol * std::max(std::fabs(an), std::fabs(fd))) {
        if (why) {
          *why = "param#" + std::to_string(pi) + "[" + std::to_string(i) +
                 "] analytic=" + std::to_string(an) +
                 " fd=" + std::to_string(fd);
        }
        return false;
      }
    }
  }
  return true;
}

void zero_all(Tensor t) {
  std::fill(t.mutable_data(), t.mutable_data() + t.size(), 0.0);
}

void zero_conv(ConvUnit& u) {
  zero_all(u.weight);
  if (u.bias.defined()) zero_all(u.bias);
}

std::int64_t msf_probe_radius(const MsfBlockParams& p, std::int64_t width,
                              std::int64_t len, std::int64_t t0,
                              std::uint64_t seed) {
  NoGradGuard ng;
  Rng rng(seed);
  Tensor x = random_tensor({width, len}, rng, -1, 1, false);
  const Tensor base = msf_block(x, p);
  std::vector<double> bumped = x.to_vector();
  bumped[static_cast<std::size_t>(t0)] += 1.0;
  const Tensor moved = msf_block(Tensor({width, len}, std::move(bumped)), p);
  std::int64_t radius = 0;
  for (std::int64_t c = 0; c < width; ++c) {
    for (std::int64_t t = 0; t < len; ++t) {
      if (base.at(c, t) != moved.at(c, t)) {
        radius = std::max(radius, t > t0 ? t - t0 : t0 - t);
      }
    }
  }
  return radius;
}

double plain_si_sdr(const std::vector<double>& est,
                    const std::vector<double>& ref) {
  return si_sdr(std::span<const double>(est), std::span<const double>(ref));
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::create_directories(dir);
  return dir;
}

std::filesystem::path make_overfit_dataset(const std::filesystem::path& dir,
                                           int count, double seconds) {
  std::ofstream m(dir / "manifest.jsonl");
  for (int i = 0; i < count; ++i) {
    MixtureSpec spec;
    spec.duration_s = seconds;
    spec.sources = {
        SourceSpec::parse("sine:" + std::to_string(300 + 85 * i)),
        SourceSpec::parse("sine:" + std::to_string(750 + 130 * i))};
    spec.sources[0].level_db = -12.0;
    spec.sources[1].level_db = -12.0;
    const MixtureSample s =
        synth_mixture(static_cast<std::uint64_t>(4200 + i), spec);
    const std::string stem = "utt" + std::to_string(i);
    write_wav(dir / (stem + "_mix.wav"), s.mixture, s.sample_rate);
    write_wav(dir / (stem + "_s1.wav"), s.sources[0], s.sample_rate);
    write_wav(dir / (stem + "_s2.wav"), s.sources[1], s.sample_rate);
    m << "{\"id\":\"" << stem << "\",\"mixture\":\"" << stem
      << "_mix.wav\",\"sources\":[\"" << stem << "_s1.wav\",\"" << stem
      << "_s2.wav\"],\"duration\":" << seconds << "}\n";
  }
  m.close();
  return dir / "manifest.jsonl";
}

std::string run_binary(const std::string& args, int* exit_code) {
  const char* bin = std::getenv("ARFDCN_BIN");
  if (!bin) {
    *exit_code = -1;
    return "";
  }
  const auto out_file =
      std::filesystem::temp_directory_path() / "arfdcn_acc_stdout.txt";
  const std::string cmd = std::string(bin) + " " + args + " > " +
                          out_file.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  *exit_code = status == 0 ? 0 : 1;
  std::ifstream in(out_file);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// ---- criteria -------------------------------------------------------------

std::pair<bool, std::string> criterion_parameter_budget() {
  const std::int64_t n = Model::count_params(ModelConfig{});
  const bool ok = n >= 4910000 && n <= 7370000;
  return {ok, "parameter budget: count_params(default) = " + std::to_string(n) +
                  ", window [4910000, 7370000]"};
}

std::pair<bool, std::string> criterion_gradient_suite() {
  Rng rng(90210);
  int instances = 0;
  std::string why;

  auto fail_out = [&](const std::string& what) {
    return std::make_pair(false, "gradient suite failed at " + what + ": " + why);
  };

  for (int k = 0; k < 20; ++k) {  // conv1d
    const std::int64_t ci = rng.uniform_int(1, 3);
    const std::int64_t co = rng.uniform_int(1, 3);
    const std::int64_t kk = rng.uniform_int(1, 4);
    const std::int64_t stride = rng.uniform_int(1, 2);
    const std::int64_t dil = rng.uniform_int(1, 2);
    Conv1dSpec spec;
    spec.in_channels = ci;
    spec.out_channels = co;
    spec.kernel = kk;
    spec.stride = stride;
    spec.dilation = dil;
    spec.pad_left = rng.uniform_int(0, 1);
    spec.pad_right = rng.uniform_int(0, 1);
    spec.has_bias = true;
    const std::int64_t len = spec.effective_kernel() + rng.uniform_int(2, 8);
    Tensor x = random_tensor({ci, len}, rng);
    Tensor w = random_tensor({co, ci, kk}, rng);
    Tensor b = random_tensor({co}, rng);
    if (!fd_ok({x, w, b}, [&] { return sum(square(conv1d(x, w, b, spec))); },
               &why)) {
      return fail_out("conv1d#" + std::to_string(k));
    }
    ++instances;
  }
  for (int k = 0; k < 20; ++k) {  // transposed conv
    const std::int64_t ci = rng.uniform_int(1, 3);
    const std::int64_t co = rng.uniform_int(1, 3);
    const std::int64_t kk = rng.uniform_int(1, 4);
    Conv1dSpec spec;
    spec.in_channels = ci;
    spec.out_channels = co;
    spec.kernel = kk;
    spec.stride = rng.uniform_int(1, 2);
    spec.dilation = rng.uniform_int(1, 2);
    const std::int64_t len = rng.uniform_int(3, 9);
    Tensor y = random_tensor({co, len}, rng);
    Tensor w = random_tensor({co, ci, kk}, rng);
    if (!fd_ok({y, w},
               [&] { return sum(square(conv1d_transposed(y, w, spec))); },
               &why)) {
      return fail_out("conv1d_transposed#" + std::to_string(k));
    }
    ++instances;
  }
  for (int k = 0; k < 20; ++k) {  // GLN
    const std::int64_t c = rng.uniform_int(1, 4);
    const std::int64_t l = rng.uniform_int(2, 8);
    Tensor f = random_tensor({c, l}, rng);
    GlnParams p = GlnParams::init(c);
    for (std::int64_t i = 0; i < c; ++i) {
      p.gamma.mutable_data()[i] = rng.uniform(0.5, 1.5);
      p.beta.mutable_data()[i] = rng.uniform(-0.5, 0.5);
    }
    if (!fd_ok({f, p.gamma, p.beta},
               [&] { return sum(square(gln(f, p))); }, &why)) {
      return fail_out("gln#" + std::to_string(k));
    }
    ++instances;
  }
  for (int k = 0; k < 20; ++k) {  // SMU
    Tensor x = random_tensor({rng.uniform_int(3, 10)}, rng, -2, 2);
    SmuParams p = SmuParams::init();
    p.mu.mutable_data()[0] = rng.uniform(0.5, 2.0);
    if (!fd_ok({x, p.mu}, [&] { return sum(square(smu(x, p))); }, &why)) {
      return fail_out("smu#" + std::to_string(k));
    }
    ++instances;
  }
  for (int k = 0; k < 20; ++k) {  // PReLU
    Tensor x = random_tensor({rng.uniform_int(3, 10)}, rng, -2, 2);
    PreluParams p = PreluParams::init();
    p.a.mutable_data()[0] = rng.uniform(0.05, 0.5);
    if (!fd_ok({x, p.a}, [&] { return sum(square(prelu(x, p))); }, &why)) {
      return fail_out("prelu#" + std::to_string(k));
    }
    ++instances;
  }
  for (int k = 0; k < 20; ++k) {  // pooling, all four variants
    const std::int64_t c = rng.uniform_int(2, 4);
    const std::int64_t l = rng.uniform_int(2, 6);
    Tensor f = random_tensor({c, l}, rng);
    if (!fd_ok({f},
               [&] {
                 return add(add(sum(pool(f, PoolKind::kAvg, PoolAxis::kTime)),
                                sum(pool(f, PoolKind::kMax, PoolAxis::kTime))),
                            add(sum(pool(f, PoolKind::kAvg, PoolAxis::kChannel)),
                                sum(pool(f, PoolKind::kMax, PoolAxis::kChannel))));
               },
               &why)) {
      return fail_out("pool#" + std::to_string(k));
    }
    ++instances;
  }
  for (int k = 0; k < 20; ++k) {  // channel attention
    Rng prng(5000 + static_cast<std::uint64_t>(k));
    ChannelAttentionParams p = ChannelAttentionParams::init(prng);
    const std::int64_t c = rng.uniform_int(2, 5);
    const std::int64_t l = rng.uniform_int(4, 12);
    Tensor f = random_tensor({c, l}, rng);
    if (!fd_ok({f, p.conv5.weight, p.conv5.bias, p.conv21.weight,
                p.conv21.bias},
               [&] { return sum(square(channel_attention(f, p))); }, &why)) {
      return fail_out("attention#" + std::to_string(k));
    }
    ++instances;
  }
  for (int k = 0; k < 20; ++k) {  // MSF block (P=8, B=4, J=2, L=16)
    Rng prng(6000 + static_cast<std::uint64_t>(k));
    MsfBlockParams p = MsfBlockParams::init(8, 4, 2, k % 2 == 0, prng);
    Tensor x = random_tensor({8, 16}, rng);
    std::vector<Tensor> params{x, p.entry.weight, p.entry.bias, p.exit.weight,
                               p.exit.bias};
    for (auto& s : p.stages) {
      params.insert(params.end(), {s.conv.weight, s.conv.bias, s.gln.gamma,
                                   s.gln.beta, s.act.a});
    }
    for (auto& s : p.fusers) {
      params.insert(params.end(), {s.conv.weight, s.conv.bias, s.gln.gamma,
                                   s.gln.beta, s.act.a});
    }
    if (!fd_ok(params, [&] { return sum(square(msf_block(x, p))); }, &why)) {
      return fail_out("msf#" + std::to_string(k));
    }
    ++instances;
  }
  for (int k = 0; k < 20; ++k) {  // SI-SDR
    Tensor est = random_tensor({rng.uniform_int(8, 24)}, rng);
    Tensor ref = random_tensor({est.size()}, rng, -1, 1, false);
    if (!fd_ok({est}, [&] { return si_sdr(est, ref); }, &why)) {
      return fail_out("si_sdr#" + std::to_string(k));
    }
    ++instances;
  }
  return {true, "gradient suite: " + std::to_string(instances) +
                    " random instances across 9 layer kinds, rel err < 1e-4"};
}

std::pair<bool, std::string> criterion_adjoint() {
  Rng rng(31337);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::int64_t in_c = rng.uniform_int(1, 4);
    const std::int64_t out_c = rng.uniform_int(1, 4);
    const std::int64_t kernel = rng.uniform_int(1, 5);
    const std::int64_t stride = rng.uniform_int(1, 3);
    const std::int64_t dilation = rng.uniform_int(1, 3);
    Conv1dSpec spec;
    spec.in_channels = in_c;
    spec.out_channels = out_c;
    spec.kernel = kernel;
    spec.stride = stride;
    spec.dilation = dilation;
    spec.pad_left = rng.uniform_int(0, spec.effective_kernel() - 1);
    spec.pad_right = rng.uniform_int(0, spec.effective_kernel() - 1);
    spec.has_bias = false;
    const std::int64_t min_len = std::max(
        {std::int64_t{1}, spec.effective_kernel() - spec.pad_left - spec.pad_right,
         stride});
    const std::int64_t len = min_len + rng.uniform_int(0, 12);

    NoGradGuard ng;
    Tensor x = random_tensor({in_c, len}, rng, -2, 2, false);
    Tensor w = random_tensor({out_c, in_c, kernel}, rng, -2, 2, false);
    Tensor cx = conv1d(x, w, Tensor(), spec);
    Tensor y = random_tensor({out_c, cx.dim(1)}, rng, -2, 2, false);
    Tensor back = fit_length(conv1d_transposed(y, w, spec), len);

    double lhs = 0.0;
    double rhs = 0.0;
    for (std::int64_t i = 0; i < cx.size(); ++i) lhs += cx[i] * y[i];
    for (std::int64_t i = 0; i < x.size(); ++i) rhs += x[i] * back[i];
    const double rel =
        std::fabs(lhs - rhs) /
        std::max(1.0, std::max(std::fabs(lhs), std::fabs(rhs)));
    worst = std::max(worst, rel);
    if (rel >= 1e-9) {
      return {false, "adjoint identity broke at trial " +
                         std::to_string(trial) + ", rel=" + std::to_string(rel)};
    }
  }
  std::ostringstream msg;
  msg << "adjoint identity over 100 random specs, worst rel " << worst;
  return {true, msg.str()};
}

std::pair<bool, std::string> criterion_residual_identity() {
  Rng rng(777);
  // MSF with zero learned weights must be the identity, bit for bit.
  MsfBlockParams msf = MsfBlockParams::init(64, 32, 5, true, rng);
  zero_conv(msf.entry);
  zero_conv(msf.exit);
  for (auto& s : msf.stages) {
    zero_conv(s.conv);
    zero_all(s.gln.gamma);
    zero_all(s.gln.beta);
  }
  for (auto& s : msf.fusers) {
    zero_conv(s.conv);
    zero_all(s.gln.gamma);
    zero_all(s.gln.beta);
  }
  NoGradGuard ng;
  Tensor x = random_tensor({64, 200}, rng, -2, 2, false);
  Tensor out = msf_block(x, msf);
  for (std::int64_t i = 0; i < x.size(); ++i) {
    if (out[i] != x[i]) {
      return {false, "zero-weight MSF block is not a bit-exact identity at " +
                         std::to_string(i)};
    }
  }

  ChannelAttentionParams attn = ChannelAttentionParams::init(rng);
  zero_conv(attn.conv5);
  zero_conv(attn.conv21);
  Tensor f = random_tensor({64, 200}, rng, -2, 2, false);
  Tensor scaled = channel_attention(f, attn);
  for (std::int64_t i = 0; i < f.size(); ++i) {
    if (std::fabs(scaled[i] - 1.25 * f[i]) > 1e-12 * std::fabs(f[i])) {
      return {false, "zero-weight attention deviates from 1.25*F at " +
                         std::to_string(i)};
    }
  }
  return {true, "residual identities: zero-weight MSF == identity (bit-exact), "
                "zero-weight attention == 1.25*F (<= 1e-12)"};
}

std::pair<bool, std::string> criterion_receptive_field() {
  Rng rng_a(8);
  MsfBlockParams exp_p = MsfBlockParams::init(8, 4, 5, true, rng_a);
  Rng rng_b(8);
  MsfBlockParams flat_p = MsfBlockParams::init(8, 4, 5, false, rng_b);
  const std::int64_t len = 4096;
  const std::int64_t r_exp = msf_probe_radius(exp_p, 8, len, len / 2, 40);
  const std::int64_t r_flat = msf_probe_radius(flat_p, 8, len, len / 2, 40);
  const bool ok = r_exp > r_flat && r_flat > 0;
  return {ok, "receptive field: exponential dilations " + std::to_string(r_exp) +
                  " samples > flat " + std::to_string(r_flat) + " samples"};
}

std::pair<bool, std::string> criterion_si_sdr_oracle() {
  const std::vector<double> est{1, 0, -1};
  const std::vector<double> ref{1, -1, 0};
  const double hand = plain_si_sdr(est, ref);
  if (std::fabs(hand - (-4.771)) > 1e-3) {
    return {false, "hand case returned " + std::to_string(hand)};
  }

  Rng rng(246);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> e(48);
    std::vector<double> r(48);
    for (auto& v : e) v = rng.uniform(-1, 1);
    for (auto& v : r) v = rng.uniform(-1, 1);
    const double base = plain_si_sdr(e, r);
    for (const double c : {0.003, 0.7, 42.0}) {
      std::vector<double> scaled = e;
      for (double& v : scaled) v *= c;
      if (std::fabs(plain_si_sdr(scaled, r) - base) >= 1e-9) {
        return {false, "scale invariance broke at trial " + std::to_string(trial)};
      }
    }
  }

  for (int trial = 0; trial < 50; ++trial) {
    NoGradGuard ng;
    Tensor ests = random_tensor({2, 64}, rng, -1, 1, false);
    Tensor refs = random_tensor({2, 64}, rng, -1, 1, false);
    const PitResult pit = pit_loss(ests, refs);
    // brute-force enumeration over both assignments
    auto row = [&](const Tensor& t, std::int64_t i) {
      const double* b = t.data() + i * 64;
      return std::vector<double>(b, b + 64);
    };
    const double id_mean = (plain_si_sdr(row(ests, 0), row(refs, 0)) +
                            plain_si_sdr(row(ests, 1), row(refs, 1))) /
                           2.0;
    const double sw_mean = (plain_si_sdr(row(ests, 0), row(refs, 1)) +
                            plain_si_sdr(row(ests, 1), row(refs, 0))) /
                           2.0;
    const double best = std::max(id_mean, sw_mean);
    if (pit.mean_si_sdr != best || pit.loss.item() != -best) {
      return {false, "PIT mismatch vs brute force at trial " +
                         std::to_string(trial)};
    }
  }
  return {true, "SI-SDR oracle: hand value -4.771 dB (+-1e-3), scale "
                "invariance < 1e-9 dB, PIT == brute force on 50 cases"};
}

std::pair<bool, std::string> criterion_overfit() {
  const auto dir = scratch_dir("arfdcn_acceptance_overfit");
  const auto manifest_path = make_overfit_dataset(dir, 5, 0.5);
  const Manifest manifest = Manifest::load(manifest_path);

  ModelConfig cfg;
  cfg.enc_channels = 64;
  cfg.sep_channels = 64;
  cfg.bottleneck = 32;
  cfg.msf_stages = 3;
  cfg.num_blocks = 2;
  Model model(cfg, 2024);

  TrainOptions options;
  options.epochs = 100;  // 5 utterances -> 500 AdamW steps total
  options.seed = 2024;
  options.segment_seconds = 0.5;
  options.adamw.lr = 1e-3;
  options.checkpoint_path = dir / "overfit.ckpt";

  const auto start = std::chrono::steady_clock::now();
  const TrainReport report = train(model, manifest, nullptr, options);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (report.aborted_non_finite) {
    return {false, "overfit training aborted: " + report.abort_reason};
  }
  const EvalResult result = evaluate(model, manifest);
  std::ostringstream msg;
  msg << "overfit: training-set SI-SDRi " << result.si_sdri
      << " dB after <= 500 steps (threshold 10 dB, " << wall << " s)";
  return {result.si_sdri >= 10.0, msg.str()};
}

std::pair<bool, std::string> criterion_schedule() {
  TrainState s;
  s.lr = 1e-3;
  lr_plateau(s, 10.0);
  if (s.lr != 1e-3) return {false, "decayed after the first epoch"};
  lr_plateau(s, 9.0);
  if (s.lr != 1e-3) return {false, "decayed after one stagnant epoch"};
  lr_plateau(s, 8.0);
  if (std::fabs(s.lr - 9e-4) > 1e-18) {
    return {false, "lr is " + std::to_string(s.lr) + " after [10,9,8]"};
  }
  return {true, "schedule: scores [10,9,8] drive lr 1e-3 -> 9e-4 at epoch 3"};
}

std::pair<bool, std::string> criterion_end_to_end() {
  ModelConfig cfg;
  cfg.enc_channels = 32;
  cfg.sep_channels = 32;
  cfg.bottleneck = 16;
  cfg.msf_stages = 3;  // L = ceil(161/10) = 17 >= 2^3
  cfg.num_blocks = 2;
  Model model(cfg, 55);
  NoGradGuard ng;
  Rng rng(56);
  for (const std::int64_t t_len : {161, 1000, 32000}) {
    Tensor wave = random_tensor({1, t_len}, rng, -0.9, 0.9, false);
    const Tensor out = model.forward(wave);
    if (out.shape() != Shape{2, t_len}) {
      return {false, "forward(1x" + std::to_string(t_len) + ") returned " +
                         shape_str(out.shape())};
    }
  }

  // checkpoint round trip, bit-exact forward
  const auto dir = scratch_dir("arfdcn_acceptance_e2e");
  Tensor wave = random_tensor({1, 500}, rng, -1, 1, false);
  const Tensor before = model.forward(wave);
  save_checkpoint(dir / "m.ckpt", model, nullptr, CheckpointMeta{});
  Model loaded(cfg, 99);
  load_checkpoint(dir / "m.ckpt", loaded, nullptr);
  const Tensor after = loaded.forward(wave);
  for (std::int64_t i = 0; i < before.size(); ++i) {
    if (before[i] != after[i]) {
      return {false, "checkpoint round trip is not bit-exact"};
    }
  }

  // same-seed training -> byte-identical checkpoints
  const auto data_dir = scratch_dir("arfdcn_acceptance_e2e_data");
  const auto manifest_path = make_overfit_dataset(data_dir, 2, 0.25);
  const Manifest manifest = Manifest::load(manifest_path);
  ModelConfig micro;
  micro.enc_channels = 8;
  micro.sep_channels = 8;
  micro.bottleneck = 4;
  micro.msf_stages = 2;
  micro.num_blocks = 1;
  auto train_once = [&](const std::filesystem::path& ckpt) {
    Model m(micro, 7);
    TrainOptions options;
    options.epochs = 2;
    options.seed = 7;
    options.segment_seconds = 0.25;
    options.checkpoint_path = ckpt;
    train(m, manifest, nullptr, options);
    std::ifstream in(ckpt, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  const std::string bytes_a = train_once(dir / "a.ckpt");
  const std::string bytes_b = train_once(dir / "b.ckpt");
  if (bytes_a.empty() || bytes_a != bytes_b) {
    return {false, "same-seed training checkpoints differ"};
  }
  return {true, "end-to-end: forward shapes (1xT)->(2xT) for T in "
                "{161,1000,32000}, bit-exact checkpoint round trip, "
                "byte-identical same-seed training"};
}

std::pair<bool, std::string> criterion_bench() {
  // The timing protocol: a 4-second input at 8 kHz, 100 timed repeats, mean
  // and stddev reported. Model size is not part of the protocol; a compact
  // config keeps this suite quick. Reference context for the full-size
  // model on a 3.19 GHz desktop-class CPU is about 1.81 s per pass
  // (informational, not asserted).
  const auto dir = scratch_dir("arfdcn_acceptance_bench");
  ModelConfig micro;
  micro.enc_channels = 8;
  micro.sep_channels = 8;
  micro.bottleneck = 4;
  micro.msf_stages = 2;
  micro.num_blocks = 1;
  micro.save(dir / "micro.cfg");

  int exit_code = 0;
  const std::string out = run_binary(
      "bench --config " + (dir / "micro.cfg").string(), &exit_code);
  if (exit_code == -1) {
    return {false, "bench: ARFDCN_BIN not set; run through ctest"};
  }
  if (exit_code != 0) {
    return {false, "bench command exited nonzero"};
  }
  // defaults must be the protocol values: 4 s and 100 repeats
  const bool has_defaults = out.find("\"seconds\":4.0") != std::string::npos &&
                            out.find("\"repeats\":100") != std::string::npos;
  const auto mean_pos = out.find("\"mean_s\":");
  double mean = -1.0;
  if (mean_pos != std::string::npos) {
    mean = std::strtod(out.c_str() + mean_pos + 9, nullptr);
  }
  std::ostringstream msg;
  msg << "bench protocol: defaults 4 s / 100 repeats, mean "
      << mean << " s on this machine (full-size reference ~1.81 s on a "
                 "desktop CPU, informational)";
  return {has_defaults && mean > 0.0, msg.str()};
}

}  // namespace

int main() {
  run_criterion(1, criterion_parameter_budget);
  run_criterion(2, criterion_gradient_suite);
  run_criterion(3, criterion_adjoint);
  run_criterion(4, criterion_residual_identity);
  run_criterion(5, criterion_receptive_field);
  run_criterion(6, criterion_si_sdr_oracle);
  run_criterion(7, criterion_overfit);
  run_criterion(8, criterion_schedule);
  run_criterion(9, criterion_end_to_end);
  run_criterion(10, criterion_bench);

  if (g_failures > 0) {
    std::cout << g_failures << " criterion(s) failed" << std::endl;
    return 1;
  }
  std::cout << "all criteria passed" << std::endl;
  return 0;
}
