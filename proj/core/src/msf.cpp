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

#include "arfdcn/msf.h"

#include <string>

#include "arfdcn/ops.h"
#include "arfdcn/rng.h"

namespace arfdcn {

namespace {

Conv1dSpec pointwise(std::int64_t in_channels, std::int64_t out_channels) {
  Conv1dSpec spec;
  spec.in_channels = in_channels;
  spec.out_channels = out_channels;
  spec.kernel = 1;
  return spec;
}

}  // namespace

std::int64_t MsfBlockParams::min_input_len() const {
  std::int64_t len = 1;
  for (std::int64_t j = 0; j < num_stages(); ++j) len *= 2;
  return len;
}

MsfBlockParams MsfBlockParams::init(std::int64_t width, std::int64_t bottleneck,
                                    std::int64_t num_stages,
                                    bool exponential_dilations, Rng& rng) {
  if (width < 1 || bottleneck < 1 || num_stages < 1) {
    fail(ErrorKind::kInvalidArgument, "msf: counts must be >= 1");
  }
  MsfBlockParams p;
  p.entry = ConvUnit::init(width, bottleneck, 1, rng);
  std::int64_t dilation = 1;
  for (std::int64_t j = 0; j < num_stages; ++j) {
    Stage s;
    s.conv = ConvUnit::init(bottleneck, bottleneck, p.stage_kernel, rng);
    s.gln = GlnParams::init(bottleneck);
    s.act = PreluParams::init();
    s.dilation = exponential_dilations ? dilation : 1;
    p.stages.push_back(std::move(s));
    dilation *= 2;
  }
  for (std::int64_t j = 0; j + 1 < num_stages; ++j) {
    Stage s;
    s.conv = ConvUnit::init(bottleneck, bottleneck, 1, rng);
    s.gln = GlnParams::init(bottleneck);
    s.act = PreluParams::init();
    p.fusers.push_back(std::move(s));
  }
  p.exit = ConvUnit::init(bottleneck, width, 1, rng);
  return p;
}

Tensor msf_block(const Tensor& x, const MsfBlockParams& p) {
  if (!x.defined() || x.rank() != 2) {
    fail(ErrorKind::kInvalidArgument, "msf_block expects a rank-2 tensor");
  }
  const std::int64_t width = x.dim(0);
  const std::int64_t len = x.dim(1);
  const std::int64_t min_len = p.min_input_len();
  if (len < min_len) {
    fail(ErrorKind::kInputTooShort,
         "input too short for " + std::to_string(p.num_stages()) +
             " stages: length " + std::to_string(len) + " < minimum " +
             std::to_string(min_len));
  }

  const std::int64_t bottleneck = p.entry.weight.dim(0);
  Tensor bottom = conv1d(x, p.entry.weight, p.entry.bias,
                         pointwise(width, bottleneck));

  // Bottom-up pyramid: stage j halves the length of stage j-1.
  std::vector<Tensor> feats;
  feats.reserve(p.stages.size());
  Tensor cur = bottom;
  for (const MsfBlockParams::Stage& s : p.stages) {
    const Conv1dSpec spec =
        Conv1dSpec::same(bottleneck, bottleneck, p.stage_kernel,
                         p.stage_stride, s.dilation, cur.dim(1));
    cur = prelu(gln(conv1d(cur, s.conv.weight, s.conv.bias, spec), s.gln),
                s.act);
    feats.push_back(cur);
  }

  // Top-down fusion of adjacent stages.
  Tensor acc = feats.back();
  for (std::int64_t j = static_cast<std::int64_t>(feats.size()) - 2; j >= 0;
       --j) {
    const MsfBlockParams::Stage& fuser = p.fusers[static_cast<std::size_t>(j)];
    Tensor up = fit_length(upsample2(acc), feats[static_cast<std::size_t>(j)].dim(1));
    Tensor merged = add(feats[static_cast<std::size_t>(j)], up);
    acc = prelu(gln(conv1d(merged, fuser.conv.weight, fuser.conv.bias,
                           pointwise(bottleneck, bottleneck)),
                    fuser.gln),
                fuser.act);
  }

  Tensor restored = fit_length(upsample2(acc), len);
  Tensor out = conv1d(restored, p.exit.weight, p.exit.bias,
                      pointwise(bottleneck, width));
  return add(x, out);
}

FusionStageParams FusionStageParams::init(std::int64_t width, Rng& rng) {
  FusionStageParams p;
  p.conv = ConvUnit::init(width, width, 1, rng);
  p.gln = GlnParams::init(width);
  p.smu = SmuParams::init();
  return p;
}

Tensor fuse_block_inputs(const std::vector<Tensor>& history,
                         const FusionStageParams& p) {
  if (history.empty()) {
    fail(ErrorKind::kEmptyHistory, "fuse_block_inputs: empty history");
  }
  Tensor acc = history.front();
  for (std::size_t i = 1; i < history.size(); ++i) {
    if (history[i].shape() != acc.shape()) {
      fail(ErrorKind::kShapeMismatch,
           "fuse_block_inputs: history entry " + std::to_string(i) +
               " has shape " + shape_str(history[i].shape()) + ", expected " +
               shape_str(acc.shape()));
    }
    acc = add(acc, history[i]);
  }
  const std::int64_t width = acc.dim(0);
  return smu(gln(conv1d(acc, p.conv.weight, p.conv.bias,
                        pointwise(width, width)),
                 p.gln),
             p.smu);
}

}  // namespace arfdcn
