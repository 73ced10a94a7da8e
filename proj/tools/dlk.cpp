// Copyright 2026 The dlk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// dlk command-line front end: enc, dec and metrics.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "dlk/codec.hpp"
#include "dlk/image_io.hpp"
#include "dlk/metrics.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitFormat = 2;

int exit_code_for(const dlk::Error& e) {
  return e.code() == dlk::ErrorCode::kIo ? kExitIo : kExitFormat;
}

void print_psnr_header() {
  std::cout << "frame\tbytes\tpsnr_y\tpsnr_cb\tpsnr_cr\tpsnr\n";
}

void print_psnr_row(const std::string& label, std::size_t bytes,
                    const dlk::PsnrReport& r) {
  std::cout << label << '\t' << bytes;
  for (int i = 0; i < 3; ++i) {
    std::cout << '\t' << (i < r.planes ? dlk::format_psnr(r.psnr[i]) : "-");
  }
  std::cout << '\t' << dlk::format_psnr(r.weighted) << '\n';
}

// Mean plane MSE over frames, then the same weighting as a single frame.
dlk::PsnrReport pool(const std::vector<dlk::PsnrReport>& reports) {
  dlk::PsnrReport t;
  if (reports.empty()) return t;
  t.planes = reports[0].planes;
  static constexpr double kWeights[3] = {4, 1, 1};
  double num = 0, den = 0;
  for (int i = 0; i < t.planes; ++i) {
    for (const auto& r : reports) t.mse[i] += r.mse[i];
    t.mse[i] /= static_cast<double>(reports.size());
    t.psnr[i] = dlk::psnr_from_mse(t.mse[i]);
    num += kWeights[i] * t.mse[i];
    den += kWeights[i];
  }
  t.weighted_mse = num / den;
  t.weighted = dlk::psnr_from_mse(t.weighted_mse);
  return t;
}

struct EncConfig {
  std::string input, output, dering = "auto";
  int qi = 32;
  int threads = 1;
  bool no_cfl = false;
  bool verbose = false;
};

int run_encode(const EncConfig& cfg) {
  dlk::EncoderOptions opt;
  opt.qi = cfg.qi;
  opt.cfl = !cfg.no_cfl;
  if (cfg.dering == "off") {
    opt.dering_t0 = 0;
  } else if (cfg.dering != "auto") {
    try {
      std::size_t used = 0;
      opt.dering_t0 = std::stoi(cfg.dering, &used);
      if (used != cfg.dering.size()) throw std::invalid_argument(cfg.dering);
    } catch (const std::exception&) {
      std::cerr << "dlk: --dering takes an integer or 'off'\n";
      return kExitFormat;
    }
    if (opt.dering_t0 < 0 || opt.dering_t0 > 255) {
      std::cerr << "dlk: --dering must be in [0, 255]\n";
      return kExitFormat;
    }
  }

  const std::vector<dlk::Image> frames = dlk::load_frames(cfg.input);
  std::vector<dlk::EncodedFrame> out(frames.size());
  std::vector<std::string> errors(frames.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < frames.size();) {
      try {
        out[i] = dlk::encode_frame(frames[i], opt);
      } catch (const dlk::Error& e) {
        errors[i] = e.what();
      }
    }
  };
  const int n = std::clamp(cfg.threads, 1, static_cast<int>(std::max<std::size_t>(1, frames.size())));
  std::vector<std::thread> pool_threads;
  for (int t = 1; t < n; ++t) pool_threads.emplace_back(worker);
  worker();
  for (auto& t : pool_threads) t.join();
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (!errors[i].empty()) {
      std::cerr << "dlk: frame " << i << ": " << errors[i] << '\n';
      return kExitFormat;
    }
  }

  std::vector<uint8_t> stream;
  std::vector<dlk::PsnrReport> reports;
  print_psnr_header();
  for (std::size_t i = 0; i < frames.size(); ++i) {
    stream.insert(stream.end(), out[i].bytes.begin(), out[i].bytes.end());
    reports.push_back(dlk::compare_images(frames[i], out[i].reconstruction));
    print_psnr_row(std::to_string(i), out[i].bytes.size(), reports.back());
    if (cfg.verbose) {
      const auto& s = out[i].stats;
      std::cerr << "frame " << i << ": " << frames[i].width << "x"
                << frames[i].height << ", plan " << s.plan_bits << " bits, Y "
                << s.plane_bits[0] << ", Cb " << s.plane_bits[1] << ", Cr "
                << s.plane_bits[2] << ", dering T0 " << s.dering_t0 << " ("
                << s.dering_bits << " bits)\n";
    }
  }
  print_psnr_row("total", stream.size(), pool(reports));
  dlk::write_file(cfg.output, stream);
  return kExitOk;
}

int run_decode(const std::string& input, const std::string& output) {
  const std::vector<uint8_t> bytes = dlk::read_file(input);
  const std::vector<dlk::Image> frames = dlk::decode_sequence(bytes);
  if (frames.empty()) {
    std::cerr << "dlk: empty stream\n";
    return kExitFormat;
  }
  dlk::save_frames(output, frames);
  std::cout << "frames\twidth\theight\n"
            << frames.size() << '\t' << frames[0].width << '\t'
            << frames[0].height << '\n';
  return kExitOk;
}

int run_metrics(const std::string& a, const std::string& b) {
  const std::vector<dlk::Image> fa = dlk::load_frames(a);
  const std::vector<dlk::Image> fb = dlk::load_frames(b);
  if (fa.size() != fb.size()) {
    std::cerr << "dlk: frame counts differ (" << fa.size() << " vs "
              << fb.size() << ")\n";
    return kExitFormat;
  }
  std::vector<dlk::PsnrReport> reports;
  for (std::size_t i = 0; i < fa.size(); ++i) {
    reports.push_back(dlk::compare_images(fa[i], fb[i]));
  }
  std::cout << "frame\tpsnr_y\tpsnr_cb\tpsnr_cr\tpsnr\n";
  auto row = [](const std::string& label, const dlk::PsnrReport& r) {
    std::cout << label;
    for (int i = 0; i < 3; ++i) {
      std::cout << '\t' << (i < r.planes ? dlk::format_psnr(r.psnr[i]) : "-");
    }
    std::cout << '\t' << dlk::format_psnr(r.weighted) << '\n';
  };
  for (std::size_t i = 0; i < reports.size(); ++i) row(std::to_string(i), reports[i]);
  row("total", pool(reports));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dlk still-image codec"};
  app.require_subcommand(1);

  EncConfig enc;
  CLI::App* enc_cmd = app.add_subcommand("enc", "encode Y4M/PGM/PPM to a DLK1 stream");
  enc_cmd->add_option("-q,--qi", enc.qi, "quantizer index")
      ->required()
      ->check(CLI::Range(0, dlk::kMaxQi));
  enc_cmd->add_option("--dering", enc.dering, "dering T0 (0..255), 'off' or 'auto'");
  enc_cmd->add_flag("--no-cfl", enc.no_cfl, "disable chroma-from-luma");
  enc_cmd->add_option("--threads", enc.threads, "frames encoded in parallel")
      ->check(CLI::Range(1, 256));
  enc_cmd->add_flag("-v,--verbose", enc.verbose, "per-frame details on stderr");
  enc_cmd->add_option("-i,--input", enc.input, "input file")->required();
  enc_cmd->add_option("-o,--output", enc.output, "output stream")->required();

  std::string dec_in, dec_out;
  CLI::App* dec_cmd = app.add_subcommand("dec", "decode a DLK1 stream to Y4M/PGM/PPM");
  dec_cmd->add_option("-i,--input", dec_in, "input stream")->required();
  dec_cmd->add_option("-o,--output", dec_out, "output file")->required();

  std::string ma, mb;
  CLI::App* met_cmd = app.add_subcommand("metrics", "PSNR between two images");
  met_cmd->add_option("a", ma, "reference")->required();
  met_cmd->add_option("b", mb, "distorted")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitFormat;
  }

  try {
    if (*enc_cmd) return run_encode(enc);
    if (*dec_cmd) return run_decode(dec_in, dec_out);
    return run_metrics(ma, mb);
  } catch (const dlk::Error& e) {
    std::cerr << "dlk: " << e.what() << '\n';
    return exit_code_for(e);
  }
}
