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

#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>

#include "dlk/codec.hpp"
#include "dlk/image_io.hpp"
#include "support/test_images.hpp"

namespace dlk {
namespace {

namespace fs = std::filesystem;

const fs::path& work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::path(DLK_TEST_TMP) / "cli";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string path(const std::string& name) { return (work_dir() / name).string(); }

struct Run {
  int rc = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string out = path("stdout.txt");
  const std::string cmd = std::string(DLK_CLI) + " " + args + " >" + out + " 2>" +
                          path("stderr.txt");
  const int status = std::system(cmd.c_str());
  Run r;
  r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  const auto bytes = read_file(out);
  r.out.assign(bytes.begin(), bytes.end());
  return r;
}

// Value of column `col` on the row starting with `label`.
std::string field(const std::string& tsv, const std::string& label, int col) {
  std::istringstream in(tsv);
  for (std::string line; std::getline(in, line);) {
    std::istringstream row(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, '\t')) cells.push_back(cell);
    if (!cells.empty() && cells[0] == label && col < static_cast<int>(cells.size())) {
      return cells[col];
    }
  }
  return "";
}

TEST_CASE("mid-gray pgm smoke test") {
  save_frames(path("gray.pgm"), {Image::make(64, 64, ChromaMode::kMono, 128)});
  const Run e = run("enc -q 32 -i " + path("gray.pgm") + " -o " + path("gray.dlk"));
  REQUIRE(e.rc == 0);
  const Run d = run("dec -i " + path("gray.dlk") + " -o " + path("gray_out.pgm"));
  REQUIRE(d.rc == 0);
  const auto stream = read_file(path("gray.dlk"));
  const Image src = load_frames(path("gray.pgm"))[0];
  CHECK(load_frames(path("gray_out.pgm"))[0] ==
        encode_frame(src, {.qi = 32}).reconstruction);
  CHECK(stream == encode_frame(src, {.qi = 32}).bytes);
}

TEST_CASE("encoder psnr matches metrics") {
  save_frames(path("tex.y4m"), {testing::textured_image(96, 80, 4),
                                testing::textured_image(96, 80, 5)});
  const Run e = run("enc -q 27 --threads 2 -i " + path("tex.y4m") + " -o " + path("tex.dlk"));
  REQUIRE(e.rc == 0);
  REQUIRE(run("dec -i " + path("tex.dlk") + " -o " + path("tex_out.y4m")).rc == 0);
  const Run m = run("metrics " + path("tex.y4m") + " " + path("tex_out.y4m"));
  REQUIRE(m.rc == 0);
  for (const char* row : {"0", "1", "total"}) {
    CHECK(field(e.out, row, 5) == field(m.out, row, 4));
    CHECK_FALSE(field(m.out, row, 4).empty());
  }
  // Thread count does not change the stream.
  REQUIRE(run("enc -q 27 -i " + path("tex.y4m") + " -o " + path("tex1.dlk")).rc == 0);
  CHECK(read_file(path("tex1.dlk")) == read_file(path("tex.dlk")));
}

TEST_CASE("dering off and determinism") {
  save_frames(path("edge.y4m"), {testing::hard_edge_image(64, 64)});
  REQUIRE(run("enc -q 44 --dering off -i " + path("edge.y4m") + " -o " + path("a.dlk")).rc == 0);
  REQUIRE(run("enc -q 44 --dering off -i " + path("edge.y4m") + " -o " + path("b.dlk")).rc == 0);
  const auto a = read_file(path("a.dlk"));
  CHECK(a == read_file(path("b.dlk")));
  CHECK(parse_header(a).dering_t0 == 0);
  REQUIRE(run("enc -q 44 --dering 9 -i " + path("edge.y4m") + " -o " + path("c.dlk")).rc == 0);
  CHECK(parse_header(read_file(path("c.dlk"))).dering_t0 == 9);
}

TEST_CASE("metrics examples") {
  Image a = Image::make(64, 64, ChromaMode::kMono, 100);
  Image b = a;
  b.planes[0].at(10, 20) = 116;
  save_frames(path("m_a.pgm"), {a});
  save_frames(path("m_b.pgm"), {b});
  const Run same = run("metrics " + path("m_a.pgm") + " " + path("m_a.pgm"));
  CHECK(same.rc == 0);
  CHECK(field(same.out, "total", 4) == "inf");
  const Run one = run("metrics " + path("m_a.pgm") + " " + path("m_b.pgm"));
  CHECK(field(one.out, "0", 4) == "60.1720");
  save_frames(path("m_c.pgm"), {Image::make(32, 64, ChromaMode::kMono)});
  CHECK(run("metrics " + path("m_a.pgm") + " " + path("m_c.pgm")).rc == 2);
}

TEST_CASE("exit codes") {
  CHECK(run("enc -q 10 -i " + path("missing.y4m") + " -o " + path("x.dlk")).rc == 1);
  write_file(path("c444.y4m"), std::vector<uint8_t>{'Y', 'U', 'V', '4', 'M', 'P', 'E', 'G', '2',
                                                  ' ', 'W', '2', ' ', 'H', '2', ' ', 'C',
                                                  '4', '4', '4', '\n'});
  CHECK(run("enc -q 10 -i " + path("c444.y4m") + " -o " + path("x.dlk")).rc == 2);
  CHECK(run("enc -q 64 -i " + path("gray.pgm") + " -o " + path("x.dlk")).rc == 2);
  CHECK(run("enc -q 10 --dering soft -i " + path("gray.pgm") + " -o " + path("x.dlk")).rc == 2);
  CHECK(run("bogus").rc == 2);
  write_file(path("junk.dlk"), std::vector<uint8_t>(40, 7));
  CHECK(run("dec -i " + path("junk.dlk") + " -o " + path("x.y4m")).rc == 2);
  CHECK(run("enc -q 10 -i " + path("gray.pgm") + " -o /nonexistent/dir/x.dlk").rc == 1);
}

}  // namespace
}  // namespace dlk
