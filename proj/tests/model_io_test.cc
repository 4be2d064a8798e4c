// Copyright 2026 The Fingerkin Authors.
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

#include "fingerkin/model_io.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <string>
#include <utility>

#include <gtest/gtest.h>

#include "fingerkin/errors.h"
#include "fingerkin/text_io.h"
#include "oracles.h"

namespace fingerkin {
namespace {

TEST(ParamsIoTest, RoundTripIsBitExact) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 50; ++t) {
    ParamVector v;
    for (int i = 0; i < 11; ++i) v[i] = testing::Uniform(rng, 0.1, 60.0);
    for (int j = 0; j < 8; j += 2) {
      if (v[j] < v[j + 1]) std::swap(v[j], v[j + 1]);
    }
    v[11] = testing::Uniform(rng, 0.05, 1.0);
    const auto orientation = t % 2 ? AxisOrientation::kMajorLongitudinal
                                   : AxisOrientation::kMajorTransverse;
    const FingerParams p = FingerParams::FromVector(v, orientation);
    const FingerParams back = ParseParams(FormatParams(p));
    EXPECT_EQ(back, p);
    EXPECT_EQ(back.Fingerprint(), p.Fingerprint());
  }
}

TEST(ParamsIoTest, CommentsBlankLinesAndDefaultOrientation) {
  std::string text = FormatParams(FingerParams::Reference());
  text = "# leading comment\n\n" + text;
  text.erase(text.find("axis_orientation"));
  const FingerParams p = ParseParams(text + "   # trailing\n");
  EXPECT_EQ(p, FingerParams::Reference());
  EXPECT_EQ(p.orientation(), AxisOrientation::kMajorTransverse);
}

TEST(ParamsIoTest, RejectsMalformedFiles) {
  const std::string good = FormatParams(FingerParams::Reference());
  EXPECT_THROW(ParseParams(good + "wrist_length = 3\n"), ParseError);
  EXPECT_THROW(ParseParams(good + "distal_length = 3\n"), ParseError);
  EXPECT_THROW(ParseParams(good + "axis_orientation = sideways\n"), ParseError);
  std::string missing = good;
  missing.erase(missing.find("distal_length"),
                missing.find('\n', missing.find("distal_length")) -
                    missing.find("distal_length") + 1);
  EXPECT_THROW(ParseParams(missing), ParseError);
  std::string bad_number = good;
  bad_number.replace(bad_number.find("= 18"), 4, "= 1x8");
  try {
    ParseParams(bad_number);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_GT(e.line(), 1);
  }
  std::string negative = good;
  negative.replace(negative.find("= 18"), 4, "= -18");
  EXPECT_THROW(ParseParams(negative), DomainError);
}

TEST(ParamsIoTest, FileRoundTrip) {
  const std::string dir = testing::ScratchDir("model_io_params");
  const FingerParams p = FingerParams::Reference();
  SaveParams(p, dir + "/p.txt");
  EXPECT_EQ(LoadParams(dir + "/p.txt"), p);
  EXPECT_THROW(LoadParams(dir + "/absent.txt"), IoError);
}

TEST(CloudIoTest, RoundTripPreservesRecordsAndHeader) {
  const FingerParams p = FingerParams::Reference();
  const PostureCloud cloud = SampleWorkspace(p, 200, 77, DefaultAngleLimits());
  const std::string text = FormatCloud(cloud);
  EXPECT_NE(text.find("# params_fingerprint: " + FingerprintHex(p.Fingerprint())),
            std::string::npos);
  const PostureCloud back = ParseCloud(text);
  EXPECT_EQ(back.seed(), 77u);
  EXPECT_EQ(back.params_fingerprint(), p.Fingerprint());
  ASSERT_EQ(back.size(), cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    EXPECT_EQ(back.records()[i].position, cloud.records()[i].position);
    EXPECT_EQ(back.records()[i].angles, cloud.records()[i].angles);
  }
  EXPECT_EQ(FormatCloud(back), text);
  EXPECT_NO_THROW(back.Verify(p));
}

TEST(CloudIoTest, GzipRoundTripAndFingerprintCheck) {
  const std::string dir = testing::ScratchDir("model_io_cloud");
  const FingerParams p = FingerParams::Reference();
  const PostureCloud cloud = SampleWorkspace(p, 50, 3, DefaultAngleLimits());
  SaveCloud(cloud, dir + "/cloud.csv.gz");
  const PostureCloud back = LoadCloud(dir + "/cloud.csv.gz");
  EXPECT_EQ(FormatCloud(back), FormatCloud(cloud));
  ParamVector v = p.ToVector();
  v[10] += 1.0;
  EXPECT_THROW(back.Verify(FingerParams::FromVector(v)), FingerprintMismatch);
}

TEST(CloudIoTest, RejectsCorruptRows) {
  const PostureCloud cloud =
      SampleWorkspace(FingerParams::Reference(), 5, 1, DefaultAngleLimits());
  std::string text = FormatCloud(cloud);
  EXPECT_THROW(ParseCloud(text + "1,2,3\n"), ParseError);
  EXPECT_THROW(ParseCloud(text + "1,2,3,0,0,0,zz\n"), ParseError);
  std::string no_fp = text;
  no_fp.erase(no_fp.find("# params_fingerprint"),
              no_fp.find('\n', no_fp.find("# params_fingerprint")) + 1 -
                  no_fp.find("# params_fingerprint"));
  EXPECT_THROW(ParseCloud(no_fp), ParseError);
}

TEST(TextIoTest, Fnv1aReferenceVectors) {
  EXPECT_EQ(Fnv1a64(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(Fnv1a64("a"), 0xaf63dc4c8601ec8cull);
  EXPECT_EQ(Fnv1a64("foobar"), 0x85944171f73967e8ull);
}

TEST(TextIoTest, DoubleTextRoundTrip) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<std::uint64_t> bits;
  for (int i = 0; i < 2000; ++i) {
    double v;
    const std::uint64_t b = bits(rng);
    std::memcpy(&v, &b, sizeof v);
    if (!std::isfinite(v)) continue;
    double back = 0.0;
    ASSERT_TRUE(ParseDouble(FormatDouble(v), back));
    EXPECT_EQ(std::memcmp(&back, &v, sizeof v), 0) << FormatDouble(v);
  }
  double out = 0.0;
  EXPECT_EQ(FormatDouble(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_TRUE(ParseDouble("nan", out));
  EXPECT_TRUE(std::isnan(out));
  EXPECT_FALSE(ParseDouble("1.5x", out));
  EXPECT_FALSE(ParseDouble("", out));
}

TEST(TextIoTest, FieldSplittingAndTrim) {
  EXPECT_EQ(Trim("  a b \t"), "a b");
  const auto f = SplitFields("a,,b ,", ',');
  ASSERT_EQ(f.size(), 4u);
  EXPECT_EQ(f[1], "");
  EXPECT_EQ(f[2], "b");
  EXPECT_EQ(f[3], "");
}

TEST(TextIoTest, GzipFileRoundTrip) {
  const std::string dir = testing::ScratchDir("text_io_gz");
  std::string payload;
  for (int i = 0; i < 10000; ++i) payload += std::to_string(i) + "\n";
  WriteTextFile(dir + "/a.txt.gz", payload);
  EXPECT_EQ(ReadTextFile(dir + "/a.txt.gz"), payload);
  EXPECT_LT(ReadTextFile(dir + "/a.txt.gz").size(), payload.size() + 1);
  WriteTextFile(dir + "/b.txt", payload);
  EXPECT_EQ(ReadTextFile(dir + "/b.txt"), payload);
}

}  // namespace
}  // namespace fingerkin
