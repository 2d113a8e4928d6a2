#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "gazeode/csv.hpp"
#include "gazeode/gaze_ingest.hpp"
#include "gazeode/random.hpp"
#include "test_util.hpp"

using namespace gazeode;

TEST(Csv, ParseDoubleIsStrict) {
  EXPECT_EQ(csv::parse_double("1.5"), 1.5);
  EXPECT_EQ(csv::parse_double("-2e-3"), -2e-3);
  EXPECT_FALSE(csv::parse_double(""));
  EXPECT_FALSE(csv::parse_double("1.5x"));
  EXPECT_FALSE(csv::parse_double(" 1"));
  EXPECT_FALSE(csv::parse_double("nan"));
  EXPECT_FALSE(csv::parse_double("inf"));
}

TEST(Csv, FormatDoubleRoundTrips) {
  Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    const double v = std::ldexp(rng.uniform(-1.0, 1.0), static_cast<int>(rng.index(200)) - 100);
    const auto text = csv::format_double(v);
    ASSERT_EQ(csv::parse_double(text), v) << text;
  }
  EXPECT_EQ(csv::format_double(-0.0), "0");
  EXPECT_EQ(csv::format_double(0.1), "0.1");
  EXPECT_EQ(csv::format_double(1.0 / 3.0, 9), "0.333333333");
}

TEST(Csv, ReadSkipsBlankLinesAndCarriageReturns) {
  testutil::TempDir dir;
  const auto p = dir.write("a.csv", "t,x,y\r\n\r\n0,1,2\r\n\n0.5,3,4\n");
  const auto table = csv::read(p);
  ASSERT_EQ(table.rows.size(), 2u);
  EXPECT_EQ(table.header, kGazeHeader);
  EXPECT_EQ(table.lines[1], 5u);
}

TEST(Csv, MissingFileIsIoError) {
  EXPECT_ERROR_KIND(csv::read("/nonexistent/dir/file.csv"), Io);
}

TEST(GazeIngest, LoadsValidFile) {
  testutil::TempDir dir;
  const auto p = dir.write("gaze.csv", "t,x,y\n0,100,200\n0.0333,101,199.5\n");
  const auto g = load_gaze(p);
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[1], (GazeSample{0.0333, 101, 199.5}));
}

TEST(GazeIngest, Errors) {
  testutil::TempDir dir;
  EXPECT_ERROR_KIND(load_gaze(dir.write("a.csv", "t,x,y\n0,1,2\n0.5,abc,2\n")), MalformedRow);
  EXPECT_ERROR_KIND(load_gaze(dir.write("b.csv", "t,x,y\n0.5,1,2\n0.2,1,2\n")), NonMonotonicTime);
  EXPECT_ERROR_KIND(load_gaze(dir.write("c.csv", "t,x,y\n0.5,1,2\n0.5,1,2\n")), NonMonotonicTime);
  EXPECT_ERROR_KIND(load_gaze(dir.write("d.csv", "")), EmptyFile);
  EXPECT_ERROR_KIND(load_gaze(dir.write("e.csv", "t,x,y\n")), EmptyFile);
  EXPECT_ERROR_KIND(load_gaze(dir.write("f.csv", "t,x,y\n0,1\n")), MalformedRow);
  EXPECT_ERROR_KIND(load_gaze(dir.write("g.csv", "time,x,y\n0,1,2\n")), MalformedRow);
  EXPECT_ERROR_KIND(load_gaze(dir.write("h.csv", "t,x,y\n-1,1,2\n")), InvalidValue);
  EXPECT_ERROR_KIND(load_gaze(dir.path() / "missing.csv"), Io);
}

TEST(GazeIngest, DiagnosticNamesFileAndLine) {
  testutil::TempDir dir;
  const auto p = dir.write("gaze.csv", "t,x,y\n0,1,2\n0.1,1,oops\n");
  try {
    load_gaze(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("gaze.csv:3"), std::string::npos) << e.what();
  }
}

TEST(ShotIngest, GoodnessMustBeBinary) {
  testutil::TempDir dir;
  const std::string header = csv::join(kShotHeader) + "\n";
  EXPECT_ERROR_KIND(load_shots(dir.write("s.csv", header + "1.0,3,2,0,0,0,0,0,0,5\n")), InvalidGoodness);
  EXPECT_ERROR_KIND(load_shots(dir.write("n.csv", header + "1.0,3,1,0,0,0,0,0,0,-5\n")), InvalidValue);
  const auto ok = load_shots(dir.write("ok.csv", header + "1.0,3,1,1,2,3,4,5,6,7\n"));
  ASSERT_EQ(ok.size(), 1u);
  EXPECT_EQ(ok[0].character_id, 3);
  EXPECT_EQ(ok[0].goodness, 1);
  EXPECT_EQ(ok[0].player_pos, (Vec3{4, 5, 6}));
}

TEST(ShotIngest, EmptyShotFileMeansNoShots) {
  testutil::TempDir dir;
  EXPECT_TRUE(load_shots(dir.write("a.csv", "")).empty());
  EXPECT_TRUE(load_shots(dir.write("b.csv", csv::join(kShotHeader) + "\n")).empty());
}

TEST(TrackIngest, GroupsByCharacterAndChecksEachGroup) {
  testutil::TempDir dir;
  const std::string header = csv::join(kTrackHeader) + "\n";
  // interleaved characters are fine as long as each group increases
  const auto tracks = load_tracks(dir.write("t.csv", header + "0,1,10,2,0\n0,2,20,3,1\n0.1,1,11,2,0\n0.1,2,21,3,1\n"));
  ASSERT_EQ(tracks.size(), 2u);
  EXPECT_EQ(tracks.at(1).size(), 2u);
  EXPECT_EQ(tracks.at(2)[1].distance_to_player, 21.0);
  EXPECT_ERROR_KIND(load_tracks(dir.write("u.csv", header + "0.1,1,10,2,0\n0.2,2,1,1,0\n0.05,1,10,2,0\n")),
                    NonMonotonicTime);
}

TEST(Ingest, WriteLoadRoundTrip) {
  testutil::TempDir dir;
  Rng rng(3);
  std::vector<GazeSample> gaze;
  std::vector<ShotEvent> shots;
  std::vector<CharacterTrackSample> tracks;
  double t = 0.0;
  for (int i = 0; i < 100; ++i) {
    t += rng.uniform(0.001, 0.05);
    gaze.push_back({t, rng.uniform(0, 1920), rng.uniform(0, 1080)});
    shots.push_back({t, 1 + static_cast<int>(rng.index(5)), static_cast<int>(rng.index(2)),
                     {rng.unit(), rng.unit(), rng.unit()}, {rng.unit(), rng.unit(), rng.unit()}, rng.unit()});
  }
  for (int c = 1; c <= 3; ++c) {
    for (int i = 0; i < 10; ++i) tracks.push_back({i * 0.1, c, rng.uniform(1, 50), rng.uniform(0, 5), c % 2});
  }
  write_gaze(dir.path() / "g.csv", gaze);
  write_shots(dir.path() / "s.csv", shots);
  write_tracks(dir.path() / "t.csv", tracks);
  EXPECT_EQ(load_gaze(dir.path() / "g.csv"), gaze);
  EXPECT_EQ(load_shots(dir.path() / "s.csv"), shots);
  const auto loaded = load_tracks(dir.path() / "t.csv");
  std::vector<CharacterTrackSample> flat;
  for (const auto& [id, group] : loaded) flat.insert(flat.end(), group.begin(), group.end());
  EXPECT_EQ(flat, tracks);
}
