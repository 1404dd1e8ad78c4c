#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "wmavmd/error.hpp"
#include "wmavmd/io.hpp"

using namespace wmavmd;
using testing_helpers::cycle_trace;

namespace {

ErrorKind kind_of(const std::string& csv) {
  std::istringstream in(csv);
  try {
    io::read_trace(in);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Io;  // sentinel: no error raised
}

std::string message_of(const std::string& csv) {
  std::istringstream in(csv);
  try {
    io::read_trace(in);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("real formatting round-trips") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.123456789, 0.0, 5e-324}) {
    CHECK(std::strtod(io::format_real(x).c_str(), nullptr) == x);
  }
  CHECK(io::format_real(3.0) == "3");
}

TEST_CASE("trace round-trip preserves every velocity") {
  const auto sim = cycle_trace(1, 10);
  std::ostringstream out;
  io::write_trace(out, sim.trace);
  std::istringstream in(out.str());
  const auto back = io::read_trace(in);
  REQUIRE(back.size() == sim.trace.size());
  CHECK(back.sample_interval_s == doctest::Approx(0.1).epsilon(1e-12));
  for (std::size_t k = 0; k < back.size(); ++k) {
    CHECK(back.frames[k].velocities == sim.trace.frames[k].velocities);
    CHECK(back.frames[k].mode == sim.trace.frames[k].mode);
    CHECK(back.frames[k].timestamp == k);
  }
}

TEST_CASE("trace ingestion errors name the line") {
  CHECK(kind_of("t,v1,v2,mode\n0,1,2,traction\n0.1,1,x,traction\n") == ErrorKind::Ingestion);
  CHECK(message_of("t,v1,v2,mode\n0,1,2,traction\n0.1,1,x,traction\n").find("line 3") !=
        std::string::npos);
  CHECK(kind_of("t,v1,mode\n0,1,traction\n") == ErrorKind::Ingestion);
  CHECK(kind_of("t,v1,v2,mode\n0,1,2,cruising\n") == ErrorKind::Ingestion);
  CHECK(kind_of("t,v1,v2,mode\n0,1,2,traction\n0,1,2,traction\n") == ErrorKind::Ingestion);
  CHECK(kind_of("t,v1,v2,mode\n0,1,2\n") == ErrorKind::Ingestion);
  CHECK(kind_of("t,v1,v2,mode\n0,1,nan,traction\n") == ErrorKind::Ingestion);
  CHECK(kind_of("t,v1,v2,mode\n0,5,5,stopped\n") == ErrorKind::Ingestion);
  CHECK(kind_of("") == ErrorKind::Ingestion);
  CHECK(kind_of("t,v1,v3,mode\n") == ErrorKind::Ingestion);
}

TEST_CASE("header-only trace is empty") {
  std::istringstream in("t,v1,v2,v3,mode\n");
  const auto t = io::read_trace(in);
  CHECK(t.empty());
}

TEST_CASE("model round-trip is exact") {
  const auto sim = cycle_trace(2, 11);
  TrainOptions opts;
  opts.windows = {1, 2, 3};
  opts.cl_policy = ClPolicy::parse("quantile:0.999");
  const auto model = train_model(sim.trace, opts);
  const auto text = io::model_to_json(model);
  const auto back = io::model_from_json(text);
  CHECK(back == model);
  CHECK(io::model_to_json(back) == text);
}

TEST_CASE("model loading rejects bad documents") {
  try {
    io::model_from_json("{not json");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Ingestion);
  }
  const auto sim = cycle_trace(2, 11);
  TrainOptions opts;
  auto text = io::model_to_json(train_model(sim.trace, opts));
  const auto pos = text.find("\"format_version\": 1");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 19, "\"format_version\": 9");
  try {
    io::model_from_json(text);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Compatibility);
  }
}

TEST_CASE("alarm log round-trip") {
  const std::vector<AlarmEvent> alarms{{12, 0, AlarmKind::Slip, 1.0 / 3.0, 0.25, Mode::Coasting},
                                       {90, 3, AlarmKind::Slide, 2.75, 1.5, Mode::Braking}};
  std::ostringstream out;
  io::write_alarms(out, alarms);
  CHECK(out.str().rfind("timestamp,channel,kind,index_value,control_limit,mode\n", 0) == 0);
  std::istringstream in(out.str());
  CHECK(io::read_alarms(in) == alarms);
}

TEST_CASE("labels and reference round-trip") {
  const std::vector<FaultLabel> labels{{3, 0, 1.25}, {4, 2, -0.5}};
  std::ostringstream out;
  io::write_labels(out, labels, 0.1);
  std::istringstream in(out.str());
  const auto back = io::read_labels(in, 0.1);
  REQUIRE(back.size() == 2);
  CHECK(back[1].frame == 4);
  CHECK(back[1].channel == 2);
  CHECK(back[1].offset == -0.5);

  const std::vector<double> ref{0, 10.5, 11.0 / 3.0};
  std::ostringstream r;
  io::write_reference(r, ref, 0.2);
  std::istringstream rin(r.str());
  CHECK(io::read_reference(rin) == ref);
}

TEST_CASE("index series lists every channel") {
  const auto sim = cycle_trace(2, 15);
  TrainOptions opts;
  opts.windows = {2};
  const auto model = train_model(sim.trace, opts);
  const auto res = detect_trace(model, sim.trace, WindowSelection::uniform(model, 2));
  std::ostringstream out;
  io::write_index_series(out, res, 4, 0.1);
  std::istringstream in(out.str());
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  CHECK(header == "t,mode,idx1,cl1,status1,idx2,cl2,status2,idx3,cl3,status3,idx4,cl4,status4");
  CHECK(first == "0,traction,,,warmup,,,warmup,,,warmup,,,warmup");
  std::size_t lines = 1;
  for (std::string l; std::getline(in, l);) ++lines;
  CHECK(lines == sim.trace.size());
}

TEST_CASE("scenario documents round-trip") {
  const std::string doc = R"({
    "profile": {"sample_interval_s": 0.2, "repeat": 2,
                "segments": [{"mode": "traction", "duration_s": 10, "target_speed_kmh": 30},
                             {"mode": "braking", "duration_s": 10, "target_speed_kmh": 0}]},
    "noise": {"sigma": [0.1, 0.2, 0.3], "rho": 0.5, "cross": 0.25, "seed": 3},
    "injection": {"events": [{"channels": [2], "kind": "slide", "start": 60, "duration": 3,
                              "magnitude": [1, 2, 3], "gap": 5, "repeats": 2}]}
  })";
  const auto s = io::scenario_from_json(doc);
  CHECK(s.profile.segments.size() == 4);
  CHECK(s.noise.sigma.size() == 3);
  REQUIRE(s.injection.events.size() == 1);
  CHECK(s.injection.events[0].channels == std::vector<std::size_t>{1});
  CHECK(s.injection.events[0].kind == AlarmKind::Slide);
  const auto again = io::scenario_from_json(io::scenario_to_json(s));
  CHECK(again.profile.segments.size() == 4);
  CHECK(again.injection.events[0].magnitude == std::vector<double>{1, 2, 3});
  CHECK(again.noise.seed == 3);

  try {
    io::scenario_from_json(R"({"profile": {"segments": []}, "noise": {"sigma": 1, "channels": 2},
      "injection": {"events": [{"channels": [0], "kind": "slip", "start": 0, "duration": 1,
                                "magnitude": 1}]}})");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Spec);
  }
}

TEST_CASE("file helpers report I/O errors") {
  try {
    io::read_file("/nonexistent/dir/file.csv");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Io);
  }
  CHECK_THROWS_AS(io::write_file("/nonexistent/dir/out.csv", "x"), Error);
}
