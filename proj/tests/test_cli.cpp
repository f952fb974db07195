#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "monogenic/cli.hpp"
#include "monogenic/io.hpp"

using namespace monogenic;
namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "monogenic");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / "monogenic_cli_test" / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Json manifest(const fs::path& p) { return Json::parse(slurp(p)); }

std::set<std::string> listing(const fs::path& dir) {
  std::set<std::string> names;
  for (const auto& e : fs::directory_iterator(dir)) names.insert(e.path().filename().string());
  return names;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

fs::path synth(const fs::path& dir, const std::string& kind, std::vector<std::string> extra = {}) {
  const fs::path p = dir / (kind + ".pgm");
  std::vector<std::string> args{"synth", kind, p.string()};
  args.insert(args.end(), extra.begin(), extra.end());
  REQUIRE(run(args).code == 0);
  return p;
}

}  // namespace

TEST_CASE("detect writes a thin step edge and a complete manifest") {
  const fs::path in = fresh_dir("detect_in");
  const fs::path out = fresh_dir("detect_out");
  const fs::path step = synth(in, "step");
  const Result r = run({"detect", "--method", "mdpc", "--scale", "0.5", "--out-dir", out.string(),
                        "--pfm", step.string()});
  REQUIRE(r.code == 0);
  const ScalarField edges = io::read_image(out / "step.edges.pgm");
  int on = 0;
  for (int y = 0; y < edges.height(); ++y) {
    int row = 0;
    for (int x = 0; x < edges.width(); ++x) {
      if (edges(x, y) == 0.0) continue;
      ++row;
      CHECK(std::abs(x - 32) <= 1);
    }
    CHECK(row == 1);
    on += row;
  }
  CHECK(on == 64);

  const Json m = manifest(out / "step.manifest.json");
  CHECK(m["command"] == "detect");
  CHECK(m["config"]["method"] == "mdpc");
  CHECK(m["config"]["scale"] == 0.5);
  CHECK(m["config"]["low"] == 1.0);
  CHECK(m["config"]["high"] == 3.5);
  CHECK(m["config"]["nms_radius"] == 1.5);
  CHECK(m["config"]["pad"] == 16);
  CHECK(m["edge_pixels"] == 64);
  CHECK(m["timings_ms"].is_object());
  std::set<std::string> listed;
  for (const auto& a : m["artifacts"]) listed.insert(a.get<std::string>());
  CHECK(listed == listing(out));
  CHECK(listed.count("step.magnitude.pfm") == 1);
}

TEST_CASE("detect edge cases and exit codes") {
  const fs::path in = fresh_dir("edge_in");
  const fs::path out = fresh_dir("edge_out");
  const fs::path blank = synth(in, "blank");
  Result r = run({"detect", "--out-dir", out.string(), blank.string()});
  CHECK(r.code == 0);
  const ScalarField e = io::read_image(out / "blank.edges.pgm");
  for (double x : e.samples()) REQUIRE(x == 0.0);

  CHECK(run({"detect", "--scale", "-1", "--out-dir", out.string(), blank.string()}).code == 1);
  CHECK(run({"detect", "--low", "5", "--out-dir", out.string(), blank.string()}).code == 1);
  CHECK(run({"detect", "--method", "prewitt", "--out-dir", out.string(), blank.string()}).code == 1);
  CHECK(run({"detect", "--derivative", "numeric", "--out-dir", out.string(), blank.string()}).code ==
        1);
  CHECK(run({"detect", "--out-dir", out.string(), (in / "missing.pgm").string()}).code == 2);
  std::ofstream(in / "junk.pgm") << "not an image";
  CHECK(run({"detect", "--out-dir", out.string(), (in / "junk.pgm").string()}).code == 2);
  CHECK(run({"detect", "--bogus-flag", blank.string()}).code == 1);
  CHECK(run({}).code == 1);
  const Result dup = run({"detect", "--out-dir", out.string(), blank.string(), blank.string()});
  CHECK(dup.code == 1);
  CHECK(dup.err.find("InvalidArgument") != std::string::npos);
}

TEST_CASE("detect handles several inputs in parallel deterministically") {
  const fs::path in = fresh_dir("multi_in");
  const fs::path a = synth(in, "noisy");
  const fs::path b = synth(in, "blob");
  const fs::path c = synth(in, "plane");
  const fs::path o1 = fresh_dir("multi_o1");
  const fs::path o2 = fresh_dir("multi_o2");
  setenv("MONOGENIC_THREADS", "1", 1);
  REQUIRE(run({"detect", "--format", "png", "--out-dir", o1.string(), a.string(), b.string(),
               c.string()})
              .code == 0);
  setenv("MONOGENIC_THREADS", "3", 1);
  REQUIRE(run({"detect", "--format", "png", "--out-dir", o2.string(), a.string(), b.string(),
               c.string()})
              .code == 0);
  unsetenv("MONOGENIC_THREADS");
  CHECK(listing(o1) == listing(o2));
  CHECK(listing(o1).size() == 9);
  for (const auto& name : listing(o1)) {
    if (name.ends_with(".png")) CHECK(slurp(o1 / name) == slurp(o2 / name));
  }
}

TEST_CASE("compare") {
  const fs::path in = fresh_dir("cmp_in");
  const fs::path out = fresh_dir("cmp_out");
  const fs::path img = synth(in, "noisy");
  Result r = run({"compare", "--scale", "0.5", "--out-dir", out.string(), img.string()});
  REQUIRE(r.code == 0);
  int edge_maps = 0;
  for (const auto& n : listing(out)) edge_maps += n.ends_with(".edges.pgm");
  CHECK(edge_maps == 6);
  const ScalarField montage = io::read_image(out / "noisy.montage.pgm");
  CHECK(montage.width() == 6 * 64 + 5 * 4);
  CHECK(montage.height() == 64);
  const auto csv = lines(slurp(out / "noisy.counts.csv"));
  CHECK(csv.front() == "method,scale,edge_pixels");
  CHECK(csv.size() == 7);
  const Json m = manifest(out / "noisy.manifest.json");
  std::set<std::string> listed;
  for (const auto& a : m["artifacts"]) listed.insert(a.get<std::string>());
  CHECK(listed == listing(out));

  CHECK(run({"compare", "--method", "dpc", "--out-dir", out.string(), img.string()}).code == 1);
  CHECK(run({"compare", "--methods", "dpc,dpc", "--out-dir", out.string(), img.string()}).code == 1);
  const fs::path out2 = fresh_dir("cmp_out2");
  r = run({"compare", "--methods", "dpc,la,dpc", "--out-dir", out2.string(), img.string()});
  CHECK(r.code == 0);
  CHECK(r.err.find("warning") != std::string::npos);
  CHECK(lines(slurp(out2 / "noisy.counts.csv")).size() == 3);
}

TEST_CASE("compare is byte-identical across runs") {
  const fs::path in = fresh_dir("det_in");
  const fs::path img = synth(in, "noisy");
  const fs::path o1 = fresh_dir("det_o1");
  const fs::path o2 = fresh_dir("det_o2");
  REQUIRE(run({"compare", "--out-dir", o1.string(), img.string()}).code == 0);
  REQUIRE(run({"compare", "--out-dir", o2.string(), img.string()}).code == 0);
  REQUIRE(listing(o1) == listing(o2));
  for (const auto& name : listing(o1)) {
    if (name.ends_with(".manifest.json")) {
      Json a = manifest(o1 / name), b = manifest(o2 / name);
      a.erase("timings_ms");
      b.erase("timings_ms");
      a["out_dir"] = b["out_dir"] = "";
      CHECK(a == b);
    } else {
      CHECK(slurp(o1 / name) == slurp(o2 / name));
    }
  }
}

TEST_CASE("sweep") {
  const fs::path in = fresh_dir("sweep_in");
  const fs::path out = fresh_dir("sweep_out");
  const fs::path img = synth(in, "noisy");
  const Result r = run({"sweep", "--scales", "0.1,0.5,1.0,5.0", "--method", "dpc", "--out-dir",
                        out.string(), img.string()});
  REQUIRE(r.code == 0);
  int maps = 0;
  for (const auto& n : listing(out)) maps += n.ends_with(".edges.pgm");
  CHECK(maps == 4);
  const auto csv = lines(slurp(out / "noisy.sweep.csv"));
  REQUIRE(csv.size() == 5);
  CHECK(csv[0] == "scale,method,edge_pixels");
  auto count = [](const std::string& row) { return std::stoi(row.substr(row.rfind(',') + 1)); };
  CHECK(csv[1].rfind("0.1,dpc,", 0) == 0);
  CHECK(count(csv[4]) < count(csv[1]));

  // One scale behaves as detect.
  const fs::path o1 = fresh_dir("sweep_one");
  const fs::path o2 = fresh_dir("sweep_det");
  REQUIRE(run({"sweep", "--scales", "0.5", "--method", "la", "--out-dir", o1.string(), img.string()})
              .code == 0);
  REQUIRE(run({"detect", "--scale", "0.5", "--method", "la", "--out-dir", o2.string(), img.string()})
              .code == 0);
  CHECK(slurp(o1 / "noisy.s0.5.edges.pgm") == slurp(o2 / "noisy.edges.pgm"));

  CHECK(run({"sweep", "--scales", "0", "--out-dir", out.string(), img.string()}).code == 1);
  CHECK(run({"sweep", "--scales", "0.5,-2", "--out-dir", out.string(), img.string()}).code == 1);
}

TEST_CASE("verify") {
  const fs::path out = fresh_dir("verify_all");
  Result r = run({"verify", "--suite", "all", "--out-dir", out.string()});
  CHECK(r.code == 0);
  const auto csv = lines(slurp(out / "verify.csv"));
  CHECK(csv.size() >= 7);
  CHECK(r.out.find("FAIL") == std::string::npos);

  const fs::path ax = fresh_dir("verify_axial");
  r = run({"verify", "--suite", "axial", "--out-dir", ax.string(), "--csv", "axial.csv"});
  CHECK(r.code == 0);
  const auto acsv = lines(slurp(ax / "axial.csv"));
  CHECK(acsv.size() == 4);
  for (std::size_t i = 1; i < acsv.size(); ++i) CHECK(acsv[i].find(",true,") != std::string::npos);

  CHECK(run({"verify", "--suite", "nonsense", "--out-dir", ax.string()}).code == 1);
  CHECK(run({"verify", "--suite", "axial", "--tolerance", "axial=oops", "--out-dir", ax.string()})
            .code == 1);
  CHECK(run({"verify", "--suite", "axial", "--tolerance", "nosuch=1", "--out-dir", ax.string()})
            .code == 1);
  r = run({"verify", "--suite", "axial", "--tolerance", "cauchy_oracle=0", "--out-dir", ax.string()});
  CHECK(r.code == 3);
  CHECK(r.out.find("FAIL") != std::string::npos);
}

TEST_CASE("synth") {
  const fs::path d = fresh_dir("synth");
  for (const char* kind : {"step", "ramp", "blob", "plane", "noise", "noisy", "blank"}) {
    const fs::path p = d / (std::string(kind) + ".png");
    REQUIRE(run({"synth", kind, p.string(), "--format", "png", "--width", "40", "--height", "24"})
                .code == 0);
    const ScalarField f = io::read_image(p);
    CHECK(f.width() == 40);
    CHECK(f.height() == 24);
  }
  const ScalarField step = io::read_image(d / "step.png");
  CHECK(step(19, 3) == 64 / 255.0);
  CHECK(step(20, 3) == 191 / 255.0);
  CHECK(run({"synth", "spiral", (d / "x.pgm").string()}).code == 1);
  CHECK(run({"synth", "step", (d / "x.pgm").string(), "--format", "tiff"}).code == 1);
}
