#include "monogenic/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "monogenic/edgeops.hpp"
#include "monogenic/io.hpp"
#include "monogenic/synthetic.hpp"
#include "monogenic/verify.hpp"

namespace monogenic::cli {

namespace fs = std::filesystem;
using edgeops::DetectorConfig;
using edgeops::Method;
using Json = nlohmann::ordered_json;

namespace {

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::UnreadableInput:
    case ErrorCode::UnsupportedFormat:
    case ErrorCode::IoFailure:
      return kExitIo;
    default:
      return kExitValidation;
  }
}

struct CommonOptions {
  DetectorConfig cfg;
  std::string method = "mdpc";
  std::string derivative = "analytic";
  std::string out_dir = ".";
  std::string format = "pgm";
  bool pfm = false;
};

void add_detector_options(CLI::App* app, CommonOptions& o, bool with_method) {
  if (with_method) app->add_option("--method", o.method, "Gradient method");
  app->add_option("--scale", o.cfg.scale, "Poisson scale s");
  app->add_option("--derivative", o.derivative, "Scale derivative: analytic or fd");
  app->add_option("--fd-step", o.cfg.fd_step, "Finite-difference step (0 = default)");
  app->add_option("--mask-eps", o.cfg.mask_eps, "Mask threshold relative to peak amplitude");
  app->add_option("--nms-radius", o.cfg.nms_radius, "Non-maximum suppression radius");
  app->add_option("--low", o.cfg.low, "Low hysteresis threshold");
  app->add_option("--high", o.cfg.high, "High hysteresis threshold");
  app->add_option("--pad", o.cfg.pad, "Mirror padding in pixels");
  app->add_option("--canny-sigma", o.cfg.canny_sigma, "Gaussian sigma for canny");
  app->add_option("--out-dir", o.out_dir, "Output directory");
  app->add_option("--format", o.format, "Output image format: pgm or png");
  app->add_flag("--pfm", o.pfm, "Also write raw float gradient magnitudes");
}

Method method_from(const std::string& name);

io::ImageFormat resolve(CommonOptions& o) {
  o.cfg.method = method_from(o.method);
  if (o.derivative == "analytic") {
    o.cfg.derivative_mode = scalespace::DerivativeMode::Analytic;
  } else if (o.derivative == "fd") {
    o.cfg.derivative_mode = scalespace::DerivativeMode::FiniteDifference;
  } else {
    throw Error(ErrorCode::InvalidArgument, "--derivative must be analytic or fd");
  }
  const auto fmt = io::parse_format(o.format);
  if (!fmt) throw Error(ErrorCode::InvalidArgument, "--format must be pgm or png");
  o.cfg.validate();
  return *fmt;
}

Method method_from(const std::string& name) {
  const auto m = edgeops::parse_method(name);
  if (!m) throw Error(ErrorCode::InvalidArgument, "unknown method '" + name + "'");
  return *m;
}

Json config_json(const DetectorConfig& c) {
  Json j;
  j["method"] = std::string(edgeops::to_string(c.method));
  j["scale"] = c.scale;
  j["derivative"] =
      c.derivative_mode == scalespace::DerivativeMode::Analytic ? "analytic" : "fd";
  j["fd_step"] = c.fd_step;
  j["mask_eps"] = c.mask_eps;
  j["nms_radius"] = c.nms_radius;
  j["low"] = c.low;
  j["high"] = c.high;
  j["pad"] = c.pad;
  j["canny_sigma"] = c.canny_sigma;
  j["normalize_percentile"] = c.normalize_percentile;
  j["normalize_target"] = c.normalize_target;
  return j;
}

std::string format_scale(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", s);
  return buf;
}

// Records every file written for one input plus stage timings.
class Manifest {
 public:
  Manifest(std::string command, const fs::path& input, const fs::path& out_dir)
      : out_dir_(out_dir) {
    j_["command"] = std::move(command);
    j_["inputs"] = Json::array({input.string()});
    j_["out_dir"] = out_dir.string();
  }

  Json& operator[](const char* key) { return j_[key]; }

  fs::path file(const std::string& name) {
    artifacts_.push_back(name);
    return out_dir_ / name;
  }

  void time(const std::string& stage, double ms) { timings_[stage] = ms; }

  void write(const std::string& name) {
    artifacts_.push_back(name);
    j_["artifacts"] = artifacts_;
    j_["timings_ms"] = timings_;
    std::ofstream out(out_dir_ / name, std::ios::trunc);
    out << j_.dump(2) << "\n";
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write manifest " + name);
  }

 private:
  fs::path out_dir_;
  Json j_;
  std::vector<std::string> artifacts_;
  Json timings_ = Json::object();
};

void add_stage_times(Manifest& m, const std::string& prefix, const edgeops::Detection& d) {
  for (const auto& [stage, ms] : d.stage_ms) m.time(prefix + stage, ms);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  out << text;
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(ErrorCode::IoFailure, "cannot create output directory " + dir.string());
  }
}

std::string stem_of(const fs::path& p) { return p.stem().string(); }

// Writes one detection's edge map, magnitude image and optional float grid.
void emit_detection(Manifest& m, const std::string& prefix, const edgeops::Detection& d,
                    io::ImageFormat fmt, bool pfm) {
  const std::string ext(io::extension(fmt));
  io::write_edge_map(m.file(prefix + ".edges" + ext), d.edges.edges, fmt);
  io::write_gray(m.file(prefix + ".magnitude" + ext), io::to_gray8(d.gradient.magnitude), fmt);
  if (pfm) io::write_pfm(m.file(prefix + ".magnitude.pfm"), d.gradient.magnitude);
}

io::Gray8 montage(const std::vector<Mask>& maps) {
  constexpr int kGap = 4;
  const int w = maps.front().width();
  const int h = maps.front().height();
  const int n = static_cast<int>(maps.size());
  io::Gray8 out(n * w + (n - 1) * kGap, h, 128);
  for (int k = 0; k < n; ++k) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) out(k * (w + kGap) + x, y) = maps[k](x, y) ? 255 : 0;
    }
  }
  return out;
}

int thread_cap() {
  if (const char* env = std::getenv("MONOGENIC_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs job(i) for every input on up to MONOGENIC_THREADS workers. Returns the
// exit code of the first failing input in input order.
template <class Job>
int for_each_input(const std::vector<std::string>& inputs, std::ostream& err, Job&& job) {
  std::set<std::string> stems;
  for (const auto& in : inputs) {
    if (!stems.insert(stem_of(in)).second) {
      throw Error(ErrorCode::InvalidArgument, "inputs share the output stem '" + stem_of(in) + "'");
    }
  }
  std::vector<int> codes(inputs.size(), kExitOk);
  std::vector<std::string> messages(inputs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < inputs.size(); i = next++) {
      try {
        job(inputs[i]);
      } catch (const Error& e) {
        codes[i] = exit_code_for(e.code());
        messages[i] = e.what();
      } catch (const std::exception& e) {
        codes[i] = kExitIo;
        messages[i] = e.what();
      }
    }
  };
  const int n = std::min<int>(thread_cap(), static_cast<int>(inputs.size()));
  {
    std::vector<std::jthread> pool;
    for (int t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
  }
  int code = kExitOk;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (codes[i] != kExitOk) {
      err << "error: " << inputs[i] << ": " << messages[i] << "\n";
      if (code == kExitOk) code = codes[i];
    }
  }
  return code;
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_detect(const std::vector<std::string>& inputs, CommonOptions& o, std::ostream& out,
               std::ostream& err) {
  const io::ImageFormat fmt = resolve(o);
  ensure_dir(o.out_dir);
  std::mutex out_mutex;
  return for_each_input(inputs, err, [&](const std::string& input) {
    const auto t0 = std::chrono::steady_clock::now();
    const ScalarField img = io::read_image(input);
    Manifest m("detect", input, o.out_dir);
    m["config"] = config_json(o.cfg);
    m.time("read", elapsed_ms(t0));
    const edgeops::Detection d = edgeops::detect(img, o.cfg);
    add_stage_times(m, "", d);
    const std::string stem = stem_of(input);
    emit_detection(m, stem, d, fmt, o.pfm);
    m["edge_pixels"] = d.edges.count();
    m.write(stem + ".manifest.json");
    std::lock_guard lock(out_mutex);
    out << input << ": " << d.edges.count() << " edge pixels\n";
  });
}

int cmd_compare(const std::string& input, const std::vector<std::string>& names, CommonOptions& o,
                std::ostream& out, std::ostream& err) {
  std::vector<Method> methods;
  for (const auto& name : names) {
    const Method m = method_from(name);
    if (std::find(methods.begin(), methods.end(), m) != methods.end()) {
      err << "warning: method '" << name << "' listed more than once; ignoring the repeat\n";
      continue;
    }
    methods.push_back(m);
  }
  if (methods.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "compare needs at least two distinct methods");
  }
  const io::ImageFormat fmt = resolve(o);
  ensure_dir(o.out_dir);
  const auto t0 = std::chrono::steady_clock::now();
  const ScalarField img = io::read_image(input);
  Manifest man("compare", input, o.out_dir);
  Json cfg = config_json(o.cfg);
  cfg.erase("method");
  Json list = Json::array();
  for (Method m : methods) list.push_back(std::string(edgeops::to_string(m)));
  cfg["methods"] = list;
  man["config"] = cfg;
  man.time("read", elapsed_ms(t0));

  const std::string stem = stem_of(input);
  std::string csv = "method,scale,edge_pixels\n";
  std::vector<Mask> maps;
  for (Method m : methods) {
    DetectorConfig c = o.cfg;
    c.method = m;
    const edgeops::Detection d = edgeops::detect(img, c);
    const std::string name(edgeops::to_string(m));
    add_stage_times(man, name + ".", d);
    emit_detection(man, stem + "." + name, d, fmt, o.pfm);
    csv += name + "," + format_scale(c.scale) + "," + std::to_string(d.edges.count()) + "\n";
    out << name << ": " << d.edges.count() << " edge pixels\n";
    maps.push_back(d.edges.edges);
  }
  io::write_gray(man.file(stem + ".montage" + std::string(io::extension(fmt))), montage(maps),
                 fmt);
  write_text(man.file(stem + ".counts.csv"), csv);
  man.write(stem + ".manifest.json");
  return kExitOk;
}

int cmd_sweep(const std::string& input, const std::vector<double>& scales, CommonOptions& o,
              std::ostream& out) {
  if (scales.empty()) throw Error(ErrorCode::InvalidArgument, "sweep needs at least one scale");
  for (double s : scales) {
    DetectorConfig c = o.cfg;
    c.scale = s;
    c.validate();
  }
  const io::ImageFormat fmt = resolve(o);
  ensure_dir(o.out_dir);
  const auto t0 = std::chrono::steady_clock::now();
  const ScalarField img = io::read_image(input);
  Manifest man("sweep", input, o.out_dir);
  Json cfg = config_json(o.cfg);
  cfg.erase("scale");
  cfg["scales"] = scales;
  man["config"] = cfg;
  man.time("read", elapsed_ms(t0));

  const std::string stem = stem_of(input);
  const std::string method(edgeops::to_string(o.cfg.method));
  std::string csv = "scale,method,edge_pixels\n";
  for (double s : scales) {
    DetectorConfig c = o.cfg;
    c.scale = s;
    const edgeops::Detection d = edgeops::detect(img, c);
    const std::string tag = "s" + format_scale(s);
    add_stage_times(man, tag + ".", d);
    emit_detection(man, stem + "." + tag, d, fmt, o.pfm);
    csv += format_scale(s) + "," + method + "," + std::to_string(d.edges.count()) + "\n";
    out << "s=" << format_scale(s) << ": " << d.edges.count() << " edge pixels\n";
  }
  write_text(man.file(stem + ".sweep.csv"), csv);
  man.write(stem + ".manifest.json");
  return kExitOk;
}

std::map<std::string, double verify::Tolerances::*> tolerance_fields() {
  using T = verify::Tolerances;
  return {{"theorem31", &T::theorem31},
          {"lemma32", &T::lemma32},
          {"lemma32_ratio_lo", &T::lemma32_ratio_lo},
          {"lemma32_ratio_hi", &T::lemma32_ratio_hi},
          {"lemma33", &T::lemma33},
          {"lemma33_grade", &T::lemma33_grade},
          {"axial", &T::axial},
          {"axial_1d", &T::axial_1d},
          {"cauchy_oracle", &T::cauchy_oracle},
          {"theorem34", &T::theorem34},
          {"theorem34_plane", &T::theorem34_plane},
          {"phase_expansion", &T::phase_expansion},
          {"mismatch_floor", &T::mismatch_floor},
          {"mismatch_plane", &T::mismatch_plane},
          {"mismatch_consistency", &T::mismatch_consistency}};
}

int cmd_verify(const std::vector<std::string>& suites, const std::vector<std::string>& overrides,
               const std::string& out_dir, const std::string& csv_name, std::ostream& out) {
  std::vector<verify::Suite> selected;
  for (const auto& name : suites) {
    if (name == "all") {
      selected.assign(std::begin(verify::kAllSuites), std::end(verify::kAllSuites));
      continue;
    }
    const auto s = verify::parse_suite(name);
    if (!s) throw Error(ErrorCode::InvalidArgument, "unknown suite '" + name + "'");
    if (std::find(selected.begin(), selected.end(), *s) == selected.end()) selected.push_back(*s);
  }
  verify::Tolerances tol;
  const auto fields = tolerance_fields();
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    const auto it = fields.find(kv.substr(0, eq));
    if (eq == std::string::npos || it == fields.end()) {
      throw Error(ErrorCode::InvalidArgument, "bad tolerance override '" + kv + "'");
    }
    try {
      tol.*(it->second) = std::stod(kv.substr(eq + 1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad tolerance value in '" + kv + "'");
    }
  }
  ensure_dir(out_dir);
  std::vector<verify::ResidualReport> reports;
  for (verify::Suite s : selected) {
    auto r = verify::run_suite(s, tol);
    reports.insert(reports.end(), std::make_move_iterator(r.begin()),
                   std::make_move_iterator(r.end()));
  }
  write_text(fs::path(out_dir) / csv_name, verify::to_csv(reports));
  bool ok = true;
  for (const auto& r : reports) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s %-34s %s=%.3e tol=%.1e%s\n", r.pass ? "PASS" : "FAIL",
                  r.identity.c_str(), std::string(verify::to_string(r.statistic)).c_str(),
                  r.value(), r.tolerance, r.vacuous ? " (vacuous)" : "");
    out << buf;
    ok = ok && r.pass;
  }
  return ok ? kExitOk : kExitVerifyFailed;
}

struct SynthOptions {
  std::string kind;
  std::string output;
  int width = 64;
  int height = 64;
  std::uint64_t seed = 1;
  double noise = 0.2;
  double sigma = 8.0;
  double omega = 0.39269908169872414;
  double angle = 0.0;
  std::string format = "pgm";
};

int cmd_synth(const SynthOptions& o, std::ostream& out) {
  const auto fmt = io::parse_format(o.format);
  if (!fmt) throw Error(ErrorCode::InvalidArgument, "--format must be pgm or png");
  ScalarField f;
  if (o.kind == "step") {
    f = synthetic::vertical_step(o.width, o.height, o.width / 2, 0.25, 0.75);
  } else if (o.kind == "ramp") {
    f = synthetic::ramp(o.width, o.height, 1.0 / std::max(1, o.width - 1));
  } else if (o.kind == "blob") {
    f = synthetic::radial_blob(o.width, o.height, o.sigma);
  } else if (o.kind == "plane") {
    f = synthetic::plane_wave(o.width, o.height, o.omega, o.angle, 0.5, 0.0, 0.5);
  } else if (o.kind == "noise") {
    f = synthetic::gaussian_smoothed_noise(o.width, o.height, o.sigma, o.seed);
  } else if (o.kind == "noisy") {
    f = synthetic::noisy_shapes(o.width, o.height, o.noise, o.seed);
  } else if (o.kind == "blank") {
    f = ScalarField(o.width, o.height);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown fixture '" + o.kind + "'");
  }
  const fs::path path(o.output);
  if (path.has_parent_path()) ensure_dir(path.parent_path());
  io::write_gray(path, o.kind == "noise" ? io::to_gray8(f) : io::to_gray8(f, 0.0, 1.0), *fmt);
  out << "wrote " << o.output << "\n";
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Monogenic scale-space edge detection"};
  app.require_subcommand(1);

  CommonOptions detect_opts;
  std::vector<std::string> detect_inputs;
  auto* detect = app.add_subcommand("detect", "Edge map, magnitude image and manifest per input");
  detect->add_option("inputs", detect_inputs, "PGM or PNG images")->required();
  add_detector_options(detect, detect_opts, true);

  CommonOptions compare_opts;
  std::string compare_input;
  std::vector<std::string> compare_methods{"canny", "sobel", "dpc", "la", "mdpc", "la_mdpc"};
  auto* compare = app.add_subcommand("compare", "Run several methods on one image");
  compare->add_option("input", compare_input, "PGM or PNG image")->required();
  compare->add_option("--method,--methods", compare_methods, "Methods to compare")
      ->delimiter(',');
  add_detector_options(compare, compare_opts, false);

  CommonOptions sweep_opts;
  sweep_opts.method = "dpc";
  std::string sweep_input;
  std::vector<double> sweep_scales{0.1, 0.5, 1.0, 5.0};
  auto* sweep = app.add_subcommand("sweep", "Run one method over several scales");
  sweep->add_option("input", sweep_input, "PGM or PNG image")->required();
  sweep->add_option("--scales", sweep_scales, "Scales to run")->delimiter(',');
  add_detector_options(sweep, sweep_opts, true);

  std::vector<std::string> suites{"all"};
  std::vector<std::string> overrides;
  std::string verify_dir = ".";
  std::string verify_csv = "verify.csv";
  auto* ver = app.add_subcommand("verify", "Numerical identity checks on built-in fixtures");
  ver->add_option("--suite", suites, "all, theorem31, lemma32, lemma33, axial, theorem34, mismatch")
      ->delimiter(',');
  ver->add_option("--tolerance", overrides, "Override a tolerance, name=value");
  ver->add_option("--out-dir", verify_dir, "Output directory");
  ver->add_option("--csv", verify_csv, "CSV file name inside the output directory");

  SynthOptions synth_opts;
  auto* synth = app.add_subcommand("synth", "Write a synthetic fixture image");
  synth->add_option("kind", synth_opts.kind, "step, ramp, blob, plane, noise, noisy or blank")
      ->required();
  synth->add_option("output", synth_opts.output, "Output path")->required();
  synth->add_option("--width", synth_opts.width);
  synth->add_option("--height", synth_opts.height);
  synth->add_option("--seed", synth_opts.seed);
  synth->add_option("--noise", synth_opts.noise, "Noise std for 'noisy'");
  synth->add_option("--sigma", synth_opts.sigma, "Blob or smoothing sigma");
  synth->add_option("--omega", synth_opts.omega, "Plane-wave angular frequency");
  synth->add_option("--angle", synth_opts.angle, "Plane-wave direction");
  synth->add_option("--format", synth_opts.format, "pgm or png");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (detect->parsed()) return cmd_detect(detect_inputs, detect_opts, out, err);
    if (compare->parsed()) return cmd_compare(compare_input, compare_methods, compare_opts, out, err);
    if (sweep->parsed()) return cmd_sweep(sweep_input, sweep_scales, sweep_opts, out);
    if (ver->parsed()) return cmd_verify(suites, overrides, verify_dir, verify_csv, out);
    if (synth->parsed()) return cmd_synth(synth_opts, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitValidation;
}

}  // namespace monogenic::cli
