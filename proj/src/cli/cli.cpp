#include "graspkit/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "graspkit/config.hpp"
#include "graspkit/cornell.hpp"
#include "graspkit/errors.hpp"
#include "graspkit/fvit.hpp"
#include "graspkit/metric.hpp"
#include "graspkit/ply.hpp"
#include "graspkit/synth.hpp"
#include "graspkit/weights_io.hpp"

namespace graspkit {
namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string join_g9(std::span<const double> v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : " ") + fmt("%.9g", x);
  return s;
}

std::vector<double> parse_numbers(const std::string& text, const char* what) {
  std::vector<double> out;
  std::string s = text;
  for (char& c : s)
    if (c == ',') c = ' ';
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || !std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument, std::string("bad number in ") + what + ": '" + tok + "'");
    }
    out.push_back(v);
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot write " + path);
  f << text;
  if (!f) throw Error(ErrorCode::kIo, "write failed: " + path);
}

struct Common {
  std::string config;
  std::vector<std::string> sets;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--config", config, "key = value configuration file");
    cmd->add_option("--set", sets, "override, section.key=value (repeatable)");
  }
  RunConfig load() const {
    RunConfig cfg = config.empty() ? RunConfig() : RunConfig::load(config);
    for (const auto& s : sets) cfg.set_assignment(s);
    return cfg;
  }
};

std::string histogram_line(const RejectionHistogram& h) {
  return "penetration=" + std::to_string(h.penetration) + " no_contact=" + std::to_string(h.no_contact) +
         " not_antipodal=" + std::to_string(h.not_antipodal) + " degenerate_seeds=" + std::to_string(h.degenerate_seeds);
}

}  // namespace

std::vector<Vec2> parse_pixel_polygon(const std::string& text) {
  std::vector<Vec2> poly;
  std::istringstream in(text);
  std::string pair;
  while (in >> pair) {
    const std::size_t comma = pair.find(',');
    if (comma == std::string::npos || pair.find(',', comma + 1) != std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument, "region vertices must be 'x,y', got '" + pair + "'");
    }
    const auto xy = parse_numbers(pair, "region");
    if (xy.size() != 2) throw Error(ErrorCode::kInvalidArgument, "region vertices must be 'x,y', got '" + pair + "'");
    poly.push_back({xy[0], xy[1]});
  }
  if (poly.size() < 3) throw Error(ErrorCode::kInvalidArgument, "region needs at least 3 vertices");
  return poly;
}

std::string format_candidate(const GraspCandidate& c) {
  const auto pose = c.pose.to_row_major();
  return "pose=" + join_g9(pose) + " cost=" + fmt("%.9g", c.cost) + " seed_index=" + std::to_string(c.seed_index) +
         " orientation=" + std::to_string(c.orientation_index) + " opening=" + fmt("%.9g", c.opening) +
         " contacts=" + std::to_string(c.left_contacts.size()) + "," + std::to_string(c.right_contacts.size());
}

std::vector<float> parse_feature_text(const std::string& text) {
  std::string stripped;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    stripped += line + "\n";
  }
  const auto values = parse_numbers(stripped, "feature file");
  if (values.size() != kFeatureDim) {
    throw Error(ErrorCode::kShapeMismatch,
                "feature file holds " + std::to_string(values.size()) + " values, expected 768");
  }
  return {values.begin(), values.end()};
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Grasp rectangle metric, antipodal grasp search and regression-head inference."};
  app.name(args.empty() ? "graspkit" : args[0]);
  app.require_subcommand(1);

  // eval
  struct {
    std::string pred, truth, report, ids;
    double jaccard = 0.25, angle_deg = 30.0;
    bool no_angle = false;
    Common common;
  } ev;
  auto* eval = app.add_subcommand("eval", "score a prediction directory against Cornell annotations");
  eval->add_option("--pred", ev.pred, "directory of pcdNNNNc<tag>.txt predictions")->required();
  eval->add_option("--truth", ev.truth, "directory of pcdNNNNcpos.txt / cneg.txt annotations")->required();
  auto* opt_jac = eval->add_option("--jaccard", ev.jaccard, "Jaccard threshold");
  auto* opt_ang = eval->add_option("--angle-deg", ev.angle_deg, "angle threshold in degrees");
  eval->add_flag("--no-angle-check", ev.no_angle, "disable the angle condition");
  eval->add_option("--report", ev.report, "write per-image records here");
  eval->add_option("--ids", ev.ids, "file listing the image ids to score, one per line");
  ev.common.add_to(eval);

  // grasp / bench
  struct {
    std::string cloud, region, out;
    std::size_t repeat = 20;
    Common common;
  } gr;
  auto* grasp = app.add_subcommand("grasp", "find the lowest-cost antipodal grasp inside an image region");
  grasp->add_option("--cloud", gr.cloud, "ASCII PLY point cloud")->required();
  grasp->add_option("--region", gr.region, "pixel polygon 'x1,y1 x2,y2 ...'")->required();
  grasp->add_option("--out", gr.out, "write the grasp line here");
  gr.common.add_to(grasp);
  auto* bench = app.add_subcommand("bench", "time the grasp search on the full cloud and on the crop");
  bench->add_option("--cloud", gr.cloud, "ASCII PLY point cloud")->required();
  bench->add_option("--region", gr.region, "pixel polygon 'x1,y1 x2,y2 ...'")->required();
  bench->add_option("--repeat", gr.repeat, "timed repetitions")->check(CLI::PositiveNumber);
  gr.common.add_to(bench);

  // synth
  struct {
    std::string shape, dims, pose, out, truth_out;
    double radius = 0.015, length = 0.1, table = 0.6;
    Common common;
  } sy;
  auto* synth = app.add_subcommand("synth", "generate a synthetic scene with its grasp truth");
  synth->add_option("--shape", sy.shape, "box, cylinder, plane, sphere or scene (box on a table)")
      ->required()
      ->check(CLI::IsMember({"box", "cylinder", "plane", "sphere", "scene"}));
  synth->add_option("--dims", sy.dims, "box sides 'w,d,h' or plane sides 'sx,sy'");
  synth->add_option("--radius", sy.radius, "cylinder or sphere radius");
  synth->add_option("--length", sy.length, "cylinder length");
  synth->add_option("--table", sy.table, "table side for --shape scene");
  synth->add_option("--pose", sy.pose, "12 numbers, row-major rotation then translation");
  synth->add_option("--out", sy.out, "output PLY")->required();
  synth->add_option("--truth-out", sy.truth_out, "truth sidecar");
  sy.common.add_to(synth);

  // infer / weights
  struct {
    std::string weights, feature, out;
    std::size_t out_dim = 5;
    std::uint64_t seed = 0;
    bool check = false, zero = false;
    Common common;
  } in;
  auto* infer = app.add_subcommand("infer", "run the regression head on a 768-value feature");
  infer->add_option("--weights", in.weights, "weight container")->required();
  infer->add_option("--feature", in.feature, "text file with 768 numbers")->required();
  infer->add_option("--out-dim", in.out_dim, "5 or 8")->check(CLI::IsMember({5, 8}));
  infer->add_flag("--check-oracle", in.check, "compare with a double-precision matmul");
  auto* make = app.add_subcommand("make-weights", "write a deterministic weight container");
  make->add_option("--out", in.out, "output path")->required();
  make->add_option("--seed", in.seed, "generator seed");
  make->add_option("--out-dim", in.out_dim, "5 or 8")->check(CLI::IsMember({5, 8}));
  make->add_flag("--zero", in.zero, "all weights and biases zero");
  in.common.add_to(make);
  auto* inspect = app.add_subcommand("inspect-weights", "list the tensors of a weight container");
  inspect->add_option("--weights", in.weights, "weight container")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*eval) {
      RunConfig cfg = ev.common.load();
      EvalConfig ec = cfg.eval();
      if (*opt_jac) ec.jaccard_threshold = ev.jaccard;
      if (*opt_ang) ec.angle_threshold = ev.angle_deg * std::numbers::pi / 180.0;
      if (ev.no_angle) ec.angle_check_enabled = false;
      ec.validate();
      const auto truths = scan_cornell_dir(ev.truth);
      auto preds = load_prediction_dir(ev.pred);
      if (!ev.ids.empty()) {
        std::set<std::string> wanted;
        std::istringstream ids(read_text_file(ev.ids));
        std::string id;
        while (ids >> id) wanted.insert(id);
        for (const auto& w : wanted)
          if (!preds.count(w)) throw Error(ErrorCode::kMissingAnnotation, ev.pred + ": no prediction for image " + w);
        std::erase_if(preds, [&](const auto& kv) { return !wanted.count(kv.first); });
      }
      if (preds.empty()) throw Error(ErrorCode::kIo, ev.pred + ": no prediction files");
      std::map<std::string, GraspRegion> pred_regions;
      for (const auto& [id, r] : preds) pred_regions.emplace(id, GraspRegion::from_corners(r));
      std::map<std::string, std::vector<GraspRegion>> truth_regions;
      for (const auto& [id, set] : truths) {
        auto& v = truth_regions[id];
        for (const auto& r : set.positives) v.push_back(GraspRegion::from_corners(r));
      }
      const EvalReport report = evaluate_dataset(pred_regions, truth_regions, ec);
      std::string records;
      for (const auto& r : report.per_image) {
        records += "image=" + r.image_id + " iou=" + fmt("%.6f", r.best_iou) + " matched=" + (r.matched ? "1" : "0") + "\n";
      }
      const std::string summary =
          "accuracy=" + fmt("%.6f", report.accuracy) + " n=" + std::to_string(report.n_images) + "\n";
      if (!ev.report.empty()) {
        write_text(ev.report, records + summary);
      } else {
        out << records;
      }
      out << summary;
      return kExitOk;
    }

    if (*grasp || *bench) {
      const RunConfig cfg = gr.common.load();
      const PointCloud cloud = read_ply(gr.cloud);
      const auto poly = parse_pixel_polygon(gr.region);
      const WorldRegion region = project_polygon_region(poly, cfg.intrinsics(), cfg.camera_pose(), cfg.band());
      const SamplerConfig sc = cfg.sampler();
      const GripperModel g = cfg.gripper();
      try {
        if (*grasp) {
          const GraspCandidate c = best_grasp(cloud, region, sc, g);
          const std::string line = format_candidate(c) + "\n";
          out << line;
          if (!gr.out.empty()) write_text(gr.out, line);
          return kExitOk;
        }
        const BenchResult b = run_bench(cloud, region, sc, g, gr.repeat);
        out << "points full=" << b.full_points << " cropped=" << b.cropped_points << "\n";
        for (std::size_t i = 0; i < b.full.seconds.size(); ++i) {
          out << "run=" << i << " full=" << fmt("%.6f", b.full.seconds[i]) << " cropped=" << fmt("%.6f", b.cropped.seconds[i])
              << "\n";
        }
        for (const auto& [name, t] : {std::pair{"full", &b.full}, std::pair{"cropped", &b.cropped}}) {
          out << name << " mean=" << fmt("%.6f", t->mean) << " stddev=" << fmt("%.6f", t->stddev)
              << " median=" << fmt("%.6f", t->median) << "\n";
        }
        out << "speedup=" << fmt("%.3f", b.speedup) << "\n";
        out << "cost full=" << fmt("%.9g", b.full_cost) << " cropped=" << fmt("%.9g", b.cropped_cost)
            << " identical=" << (b.full_cost == b.cropped_cost ? 1 : 0) << "\n";
        return kExitOk;
      } catch (const NoValidGraspError& e) {
        err << "no valid grasp: " << histogram_line(e.histogram()) << "\n";
        return kExitNoGrasp;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kEmptyCloud) throw;
        err << "no valid grasp: region holds no points\n";
        return kExitNoGrasp;
      }
    }

    if (*synth) {
      const RunConfig cfg = sy.common.load();
      const SynthOptions opt = cfg.synth();
      RigidPose pose;
      if (!sy.pose.empty()) {
        const auto v = parse_numbers(sy.pose, "--pose");
        if (v.size() != 12) throw Error(ErrorCode::kInvalidArgument, "--pose needs 12 numbers");
        std::array<double, 12> a{};
        std::copy(v.begin(), v.end(), a.begin());
        pose = RigidPose::from_row_major(a);
      }
      std::vector<double> dims = sy.dims.empty() ? std::vector<double>{} : parse_numbers(sy.dims, "--dims");
      SyntheticScene scene;
      if (sy.shape == "box" || sy.shape == "scene") {
        if (dims.empty()) dims = {0.04, 0.12, 0.1};
        if (dims.size() != 3) throw Error(ErrorCode::kInvalidArgument, "--dims needs w,d,h");
        if (sy.shape == "box") {
          scene = gen_box_scene(dims[0], dims[1], dims[2], pose, opt);
        } else {
          // Box resting on a square table at z = 0; --pose moves both.
          const RigidPose lift = RigidPose::make(Mat3::identity(), {0, 0, dims[2] / 2});
          SynthOptions box_opt = opt;
          box_opt.seed = opt.seed + 1;
          const SyntheticScene box = gen_box_scene(dims[0], dims[1], dims[2], pose * lift, box_opt);
          const SyntheticScene table = gen_plane_patch(sy.table, sy.table, pose, opt);
          scene = box;
          scene.shape = "scene";
          scene.cloud = concat(table.cloud, box.cloud);
        }
      } else if (sy.shape == "cylinder") {
        scene = gen_cylinder_scene(sy.radius, sy.length, pose, opt);
      } else if (sy.shape == "sphere") {
        scene = gen_sphere_scene(sy.radius, pose, opt);
      } else {
        if (dims.empty()) dims = {0.1, 0.1};
        if (dims.size() != 2) throw Error(ErrorCode::kInvalidArgument, "--dims needs sx,sy for a plane");
        scene = gen_plane_patch(dims[0], dims[1], pose, opt);
      }
      write_ply(sy.out, scene.cloud);
      const auto& t = scene.truth;
      const std::string truth = "shape=" + scene.shape + "\npoints=" + std::to_string(scene.cloud.size()) +
                                "\ncenter=" + join_g9(std::array{t.center.x, t.center.y, t.center.z}) +
                                "\naxis=" + join_g9(std::array{t.axis.x, t.axis.y, t.axis.z}) +
                                "\nwidth=" + fmt("%.9g", t.width) + "\ngraspable=" + (t.graspable ? "1" : "0") + "\n";
      if (!sy.truth_out.empty()) write_text(sy.truth_out, truth);
      out << truth;
      return kExitOk;
    }

    if (*infer) {
      const HeadWeights w = load_weights_unchecked(in.weights);
      const std::vector<float> feature = parse_feature_text(read_text_file(in.feature));
      const TensorF x({kFeatureDim}, feature);
      const TensorF y = regression_forward(x, w, in.out_dim);
      std::vector<double> yd(y.data().begin(), y.data().end());
      out << "output=" << join_g9(yd) << "\n";
      if (in.check) {
        const auto ref = regression_forward_reference(x, w);
        double diff = 0.0;
        for (std::size_t i = 0; i < ref.size(); ++i) diff = std::max(diff, std::abs(ref[i] - yd[i]));
        out << "oracle_max_abs_diff=" << fmt("%.3g", diff) << "\n";
      }
      return kExitOk;
    }

    if (*make) {
      const RunConfig cfg = in.common.load();
      const HiLoConfig hc = cfg.hilo();
      const HeadWeights w = in.zero ? make_zero_weights(hc, in.out_dim) : make_random_weights(in.seed, hc, in.out_dim);
      const auto bytes = encode_weights(w);
      write_file_bytes(in.out, bytes);
      out << "wrote " << in.out << " tensors=" << weight_names().size() << " bytes=" << bytes.size() << "\n";
      return kExitOk;
    }

    if (*inspect) {
      for (const NamedTensor& t : decode_tensors(read_file_bytes(in.weights))) {
        std::string shape;
        for (std::size_t d : t.tensor.shape()) shape += (shape.empty() ? "" : "x") + std::to_string(d);
        out << t.name << " " << (shape.empty() ? "scalar" : shape) << "\n";
      }
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace graspkit
