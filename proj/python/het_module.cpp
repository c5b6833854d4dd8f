#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "het/config.hpp"
#include "het/eval.hpp"
#include "het/image_io.hpp"
#include "het/synth.hpp"
#include "het/tracker.hpp"

namespace py = pybind11;
using namespace het;

namespace {

Frame frame_from_array(const py::array_t<std::uint8_t, py::array::c_style>& array) {
  if (array.ndim() != 2) throw py::value_error("expected a 2-D uint8 array (h, w)");
  const int h = static_cast<int>(array.shape(0));
  const int w = static_cast<int>(array.shape(1));
  std::vector<std::uint8_t> data(static_cast<std::size_t>(w) * h);
  std::memcpy(data.data(), array.data(), data.size());
  return Frame(w, h, std::move(data));
}

py::array_t<std::uint8_t> frame_to_array(const Frame& frame) {
  py::array_t<std::uint8_t> out({frame.height(), frame.width()});
  std::memcpy(out.mutable_data(), frame.data().data(), frame.data().size());
  return out;
}

Box box_from_tuple(const py::tuple& t) {
  if (t.size() != 4) throw py::value_error("box must be (x, y, w, h)");
  return Box{t[0].cast<int>(), t[1].cast<int>(), t[2].cast<int>(), t[3].cast<int>()};
}

py::tuple box_to_tuple(const Box& b) { return py::make_tuple(b.x, b.y, b.w, b.h); }

py::dict report_to_dict(const MetricReport& r) {
  py::dict d;
  d["center_errors"] = r.center_errors;
  d["overlaps"] = r.overlaps;
  d["precision_curve"] = r.precision_curve;
  d["success_curve"] = r.success_curve;
  d["success_auc"] = r.success_auc;
  d["precision_at_20"] = r.precision_at_20;
  return d;
}

}  // namespace

PYBIND11_MODULE(_het, m) {
  m.doc() = "hierarchical ensemble tracker";
  m.attr("__version__") = "0.1.0";

  py::class_<Frame>(m, "Frame")
      .def(py::init(&frame_from_array), py::arg("pixels"))
      .def_property_readonly("width", &Frame::width)
      .def_property_readonly("height", &Frame::height)
      .def("to_numpy", &frame_to_array);

  m.def("load_frame", &load_frame, py::arg("path"));
  m.def("read_pgm", &read_pgm, py::arg("path"));
  m.def("write_pgm", &write_pgm, py::arg("frame"), py::arg("path"));
  m.def("png_jpeg_supported", &png_jpeg_supported);

  m.def(
      "to_grayscale",
      [](const py::array_t<std::uint8_t, py::array::c_style>& rgb) {
        if (rgb.ndim() != 3 || rgb.shape(2) != 3) {
          throw py::value_error("expected an (h, w, 3) uint8 array");
        }
        const int h = static_cast<int>(rgb.shape(0));
        const int w = static_cast<int>(rgb.shape(1));
        return to_grayscale(
            std::span<const std::uint8_t>(rgb.data(), static_cast<std::size_t>(w) * h * 3), w, h);
      },
      py::arg("rgb"));

  py::class_<IntegralImage>(m, "IntegralImage")
      .def(py::init<const Frame&>(), py::arg("frame"))
      .def_property_readonly("width", &IntegralImage::width)
      .def_property_readonly("height", &IntegralImage::height)
      .def("at", &IntegralImage::at, py::arg("x"), py::arg("y"));

  m.def("build_integral", &build_integral, py::arg("frame"));
  m.def(
      "rect_sum",
      [](const IntegralImage& ii, std::pair<int, int> origin, py::tuple rect) {
        if (rect.size() != 4) throw py::value_error("rect must be (x, y, w, h)");
        return rect_sum(ii, Point{origin.first, origin.second},
                        Rect{rect[0].cast<int>(), rect[1].cast<int>(), rect[2].cast<int>(),
                             rect[3].cast<int>()});
      },
      py::arg("integral"), py::arg("origin"), py::arg("rect"));

  py::class_<SparseProjection>(m, "SparseProjection")
      .def_property_readonly("feature_count", &SparseProjection::feature_count)
      .def_readonly("patch_w", &SparseProjection::patch_w)
      .def_readonly("patch_h", &SparseProjection::patch_h)
      .def_readonly("seed", &SparseProjection::seed);

  m.def("generate_projection", &generate_projection, py::arg("seed"), py::arg("m"),
        py::arg("z_max"), py::arg("patch_w"), py::arg("patch_h"));
  m.def(
      "compress",
      [](const SparseProjection& proj, const IntegralImage& ii, std::pair<int, int> origin) {
        return compress(proj, ii, Point{origin.first, origin.second});
      },
      py::arg("projection"), py::arg("integral"), py::arg("origin"));

  m.def("normalize_weights",
        [](const std::vector<double>& scores) { return normalize_weights(scores); },
        py::arg("scores"));
  m.def(
      "combine_votes",
      [](const std::vector<std::pair<double, double>>& votes, const std::vector<double>& weights) {
        std::vector<Vec2> v;
        v.reserve(votes.size());
        for (const auto& [x, y] : votes) v.push_back(Vec2{x, y});
        const Measurement meas = combine_votes(v, weights);
        return py::make_tuple(py::make_tuple(meas.center.x, meas.center.y), meas.confidence);
      },
      py::arg("votes"), py::arg("weights"));

  py::class_<KalmanConfig>(m, "KalmanConfig")
      .def(py::init<>())
      .def_readwrite("p0", &KalmanConfig::p0)
      .def_readwrite("q_pos", &KalmanConfig::q_pos)
      .def_readwrite("q_vel", &KalmanConfig::q_vel)
      .def_readwrite("r_pos", &KalmanConfig::r_pos);

  py::class_<TrackerConfig>(m, "TrackerConfig")
      .def(py::init<>())
      .def_readwrite("m", &TrackerConfig::m)
      .def_readwrite("q_patches", &TrackerConfig::q_patches)
      .def_readwrite("z_max", &TrackerConfig::z_max)
      .def_readwrite("learning_rate", &TrackerConfig::learning_rate)
      .def_readwrite("beta", &TrackerConfig::beta)
      .def_readwrite("pi", &TrackerConfig::pi)
      .def_readwrite("stride", &TrackerConfig::stride)
      .def_readwrite("n_update", &TrackerConfig::n_update)
      .def_readwrite("patch_scale", &TrackerConfig::patch_scale)
      .def_readwrite("predictive_search", &TrackerConfig::predictive_search)
      .def_readwrite("seed", &TrackerConfig::seed)
      .def_readwrite("kalman", &TrackerConfig::kalman);

  py::class_<TrackOutput>(m, "TrackOutput")
      .def_property_readonly("frame_index", [](const TrackOutput& o) { return o.frame_index; })
      .def_property_readonly("box", [](const TrackOutput& o) { return box_to_tuple(o.box); })
      .def_property_readonly("confidence",
                             [](const TrackOutput& o) { return o.measurement.confidence; })
      .def_property_readonly("center",
                             [](const TrackOutput& o) {
                               return py::make_tuple(o.measurement.center.x,
                                                     o.measurement.center.y);
                             })
      .def_property_readonly("velocity", [](const TrackOutput& o) {
        return py::make_tuple(o.kalman_velocity.x, o.kalman_velocity.y);
      });

  py::class_<Tracker>(m, "Tracker")
      .def(py::init([](const Frame& first, const py::tuple& box, const TrackerConfig& config) {
             return Tracker(first, box_from_tuple(box), config);
           }),
           py::arg("first_frame"), py::arg("init_box"), py::arg("config") = TrackerConfig{})
      .def("step", &Tracker::step, py::arg("frame"))
      .def_property_readonly("frame_index", &Tracker::frame_index)
      .def_property_readonly("box",
                             [](const Tracker& t) { return box_to_tuple(t.current_box()); });

  m.def(
      "overlap",
      [](const py::tuple& a, const py::tuple& b) {
        return overlap(box_from_tuple(a), box_from_tuple(b));
      },
      py::arg("a"), py::arg("b"));
  m.def(
      "center_error",
      [](const py::tuple& a, const py::tuple& b) {
        return center_error(box_from_tuple(a), box_from_tuple(b));
      },
      py::arg("a"), py::arg("b"));

  py::class_<Sequence>(m, "Sequence")
      .def_readonly("name", &Sequence::name)
      .def_readonly("frames", &Sequence::frames)
      .def_property_readonly("ground_truth",
                             [](const Sequence& s) {
                               py::list out;
                               for (const Box& b : s.ground_truth) out.append(box_to_tuple(b));
                               return out;
                             })
      .def_readonly("attributes", &Sequence::attributes);

  m.def("load_sequence", &load_sequence, py::arg("directory"));
  m.def(
      "run_ope",
      [](const TrackerConfig& config, const Sequence& seq) {
        const OpeResult result = run_ope(config, seq);
        py::dict d;
        py::list boxes;
        for (const Box& b : result.boxes) boxes.append(box_to_tuple(b));
        d["boxes"] = boxes;
        d["confidences"] = result.confidences;
        d["report"] = report_to_dict(result.report);
        d["decode_seconds"] = result.decode_seconds;
        d["track_seconds"] = result.track_seconds;
        return d;
      },
      py::arg("config"), py::arg("sequence"));

  py::enum_<Trajectory>(m, "Trajectory")
      .value("CONSTANT_VELOCITY", Trajectory::kConstantVelocity)
      .value("SINUSOIDAL", Trajectory::kSinusoidal);

  py::enum_<BackgroundKind>(m, "BackgroundKind")
      .value("UNIFORM", BackgroundKind::kUniform)
      .value("CLUTTER", BackgroundKind::kClutter);

  py::class_<ScenarioSpec>(m, "ScenarioSpec")
      .def(py::init<>())
      .def_readwrite("width", &ScenarioSpec::width)
      .def_readwrite("height", &ScenarioSpec::height)
      .def_readwrite("frame_count", &ScenarioSpec::frame_count)
      .def_readwrite("target_w", &ScenarioSpec::target_w)
      .def_readwrite("target_h", &ScenarioSpec::target_h)
      .def_readwrite("start_x", &ScenarioSpec::start_x)
      .def_readwrite("start_y", &ScenarioSpec::start_y)
      .def_readwrite("trajectory", &ScenarioSpec::trajectory)
      .def_readwrite("vel_x", &ScenarioSpec::vel_x)
      .def_readwrite("vel_y", &ScenarioSpec::vel_y)
      .def_readwrite("sin_amplitude", &ScenarioSpec::sin_amplitude)
      .def_readwrite("sin_period", &ScenarioSpec::sin_period)
      .def_readwrite("noise_sigma", &ScenarioSpec::noise_sigma)
      .def_readwrite("background", &ScenarioSpec::background)
      .def_readwrite("background_gray", &ScenarioSpec::background_gray)
      .def_readwrite("clutter_amplitude", &ScenarioSpec::clutter_amplitude)
      .def_readwrite("texture_smoothing", &ScenarioSpec::texture_smoothing)
      .def_readwrite("seed", &ScenarioSpec::seed)
      .def_readwrite("texture_seed", &ScenarioSpec::texture_seed)
      .def_readwrite("occlude_from", &ScenarioSpec::occlude_from)
      .def_readwrite("occlude_to", &ScenarioSpec::occlude_to);

  m.def("render_frame", &render_frame, py::arg("spec"), py::arg("frame_index"));
  m.def("scenario_box",
        [](const ScenarioSpec& spec, int k) { return box_to_tuple(scenario_box(spec, k)); },
        py::arg("spec"), py::arg("frame_index"));
  m.def("generate_synthetic", &generate_synthetic, py::arg("spec"), py::arg("out_dir"));
}
