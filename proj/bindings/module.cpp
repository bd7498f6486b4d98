#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "stormcast/canny.hpp"
#include "stormcast/contours.hpp"
#include "stormcast/dbscan.hpp"
#include "stormcast/errors.hpp"
#include "stormcast/features.hpp"
#include "stormcast/image_io.hpp"
#include "stormcast/ingest.hpp"
#include "stormcast/metrics.hpp"
#include "stormcast/sampling.hpp"
#include "stormcast/svm.hpp"

namespace py = pybind11;
using namespace stormcast;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using IntArray = py::array_t<int64_t, py::array::c_style | py::array::forcecast>;
using BoolArray = py::array_t<bool, py::array::c_style | py::array::forcecast>;

GrayImage to_image(const DoubleArray& arr) {
    if (arr.ndim() != 2) throw std::invalid_argument("expected a 2-D array");
    GrayImage img(int(arr.shape(1)), int(arr.shape(0)));
    auto r = arr.unchecked<2>();
    for (py::ssize_t y = 0; y < arr.shape(0); ++y)
        for (py::ssize_t x = 0; x < arr.shape(1); ++x) img.at(int(x), int(y)) = r(y, x);
    return img;
}

py::array_t<bool> from_binary(const BinaryImage& img) {
    py::array_t<bool> out({img.height(), img.width()});
    auto w = out.mutable_unchecked<2>();
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) w(y, x) = img.at(x, y);
    return out;
}

py::array_t<double> from_image(const GrayImage& img) {
    py::array_t<double> out({img.height(), img.width()});
    auto w = out.mutable_unchecked<2>();
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) w(y, x) = img.at(x, y);
    return out;
}

BinaryImage to_binary(const BoolArray& arr) {
    if (arr.ndim() != 2) throw std::invalid_argument("expected a 2-D array");
    BinaryImage img(int(arr.shape(1)), int(arr.shape(0)));
    auto r = arr.unchecked<2>();
    for (py::ssize_t y = 0; y < arr.shape(0); ++y)
        for (py::ssize_t x = 0; x < arr.shape(1); ++x) img.set(int(x), int(y), r(y, x));
    return img;
}

std::vector<FeatureVector> to_samples(const DoubleArray& x) {
    if (x.ndim() != 2) throw std::invalid_argument("expected a 2-D sample matrix");
    std::vector<FeatureVector> out(size_t(x.shape(0)), FeatureVector(size_t(x.shape(1))));
    auto r = x.unchecked<2>();
    for (py::ssize_t i = 0; i < x.shape(0); ++i)
        for (py::ssize_t j = 0; j < x.shape(1); ++j) out[size_t(i)][size_t(j)] = r(i, j);
    return out;
}

py::array_t<double> from_samples(const std::vector<FeatureVector>& rows) {
    const py::ssize_t d = rows.empty() ? 0 : py::ssize_t(rows[0].size());
    py::array_t<double> out({py::ssize_t(rows.size()), d});
    auto w = out.mutable_unchecked<2>();
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows[i].size(); ++j) w(py::ssize_t(i), py::ssize_t(j)) = rows[i][j];
    return out;
}

std::vector<double> to_vector(const DoubleArray& x) {
    if (x.ndim() != 1) throw std::invalid_argument("expected a 1-D array");
    std::vector<double> out(size_t(x.shape(0)));
    auto r = x.unchecked<1>();
    for (py::ssize_t i = 0; i < x.shape(0); ++i) out[size_t(i)] = r(i);
    return out;
}

std::vector<StormClass> to_classes(const IntArray& labels) {
    if (labels.ndim() != 1) throw std::invalid_argument("expected a 1-D label array");
    std::vector<StormClass> out(size_t(labels.shape(0)));
    auto r = labels.unchecked<1>();
    for (py::ssize_t i = 0; i < labels.shape(0); ++i)
        out[size_t(i)] = r(i) != 0 ? StormClass::storm : StormClass::no_storm;
    return out;
}

CannyParams make_canny_params(double sigma, double low, double high, double margin) {
    CannyParams p;
    p.smoothing_sigma = sigma;
    p.low_threshold = low;
    p.high_threshold = high;
    p.disk_margin_fraction = margin;
    p.validate();
    return p;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Solar-image geomagnetic storm forecasting core";
    m.attr("WORKING_SIZE") = kWorkingSize;

    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);

    // ---- imaging ----
    m.def("load_image",
          [](const std::filesystem::path& p, int working_size) {
              return from_image(load_image(p, working_size));
          },
          py::arg("path"), py::arg("working_size") = kWorkingSize,
          "Decode PNG/JPEG to a 2-D grayscale array, resampled to the working size");

    m.def("gaussian_smooth",
          [](const DoubleArray& img, double sigma) {
              return from_image(gaussian_smooth(to_image(img), sigma));
          },
          py::arg("image"), py::arg("sigma"));

    m.def("sobel_magnitude",
          [](const DoubleArray& img) {
              const auto g = sobel_gradient(to_image(img));
              GrayImage mag(g.width, g.height);
              mag.pixels() = g.magnitude;
              return from_image(mag);
          },
          py::arg("image"));

    m.def("canny",
          [](const DoubleArray& img, double sigma, double low, double high, double margin) {
              return from_binary(canny(to_image(img),
                                       make_canny_params(sigma, low, high, margin)));
          },
          py::arg("image"), py::arg("sigma") = 1.4, py::arg("low") = 300.0,
          py::arg("high") = 600.0, py::arg("disk_margin") = 0.02,
          "Edge map with the solar limb masked out");

    m.def("solar_disk",
          [](const DoubleArray& img) {
              const auto d = solar_disk_mask(to_image(img));
              return py::make_tuple(d.center_x, d.center_y, d.radius);
          },
          py::arg("image"), "(center_x, center_y, radius) of the bright disk");

    m.def("count_sunspots",
          [](const BoolArray& edges, size_t min_perimeter) {
              return count_sunspots(find_contours(to_binary(edges)), min_perimeter);
          },
          py::arg("edges"), py::arg("min_perimeter") = 4,
          "External contours with perimeter >= min_perimeter");

    m.def("find_contours",
          [](const BoolArray& edges) {
              py::list out;
              for (const auto& c : find_contours(to_binary(edges))) {
                  py::array_t<int64_t> pts({py::ssize_t(c.points.size()), py::ssize_t(2)});
                  auto w = pts.mutable_unchecked<2>();
                  for (size_t i = 0; i < c.points.size(); ++i) {
                      w(py::ssize_t(i), 0) = c.points[i].first;
                      w(py::ssize_t(i), 1) = c.points[i].second;
                  }
                  out.append(std::move(pts));
              }
              return out;
          },
          py::arg("edges"), "List of (n, 2) arrays of (x, y) boundary points");

    m.def("extract_counts",
          [](const DoubleArray& img, double sigma, double low, double high, double margin,
             double eps, int min_pts) {
              DbscanParams db{eps, min_pts};
              const auto rec = extract_features(
                  to_image(img), make_canny_params(sigma, low, high, margin), db);
              return py::make_tuple(rec.sunspots, rec.regions);
          },
          py::arg("image"), py::arg("sigma") = 1.4, py::arg("low") = 300.0,
          py::arg("high") = 600.0, py::arg("disk_margin") = 0.02, py::arg("eps") = 10.0,
          py::arg("min_pts") = 5, "(active sunspots, active regions) for one day-image");

    // ---- clustering ----
    m.def("dbscan",
          [](const DoubleArray& points, double eps, int min_pts) {
              if (points.ndim() != 2 || points.shape(1) != 2)
                  throw std::invalid_argument("expected an (n, 2) point array");
              std::vector<Point2D> pts(size_t(points.shape(0)));
              auto r = points.unchecked<2>();
              for (py::ssize_t i = 0; i < points.shape(0); ++i)
                  pts[size_t(i)] = {r(i, 0), r(i, 1)};
              const auto labeling = dbscan(pts, DbscanParams{eps, min_pts});
              py::array_t<int64_t> labels(py::ssize_t(labeling.labels.size()));
              auto w = labels.mutable_unchecked<1>();
              for (size_t i = 0; i < labeling.labels.size(); ++i)
                  w(py::ssize_t(i)) = labeling.labels[i];
              return py::make_tuple(labels, labeling.n_clusters);
          },
          py::arg("points"), py::arg("eps") = 10.0, py::arg("min_pts") = 5,
          "(labels, n_clusters); label -1 is noise");

    // ---- scaling / sampling ----
    py::class_<Scaler>(m, "Scaler")
        .def_static("fit", [](const DoubleArray& x) { return Scaler::fit(to_samples(x)); })
        .def("transform",
             [](const Scaler& s, const DoubleArray& x) {
                 auto rows = to_samples(x);
                 for (auto& row : rows) row = s.transform(row);
                 return from_samples(rows);
             })
        .def_property_readonly("mins",
                               [](const Scaler& s) {
                                   std::vector<double> v(s.dimension());
                                   for (size_t i = 0; i < v.size(); ++i) v[i] = s.min_of(i);
                                   return v;
                               })
        .def_property_readonly("maxs", [](const Scaler& s) {
            std::vector<double> v(s.dimension());
            for (size_t i = 0; i < v.size(); ++i) v[i] = s.max_of(i);
            return v;
        });

    m.def("smote",
          [](const DoubleArray& minority, size_t majority_count, int k, double ratio,
             uint64_t seed, std::vector<size_t> binary_indices) {
              SmoteConfig cfg;
              cfg.k_neighbors = k;
              cfg.target_ratio = ratio;
              cfg.seed = seed;
              cfg.binary_indices = std::move(binary_indices);
              return from_samples(smote(to_samples(minority), majority_count, cfg).synthetic);
          },
          py::arg("minority"), py::arg("majority_count"), py::arg("k_neighbors") = 5,
          py::arg("target_ratio") = 1.0, py::arg("seed") = 0,
          py::arg("binary_indices") = std::vector<size_t>{kPrevStormIndex},
          "Synthetic minority rows interpolated between nearest neighbors");

    m.def("stratified_split_indices",
          [](const IntArray& labels, double test_fraction, uint64_t seed) {
              const auto classes = to_classes(labels);
              std::vector<LabeledExample> examples(classes.size());
              for (size_t i = 0; i < classes.size(); ++i) {
                  examples[i].date = shift_days(make_date(2000, 1, 1), int(i));
                  examples[i].features = {double(i)};
                  examples[i].label = classes[i];
              }
              const auto split = stratified_split(examples, SplitConfig{test_fraction, seed});
              auto to_index_array = [](const std::vector<LabeledExample>& v) {
                  py::array_t<int64_t> out(py::ssize_t(v.size()));
                  auto w = out.mutable_unchecked<1>();
                  for (size_t i = 0; i < v.size(); ++i)
                      w(py::ssize_t(i)) = int64_t(v[i].features[0]);
                  return out;
              };
              return py::make_tuple(to_index_array(split.train), to_index_array(split.test));
          },
          py::arg("labels"), py::arg("test_fraction") = 0.2, py::arg("seed") = 0,
          "(train_indices, test_indices), stratified per class");

    // ---- learning ----
    py::class_<SvmModel>(m, "SvmModel")
        .def_property_readonly("bias", [](const SvmModel& s) { return s.bias; })
        .def_property_readonly("gamma", [](const SvmModel& s) { return s.gamma; })
        .def_property_readonly("n_support",
                               [](const SvmModel& s) { return s.support_vectors.size(); })
        .def_property_readonly("converged", [](const SvmModel& s) { return s.meta.converged; })
        .def("decision_values",
             [](const SvmModel& s, const DoubleArray& v) {
                 auto rows = to_samples(v);
                 py::array_t<double> out(py::ssize_t(rows.size()));
                 auto w = out.mutable_unchecked<1>();
                 for (size_t i = 0; i < rows.size(); ++i)
                     w(py::ssize_t(i)) = decision_value(s, rows[i]);
                 return out;
             },
             py::arg("scaled_rows"), "Decision values for already-scaled sample rows")
        .def("predict",
             [](const SvmModel& s, const DoubleArray& raw) {
                 auto rows = to_samples(raw);
                 py::array_t<int64_t> out(py::ssize_t(rows.size()));
                 auto w = out.mutable_unchecked<1>();
                 for (size_t i = 0; i < rows.size(); ++i)
                     w(py::ssize_t(i)) = predict(s, rows[i]) == StormClass::storm ? 1 : 0;
                 return out;
             },
             py::arg("raw_rows"), "Storm (1) / no-storm (0) for raw sample rows")
        .def("save", [](const SvmModel& s, const std::filesystem::path& p) { save_model(p, s); })
        .def_static("load", [](const std::filesystem::path& p) { return load_model(p); });

    m.def("train_gsvm",
          [](const DoubleArray& x, const IntArray& y, double c, double gamma, double tolerance,
             int max_passes, bool with_scaler) {
              const auto raw = to_samples(x);
              std::vector<int> labels(size_t(y.shape(0)));
              auto r = y.unchecked<1>();
              for (py::ssize_t i = 0; i < y.shape(0); ++i)
                  labels[size_t(i)] = r(i) != 0 ? 1 : -1;

              SvmConfig cfg;
              cfg.c = c;
              cfg.gamma = gamma;
              cfg.tolerance = tolerance;
              cfg.max_passes = max_passes;

              if (!with_scaler) return train_gsvm(raw, labels, cfg);
              const Scaler scaler = Scaler::fit(raw);
              std::vector<FeatureVector> scaled;
              scaled.reserve(raw.size());
              for (const auto& row : raw) scaled.push_back(scaler.transform(row));
              SvmModel model = train_gsvm(scaled, labels, cfg);
              model.scaler = scaler;
              return model;
          },
          py::arg("x"), py::arg("y"), py::arg("c") = 1.0, py::arg("gamma") = 0.0,
          py::arg("tolerance") = 1e-3, py::arg("max_passes") = 10000,
          py::arg("with_scaler") = false,
          "Train the Gaussian-kernel classifier; y is 1 = storm, 0 = no-storm; "
          "gamma <= 0 selects the automatic width");

    // ---- evaluation ----
    m.def("pearson",
          [](const DoubleArray& x, const DoubleArray& y) {
              return pearson(to_vector(x), to_vector(y));
          },
          py::arg("x"), py::arg("y"));

    m.def("mean_signed_difference",
          [](const DoubleArray& x, const DoubleArray& y) {
              return mean_signed_difference(to_vector(x), to_vector(y));
          },
          py::arg("x"), py::arg("y"));

    m.def("roc_curve",
          [](const DoubleArray& scores, const IntArray& labels) {
              const auto roc = roc_curve(to_vector(scores), to_classes(labels));
              py::array_t<double> pts({py::ssize_t(roc.points.size()), py::ssize_t(2)});
              auto w = pts.mutable_unchecked<2>();
              for (size_t i = 0; i < roc.points.size(); ++i) {
                  w(py::ssize_t(i), 0) = roc.points[i].fpr;
                  w(py::ssize_t(i), 1) = roc.points[i].tpr;
              }
              return py::make_tuple(pts, roc.auc);
          },
          py::arg("scores"), py::arg("labels"), "((n, 2) fpr/tpr points, auc)");

    m.def("classification_metrics",
          [](const IntArray& pred, const IntArray& truth) {
              const auto rep = classification_metrics(to_classes(pred), to_classes(truth));
              py::dict out;
              auto cls = [](const ClassMetrics& c) {
                  py::dict d;
                  d["support"] = c.support;
                  d["precision"] = c.precision ? py::object(py::float_(*c.precision))
                                               : py::object(py::none());
                  d["recall"] =
                      c.recall ? py::object(py::float_(*c.recall)) : py::object(py::none());
                  return d;
              };
              out["storm"] = cls(rep.storm);
              out["no_storm"] = cls(rep.no_storm);
              out["weighted_recall_micro"] = rep.weighted_recall;
              out["balanced_recall_macro"] = rep.macro_recall
                                                 ? py::object(py::float_(*rep.macro_recall))
                                                 : py::object(py::none());
              out["confusion"] =
                  py::make_tuple(rep.confusion.tp, rep.confusion.fp, rep.confusion.tn,
                                 rep.confusion.fn);
              return out;
          },
          py::arg("predicted"), py::arg("truth"), "Per-class precision/recall and accuracies");

    // ---- ingest ----
    m.def("parse_kp_file",
          [](const std::filesystem::path& p) {
              const auto parsed = parse_kp_file(p);
              py::list days;
              for (const auto& d : parsed.records)
                  days.append(py::make_tuple(format_date(d.date),
                                             std::vector<double>(d.values.begin(),
                                                                 d.values.end()),
                                             d.max_kp));
              return py::make_tuple(days, parsed.issues.size());
          },
          py::arg("path"), "([(date, [kp x8], max_kp)], n_issues)");

    m.def("storm_day", [](double max_kp) { return max_kp >= 5.0; }, py::arg("max_kp"),
          "Storm classification threshold, inclusive at 5.0");

    m.def("wolf_proxy",
          [](int sunspots, int regions) {
              return wolf_proxy({Date{}, sunspots, regions});
          },
          py::arg("sunspots"), py::arg("regions"), "10 * regions + sunspots");
}
