#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mdmp/mdmp.hpp"

namespace py = pybind11;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

mdmp::MultivariateSeries to_series(const DoubleArray &array) {
    auto buf = array.request();
    if (buf.ndim == 1) {
        return mdmp::MultivariateSeries::univariate(
            std::span<const double>(static_cast<const double *>(buf.ptr), buf.shape[0]));
    }
    if (buf.ndim != 2) {
        throw py::value_error("series must be a 1-D or (n, d) array");
    }
    const auto n = static_cast<std::size_t>(buf.shape[0]);
    const auto d = static_cast<std::size_t>(buf.shape[1]);
    auto view = array.unchecked<2>();
    mdmp::Matrix<double> values(n, d);
    for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t j = 0; j < d; ++j) {
            values(t, j) = view(t, j);
        }
    }
    return mdmp::MultivariateSeries(std::move(values));
}

template <typename T>
py::array_t<T> to_array(const mdmp::Matrix<T> &m) {
    py::array_t<T> out({m.rows(), m.cols()});
    auto view = out.template mutable_unchecked<2>();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            view(i, j) = m(i, j);
        }
    }
    return out;
}

py::array_t<double> to_array(const std::vector<double> &v) {
    return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

mdmp::LabelVector to_labels(const py::array_t<std::uint8_t, py::array::forcecast> &labels) {
    auto view = labels.unchecked<1>();
    mdmp::LabelVector out(static_cast<std::size_t>(view.shape(0)));
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = view(i) != 0 ? 1 : 0;
    }
    return out;
}

py::tuple profile_tuple(const mdmp::MultidimProfile &p) {
    return py::make_tuple(to_array(p.values), to_array(p.indices));
}

mdmp::DetectorConfig make_config(mdmp::Setup setup, std::size_t m, std::optional<std::size_t> k,
                                 const std::string &variant, const std::string &dim,
                                 std::optional<std::size_t> smooth, std::size_t jobs) {
    auto cfg = mdmp::DetectorConfig::defaults(setup);
    cfg.m = m;
    if (k) {
        cfg.k = *k;
    }
    cfg.variant = mdmp::parse_variant(variant);
    cfg.dim_select = mdmp::parse_dim_select(dim);
    cfg.smooth_window = smooth;
    cfg.jobs = jobs;
    return cfg;
}

py::dict config_dict(const mdmp::DetectorConfig &cfg) {
    py::dict d;
    d["setup"] = mdmp::to_string(cfg.setup);
    d["m"] = cfg.m;
    d["k"] = cfg.k;
    d["variant"] = mdmp::to_string(cfg.variant);
    d["dim"] = mdmp::to_string(cfg.dim_select);
    d["smooth"] = cfg.effective_smooth_window();
    return d;
}

} // namespace

PYBIND11_MODULE(_mdmp, m) {
    m.doc() = "Multidimensional Matrix Profile for time series anomaly detection.";

    py::register_exception<mdmp::Error>(m, "MdmpError", PyExc_ValueError);

    m.def("znorm_distance", [](const std::vector<double> &a, const std::vector<double> &b) {
        return mdmp::znorm_distance(a, b);
    }, py::arg("a"), py::arg("b"));

    m.def("mp_self_join", [](const DoubleArray &series, std::size_t window, const std::string &variant,
                             std::size_t k, std::size_t jobs) {
        auto s = to_series(series);
        py::gil_scoped_release release;
        auto p = mdmp::mp_self_join(s, window, mdmp::parse_variant(variant), k, {jobs});
        py::gil_scoped_acquire acquire;
        return profile_tuple(p);
    }, py::arg("series"), py::arg("m"), py::arg("variant") = "pre-max", py::arg("k") = 1,
          py::arg("jobs") = 1,
          "Self-join profile. Returns (values, indices) with one column per rank.");

    m.def("mp_ab_join", [](const DoubleArray &query, const DoubleArray &target, std::size_t window,
                           const std::string &variant, std::size_t k, std::size_t jobs) {
        auto q = to_series(query);
        auto t = to_series(target);
        py::gil_scoped_release release;
        auto p = mdmp::mp_ab_join(q, t, window, mdmp::parse_variant(variant), k, {jobs});
        py::gil_scoped_acquire acquire;
        return profile_tuple(p);
    }, py::arg("query"), py::arg("target"), py::arg("m"), py::arg("variant") = "pre-max",
          py::arg("k") = 1, py::arg("jobs") = 1);

    m.def("find_knn", [](const std::vector<double> &dists, std::size_t k, std::size_t window,
                         const std::string &algorithm) {
        mdmp::KnnAlgorithm algo = mdmp::KnnAlgorithm::Select;
        if (algorithm == "brute-force") {
            algo = mdmp::KnnAlgorithm::BruteForce;
        } else if (algorithm == "naive-sort") {
            algo = mdmp::KnnAlgorithm::NaiveSort;
        } else if (algorithm != "select") {
            throw py::value_error("algorithm must be brute-force, naive-sort or select");
        }
        auto r = mdmp::find_knn(mdmp::KnnQuery{dists, k, window}, algo);
        return py::make_tuple(r.neighbor_index, r.neighbor_dist, r.accepted);
    }, py::arg("dists"), py::arg("k"), py::arg("m"), py::arg("algorithm") = "select");

    m.def("detect_unsupervised", [](const DoubleArray &test, std::size_t window, std::optional<std::size_t> k,
                                    const std::string &variant, const std::string &dim,
                                    std::optional<std::size_t> smooth, std::size_t jobs) {
        auto cfg = make_config(mdmp::Setup::Unsupervised, window, k, variant, dim, smooth, jobs);
        return to_array(mdmp::detect_unsupervised(to_series(test), cfg));
    }, py::arg("test"), py::arg("m") = 64, py::arg("k") = py::none(), py::arg("variant") = "pre-max",
          py::arg("dim") = "first", py::arg("smooth") = py::none(), py::arg("jobs") = 1);

    m.def("detect_semisupervised", [](const DoubleArray &train, const DoubleArray &test, std::size_t window,
                                      std::optional<std::size_t> k, const std::string &variant,
                                      const std::string &dim, std::optional<std::size_t> smooth,
                                      std::size_t jobs) {
        auto cfg = make_config(mdmp::Setup::SemiSupervised, window, k, variant, dim, smooth, jobs);
        return to_array(mdmp::detect_semisupervised(to_series(train), to_series(test), cfg));
    }, py::arg("train"), py::arg("test"), py::arg("m") = 64, py::arg("k") = py::none(),
          py::arg("variant") = "pre-max", py::arg("dim") = "first", py::arg("smooth") = py::none(),
          py::arg("jobs") = 1);

    m.def("detect_supervised", [](const DoubleArray &train,
                                  const py::array_t<std::uint8_t, py::array::forcecast> &labels,
                                  const DoubleArray &test, std::optional<std::vector<py::dict>> grid) {
        std::vector<mdmp::DetectorConfig> configs;
        if (grid) {
            for (const auto &entry : *grid) {
                auto cfg = mdmp::DetectorConfig::defaults(mdmp::Setup::Supervised);
                if (entry.contains("m")) cfg.m = entry["m"].cast<std::size_t>();
                if (entry.contains("k")) cfg.k = entry["k"].cast<std::size_t>();
                if (entry.contains("variant")) cfg.variant = mdmp::parse_variant(entry["variant"].cast<std::string>());
                if (entry.contains("dim")) cfg.dim_select = mdmp::parse_dim_select(entry["dim"].cast<std::string>());
                if (entry.contains("smooth")) cfg.smooth_window = entry["smooth"].cast<std::size_t>();
                configs.push_back(cfg);
            }
        } else {
            configs = mdmp::default_supervised_grid();
        }
        auto r = mdmp::detect_supervised(to_series(train), to_labels(labels), to_series(test), configs);
        return py::make_tuple(to_array(r.scores), config_dict(r.chosen), r.train_metric);
    }, py::arg("train"), py::arg("labels"), py::arg("test"), py::arg("grid") = py::none());

    m.def("auc_roc", [](const std::vector<double> &scores,
                        const py::array_t<std::uint8_t, py::array::forcecast> &labels) {
        auto l = to_labels(labels);
        return mdmp::auc_roc(scores, l);
    }, py::arg("scores"), py::arg("labels"));

    m.def("range_pr_auc", [](const std::vector<double> &scores,
                             const py::array_t<std::uint8_t, py::array::forcecast> &labels) {
        auto l = to_labels(labels);
        return mdmp::range_pr_auc(scores, l);
    }, py::arg("scores"), py::arg("labels"));

    m.def("generate_fixture", [](const std::string &kind, std::size_t n, std::size_t d, std::uint64_t seed,
                                 std::size_t period, double noise) {
        mdmp::SynthSpec spec;
        spec.kind = mdmp::parse_synth_kind(kind);
        spec.n = n;
        spec.d = d;
        spec.seed = seed;
        spec.m_hint = period;
        spec.noise = noise;
        auto data = mdmp::generate_fixture(spec);
        py::array_t<std::uint8_t> labels(static_cast<py::ssize_t>(n), data.labels->data());
        return py::make_tuple(to_array(data.series.values()), labels);
    }, py::arg("kind"), py::arg("n") = 4096, py::arg("d") = 4, py::arg("seed") = 0,
          py::arg("period") = 64, py::arg("noise") = 0.05,
          "Returns (values of shape (n, d), labels of length n).");
}
