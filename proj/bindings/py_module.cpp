#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "pm25kit/analysis.hpp"
#include "pm25kit/arima.hpp"
#include "pm25kit/clustering.hpp"
#include "pm25kit/data_model.hpp"
#include "pm25kit/report.hpp"
#include "pm25kit/stats.hpp"
#include "pm25kit/version.hpp"

namespace py = pybind11;
using namespace pm25;

namespace {

std::vector<double> to_vector(const py::iterable& values) {
    std::vector<double> out;
    for (const auto& v : values) out.push_back(v.cast<double>());
    return out;
}

py::dict metrics_dict(const MetricsBundle& m) {
    py::dict d;
    d["mae"] = m.mae;
    d["mse"] = m.mse;
    d["rmse"] = m.rmse;
    d["r_squared"] = m.r_squared ? py::object(py::float_(*m.r_squared)) : py::none();
    d["n"] = m.n;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Country-level PM2.5 analytics: ETL, statistics, clustering, forecasting";
    m.attr("__version__") = kToolkitVersion;

    // Translators run most-recently-registered first, so the base goes first.
    py::register_exception<Error>(m, "Pm25Error", PyExc_ValueError);
    py::register_exception<EmptyStudyError>(m, "EmptyStudyError", PyExc_ValueError);

    py::enum_<Region>(m, "Region")
        .value("CentralAsia", Region::CentralAsia)
        .value("EastAsia", Region::EastAsia)
        .value("SouthAsia", Region::SouthAsia)
        .value("SoutheastAsia", Region::SoutheastAsia)
        .value("WestAsia", Region::WestAsia);

    py::enum_<FillPolicy>(m, "FillPolicy")
        .value("ZeroFill", FillPolicy::ZeroFill)
        .value("Exclude", FillPolicy::Exclude);

    py::class_<YearSeries>(m, "YearSeries")
        .def(py::init<>())
        .def("get", &YearSeries::get, py::arg("year"))
        .def("set", &YearSeries::set, py::arg("year"), py::arg("value"))
        .def("items", &YearSeries::items);

    py::class_<CountryRecord>(m, "CountryRecord")
        .def_readonly("country", &CountryRecord::country)
        .def_readonly("region", &CountryRecord::region)
        .def_readonly("pm25", &CountryRecord::pm25)
        .def_readonly("population", &CountryRecord::population)
        .def_readonly("area", &CountryRecord::area)
        .def_readonly("density", &CountryRecord::density)
        .def_readonly("deaths", &CountryRecord::deaths);

    py::class_<Dataset>(m, "Dataset")
        .def_readonly("records", &Dataset::records)
        .def_readonly("fill_policy", &Dataset::fill_policy)
        .def_readonly("source", &Dataset::source)
        .def_readonly("warnings", &Dataset::warnings)
        .def("find",
             [](const Dataset& ds, const std::string& country) -> py::object {
                 const CountryRecord* rec = ds.find(country);
                 return rec ? py::cast(*rec) : py::none();
             },
             py::arg("country"))
        .def("__len__", [](const Dataset& ds) { return ds.records.size(); });

    m.def("parse_number",
          [](const std::string& text) { return parse_number(text); },
          py::arg("text"));
    m.def("embedded_dataset", &embedded_dataset);
    m.def("load_dataset", &load_dataset_file, py::arg("path"),
          py::arg("fill_policy") = FillPolicy::Exclude);
    m.def("load_dataset_string",
          [](const std::string& csv, FillPolicy policy) {
              return load_dataset_string(csv, policy);
          },
          py::arg("csv"), py::arg("fill_policy") = FillPolicy::Exclude);
    m.def("write_dataset_csv", &write_dataset_csv, py::arg("dataset"));
    m.def("dataset_hash", &dataset_hash, py::arg("dataset"));

    m.def("mean", [](const py::iterable& x) { return mean(to_vector(x)); });
    m.def("pearson", [](const py::iterable& x, const py::iterable& y) {
        return pearson(to_vector(x), to_vector(y));
    });
    m.def("standardize", [](const py::iterable& x) { return standardize(to_vector(x)); });
    m.def("evaluate_forecasts", [](const py::iterable& actual, const py::iterable& predicted) {
        return metrics_dict(evaluate_forecasts(to_vector(actual), to_vector(predicted)));
    });

    py::enum_<PollutionLevel>(m, "PollutionLevel")
        .value("Low", PollutionLevel::Low)
        .value("Moderate", PollutionLevel::Moderate)
        .value("High", PollutionLevel::High);

    py::class_<ClusterModel>(m, "ClusterModel")
        .def_readonly("k", &ClusterModel::k)
        .def_readonly("centers", &ClusterModel::centers)
        .def_readonly("raw_centers", &ClusterModel::raw_centers)
        .def_readonly("assignments", &ClusterModel::assignments)
        .def_readonly("wcss", &ClusterModel::wcss)
        .def_readonly("labels", &ClusterModel::labels);

    py::class_<ElbowCurve>(m, "ElbowCurve")
        .def_readonly("wcss", &ElbowCurve::wcss)
        .def_readonly("knee", &ElbowCurve::knee);

    m.def("kmeans_fit",
          [](const std::vector<std::pair<std::string, double>>& points, int k,
             std::uint64_t seed) {
              std::vector<ClusterPoint> pts;
              for (const auto& [id, value] : points) pts.push_back({id, value});
              return kmeans_fit(pts, k, seed);
          },
          py::arg("points"), py::arg("k"), py::arg("seed") = 0);
    m.def("elbow_curve",
          [](const std::vector<std::pair<std::string, double>>& points, int k_max,
             std::uint64_t seed) {
              std::vector<ClusterPoint> pts;
              for (const auto& [id, value] : points) pts.push_back({id, value});
              return elbow_curve(pts, k_max, seed);
          },
          py::arg("points"), py::arg("k_max") = 8, py::arg("seed") = 0);
    m.def("label_clusters", &label_clusters, py::arg("model"));

    py::class_<ArimaOrder>(m, "ArimaOrder")
        .def(py::init([](int p, int d, int q, bool drift) {
                 return ArimaOrder{p, d, q, drift};
             }),
             py::arg("p") = 0, py::arg("d") = 1, py::arg("q") = 0, py::arg("drift") = false)
        .def_readwrite("p", &ArimaOrder::p)
        .def_readwrite("d", &ArimaOrder::d)
        .def_readwrite("q", &ArimaOrder::q)
        .def_readwrite("drift", &ArimaOrder::drift)
        .def("__repr__", &ArimaOrder::str)
        .def_static("parse", &ArimaOrder::parse, py::arg("text"));

    py::class_<ArimaModel>(m, "ArimaModel")
        .def_readonly("order", &ArimaModel::order)
        .def_readonly("phi", &ArimaModel::phi)
        .def_readonly("theta", &ArimaModel::theta)
        .def_readonly("drift_value", &ArimaModel::drift_value)
        .def_readonly("residuals", &ArimaModel::residuals)
        .def_readonly("css", &ArimaModel::css)
        .def_readonly("train", &ArimaModel::train);

    m.def("difference",
          [](const py::iterable& x, int d) { return difference(to_vector(x), d); },
          py::arg("x"), py::arg("d") = 1);
    m.def("integrate",
          [](const py::iterable& diffs, double x0) { return integrate(to_vector(diffs), x0); },
          py::arg("diffs"), py::arg("x0"));
    m.def("fit",
          [](const py::iterable& series, const ArimaOrder& order) {
              return fit(to_vector(series), order);
          },
          py::arg("series"), py::arg("order"));
    m.def("forecast", &forecast, py::arg("model"), py::arg("horizon") = 1);
    m.def("select_order",
          [](const py::iterable& series) { return select_order(to_vector(series)); },
          py::arg("series"));
    m.def("aicc", &aicc, py::arg("model"));

    py::class_<TrendCell>(m, "TrendCell")
        .def_readonly("mean", &TrendCell::mean)
        .def_readonly("count", &TrendCell::count);

    m.def("regional_trends",
          [](const Dataset& ds) {
              TrendStudy study = regional_trends(ds);
              py::dict table;
              for (const auto& [region, years] : study.table.cells) {
                  py::dict by_year;
                  for (const auto& [year, cell] : years) {
                      by_year[py::int_(year)] = py::cast(cell);
                  }
                  table[py::cast(region)] = by_year;
              }
              return table;
          },
          py::arg("dataset"));

    m.def("corr_density_pm25",
          [](const Dataset& ds) {
              CorrelationStudy study = corr_density_pm25(ds);
              return py::make_tuple(study.overall, study.pairs);
          },
          py::arg("dataset"));
    m.def("corr_pm25_deaths",
          [](const Dataset& ds, const std::string& window, bool region_level) {
              const Pm25Window w = window == "2018-2021" ? Pm25Window::Y2018to2021
                                                         : Pm25Window::Y2018to2023;
              CorrelationStudy study = corr_pm25_deaths(ds, w, region_level);
              return py::make_tuple(study.overall, study.pairs);
          },
          py::arg("dataset"), py::arg("window") = "2018-2023", py::arg("region_level") = false);

    m.def("cluster_study",
          [](const Dataset& ds, int k, int k_max, std::uint64_t seed) {
              ClusterStudy study = cluster_study(ds, k, k_max, seed);
              py::dict d;
              d["model"] = py::cast(study.model);
              d["knee"] = study.elbow.knee;
              d["elbow_wcss"] = py::cast(study.elbow.wcss);
              d["excluded"] = study.exclusions.size();
              return d;
          },
          py::arg("dataset"), py::arg("k") = 3, py::arg("k_max") = 8, py::arg("seed") = 0);

    m.def("forecast_study",
          [](const Dataset& ds, int train_end, int test_year) {
              ForecastStudy study = forecast_study(ds, train_end, test_year);
              py::list rows;
              for (const auto& row : study.rows) {
                  py::dict r;
                  r["country"] = row.country;
                  r["order"] = row.order.str();
                  r["predicted"] = row.predicted;
                  r["predicted_raw"] = row.predicted_raw;
                  r["actual"] = row.actual ? py::object(py::float_(*row.actual)) : py::none();
                  rows.append(r);
              }
              py::dict d;
              d["rows"] = rows;
              d["metrics"] = study.metrics ? py::object(metrics_dict(*study.metrics)) : py::none();
              d["excluded"] = study.exclusions.size();
              return d;
          },
          py::arg("dataset"), py::arg("train_end") = 2022, py::arg("test_year") = 2023);
}
