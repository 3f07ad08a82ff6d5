#include "signcd/harness.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace signcd;

namespace {

Box make_box(const std::vector<double>& lo, const std::vector<double>& hi) {
  if (lo.size() != hi.size()) throw InvalidArgument("lo and hi must have the same length");
  std::vector<Interval> sides;
  for (std::size_t j = 0; j < lo.size(); ++j) sides.push_back(make_interval(lo[j], hi[j]));
  return Box(sides);
}

SignMode make_mode(const std::string& mode, const std::string& noise, double sigma, double halfwidth,
                   double slope, double cap, int decimals) {
  if (mode == "additive-noise") {
    if (noise == "gaussian") return AdditiveNoise{GaussianNoise{sigma}};
    if (noise == "uniform") return AdditiveNoise{UniformNoise{halfwidth}};
    throw InvalidArgument("noise must be gaussian or uniform");
  }
  if (mode == "direct-bernoulli") return DirectBernoulli{slope, cap};
  if (mode == "exact") return ExactSign{};
  if (mode == "quantized") return QuantizedSign{decimals};
  throw InvalidArgument("unknown sign oracle mode '" + mode + "'");
}

py::object json_to_py(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Active threshold learning and stochastic-sign coordinate descent";

  py::register_exception<BudgetExhausted>(m, "BudgetExhausted", PyExc_RuntimeError);

  py::class_<Interval>(m, "Interval")
      .def(py::init(&make_interval), py::arg("lo"), py::arg("hi"))
      .def_readonly("lo", &Interval::lo)
      .def_readonly("hi", &Interval::hi)
      .def_property_readonly("width", &Interval::width)
      .def("__repr__", [](const Interval& i) {
        std::ostringstream os;
        os << "Interval(" << i.lo << ", " << i.hi << ")";
        return os.str();
      });

  py::enum_<Orientation>(m, "Orientation")
      .value("positive_right", Orientation::positive_right)
      .value("positive_left", Orientation::positive_left);

  py::class_<TncProblem>(m, "TncProblem")
      .def_readonly("interval", &TncProblem::interval)
      .def_readonly("t", &TncProblem::t)
      .def_readonly("k", &TncProblem::k)
      .def_readonly("mu", &TncProblem::mu)
      .def_readonly("cap", &TncProblem::cap)
      .def_readonly("orientation", &TncProblem::orientation);

  m.def("make_tnc_problem", &make_tnc_problem, py::arg("interval"), py::arg("t"), py::arg("k"), py::arg("mu"),
        py::arg("cap"), py::arg("orientation") = Orientation::positive_right);
  m.def("eta_at", &eta_at, py::arg("problem"), py::arg("x"));
  m.def("excess_risk", &excess_risk, py::arg("problem"), py::arg("estimate"));
  m.def("excess_risk_quadrature", &excess_risk_quadrature, py::arg("problem"), py::arg("estimate"),
        py::arg("tol") = 1e-10);

  py::class_<UcFunction>(m, "UcFunction")
      .def_property_readonly("dim", &UcFunction::dim)
      .def_property_readonly("family", [](const UcFunction& f) { return std::string(to_string(f.family())); })
      .def_property_readonly("exponent", &UcFunction::exponent)
      .def_property_readonly("lambda_", &UcFunction::lambda)
      .def_property_readonly("big_lambda", &UcFunction::big_lambda)
      .def_property_readonly("minimizer", &UcFunction::minimizer)
      .def("value", &UcFunction::value, py::arg("x"))
      .def("grad_coord", &UcFunction::grad_coord, py::arg("x"), py::arg("j"))
      .def("gradient", &UcFunction::gradient, py::arg("x"))
      .def("directional_min", &UcFunction::directional_min, py::arg("x"), py::arg("j"))
      .def("error", &UcFunction::error, py::arg("x"));

  m.def(
      "make_separable_power",
      [](const std::vector<double>& lo, const std::vector<double>& hi, const Eigen::VectorXd& coeffs, double k,
         const Eigen::VectorXd& minimizer) { return make_separable_power(make_box(lo, hi), coeffs, k, minimizer); },
      py::arg("lo"), py::arg("hi"), py::arg("coeffs"), py::arg("k"), py::arg("minimizer"));
  m.def(
      "make_quadratic",
      [](const std::vector<double>& lo, const std::vector<double>& hi, const Eigen::MatrixXd& A,
         const Eigen::VectorXd& minimizer) { return make_quadratic(make_box(lo, hi), A, minimizer); },
      py::arg("lo"), py::arg("hi"), py::arg("A"), py::arg("minimizer"));
  m.def(
      "make_ridge",
      [](const std::vector<double>& lo, const std::vector<double>& hi, const Eigen::MatrixXd& A,
         const Eigen::VectorXd& b) { return make_ridge(make_box(lo, hi), A, b); },
      py::arg("lo"), py::arg("hi"), py::arg("A"), py::arg("b"));

  py::class_<LabelSource>(m, "LabelSource")
      .def("query", [](LabelSource& s, double x) { return to_int(s.query(x)); }, py::arg("x"))
      .def_property_readonly("domain", &LabelSource::domain)
      .def_property_readonly("queries_used", &LabelSource::queries_used);

  py::class_<LabelOracle, LabelSource>(m, "LabelOracle")
      .def(py::init([](const TncProblem& p, std::uint64_t seed, std::optional<std::int64_t> budget) {
             return LabelOracle(p, RngStream(seed).split(static_cast<std::uint64_t>(StreamRole::label_oracle)),
                                budget);
           }),
           py::arg("problem"), py::arg("seed") = 0, py::arg("budget") = py::none(), py::keep_alive<1, 2>());

  py::class_<SignOracle>(m, "SignOracle")
      .def(py::init([](const UcFunction& fn, const std::string& mode, const std::string& noise, double sigma,
                       double halfwidth, double slope, double cap, int decimals, std::uint64_t seed,
                       std::optional<std::int64_t> budget) {
             return SignOracle(fn, make_mode(mode, noise, sigma, halfwidth, slope, cap, decimals),
                               RngStream(seed).split(static_cast<std::uint64_t>(StreamRole::sign_oracle)), budget);
           }),
           py::arg("function"), py::arg("mode") = "exact", py::arg("noise") = "gaussian", py::arg("sigma") = 1.0,
           py::arg("halfwidth") = 1.0, py::arg("slope") = 1.0, py::arg("cap") = 0.5, py::arg("decimals") = 3,
           py::arg("seed") = 0, py::arg("budget") = py::none(), py::keep_alive<1, 2>())
      .def("sample", [](SignOracle& o, const Eigen::VectorXd& x, std::size_t j) { return to_int(o.sample(x, j)); },
           py::arg("x"), py::arg("j"))
      .def_property_readonly("queries_used", &SignOracle::queries_used)
      .def_property_readonly("mode", [](const SignOracle& o) { return describe(o.mode()); });

  py::class_<LearnerConfig>(m, "LearnerConfig")
      .def(py::init([](std::int64_t budget, double confidence, double c_delta, const std::string& orientation,
                       std::int64_t grid_size, double bz_k, double bz_mu) {
             LearnerConfig c{budget, confidence, c_delta, parse_orientation_mode(orientation), grid_size, bz_k, bz_mu};
             validate(c);
             return c;
           }),
           py::arg("budget"), py::arg("confidence") = 0.05, py::arg("c_delta") = 2.0,
           py::arg("orientation") = "positive-right", py::arg("grid_size") = 0, py::arg("bz_k") = 2.0,
           py::arg("bz_mu") = 1.0)
      .def_readwrite("budget", &LearnerConfig::budget)
      .def_readwrite("c_delta", &LearnerConfig::c_delta)
      .def_readwrite("grid_size", &LearnerConfig::grid_size);

  py::class_<ThresholdEstimate>(m, "ThresholdEstimate")
      .def_readonly("point", &ThresholdEstimate::point)
      .def_readonly("queries_used", &ThresholdEstimate::queries_used)
      .def_readonly("epochs", &ThresholdEstimate::epochs)
      .def_property_readonly("radii", [](const ThresholdEstimate& e) {
        std::vector<double> r;
        for (const auto& rec : e.trace) r.push_back(rec.radius);
        return r;
      });

  m.def(
      "adaptive_schedule",
      [](std::int64_t budget, double c_delta) {
        const auto s = adaptive_schedule(budget, c_delta);
        return py::make_tuple(s.epochs, s.per_epoch);
      },
      py::arg("budget"), py::arg("c_delta") = 2.0);
  m.def(
      "erm_threshold",
      [](const std::vector<std::pair<double, int>>& samples, const Interval& search, Orientation o) {
        std::vector<LabeledSample> s;
        for (const auto& [x, y] : samples) s.push_back({x, y > 0 ? Label::plus : Label::minus});
        return erm_threshold(s, search, o);
      },
      py::arg("samples"), py::arg("search"), py::arg("orientation") = Orientation::positive_right);
  m.def(
      "passive_erm",
      [](LabelSource& src, const Interval& search, std::int64_t n, const std::string& orientation, std::uint64_t seed) {
        RngStream rng = RngStream(seed).split(static_cast<std::uint64_t>(StreamRole::learner));
        return passive_erm(src, search, n, parse_orientation_mode(orientation), rng);
      },
      py::arg("oracle"), py::arg("search"), py::arg("n"), py::arg("orientation") = "positive-right",
      py::arg("seed") = 0);
  m.def(
      "adaptive_learner",
      [](LabelSource& src, const Interval& search, const LearnerConfig& cfg, std::uint64_t seed) {
        RngStream rng = RngStream(seed).split(static_cast<std::uint64_t>(StreamRole::learner));
        return adaptive_learner(src, search, cfg, rng);
      },
      py::arg("oracle"), py::arg("search"), py::arg("config"), py::arg("seed") = 0);
  m.def("bz_learner", &bz_learner, py::arg("oracle"), py::arg("search"), py::arg("config"));
  m.def("bisect_noiseless", &bisect_noiseless, py::arg("oracle"), py::arg("search"), py::arg("budget"),
        py::arg("orientation") = Orientation::positive_right);

  py::class_<OptimizerConfig>(m, "OptimizerConfig")
      .def(py::init([](std::int64_t budget, std::optional<std::int64_t> epochs, const std::string& line_search,
                       std::optional<LearnerConfig> learner, std::uint64_t seed) {
             OptimizerConfig c;
             c.budget = budget;
             if (epochs) {
               c.epoch_rule = EpochRule::explicit_count;
               c.epochs = *epochs;
             }
             c.line_search = parse_learner_kind(line_search);
             if (learner) c.learner = *learner;
             c.seed = seed;
             return c;
           }),
           py::arg("budget"), py::arg("epochs") = py::none(), py::arg("line_search") = "adaptive",
           py::arg("learner") = py::none(), py::arg("seed") = 0);

  m.def(
      "optimizer_schedule",
      [](const OptimizerConfig& c, std::size_t dim) {
        const auto s = optimizer_schedule(c, dim);
        return py::make_tuple(s.epochs, s.per_epoch);
      },
      py::arg("config"), py::arg("dim"));
  m.def(
      "rssgd",
      [](const UcFunction& fn, SignOracle& oracle, const OptimizerConfig& cfg, std::optional<Eigen::VectorXd> x0) {
        const OptRunResult r = rssgd(fn, oracle, cfg, x0 ? *x0 : fn.domain().center());
        py::dict d;
        d["x_final"] = r.x_final;
        d["f_error"] = r.f_error;
        d["queries_used"] = r.queries_used;
        d["epochs"] = r.epochs;
        d["per_epoch"] = r.per_epoch;
        return d;
      },
      py::arg("function"), py::arg("oracle"), py::arg("config"), py::arg("x0") = py::none());

  m.def(
      "fit_rate_slope",
      [](const std::vector<std::pair<double, double>>& pts) {
        std::vector<RatePoint> p;
        for (const auto& [t, e] : pts) p.push_back({t, e});
        const RateFit f = fit_rate_slope(p);
        py::dict d;
        d["slope"] = f.slope;
        d["intercept"] = f.intercept;
        d["max_residual"] = f.max_residual;
        d["excluded"] = f.excluded;
        return d;
      },
      py::arg("points"));

  m.def(
      "run_experiment",
      [](const std::string& config_text, int concurrency) {
        const ExperimentConfig cfg = parse_experiment_config(config_text);
        RunTable table;
        {
          py::gil_scoped_release release;
          table = run_experiment(cfg, concurrency);
        }
        py::dict d;
        d["rows"] = json_to_py(table.to_json());
        d["csv"] = table.to_csv(false);
        return d;
      },
      py::arg("config_text"), py::arg("concurrency") = 1,
      "Run a sweep described by key-value config text; returns rows and the CSV (without timing).");
  m.def(
      "slope_report",
      [](const std::string& csv_text, const std::string& column, const std::string& statistic) {
        std::istringstream in(csv_text);
        const RunTable table = RunTable::read_csv(in);
        if (statistic != "mean" && statistic != "median") throw InvalidArgument("statistic must be median or mean");
        const Statistic stat = statistic == "mean" ? Statistic::mean : Statistic::median;
        return json_to_py(slope_report(table, stat, column).to_json());
      },
      py::arg("csv_text"), py::arg("column"), py::arg("statistic") = "median");
}
