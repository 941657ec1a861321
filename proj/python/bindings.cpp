#include <adastable/baselines.hpp>
#include <adastable/error.hpp>
#include <adastable/hurst.hpp>
#include <adastable/io.hpp>
#include <adastable/tails.hpp>
#include <adastable/tracker.hpp>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace adastable;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::span<const double> view(const Array& a) {
    if (a.ndim() != 1) throw py::value_error("expected a one-dimensional array");
    return {a.data(), static_cast<std::size_t>(a.shape(0))};
}

py::array_t<double> to_array(const std::vector<double>& v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

py::dict track_dict(const ParamTrack& tr) {
    const auto n = static_cast<py::ssize_t>(tr.size());
    py::array_t<double> mu(n), sigma(n), alpha(n), beta(n);
    for (py::ssize_t i = 0; i < n; ++i) {
        const StableParams& th = tr.thetas[static_cast<std::size_t>(i)];
        mu.mutable_at(i) = th.mu;
        sigma.mutable_at(i) = th.sigma;
        alpha.mutable_at(i) = th.alpha;
        beta.mutable_at(i) = th.beta;
    }
    py::dict d;
    d["start"] = tr.start;
    d["mu"] = mu;
    d["sigma"] = sigma;
    d["alpha"] = alpha;
    d["beta"] = beta;
    d["logpdf"] = to_array(tr.logpdfs);
    d["mean_loglik"] = tr.mean_loglik;
    return d;
}

// Rebuilds a track from the dict track_dict produced.
ParamTrack track_from_dict(const py::dict& d) {
    ParamTrack tr;
    tr.start = d["start"].cast<std::size_t>();
    const Array mu = d["mu"].cast<Array>();
    const Array sigma = d["sigma"].cast<Array>();
    const Array alpha = d["alpha"].cast<Array>();
    const Array beta = d["beta"].cast<Array>();
    const Array lp = d["logpdf"].cast<Array>();
    const std::size_t n = view(mu).size();
    if (view(sigma).size() != n || view(alpha).size() != n || view(beta).size() != n || view(lp).size() != n) {
        throw py::value_error("track arrays differ in length");
    }
    for (std::size_t i = 0; i < n; ++i) {
        tr.thetas.push_back({mu.data()[i], sigma.data()[i], alpha.data()[i], beta.data()[i]});
    }
    tr.logpdfs.assign(lp.data(), lp.data() + n);
    tr.mean_loglik = d.contains("mean_loglik") ? d["mean_loglik"].cast<double>() : 0.0;
    return tr;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Stable-law densities, moment estimators and adaptive tracking";

    py::register_exception<DegenerateSampleError>(m, "DegenerateSampleError", PyExc_ValueError);
    py::register_exception<AccuracyError>(m, "AccuracyError", PyExc_ArithmeticError);
    py::register_exception<StepError>(m, "StepError", PyExc_ValueError);
    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);

    py::class_<StableParams>(m, "StableParams")
        .def(py::init<>())
        .def(py::init([](double mu, double sigma, double alpha, double beta) {
                 StableParams p{mu, sigma, alpha, beta};
                 p.validate();
                 return p;
             }),
             py::arg("mu") = 0.0, py::arg("sigma") = 1.0, py::arg("alpha") = 2.0, py::arg("beta") = 0.0)
        .def_readwrite("mu", &StableParams::mu)
        .def_readwrite("sigma", &StableParams::sigma)
        .def_readwrite("alpha", &StableParams::alpha)
        .def_readwrite("beta", &StableParams::beta)
        .def("__repr__", [](const StableParams& p) {
            return "StableParams(mu=" + std::to_string(p.mu) + ", sigma=" + std::to_string(p.sigma) +
                   ", alpha=" + std::to_string(p.alpha) + ", beta=" + std::to_string(p.beta) + ")";
        });

    m.def("pdf", py::vectorize([](double z, double alpha, double beta) { return stable_pdf(z, alpha, beta); }),
          py::arg("z"), py::arg("alpha"), py::arg("beta") = 0.0);
    m.def("logpdf",
          py::vectorize([](double z, double alpha, double beta) { return stable_logpdf(z, alpha, beta); }),
          py::arg("z"), py::arg("alpha"), py::arg("beta") = 0.0);
    m.def("cdf", py::vectorize([](double z, double alpha, double beta) { return stable_cdf(z, alpha, beta); }),
          py::arg("z"), py::arg("alpha"), py::arg("beta") = 0.0);
    m.def("sf", py::vectorize([](double z, double alpha, double beta) { return stable_sf(z, alpha, beta); }),
          py::arg("z"), py::arg("alpha"), py::arg("beta") = 0.0);
    m.def("moment_constant", &moment_constant, py::arg("alpha"), py::arg("p"));
    m.def("sample", [](const StableParams& p, std::size_t n, std::uint64_t seed) {
              return to_array(sample_stable(p, n, seed));
          },
          py::arg("params"), py::arg("n"), py::arg("seed"));

    m.def("estimate_mu", [](const Array& xs) { return estimate_mu(view(xs)); }, py::arg("xs"));
    m.def("estimate_sigma",
          [](const Array& xs, double mu, double alpha, double p) { return estimate_sigma(view(xs), mu, alpha, p); },
          py::arg("xs"), py::arg("mu"), py::arg("alpha"), py::arg("p"));
    m.def("estimate_alpha",
          [](const Array& xs, double mu, double p1, double p2, double alpha_min, double alpha_max, double step) {
              return estimate_alpha(view(xs), mu, build_alpha_table(p1, p2, alpha_min, alpha_max, step));
          },
          py::arg("xs"), py::arg("mu"), py::arg("p1") = 0.5, py::arg("p2") = 0.2, py::arg("alpha_min") = 1.05,
          py::arg("alpha_max") = 2.0, py::arg("step") = 0.005);

    py::class_<TrackerConfig>(m, "TrackerConfig")
        .def(py::init<>())
        .def_static("from_json", [](const std::string& text) { return config_from_json(nlohmann::json::parse(text)); })
        .def("to_json", [](const TrackerConfig& c) { return config_to_json(c).dump(); })
        .def_property("eta1", [](const TrackerConfig& c) { return c.rates.eta1; },
                      [](TrackerConfig& c, double v) { c.rates.eta1 = v; })
        .def_property("eta2", [](const TrackerConfig& c) { return c.rates.eta2; },
                      [](TrackerConfig& c, double v) { c.rates.eta2 = v; })
        .def_property("eta3", [](const TrackerConfig& c) { return c.rates.eta3; },
                      [](TrackerConfig& c, double v) { c.rates.eta3 = v; })
        .def_property("p_sigma", [](const TrackerConfig& c) { return c.powers.p_sigma; },
                      [](TrackerConfig& c, double v) { c.powers.p_sigma = v; })
        .def_property("p1", [](const TrackerConfig& c) { return c.powers.p1; },
                      [](TrackerConfig& c, double v) { c.powers.p1 = v; })
        .def_property("p2", [](const TrackerConfig& c) { return c.powers.p2; },
                      [](TrackerConfig& c, double v) { c.powers.p2 = v; })
        .def_readwrite("alpha_min", &TrackerConfig::alpha_min)
        .def_readwrite("alpha_max", &TrackerConfig::alpha_max)
        .def_readwrite("alpha_step", &TrackerConfig::alpha_step)
        .def_readwrite("beta", &TrackerConfig::beta)
        .def_readwrite("sigma_multiplier", &TrackerConfig::sigma_multiplier)
        .def_readwrite("warmup", &TrackerConfig::warmup)
        .def_readwrite("fixed_alpha", &TrackerConfig::fixed_alpha)
        .def_readwrite("sigma_floor", &TrackerConfig::sigma_floor)
        .def("validate", &TrackerConfig::validate)
        .def("__eq__", [](const TrackerConfig& a, const TrackerConfig& b) { return a == b; });

    m.def("track",
          [](const Array& xs, const TrackerConfig& cfg) {
              const auto data = view(xs);
              ParamTrack tr;
              {
                  py::gil_scoped_release release;
                  tr = MovingEstimator(cfg).track(data);
              }
              return track_dict(tr);
          },
          py::arg("xs"), py::arg("config") = TrackerConfig{});
    m.def("sweep_fixed_alpha",
          [](const Array& xs, const Array& alphas, const TrackerConfig& cfg) {
              const auto data = view(xs);
              const auto grid = view(alphas);
              std::vector<SweepPoint> pts;
              {
                  py::gil_scoped_release release;
                  pts = sweep_fixed_alpha(data, grid, cfg);
              }
              std::vector<double> ll;
              for (const SweepPoint& p : pts) ll.push_back(p.mean_loglik);
              return to_array(ll);
          },
          py::arg("xs"), py::arg("alphas"), py::arg("config") = TrackerConfig{});

    m.def("fit_static_sigma",
          [](const Array& xs, double alpha, double beta) {
              const StaticSigmaFit f = fit_static_sigma_mle(view(xs), alpha, beta);
              return py::make_tuple(f.sigma, f.mean_loglik);
          },
          py::arg("xs"), py::arg("alpha"), py::arg("beta") = 0.0);
    m.def("garch11_fit",
          [](const Array& xs, std::size_t prefix) {
              const GarchFit f = garch11_fit(view(xs), prefix);
              py::dict d;
              d["omega"] = f.params.omega;
              d["a"] = f.params.a;
              d["b"] = f.params.b;
              d["mean_loglik"] = f.mean_loglik;
              d["converged"] = f.converged;
              return d;
          },
          py::arg("xs"), py::arg("prefix") = kGarchPrefix);

    m.def("structure_function",
          [](const Array& series, const Array& qs, const std::vector<std::size_t>& taus) {
              const std::vector<std::size_t> lags = taus.empty() ? default_taus(view(series).size()) : taus;
              const ScalingEstimate est = structure_function(view(series), view(qs), lags);
              py::dict d;
              d["qs"] = to_array(est.qs);
              d["taus"] = est.taus;
              d["zeta"] = to_array(est.zeta);
              d["r2"] = to_array(est.r2);
              d["diagnostics"] = est.diagnostics;
              return d;
          },
          py::arg("series"), py::arg("qs"), py::arg("taus") = std::vector<std::size_t>{});
    m.def("adaptive_hurst", [](const py::dict& track, double q) { return adaptive_hurst(track_from_dict(track), q); },
          py::arg("track"), py::arg("q"));
    m.def("gaussianize",
          [](const Array& xs, const py::dict& track) { return to_array(gaussianize(view(xs), track_from_dict(track))); },
          py::arg("xs"), py::arg("track"));
    m.def("jarque_bera", [](const Array& xs) { return jarque_bera(view(xs)); }, py::arg("xs"));

    m.def("exceedance_curve",
          [](const Array& xs, const py::dict& track, const Array& ks, const Array& alphas) {
              const TailCurve c = exceedance_curve(view(xs), track_from_dict(track), view(ks), view(alphas));
              py::dict models;
              for (const ModelTail& mt : c.models) models[py::float_(mt.alpha)] = py::make_tuple(to_array(mt.left), to_array(mt.right));
              py::dict d;
              d["ks"] = to_array(c.ks);
              d["left"] = to_array(c.left_emp);
              d["right"] = to_array(c.right_emp);
              d["models"] = models;
              return d;
          },
          py::arg("xs"), py::arg("track"), py::arg("ks"), py::arg("alphas"));
    m.def("count_extreme",
          [](const Array& xs, const py::dict& track, double k) {
              const ExtremeCount c = count_extreme(view(xs), track_from_dict(track), k);
              return py::make_tuple(c.left, c.right);
          },
          py::arg("xs"), py::arg("track"), py::arg("k"));
}
