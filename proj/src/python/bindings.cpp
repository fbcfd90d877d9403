#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sdtest/cli/report.hpp"
#include "sdtest/error.hpp"
#include "sdtest/procedures.hpp"

namespace py = pybind11;
using namespace sdtest;

namespace {

TestConfig make_config(int s, std::size_t ngrid, const std::string& resampling, std::size_t nboot,
                       std::optional<std::size_t> b1, std::optional<std::size_t> b2, double alpha,
                       std::uint64_t seed, unsigned threads) {
    TestConfig cfg;
    cfg.s = s;
    cfg.ngrid = ngrid;
    cfg.alpha = alpha;
    cfg.plan.method = parse_resampling_method(resampling);
    cfg.plan.nboot = nboot;
    cfg.plan.b1 = b1;
    cfg.plan.b2 = b2;
    cfg.plan.seed = seed;
    cfg.plan.threads = threads;
    return cfg;
}

py::dict to_dict(const TestResult& r) {
    py::dict d;
    d["test_stat"] = r.statistic;
    d["critical_value"] = r.critical_value;
    d["p_value"] = r.p_value;
    d["resampled_stats"] = r.resampled.values;
    d["grid"] = std::vector<double>(r.grid.points().begin(), r.grid.points().end());
    d["reject"] = r.reject();
    d["report"] = cli::format_report(r);
    d["machine_record"] = cli::machine_record(r);
    return d;
}

std::vector<Sample> as_samples(const std::vector<std::vector<double>>& data) {
    std::vector<Sample> out;
    for (std::size_t k = 0; k < data.size(); ++k) {
        out.emplace_back(data[k], "sample" + std::to_string(k + 1));
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_sdtest, m) {
    m.doc() = "Stochastic dominance tests (compiled core)";

    static py::exception<Error> base(m, "SdtestError");
    static py::exception<ConfigError> config_error(m, "ConfigError", base.ptr());
    static py::exception<ParseError> parse_error(m, "ParseError", base.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ConfigError& e) {
            PyErr_SetString(config_error.ptr(), e.what());
        } catch (const ParseError& e) {
            PyErr_SetString(parse_error.ptr(), e.what());
        } catch (const Error& e) {
            PyErr_SetString(base.ptr(), e.what());
        }
    });

    m.attr("DEFAULT_SEED") = kDefaultSeed;

    m.def(
        "run",
        [](const std::string& approach, const std::vector<std::vector<double>>& samples, int s,
           std::size_t ngrid, const std::string& resampling, std::size_t nboot,
           std::optional<std::size_t> b1, std::optional<std::size_t> b2, double alpha,
           std::uint64_t seed, const std::string& functional, double c, double a, double eta,
           std::optional<double> epsilon, unsigned threads) {
            auto cfg = make_config(s, ngrid, resampling, nboot, b1, b2, alpha, seed, threads);
            cfg.approach = parse_approach(approach);
            cfg.functional = parse_functional(functional);
            cfg.c = c;
            cfg.a = a;
            cfg.eta = eta;
            cfg.epsilon = epsilon;
            const auto data = as_samples(samples);
            TestResult result;
            {
                py::gil_scoped_release release;
                result = run_test(data, cfg);
            }
            return to_dict(result);
        },
        py::arg("approach"), py::arg("samples"), py::arg("s") = 1, py::arg("ngrid") = 100,
        py::arg("resampling") = "bootstrap", py::arg("nboot") = 200, py::arg("b1") = py::none(),
        py::arg("b2") = py::none(), py::arg("alpha") = 0.05, py::arg("seed") = kDefaultSeed,
        py::arg("functional") = "l1", py::arg("c") = 0.75, py::arg("a") = 0.1,
        py::arg("eta") = 1e-6, py::arg("epsilon") = py::none(), py::arg("threads") = 0);

    m.def(
        "set_grid",
        [](const std::vector<std::vector<double>>& samples, std::size_t ngrid) {
            const auto grid = sdtest::set_grid(as_samples(samples), ngrid);
            return std::vector<double>(grid.points().begin(), grid.points().end());
        },
        py::arg("samples"), py::arg("ngrid"));

    m.def(
        "CDF",
        [](const std::vector<double>& sample, const std::vector<double>& grid, int s) {
            return integrated_ecdf(Sample(sample), Grid(grid), s).values;
        },
        py::arg("sample"), py::arg("grid"), py::arg("s") = 1);

    const auto to_lists = [](const IndexMatrix& m) {
        std::vector<std::vector<std::uint32_t>> rows;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            rows.emplace_back(m.row(r).begin(), m.row(r).end());
        }
        return rows;
    };
    m.def(
        "bootstrap",
        [to_lists](std::size_t n, std::size_t nboot, std::uint64_t seed) {
            return to_lists(bootstrap_indices(n, nboot, seed));
        },
        py::arg("n"), py::arg("nboot"), py::arg("seed") = kDefaultSeed);
    m.def(
        "paired_bootstrap",
        [to_lists](std::size_t n1, std::size_t n2, std::size_t nboot, std::uint64_t seed) {
            return to_lists(paired_bootstrap_indices(n1, n2, nboot, seed));
        },
        py::arg("n1"), py::arg("n2"), py::arg("nboot"), py::arg("seed") = kDefaultSeed);
    m.def(
        "subsampling",
        [](std::size_t n, std::size_t b) {
            std::vector<std::pair<std::size_t, std::size_t>> out;
            for (const auto& r : subsample_blocks(n, b)) out.emplace_back(r.begin, r.end);
            return out;
        },
        py::arg("n"), py::arg("b"));
}
