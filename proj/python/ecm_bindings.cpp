// Python bindings: curves, tuple banks, modulation, channel sweeps,
// entropy and the tuple-count estimators.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "ecm/bank_io.hpp"
#include "ecm/curves.hpp"
#include "ecm/simlab.hpp"
#include "ecm/tuplegen.hpp"

namespace py = pybind11;
using namespace ecm;

namespace {

using ComplexArray = py::array_t<std::complex<double>>;

ComplexArray to_array(const SymbolStream& symbols) {
  ComplexArray out(static_cast<py::ssize_t>(symbols.size()));
  auto view = out.mutable_unchecked<1>();
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    view(static_cast<py::ssize_t>(i)) = {symbols[i].x, symbols[i].y};
  }
  return out;
}

SymbolStream from_array(const py::array_t<std::complex<double>, py::array::forcecast>& a) {
  if (a.ndim() != 1) throw Error(ErrorKind::InvalidArgument, "expected a 1-D array of samples");
  auto view = a.unchecked<1>();
  SymbolStream out(static_cast<std::size_t>(a.shape(0)));
  for (py::ssize_t i = 0; i < a.shape(0); ++i) {
    out[static_cast<std::size_t>(i)] = {view(i).real(), view(i).imag()};
  }
  return out;
}

SchemeSpec make_spec(const std::string& scheme, int order, const TupleBank* bank,
                     const std::string& key, const std::string& selection,
                     std::size_t rotation_block) {
  int implied = 0;
  SchemeSpec spec;
  spec.scheme = parse_scheme(scheme, &implied);
  spec.key = Seed::from_hex(key);
  spec.selection = selection == "round-robin" ? TupleSelection::RoundRobin
                                              : TupleSelection::Uniform;
  spec.rotation_block = rotation_block;
  if (spec.is_ecm()) {
    if (bank == nullptr) throw Error(ErrorKind::InvalidArgument, "ECM schemes need a bank");
    spec.bank = bank;
    spec.order = bank->order;
  } else {
    spec.order = order != 0 ? order : (implied != 0 ? implied : 4);
  }
  return spec;
}

}  // namespace

PYBIND11_MODULE(pyecm, m) {
  m.doc() = "Elliptic-curve modulation: tuple banks, modem, AWGN sweeps and entropy";

  py::register_exception<Error>(m, "EcmError", PyExc_ValueError);

  m.def("named_curves", &named_curve_ids, "Ids of the built-in curves");
  m.def(
      "curve_info",
      [](const std::string& id) {
        const CurveParams c = resolve_curve(id);
        py::dict d;
        d["name"] = c.name;
        d["p"] = c.p().get_str(16);
        d["a"] = c.a.value().get_str(16);
        d["b"] = c.b.value().get_str(16);
        d["gx"] = c.g.x().value().get_str(16);
        d["gy"] = c.g.y().value().get_str(16);
        d["n"] = c.n.get_str(16);
        d["valid"] = validate_curve(c).ok();
        return d;
      },
      py::arg("curve"), "Curve parameters as lowercase hex strings");

  py::class_<TupleBank>(m, "TupleBank")
      .def_readonly("curve", &TupleBank::curve_id)
      .def_readonly("order", &TupleBank::order)
      .def_readonly("d_min", &TupleBank::d_min)
      .def_readonly("pool_size", &TupleBank::pool_size)
      .def_readonly("attempts_used", &TupleBank::attempts_used)
      .def_readonly("partial", &TupleBank::partial)
      .def_readonly("seed_fingerprint", &TupleBank::seed_fingerprint)
      .def("__len__", &TupleBank::size)
      .def("points",
           [](const TupleBank& b, std::size_t i) {
             if (i >= b.size()) throw py::index_error("tuple index out of range");
             return to_array(b.tuples[i].points);
           })
      .def("scalars",
           [](const TupleBank& b, std::size_t i) {
             if (i >= b.size()) throw py::index_error("tuple index out of range");
             std::vector<std::string> out;
             for (const auto& k : b.tuples[i].scalars) out.push_back(k.value().get_str(10));
             return out;
           })
      .def("validate",
           [](const TupleBank& b) {
             for (const auto& t : b.tuples) {
               if (!validate_tuple(t, b.order, b.d_min)) return false;
             }
             return true;
           })
      .def("to_json", &serialize_bank)
      .def_static("from_json", [](const std::string& s) { return parse_bank(s); });

  m.def(
      "generate_tuples",
      [](const std::string& seed, int order, double d_min, std::size_t n_tuples,
         std::size_t pool_size, const std::string& curve, std::size_t max_attempts,
         const std::string& growth, double tolerance) {
        TupleGenConfig cfg;
        cfg.order = order;
        cfg.d_min = d_min;
        cfg.n_tuples = n_tuples;
        cfg.pool_size = pool_size;
        cfg.max_attempts = max_attempts;
        cfg.growth = parse_growth(growth);
        cfg.compact_tolerance = tolerance;
        const CurveParams c = resolve_curve(curve);
        GenerationResult r;
        {
          py::gil_scoped_release release;
          r = generate_tuples(Seed::from_hex(seed), c, cfg);
        }
        return r.bank;
      },
      py::arg("seed"), py::arg("order") = 16, py::arg("d_min") = 0.63, py::arg("n_tuples") = 300,
      py::arg("pool_size") = 100000, py::arg("curve") = "secp256k1", py::arg("max_attempts") = 0,
      py::arg("growth") = "compact", py::arg("tolerance") = 0.02,
      "Generate a tuple bank; a partial bank is returned when attempts run out");

  m.def(
      "modulate",
      [](py::bytes payload, const std::string& key, const std::string& scheme, int order,
         const TupleBank* bank, const std::string& selection, std::size_t rotation_block) {
        const SchemeSpec spec = make_spec(scheme, order, bank, key, selection, rotation_block);
        const std::string raw = payload;
        const BitStream bits =
            unpack_bytes({reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size()});
        const auto indices = bits_to_indices(bits, spec.order, true);
        ScheduleGenerator gen(spec.key, spec.schedule_config());
        const auto sched = gen.range(0, indices.size());
        return to_array(spec.is_ecm() ? ecm_modulate_indices(indices, *spec.bank, sched)
                                      : qam_modulate_indices(indices, spec.order, sched));
      },
      py::arg("payload"), py::arg("key"), py::arg("scheme") = "qam", py::arg("order") = 0,
      py::arg("bank") = nullptr, py::arg("selection") = "uniform", py::arg("rotation_block") = 1,
      "Bytes to complex baseband symbols");

  m.def(
      "demodulate",
      [](const py::array_t<std::complex<double>, py::array::forcecast>& symbols,
         const std::string& key, std::size_t n_bytes, const std::string& scheme, int order,
         const TupleBank* bank, const std::string& selection, std::size_t rotation_block) {
        const SchemeSpec spec = make_spec(scheme, order, bank, key, selection, rotation_block);
        const SymbolStream rx = from_array(symbols);
        ScheduleGenerator gen(spec.key, spec.schedule_config());
        const auto sched = gen.range(0, rx.size());
        const auto idx = spec.is_ecm() ? ecm_detect_indices(rx, *spec.bank, sched)
                                       : qam_detect_indices(rx, spec.order, sched);
        BitStream bits = indices_to_bits(idx, spec.order);
        if (n_bytes * 8 > bits.size()) {
          throw Error(ErrorKind::InvalidArgument, "fewer symbols than requested bytes");
        }
        bits.resize(n_bytes * 8);
        const auto bytes = pack_bits(bits);
        return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
      },
      py::arg("symbols"), py::arg("key"), py::arg("n_bytes"), py::arg("scheme") = "qam",
      py::arg("order") = 0, py::arg("bank") = nullptr, py::arg("selection") = "uniform",
      py::arg("rotation_block") = 1, "Complex symbols back to bytes");

  m.def(
      "awgn",
      [](const py::array_t<std::complex<double>, py::array::forcecast>& symbols, double es_n0_db,
         const std::string& noise_seed) {
        return to_array(awgn(from_array(symbols), {es_n0_db, Seed::from_hex(noise_seed)}));
      },
      py::arg("symbols"), py::arg("es_n0_db"), py::arg("noise_seed"));

  m.def(
      "sep_sweep",
      [](const std::vector<double>& snrs, const std::string& key, const std::string& noise_seed,
         const std::string& scheme, int order, const TupleBank* bank, std::uint64_t trials,
         unsigned threads) {
        const SchemeSpec spec = make_spec(scheme, order, bank, key, "uniform", 1);
        SweepOptions opt;
        opt.trials = trials;
        opt.threads = threads;
        opt.noise_seed = Seed::from_hex(noise_seed);
        SepReport rep;
        {
          py::gil_scoped_release release;
          rep = sep_sweep(spec, snrs, opt);
        }
        py::list rows;
        for (const auto& r : rep.rows) {
          py::dict d;
          d["es_n0_db"] = r.es_n0_db;
          d["trials"] = r.trials;
          d["errors"] = r.errors;
          d["sep"] = r.sep;
          d["ci95_half_width"] = r.half_width;
          rows.append(d);
        }
        return rows;
      },
      py::arg("snrs"), py::arg("key"), py::arg("noise_seed"), py::arg("scheme") = "qam",
      py::arg("order") = 0, py::arg("bank") = nullptr, py::arg("trials") = 100000,
      py::arg("threads") = 0, "Monte-Carlo symbol error probability per Es/N0");

  m.def("qam_sep_theory", &qam_sep_theory, py::arg("order"), py::arg("es_n0_db"));
  m.def("qam_min_distance", &qam_min_distance, py::arg("order"));

  m.def(
      "scatter",
      [](std::uint64_t count, const std::string& key, const std::string& noise_seed,
         const std::string& scheme, int order, const TupleBank* bank, double es_n0_db) {
        const SchemeSpec spec = make_spec(scheme, order, bank, key, "uniform", 1);
        return to_array(scatter_samples(spec, count, Seed::from_hex(noise_seed), es_n0_db));
      },
      py::arg("count"), py::arg("key"), py::arg("noise_seed"), py::arg("scheme") = "qam",
      py::arg("order") = 0, py::arg("bank") = nullptr, py::arg("es_n0_db") = kNoiselessDb,
      "Transmitted (or received, with es_n0_db) samples for random payloads");

  m.def(
      "quantized_entropy",
      [](const py::array_t<std::complex<double>, py::array::forcecast>& samples, int q,
         double region) {
        const EntropyReport r = quantized_entropy(from_array(samples), q, region);
        py::dict d;
        d["q"] = r.q;
        d["region"] = r.region;
        d["samples"] = r.samples;
        d["clamp_fraction"] = r.clamp_fraction();
        d["entropy_bits"] = r.entropy_bits;
        return d;
      },
      py::arg("samples"), py::arg("q"), py::arg("region") = 2.0);

  m.def(
      "expected_tuples",
      [](double pool_size, int order, double d_min, double area, bool exact) {
        const LogCount c = exact ? expected_tuples_exact(pool_size, order, d_min, area)
                                 : expected_tuples_approx(pool_size, order, d_min, area);
        return py::make_tuple(c.log10(), c.scientific());
      },
      py::arg("pool_size"), py::arg("order"), py::arg("d_min"), py::arg("area"),
      py::arg("exact") = false, "(log10, scientific string) of the expected tuple count");
}
