#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tightbounds/generator.hpp"
#include "tightbounds/synthesis.hpp"

namespace py = pybind11;
using namespace tightbounds;

namespace {

System sys_of(const std::string& s) {
  if (s == "hd") return System::HD;
  if (s == "lo") return System::LO;
  if (s == "mx") return System::MX;
  if (s == "lsc") return System::LSC;
  throw py::value_error("system must be one of hd, lo, mx, lsc");
}

py::dict trace_dict(const Trace& tr) {
  py::list steps;
  for (const auto& st : tr.steps) {
    py::dict d;
    d["kind"] = step_kind_name(st.kind);
    d["result"] = render_term(st.result);
    if (st.kind == StepKind::MxErasing) d["erased_size"] = st.erased_size;
    steps.append(d);
  }
  py::dict out;
  out["initial"] = render_term(tr.initial);
  out["steps"] = steps;
  out["final"] = render_term(tr.final);
  out["reached_normal"] = tr.reached_normal;
  out["k"] = tr.totals.k;
  out["k_m"] = tr.totals.k_m;
  out["k_e"] = tr.totals.k_e;
  out["e_total"] = tr.totals.e_total;
  return out;
}

py::dict check_dict(const DerivPtr& d) {
  Indices idx = check(d);
  DerivFlags f = classify_derivation(d);
  py::dict out;
  out["system"] = system_name(d->system);
  out["context"] = render_context(d->ctx);
  out["term"] = render_term(d->subject);
  out["type"] = std::holds_alternative<TypePtr>(d->concl) ? render_type(concl_type(d))
                                                          : render_multiset(concl_multiset(d));
  out["b"] = idx.b;
  out["e"] = idx.e;
  out["r"] = idx.r;
  out["tight"] = f.tight;
  out["mx_tight"] = f.mx_tight;
  out["traditional"] = f.traditional;
  out["shrinking"] = f.shrinking;
  return out;
}

}  // namespace

PYBIND11_MODULE(_tightbounds, m) {
  m.doc() = "tight quantitative typings for head, leftmost, maximal and linear-head evaluation";

  m.def(
      "evaluate",
      [](const std::string& system, const std::string& term, int fuel) {
        return trace_dict(evaluate(sys_of(system), parse_term(term), fuel));
      },
      py::arg("system"), py::arg("term"), py::arg("fuel") = kDefaultFuel);

  m.def("classify", [](const std::string& system, const std::string& term) {
    Classification c = classify(sys_of(system), parse_term(term));
    py::dict d;
    d["normal"] = c.normal;
    d["neutral"] = c.neutral;
    d["abs"] = c.abs;
    return d;
  });

  m.def("size", [](const std::string& system, const std::string& term) {
    return term_size(sys_of(system), parse_term(term));
  });

  m.def(
      "synthesize",
      [](const std::string& system, const std::string& term, int fuel) {
        System s = sys_of(system);
        auto [tr, phi] = synthesize_tight(s, parse_term(term), fuel);
        py::dict d = trace_dict(tr);
        d["b"] = phi->idx.b;
        d["e"] = phi->idx.e;
        d["r"] = phi->idx.r;
        d["size"] = term_size(s, tr.final);
        d["derivation"] = derivation_to_text(phi);
        return d;
      },
      py::arg("system"), py::arg("term"), py::arg("fuel") = kDefaultFuel);

  m.def("check", [](const std::string& derivation_text) {
    return check_dict(derivation_from_text(derivation_text));
  });

  m.def("type_normal_form", [](const std::string& system, const std::string& term) {
    return derivation_to_text(type_normal_form(sys_of(system), parse_term(term)));
  });

  m.def(
      "mts",
      [](const std::string& term, const std::string& type) {
        TypePtr tau = type.empty() ? nullptr : parse_type(type);
        return derivation_to_text(mts_type_normal_form(parse_term(term), tau));
      },
      py::arg("term"), py::arg("type") = std::string());

  m.def("to_lsc", [](const std::string& derivation_text) {
    DerivPtr d = derivation_from_text(derivation_text);
    if (d->system != System::HD) throw py::value_error("to_lsc expects an hd derivation");
    return derivation_to_text(head_iso(d));
  });

  m.def("to_hd", [](const std::string& derivation_text) {
    DerivPtr d = derivation_from_text(derivation_text);
    if (d->system != System::LSC) throw py::value_error("to_hd expects an lsc derivation");
    return derivation_to_text(check_unfolding(d));
  });

  m.def(
      "fuzz",
      [](const std::string& system, int count, unsigned long long seed, bool simply_typed) {
        FuzzConfig cfg;
        cfg.system = sys_of(system);
        cfg.count = count;
        cfg.seed = seed;
        if (simply_typed) cfg.generator = GenKind::SimplyTyped;
        FuzzReport rep = run_fuzz(cfg);
        py::list fails;
        for (const auto& f : rep.failures) {
          py::dict d;
          d["term"] = f.term;
          d["check"] = f.check_name;
          d["detail"] = f.detail;
          fails.append(d);
        }
        py::dict d;
        d["attempted"] = rep.attempted;
        d["normalized"] = rep.normalized;
        d["skipped_fuel"] = rep.skipped_fuel;
        d["failures"] = fails;
        d["passes"] = rep.passes;
        return d;
      },
      py::arg("system"), py::arg("count") = 100, py::arg("seed") = 0,
      py::arg("simply_typed") = false);

  m.def("tn", [](int n) { return render_term(make_tn(n)); });
}
