#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "tightbounds/generator.hpp"
#include "tightbounds/synthesis.hpp"

using namespace tightbounds;
using nlohmann::ordered_json;

namespace {

System parse_system(const std::string& s) {
  if (s == "hd") return System::HD;
  if (s == "lo") return System::LO;
  if (s == "mx") return System::MX;
  if (s == "lsc") return System::LSC;
  throw CLI::ValidationError("--system", "expected one of hd, lo, mx, lsc");
}

TermPtr read_term_arg(const std::string& arg) {
  if (!arg.empty() && arg[0] == '@') {
    std::ifstream in(arg.substr(1));
    if (!in) throw std::runtime_error("cannot open " + arg.substr(1));
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_term(ss.str());
  }
  return parse_term(arg);
}

DerivPtr read_derivation_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return derivation_from_text(ss.str());
}

void emit_derivation(const DerivPtr& d, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << derivation_to_text(d);
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << derivation_to_text(d);
}

std::string summary_line(System s, const Indices& idx, const Trace& tr, int size) {
  std::ostringstream os;
  switch (s) {
    case System::HD:
    case System::LO:
      os << "b=" << idx.b << " r=" << idx.r << " k=" << tr.totals.k << " size=" << size;
      break;
    case System::MX:
      os << "b=" << idx.b << " r=" << idx.r << " k=" << tr.totals.k
         << " e_total=" << tr.totals.e_total << " size=" << size;
      break;
    case System::LSC:
      os << "b=" << idx.b << " e=" << idx.e << " r=" << idx.r << " k=" << tr.totals.k
         << " k_m=" << tr.totals.k_m << " k_e=" << tr.totals.k_e << " size=" << size;
      break;
  }
  return os.str();
}

ordered_json trace_json(const Trace& tr) {
  ordered_json steps = ordered_json::array();
  for (const auto& st : tr.steps) {
    ordered_json j{{"kind", step_kind_name(st.kind)}, {"result", render_term(st.result)}};
    if (st.kind == StepKind::MxErasing) j["erased_size"] = st.erased_size;
    steps.push_back(j);
  }
  return ordered_json{{"initial", render_term(tr.initial)},
                      {"steps", steps},
                      {"final", render_term(tr.final)},
                      {"reached_normal", tr.reached_normal},
                      {"k", tr.totals.k},
                      {"e_total", tr.totals.e_total},
                      {"k_m", tr.totals.k_m},
                      {"k_e", tr.totals.k_e}};
}

int run(int argc, char** argv) {
  CLI::App app{"tight typings for head, leftmost, maximal and linear-head evaluation"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "structured output");

  std::string system = "hd", term_arg, out_path, type_arg, file_arg, dir_arg;
  int fuel = kDefaultFuel;
  bool trace = false;

  auto* eval = app.add_subcommand("eval", "evaluate a term to normal form");
  eval->add_option("--system", system)->required();
  eval->add_option("--fuel", fuel);
  eval->add_flag("--trace", trace);
  eval->add_option("term", term_arg)->required();

  auto* cls = app.add_subcommand("classify", "normal / neutral / abs flags");
  cls->add_option("--system", system)->required();
  cls->add_option("term", term_arg)->required();

  auto* size_cmd = app.add_subcommand("size", "strategy-specific term size");
  size_cmd->add_option("--system", system)->required();
  size_cmd->add_option("term", term_arg)->required();

  auto* tnf = app.add_subcommand("type-nf", "tight derivation for a normal form");
  tnf->add_option("--system", system)->required();
  tnf->add_option("term", term_arg)->required();
  tnf->add_option("--out", out_path);

  auto* synth = app.add_subcommand("synthesize", "evaluate and build the tight derivation");
  synth->add_option("--system", system)->required();
  synth->add_option("--fuel", fuel);
  synth->add_option("term", term_arg)->required();
  synth->add_option("--out", out_path, "write the derivation here");

  auto* chk = app.add_subcommand("check", "validate a derivation file");
  chk->add_option("file", file_arg)->required();

  auto* iso = app.add_subcommand("iso", "translate between hd and lsc derivations");
  iso->add_option("direction", dir_arg)->required()->check(CLI::IsMember({"to-lsc", "to-hd"}));
  iso->add_option("file", file_arg)->required();
  iso->add_option("--out", out_path);

  auto* mts = app.add_subcommand("mts", "minimal traditional shrinking typing (lo-normal terms)");
  mts->add_option("term", term_arg)->required();
  mts->add_option("--type", type_arg);
  mts->add_option("--out", out_path);

  int count = 100;
  unsigned long long seed = 0;
  bool simply_typed = false;
  auto* fuzz = app.add_subcommand("fuzz", "random-term check battery");
  fuzz->add_option("--system", system)->required();
  fuzz->add_option("--count", count);
  fuzz->add_option("--seed", seed);
  fuzz->add_flag("--simply-typed", simply_typed);

  int n = 1;
  auto* tn = app.add_subcommand("tn", "substitution-step family t_n");
  tn->add_option("--n", n)->required()->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (eval->parsed()) {
    System s = parse_system(system);
    Trace tr = evaluate(s, read_term_arg(term_arg), fuel);
    if (json) {
      std::cout << trace_json(tr).dump(2) << "\n";
    } else {
      if (trace)
        for (const auto& st : tr.steps)
          std::cout << step_kind_name(st.kind) << " -> " << render_term(st.result) << "\n";
      std::cout << render_term(tr.final) << "\n";
    }
    if (!tr.reached_normal) {
      std::cerr << "fuel exhausted after " << tr.totals.k << " steps\n";
      return 1;
    }
    return 0;
  }

  if (cls->parsed()) {
    System s = parse_system(system);
    Classification c = classify(s, read_term_arg(term_arg));
    if (json)
      std::cout << ordered_json{{"normal", c.normal}, {"neutral", c.neutral}, {"abs", c.abs}}.dump()
                << "\n";
    else
      std::cout << "normal=" << (c.normal ? "true" : "false")
                << " neutral=" << (c.neutral ? "true" : "false")
                << " abs=" << (c.abs ? "true" : "false") << "\n";
    return 0;
  }

  if (size_cmd->parsed()) {
    std::cout << term_size(parse_system(system), read_term_arg(term_arg)) << "\n";
    return 0;
  }

  if (tnf->parsed()) {
    auto d = type_normal_form(parse_system(system), read_term_arg(term_arg));
    emit_derivation(d, out_path);
    return 0;
  }

  if (synth->parsed()) {
    System s = parse_system(system);
    auto t = read_term_arg(term_arg);
    auto [tr, phi] = synthesize_tight(s, t, fuel);
    int size = term_size(s, tr.final);
    if (json) {
      ordered_json j{{"trace", trace_json(tr)},
                     {"derivation", nlohmann::json::parse(derivation_to_text(phi))},
                     {"b", phi->idx.b},
                     {"e", phi->idx.e},
                     {"r", phi->idx.r},
                     {"size", size}};
      std::cout << j.dump(2) << "\n";
    } else {
      for (const auto& st : tr.steps)
        std::cout << step_kind_name(st.kind) << " -> " << render_term(st.result) << "\n";
      std::cout << summary_line(s, phi->idx, tr, size) << "\n";
    }
    if (!out_path.empty()) emit_derivation(phi, out_path);
    return 0;
  }

  if (chk->parsed()) {
    DerivPtr d = read_derivation_file(file_arg);
    Indices idx;
    try {
      idx = check(d);
    } catch (const DerivationError& e) {
      std::cerr << "check failed at node " << (e.node_path.empty() ? "root" : e.node_path) << ": "
                << e.what() << "\n";
      return 1;
    }
    DerivFlags f = classify_derivation(d);
    std::string ty = std::holds_alternative<TypePtr>(d->concl)
                         ? render_type(concl_type(d))
                         : render_multiset(concl_multiset(d));
    if (json) {
      ordered_json j{{"system", system_name(d->system)},
                     {"context", render_context(d->ctx)},
                     {"term", render_term(d->subject)},
                     {"type", ty},
                     {"indices", {idx.b, idx.e, idx.r}},
                     {"tight", f.tight},
                     {"mx_tight", f.mx_tight},
                     {"traditional", f.traditional},
                     {"shrinking", f.shrinking}};
      std::cout << j.dump() << "\n";
    } else {
      std::cout << render_context(d->ctx) << (d->ctx.domain().empty() ? "" : " ") << "|- "
                << render_term(d->subject) << " : " << ty << "\n";
      std::cout << "indices=(" << idx.b << ","
                << (d->system == System::LSC ? std::to_string(idx.e) + "," : std::string())
                << idx.r << ")"
                << " tight=" << (f.tight ? "true" : "false")
                << " mx_tight=" << (f.mx_tight ? "true" : "false")
                << " traditional=" << (f.traditional ? "true" : "false")
                << " shrinking=" << (f.shrinking ? "true" : "false") << "\n";
    }
    return 0;
  }

  if (iso->parsed()) {
    DerivPtr d = read_derivation_file(file_arg);
    check(d);
    DerivPtr out;
    if (dir_arg == "to-lsc") {
      if (d->system != System::HD) {
        std::cerr << "to-lsc expects an hd derivation\n";
        return 1;
      }
      out = head_iso(d);
    } else {
      if (d->system != System::LSC) {
        std::cerr << "to-hd expects an lsc derivation\n";
        return 1;
      }
      out = check_unfolding(d);
    }
    emit_derivation(out, out_path);
    return 0;
  }

  if (mts->parsed()) {
    TypePtr tau = type_arg.empty() ? nullptr : parse_type(type_arg);
    auto d = mts_type_normal_form(read_term_arg(term_arg), tau);
    if (!out_path.empty()) {
      emit_derivation(d, out_path);
    } else if (json) {
      std::cout << nlohmann::json::parse(derivation_to_text(d)).dump(2) << "\n";
    } else {
      std::cout << render_context(d->ctx) << (d->ctx.domain().empty() ? "" : " ") << "|- "
                << render_term(d->subject) << " : " << render_type(concl_type(d)) << "\n";
      std::cout << "b=" << d->idx.b << " r=" << d->idx.r << "\n";
    }
    return 0;
  }

  if (fuzz->parsed()) {
    FuzzConfig cfg;
    cfg.system = parse_system(system);
    cfg.count = count;
    cfg.seed = seed;
    cfg.fuel = fuel;
    if (simply_typed) cfg.generator = GenKind::SimplyTyped;
    FuzzReport rep = run_fuzz(cfg);
    if (json) {
      ordered_json fails = ordered_json::array();
      for (const auto& f : rep.failures)
        fails.push_back({{"term", f.term}, {"check", f.check_name}, {"detail", f.detail}});
      ordered_json passes;
      for (const auto& [k, v] : rep.passes) passes[k] = v;
      std::cout << ordered_json{{"attempted", rep.attempted},
                                {"normalized", rep.normalized},
                                {"skipped_fuel", rep.skipped_fuel},
                                {"failures", fails},
                                {"passes", passes}}
                       .dump(2)
                << "\n";
    } else {
      std::cout << "attempted=" << rep.attempted << " normalized=" << rep.normalized
                << " skipped_fuel=" << rep.skipped_fuel << " failures=" << rep.failures.size()
                << "\n";
      for (const auto& f : rep.failures)
        std::cerr << "FAIL " << f.check_name << " on " << f.term << ": " << f.detail
                  << "\n";
    }
    return rep.failures.empty() ? 0 : 1;
  }

  if (tn->parsed()) {
    TermPtr t = make_tn(n);
    Trace tr = evaluate(System::LSC, t, 1 << 22);
    if (!tr.reached_normal) {
      std::cerr << "t_" << n << " did not normalize within fuel\n";
      return 1;
    }
    if (json)
      std::cout << ordered_json{{"n", n}, {"k_m", tr.totals.k_m}, {"k_e", tr.totals.k_e}}.dump()
                << "\n";
    else
      std::cout << "k_m=" << tr.totals.k_m << " k_e=" << tr.totals.k_e << "\n";
    return 0;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const CLI::Error&) {
    return 2;  // CLI11_PARSE handles the common path; this covers validators
  } catch (const DerivationError& e) {
    std::cerr << "derivation error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
