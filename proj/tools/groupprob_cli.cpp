#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "groupprob/envelope.hpp"
#include "groupprob/error.hpp"
#include "groupprob/harness.hpp"
#include "groupprob/instances.hpp"
#include "groupprob/normedness.hpp"
#include "groupprob/word_norm.hpp"

using namespace groupprob;

namespace {

/// Accepts inline JSON or a path to a JSON file.
Json load_json(const std::string& arg) {
  std::string text = arg;
  const auto first = arg.find_first_not_of(" \t\n");
  if (first == std::string::npos || (arg[first] != '{' && arg[first] != '[')) {
    std::ifstream in(arg, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + arg);
    std::ostringstream os;
    os << in.rdbuf();
    text = os.str();
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::MalformedJson, arg + ": " + e.what());
  }
}

/// "2..16" or "2,3,5".
std::set<long> parse_j(const std::string& s) {
  std::set<long> out;
  const auto dots = s.find("..");
  try {
    if (dots != std::string::npos) {
      const long lo = std::stol(s.substr(0, dots));
      const long hi = std::stol(s.substr(dots + 2));
      if (hi < lo || hi - lo > 1'000'000) throw Error(ErrorCode::InvalidParameter, "bad range " + s);
      for (long n = lo; n <= hi; ++n) out.insert(n);
    } else {
      std::stringstream ss(s);
      std::string item;
      while (std::getline(ss, item, ',')) out.insert(std::stol(item));
    }
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::InvalidParameter, "cannot parse J set \"" + s + "\"");
  }
  return out;
}

std::vector<Element> elements_of(const GroupInstance& inst, const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::MalformedJson, "elements must be a JSON array");
  std::vector<Element> out;
  for (const auto& e : j) out.push_back(inst.element_from_json(e));
  return out;
}

int status_exit(const std::string& status) {
  if (status == "satisfied") return 0;
  return status == "violated" ? 2 : 1;
}

void print(const Json& j) { std::cout << j.dump(2) << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact checks for metric semigroups, Rademacher sums and word norms"};
  app.require_subcommand(0, 1);
  bool list_kinds_flag = false;
  app.add_flag("--list-kinds", list_kinds_flag, "Print the supported group kinds");

  std::string group, elements, j_set = "2,3", element, dist, scenario, regime = "normed-general", family, word,
                                  manifest, ledger, format = "json", law, z0, z1, t_grid, mode = "exact", s_val,
                                  t_val, u_val, v_val;
  std::size_t samples = 256;
  std::uint64_t seed = 0, mont_samples = 100000;
  long equivalence = 0, torsion = 0, n_steps = 1;
  int conj_bound = 4, len_bound = 6;
  bool refute = false;

  auto* audit = app.add_subcommand("audit", "Seeded audit of the metric semigroup axioms");
  audit->add_option("--group", group, "Group spec (JSON or file)")->required();
  audit->add_option("--samples", samples, "Sample size");
  audit->add_option("--seed", seed, "Seed");

  auto* normed = app.add_subcommand("normedness", "J-normedness, equivalence and torsion checks");
  normed->add_option("--group", group, "Group spec (JSON or file)")->required();
  normed->add_option("--j", j_set, "J as a range a..b or a list a,b,c");
  normed->add_option("--elements", elements, "Elements (JSON array or file); default: seeded samples");
  normed->add_option("--samples", samples, "Sample count when --elements is absent");
  normed->add_option("--seed", seed, "Seed");
  normed->add_option("--equivalence", equivalence, "Also run the {2} vs {1..N} equivalence check up to N");
  normed->add_option("--torsion", torsion, "Also search for torsion up to this order");

  auto* envelope = app.add_subcommand("envelope", "Banach envelope pipeline");
  envelope->require_subcommand(1);
  auto* trace = envelope->add_subcommand("trace", "Image and norm of an element at each stage");
  trace->add_option("--group", group, "Group spec")->required();
  trace->add_option("--element", element, "Element (JSON or file)")->required();
  auto* roundtrip = envelope->add_subcommand("roundtrip", "Isometry and model round-trip checks");
  roundtrip->add_option("--group", group, "Group spec")->required();
  roundtrip->add_option("--samples", samples, "Sample pairs");
  roundtrip->add_option("--seed", seed, "Seed");

  auto* expect = app.add_subcommand("expectation", "Exact expectation of a finite law in the envelope");
  expect->add_option("--group", group, "Group spec")->required();
  expect->add_option("--dist", dist, "Law (JSON or file)")->required();

  auto* kk = app.add_subcommand("check-kk", "Khinchin-Kahane inequality");
  kk->add_option("--scenario", scenario, "Scenario (JSON or file)")->required();
  kk->add_option("--regime", regime, "normed-general | normed-sharp | general");

  auto* levy = app.add_subcommand("check-levy", "Levy-type maximal inequality over a laminar family");
  levy->add_option("--scenario", scenario, "Scenario (JSON or file)")->required();
  levy->add_option("--family", family, "prefix | suffix | singleton | JSON or file");
  levy->add_option("--s", s_val, "s > 0");
  levy->add_option("--t", t_val, "t > 0");

  auto* tail = app.add_subcommand("check-tail", "Tail product bound");
  tail->add_option("--scenario", scenario, "Scenario (JSON or file)")->required();
  tail->add_option("--s", s_val, "s > 0");
  tail->add_option("--t", t_val, "t > 0");
  tail->add_option("--u", u_val, "u > 0");
  tail->add_option("--v", v_val, "v > 0");

  auto* mont = app.add_subcommand("check-mont", "Maximal inequality for i.i.d. walks");
  mont->add_option("--group", group, "Group spec")->required();
  mont->add_option("--law", law, "Step law (JSON or file)")->required();
  mont->add_option("--z0", z0, "Base point (JSON); default identity");
  mont->add_option("--z1", z1, "Second point (JSON); default z0");
  mont->add_option("--n", n_steps, "Steps")->required();
  mont->add_option("--t-grid", t_grid, "Comma-separated thresholds")->required();
  mont->add_option("--mode", mode, "exact | sample");
  mont->add_option("--seed", seed, "Seed (sample mode)");
  mont->add_option("--samples", mont_samples, "Paths (sample mode)");

  auto* wn = app.add_subcommand("word-norm", "Bi-invariant word norm bounds in free groups");
  wn->add_option("--word", word, "Word, e.g. \"[a,b]^3\"");
  wn->add_option("--conj-bound", conj_bound, "Maximal conjugator length");
  wn->add_option("--len-bound", len_bound, "Maximal number of factors searched");
  wn->add_flag("--refute-f2", refute, "Run the F_2 non-normedness refutation");

  auto* batch = app.add_subcommand("batch", "Run a manifest and write ledger.jsonl");
  batch->add_option("--manifest", manifest, "Manifest file")->required();

  auto* summary = app.add_subcommand("summary", "Summarize a ledger");
  summary->add_option("--ledger", ledger, "ledger.jsonl")->required();
  summary->add_option("--format", format, "json | csv | markdown");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list_kinds_flag) {
      for (const auto& k : list_kinds()) std::cout << k << '\n';
      return 0;
    }
    if (*audit) {
      const InstancePtr inst = parse_group_spec(load_json(group));
      const AxiomAudit a = audit_axioms(*inst, samples, seed);
      print(a.to_json());
      return a.passed() ? 0 : 2;
    }
    if (*normed) {
      const InstancePtr inst = parse_group_spec(load_json(group));
      std::vector<Element> els;
      if (!elements.empty()) {
        els = elements_of(*inst, load_json(elements));
      } else {
        std::mt19937_64 rng(seed);
        for (std::size_t i = 0; i < samples; ++i) els.push_back(inst->sample(rng));
      }
      const NormednessVerdict v = check_j_normed(*inst, parse_j(j_set), els);
      Json out{{"verdict", v.to_json(*inst)}};
      bool consistent = v.equivalence_consistent;
      if (equivalence > 0) {
        const EquivalenceReport e = check_normed_equivalence(*inst, els, equivalence);
        out["equivalence"] = e.to_json(*inst);
        consistent = consistent && e.consistent;
      }
      if (torsion > 0) {
        const TorsionReport t = check_torsion_free(*inst, els, torsion);
        out["torsion"] = t.to_json(*inst);
        consistent = consistent && t.cross_check_consistent;
      }
      print(out);
      if (!consistent) return 1;
      return v.all_hold() ? 0 : 2;
    }
    if (*trace) {
      const InstancePtr inst = parse_group_spec(load_json(group));
      const Envelope env(inst);
      print(env.trace(inst->element_from_json(load_json(element))));
      return 0;
    }
    if (*roundtrip) {
      const Envelope env(parse_group_spec(load_json(group)));
      const RoundtripReport r = envelope_roundtrip(env, samples, seed);
      print(r.to_json());
      return r.mismatches == 0 ? 0 : 2;
    }
    if (*expect) {
      const InstancePtr inst = parse_group_spec(load_json(group));
      const Envelope env(inst);
      const FiniteDistribution d = distribution_from_json(*inst, load_json(dist));
      print({{"expectation", env.to_json(env.expectation(d))}});
      return 0;
    }
    if (*kk || *levy || *tail) {
      Json sc = load_json(scenario);
      std::string check = "kk";
      if (*kk) sc["regime"] = regime;
      if (*levy) {
        check = "levy";
        if (!family.empty()) {
          if (family == "prefix" || family == "suffix" || family == "singleton")
            sc["family"] = family;
          else
            sc["family"] = load_json(family);
        }
      }
      if (*tail) check = "tail";
      const std::pair<const char*, std::string*> params[] = {{"s", &s_val}, {"t", &t_val}, {"u", &u_val}, {"v", &v_val}};
      for (const auto& [k, v] : params)
        if (!v->empty()) sc[k] = *v;
      const CheckOutcome out = run_check(check, sc);
      print(out.report);
      return status_exit(out.status);
    }
    if (*mont) {
      const InstancePtr inst = parse_group_spec(load_json(group));
      Json sc{{"group", inst->spec_json()}, {"law", load_json(law)}, {"n", n_steps}, {"mode", mode}};
      if (!z0.empty()) {
        sc["z0"] = load_json(z0);
      } else {
        const auto one = inst->identity();
        if (!one) throw Error(ErrorCode::InvalidArgument, "--z0 is required for groups without identity");
        sc["z0"] = inst->element_to_json(*one);
      }
      sc["z1"] = z1.empty() ? sc["z0"] : load_json(z1);
      Json grid = Json::array();
      std::stringstream ss(t_grid);
      std::string item;
      while (std::getline(ss, item, ',')) grid.push_back(item);
      sc["t_grid"] = grid;
      sc["seed"] = seed;
      sc["samples"] = mont_samples;
      const CheckOutcome out = run_check("mont", sc);
      print(out.report);
      return status_exit(out.status);
    }
    if (*wn) {
      if (refute) {
        print(refute_normedness_f2().to_json());
        return 0;
      }
      if (word.empty()) throw Error(ErrorCode::InvalidArgument, "--word or --refute-f2 is required");
      const NormBounds nb = biinv_norm(parse_word(word), conj_bound, len_bound);
      print(nb.to_json());
      return 0;
    }
    if (*batch) {
      const BatchResult r = run_batch(load_manifest(manifest));
      print({{"ledger", r.ledger_path.string()}, {"records", r.records.size()}, {"exit_code", r.exit_code}});
      return r.exit_code;
    }
    if (*summary) {
      std::cout << emit_summary(read_ledger(ledger), format);
      if (format == "json") std::cout << '\n';
      return 0;
    }
    std::cout << app.help();
    return 0;
  } catch (const Error& e) {
    std::cerr << Json{{"error", error_code_name(e.code())}, {"message", e.what()}}.dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << Json{{"error", "Internal"}, {"message", e.what()}}.dump() << '\n';
    return 1;
  }
}
