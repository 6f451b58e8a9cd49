#include "groupprob/harness.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "groupprob/envelope.hpp"
#include "groupprob/error.hpp"
#include "groupprob/instances.hpp"
#include "groupprob/parallel.hpp"
#include "groupprob/rademacher.hpp"
#include "groupprob/word_norm.hpp"

namespace groupprob {

namespace {

Rational rational_field(const Json& j, const char* name, std::optional<Rational> fallback = std::nullopt) {
  if (!j.contains(name)) {
    if (fallback) return *fallback;
    throw Error(ErrorCode::MalformedJson, std::string("missing \"") + name + "\"");
  }
  const Json& v = j.at(name);
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (v.is_number_float()) return from_double(v.get<double>());
  throw Error(ErrorCode::InvalidParameter, std::string("\"") + name + "\" must be a rational");
}

long integer_field(const Json& j, const char* name, long fallback) {
  if (!j.contains(name)) return fallback;
  if (!j.at(name).is_number_integer()) throw Error(ErrorCode::InvalidParameter, std::string("\"") + name + "\" must be an integer");
  return j.at(name).get<long>();
}

std::string status_of(const InequalityReport& r) {
  if (!r.decided) return "undecided";
  return r.satisfied ? "satisfied" : "violated";
}

CheckOutcome outcome(const InequalityReport& r) { return {status_of(r), r.to_json()}; }

LaminarFamily family_field(const Json& j, int n) {
  if (!j.contains("family")) return prefix_family(n);
  const Json& f = j.at("family");
  if (f.is_string()) {
    const std::string name = f.get<std::string>();
    if (name == "prefix") return prefix_family(n);
    if (name == "suffix") return suffix_family(n);
    if (name == "singleton") return singleton_family(n);
    throw Error(ErrorCode::InvalidParameter, "unknown family \"" + name + "\"");
  }
  return family_from_json(f);
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string md_cell(std::string s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names{"kk", "sharpness", "levy", "tail", "mont", "word-norm", "refute-f2"};
  return names;
}

CheckOutcome run_check(std::string_view check, const Json& j, std::uint64_t seed) {
  if (!j.is_object()) throw Error(ErrorCode::MalformedJson, "scenario must be a JSON object");
  if (check == "kk") {
    const RademacherScenario s = scenario_from_json(j);
    const KKRegime regime = parse_regime(j.value("regime", std::string("normed-general")));
    return outcome(check_kk(s, regime));
  }
  if (check == "sharpness") {
    if (!j.contains("group") || !j.contains("x")) throw Error(ErrorCode::MalformedJson, "sharpness needs \"group\" and \"x\"");
    const InstancePtr inst = parse_group_spec(j.at("group"));
    const Element x = inst->element_from_json(j.at("x"));
    const Rational q = rational_field(j, "q", Rational(2));
    const SharpnessResult sr = sharpness_ratio(inst, x, q);
    InequalityReport r;
    r.inequality = "kk-sharpness";
    r.lhs = format_double(sr.value);
    r.rhs = format_double(sr.expected.interval().mid());
    r.lhs_interval = sr.ratio;
    r.constant_value = r.rhs;
    r.constant_formula = "C_{1,q}=2^{1-1/q}";
    const bool close = std::fabs(sr.value - sr.expected.interval().mid()) <= 1e-12;
    r.satisfied = sr.matches_exactly.value_or(close);
    r.exact = sr.matches_exactly.has_value();
    r.slack = r.satisfied ? "1" : format_double(sr.expected.interval().mid() / sr.value);
    r.witness = {{"group", inst->spec_json()}, {"x", inst->element_to_json(x)}, {"q", format_rational(q)}};
    if (sr.ratio_pow_q) r.details["ratio_pow_q"] = format_rational(*sr.ratio_pow_q);
    r.details["expected_exact"] = sr.expected.to_string();
    return outcome(r);
  }
  if (check == "levy") {
    const RademacherScenario s = scenario_from_json(j);
    const LaminarFamily fam = family_field(j, static_cast<int>(s.elements.size()));
    return outcome(check_levy(s, fam, rational_field(j, "s"), rational_field(j, "t")));
  }
  if (check == "tail") {
    const RademacherScenario s = scenario_from_json(j);
    return outcome(check_tail(s, rational_field(j, "s"), rational_field(j, "t"), rational_field(j, "u"),
                              rational_field(j, "v")));
  }
  if (check == "mont") {
    for (const char* k : {"group", "law", "z0", "z1", "n", "t_grid"})
      if (!j.contains(k)) throw Error(ErrorCode::MalformedJson, std::string("mont needs \"") + k + "\"");
    const InstancePtr inst = parse_group_spec(j.at("group"));
    const FiniteDistribution law = distribution_from_json(*inst, j.at("law"));
    std::vector<Rational> grid;
    if (!j.at("t_grid").is_array()) throw Error(ErrorCode::MalformedJson, "\"t_grid\" must be an array");
    for (const auto& t : j.at("t_grid")) grid.push_back(rational_field(Json{{"t", t}}, "t"));
    MontMode mode;
    const std::string m = j.value("mode", std::string("exact"));
    if (m != "exact" && m != "sample") throw Error(ErrorCode::InvalidParameter, "mode must be exact or sample");
    mode.exact = m == "exact";
    mode.seed = static_cast<std::uint64_t>(integer_field(j, "seed", static_cast<long>(seed)));
    mode.samples = static_cast<std::uint64_t>(integer_field(j, "samples", 100000));
    return outcome(check_mont(inst, law, inst->element_from_json(j.at("z0")), inst->element_from_json(j.at("z1")),
                              integer_field(j, "n", 1), grid, mode));
  }
  if (check == "word-norm") {
    if (!j.contains("word") || !j.at("word").is_string()) throw Error(ErrorCode::MalformedJson, "word-norm needs \"word\"");
    const ReducedWord w = parse_word(j.at("word").get<std::string>());
    const NormBounds nb = biinv_norm(w, static_cast<int>(integer_field(j, "conj_bound", 4)),
                                     static_cast<int>(integer_field(j, "len_bound", 6)));
    Json rep = nb.to_json();
    rep["word"] = w.to_string();
    return {verify_witness(w, nb.witness) && nb.lower <= nb.upper ? "satisfied" : "violated", rep};
  }
  if (check == "refute-f2") {
    const InequalityReport r = refute_normedness_f2();
    // Status records whether the refutation is certified.
    return {r.details.at("normed").get<bool>() ? "violated" : "satisfied", r.to_json()};
  }
  throw Error(ErrorCode::InvalidParameter, "unknown check \"" + std::string(check) + "\"");
}

// ---------------------------------------------------------------------------

BatchManifest manifest_from_json(const Json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw Error(ErrorCode::MalformedJson, "manifest must be a JSON object");
  BatchManifest m;
  m.seed = static_cast<std::uint64_t>(integer_field(j, "seed", 0));
  std::filesystem::path out = j.value("output_dir", std::string("."));
  m.output_dir = out.is_absolute() ? out : base_dir / out;
  if (j.contains("scenarios")) {
    if (!j.at("scenarios").is_array()) throw Error(ErrorCode::MalformedJson, "\"scenarios\" must be an array");
    std::size_t index = 0;
    for (const auto& e : j.at("scenarios")) {
      ManifestEntry me;
      if (e.is_string()) {
        me.path = e.get<std::string>();
      } else if (e.is_object()) {
        if (e.contains("path")) me.path = e.at("path").get<std::string>();
        if (e.contains("scenario")) me.inline_scenario = e.at("scenario");
        me.check = e.value("check", std::string());
        me.id = e.value("id", std::string());
        if (e.contains("overrides")) me.overrides = e.at("overrides");
      } else {
        throw Error(ErrorCode::MalformedJson, "manifest entries must be paths or objects");
      }
      if (me.path.empty() && me.inline_scenario.is_null())
        throw Error(ErrorCode::MalformedJson, "manifest entry needs \"path\" or \"scenario\"");
      if (!me.path.empty() && me.path.is_relative()) me.path = base_dir / me.path;
      if (me.id.empty()) me.id = me.path.empty() ? "scenario-" + std::to_string(index) : me.path.stem().string();
      m.scenarios.push_back(std::move(me));
      ++index;
    }
  }
  return m;
}

BatchManifest load_manifest(const std::filesystem::path& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::MalformedJson, std::string("manifest: ") + e.what());
  }
  return manifest_from_json(j, path.parent_path().empty() ? "." : path.parent_path());
}

Json LedgerRecord::to_json() const {
  Json j{{"id", id},
         {"check", check},
         {"status", status},
         {"report", report},
         {"timestamp", timestamp},
         {"tool_version", tool_version},
         {"input_digest", input_digest}};
  j["error"] = error.empty() ? Json(nullptr) : Json(error);
  return j;
}

LedgerRecord LedgerRecord::from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::MalformedJson, "ledger record must be an object");
  LedgerRecord r;
  r.id = j.value("id", std::string());
  r.check = j.value("check", std::string());
  r.status = j.value("status", std::string());
  r.report = j.value("report", Json(nullptr));
  if (j.contains("error") && j.at("error").is_string()) r.error = j.at("error").get<std::string>();
  r.timestamp = j.value("timestamp", std::string());
  r.tool_version = j.value("tool_version", std::string());
  r.input_digest = j.value("input_digest", std::string());
  return r;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorCode::Io, "SHA-256 failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

int exit_code_for(const std::vector<LedgerRecord>& records) {
  int code = 0;
  for (const auto& r : records) {
    if (r.status == "violated") return 2;
    if (r.status != "satisfied") code = 1;
  }
  return code;
}

BatchResult run_batch(const BatchManifest& manifest) {
  const std::size_t n = manifest.scenarios.size();
  BatchResult result;
  result.records.resize(n);
  parallel_chunks(n, n, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const ManifestEntry& e = manifest.scenarios[i];
      LedgerRecord& rec = result.records[i];
      rec.id = e.id;
      rec.check = e.check;
      try {
        std::string bytes;
        Json scenario;
        if (!e.path.empty()) {
          bytes = read_file(e.path);
          try {
            scenario = Json::parse(bytes);
          } catch (const Json::parse_error& pe) {
            throw Error(ErrorCode::MalformedJson, e.path.filename().string() + ": " + pe.what());
          }
        } else {
          scenario = e.inline_scenario;
          bytes = scenario.dump();
        }
        rec.input_digest = sha256_hex(bytes);
        if (!e.overrides.empty()) scenario.merge_patch(e.overrides);
        if (rec.check.empty()) rec.check = scenario.value("check", std::string());
        if (rec.check.empty()) throw Error(ErrorCode::MalformedJson, "no check named for scenario");
        const CheckOutcome out = run_check(rec.check, scenario, manifest.seed);
        rec.status = out.status;
        rec.report = out.report;
      } catch (const std::exception& ex) {
        rec.status = "error";
        rec.error = ex.what();
      }
      rec.timestamp = utc_timestamp();
    }
  });

  std::filesystem::create_directories(manifest.output_dir);
  result.ledger_path = manifest.output_dir / "ledger.jsonl";
  std::ofstream out(result.ledger_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + result.ledger_path.string());
  for (const auto& r : result.records) out << r.to_json().dump() << '\n';
  result.exit_code = exit_code_for(result.records);
  return result;
}

std::vector<LedgerRecord> read_ledger(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::vector<LedgerRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(LedgerRecord::from_json(Json::parse(line)));
    } catch (const Json::parse_error& e) {
      throw Error(ErrorCode::MalformedJson, "ledger line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::string emit_summary(const std::vector<LedgerRecord>& records, std::string_view format) {
  if (format != "json" && format != "csv" && format != "markdown")
    throw Error(ErrorCode::UnknownFormat, "unknown summary format \"" + std::string(format) + "\"");
  struct Row {
    std::string id, status, inequality, lhs, rhs, formula, slack;
  };
  std::vector<Row> rows;
  for (const auto& r : records) {
    Row row{r.id, r.status, r.check, "", "", "", ""};
    const Json& rep = r.report;
    if (rep.is_object()) {
      row.inequality = rep.value("inequality", r.check);
      auto str = [&](const char* k) {
        if (!rep.contains(k)) return std::string();
        return rep.at(k).is_string() ? rep.at(k).get<std::string>() : rep.at(k).dump();
      };
      row.lhs = str("lhs");
      row.rhs = str("rhs");
      row.slack = str("slack");
      if (rep.contains("constant") && rep.at("constant").is_object())
        row.formula = rep.at("constant").value("formula", std::string());
      if (r.check == "word-norm") {
        row.lhs = str("lower");
        row.rhs = str("upper");
      }
    }
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.id < b.id; });

  std::ostringstream os;
  if (format == "json") {
    Json a = Json::array();
    for (const auto& r : rows)
      a.push_back({{"id", r.id},
                   {"status", r.status},
                   {"inequality", r.inequality},
                   {"lhs", r.lhs},
                   {"rhs", r.rhs},
                   {"constant_formula", r.formula},
                   {"slack", r.slack}});
    os << a.dump();
  } else if (format == "csv") {
    os << "id,status,inequality,lhs,rhs,constant_formula,slack\n";
    for (const auto& r : rows)
      os << csv_field(r.id) << ',' << csv_field(r.status) << ',' << csv_field(r.inequality) << ',' << csv_field(r.lhs)
         << ',' << csv_field(r.rhs) << ',' << csv_field(r.formula) << ',' << csv_field(r.slack) << '\n';
  } else {
    os << "| id | status | inequality | lhs | rhs | constant | slack |\n";
    os << "|---|---|---|---|---|---|---|\n";
    for (const auto& r : rows)
      os << "| " << md_cell(r.id) << " | " << r.status << " | " << md_cell(r.inequality) << " | " << md_cell(r.lhs)
         << " | " << md_cell(r.rhs) << " | " << md_cell(r.formula) << " | " << md_cell(r.slack) << " |\n";
  }
  return os.str();
}

}  // namespace groupprob
