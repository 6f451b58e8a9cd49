#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "groupprob/error.hpp"
#include "groupprob/harness.hpp"

using namespace groupprob;
namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("groupprob_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

void write(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const char* kKK[] = {
    R"({"group":{"kind":"free-abelian","dim":2},"elements":[[1,0],[0,1]],"p":"1","q":"2","regime":"normed-general"})",
    R"({"group":{"kind":"free-abelian","dim":2},"elements":[[1,2],[3,-1],[2,2]],"p":"2","q":"3/2","regime":"normed-general"})",
    R"({"group":{"kind":"free-abelian","dim":2,"weights":["1/1","1/2"]},"elements":[[1,1],[1,1]],"p":"1","q":"2","regime":"normed-sharp"})",
};

BatchManifest kk_manifest(const TempDir& dir) {
  Json scenarios = Json::array();
  for (int i = 0; i < 3; ++i) {
    const std::string name = "kk" + std::to_string(i) + ".json";
    write(dir.path / name, kKK[i]);
    scenarios.push_back({{"path", name}, {"check", "kk"}});
  }
  write(dir.path / "manifest.json", Json{{"seed", 7}, {"output_dir", "out"}, {"scenarios", scenarios}}.dump());
  return load_manifest(dir.path / "manifest.json");
}

}  // namespace

TEST_CASE("sha256") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("batch of three KK scenarios") {
  TempDir dir;
  const BatchManifest m = kk_manifest(dir);
  const BatchResult r = run_batch(m);
  CHECK(r.exit_code == 0);
  REQUIRE(r.records.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(r.records[i].status == "satisfied");
    CHECK(r.records[i].id == "kk" + std::to_string(i));
    CHECK(r.records[i].tool_version == "0.1.0");
    CHECK(r.records[i].input_digest == sha256_hex(kKK[i]));
  }
  const auto ledger = read_ledger(r.ledger_path);
  CHECK(ledger.size() == 3);

  const std::string csv = emit_summary(ledger, "csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  const std::string md = emit_summary(ledger, "markdown");
  CHECK(md.find("| kk2 | satisfied | khinchin-kahane |") != std::string::npos);
  CHECK(md.find("| 1 |\n") != std::string::npos);
  CHECK(Json::parse(emit_summary(ledger, "json")).size() == 3);
}

TEST_CASE("ledgers are identical modulo timestamps") {
  TempDir dir;
  const BatchManifest m = kk_manifest(dir);
  auto strip = [](const fs::path& p) {
    std::istringstream in(read(p));
    std::string line, out;
    while (std::getline(in, line)) {
      Json j = Json::parse(line);
      j.erase("timestamp");
      out += j.dump() + "\n";
    }
    return out;
  };
  const BatchResult a = run_batch(m);
  const std::string first = strip(a.ledger_path);
  const BatchResult b = run_batch(m);
  CHECK(first == strip(b.ledger_path));
}

TEST_CASE("corrupt scenario is recorded and the batch continues") {
  TempDir dir;
  write(dir.path / "good.json", kKK[0]);
  write(dir.path / "bad.json", "{\"group\": ");
  write(dir.path / "manifest.json",
        R"({"output_dir":"out","scenarios":[{"path":"bad.json","check":"kk"},{"path":"good.json","check":"kk"},{"path":"missing.json","check":"kk"}]})");
  const BatchResult r = run_batch(load_manifest(dir.path / "manifest.json"));
  CHECK(r.exit_code == 1);
  REQUIRE(r.records.size() == 3);
  CHECK(r.records[0].status == "error");
  CHECK_FALSE(r.records[0].error.empty());
  CHECK(r.records[1].status == "satisfied");
  CHECK(r.records[2].status == "error");
}

TEST_CASE("empty manifest") {
  TempDir dir;
  write(dir.path / "manifest.json", R"({"output_dir":"out","scenarios":[]})");
  const BatchResult r = run_batch(load_manifest(dir.path / "manifest.json"));
  CHECK(r.exit_code == 0);
  CHECK(read(r.ledger_path).empty());
  CHECK(emit_summary(read_ledger(r.ledger_path), "json") == "[]");
}

TEST_CASE("exit code precedence") {
  LedgerRecord ok, bad, err, open;
  ok.status = "satisfied";
  bad.status = "violated";
  err.status = "error";
  open.status = "undecided";
  CHECK(exit_code_for({ok, ok}) == 0);
  CHECK(exit_code_for({ok, err}) == 1);
  CHECK(exit_code_for({ok, open}) == 1);
  CHECK(exit_code_for({err, bad, ok}) == 2);
}

TEST_CASE("summary rows are sorted and formats validated") {
  LedgerRecord b, a;
  b.id = "b";
  a.id = "a";
  a.status = b.status = "satisfied";
  a.report = b.report = Json{{"inequality", "levy"}, {"lhs", "1/2"}, {"rhs", "1/1"}, {"slack", "2/1"},
                             {"constant", {{"formula", "f,g"}}}};
  const std::string csv = emit_summary({b, a}, "csv");
  CHECK(csv == "id,status,inequality,lhs,rhs,constant_formula,slack\na,satisfied,levy,1/2,1/1,\"f,g\",2/1\n"
               "b,satisfied,levy,1/2,1/1,\"f,g\",2/1\n");
  try {
    emit_summary({a}, "xml");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownFormat);
  }
}

TEST_CASE("checks run through the dispatcher") {
  CHECK(run_check("sharpness", Json::parse(R"({"group":{"kind":"free-abelian","dim":1},"x":[3],"q":"3/2"})")).status ==
        "satisfied");
  CHECK(run_check("levy", Json::parse(R"({"group":{"kind":"free-abelian","dim":1},"elements":[[1],[1]],
        "family":[[1],[1,2]],"s":"1","t":"1"})")).report.at("lhs") == "1/2");
  CHECK(run_check("tail", Json::parse(R"({"group":{"kind":"free-abelian","dim":1},"elements":[[1],[1],[1]],
        "s":"1/2","t":"1/2","u":"1/2","v":"1/2"})")).status == "satisfied");
  CHECK(run_check("mont", Json::parse(R"({"group":{"kind":"free-abelian","dim":1},"law":[[[1],"1/2"],[[-1],"1/2"]],
        "z0":[0],"z1":[0],"n":4,"t_grid":["3"]})")).report.at("lhs") == "1/4");
  CHECK(run_check("word-norm", Json::parse(R"({"word":"[a,b]^3"})")).report.at("upper") == 4);
  CHECK(run_check("refute-f2", Json::object()).status == "satisfied");
  CHECK_THROWS_AS(run_check("nope", Json::object()), Error);
}
