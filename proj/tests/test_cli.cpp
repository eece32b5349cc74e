#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(GRADED_ZCR_BIN) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe) != nullptr) out += buf.data();
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string fixture(const std::string& rel) { return std::string(FIXTURE_DIR) + "/" + rel; }

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "graded-zcr-cli-test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("check-zcr exit codes") {
  CHECK(run("check-zcr skdv.a4 builtin:zcr/removable_beta.zcr").code == 0);
  CHECK(run("check-zcr skdv.a4 " + fixture("zcr/das_alpha_corrected.zcr")).code == 0);
  Run bad = run("check-zcr skdv.a4 builtin:zcr/das_alpha.zcr");
  CHECK(bad.code == 2);
  CHECK(run("check-zcr skdv.a4 no/such/file.zcr").code == 1);
  CHECK(run("check-zcr").code == 1);
  CHECK(run("no-such-command").code == 1);
}

TEST_CASE("removability solve") {
  Run ok = run("removability solve skdv.a4 builtin:zcr/removable_beta.zcr --lambda-deg 2");
  CHECK(ok.code == 0);
  Run cert = run("removability solve skdv.a4 builtin:zcr/das_alpha_corrected.zcr --laurent -4:1");
  CHECK(cert.code == 2);
  CHECK(cert.out.find("ansatz") != std::string::npos);
  CHECK(run("removability solve skdv.a4 builtin:zcr/removable_beta.zcr --laurent 3").code == 1);
}

TEST_CASE("integrate-q and gauge round trip") {
  Run s = run("integrate-q builtin:matrices/removable_q.mat");
  CHECK(s.code == 0);
  CHECK(s.out.find("lam") != std::string::npos);
  auto dir = scratch_dir();
  std::ofstream(dir / "s.mat") << s.out;
  Run g = run("gauge builtin:zcr/removable_beta.zcr " + (dir / "s.mat").string() + " --inverse");
  CHECK(g.code == 0);
  std::ofstream(dir / "beta0.zcr") << g.out;
  CHECK(run("check-zcr skdv.a4 " + (dir / "beta0.zcr").string()).code == 0);
  auto body = g.out.find("A (2|1)");
  REQUIRE(body != std::string::npos);
  CHECK(g.out.find("lam", body) == std::string::npos);
}

TEST_CASE("cover build and check") {
  Run c = run("cover build skdv.a4 builtin:zcr/removable_beta.zcr");
  CHECK(c.code == 0);
  auto dir = scratch_dir();
  std::ofstream(dir / "built.cov") << c.out;
  CHECK(run("cover check " + (dir / "built.cov").string()).code == 0);
  CHECK(run("cover check builtin:coverings/kdv_gardner.cov").code == 0);
}

TEST_CASE("fn check and complete") {
  CHECK(run("fn check builtin:coverings/skdv_removable.cov builtin:shadows/skdv_removable.shd").code == 0);
  CHECK(run("fn check builtin:coverings/kdv_gardner.cov builtin:shadows/kdv_gardner.shd").code == 0);
  CHECK(run("fn check builtin:coverings/kdv_gardner.cov builtin:shadows/kdv_gardner_seed.shd").code == 2);
  Run done = run("fn complete builtin:coverings/kdv_gardner.cov builtin:shadows/kdv_gardner_seed.shd "
                 "--rate '-2*eps^2'");
  CHECK(done.code == 0);
  CHECK(done.out.find("meta provenance: derived") != std::string::npos);
  CHECK(run("fn complete builtin:coverings/kdv_gardner.cov builtin:shadows/kdv_gardner_seed.shd").code == 2);
}

TEST_CASE("lemma check") {
  Run r = run("lemma check skdv.a4 builtin:zcr/removable_beta.zcr builtin:matrices/removable_q.mat --random 5");
  CHECK(r.code == 0);
}

TEST_CASE("examples") {
  Run list = run("examples list");
  CHECK(list.code == 0);
  CHECK(list.out.find("skdv.removable-zcr") != std::string::npos);
  CHECK(run("examples run skdv.removable-zcr").code == 0);
  CHECK(run("examples run kdv.gardner").code == 0);
  CHECK(run("examples run unknown").code == 1);
}

TEST_CASE("JSON report") {
  auto path = scratch_dir() / "report.json";
  std::filesystem::remove(path);
  CHECK(run("--report " + path.string() + " examples run kb3").code == 0);
  std::ifstream in(path);
  REQUIRE(in.good());
  auto j = nlohmann::json::parse(in);
  CHECK(j.contains("steps"));
}

TEST_CASE("expand-superfield") {
  Run r = run("expand-superfield");
  CHECK(r.code == 0);
  CHECK(r.out.find("u12_t") != std::string::npos);
  CHECK(run("expand-superfield --a a").code == 0);
}
