#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

const std::string kFixtures = SIMCAT_FIXTURES;
const std::string kBinary = SIMCAT_BINARY;

struct Result {
  int code;
  std::string out;
};

Result run(const std::string& args) {
  std::string cmd = kBinary + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string fx(const std::string& name) { return kFixtures + "/" + name + ".gdl"; }

std::string temp_path(const std::string& name) {
  return ::testing::TempDir() + "simcat_cli_" + name;
}

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

std::string read(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(CliMatrix, Encoder) {
  Result r = run("matrix " + fx("encoder3"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out,
            "1 0 0 0 0 0 0 0\n0 1 0 0 0 0 0 0\n0 0 1 0 0 0 0 0\n0 0 0 1 0 0 0 0\n"
            "0 0 0 0 0 0 0 1\n0 0 0 0 0 0 1 0\n0 0 0 0 0 1 0 0\n0 0 0 0 1 0 0 0\n");
}

TEST(CliMatrix, IdentityAndObserved) {
  EXPECT_EQ(run("matrix " + fx("identity2")).out, "1 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 1\n");
  Result r = run("matrix " + fx("dom2") + " --observe c0");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 2);
  EXPECT_EQ(r.out.substr(0, 2), "1 ");
}

TEST(CliWalsh, TruthTable) {
  std::string path = temp_path("and.tt");
  write(path, "00 0\n01 0\n10 0\n11 1\n");
  Result r = run("walsh " + path);
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1 0 0 0\n1/2^1 1/2^1 1/2^1 -1/2^1\n");
  EXPECT_EQ(run("walsh --naive " + path).out, r.out);
  write(path, "00 0\n");
  EXPECT_EQ(run("walsh " + path).code, 2);
}

TEST(CliCheck, Examples) {
  Result dom = run("check " + fx("dom2") + " --prop pini -t 2 --probes 1");
  EXPECT_EQ(dom.code, 1);
  EXPECT_NE(dom.out.find("FAIL"), std::string::npos);
  Result refresh = run("check " + fx("refresh2") + " --prop sim --observe c0 --d 0 --oracle");
  EXPECT_EQ(refresh.code, 0) << refresh.out;
  EXPECT_NE(refresh.out.find("PASS"), std::string::npos);
  EXPECT_EQ(run("check " + fx("refresh2") + " --prop sim --observe - --d 0").code, 0);
  EXPECT_EQ(run("check " + fx("refresh2") + " --prop sim --observe '' --d 0").code, 0);
  EXPECT_EQ(run("check " + fx("encoder3") + " --prop sim --d 0").code, 1);
  EXPECT_EQ(run("check " + fx("refresh2") + " --prop pini -t 2").code, 0);
  EXPECT_EQ(run("check " + fx("identity2") + " --prop sni --d 1").code, 1);
  EXPECT_EQ(run("check " + fx("refresh2") + " --prop ni --d 1").code, 0);
}

TEST(CliCheck, UsageErrors) {
  EXPECT_EQ(run("check " + fx("refresh2") + " --prop sim").code, 2);
  EXPECT_EQ(run("check " + fx("refresh2") + " --prop pini").code, 2);
  EXPECT_EQ(run("check " + fx("refresh2") + " --prop bogus --d 0").code, 2);
  EXPECT_EQ(run("check " + fx("refresh2") + " --prop sim --d 0 -t 2").code, 2);
  EXPECT_EQ(run("check " + fx("refresh2") + " --prop sim --d 0 --observe nope").code, 2);
  EXPECT_EQ(run("check /nonexistent.gdl --prop sim --d 0").code, 2);
  EXPECT_EQ(run("").code, 2);

  std::string bad = temp_path("bad.gdl");
  write(bad, "gadget g\ninput a\nc = xor a\n");
  Result r = run("check " + bad + " --prop sim --d 0");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find(":3:"), std::string::npos) << r.out;
}

TEST(CliCheck, CapExceeded) {
  Result r = run("--bit-cap 3 check " + fx("dom2") + " --prop sim --observe p01 --d 1");
  EXPECT_EQ(r.code, 3) << r.out;
  EXPECT_NE(r.out.find("skipped"), std::string::npos);
  Result env = run("check " + fx("dom2") + " --prop ni --d 1");
  EXPECT_EQ(env.code, 0);
  std::string cmd = "SIMCAT_BIT_CAP=2 " + kBinary + " check " + fx("dom2") + " --prop ni --d 1 > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  EXPECT_EQ(WEXITSTATUS(status), 3);
  EXPECT_EQ(run("--bit-cap 3 matrix " + fx("dom2")).code, 3);
}

TEST(CliCheck, NoOracle) {
  Result r = run("check " + fx("dom2") + " --prop pini -t 2 --no-oracle");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("UNDECIDED"), std::string::npos);
}

TEST(CliCheck, JsonAndDeterminism) {
  std::string args = "check " + fx("dom2") + " --prop pini -t 2 --format json";
  Result a = run(args);
  Result b = run(args);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("\"property\": \"pini\""), std::string::npos);
  std::string report = temp_path("report.json");
  EXPECT_EQ(run("-o " + report + " " + args).code, 1);
  EXPECT_EQ(read(report), a.out);
}

TEST(CliRender, Diagrams) {
  Result enc = run("render " + fx("encoder3"));
  EXPECT_EQ(enc.code, 0);
  EXPECT_NE(enc.out.find("digraph"), std::string::npos);
  EXPECT_EQ(enc.out.find("swap"), std::string::npos);
  Result residue = run("render " + fx("refresh2") + " --observe c0 --after-rewrite");
  EXPECT_NE(residue.out.find("random"), std::string::npos);
  EXPECT_NE(residue.out.find("erase"), std::string::npos);
  EXPECT_EQ(residue.out.find("xor"), std::string::npos);
  Result empty = run("render " + fx("refresh2") + " --observe -");
  EXPECT_NE(empty.out.find("erase"), std::string::npos);
  EXPECT_EQ(empty.out.find("out0"), std::string::npos);
}

TEST(CliReplay, FreshCorruptedAndStale) {
  std::string trace = temp_path("trace.txt");
  EXPECT_EQ(run("check " + fx("refresh2") + " --prop sim --observe c0 --d 0 --trace " + trace).code, 0);
  Result ok = run("replay " + fx("refresh2") + " " + trace);
  EXPECT_EQ(ok.code, 0) << ok.out;

  std::string text = read(trace);
  std::string corrupted = temp_path("corrupted.txt");
  auto pos = text.find("cut@");
  ASSERT_NE(pos, std::string::npos);
  write(corrupted, text.substr(0, pos) + "cud" + text.substr(pos + 3));
  Result bad = run("replay " + fx("refresh2") + " " + corrupted);
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.out.find("step 3"), std::string::npos) << bad.out;

  std::string edited = temp_path("edited.gdl");
  write(edited,
        "gadget refresh2\ninput a0 domain 0\ninput a1 domain 1\nrandom r\n"
        "c0 = and a0 r\nc1 = xor a1 r\noutput c0 domain 0\noutput c1 domain 1\n");
  Result stale = run("replay " + edited + " " + trace);
  EXPECT_EQ(stale.code, 1);
  EXPECT_NE(stale.out.find("site mismatch"), std::string::npos) << stale.out;
}

TEST(CliDist, Table) {
  Result r = run("dist " + fx("refresh2") + " --observe c0");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "00 1 1 /2^1\n01 1 1 /2^1\n10 1 1 /2^1\n11 1 1 /2^1\n");
}
