#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kCli = DOMKIT_CLI;
const fs::path kFixtures = DOMKIT_FIXTURES;

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  static int counter = 0;
  auto out = fs::temp_directory_path() / ("domkit-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  auto cmd = "\"" + kCli + "\" " + args + " > \"" + out.string() + "\" 2>&1";
  int status = std::system(cmd.c_str());
  std::ifstream f(out);
  std::stringstream s;
  s << f.rdbuf();
  fs::remove(out);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, s.str()};
}

std::string fixture(const std::string& name) { return "\"" + (kFixtures / name).string() + "\""; }

}  // namespace

TEST(Check, ValidChain) { EXPECT_EQ(run("check " + fixture("chain2.poset")).code, 0); }

TEST(Check, MissingReflexivity) {
  auto r = run("check " + fixture("missing-reflexivity.json"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("NotReflexive"), std::string::npos) << r.out;
}

TEST(Check, MissingPath) { EXPECT_EQ(run("check " + fixture("no-such-file")).code, 1); }

TEST(Check, InputErrorDominates) {
  EXPECT_EQ(run("check " + fixture("missing-reflexivity.json") + " " + fixture("no-such-file")).code, 1);
}

TEST(Check, AllFixtureKinds) {
  auto r = run("check " + fixture("chain.diagram") + " " + fixture("unit-over-sierpinski.presheaf") + " " +
               fixture("lift-from-empty.eq") + " " + fixture("proper-sieve.diagram"));
  EXPECT_EQ(r.code, 0) << r.out;
}

TEST(Bilimit, SingleObject) {
  auto r = run("bilimit " + fixture("single-object.diagram"));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("apex size 3"), std::string::npos) << r.out;
}

TEST(Bilimit, PartialEmptyStart) {
  auto r = run("bilimit " + fixture("partial-empty-start"));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("apex size 1"), std::string::npos) << r.out;
}

TEST(Bilimit, BrokenFunctoriality) {
  auto r = run("bilimit " + fixture("broken-functoriality.diagram"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("functoriality"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("repro"), std::string::npos) << r.out;
}

TEST(Bilimit, ModeMismatchIsAnInputError) {
  EXPECT_EQ(run("bilimit --mode partial " + fixture("chain.diagram")).code, 1);
}

TEST(Bilimit, DotOutput) {
  auto r = run("bilimit --format dot " + fixture("chain.diagram"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("digraph", 0), 0u) << r.out;
}

TEST(Bilimit, ProperSieveWitness) {
  auto r = run("bilimit " + fixture("proper-sieve.diagram"));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("proper-sieve support witness"), std::string::npos) << r.out;
}

TEST(Verify, Total) { EXPECT_EQ(run("verify --mode total --seed 42 --count 100").code, 0); }
TEST(Verify, CountZeroIsVacuous) { EXPECT_EQ(run("verify --count 0").code, 0); }
TEST(Verify, DegenerateObjects) {
  EXPECT_EQ(run("verify --mode total --seed 7 --count 30 --max-object-size 1").code, 0);
  EXPECT_EQ(run("verify --mode partial --seed 7 --count 30 --max-object-size 1").code, 0);
}

TEST(Solve, LiftChain) {
  auto r = run("solve --format json " + fixture("lift-from-empty.eq"));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("\"level_sizes\": [\n    0,\n    1,\n    2,\n    3,\n    4\n  ]"), std::string::npos) << r.out;
}

TEST(Solve, ArrowChain) {
  auto r = run("solve --format json " + fixture("arrow-sierpinski.eq"));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("\"level_sizes\": [\n    2,\n    3,\n    10\n  ]"), std::string::npos) << r.out;
}

TEST(Solve, NoStarter) {
  auto r = run("solve " + fixture("arrow-empty.eq"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("NoStarterEp"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("hint"), std::string::npos) << r.out;
}

TEST(Solve, BudgetExceeded) {
  auto r = run("solve --depth 3 " + fixture("arrow-sierpinski.eq"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("BudgetExceeded"), std::string::npos) << r.out;
}

TEST(OmegaBar, Passes) { EXPECT_EQ(run("omegabar --depth 6").code, 0); }
TEST(OmegaBar, RejectsTotalMode) { EXPECT_EQ(run("omegabar --mode total").code, 1); }

TEST(Export, PosetRoundTrip) {
  auto tmp = fs::temp_directory_path() / ("domkit-export-" + std::to_string(::getpid()) + ".json");
  EXPECT_EQ(run("export --format json --out \"" + tmp.string() + "\" " + fixture("chain3.poset")).code, 0);
  EXPECT_EQ(run("check \"" + tmp.string() + "\"").code, 0);
  fs::remove(tmp);
}

TEST(Usage, UnknownCommand) { EXPECT_EQ(run("frobnicate").code, 1); }
