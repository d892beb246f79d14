#include "support.hpp"

#include "gpc/cli.hpp"

#include <gtest/gtest.h>

#include <regex>
#include <sstream>

using namespace gpc;

namespace {

#ifndef TEST_DATA_DIR
#error "TEST_DATA_DIR must be defined"
#endif

std::string fx(const std::string& name) { return testkit::fixture(name); }
std::string data(const std::string& name) { return std::string(TEST_DATA_DIR) + "/" + name; }

struct CliResult {
  int code;
  std::string out, err;
};

CliResult invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

// ---------------------------------------------------------------- parsing

TEST(SpecFile, BundledFilesParse) {
  EXPECT_TRUE(std::holds_alternative<StackSpec>(parse_spec(fx("anbn.stack"))));
  EXPECT_TRUE(std::holds_alternative<StackSpec>(parse_spec(fx("palindrome.stack-nd"))));
  EXPECT_TRUE(std::holds_alternative<WeightedGrammar>(parse_spec(fx("dyck.grammar"))));
  EXPECT_TRUE(std::holds_alternative<Nfa>(parse_spec(fx("endsin-a.nfa"))));
  EXPECT_TRUE(std::holds_alternative<Rps>(parse_spec(fx("paper-example.rps"))));
  EXPECT_TRUE(std::holds_alternative<EqsysSpec>(parse_spec(fx("solve-demo.eqsys"))));
}

TEST(SpecFile, UnknownHeaderIsNamed) {
  try {
    parse_spec(data("unknown-header.spec"));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("machine dfa"), std::string::npos);
    EXPECT_EQ(e.line(), 1);
  }
}

TEST(SpecFile, UndeclaredNonterminalCarriesLine) {
  try {
    parse_spec(data("undeclared-nonterminal.grammar"));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 7);
    EXPECT_NE(std::string(e.what()).find("T"), std::string::npos);
  }
}

TEST(SpecFile, MalformedLines) {
  EXPECT_THROW(parse_spec_text("machine nfa\nstates q\ninput a\ntrans q a q\n"), ParseError);
  EXPECT_THROW(parse_spec_text("grammar\nnonterminals S\n"), ParseError);
  EXPECT_THROW(parse_spec_text("eqsys\nsemiring nat\ninput a\nvar x = out 1\n"), ParseError);
  EXPECT_THROW(parse_spec_text("rps\ngivens +\n"), ParseError);
  EXPECT_THROW(parse_spec_text("# nothing\n"), ParseError);
}

TEST(SpecFile, CommentsAndBlankLines) {
  auto a = parse_spec_text("# c\n\nmachine nfa   # trailing\nstates q\ninput a\n\naccept q # yes\nstart q\n");
  const Nfa& n = std::get<Nfa>(a);
  EXPECT_TRUE(n.accepting[0]);
}

TEST(SpecFile, RoundTripOnBundledFiles) {
  for (const char* f : {"anbn.stack", "dyck.stack", "palindrome.stack-nd", "dyck.grammar", "count.grammar",
                        "endsin-a.nfa", "endsin-a-det.nfa", "paper-example.rps", "solve-demo.eqsys",
                        "solve-import.eqsys"}) {
    Artifact a = parse_spec(fx(f));
    std::string text = render_spec(a);
    Artifact b = parse_spec_text(text);
    EXPECT_TRUE(same_artifact(a, b)) << f << "\n" << text;
    EXPECT_EQ(render_spec(b), text) << f;
  }
}

// ---------------------------------------------------------------- commands

TEST(Cli, Member) {
  EXPECT_EQ(invoke({"member", fx("anbn.stack"), "aabb"}).out, "accept\n");
  CliResult r = invoke({"member", fx("anbn.stack"), "abab"});
  EXPECT_EQ(r.out, "reject\n");
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(invoke({"member", fx("endsin-a.nfa"), "ba"}).code, 0);
  EXPECT_EQ(invoke({"member", fx("palindrome.stack-nd"), "abba"}).code, 0);
  EXPECT_EQ(invoke({"member", fx("dyck.stack"), ")", "--initial-stack", "AZ"}).code, 0);
}

TEST(Cli, MemberEmptyWordOnAcceptingStart) {
  // q1 accepting: flip the start through a copy of the file
  Nfa n = std::get<Nfa>(parse_spec(fx("endsin-a.nfa")));
  n.start = 1;
  std::string path = ::testing::TempDir() + "/start-accepting.nfa";
  std::ofstream(path) << render_spec(n);
  EXPECT_EQ(invoke({"member", path, ""}).out, "accept\n");
}

TEST(Cli, MemberResourceBound) {
  CliResult r = invoke({"member", data("branching.stack-nd"), "aaaaaaaaaaaa", "--max-configs", "5"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("resource bound"), std::string::npos);
}

TEST(Cli, Coeff) {
  EXPECT_EQ(invoke({"coeff", fx("dyck.grammar"), "()"}).out, "true\n");
  EXPECT_EQ(invoke({"coeff", fx("dyck.grammar"), ")("}).out, "false\n");
  EXPECT_EQ(invoke({"coeff", fx("count.grammar"), "a"}).out, "2\n");
  EXPECT_EQ(invoke({"coeff", fx("count.grammar"), "a", "--mode", "sharp"}).out, "2\n");
  EXPECT_EQ(invoke({"coeff", fx("dyck.grammar"), "(()())", "--mode", "sharp"}).out, "true\n");
}

TEST(Cli, CoeffAlphabetErrorExits2) {
  CliResult r = invoke({"coeff", fx("dyck.grammar"), "(x)"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("'x'"), std::string::npos);
}

TEST(Cli, EquivNfa) {
  EXPECT_EQ(invoke({"equiv", fx("endsin-a.nfa"), "q0", fx("endsin-a.nfa"), "q0", "--exact"}).out, "equivalent (exact)\n");
  EXPECT_EQ(invoke({"equiv", fx("endsin-a.nfa"), "q0", data("endsin-a-guess.nfa"), "x", "--exact"}).out,
            "equivalent (exact)\n");
  EXPECT_EQ(invoke({"equiv", fx("endsin-a.nfa"), "q0", fx("endsin-a-det.nfa"), "{s}", "--exact"}).code, 0);
  CliResult r = invoke({"equiv", fx("endsin-a.nfa"), "q0", fx("endsin-a.nfa"), "q1", "--exact"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out, "distinguished by eps\n");
}

TEST(Cli, EquivGrammarDepth) {
  CliResult r = invoke({"equiv", fx("dyck.grammar"), "S", data("eps-only.grammar"), "E", "--depth", "4"});
  EXPECT_EQ(r.out, "distinguished by ()\n");
  EXPECT_EQ(r.code, 1);
  CliResult s = invoke({"equiv", fx("dyck.grammar"), "S", data("eps-only.grammar"), "E", "--depth", "4", "--mode", "sharp"});
  EXPECT_EQ(s.out, "distinguished by ()\n");
  EXPECT_EQ(invoke({"equiv", fx("dyck.grammar"), "S", fx("dyck.grammar"), "1 S", "--depth", "3"}).out,
            "equivalent up to depth 3\n");
  EXPECT_EQ(invoke({"equiv", fx("dyck.grammar"), "S", fx("dyck.grammar"), "S R S R S + S", "--depth", "3"}).out,
            "distinguished by ))\n");
}

TEST(Cli, EquivStack) {
  CliResult r = invoke({"equiv", fx("dyck.stack"), "p", fx("dyck.stack"), "p", "--depth", "5"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "equivalent up to depth 5\n");
}

TEST(Cli, EquivKindMismatch) {
  EXPECT_EQ(invoke({"equiv", fx("endsin-a.nfa"), "q0", fx("dyck.grammar"), "S"}).code, 2);
  EXPECT_EQ(invoke({"equiv", fx("dyck.grammar"), "S", fx("dyck.grammar"), "S", "--exact"}).code, 2);
  EXPECT_EQ(invoke({"equiv", fx("dyck.grammar"), "S", fx("count.grammar"), "A"}).code, 2);
}

TEST(Cli, Enumerate) {
  CliResult r = invoke({"enumerate", fx("endsin-a.nfa")});
  EXPECT_EQ(r.out, "{q0,q1}\n{q0}\n2 states\ncomplete\n");
  CliResult d = invoke({"enumerate", fx("dyck.grammar"), "--max-states", "50"});
  EXPECT_EQ(d.code, 0);
  EXPECT_TRUE(d.out.ends_with("50 states\ntruncated\n"));
  CliResult dead = invoke({"enumerate", data("dead.nfa")});
  EXPECT_EQ(dead.out, "{d}\n{}\n2 states\ncomplete\n");
  CliResult empty = invoke({"enumerate", data("dead.nfa"), "{}"});
  EXPECT_EQ(empty.out, "{}\n1 states\ncomplete\n");
}

TEST(Cli, EnumerateSharpAndStack) {
  CliResult s = invoke({"enumerate", fx("count.grammar"), "--mode", "sharp", "--max-states", "5"});
  EXPECT_EQ(s.code, 0);
  EXPECT_TRUE(s.out.ends_with("5 states\ntruncated\n")) << s.out;
  CliResult k = invoke({"enumerate", fx("anbn.stack"), "--max-states", "30"});
  EXPECT_TRUE(k.out.ends_with("truncated\n"));
}

TEST(Cli, Unfold) {
  CliResult r = invoke({"unfold", fx("paper-example.rps"), "φ(z)", "--depth", "2"});
  EXPECT_EQ(r.out, "+\n  z\n  +\n    ×\n      ...\n      ...\n    +\n      ...\n      ...\n");
  EXPECT_EQ(invoke({"unfold", fx("paper-example.rps"), "φ(z)", "--depth", "0"}).out, "+\n  ...\n  ...\n");
  EXPECT_EQ(invoke({"unfold", fx("paper-example.rps"), "z"}).out, "z\n");
  EXPECT_EQ(invoke({"unfold", data("unguarded.rps"), "f(z)"}).code, 2);
  EXPECT_EQ(invoke({"unfold", fx("paper-example.rps"), "φ(z, z)"}).code, 2);
}

TEST(Cli, Solve) {
  CliResult r = invoke({"solve", fx("solve-demo.eqsys"), "--depth", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("x ab 0\n"), std::string::npos);
  EXPECT_NE(r.out.find("x aa 1\n"), std::string::npos);
  EXPECT_TRUE(r.out.ends_with("eq:sol satisfied at 2 states\n"));
  CliResult i = invoke({"solve", fx("solve-import.eqsys"), "--imports", fx("count.grammar"), "--depth", "3"});
  EXPECT_EQ(i.code, 0);
  EXPECT_NE(i.out.find("y a 2\n"), std::string::npos);
  EXPECT_NE(i.out.find("x aa 2\n"), std::string::npos);
  EXPECT_TRUE(std::regex_search(i.out, std::regex("eq:sol satisfied at [0-9]+ states\n$")));
  CliResult s = invoke({"solve", fx("solve-import.eqsys"), "--imports", fx("count.grammar"), "--depth", "3", "--mode", "sharp"});
  EXPECT_EQ(s.code, 0);
  EXPECT_EQ(s.out.substr(0, s.out.rfind("eq:sol")), i.out.substr(0, i.out.rfind("eq:sol")));
  CliResult n = invoke({"solve", data("import-nfa.eqsys"), "--imports", fx("endsin-a.nfa"), "--depth", "2"});
  EXPECT_EQ(n.code, 0);
  EXPECT_NE(n.out.find("x a true\n"), std::string::npos);
  EXPECT_NE(n.out.find("y eps true\n"), std::string::npos);
}

TEST(Cli, SolveDanglingImport) {
  CliResult r = invoke({"solve", fx("solve-import.eqsys")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("dangling import"), std::string::npos);
}

TEST(Cli, Validate) {
  EXPECT_EQ(invoke({"validate", fx("anbn.stack")}).out, "ok\n");
  CliResult r = invoke({"validate", data("undeclared-symbol.stack")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("line 6: undeclared stack symbol 'B'"), std::string::npos);
  CliResult u = invoke({"validate", data("unguarded.rps")});
  EXPECT_EQ(u.code, 1);
  EXPECT_NE(u.out.find("unguarded"), std::string::npos);
  EXPECT_EQ(invoke({"validate", data("unknown-header.spec")}).code, 2);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
  EXPECT_EQ(invoke({"member"}).code, 2);
  EXPECT_EQ(invoke({"coeff", fx("dyck.grammar"), "()", "--mode", "both"}).code, 2);
  EXPECT_EQ(invoke({"member", data("missing.nfa"), "a"}).code, 2);
  EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST(Cli, SeparatorForLongSymbols) {
  Nfa n({"q", "f"}, make_alphabet({"push", "pop"}));
  n.add_transition(0, 0, 1);
  n.accepting[1] = true;
  n.start = 0;
  std::string path = ::testing::TempDir() + "/long-symbols.nfa";
  std::ofstream(path) << render_spec(n);
  EXPECT_EQ(invoke({"member", path, "push", "--sep", ","}).code, 0);
  EXPECT_EQ(invoke({"member", path, "push,pop", "--sep", ","}).code, 1);
  EXPECT_EQ(invoke({"member", path, "push"}).code, 2);  // per-character split
  CliResult r = invoke({"equiv", path, "q", path, "f", "--exact"});
  EXPECT_EQ(r.out, "distinguished by eps\n");
  CliResult w = invoke({"equiv", path, "q", path, "{}", "--exact"});
  EXPECT_EQ(w.out, "distinguished by push\n");
}

TEST(Cli, OutputIsDeterministic) {
  std::vector<std::vector<std::string>> cmds{{"enumerate", fx("dyck.grammar"), "--max-states", "20"},
                                             {"enumerate", fx("palindrome.stack-nd"), "--max-states", "10"},
                                             {"solve", fx("solve-demo.eqsys"), "--depth", "4"},
                                             {"unfold", fx("paper-example.rps"), "φ(z)", "--depth", "5"}};
  for (const auto& c : cmds) EXPECT_EQ(invoke(c).out, invoke(c).out);
}
