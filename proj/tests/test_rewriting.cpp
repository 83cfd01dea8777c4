#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "reldiv/groups/heisenberg.hpp"
#include "reldiv/rewriting.hpp"
#include "reldiv/symbolic.hpp"

using namespace reldiv;

namespace {

Word random_word(std::mt19937_64& rng, std::size_t alphabet, std::size_t len) {
  std::uniform_int_distribution<int> letter(0, static_cast<int>(alphabet) - 1);
  Word w(len);
  for (auto& s : w) s = static_cast<Letter>(letter(rng));
  return w;
}

/// Re-spells a word of the rewriting alphabet in the group's alphabet.
Word relabel(const Alphabet& from, const Alphabet& to, const Word& w) {
  Word out;
  for (Letter s : w) out.push_back(*to.find(from.label(s)));
  return out;
}

RewritingSystem from_text(const std::string& text) {
  std::istringstream in(text);
  return parse_rules(in, "test.rules");
}

}  // namespace

TEST(Normalize, KnownValues) {
  auto free = free_reduction_system(Alphabet::with_inverses({"a", "b"}));
  EXPECT_EQ(free.alphabet().format(free.normalize(free.alphabet().parse("a a^-1 b"))), "b");
  auto z2 = z2_system();
  EXPECT_EQ(z2.alphabet().format(z2.normalize(z2.alphabet().parse("b a b a^-1"))), "b b");
}

TEST(Normalize, HeisenbergAgreesWithMatrixOracle) {
  auto sys = heisenberg_system();
  HeisenbergGroup h;
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 1000; ++trial) {
    Word w = random_word(rng, sys.alphabet().size(), 12);
    Word nf = sys.normalize(w);
    ASSERT_TRUE(sys.irreducible(nf));
    auto want = oracle::heisenberg_word(relabel(sys.alphabet(), h.alphabet(), w));
    auto got = oracle::heisenberg_word(relabel(sys.alphabet(), h.alphabet(), nf));
    ASSERT_EQ(got, want) << sys.alphabet().format(w);
    // Normal form shape c^p a^k b^l with exponents read off the matrix.
    auto t = HeisenbergGroup::decode(word_to_element(h, relabel(sys.alphabet(), h.alphabet(), nf)));
    ASSERT_EQ(BigInt(nf.size()), abs(t.p) + abs(t.k) + abs(t.l));
  }
}

TEST(Normalize, IdempotentAndCompatibleWithConcatenation) {
  std::mt19937_64 rng(13);
  for (const auto& sys : {z2_system(), heisenberg_system(), free_reduction_system(Alphabet::with_inverses({"a", "b", "c"}))}) {
    for (int trial = 0; trial < 300; ++trial) {
      Word u = random_word(rng, sys.alphabet().size(), rng() % 10);
      Word v = random_word(rng, sys.alphabet().size(), rng() % 10);
      Word nu = sys.normalize(u);
      ASSERT_EQ(sys.normalize(nu), nu);
      Word uv = u, nunv = nu;
      uv.insert(uv.end(), v.begin(), v.end());
      Word nv = sys.normalize(v);
      nunv.insert(nunv.end(), nv.begin(), nv.end());
      ASSERT_EQ(sys.normalize(uv), sys.normalize(nunv));
    }
  }
}

TEST(Normalize, StepBudgetReported) {
  auto sys = heisenberg_system();
  Word w = sys.alphabet().parse("b^20 a^20");
  EXPECT_THROW(sys.normalize(w, 10), BudgetError);
  EXPECT_NO_THROW(sys.normalize(w));
}

TEST(RewritingSystem, RejectsNonDecreasingRules) {
  auto alpha = Alphabet::with_inverses({"a", "b"});
  EXPECT_THROW(RewritingSystem(alpha, {{alpha.parse("a b"), alpha.parse("b a")}}), InputError);
  EXPECT_THROW(RewritingSystem(alpha, {{Word{}, alpha.parse("a")}}), InputError);
  EXPECT_NO_THROW(RewritingSystem(alpha, {{alpha.parse("b a"), alpha.parse("a b")}}));
}

TEST(RecursivePathOrder, OrientsHeisenbergRules) {
  auto alpha = Alphabet::from_labels({"c", "c^-1", "a", "a^-1", "b", "b^-1"});
  auto w = [&](const char* t) { return alpha.parse(t); };
  EXPECT_TRUE(order_greater(ReductionOrder::recursive_path, w("b a"), w("c a b")));
  EXPECT_FALSE(order_greater(ReductionOrder::shortlex, w("b a"), w("c a b")));
  EXPECT_TRUE(order_greater(ReductionOrder::recursive_path, w("a c"), w("c a")));
  EXPECT_FALSE(order_greater(ReductionOrder::recursive_path, w("c a"), w("a c")));
  EXPECT_TRUE(order_greater(ReductionOrder::recursive_path, w("a"), Word{}));
}

TEST(CriticalPairs, KnownValues) {
  auto free1 = free_reduction_system(Alphabet::with_inverses({"a"}));
  EXPECT_EQ(critical_pair_check(free1).status, ConfluenceStatus::confluent);

  auto z2 = critical_pair_check(z2_system());
  EXPECT_EQ(z2.status, ConfluenceStatus::confluent);
  EXPECT_TRUE(z2.unresolved.empty());
  EXPECT_GT(z2.pairs_checked, 0u);

  auto heis = critical_pair_check(heisenberg_system());
  EXPECT_EQ(heis.status, ConfluenceStatus::confluent);
  EXPECT_TRUE(heis.unresolved.empty());

  auto bad = from_text("alphabet: a b\na b -> a\na b -> b\n");
  auto rep = critical_pair_check(bad);
  EXPECT_EQ(rep.status, ConfluenceStatus::not_confluent);
  ASSERT_FALSE(rep.unresolved.empty());
  EXPECT_EQ(bad.alphabet().format(rep.unresolved.front().overlap), "a b");
}

TEST(CriticalPairs, DetectsMissingRule) {
  // Z^2 without b^-1 a -> a b^-1 is not confluent.
  auto sys = from_text(
      "alphabet: a a^-1 b b^-1\n"
      "a a^-1 -> e\na^-1 a -> e\nb b^-1 -> e\nb^-1 b -> e\n"
      "b a -> a b\nb a^-1 -> a^-1 b\nb^-1 a^-1 -> a^-1 b^-1\n");
  EXPECT_EQ(critical_pair_check(sys).status, ConfluenceStatus::not_confluent);
}

TEST(CriticalPairs, BudgetExhaustion) {
  EXPECT_EQ(critical_pair_check(heisenberg_system(), 5).status, ConfluenceStatus::unknown_budget_exhausted);
}

TEST(CriticalPairs, DeterministicOrder) {
  auto a = critical_pair_check(from_text("alphabet: a b\na b -> a\na b -> b\nb a -> b\n"));
  auto b = critical_pair_check(from_text("alphabet: a b\na b -> a\na b -> b\nb a -> b\n"));
  ASSERT_EQ(a.unresolved.size(), b.unresolved.size());
  for (std::size_t i = 0; i < a.unresolved.size(); ++i) {
    EXPECT_EQ(a.unresolved[i].overlap, b.unresolved[i].overlap);
    EXPECT_EQ(a.unresolved[i].rule_a, b.unresolved[i].rule_a);
  }
}

TEST(RulesFile, ParsesHeadersCommentsAndIdentity) {
  auto sys = from_text(
      "# Z^2\n"
      "alphabet: a a^-1 b b^-1   # pairs\n"
      "order: shortlex\n"
      "\n"
      "a a^-1 -> e\n"
      "a^-1 a -> 1\n");
  EXPECT_EQ(sys.rules().size(), 2u);
  EXPECT_TRUE(sys.rules()[0].rhs.empty());
  EXPECT_EQ(sys.order(), ReductionOrder::shortlex);
  auto rpo = from_text("alphabet: c c^-1 a a^-1 b b^-1\norder: recursive-path\nb a -> c a b\n");
  EXPECT_EQ(rpo.order(), ReductionOrder::recursive_path);
}

TEST(RulesFile, ErrorsCarryLineNumbers) {
  auto expect_line = [](const std::string& text, const std::string& where) {
    try {
      from_text(text);
      FAIL() << text;
    } catch (const InputError& e) {
      EXPECT_NE(std::string(e.what()).find(where), std::string::npos) << e.what();
    }
  };
  expect_line("alphabet: a b\n\na b\n", "test.rules:3");
  expect_line("a -> e\n", "test.rules:1");
  expect_line("alphabet: a b\nz -> e\n", "test.rules:2");
  expect_line("alphabet: a b\norder: lexicographic\n", "test.rules:2");
  expect_line("# nothing\n", "missing alphabet");
}

TEST(RulesFile, ShippedFilesMatchBuiltins) {
  const std::string dir = std::string(RELDIV_SOURCE_DIR) + "/configs/";
  auto z2 = load_rules(dir + "z2.rules");
  auto heis = load_rules(dir + "heisenberg.rules");
  auto free2 = load_rules(dir + "free2.rules");
  EXPECT_EQ(critical_pair_check(z2).status, ConfluenceStatus::confluent);
  EXPECT_EQ(critical_pair_check(heis).status, ConfluenceStatus::confluent);
  EXPECT_EQ(critical_pair_check(free2).status, ConfluenceStatus::confluent);
  EXPECT_EQ(heis.order(), ReductionOrder::recursive_path);
  std::mt19937_64 rng(21);
  auto builtin = heisenberg_system();
  for (int trial = 0; trial < 200; ++trial) {
    Word w = random_word(rng, 6, 10);
    Word lw = relabel(builtin.alphabet(), heis.alphabet(), w);
    EXPECT_EQ(heis.alphabet().format(heis.normalize(lw)), builtin.alphabet().format(builtin.normalize(w)));
  }
}

// ---------------------------------------------------------------------------
// Symbolic rewriting

TEST(SymbolicWord, SyllablesMerge) {
  SymbolicWord w;
  w.append('a', 3);
  w.append('a', -3);
  EXPECT_TRUE(w.empty());
  w.append('b', 2);
  w.append('a', 1);
  w.append('a', 1);
  EXPECT_EQ(w.to_string(), "b^2 a^2");
  EXPECT_EQ(w.length(), 4);
  EXPECT_THROW(w.append('d', 1), InputError);
}

TEST(SymbolicRewriter, DefiningLawsCancel) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long long> kd(-1'000'000, 1'000'000);
  for (int trial = 0; trial < 100; ++trial) {
    BigInt k = kd(rng);
    // b a^k b^-1 a^-2k and c b^k c^-1 b^-2k rewrite to the empty word.
    SymbolicWord w{{'b', 1}, {'a', k}, {'b', -1}, {'a', -2 * k}};
    EXPECT_TRUE(SymbolicRewriter::rewrite(w).word.empty()) << k;
    SymbolicWord v{{'c', 1}, {'b', k}, {'c', -1}, {'b', -2 * k}};
    EXPECT_TRUE(SymbolicRewriter::rewrite(v).word.empty()) << k;
    // and the inverse law: b^-1 a^(2k) b = a^k.
    SymbolicWord u{{'b', -1}, {'a', 2 * k}, {'b', 1}};
    EXPECT_EQ(SymbolicRewriter::rewrite(u).word, (SymbolicWord{{'a', k}}));
  }
}

TEST(SymbolicRewriter, IrreducibleWordsUntouched) {
  SymbolicWord w{{'a', 1}, {'b', 1}, {'a', 1}};
  auto r = SymbolicRewriter::rewrite(w);
  EXPECT_EQ(r.word, w);
  EXPECT_EQ(r.law_applications, 0);
  // b^-1 a b cannot shrink: a has odd exponent.
  SymbolicWord odd{{'b', -1}, {'a', 3}, {'b', 1}};
  EXPECT_EQ(SymbolicRewriter::rewrite(odd).word, odd);
}

TEST(GromovWitness, VerifiedForSmallN) {
  for (int n = 0; n <= 6; ++n) {
    auto g = gromov_witness(n);
    EXPECT_TRUE(g.verified) << n;
    EXPECT_EQ(g.target_exponent, BigInt(1) << (1u << n));
    EXPECT_EQ(g.rewritten, g.target);
    // c^n b c^-n a c^n b^-1 c^-n spells 4n + 3 letters.
    EXPECT_EQ(g.witness_length, static_cast<std::uint64_t>(4 * n + 3));
  }
  EXPECT_EQ(gromov_witness(1).witness.to_string(), "c b c^-1 a c b^-1 c^-1");
  EXPECT_EQ(gromov_witness(0).witness.to_string(), "b a b^-1");
  EXPECT_EQ(gromov_witness(3).target_exponent, 256);
}

TEST(GromovWitness, CapEnforced) {
  EXPECT_THROW(gromov_witness(7), InputError);
  EXPECT_THROW(gromov_witness(-1), InputError);
  EXPECT_TRUE(gromov_witness(8, 8).verified);
}
