#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "reldiv/ball.hpp"
#include "reldiv/config.hpp"
#include "reldiv/group.hpp"
#include "reldiv/groups/free_abelian.hpp"
#include "reldiv/groups/free_group.hpp"
#include "reldiv/groups/heisenberg.hpp"
#include "reldiv/groups/racg.hpp"
#include "reldiv/subgroup.hpp"

using namespace reldiv;

namespace {

Word random_word(std::mt19937_64& rng, std::size_t alphabet, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<int> letter(0, static_cast<int>(alphabet) - 1);
  Word w(len(rng));
  for (auto& s : w) s = static_cast<Letter>(letter(rng));
  return w;
}

}  // namespace

TEST(WordToElement, KnownValues) {
  FreeAbelianGroup z2(2);
  EXPECT_EQ(z2.decode(word_to_element(z2, "a a b a^-1")), (FreeAbelianGroup::Vector{1, 1}));

  HeisenbergGroup h;
  auto t = HeisenbergGroup::decode(word_to_element(h, "b a b^-1 a^-1"));
  EXPECT_EQ(t, (HeisenbergTriple{0, 0, 1}));

  RightAngledCoxeterGroup pentagon(CommutationGraph::cycle(5));
  EXPECT_EQ(word_to_element(pentagon, "s1 s2 s1 s2"), pentagon.identity());
}

TEST(WordToElement, UnknownLabelRejected) {
  HeisenbergGroup h;
  EXPECT_THROW(word_to_element(h, "a d"), InputError);
  EXPECT_THROW(word_to_element(h, Word{17}), InputError);
}

TEST(HeisenbergMultiply, KnownValues) {
  using G = HeisenbergGenerator;
  EXPECT_EQ(heisenberg_multiply({2, 3, 0}, G::a), (HeisenbergTriple{3, 3, 3}));
  EXPECT_EQ(heisenberg_multiply({0, 0, 0}, G::c), (HeisenbergTriple{0, 0, 1}));
  EXPECT_EQ(heisenberg_multiply({1, 1, 1}, G::b), (HeisenbergTriple{1, 2, 1}));
}

TEST(HeisenbergMultiply, BigExponentsDoNotOverflow) {
  HeisenbergTriple x{0, BigInt(1) << 70, 0};
  auto y = heisenberg_multiply(x, HeisenbergGenerator::a);
  EXPECT_EQ(y.p, BigInt(1) << 70);
}

TEST(HeisenbergMultiply, MatrixOracleOnRandomWords) {
  std::mt19937_64 rng(20240611);
  for (bool with_c : {true, false}) {
    HeisenbergGroup h(with_c);
    for (int trial = 0; trial < 1000; ++trial) {
      Word w = random_word(rng, h.alphabet().size(), 20);
      auto t = HeisenbergGroup::decode(word_to_element(h, w));
      auto m = oracle::heisenberg_word(w);
      ASSERT_EQ(t.k, m.y);
      ASSERT_EQ(t.l, m.x);
      ASSERT_EQ(t.p, m.z);
    }
  }
}

TEST(GroupKernel, AssociativityProbe) {
  std::mt19937_64 rng(7);
  HeisenbergGroup h;
  RightAngledCoxeterGroup pentagon(CommutationGraph::cycle(5));
  FreeGroup f2(2);
  for (int trial = 0; trial < 300; ++trial) {
    Word u = random_word(rng, 6, 12), v = random_word(rng, 6, 12);
    Word uv = u;
    uv.insert(uv.end(), v.begin(), v.end());
    EXPECT_EQ(word_to_element(h, uv), right_multiply(h, word_to_element(h, u), v));
    Word pu = random_word(rng, 5, 12), pv = random_word(rng, 5, 12);
    Word puv = pu;
    puv.insert(puv.end(), pv.begin(), pv.end());
    EXPECT_EQ(word_to_element(pentagon, puv), right_multiply(pentagon, word_to_element(pentagon, pu), pv));
    Word fu = random_word(rng, 4, 12), fv = random_word(rng, 4, 12);
    Word fuv = fu;
    fuv.insert(fuv.end(), fv.begin(), fv.end());
    EXPECT_EQ(word_to_element(f2, fuv), right_multiply(f2, word_to_element(f2, fu), fv));
  }
}

TEST(GroupKernel, InversesCancel) {
  std::mt19937_64 rng(11);
  std::vector<AnyGroup> groups = {AnyGroup(FreeAbelianGroup(3)), AnyGroup(HeisenbergGroup(true)), AnyGroup(FreeGroup(2)),
                                  AnyGroup(RightAngledCoxeterGroup(CommutationGraph::cycle(5)))};
  for (const auto& g : groups) {
    for (int trial = 0; trial < 100; ++trial) {
      Word w = random_word(rng, g.alphabet().size(), 15);
      Word ww = w;
      Word inv = g.alphabet().invert(w);
      ww.insert(ww.end(), inv.begin(), inv.end());
      ASSERT_EQ(word_to_element(g, ww), g.identity());
    }
  }
}

TEST(GroupKernel, CanonicityUnderRelatorInsertion) {
  // w2 is w1 with a relator or commutation shuffled in at a random spot.
  std::mt19937_64 rng(3);
  HeisenbergGroup h;
  const Alphabet& al = h.alphabet();
  const std::vector<Word> relators = {al.parse("b a b^-1 a^-1 c^-1"), al.parse("c a c^-1 a^-1"), al.parse("c b c^-1 b^-1"),
                                      al.parse("a a^-1"), al.parse("c^-1 c")};
  RightAngledCoxeterGroup pentagon(CommutationGraph::cycle(5));
  const Alphabet& pl = pentagon.alphabet();
  const std::vector<Word> prel = {pl.parse("s1 s2 s1 s2"), pl.parse("s3 s3"), pl.parse("s4 s5 s4 s5"), pl.parse("s5 s1 s5 s1")};
  for (int trial = 0; trial < 1000; ++trial) {
    Word w = random_word(rng, al.size(), 16);
    Word w2 = w;
    std::uniform_int_distribution<std::size_t> pos(0, w.size());
    const auto& rel = relators[rng() % relators.size()];
    w2.insert(w2.begin() + static_cast<std::ptrdiff_t>(pos(rng)), rel.begin(), rel.end());
    ASSERT_EQ(word_to_element(h, w), word_to_element(h, w2));

    Word p = random_word(rng, pl.size(), 16);
    Word p2 = p;
    std::uniform_int_distribution<std::size_t> ppos(0, p.size());
    const auto& pr = prel[rng() % prel.size()];
    p2.insert(p2.begin() + static_cast<std::ptrdiff_t>(ppos(rng)), pr.begin(), pr.end());
    ASSERT_EQ(word_to_element(pentagon, p), word_to_element(pentagon, p2));
  }
}

TEST(RacgNormalForm, KnownValues) {
  auto g = CommutationGraph::cycle(5);
  RightAngledCoxeterGroup pentagon(g);
  const auto& al = pentagon.alphabet();
  EXPECT_TRUE(racg_normal_form(g, al.parse("s1 s1")).empty());
  EXPECT_EQ(racg_normal_form(g, al.parse("s2 s1 s2")), al.parse("s1"));
  EXPECT_EQ(racg_normal_form(g, al.parse("s1 s3 s1 s3 s1 s3")), al.parse("s1 s3 s1 s3 s1 s3"));
}

TEST(RacgNormalForm, MatchesExhaustiveSearchOnAllShortWords) {
  auto g = CommutationGraph::cycle(5);
  // Every word of length <= 6 over s1..s5.
  std::vector<Word> words{{}};
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (words[i].size() == 6) continue;
    for (Letter s = 0; s < 5; ++s) {
      Word w = words[i];
      w.push_back(s);
      words.push_back(std::move(w));
    }
  }
  for (const auto& w : words) {
    auto fast = racg_normal_form(g, w);
    ASSERT_EQ(fast, racg_normal_form_exhaustive(g, w));
    ASSERT_EQ(racg_normal_form(g, fast), fast);
  }
}

TEST(RacgNormalForm, IdempotentOnRandomLongWords) {
  auto g = CommutationGraph::cycle(5);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    Word w = random_word(rng, 5, 40);
    auto nf = racg_normal_form(g, w);
    ASSERT_EQ(racg_normal_form(g, nf), nf);
  }
}

TEST(SubgroupDistanceOracle, KnownValues) {
  HeisenbergGroup h;
  auto center = heisenberg_center_subgroup(h);
  EXPECT_EQ(subgroup_distance_oracle(center, HeisenbergGroup::encode({2, 1, 5})), 3u);
  EXPECT_EQ(subgroup_distance_oracle(center, HeisenbergGroup::encode({0, 0, 9})), 0u);
  FreeAbelianGroup z2(2);
  auto axis = zd_coordinate_subgroup(z2, {0});
  EXPECT_EQ(subgroup_distance_oracle(axis, z2.encode({3, 4})), 4u);
  auto f2 = FreeGroup(2);
  EXPECT_FALSE(subgroup_distance_oracle(free_subgroup(f2, {f2.alphabet().parse("a")}), f2.identity()).has_value());
}

TEST(SubgroupSpec, InvariantsOnShippedSubgroups) {
  std::mt19937_64 rng(9);
  HeisenbergGroup h;
  auto center = heisenberg_center_subgroup(h);
  FreeAbelianGroup z2(2);
  auto axis = zd_coordinate_subgroup(z2, {0});
  auto lattice = zd_lattice_subgroup(z2, {z2.alphabet().parse("a^2"), z2.alphabet().parse("b^2")});
  EXPECT_TRUE(center.member(h.identity()));
  EXPECT_TRUE(axis.member(z2.identity()));
  EXPECT_TRUE(lattice.member(z2.identity()));
  for (int trial = 0; trial < 200; ++trial) {
    // Products of generating words stay inside H.
    Word w;
    for (int i = 0; i < 5; ++i) {
      const auto& g = center.generating_words[rng() % center.generating_words.size()];
      Word piece = rng() % 2 ? g : h.alphabet().invert(g);
      w.insert(w.end(), piece.begin(), piece.end());
    }
    EXPECT_TRUE(center.member(word_to_element(h, w)));
    // exact_distance is zero exactly on members.
    Word x = random_word(rng, 6, 10);
    auto e = word_to_element(h, x);
    EXPECT_EQ(center.exact_distance(e) == 0, center.member(e));
    Word y = random_word(rng, 4, 10);
    auto ze = word_to_element(z2, y);
    EXPECT_EQ(axis.exact_distance(ze) == 0, axis.member(ze));
    if (lattice.exact_distance) {
      EXPECT_EQ(lattice.exact_distance(ze) == 0, lattice.member(ze));
    }
  }
}

TEST(GroupConfig, ParsesFamiliesAndRejectsUnknownKeys) {
  EXPECT_EQ(parse_group_config(Json::parse(R"({"family":"zd","d":3})")).group.alphabet().size(), 6u);
  EXPECT_EQ(parse_group_config(Json::parse(R"({"family":"heisenberg","generators":"ab"})")).group.alphabet().size(), 4u);
  EXPECT_EQ(parse_group_config(Json::parse(R"({"family":"racg","cycle":5})")).group.alphabet().size(), 5u);
  EXPECT_THROW(parse_group_config(Json::parse(R"({"family":"zd","d":2,"bogus":1})")), ConfigError);
  EXPECT_THROW(parse_group_config(Json::parse(R"({"family":"lie"})")), ConfigError);
  EXPECT_THROW(parse_subgroup_config(Json::parse(R"({"generators":["a"],"formula":"magic"})")), ConfigError);
}

TEST(GroupConfig, ExtendGeneratorsAddsLetters) {
  auto gc = parse_group_config(Json::parse(R"({"family":"zd","d":2})"));
  auto sc = parse_subgroup_config(Json::parse(R"({"generators":["a^2 b"],"extend_generators":true})"));
  auto p = make_problem(gc, sc, 6);
  EXPECT_EQ(p.group.alphabet().size(), 6u);
  EXPECT_FALSE(p.subgroup.exact_distance);
  auto h = word_to_element(p.group, p.subgroup.generating_words[0]);
  EXPECT_TRUE(p.subgroup.member(h));
  auto ball = std::make_shared<const BallIndex>(enumerate_ball(p.group, 1));
  // One step along the new generator reaches (2, 1).
  EXPECT_TRUE(ball->find(word_to_element(gc.group, "a^2 b")).has_value());
}
