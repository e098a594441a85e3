#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "test_support.hpp"

namespace synchro {
namespace {

// 99.9% quantiles of the chi-square distribution by degrees of freedom.
constexpr double kChi2Df2 = 13.82;
constexpr double kChi2Df14 = 36.12;
constexpr double kChi2Df17 = 40.79;
constexpr double kChi2Df35 = 66.62;

std::vector<State> canonical_labels(const Partition& p) { return p.canonical().labels(); }

TEST(EqualPartition, SingletonsAreUnique) {
  Rng rng(40);
  const auto p = sample_equal_partition(5, 5, rng);
  EXPECT_EQ(canonical_labels(p), (std::vector<State>{0, 1, 2, 3, 4}));
  EXPECT_THROW(sample_equal_partition(6, 4, rng), InvalidInput);
  EXPECT_THROW(sample_equal_partition(6, 1, rng), InvalidInput);
}

TEST(EqualPartition, UniformOverBalancedPartitions) {
  Rng rng(41);
  std::map<std::vector<State>, std::size_t> counts3, counts15;
  for (int t = 0; t < 30000; ++t) {
    ++counts3[canonical_labels(sample_equal_partition(4, 2, rng))];
    ++counts15[canonical_labels(sample_equal_partition(6, 3, rng))];
  }
  ASSERT_EQ(counts3.size(), 3U);
  ASSERT_EQ(counts15.size(), 15U);
  std::vector<std::size_t> c3, c15;
  for (const auto& [k, v] : counts3) c3.push_back(v);
  for (const auto& [k, v] : counts15) c15.push_back(v);
  EXPECT_LT(testing::chi_square_uniform(c3), kChi2Df2);
  EXPECT_LT(testing::chi_square_uniform(c15), kChi2Df14);
}

TEST(DomPerm, AllOnesDeterministicIsIdentity) {
  Rng rng(42);
  const auto p = sample_equal_partition(12, 3, rng);
  const auto r = dom_perm(BinaryMatrix::ones(12), p, ExtractMethod::Deterministic, rng);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->sigma, (std::vector<State>{0, 1, 2}));
  for (std::size_t i = 0; i < 12; ++i) {
    for (std::size_t j = 0; j < 12; ++j) {
      EXPECT_EQ(r->masked.get(i, j), p.block_of(i) == p.block_of(j));
    }
  }
}

TEST(DomPerm, IdentityOnConsecutiveBlocks) {
  Rng rng(43);
  const EqualPartition p({0, 0, 1, 1, 2, 2});
  const auto r = dom_perm(BinaryMatrix::identity(6), p, ExtractMethod::Random, rng);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->sigma, (std::vector<State>{0, 1, 2}));
  EXPECT_EQ(r->masked, BinaryMatrix::identity(6));
}

/// Exhaustive oracle: some sigma in S_q has every block (i, sigma(i))
/// dominating a permutation.
bool some_sigma_fits(const BinaryMatrix& m, const Partition& p) {
  const std::size_t q = p.blocks();
  std::vector<State> sigma(q);
  std::iota(sigma.begin(), sigma.end(), State{0});
  do {
    bool ok = true;
    for (std::size_t i = 0; i < q && ok; ++i) {
      ok = matching_oracle(submatrix(m, p.members(i), p.members(sigma[i])));
    }
    if (ok) return true;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return false;
}

TEST(DomPerm, AgreesWithExhaustiveSigmaSearch) {
  Rng rng(44);
  std::size_t present = 0;
  for (int t = 0; t < 2000; ++t) {
    const std::size_t q = 2 + rng.below(3);
    const std::size_t size = 1 + rng.below(3);
    const auto p = sample_equal_partition(q * size, q, rng);
    const auto m = testing::random_matrix(q * size, 0.15 + 0.4 * rng.unit(), rng);
    const auto method = t % 2 ? ExtractMethod::Random : ExtractMethod::Deterministic;
    const auto r = dom_perm(m, p, method, rng);
    ASSERT_EQ(r.has_value(), some_sigma_fits(m, p)) << "trial " << t;
    if (!r) continue;
    ++present;
    for (std::size_t i = 0; i < q; ++i) {
      ASSERT_TRUE(matching_oracle(submatrix(m, p.members(i), p.members(r->sigma[i]))));
    }
    ASSERT_TRUE(dominates(m, r->masked));
    ASSERT_TRUE(matching_oracle(r->masked));
  }
  EXPECT_GT(present, 200U);
}

TEST(Addone, KeepsEveryRecordedStructure) {
  Rng rng(45);
  for (int t = 0; t < 200; ++t) {
    const auto out = minimal_primitive_search(GeneratorConfig{{2, 2}, 1000, ExtractMethod::Random, 0}, rng);
    ASSERT_TRUE(out.converged);
    const auto& s = *out.set;
    const auto& meta = *s.meta();
    const auto& pert = *meta.perturbation;
    BinaryMatrix base = s[pert.matrix];
    ASSERT_TRUE(base.get(pert.row, pert.col));
    base.set(pert.row, pert.col, false);
    ASSERT_TRUE(base.is_permutation());
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (k != pert.matrix) {
        ASSERT_TRUE(s[k].is_permutation());
      }
      ASSERT_TRUE(is_nz(s[k]));
    }
    for (const auto& st : meta.structures) {
      if (st.excluded == pert.matrix) continue;
      const auto& sigma = *st.sigmas[pert.matrix];
      ASSERT_EQ(st.block_of[pert.col], sigma[st.block_of[pert.row]]);
    }
  }
}

TEST(Addone, ErrorsAndCap) {
  Rng rng(46);
  const std::vector<Permutation> one{Permutation::identity(1)};
  EXPECT_THROW(addone(one, {}, rng), InvalidInput);
  EXPECT_THROW(addone({}, {}, rng), InvalidInput);
  // Each matrix must keep singletons in place, so no 0-entry is allowed.
  const std::vector<State> singletons{0, 1};
  const RecordedStructure keep0{1, 2, singletons, {singletons, std::nullopt}};
  const RecordedStructure keep1{0, 2, singletons, {std::nullopt, singletons}};
  const std::vector<Permutation> ids{Permutation::identity(2), Permutation::identity(2)};
  EXPECT_THROW(addone(ids, {keep0, keep1}, rng, 1000), CapExhausted);
}

void check_outcome_structure(const GeneratorOutcome& out) {
  ASSERT_TRUE(out.converged);
  const MatrixSet& s = *out.set;
  for (const auto& st : s.meta()->structures) {
    const MatrixSet rest = s.without(st.excluded);
    const auto sig = has_block_permutation_on(rest, Partition(st.block_of));
    ASSERT_TRUE(sig);
    std::size_t r = 0;
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (k == st.excluded) continue;
      ASSERT_EQ((*sig)[r++], *st.sigmas[k]);
    }
  }
}

TEST(MinimalPrimitiveSearch, TwoByTwoStructure) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto out =
        minimal_primitive_search(GeneratorConfig{{2, 2}, 1000, ExtractMethod::Random, seed});
    check_outcome_structure(out);
    EXPECT_EQ(out.set->n(), 4U);
  }
}

TEST(MinimalPrimitiveSearch, PrimitiveOutcomesAreMinimal) {
  for (ExtractMethod method : {ExtractMethod::Random, ExtractMethod::Deterministic}) {
    std::size_t primitive = 0;
    for (std::uint64_t seed = 0; seed < 300 && primitive < 30; ++seed) {
      const auto out = minimal_primitive_search(GeneratorConfig{{3, 2, 2}, 1000, method, seed});
      check_outcome_structure(out);
      ASSERT_EQ(out.verdict->primitive(), is_primitive(*out.set).primitive());
      if (!out.verdict->primitive()) continue;
      ++primitive;
      EXPECT_TRUE(is_minimally_primitive(*out.set));
      const auto a = associated_automaton(*out.set);
      const auto minimal = minimize_associated_automaton(a, *out.set);
      EXPECT_TRUE(is_minimally_synchronizing(minimal));
    }
    if (method == ExtractMethod::Random) {
      EXPECT_GE(primitive, 30U);
    }
  }
}

TEST(MinimalPrimitiveSearch, ReproducibleAndBudgeted) {
  const GeneratorConfig cfg{{5, 3, 2}, 1000, ExtractMethod::Random, 77};
  const auto a = minimal_primitive_search(cfg);
  const auto b = minimal_primitive_search(cfg);
  ASSERT_TRUE(a.converged && b.converged);
  EXPECT_EQ(a.set->matrices(), b.set->matrices());
  EXPECT_EQ(a.set->meta(), b.set->meta());
  EXPECT_FALSE(minimal_primitive_search(GeneratorConfig{{2, 2}, 0, ExtractMethod::Random, 1}).converged);
  EXPECT_THROW(minimal_primitive_search(GeneratorConfig{{6}, 10, ExtractMethod::Random, 1}),
               InvalidInput);
  EXPECT_THROW(minimal_primitive_search(GeneratorConfig{{1, 2}, 10, ExtractMethod::Random, 1}),
               InvalidInput);
}

TEST(MergingLetter, TwoStatesGivesBothConstants) {
  Rng rng(47);
  std::size_t zero = 0;
  const int draws = 100000;
  for (int t = 0; t < draws; ++t) {
    const Letter f = sample_merging_letter(2, rng);
    ASSERT_EQ(f[0], f[1]);
    zero += f[0] == 0;
  }
  EXPECT_NEAR(static_cast<double>(zero) / draws, 0.5, 0.02);
}

TEST(MergingLetter, UniformOverRankDeficientMapsOnThreeStates) {
  Rng rng(48);
  std::map<Letter, std::size_t> counts;
  for (int t = 0; t < 100000; ++t) ++counts[sample_merging_letter(3, rng)];
  // Maps [3] -> [3] with image size 2: 3 pairs to merge, 3 * 2 injections.
  ASSERT_EQ(counts.size(), 18U);
  std::vector<std::size_t> c;
  for (const auto& [f, v] : counts) {
    EXPECT_EQ(std::set<State>(f.begin(), f.end()).size(), 2U);
    c.push_back(v);
  }
  EXPECT_LT(testing::chi_square_uniform(c), kChi2Df17);
}

TEST(MergingLetter, ImageSizeIsAlwaysOneLess) {
  Rng rng(49);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 2 + rng.below(60);
    const auto s = sample_uniform_merging_set(n, 2, rng);
    const auto a = automaton_from_stochastic(s);
    EXPECT_TRUE(s[0].is_permutation());
    EXPECT_EQ(std::set<State>(a[1].begin(), a[1].end()).size(), n - 1);
  }
}

TEST(PerturbedPermutations, ShapeAndUniformity) {
  Rng rng(50);
  std::map<std::string, std::size_t> counts;
  for (int t = 0; t < 100000; ++t) {
    const auto s = sample_perturbed_permutation_set(3, 2, rng);
    ASSERT_EQ(s[0].count() + s[1].count(), 7U);
    ++counts[s[s.meta()->perturbation->matrix].key()];
  }
  // n! * n * (n - 1) perturbed permutation matrices for n = 3.
  ASSERT_EQ(counts.size(), 36U);
  std::vector<std::size_t> c;
  for (const auto& [k, v] : counts) c.push_back(v);
  EXPECT_LT(testing::chi_square_uniform(c), kChi2Df35);
}

TEST(BernoulliSets, Density) {
  Rng rng(51);
  EXPECT_TRUE(random_binary_set(10, 2, 1.0, rng)[1].is_all_ones());
  EXPECT_EQ(random_binary_set(10, 2, 0.0, rng)[0].count(), 0U);
  EXPECT_THROW(is_primitive(random_binary_set(5, 2, 0.0, rng)), InvalidInput);
  EXPECT_THROW(random_binary_set(5, 2, 1.5, rng), InvalidInput);
  std::size_t ones = 0;
  const auto s = random_binary_set(100, 100, 0.3, rng);
  for (const auto& m : s) ones += m.count();
  EXPECT_NEAR(static_cast<double>(ones) / 1e6, 0.3, 0.01);
}

TEST(Rng, StreamsAreReproducible) {
  Rng a = Rng::for_trial(9, 3), b = Rng::for_trial(9, 3), c = Rng::for_trial(9, 4);
  const auto x = a.next();
  EXPECT_EQ(x, b.next());
  EXPECT_NE(x, c.next());
}

}  // namespace
}  // namespace synchro
