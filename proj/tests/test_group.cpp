#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <vector>

#include "bdkex/errors.hpp"
#include "bdkex/group.hpp"

using namespace bdkex;

namespace {

GroupElement elem(const GroupPtr& g, long v) { return GroupElement(g, BigInt(v)); }

Scalar sc(const GroupPtr& g, long v) { return Scalar::from_int(BigInt(v), g->q); }

// All eleven members of the toy subgroup, as powers of g = 4.
std::vector<GroupElement> toy_members() {
  auto g = toy_group();
  std::vector<GroupElement> out;
  for (long e = 0; e < 11; ++e) {
    out.push_back(exp(GroupElement::generator(g), sc(g, e)));
  }
  return out;
}

}  // namespace

TEST_CASE("toy group is p=23 q=11 g=4 and g has order q") {
  auto g = toy_group();
  CHECK_EQ(g->p, 23);
  CHECK_EQ(g->q, 11);
  CHECK_EQ(g->g, 4);
  CHECK_EQ(exp(GroupElement::generator(g), sc(g, 11)).value(), 1);
}

TEST_CASE("exp worked examples") {
  auto g = toy_group();
  auto gen = GroupElement::generator(g);
  CHECK_EQ(exp(gen, sc(g, 0)).value(), 1);
  CHECK_EQ(exp(gen, sc(g, 11)).value(), 1);
  CHECK_EQ(exp(gen, sc(g, 2)).value(), 16);
}

TEST_CASE("mul worked examples") {
  auto g = toy_group();
  auto gen = GroupElement::generator(g);
  auto id = GroupElement::identity(g);
  CHECK_EQ(mul(gen, id), gen);
  CHECK_EQ(mul(gen, inverse(gen)), id);
  CHECK_EQ(mul(gen, gen).value(), 16);
}

TEST_CASE("div worked examples") {
  auto g = toy_group();
  auto gen = GroupElement::generator(g);
  auto id = GroupElement::identity(g);
  CHECK_EQ(div(gen, gen), id);
  CHECK_EQ(div(gen, id), gen);
  CHECK_EQ(div(elem(g, 16), elem(g, 4)).value(), 4);
}

TEST_CASE("scalar_inverse worked examples") {
  auto g = toy_group();
  CHECK_EQ(scalar_inverse(sc(g, 1)).value(), 1);
  CHECK_EQ(scalar_inverse(sc(g, 4)).value(), 3);
  CHECK_THROWS_AS(scalar_inverse(sc(g, 0)), NonInvertibleError);
}

TEST_CASE("scalar arithmetic reduces canonically") {
  auto g = toy_group();
  CHECK_EQ(Scalar::from_int(BigInt(12), g->q).value(), 1);
  CHECK_EQ(Scalar::from_int(BigInt(-1), g->q).value(), 10);
  CHECK_EQ((sc(g, 7) + sc(g, 8)).value(), 4);
  CHECK_EQ((sc(g, 3) - sc(g, 7)).value(), 7);
  CHECK_EQ((sc(g, 5) * sc(g, 9)).value(), 1);
}

TEST_CASE("exponent laws hold exhaustively on the toy group") {
  auto g = toy_group();
  auto members = toy_members();
  for (const auto& x : members) {
    for (long s = 0; s < 11; ++s) {
      for (long t = 0; t < 11; ++t) {
        CHECK_EQ(exp(exp(x, sc(g, s)), sc(g, t)), exp(x, sc(g, s) * sc(g, t)));
        CHECK_EQ(mul(exp(x, sc(g, s)), exp(x, sc(g, t))), exp(x, sc(g, s) + sc(g, t)));
      }
    }
  }
}

TEST_CASE("div undoes mul exhaustively on the toy group") {
  auto members = toy_members();
  for (const auto& x : members) {
    for (const auto& y : members) {
      CHECK_EQ(div(mul(x, y), y), x);
    }
  }
}

TEST_CASE("scalar_inverse works for every nonzero residue mod 11") {
  auto g = toy_group();
  for (long s = 1; s < 11; ++s) {
    CHECK_EQ((scalar_inverse(sc(g, s)) * sc(g, s)).value(), 1);
  }
}

TEST_CASE("group element construction validates range and membership") {
  auto g = toy_group();
  CHECK_THROWS_AS(elem(g, 0), ConfigError);
  CHECK_THROWS_AS(elem(g, 23), ConfigError);
  // 5 generates the full 22-element group, not the order-11 subgroup.
  CHECK_THROWS_AS(elem(g, 5), ConfigError);
  CHECK_EQ(elem(g, 16).value(), 16);
}

TEST_CASE("elements from different groups refuse to combine") {
  auto toy = toy_group();
  SeedStream rng(1, SeedStream::kGroupGenActor);
  auto big = schnorr_group(256, rng);
  auto x = GroupElement::generator(toy);
  auto y = GroupElement::generator(big);
  CHECK_THROWS_AS(mul(x, y), DomainMismatchError);
  CHECK_THROWS_AS(div(x, y), DomainMismatchError);
  CHECK_THROWS_AS(exp(x, Scalar::from_int(BigInt(2), big->q)), DomainMismatchError);
  CHECK_THROWS_AS(sc(toy, 2) + Scalar::from_int(BigInt(2), big->q), DomainMismatchError);
}

TEST_CASE("make_group_params rejects broken parameters") {
  CHECK_THROWS_AS(make_group_params(BigInt(24), BigInt(11), BigInt(4)), ConfigError);
  CHECK_THROWS_AS(make_group_params(BigInt(23), BigInt(12), BigInt(4)), ConfigError);
  CHECK_THROWS_AS(make_group_params(BigInt(23), BigInt(7), BigInt(4)), ConfigError);
  CHECK_THROWS_AS(make_group_params(BigInt(23), BigInt(11), BigInt(1)), ConfigError);
  CHECK_THROWS_AS(make_group_params(BigInt(23), BigInt(11), BigInt(5)), ConfigError);
}

TEST_CASE("random_scalar is deterministic per seed and always below q") {
  auto g = toy_group();
  SeedStream a(42, 1);
  SeedStream b(42, 1);
  SeedStream c(43, 1);
  bool diverged = false;
  for (int i = 0; i < 200; ++i) {
    Scalar x = random_scalar(a, g->q);
    CHECK_EQ(x, random_scalar(b, g->q));
    CHECK(x.value() < g->q);
    diverged = diverged || x != random_scalar(c, g->q);
  }
  CHECK(diverged);
}

TEST_CASE("random_scalar frequencies are within 5 sigma of uniform") {
  auto g = toy_group();
  SeedStream rng(7, 1);
  const int draws = 10000;
  int counts[11] = {0};
  for (int i = 0; i < draws; ++i) {
    counts[random_scalar(rng, g->q).value().convert_to<long>()]++;
  }
  const double expected = draws / 11.0;
  const double tolerance = 143.7;  // 5 * sqrt(N * p * (1-p)) for p = 1/11
  for (int r = 0; r < 11; ++r) {
    CHECK(counts[r] > expected - tolerance);
    CHECK(counts[r] < expected + tolerance);
  }
}

TEST_CASE("per-actor streams are independent of interleaving") {
  SeedStream alone(99, 2);
  std::vector<std::uint64_t> expected;
  for (int i = 0; i < 16; ++i) {
    expected.push_back(alone.next_u64());
  }
  SeedStream a(99, 2);
  SeedStream other(99, 3);
  for (int i = 0; i < 16; ++i) {
    other.next_u64();
    other.next_u64();
    CHECK_EQ(a.next_u64(), expected[static_cast<std::size_t>(i)]);
  }
}

TEST_CASE("schnorr_group satisfies all parameter invariants") {
  SeedStream rng(5, SeedStream::kGroupGenActor);
  auto g = schnorr_group(256, rng);
  CHECK_EQ(bit_length(g->p), 256);
  CHECK(is_probable_prime(g->p));
  CHECK(is_probable_prime(g->q));
  CHECK_EQ((g->p - 1) % g->q, 0);
  CHECK(g->g > 1);
  CHECK_EQ(exp(GroupElement::generator(g), Scalar::from_int(g->q, g->q)).value(), 1);
}

TEST_CASE("schnorr_group is deterministic per stream seed") {
  SeedStream a(12, SeedStream::kGroupGenActor);
  SeedStream b(12, SeedStream::kGroupGenActor);
  SeedStream c(13, SeedStream::kGroupGenActor);
  auto ga = schnorr_group(256, a);
  auto gb = schnorr_group(256, b);
  auto gc = schnorr_group(256, c);
  CHECK_EQ(ga->p, gb->p);
  CHECK_EQ(ga->q, gb->q);
  CHECK_EQ(ga->g, gb->g);
  CHECK_EQ(ga->digest, gb->digest);
  CHECK(ga->p != gc->p);
}

TEST_CASE("schnorr_group rejects sizes below 256 bits") {
  SeedStream rng(1, SeedStream::kGroupGenActor);
  CHECK_THROWS_AS(schnorr_group(128, rng), ConfigError);
}

TEST_CASE("group params survive a JSON round trip") {
  SeedStream rng(3, SeedStream::kGroupGenActor);
  auto g = schnorr_group(256, rng);
  auto back = group_params_from_json(group_params_to_json(*g));
  CHECK_EQ(back->p, g->p);
  CHECK_EQ(back->q, g->q);
  CHECK_EQ(back->g, g->g);
  CHECK_EQ(back->digest, g->digest);
}

TEST_CASE("group file loading matches in-memory parameters") {
  auto g = toy_group();
  std::string path = "toy_params_test.json";
  {
    std::ofstream f(path);
    f << group_params_to_json(*g);
  }
  auto loaded = load_group_file(path);
  CHECK_EQ(loaded->digest, g->digest);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_group_file("does_not_exist.json"), ConfigError);
  CHECK_THROWS_AS(group_params_from_json("{\"p\": \"17\"}"), ConfigError);
  CHECK_THROWS_AS(group_params_from_json("not json"), ConfigError);
}

TEST_CASE("hex helpers round trip and validate") {
  CHECK_EQ(to_hex(BigInt(0)), "0");
  CHECK_EQ(to_hex(BigInt(255)), "ff");
  CHECK_EQ(from_hex("ff"), 255);
  CHECK_EQ(from_hex(to_hex(BigInt("123456789123456789123456789"))),
           BigInt("123456789123456789123456789"));
  CHECK_THROWS_AS(from_hex(""), ConfigError);
  CHECK_THROWS_AS(from_hex("xyz"), ConfigError);
  CHECK_EQ(bit_length(BigInt(0)), 0u);
  CHECK_EQ(bit_length(BigInt(1)), 1u);
  CHECK_EQ(bit_length(BigInt(255)), 8u);
  CHECK_EQ(bit_length(BigInt(256)), 9u);
}
