#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <stdexcept>
#include <vector>

#include "pruw/client.hpp"
#include "pruw/coordinator.hpp"
#include "pruw/database.hpp"
#include "pruw/error.hpp"
#include "pruw/params.hpp"
#include "pruw/rng.hpp"

using namespace pruw;

namespace {

// Small fixed system: ell=1, explicit constants so scale factors are
// hand-checkable (noise scale for database n is 10 - n).
ValidatedParams fixed_params() {
  SystemParams p;
  p.N = 6;
  p.M = 2;
  p.P = 5;
  p.ell = 1;
  p.L = 5;
  p.q = 2053;
  p.f = {10};
  p.alpha = {1, 2, 3, 4, 5, 6};
  p.r = 0.4;
  p.seed = 7;
  return ValidatedParams::validate(p);
}

ValidatedParams ell2_params() {
  SystemParams p;
  p.N = 10;
  p.M = 2;
  p.P = 5;
  p.ell = 2;
  p.L = 10;
  p.q = 2053;
  p.r = 0.4;
  p.seed = 11;
  auto [f, alpha] = generate_constants(p.N, p.ell, p.q, p.seed);
  p.f = f;
  p.alpha = alpha;
  return ValidatedParams::validate(p);
}

std::vector<FieldVector> zero_storage(const ValidatedParams& vp) {
  return std::vector<FieldVector>(
      vp.subpackets(),
      FieldVector(vp.modulus(), static_cast<std::size_t>(vp.submodels()) *
                                    vp.subpacket_symbols()));
}

const Permutation kGolden({2, 5, 1, 3, 4});

}  // namespace

TEST_CASE("advertised entries map through the permutation") {
  // V~ = {2, 3} with the golden permutation names true subpackets {5, 1},
  // order preserved so readers can match answers to subpackets.
  CHECK(true_positions(kGolden, {2, 3}) == std::vector<int>{5, 1});
  CHECK(true_positions(kGolden, {1, 2, 3, 4, 5}) ==
        std::vector<int>{2, 5, 1, 3, 4});
  CHECK_THROWS_AS(true_positions(kGolden, {6}), ProtocolError);
}

TEST_CASE("writers place pairs at permutation preimages, sorted") {
  // True update set B = {1, 4}: preimages are 3 and 5.
  CHECK(permuted_positions(kGolden, {1, 4}) == std::vector<int>{3, 5});
  CHECK(permuted_positions(kGolden, {5, 1}) == std::vector<int>{2, 3});
  CHECK(permuted_positions(kGolden, {1, 2, 3, 4, 5}) ==
        std::vector<int>{1, 2, 3, 4, 5});
}

TEST_CASE("reordering reverses the permutation exactly, noise aside") {
  const auto vp = fixed_params();
  const FieldMatrix plain = permutation_matrix(kGolden, vp.modulus());
  const FieldElement u1 = 111;
  const FieldElement u4 = 444;
  const std::vector<WritePair> pairs = {{u1, 3}, {u4, 5}};

  SUBCASE("plain reversing matrix") {
    Database db(vp, 1, plain, zero_storage(vp));
    const FieldVector t = db.reorder_updates(pairs);
    CHECK(t == FieldVector(vp.modulus(), {u1, 0, 0, u4, 0}));
  }

  SUBCASE("noisy reversing matrix, noise subtracted") {
    RngStream rng(5, "zbar-probe");
    FieldMatrix zbar(vp.modulus(), 5, 5);
    zbar.e = rng.field_vector(vp.modulus(), 25);
    const FieldElement c1 = vp.noise_scale(1);
    Database db(vp, 1, build_reversing_matrix(plain, zbar, c1),
                zero_storage(vp));
    const FieldVector t = db.reorder_updates(pairs);
    FieldVector u_tilde(vp.modulus(), 5);
    u_tilde[2] = u1;
    u_tilde[4] = u4;
    const FieldVector stripped = sub(t, scale(c1, matvec(zbar, u_tilde)));
    CHECK(stripped == FieldVector(vp.modulus(), {u1, 0, 0, u4, 0}));
  }
}

TEST_CASE("combined updates interpolate the raw deltas") {
  RngStream rng(21, "lagrange-probe");
  for (const int ell : {1, 2, 3}) {
    const Fq fq(2053);
    std::vector<FieldElement> f;
    std::set<FieldElement> used;
    while (static_cast<int>(f.size()) < ell) {
      const FieldElement c = rng.nonzero_field_element(2053);
      if (used.insert(c).second) f.push_back(c);
    }
    for (int trial = 0; trial < 25; ++trial) {
      const std::vector<FieldElement> deltas = rng.field_vector(2053, ell);
      const FieldElement z_hat = rng.field_element(2053);
      for (int k = 1; k <= ell; ++k) {
        // The noise term carries prod_j (f_j - alpha) which vanishes at
        // alpha = f_k, leaving exactly delta_k.
        CHECK(combine_update_at(fq, f, f[k - 1], deltas, z_hat) ==
              deltas[k - 1]);
      }
    }
  }
}

TEST_CASE("read query layout") {
  const Fq fq(2053);
  const std::vector<FieldElement> f = {10, 20};
  const FieldElement alpha_n = 3;
  const std::vector<FieldVector> noise = {FieldVector(2053, {1, 2, 3}),
                                          FieldVector(2053, {4, 5, 6})};
  const ReadQuery query = make_read_query(fq, 3, 2, f, alpha_n, noise);
  REQUIRE(query.elements.size() == 6);
  const FieldElement inv7 = fq.inverse(fq.sub(10, 3));
  const FieldElement inv17 = fq.inverse(fq.sub(20, 3));
  CHECK(query.elements[0] == 1);
  CHECK(query.elements[1] == fq.add(2, inv7));
  CHECK(query.elements[2] == 3);
  CHECK(query.elements[3] == 4);
  CHECK(query.elements[4] == fq.add(5, inv17));
  CHECK(query.elements[5] == 6);
}

TEST_CASE("answers on plain storage expose the storage inner product") {
  const auto vp = fixed_params();
  const Fq fq = vp.fq();
  // Plain reversing matrix and known storage; zero query noise.
  std::vector<FieldVector> storage = zero_storage(vp);
  RngStream rng(2, "plain-storage");
  for (auto& sub : storage) sub.e = rng.field_vector(vp.modulus(), 2);
  Database db(vp, 1, permutation_matrix(kGolden, vp.modulus()), storage);
  const std::vector<FieldVector> no_noise = {FieldVector(vp.modulus(), 2)};
  for (int theta = 1; theta <= 2; ++theta) {
    const ReadQuery q =
        make_read_query(fq, 2, theta, vp.f_all(), vp.alpha(1), no_noise);
    for (int v = 1; v <= 5; ++v) {
      // Column v of the plain matrix selects subpacket perm(v); the query
      // picks submodel theta scaled by 1/(f_1 - alpha_1).
      const FieldElement expect =
          fq.mul(storage[kGolden.apply(v) - 1][theta - 1],
                 fq.inverse(fq.sub(vp.f(1), vp.alpha(1))));
      CHECK(db.answer_read(q, v) == expect);
    }
  }
}

TEST_CASE("full read path decodes the oracle symbols") {
  const auto vp = ell2_params();
  auto setup = coordinator_setup(vp);
  for (int theta = 1; theta <= 2; ++theta) {
    const ClientSession client(vp, theta, theta, setup.permutation);
    const auto queries = client.round_queries(1);
    REQUIRE(queries.size() == 10);
    for (int v = 1; v <= vp.subpackets(); ++v) {
      std::vector<FieldElement> answers;
      for (int n = 1; n <= vp.databases(); ++n) {
        answers.push_back(
            setup.databases[n - 1].answer_read(queries[n - 1], v));
      }
      const auto symbols = client.decode_subpacket(answers);
      const int s = setup.permutation.apply(v);
      REQUIRE(symbols.size() == 2);
      for (int k = 1; k <= 2; ++k) {
        CHECK(symbols[k - 1] ==
              setup.submodels[theta - 1][(s - 1) * 2 + (k - 1)]);
      }
    }
  }
}

TEST_CASE("database round state transitions") {
  const auto vp = fixed_params();
  const auto setup = coordinator_setup(vp);
  Database db = setup.databases[0];

  CHECK_THROWS_AS(db.current_v_tilde(), ProtocolError);
  CHECK_THROWS_AS(db.begin_round(2), ProtocolError);  // must start at 1
  db.begin_round(1);
  CHECK(db.current_v_tilde() == std::vector<int>{1, 2, 3, 4, 5});
  CHECK_THROWS_AS(db.begin_round(3), ProtocolError);  // and advance by one

  const ClientSession client(vp, 1, 1, setup.permutation);
  const auto queries = client.round_queries(1);
  db.receive_query(1, queries[0]);
  CHECK_THROWS_WITH_AS(db.receive_query(1, queries[0]),
                       "client 1 already sent a query this round",
                       ProtocolError);
  CHECK(db.query_of(1).elements == queries[0].elements);
  CHECK_THROWS_AS(db.query_of(9), ProtocolError);
}

TEST_CASE("write pair validation") {
  const auto vp = fixed_params();  // P*r = 2
  const auto setup = coordinator_setup(vp);
  Database db = setup.databases[0];
  db.begin_round(1);
  CHECK_THROWS_WITH_AS(db.collect_write(3, {{5, 1}}),
                       "writer 3 must send exactly P*r = 2 pairs, got 1",
                       ProtocolError);
  CHECK_THROWS_WITH_AS(db.collect_write(3, {{5, 1}, {6, 6}}),
                       "pair position 6 out of range [1, 5]", ProtocolError);
  CHECK_THROWS_WITH_AS(db.collect_write(3, {{5, 2}, {6, 2}}),
                       "duplicate pair position 2", ProtocolError);
  db.collect_write(3, {{5, 1}, {6, 2}});
  CHECK_THROWS_WITH_AS(db.collect_write(3, {{5, 1}, {6, 2}}),
                       "writer 3 already submitted this round", ProtocolError);
}

TEST_CASE("close_round advertises the union of touched positions") {
  const auto vp = fixed_params();
  const auto setup = coordinator_setup(vp);
  Database db = setup.databases[1];
  db.begin_round(1);
  db.collect_write(1, {{9, 4}, {8, 2}});
  db.collect_write(2, {{7, 2}, {6, 5}});
  const auto next = db.close_round();
  CHECK(next == std::vector<int>{2, 4, 5});
  db.begin_round(2);
  CHECK(db.current_v_tilde() == std::vector<int>{2, 4, 5});
  // No writers this round: the next advertisement is empty.
  CHECK(db.close_round().empty());
  db.begin_round(3);
  CHECK(db.current_v_tilde().empty());
}

TEST_CASE("downlink cap keeps the most-updated positions") {
  SystemParams p = fixed_params().raw();
  p.r_prime_cap = 0.4;  // v_cap = 2
  const auto vp = ValidatedParams::validate(p);
  const auto setup = coordinator_setup(vp);
  Database db = setup.databases[0];
  db.begin_round(1);
  db.collect_write(1, {{1, 2}, {2, 4}});
  db.collect_write(2, {{3, 2}, {4, 5}});
  // Counts: position 2 twice, positions 4 and 5 once; the tie breaks to
  // the lower index.
  CHECK(db.close_round() == std::vector<int>{2, 4});
}

TEST_CASE("abort_round discards collected writes and the advertisement") {
  const auto vp = fixed_params();
  const auto setup = coordinator_setup(vp);
  Database db = setup.databases[0];
  db.begin_round(1);
  db.collect_write(1, {{5, 1}, {6, 2}});
  const auto before = db.snapshot();
  db.abort_round();
  db.begin_round(2);
  CHECK(db.current_v_tilde().empty());
  for (int s = 1; s <= 5; ++s) {
    CHECK(db.subpacket(s) == before.storage[s - 1]);
  }
}

TEST_CASE("snapshot and restore round-trip storage") {
  const auto vp = fixed_params();
  const auto setup = coordinator_setup(vp);
  Database db = setup.databases[3];
  const auto snap = db.snapshot();
  db.corrupt_entry(2, 1, 17);
  CHECK(!(db.subpacket(2) == snap.storage[1]));
  db.restore(snap);
  CHECK(db.subpacket(2) == snap.storage[1]);
  // Diagnostics hook: bad subpacket index surfaces as the container's own
  // range error rather than a protocol violation.
  CHECK_THROWS_AS(db.corrupt_entry(9, 0, 1), std::out_of_range);
}

TEST_CASE("random updates are sparse, nonzero, and deterministic") {
  const auto vp = ell2_params();  // b = 2, ell = 2
  const auto setup = coordinator_setup(vp);
  const ClientSession client(vp, 4, 1, setup.permutation);
  const SparseUpdate u1 = client.random_update(3);
  const SparseUpdate u2 = client.random_update(3);
  CHECK(u1.b_set == u2.b_set);
  CHECK(u1.deltas == u2.deltas);
  REQUIRE(u1.b_set.size() == 2);
  CHECK(u1.b_set[0] < u1.b_set[1]);
  for (const int b : u1.b_set) {
    CHECK(b >= 1);
    CHECK(b <= 5);
  }
  for (const auto& d : u1.deltas) {
    REQUIRE(d.size() == 2);
    CHECK((d[0] != 0 || d[1] != 0));
  }
  CHECK(!(client.random_update(4).b_set == u1.b_set &&
          client.random_update(4).deltas == u1.deltas));
}

TEST_CASE("sparsify keeps the densest subpackets") {
  const auto vp = ell2_params();  // P=5, ell=2, b=2
  const auto setup = coordinator_setup(vp);
  const ClientSession client(vp, 1, 1, setup.permutation);
  FieldVector dense(vp.modulus(), 10);
  dense[0] = 5;              // subpacket 1: one nonzero
  dense[2] = 1;              // subpacket 2: two nonzeros
  dense[3] = 2;
  dense[6] = 7;              // subpacket 4: two nonzeros
  dense[7] = 8;
  dense[9] = 9;              // subpacket 5: one nonzero
  const SparseUpdate sparse = client.sparsify(dense);
  CHECK(sparse.b_set == std::vector<int>{2, 4});
  CHECK(sparse.deltas[0] == std::vector<FieldElement>{1, 2});
  CHECK(sparse.deltas[1] == std::vector<FieldElement>{7, 8});
}

TEST_CASE("write pairs share noise across databases") {
  const auto vp = ell2_params();
  const auto setup = coordinator_setup(vp);
  const Fq fq = vp.fq();
  const ClientSession client(vp, 2, 1, setup.permutation);
  const SparseUpdate update{{1, 4},
                            {{11, 22}, {33, 44}}};
  const auto expected_positions = permuted_positions(setup.permutation,
                                                     update.b_set);
  std::vector<FieldElement> z_hats;  // recovered per subpacket from db 1
  for (int n = 1; n <= vp.databases(); ++n) {
    const auto pairs = client.write_pairs_for(update, n, 1);
    REQUIRE(pairs.size() == 2);
    std::vector<int> positions;
    for (const auto& pair : pairs) positions.push_back(pair.position);
    CHECK(positions == expected_positions);
    // value = combined(alpha_n) + prod(f_i - alpha_n) * z_hat with z_hat
    // shared across databases for each subpacket.
    const FieldElement cn = vp.noise_scale(n);
    for (std::size_t j = 0; j < pairs.size(); ++j) {
      // Pair j sits at expected_positions[j]; map back to the b_set entry.
      const int true_pos = setup.permutation.apply(pairs[j].position);
      const std::size_t b_index =
          true_pos == update.b_set[0] ? 0 : 1;
      REQUIRE(true_pos == update.b_set[b_index]);
      const FieldElement base = combine_update_at(
          fq, vp.f_all(), vp.alpha(n), update.deltas[b_index], 0);
      const FieldElement z =
          fq.mul(fq.sub(pairs[j].update, base), fq.inverse(cn));
      if (n == 1) {
        z_hats.push_back(z);
      } else {
        CHECK(z == z_hats[j]);
      }
    }
  }
}

TEST_CASE("write pairs validate the update shape") {
  const auto vp = fixed_params();
  const auto setup = coordinator_setup(vp);
  const ClientSession client(vp, 1, 1, setup.permutation);
  CHECK_THROWS_AS(client.write_pairs_for({{1}, {{5}, {6}}}, 1, 1),
                  ProtocolError);
  CHECK_THROWS_AS(client.write_pairs_for({{4, 1}, {{5}, {6}}}, 1, 1),
                  ProtocolError);  // unsorted b_set
  CHECK_THROWS_AS(client.write_pairs_for({{1, 9}, {{5}, {6}}}, 1, 1),
                  ProtocolError);  // out of range
}
