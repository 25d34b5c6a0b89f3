#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "pruw/error.hpp"
#include "pruw/params.hpp"

using namespace pruw;

namespace {

SystemParams base_params() {
  SystemParams p;
  p.N = 6;
  p.M = 2;
  p.P = 5;
  p.ell = 1;
  p.L = 5;
  p.q = 2053;
  p.r = 0.4;
  p.seed = 42;
  auto [f, alpha] = generate_constants(p.N, p.ell, p.q, p.seed);
  p.f = f;
  p.alpha = alpha;
  return p;
}

bool has_violation(const ValidationError& e, const std::string& msg) {
  return std::find(e.violations.begin(), e.violations.end(), msg) !=
         e.violations.end();
}

}  // namespace

TEST_CASE("well-formed parameter sets validate") {
  const auto vp = ValidatedParams::validate(base_params());
  CHECK(vp.databases() == 6);
  CHECK(vp.submodels() == 2);
  CHECK(vp.subpackets() == 5);
  CHECK(vp.subpacket_symbols() == 1);
  CHECK(vp.submodel_symbols() == 5);
  CHECK(vp.modulus() == 2053);
  CHECK(vp.nonzero_subpackets() == 2);  // P*r = 5*0.4
  CHECK(vp.uplink_rate() == Rational(2, 5));

  SystemParams p2 = base_params();
  p2.N = 10;
  p2.ell = 2;
  p2.L = 10;  // P=5, ell=2
  auto [f, alpha] = generate_constants(p2.N, p2.ell, p2.q, p2.seed);
  p2.f = f;
  p2.alpha = alpha;
  const auto vp2 = ValidatedParams::validate(p2);
  CHECK(vp2.submodel_symbols() == 10);
  CHECK(vp2.subpacket_symbols() == 2);
}

TEST_CASE("validation reports every violation at once") {
  SystemParams p;
  p.N = 7;
  p.ell = 1;
  p.M = 0;
  p.P = 0;
  p.L = 9;
  p.q = 6;
  p.r = 1.5;
  p.r_prime_cap = 1.5;
  try {
    ValidatedParams::validate(p);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.violations.size() == 7);
    CHECK(has_violation(e, "N must equal 4*ell + 2"));
    CHECK(has_violation(e, "M must be at least 1"));
    CHECK(has_violation(e, "P must be at least 1"));
    CHECK(has_violation(e, "L must equal P*ell"));
    CHECK(has_violation(e, "q must be prime"));
    CHECK(has_violation(e, "r must lie in [0, 1]"));
    CHECK(has_violation(e, "r_prime_cap must lie in [0, 1]"));
    CHECK(std::string(e.what()).find("invalid parameters:") == 0);
  }
}

TEST_CASE("individual constraint messages") {
  SUBCASE("alpha zero") {
    SystemParams p = base_params();
    p.alpha[2] = 0;
    try {
      ValidatedParams::validate(p);
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(has_violation(e, "every alpha must be nonzero"));
    }
  }
  SUBCASE("duplicate constant across f and alpha") {
    SystemParams p = base_params();
    p.f[0] = p.alpha[1];
    try {
      ValidatedParams::validate(p);
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(has_violation(e, "f and alpha constants must be pairwise distinct"));
    }
  }
  SUBCASE("unreduced constant") {
    SystemParams p = base_params();
    p.alpha[0] = p.q + 3;
    try {
      ValidatedParams::validate(p);
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(has_violation(e, "constants must be reduced modulo q"));
    }
  }
  SUBCASE("field too small") {
    SystemParams p = base_params();
    p.q = 5;  // N + ell = 7 > 5
    p.f = {1};
    p.alpha = {1, 2, 3, 4, 1, 2};
    try {
      ValidatedParams::validate(p);
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(has_violation(e, "field too small: q must be at least N + ell"));
    }
  }
  SUBCASE("fractional P*r") {
    SystemParams p = base_params();
    p.r = 0.3;  // P*r = 1.5
    try {
      ValidatedParams::validate(p);
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(has_violation(e, "P*r must be a nonnegative integer"));
    }
  }
}

TEST_CASE("boundary cases are legal") {
  SUBCASE("q = N + ell exactly") {
    SystemParams p;
    p.N = 6;
    p.ell = 1;
    p.M = 1;
    p.P = 1;
    p.L = 1;
    p.q = 7;  // == N + ell
    p.r = 0.0;
    p.seed = 3;
    auto [f, alpha] = generate_constants(p.N, p.ell, p.q, p.seed);
    p.f = f;
    p.alpha = alpha;
    const auto vp = ValidatedParams::validate(p);
    CHECK(vp.nonzero_subpackets() == 0);
  }
  SUBCASE("r = 1 full updates") {
    SystemParams p = base_params();
    p.r = 1.0;
    const auto vp = ValidatedParams::validate(p);
    CHECK(vp.nonzero_subpackets() == 5);
    CHECK(vp.uplink_rate() == Rational(1));
  }
}

TEST_CASE("generated constants are deterministic and well-formed") {
  const auto [f1, a1] = generate_constants(10, 2, 2053, 99);
  const auto [f2, a2] = generate_constants(10, 2, 2053, 99);
  CHECK(f1 == f2);
  CHECK(a1 == a2);
  CHECK(f1.size() == 2);
  CHECK(a1.size() == 10);
  std::set<FieldElement> all(f1.begin(), f1.end());
  all.insert(a1.begin(), a1.end());
  CHECK(all.size() == 12);  // pairwise distinct
  for (const auto a : a1) CHECK(a != 0);
  const auto [f3, a3] = generate_constants(10, 2, 2053, 100);
  CHECK(a1 != a3);  // seed matters
  CHECK_THROWS_AS(generate_constants(6, 1, 5, 1), ValidationError);
}

TEST_CASE("position encoding sizes") {
  auto vp = ValidatedParams::validate(base_params());
  CHECK(vp.position_symbols() == 1);  // 2053 >= 5
  CHECK(!vp.integral_log().has_value());
  CHECK(vp.log_q_p() == doctest::Approx(std::log(5.0) / std::log(2053.0)));

  SystemParams p = base_params();
  p.q = 11;
  p.P = 11;
  p.L = 11;
  p.r = 4.0 / 11.0;
  auto [f, alpha] = generate_constants(p.N, p.ell, p.q, p.seed);
  p.f = f;
  p.alpha = alpha;
  const auto vp11 = ValidatedParams::validate(p);
  CHECK(vp11.position_symbols() == 1);
  REQUIRE(vp11.integral_log().has_value());
  CHECK(*vp11.integral_log() == 1);  // 11^1 = P
  CHECK(vp11.log_q_p() == doctest::Approx(1.0));

  SystemParams p12 = base_params();
  p12.P = 12;
  p12.L = 12;
  p12.q = 11;
  p12.r = 0.25;
  auto [f12, a12] = generate_constants(p12.N, p12.ell, p12.q, 5);
  p12.f = f12;
  p12.alpha = a12;
  const auto vp12 = ValidatedParams::validate(p12);
  CHECK(vp12.position_symbols() == 2);  // 11 < 12 <= 121
  CHECK(!vp12.integral_log().has_value());

  SystemParams p1 = base_params();
  p1.P = 1;
  p1.L = 1;
  p1.r = 0.0;
  const auto vp1 = ValidatedParams::validate(p1);
  CHECK(vp1.position_symbols() == 0);  // nothing to encode
  CHECK(vp1.log_q_p() == 0.0);
}

TEST_CASE("downlink cap resolves to a subpacket count") {
  SystemParams p = base_params();
  p.r_prime_cap = 0.5;
  const auto vp = ValidatedParams::validate(p);
  REQUIRE(vp.v_cap().has_value());
  CHECK(*vp.v_cap() == 2);  // floor(5 * 0.5)
  SystemParams p2 = base_params();
  CHECK(!ValidatedParams::validate(p2).v_cap().has_value());
}

TEST_CASE("noise scale multiplies out the f - alpha gaps") {
  const auto vp = ValidatedParams::validate(base_params());
  const Fq fq = vp.fq();
  for (int n = 1; n <= vp.databases(); ++n) {
    FieldElement expect = 1;
    for (int i = 1; i <= vp.subpacket_symbols(); ++i) {
      expect = fq.mul(expect, fq.sub(vp.f(i), vp.alpha(n)));
    }
    CHECK(vp.noise_scale(n) == expect);
    CHECK(vp.noise_scale(n) != 0);
  }
}

TEST_CASE("closed-form costs at a literal point") {
  // N=10, P=5, q=2053, r'=2/5:
  //   C_R = (4 r' + (4/N)(1+r') log) / (1 - 2/N) = 2 + (7/10) log
  SystemParams p = base_params();
  p.N = 10;
  p.ell = 2;
  p.L = 10;
  auto [f, alpha] = generate_constants(p.N, p.ell, p.q, p.seed);
  p.f = f;
  p.alpha = alpha;
  const auto vp = ValidatedParams::validate(p);
  const CostExpr read = theoretical_read_cost(vp, Rational(2, 5));
  CHECK(read == CostExpr{Rational(2), Rational(7, 10)});
  // C_W with r = 2/5: 4 * (10/8) * (2/5) = 2, same log coefficient.
  const CostExpr write = theoretical_write_cost(vp);
  CHECK(write == CostExpr{Rational(2), Rational(2)});
  // Double-form helpers agree with the exact expressions.
  const double lam = vp.log_q_p();
  CHECK(read_cost_value(10, 0.4, lam) == doctest::Approx(read.value(lam)));
  CHECK(write_cost_value(10, 0.4, lam) == doctest::Approx(write.value(lam)));
}

TEST_CASE("costs grow with the downlink rate and beat the dense baseline") {
  const auto vp = ValidatedParams::validate(base_params());
  const double lam = vp.log_q_p();
  double prev = -1.0;
  for (int i = 0; i <= 10; ++i) {
    const Rational rp(i, 10);
    const double v = theoretical_read_cost(vp, rp).value(lam);
    CHECK(v > prev);
    prev = v;
  }
  CHECK(no_sparsification_baseline(6) == Rational(3));
  CHECK(no_sparsification_baseline(10) == Rational(5, 2));
  // At r' = 1 the sparse reading cost exceeds the dense floor.
  CHECK(theoretical_read_cost(vp, Rational(1)).value(lam) >
        no_sparsification_baseline(6).to_double());
}

TEST_CASE("wire slack matches the ceiling gap") {
  const auto vp = ValidatedParams::validate(base_params());
  const double gap = 1.0 - vp.log_q_p();  // ceil = 1 for P=5, q=2053
  CHECK(read_cost_slack(vp, 3) ==
        doctest::Approx((5 + 3) * gap / 5.0));
  CHECK(write_cost_slack(vp) == doctest::Approx(2 * 6 * gap / 5.0));
}

TEST_CASE("update prior masses") {
  const auto prior = PriorDistribution::from(11, Rational(2, 5));
  CHECK(prior.zero_mass == Rational(3, 5));
  CHECK(prior.nonzero_mass_each == Rational(2, 50));
  CHECK(prior.zero_mass + Rational(10) * prior.nonzero_mass_each ==
        Rational(1));
}

TEST_CASE("key-value parsing") {
  const auto kv = parse_key_values(
      "# comment\n"
      "schema_version = 1\n"
      "\n"
      "q = 2053  \n"
      "  r = 0.4\n");
  CHECK(kv.size() == 3);
  CHECK(kv.at("q") == "2053");
  CHECK(kv.at("r") == "0.4");
  CHECK_THROWS_AS(parse_key_values("q 2053\n"), ConfigError);
  CHECK_THROWS_AS(parse_key_values("= 5\n"), ConfigError);
  CHECK_THROWS_AS(parse_key_values("q = 1\nq = 2\n"), ConfigError);
}

TEST_CASE("params from key-values") {
  std::map<std::string, std::string> kv = {
      {"schema_version", "1"}, {"q", "2053"},       {"n_databases", "6"},
      {"m_submodels", "2"},    {"p_subpackets", "5"}, {"r", "0.4"},
      {"seed", "42"},
  };
  std::vector<std::string> consumed;
  const SystemParams p = params_from_key_values(kv, &consumed);
  CHECK(p.N == 6);
  CHECK(p.ell == 1);  // derived (N-2)/4
  CHECK(p.L == 5);    // derived P*ell
  CHECK(p.f.size() == 1);
  CHECK(p.alpha.size() == 6);
  CHECK(ValidatedParams::validate(p).nonzero_subpackets() == 2);
  CHECK(consumed.size() == kv.size());

  SUBCASE("explicit constants round-trip") {
    kv["f"] = "10";
    kv["alpha"] = "1, 2, 3, 4, 5, 6";
    const SystemParams pc = params_from_key_values(kv, nullptr);
    CHECK(pc.f == std::vector<FieldElement>{10});
    CHECK(pc.alpha == std::vector<FieldElement>{1, 2, 3, 4, 5, 6});
  }
  SUBCASE("f without alpha is rejected") {
    kv["f"] = "10";
    CHECK_THROWS_AS(params_from_key_values(kv, nullptr), ConfigError);
  }
  SUBCASE("missing required key") {
    kv.erase("q");
    CHECK_THROWS_WITH_AS(params_from_key_values(kv, nullptr),
                         "missing required key: q", ConfigError);
  }
  SUBCASE("wrong schema version") {
    kv["schema_version"] = "2";
    CHECK_THROWS_WITH_AS(params_from_key_values(kv, nullptr),
                         "unsupported schema_version: 2", ConfigError);
  }
  SUBCASE("malformed numbers") {
    kv["q"] = "20x53";
    CHECK_THROWS_AS(params_from_key_values(kv, nullptr), ConfigError);
  }
}
