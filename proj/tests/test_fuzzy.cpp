#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "h2sched/csvio.hpp"
#include "h2sched/errors.hpp"
#include "h2sched/fuzzy.hpp"
#include "testutil.hpp"

using namespace h2sched;

namespace {

MembershipParams sorted_params(std::array<double, 7> p) {
  std::sort(p.begin(), p.end());
  MembershipParams mp;
  mp.p = p;
  return mp;
}

MembershipParams random_params(std::mt19937_64& rng, double lo, double hi) {
  std::array<double, 7> p;
  for (double& x : p) x = lo + (hi - lo) * testutil::u01(rng);
  std::sort(p.begin(), p.end());
  // occasionally force coincident breakpoints to hit the step cases
  if (testutil::u01(rng) < 0.3) p[2] = p[1];
  if (testutil::u01(rng) < 0.2) p[5] = p[4];
  return sorted_params(p);
}

// A cleanly separated model on [0,1]: every label peaks where the other
// two vanish, so peak exemplars are unambiguous.
FuzzyModel separated_model() {
  FuzzyModel m;
  m.w.p = {0.0, 0.1, 0.2, 0.5, 0.8, 0.9, 1.0};
  m.e = m.w;
  m.h = m.w;
  m.out = m.w;
  m.rules.fill(Label::Low);
  return m;
}

double peak_of(const MembershipParams& mp, Label l) {
  switch (l) {
    case Label::Low: return mp.p[0];
    case Label::Medium: return mp.p[3];
    default: return mp.p[6];
  }
}

}  // namespace

TEST_CASE("membership values match the re-derived triangles") {
  MembershipParams w = testutil::tuned_model().w;

  auto mu = membership(w, 0.60);
  CHECK(mu[0] == 0.0);
  CHECK(mu[1] == 1.0);
  CHECK(mu[2] == 0.0);

  mu = membership(w, 0.41);
  CHECK(mu[1] == doctest::Approx(0.5).epsilon(1e-12));
  mu = membership(w, 0.22);
  CHECK(mu[0] == doctest::Approx((0.57 - 0.22) / 0.56).epsilon(1e-12));
  CHECK(mu[1] == 0.0);
  mu = membership(w, 0.795);
  CHECK(mu[2] == doctest::Approx(0.5).epsilon(1e-12));

  // out-of-range inputs clamp to the boundary membership
  mu = membership(w, -3.0);
  CHECK(mu[0] == 1.0);
  mu = membership(w, 7.0);
  CHECK(mu[2] == 1.0);

  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    MembershipParams mp = random_params(rng, -5.0, 5.0);
    double x = mp.p[0] + (mp.p[6] - mp.p[0]) * testutil::u01(rng);
    auto got = membership(mp, x);
    CHECK(got[0] ==
          doctest::Approx(testutil::tri_oracle(x, mp.p[0], mp.p[0], mp.p[2])).epsilon(1e-12));
    CHECK(got[1] ==
          doctest::Approx(testutil::tri_oracle(x, mp.p[1], mp.p[3], mp.p[5])).epsilon(1e-12));
    CHECK(got[2] ==
          doctest::Approx(testutil::tri_oracle(x, mp.p[4], mp.p[6], mp.p[6])).epsilon(1e-12));
    for (double m : got) {
      CHECK(m >= 0.0);
      CHECK(m <= 1.0);
    }
  }
}

TEST_CASE("the known-good parameter rows cover their ranges") {
  FuzzyModel m = testutil::tuned_model();
  for (const MembershipParams* mp : {&m.w, &m.e, &m.h, &m.out}) {
    validate(*mp);
    for (int i = 0; i <= 200; ++i) {
      double x = mp->p[0] + (mp->p[6] - mp->p[0]) * i / 200.0;
      auto mu = membership(*mp, x);
      CHECK(mu[0] + mu[1] + mu[2] > 0.0);
    }
  }
}

TEST_CASE("ascending order is enforced") {
  MembershipParams bad;
  bad.p = {0, 1, 2, 3, 2.5, 5, 6};
  CHECK_THROWS_AS(validate(bad), ValidationError);
  bad.p = {0, 1, 2, std::nan(""), 4, 5, 6};
  CHECK_THROWS_AS(validate(bad), ValidationError);
}

TEST_CASE("defuzzifying a full triangle gives the vertex mean") {
  FuzzyModel m = testutil::tuned_model();
  CHECK(defuzzify(m.out, {0.0, 0.0, 1.0}) ==
        doctest::Approx((11.52 + 17.36 + 17.36) / 3.0).epsilon(1e-12));
  CHECK(defuzzify(m.out, {0.0, 1.0, 0.0}) ==
        doctest::Approx((4.90 + 10.34 + 13.14) / 3.0).epsilon(1e-9));
  MembershipParams simple = sorted_params({0, 1, 2, 3, 4, 5, 6});
  CHECK(defuzzify(simple, {1.0, 0.0, 0.0}) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("exact defuzzification matches numeric integration on random shapes") {
  std::mt19937_64 rng(4242);
  // unconstrained shapes can have near-vertical edges, so the trapezoid
  // reference needs a fine grid before its own kink error drops away
  for (int trial = 0; trial < 120; ++trial) {
    MembershipParams out = random_params(rng, 0.0, 20.0);
    std::array<double, 3> beta;
    for (double& b : beta) {
      b = testutil::u01(rng);
      if (testutil::u01(rng) < 0.25) b = 0.0;
      if (testutil::u01(rng) < 0.1) b = 1.0;
    }
    double exact = defuzzify(out, beta);
    double numeric = testutil::centroid_numeric(out, beta, 2000000);
    CHECK(std::abs(exact - numeric) < 1e-6);
  }
  // well-separated shapes hold the same bound at the coarse default grid
  for (int trial = 0; trial < 300; ++trial) {
    MembershipParams out = testutil::benign_params(rng, 0.0, 20.0);
    std::array<double, 3> beta;
    for (double& b : beta) {
      b = testutil::u01(rng);
      if (testutil::u01(rng) < 0.25) b = 0.0;
      if (testutil::u01(rng) < 0.1) b = 1.0;
    }
    double exact = defuzzify(out, beta);
    double numeric = testutil::centroid_numeric(out, beta);
    CHECK(std::abs(exact - numeric) < 1e-6);
  }
}

TEST_CASE("defuzzification with the degenerate output row and partial clips") {
  MembershipParams out = testutil::tuned_model().out;  // p1 = p2 = 4.90
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::array<double, 3> beta = {testutil::u01(rng), testutil::u01(rng),
                                  testutil::u01(rng)};
    double exact = defuzzify(out, beta);
    double numeric = testutil::centroid_numeric(out, beta);
    CHECK(std::abs(exact - numeric) < 1e-6);
    CHECK(exact >= out.p[0]);
    CHECK(exact <= out.p[6]);
  }
}

TEST_CASE("zero activation falls back to the output floor") {
  MembershipParams out = sorted_params({2, 3, 4, 5, 6, 7, 8});
  CHECK(defuzzify(out, {0.0, 0.0, 0.0}) == 2.0);
}

TEST_CASE("inference at the peaks reproduces the strongest rule") {
  FuzzyModel m = testutil::tuned_model();
  // low e, low h, medium w fires the export rule at full strength
  double y = infer(m, -11.76, 1.04, 0.60);
  CHECK(y == doctest::Approx((11.52 + 17.36 + 17.36) / 3.0).epsilon(1e-9));
  // same prices with top-of-range wind hit the other export rule
  double y2 = infer(m, -11.76, 1.04, 0.99);
  CHECK(y2 == doctest::Approx((11.52 + 17.36 + 17.36) / 3.0).epsilon(1e-9));
  // expensive electricity holds hydrogen back
  double y3 = infer(m, 695.09, 1.04, 0.60);
  CHECK(y3 == doctest::Approx(defuzzify(m.out, {1.0, 0.0, 0.0})).epsilon(1e-12));
  CHECK(y3 < 4.0);
}

TEST_CASE("inference at a dead point returns the output floor") {
  FuzzyModel m = separated_model();
  // x = 0.5 sits exactly where the low foot, the medium foot and nothing
  // else meet, so every e membership is zero there
  m.e.p = {0.0, 0.5, 0.5, 0.7, 0.9, 1.0, 1.0};
  auto mu = membership(m.e, 0.5);
  CHECK(mu[0] + mu[1] + mu[2] == 0.0);
  double y = infer(m, 0.5, 0.5, 0.5);
  CHECK(y == m.out.p[0]);
}

TEST_CASE("inference stays within the output range on random inputs") {
  std::mt19937_64 rng(11);
  FuzzyModel m = testutil::tuned_model();
  for (int trial = 0; trial < 200; ++trial) {
    double e = -50.0 + 800.0 * testutil::u01(rng);
    double h = 0.5 + 5.0 * testutil::u01(rng);
    double w = -0.1 + 1.2 * testutil::u01(rng);
    double y = infer(m, e, h, w);
    CHECK(y >= m.out.p[0]);
    CHECK(y <= m.out.p[6]);
  }
}

TEST_CASE("rule indexing walks h fastest, then e, then w") {
  CHECK(rule_index(Label::Low, Label::Low, Label::Low) == 0);
  CHECK(rule_index(Label::Low, Label::Medium, Label::Low) == 1);
  CHECK(rule_index(Label::Medium, Label::Low, Label::Low) == 3);
  CHECK(rule_index(Label::Low, Label::Low, Label::Medium) == 9);
  CHECK(rule_index(Label::Low, Label::Low, Label::High) == 18);
  CHECK(rule_index(Label::High, Label::High, Label::High) == 26);
}

TEST_CASE("planted rule bases are recovered from peak exemplars") {
  std::mt19937_64 rng(2718);
  FuzzyModel proto = separated_model();
  for (int trial = 0; trial < 20; ++trial) {
    std::array<Label, 27> planted;
    for (int i = 0; i < 27; ++i)
      planted[i] = static_cast<Label>(static_cast<int>(testutil::u01(rng) * 3.0) % 3);

    std::vector<Exemplar> data;
    for (int ie = 0; ie < 3; ++ie)
      for (int ih = 0; ih < 3; ++ih)
        for (int iw = 0; iw < 3; ++iw) {
          Label le = static_cast<Label>(ie), lh = static_cast<Label>(ih),
                lw = static_cast<Label>(iw);
          Exemplar ex;
          ex.e = peak_of(proto.e, le);
          ex.h = peak_of(proto.h, lh);
          ex.w = peak_of(proto.w, lw);
          ex.target = peak_of(proto.out, planted[rule_index(le, lh, lw)]);
          data.push_back(ex);
        }
    std::shuffle(data.begin(), data.end(), rng);
    FuzzyModel learned = learn_rules(proto.w, proto.e, proto.h, proto.out, data);
    for (int i = 0; i < 27; ++i) CHECK(learned.rules[i] == planted[i]);
  }
}

TEST_CASE("empty data and dead combos default to low") {
  FuzzyModel proto = separated_model();
  FuzzyModel learned = learn_rules(proto.w, proto.e, proto.h, proto.out, {});
  for (Label l : learned.rules) CHECK(l == Label::Low);
}

TEST_CASE("conflicting exemplars resolve by cumulative degree; ties go low") {
  FuzzyModel proto = separated_model();
  Exemplar hi{0.0, 0.0, 1.0, 1.0};   // (low, low, high) -> high target
  Exemplar med{0.0, 0.0, 1.0, 0.5};  // same combination -> medium target
  std::vector<Exemplar> data = {hi, hi, med};
  FuzzyModel learned = learn_rules(proto.w, proto.e, proto.h, proto.out, data);
  CHECK(learned.rules[rule_index(Label::Low, Label::Low, Label::High)] == Label::High);

  data = {hi, med};  // exact tie in cumulative degree
  learned = learn_rules(proto.w, proto.e, proto.h, proto.out, data);
  CHECK(learned.rules[rule_index(Label::Low, Label::Low, Label::High)] == Label::Medium);

  data = {med};
  learned = learn_rules(proto.w, proto.e, proto.h, proto.out, data);
  CHECK(learned.rules[rule_index(Label::Low, Label::Low, Label::High)] == Label::Medium);
  // combinations no exemplar touches fall back to low
  CHECK(learned.rules[rule_index(Label::High, Label::High, Label::High)] == Label::Low);
}

TEST_CASE("model files round trip exactly") {
  auto dir = testutil::temp_dir("fuzzy_model");
  FuzzyModel m = testutil::tuned_model();
  auto path = (dir / "model.txt").string();
  save_model(m, path);
  FuzzyModel back = load_model(path);
  CHECK(back.w.p == m.w.p);
  CHECK(back.e.p == m.e.p);
  CHECK(back.h.p == m.h.p);
  CHECK(back.out.p == m.out.p);
  CHECK(back.rules == m.rules);

  // saving the loaded model reproduces the file byte for byte
  auto path2 = (dir / "model2.txt").string();
  save_model(back, path2);
  CHECK(csv::read_file(path) == csv::read_file(path2));

  // comments and blank lines are tolerated
  csv::write_file(path2, "# tuned controller\n\n" + csv::read_file(path));
  FuzzyModel commented = load_model(path2);
  CHECK(commented.rules == m.rules);
}

TEST_CASE("malformed model files are rejected with context") {
  auto dir = testutil::temp_dir("fuzzy_model_bad");
  FuzzyModel m = testutil::tuned_model();
  auto good = (dir / "good.txt").string();
  save_model(m, good);
  std::string text = csv::read_file(good);

  auto write_variant = [&](const std::string& name, const std::string& body) {
    auto p = (dir / name).string();
    csv::write_file(p, body);
    return p;
  };

  // drop the last rule line
  std::string truncated = text.substr(0, text.rfind("rule"));
  CHECK_THROWS_AS(load_model(write_variant("missing.txt", truncated)), FormatError);

  CHECK_THROWS_AS(load_model(write_variant("dup.txt", text + "rule low low low low\n")),
                  FormatError);

  std::string badlabel = text;
  badlabel.replace(badlabel.rfind(" low\n"), 5, " huge\n");
  CHECK_THROWS_AS(load_model(write_variant("label.txt", badlabel)), FormatError);

  std::string renamed = text;
  renamed.replace(renamed.find("params w"), 8, "params q");
  CHECK_THROWS_AS(load_model(write_variant("var.txt", renamed)), FormatError);

  std::string short_row = "params w 0 1 2 3 4 5\n" + text.substr(text.find("params e"));
  CHECK_THROWS_AS(load_model(write_variant("short.txt", short_row)), FormatError);

  std::string unsorted =
      "params w 9 8 7 6 5 4 3\n" + text.substr(text.find("params e"));
  CHECK_THROWS_AS(load_model(write_variant("unsorted.txt", unsorted)), ValidationError);

  CHECK_THROWS_AS(load_model((dir / "absent.txt").string()), FormatError);
}
