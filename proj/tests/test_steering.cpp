#include "support.hpp"

#include "srd/steering.hpp"

#include <doctest.h>

using namespace srd;
using namespace srd::test;

namespace {

ControlProfile constant(int field, double u, double t = 1.0) {
  ControlProfile p;
  p.field = field;
  p.amplitude = u;
  p.duration = t;
  return p;
}

std::vector<BracketWord> words_up_to(int r, int depth) {
  std::vector<BracketWord> out;
  std::vector<std::vector<int>> cur = {{}};
  for (int len = 1; len <= depth; ++len) {
    std::vector<std::vector<int>> next;
    for (const auto& w : cur)
      for (int i = 1; i <= r; ++i) {
        auto v = w;
        v.push_back(i);
        next.push_back(v);
        out.emplace_back(v);
      }
    cur = next;
  }
  return out;
}

}  // namespace

TEST_CASE("elementary flow examples") {
  const auto h = make_frame("heisenberg");
  const Points pts = {make_point({0.3, -0.2, 0.1}), make_point({1.0, 2.0, 3.0})};
  CHECK(max_abs_diff(elementary_flow(h, constant(1, 0.0), pts), pts) == 0.0);
  CHECK(max_abs_diff(elementary_flow(h, constant(2, 1.0, 0.0), pts), pts) == 0.0);
  CHECK(max_abs_diff(elementary_flow(h, constant(1, 1.0), {make_point({0, 0, 0})})[0], make_point({1, 0, 0})) <= 1e-14);
  for (double c : {0.0, 0.5, -2.0})
    CHECK(max_abs_diff(elementary_flow(h, constant(2, 1.0), {make_point({c, 0, 0})})[0], make_point({c, 1, c})) <= 1e-13);

  // position-dependent control u(y) = y_1 on X1 = d/dx: x' = x, exponential growth
  ControlProfile lin = constant(1, 0.0);
  lin.linear = make_point({1.0, 0.0, 0.0});
  CHECK(std::abs(elementary_flow(h, lin, {make_point({1, 0, 0})})[0][0] - std::exp(1.0)) <= 1e-12);
  CHECK(lin.control(make_point({2, 5, 5})) == 2.0);
  ControlProfile quad = constant(1, 1.0);
  quad.quadratic = SmallMat::Identity(3, 3);
  CHECK(quad.control(make_point({1, 2, 0})) == 6.0);
  CHECK_FALSE(quad.constant());
  CHECK(constant(1, 1.0).constant());

  ControlProfile neg = constant(1, 1.0, -1.0);
  CHECK_THROWS_AS(elementary_flow(h, neg, pts), InvalidInput);
  CHECK_THROWS_AS(elementary_flow(h, constant(3, 1.0), pts), InvalidInput);
}

TEST_CASE("commutator flow examples") {
  const auto h = make_frame("heisenberg");
  const Points pts = {make_point({0.2, 0.1, -0.3})};
  CHECK(max_abs_diff(commutator_flow(h, {1, 2}, {1.0, 1.0}, 0.0, pts), pts) == 0.0);
  for (const auto& order : {CommutatorOrder::Nested, CommutatorOrder::Flat}) {
    CHECK(max_abs_diff(commutator_flow(h, {1, 2}, {0.0, 1.0}, 0.3, pts, order), pts) <= 1e-9);
    CHECK(max_abs_diff(commutator_flow(h, {1, 2}, {1.0, 0.0}, 0.3, pts, order), pts) <= 1e-9);
    CHECK(max_abs_diff(commutator_flow(h, {1, 2, 1}, {1.0, 0.0, 0.5}, 0.3, pts, order), pts) <= 1e-9);
  }
  for (double t : {0.1, 0.03}) {
    const Point y = commutator_flow(h, {1, 2}, {1.0, 1.0}, t, pts)[0];
    CHECK(max_abs_diff(y, pts[0] + make_point({0, 0, t * t})) <= 1e-12);  // exact for the Heisenberg group
  }
  // j = 1 is the single flow
  CHECK(max_abs_diff(commutator_flow(h, {2}, {0.5}, 0.2, pts)[0], elementary_flow(h, constant(2, 0.5, 0.2), pts)[0]) == 0.0);
  CHECK_THROWS_AS(commutator_flow(h, {1, 2}, {1.0}, 0.1, pts), InvalidInput);
}

TEST_CASE("commutator profiles: nested structure and flat order") {
  const auto nested = commutator_profiles({1, 2, 1}, {0.5, 0.25, 2.0}, 0.1);
  // Phi_(i,J) = Phi_J^-1 Phi_i^-u Phi_J Phi_i^u: 2 + 2 * |Phi_J| flows with |Phi_(2,1)| = 4
  CHECK(nested.size() == 10);
  CHECK(nested.front().field == 1);
  CHECK(nested.front().amplitude == 0.5);
  for (const auto& p : nested) CHECK(p.duration == 0.1);
  const auto flat = commutator_profiles({1, 2, 1}, {0.5, 0.25, 2.0}, 0.1, CommutatorOrder::Flat);
  REQUIRE(flat.size() == 6);
  const std::vector<int> fields = {1, 2, 1, 1, 2, 1};
  const std::vector<double> amps = {0.5, 0.25, 2.0, -0.5, -0.25, -2.0};
  for (int k = 0; k < 6; ++k) {
    CHECK(flat[k].field == fields[k]);
    CHECK(flat[k].amplitude == amps[k]);
  }
  // both orders coincide for words of length 2
  const auto a = commutator_profiles({2, 1}, {0.3, 0.7}, 0.2);
  const auto b = commutator_profiles({2, 1}, {0.3, 0.7}, 0.2, CommutatorOrder::Flat);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].field == b[k].field);
    CHECK(a[k].amplitude == b[k].amplitude);
  }
}

TEST_CASE("Taylor order examples") {
  const auto h = make_frame("heisenberg");
  const std::vector<double> ts = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  const auto f12 = taylor_order_check(h, {1, 2}, {1.0, 1.0}, make_point({0, 0, 0}), ts);
  CHECK(f12.slope >= 1.9);
  CHECK(f12.slope <= 2.1);
  CHECK((f12.coefficient - make_point({0, 0, 1})).norm() <= 0.05);

  const Point x = make_point({0.3, -0.4, 0.2});
  const auto f1 = taylor_order_check(h, {2}, {0.7}, x, ts);
  CHECK(std::abs(f1.slope - 1.0) <= 0.05);
  CHECK((f1.coefficient - eval_frame(h, x)[1]).norm() <= 0.05 * eval_frame(h, x)[1].norm());

  const auto f11 = taylor_order_check(h, {1, 1}, {1.0, 1.0}, x, ts);
  CHECK((f11.underflow || f11.slope >= 2.9));

  CHECK_THROWS_AS(taylor_order_check(h, {1, 2}, {1.0, 1.0}, x, {1e-1, 2e-2}), InvalidInput);
  CHECK_THROWS_AS(taylor_order_check(h, {1, 2}, {1.0, 1.0}, x, {1e-1}), InvalidInput);
  CHECK_THROWS_AS(taylor_order_check(h, {1, 2}, {1.0, 1.0}, x, {1e-1, -1e-2}), InvalidInput);
}

TEST_CASE("Taylor order for all words of depth <= 3") {
  const std::vector<double> base_ts = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  DeterministicRng rng(61);
  for (const auto& id : {"heisenberg", "grushin", "torus_sine"}) {
    const auto f = make_frame(id);
    const bool torus = f.domain == DomainKind::Torus;
    const Point x = torus ? rng.uniform_point(f.dim, 0.05, 0.2) : rng.uniform_point(f.dim, 0.2, 0.8);
    // the torus fields oscillate at 2 pi, so the asymptotic range starts a decade lower
    std::vector<double> ts = base_ts;
    if (torus)
      for (auto& t : ts) t *= 0.1;
    double scale = 0.0;
    for (const auto& w : words_up_to(f.count, 3)) scale = std::max(scale, iterated_bracket(f, w, x).norm());
    for (const auto& w : words_up_to(f.count, 3)) {
      std::vector<double> amps;
      for (int k = 0; k < w.length(); ++k) amps.push_back(rng.uniform(0.5, 1.5));
      const auto fit = taylor_order_check(f, w, amps, x, ts);
      const Point XI = iterated_bracket(f, w, x);
      const double j = w.length();
      if (XI.norm() > 1e-8 * scale) {
        CHECK_MESSAGE(std::abs(fit.slope - j) <= 0.15, std::string(id) << " " << w.to_string() << " slope " << fit.slope);
        CHECK_MESSAGE((fit.coefficient - XI).norm() <= 0.05 * XI.norm(), std::string(id) << " " << w.to_string());
      } else {
        CHECK_MESSAGE((fit.underflow || fit.slope >= j - 0.15), std::string(id) << " " << w.to_string());
        CHECK((fit.coefficient.norm() <= 0.05 * scale));
      }
    }
  }
}

TEST_CASE("flat order is not a depth-3 commutator") {
  // BCH: the literal order moves (1,1,2) by 2 t^2 along d/dz at u = 1, so the slope is 2.
  const auto h = make_frame("heisenberg");
  const std::vector<double> ts = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  const auto fit = taylor_order_check(h, {1, 1, 2}, {1.0, 1.0, 1.0}, make_point({0, 0, 0}), ts, CommutatorOrder::Flat);
  CHECK(std::abs(fit.slope - 2.0) <= 0.05);
  const Point y = commutator_flow(h, {1, 1, 2}, {1.0, 1.0, 1.0}, 1e-2, {make_point({0, 0, 0})}, CommutatorOrder::Flat)[0];
  CHECK(y[2] == doctest::Approx(2e-4).epsilon(1e-6));
}

TEST_CASE("chart map") {
  const auto h = make_frame("heisenberg");
  const std::vector<BracketWord> fam = {{1}, {2}, {1, 2}};
  const Point x = make_point({0.1, -0.2, 0.3});
  CHECK(max_abs_diff(chart_map(h, fam, {0, 0, 0}, x), x) == 0.0);
  CHECK(chart_profiles(fam, {0, 0, 0}).empty());

  const auto disp = chart_map(h, fam, {0, 0, 1e-3}, make_point({0, 0, 0}));
  CHECK((disp - make_point({0, 0, 1e-3})).norm() <= 0.1 * 1e-3);

  const double u = 1e-3;
  const Point single = chart_map(h, {{2}}, {u}, x);
  CHECK((single - (x + u * eval_frame(h, x)[1])).norm() <= 10 * u * u);

  CHECK_THROWS_AS(chart_map(h, fam, {0.2, 0, 0}, x), OutOfChart);
  ChartOptions wide;
  wide.radius = 0.5;
  CHECK_NOTHROW(chart_map(h, fam, {0.2, 0, 0}, x, wide));

  // fractional scaling: the j = 2 family uses sqrt(|u|) amplitudes
  const auto prof = chart_profiles({{1, 2}}, {-4e-2});
  REQUIRE(prof.size() == 4);
  CHECK(prof[0].amplitude == doctest::Approx(-0.2));
  CHECK(prof[1].amplitude == doctest::Approx(0.2));
}

TEST_CASE("chart differential at zero is the family matrix") {
  for (const auto& id : {"heisenberg", "grushin", "torus_sine"}) {
    const auto f = make_frame(id);
    const Point x = f.dim == 3 ? make_point({0.2, -0.1, 0.4}) : make_point({0.0, 0.3});
    const auto rank = bracket_generating_rank(f, x, 3);
    REQUIRE(rank.rank == f.dim);
    // the chart is u X_I + O(|u|^((j+1)/j)), so a central difference converges like sqrt(h) at depth 2
    auto column_error = [&](int k, double h) {
      std::vector<double> up(f.dim, 0.0), um(f.dim, 0.0);
      up[k] = h;
      um[k] = -h;
      const Point col = (chart_map(f, rank.families, up, x) - chart_map(f, rank.families, um, x)) / (2 * h);
      return (col - iterated_bracket(f, rank.families[k], x)).norm();
    };
    for (int k = 0; k < f.dim; ++k) {
      const double scale = std::max(1.0, iterated_bracket(f, rank.families[k], x).norm());
      const double coarse = column_error(k, 1e-4), fine = column_error(k, 1e-8);
      CHECK_MESSAGE(fine <= 1e-3 * scale, std::string(id) << " column " << k << " error " << fine);
      // nilpotent frames have no cubic term and the coarse difference is already exact
      if (coarse > 1e-6 * scale) CHECK_MESSAGE(fine <= coarse / 20, std::string(id) << " column " << k);
    }
  }
}

TEST_CASE("steer_point") {
  const auto h = make_frame("heisenberg");
  const std::vector<BracketWord> fam = {{1}, {2}, {1, 2}};
  const Point o = make_point({0, 0, 0});

  const auto same = steer_point(h, o, o, fam);
  CHECK(same.converged);
  CHECK(same.plan.profiles.empty());
  CHECK(same.plan.total_length_bound == 0.0);

  for (const Point& target : {make_point({0, 0, 1e-2}), make_point({1e-2, 0, 0}), make_point({0.02, -0.03, 0.01})}) {
    const auto res = steer_point(h, o, target, fam);
    CHECK(res.converged);
    CHECK((res.achieved - target).norm() <= 1e-6);
    // plans are self-contained
    CHECK(max_abs_diff(replay(h, res.plan.profiles, {o})[0], res.achieved) <= 1e-9);
    CHECK(res.plan.families == fam);
    double bound = 0.0;
    for (std::size_t k = 0; k < fam.size(); ++k)
      bound += std::pow(std::abs(res.plan.chart_coordinates[k]), 1.0 / fam[k].length());
    CHECK(res.plan.total_length_bound == doctest::Approx(bound).epsilon(1e-14));
    double path = 0.0;
    for (const auto& p : res.plan.profiles) path += std::abs(p.amplitude) * p.duration;
    CHECK(res.plan.path_length == doctest::Approx(path).epsilon(1e-14));
  }

  SteerOptions c3;
  c3.length_constant = 3.0;
  const auto a = steer_point(h, o, make_point({0, 0, 1e-3}), fam);
  const auto b = steer_point(h, o, make_point({0, 0, 1e-3}), fam, c3);
  CHECK(b.plan.total_length_bound == doctest::Approx(3.0 * a.plan.total_length_bound));

  CHECK_THROWS_AS(steer_point(h, o, make_point({0, 0, 0.5}), fam), OutOfChart);
  CHECK_THROWS_AS(steer_point(h, o, make_point({0, 0, 0.01}), {{1}, {2}}), InvalidInput);

  SteerOptions starved;
  starved.max_iters = 1;
  const auto nc = steer_point(h, o, make_point({0.03, 0.02, 0.05}), fam, starved);
  CHECK_FALSE(nc.converged);
  CHECK(nc.iterations == 1);
  CHECK(nc.residual > 0.0);
}

TEST_CASE("steering on the Grushin singular line uses the bracket family") {
  const auto g = make_frame("grushin");
  const Point s = make_point({0.0, 0.1});
  const auto rank = bracket_generating_rank(g, s, 2);
  REQUIRE(rank.rank == 2);
  const auto res = steer_point(g, s, s + make_point({0.0, 1e-3}), rank.families);
  CHECK(res.converged);
  CHECK((res.achieved - (s + make_point({0.0, 1e-3}))).norm() <= 1e-6);
}

TEST_CASE("ball-box sweep exponents") {
  const auto h = make_frame("heisenberg");
  const std::vector<BracketWord> fam = {{1}, {2}, {1, 2}};
  const std::vector<double> deltas = {1e-2, 1e-3, 1e-4, 1e-5};
  const auto vert = steer_sweep(h, make_point({0, 0, 0}), make_point({0, 0, 1}), deltas, fam);
  const auto horiz = steer_sweep(h, make_point({0, 0, 0}), make_point({1, 0, 0}), deltas, fam);
  for (const auto& r : vert) CHECK(r.converged);
  for (const auto& r : horiz) CHECK(r.converged);
  CHECK(ratio_spread(vert, 0.5) <= 2.0);
  CHECK(ratio_spread(horiz, 1.0) <= 2.0);
  // the wrong exponent is visibly wrong: delta^(-1/2) over three decades spreads by sqrt(1000)
  CHECK(ratio_spread(vert, 1.0) == doctest::Approx(std::sqrt(1e3)).epsilon(0.2));

  SteerOptions ser;
  const auto again = steer_sweep(h, make_point({0, 0, 0}), make_point({0, 0, 1}), deltas, fam, ser);
  for (std::size_t k = 0; k < deltas.size(); ++k) CHECK(again[k].length_bound == vert[k].length_bound);
}
