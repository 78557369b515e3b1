#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace srd;
using srd::test::max_abs_diff;

TEST_CASE("gaussian_scalar closed values") {
  const Point x = make_point({0.3, -0.2});
  CHECK(gaussian_scalar(x, x, 1.0) == 1.0);
  // |x-y|^2 = 2 sigma
  CHECK(gaussian_scalar(make_point({0.0}), make_point({std::sqrt(2.0 * 0.7)}), 0.7) ==
        doctest::Approx(0.3678794412).epsilon(1e-10));
  CHECK(gaussian_scalar(make_point({0, 0}), make_point({1, 0}), 0.5) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  const Point y = make_point({-1.0, 0.4});
  CHECK(gaussian_scalar(x, y, 0.8) == gaussian_scalar(y, x, 0.8));
  const double v = gaussian_scalar(x, y, 0.8);
  CHECK(v > 0.0);
  CHECK(v <= 1.0);
}

TEST_CASE("gaussian_scalar rejects non-finite input") {
  const Point bad = make_point({0.0, NAN});
  CHECK_THROWS_AS(gaussian_scalar(bad, make_point({0, 0}), 1.0), InvalidInput);
  CHECK_THROWS_AS(gaussian_scalar(make_point({0, 0}), make_point({INFINITY, 0}), 1.0), InvalidInput);
}

TEST_CASE("kernel spec validation") {
  CHECK_THROWS_AS(KernelSpec::full(0.0).validate(), InvalidInput);
  CHECK_THROWS_AS(KernelSpec::full(-1.0).validate(), InvalidInput);
  CHECK_THROWS_AS(KernelSpec::full(NAN).validate(), InvalidInput);
  CHECK_THROWS_AS(KernelSpec::constrained(1.0, "no_such_frame"), ConfigurationError);
  KernelSpec broken;
  broken.mode = KernelMode::FrameConstrained;
  CHECK_THROWS_AS(broken.validate(), ConfigurationError);
  CHECK_NOTHROW(KernelSpec::constrained(1.0, "heisenberg").validate());
  CHECK(KernelSpec::constrained(1.0, "heisenberg").frame_dim() == 3);
  CHECK(KernelSpec::full(1.0).frame_dim() == 0);
}

TEST_CASE("kernel_apply examples") {
  const KernelSpec full = KernelSpec::full(0.7);
  const Point a = make_point({0.3, -1.1, 2.0});
  const Point x = make_point({0.1, 0.2, 0.3});
  CHECK(max_abs_diff(kernel_apply(full, x, x, a), a) == 0.0);

  const KernelSpec heis = KernelSpec::constrained(1.0, "heisenberg");
  const Point o = make_point({0, 0, 0});
  CHECK(kernel_apply(heis, o, o, make_point({0, 0, 1})).norm() == 0.0);

  SUBCASE("translation frame reduces to full") {
    DeterministicRng rng(11);
    for (int d = 1; d <= 4; ++d) {
      const KernelSpec tr = KernelSpec::constrained(0.9, "translation", d);
      const KernelSpec fu = KernelSpec::full(0.9);
      for (int k = 0; k < 20; ++k) {
        const Point xx = rng.uniform_point(d, -1, 1), yy = rng.uniform_point(d, -1, 1), p = rng.uniform_point(d, -1, 1);
        CHECK(max_abs_diff(kernel_apply(tr, xx, yy, p), kernel_apply(fu, xx, yy, p)) <= 1e-15);
      }
    }
  }
}

TEST_CASE("kernel_apply dimension mismatch is rejected") {
  const KernelSpec heis = KernelSpec::constrained(1.0, "heisenberg");
  CHECK_THROWS_AS(kernel_apply(heis, make_point({0, 0}), make_point({0, 0}), make_point({1, 0})), Error);
}

TEST_CASE("kernel bilinear symmetry and frame span") {
  DeterministicRng rng(3);
  const std::vector<std::pair<std::string, int>> modes = {{"full", 2}, {"full", 3}, {"heisenberg", 3},
                                                          {"grushin", 2}, {"torus_sine", 2}};
  for (const auto& [id, d] : modes) {
    const KernelSpec spec = id == "full" ? KernelSpec::full(0.6) : KernelSpec::constrained(0.6, id);
    for (int k = 0; k < 100; ++k) {
      const Point x = rng.uniform_point(d, -1, 1), y = rng.uniform_point(d, -1, 1);
      const Point p = rng.uniform_point(d, -1, 1), q = rng.uniform_point(d, -1, 1);
      const double lhs = kernel_apply(spec, x, y, p).dot(q);
      const double rhs = kernel_apply(spec, y, x, q).dot(p);
      CHECK(std::abs(lhs - rhs) <= 1e-14 * (1.0 + std::abs(lhs)));
      if (spec.frame) {
        const auto vs = eval_frame(*spec.frame, x);
        Eigen::MatrixXd A(d, vs.size());
        for (std::size_t c = 0; c < vs.size(); ++c) A.col(c) = vs[c];
        const Eigen::VectorXd v = kernel_apply(spec, x, y, p);
        const Eigen::VectorXd coef = A.completeOrthogonalDecomposition().solve(v);
        CHECK((A * coef - v).norm() < 1e-12);
      }
    }
  }
}

TEST_CASE("gram_matrix examples") {
  const KernelSpec full = KernelSpec::full(0.5);
  const Eigen::MatrixXd g1 = gram_matrix(full, {make_point({0.2, 0.3, 0.4})});
  CHECK((g1 - Eigen::MatrixXd::Identity(3, 3)).norm() == 0.0);

  const double sigma = 0.8;
  const Eigen::MatrixXd g2 = gram_matrix(KernelSpec::full(sigma), {make_point({0.0}), make_point({std::sqrt(2 * sigma)})});
  CHECK(g2(0, 0) == 1.0);
  CHECK(g2(1, 1) == 1.0);
  CHECK(g2(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(g2(1, 0) == g2(0, 1));

  CHECK_THROWS_AS(gram_matrix(full, {make_point({0, 0}), make_point({0, 0})}), DegenerateConfiguration);
  CHECK_THROWS_AS(gram_matrix(full, {make_point({0, 0}), make_point({1e-12, 0})}), DegenerateConfiguration);
}

TEST_CASE("gram_matrix PSD and symmetric on 100 random configurations per mode") {
  DeterministicRng rng(101);
  for (int mode = 0; mode < 4; ++mode) {
    double worst = 0.0, asym = 0.0, full_min = 1.0;
    for (int k = 0; k < 100; ++k) {
      const int n = 1 + rng.index(8);
      int d = 2;
      KernelSpec spec;
      if (mode == 0) {
        d = 1 + rng.index(3);
        spec = KernelSpec::full(rng.uniform(0.1, 2.0));
      } else if (mode == 1) {
        d = 3;
        spec = KernelSpec::constrained(rng.uniform(0.1, 2.0), "heisenberg");
      } else if (mode == 2) {
        spec = KernelSpec::constrained(rng.uniform(0.1, 2.0), "grushin");
      } else {
        spec = KernelSpec::constrained(rng.uniform(0.1, 2.0), "torus_sine");
      }
      const Points pts = random_landmarks(rng, n, d, -1.0, 1.0, 0.05);
      const Eigen::MatrixXd G = gram_matrix(spec, pts);
      asym = std::max(asym, (G - G.transpose()).cwiseAbs().maxCoeff());
      const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(G).eigenvalues();
      worst = std::min(worst, ev.minCoeff());
      if (mode == 0) full_min = std::min(full_min, ev.minCoeff());

      // rkhs_norm_sq agrees with the Gram quadratic form and is nonnegative
      DiracMomentum mom;
      mom.points = pts;
      Eigen::VectorXd flat(n * d);
      for (int i = 0; i < n; ++i) {
        mom.covectors.push_back(rng.uniform_point(d, -2, 2));
        flat.segment(i * d, d) = mom.covectors.back();
      }
      const double nsq = rkhs_norm_sq(spec, mom);
      const double quad = flat.dot(G * flat);
      CHECK(nsq >= 0.0);
      CHECK(std::abs(nsq - quad) <= 1e-12 * std::max(1.0, std::abs(quad)));
    }
    CHECK(asym == 0.0);
    CHECK(worst >= -1e-12);
    if (mode == 0) CHECK(full_min > 0.0);
  }
}

TEST_CASE("gram_matrix parallel path is bitwise identical to serial") {
  DeterministicRng rng(5);
  for (const auto& spec : {KernelSpec::full(0.3), KernelSpec::constrained(0.3, "heisenberg")}) {
    const Points pts = random_landmarks(rng, 60, 3, -1.0, 1.0, 0.01);
    const Eigen::MatrixXd a = gram_matrix(spec, pts, Exec::Serial);
    const Eigen::MatrixXd b = gram_matrix(spec, pts, Exec::Parallel);
    CHECK(a.size() == b.size());
    CHECK(std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0);
  }
}

TEST_CASE("rkhs_norm_sq examples") {
  const Point a = make_point({0.3, -0.4});
  DiracMomentum one{{make_point({1.0, 2.0})}, {a}};
  CHECK(rkhs_norm_sq(KernelSpec::full(0.4), one) == doctest::Approx(a.dot(a)).epsilon(1e-15));

  DiracMomentum zero{{make_point({0, 0}), make_point({1, 0})}, {make_point({0, 0}), make_point({0, 0})}};
  CHECK(rkhs_norm_sq(KernelSpec::full(1.0), zero) == 0.0);

  DiracMomentum two{{make_point({0.0}), make_point({10.0})}, {make_point({1.0}), make_point({1.0})}};
  const double expected = 2.0 + 2.0 * std::exp(-50.0);
  const Eigen::MatrixXd G = gram_matrix(KernelSpec::full(1.0), two.points);
  const Eigen::Vector2d p(1.0, 1.0);
  CHECK(std::abs(rkhs_norm_sq(KernelSpec::full(1.0), two) - p.dot(G * p)) <= 1e-12);
  CHECK(std::abs(rkhs_norm_sq(KernelSpec::full(1.0), two) - expected) <= 1e-12);
}

TEST_CASE("dirac momentum validation") {
  DiracMomentum empty;
  CHECK_THROWS_AS(empty.validate(), InvalidInput);
  DiracMomentum mismatched{{make_point({0, 0})}, {}};
  CHECK_THROWS_AS(mismatched.validate(), InvalidInput);
  DiracMomentum dup{{make_point({0, 0}), make_point({0, 0})}, {make_point({1, 0}), make_point({1, 0})}};
  CHECK_THROWS_AS(dup.validate(), DegenerateConfiguration);
}
