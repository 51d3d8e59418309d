#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include <doctest.h>

#include "uogp/bound.hpp"
#include "uogp/rdtlink.hpp"

using namespace uogp;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("embedded lifting estimates") {
  const auto& fixtures = rdt_fixtures();
  REQUIRE(fixtures.size() == 7);
  const double alphas[] = {4.2250, 1.8159, 1.6576, 1.6218,
                           1.6093, 1.6041, 1.6021};
  for (int i = 0; i < 7; ++i) {
    CHECK(fixtures[i].r == i + 1);
    CHECK(fixtures[i].alpha_c_r == doctest::Approx(alphas[i]));
  }
  CHECK(rdt_fixture(3).p_hat == std::vector<double>{1.0, 0.9852});
  CHECK(rdt_fixture(3).c_hat == std::vector<double>{1.0, 4.2629});
  CHECK(rdt_fixture(4).c_hat ==
        std::vector<double>{1.0, 4.1522, 12.0786});
  CHECK(rdt_fixture(5).p_hat ==
        std::vector<double>{1.0, 0.9985, 0.9965, 0.9627});
  CHECK(rdt_fixture(5).c_hat ==
        std::vector<double>{1.0, 4.3528, 12.7310, 29.6479});
  CHECK(rdt_fixture(2).p_hat.empty());
  CHECK(code_of([] { rdt_fixture(0); }) == ErrorCode::NoFixture);
  CHECK(code_of([] { rdt_fixture(8); }) == ErrorCode::NoFixture);
}

TEST_CASE("cluster-size suggestion from ratio sequences") {
  CHECK(suggest_k_from_c({1, 4.3528, 12.7310, 29.6479}).k ==
        std::vector<int>{1, 4, 12, 24});
  CHECK(suggest_k_from_c({1, 4.2629}).k == std::vector<int>{1, 4});
  CHECK(suggest_k_from_c({1, 2, 4}).k == std::vector<int>{1, 2, 4});
  // Half-way ratios round away from zero.
  CHECK(suggest_k_from_c({1, 2.5}).k == std::vector<int>{1, 3});
  CHECK(code_of([] { suggest_k_from_c({1, 0.3}); }) == ErrorCode::ZeroRatio);
  CHECK(code_of([] { suggest_k_from_c({1, 1.2}); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([] { suggest_k_from_c({2, 4}); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([] { suggest_k_from_c({1, -2.0}); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([] { suggest_k_from_c({}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("side-by-side comparison against the level-3 estimate") {
  const auto spec = make_spec({1, 4}, {0.984}, 1.0);
  const BoundResult best = alpha_bar(spec);
  const ComparisonReport rep = comparison_report(1, best);
  CHECK(rep.s == 1);
  CHECK(rep.r == 3);
  CHECK(rep.alpha_rdt == doctest::Approx(1.6576));
  CHECK(rep.alpha_bound == doctest::Approx(best.alpha_bar));
  CHECK(rep.delta ==
        doctest::Approx(best.alpha_bar - 1.6576).epsilon(1e-12));
  CHECK(std::abs(rep.delta) < 5e-4);
  CHECK(rep.q == std::vector<double>{1.0, 0.984});
  CHECK(rep.k == std::vector<double>{1.0, 4.0});
  CHECK(rep.p_hat == rdt_fixture(3).p_hat);
  CHECK(rep.c_hat == rdt_fixture(3).c_hat);
  // This bound sits just above the estimate.
  CHECK_FALSE(rep.conjectured_direction);
}

TEST_CASE("comparison rejects mismatched or missing levels") {
  const auto spec = make_spec({1, 4}, {0.984}, 1.0);
  const BoundResult best = alpha_bar(spec);
  CHECK(code_of([&] { comparison_report(2, best); }) ==
        ErrorCode::InvalidArgument);

  BoundResult deep;
  deep.spec = make_spec({1, 2, 4, 8, 16, 32, 64},
                        {0.9, 0.8, 0.7, 0.6, 0.5, 0.4}, 1.0);
  deep.alpha_bar = 1.5;
  CHECK(code_of([&] { comparison_report(6, deep); }) == ErrorCode::NoFixture);
}

TEST_CASE("fixture digest is stable against its data file") {
  // The canonical file shipped with the tests must match the embedded
  // constants bit for bit after parsing.
  verify_fixture_file(UOGP_TEST_DATA_DIR "/rdt_lifting.txt");
}

TEST_CASE("fixture file round-trip and tamper detection") {
  const auto good = temp_file("uogp_fixture_roundtrip.txt");
  {
    std::ofstream out(good);
    write_fixture_file(out);
  }
  verify_fixture_file(good.string());

  const auto bad = temp_file("uogp_fixture_tampered.txt");
  {
    std::ifstream in(good);
    std::ofstream out(bad);
    std::string line;
    while (std::getline(in, line)) {
      if (line.find("r 3") == 0) {
        out << "r 3 alpha 1.6577 p 1.0000 0.9852 c 1.0000 4.2629\n";
      } else {
        out << line << '\n';
      }
    }
  }
  CHECK(code_of([&] { verify_fixture_file(bad.string()); }) ==
        ErrorCode::FixtureMismatch);
  CHECK(code_of([] { verify_fixture_file("/nonexistent/fixtures.txt"); }) ==
        ErrorCode::NoFixture);
  std::filesystem::remove(good);
  std::filesystem::remove(bad);
}
