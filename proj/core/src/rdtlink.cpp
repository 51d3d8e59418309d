#include "uogp/rdtlink.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "uogp/errors.hpp"

namespace uogp {
namespace {

std::vector<RdtLiftingFixture> make_fixtures() {
  return {
      {1, 4.2250, {}, {}},
      {2, 1.8159, {}, {}},
      {3, 1.6576, {1.0, 0.9852}, {1.0, 4.2629}},
      {4, 1.6218, {1.0, 0.9988, 0.9729}, {1.0, 4.1522, 12.0786}},
      {5,
       1.6093,
       {1.0, 0.9985, 0.9965, 0.9627},
       {1.0, 4.3528, 12.7310, 29.6479}},
      {6, 1.6041, {}, {}},
      {7, 1.6021, {}, {}},
  };
}

/// Canonical one-line form of a fixture; digest and file format share it so
/// the integrity check is insensitive to incidental whitespace.
std::string canonical_line(const RdtLiftingFixture& f) {
  std::string line = fmt::format("r {} alpha {:.4f}", f.r, f.alpha_c_r);
  if (!f.p_hat.empty()) {
    line += " p";
    for (const double v : f.p_hat) line += fmt::format(" {:.4f}", v);
  }
  if (!f.c_hat.empty()) {
    line += " c";
    for (const double v : f.c_hat) line += fmt::format(" {:.4f}", v);
  }
  return line;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t hash = 1469598103934665603ull;
  for (const unsigned char byte : text) {
    hash ^= byte;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::uint64_t digest_of(const std::vector<RdtLiftingFixture>& fixtures) {
  std::string blob;
  for (const auto& f : fixtures) {
    blob += canonical_line(f);
    blob += '\n';
  }
  return fnv1a(blob);
}

}  // namespace

const std::vector<RdtLiftingFixture>& rdt_fixtures() {
  static const std::vector<RdtLiftingFixture> fixtures = make_fixtures();
  return fixtures;
}

const RdtLiftingFixture& rdt_fixture(int r) {
  for (const auto& f : rdt_fixtures())
    if (f.r == r) return f;
  raise(ErrorCode::NoFixture,
        fmt::format("no lifting fixture for level r = {}", r));
}

ComparisonReport comparison_report(int s, const BoundResult& computed) {
  if (s != computed.spec.s)
    raise(ErrorCode::InvalidArgument,
          fmt::format("requested depth {} but the bound was computed at "
                      "depth {}",
                      s, computed.spec.s));
  const RdtLiftingFixture& fixture = rdt_fixture(s + 2);
  ComparisonReport report;
  report.s = s;
  report.r = fixture.r;
  report.alpha_bound = computed.alpha_bar;
  report.alpha_rdt = fixture.alpha_c_r;
  report.delta = report.alpha_bound - report.alpha_rdt;
  report.q.assign(computed.spec.q.q.begin(),
                  computed.spec.q.q.begin() + s + 1);
  report.p_hat = fixture.p_hat;
  report.k.assign(computed.spec.k.k.begin(), computed.spec.k.k.end());
  report.c_hat = fixture.c_hat;
  report.conjectured_direction = report.alpha_bound <= report.alpha_rdt;
  return report;
}

ClusterSequence suggest_k_from_c(const std::vector<double>& c_hat) {
  if (c_hat.empty() || std::abs(c_hat.front() - 1.0) > 1e-9)
    raise(ErrorCode::InvalidArgument,
          "ratio sequence must start at 1");
  for (const double c : c_hat)
    if (!(c > 0.0))
      raise(ErrorCode::InvalidArgument,
            fmt::format("ratio sequence must be positive, got {}", c));

  ClusterSequence k;
  k.k.reserve(c_hat.size());
  k.k.push_back(1);
  for (std::size_t i = 1; i < c_hat.size(); ++i) {
    const double ratio = c_hat[i] / c_hat[i - 1];
    const long long rounded = std::llround(ratio);  // half away from zero
    if (rounded == 0)
      raise(ErrorCode::ZeroRatio,
            fmt::format("ratio {:.4f} at position {} rounds to zero", ratio,
                        i));
    if (rounded == 1)
      raise(ErrorCode::InvalidArgument,
            fmt::format("ratio {:.4f} at position {} rounds to one; cluster "
                        "sizes must strictly increase",
                        ratio, i));
    k.k.push_back(k.k.back() * rounded);
  }
  return k;
}

std::uint64_t fixture_digest() { return digest_of(rdt_fixtures()); }

void write_fixture_file(std::ostream& out) {
  out << "# rdt-lifting fixtures v1\n";
  for (const auto& f : rdt_fixtures()) out << canonical_line(f) << '\n';
}

void verify_fixture_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    raise(ErrorCode::NoFixture,
          fmt::format("cannot open fixture file '{}'", path));

  std::vector<RdtLiftingFixture> parsed;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::istringstream fields(line);
    RdtLiftingFixture f;
    std::string tag;
    if (!(fields >> tag >> f.r) || tag != "r")
      raise(ErrorCode::NoFixture,
            fmt::format("malformed fixture line '{}'", line));
    if (!(fields >> tag >> f.alpha_c_r) || tag != "alpha")
      raise(ErrorCode::NoFixture,
            fmt::format("malformed fixture line '{}'", line));
    std::vector<double>* target = nullptr;
    while (fields >> tag) {
      if (tag == "p") {
        target = &f.p_hat;
      } else if (tag == "c") {
        target = &f.c_hat;
      } else if (target != nullptr) {
        try {
          target->push_back(std::stod(tag));
        } catch (const std::exception&) {
          raise(ErrorCode::NoFixture,
                fmt::format("malformed fixture line '{}'", line));
        }
      } else {
        raise(ErrorCode::NoFixture,
              fmt::format("malformed fixture line '{}'", line));
      }
    }
    parsed.push_back(std::move(f));
  }
  if (parsed.empty())
    raise(ErrorCode::NoFixture,
          fmt::format("fixture file '{}' holds no records", path));

  const std::uint64_t expected = fixture_digest();
  const std::uint64_t actual = digest_of(parsed);
  if (actual != expected)
    raise(ErrorCode::FixtureMismatch,
          fmt::format("fixture file '{}' digest {:016x} differs from "
                      "embedded digest {:016x}",
                      path, actual, expected));
}

}  // namespace uogp
