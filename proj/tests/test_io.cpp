#include "bbtf/io.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

using namespace bbtf;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("bbtf_io_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)) +
            std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path file(const std::string &name, const std::string &content) const {
    const fs::path p = path / name;
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }
};

} // namespace

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0, -0.0,
                   std::numeric_limits<double>::max(),
                   std::numeric_limits<double>::denorm_min()}) {
    CHECK(parse_double(format_double(v)) == v);
    CHECK(std::signbit(parse_double(format_double(v))) == std::signbit(v));
  }
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(std::isnan(parse_double("nan")));
  CHECK(parse_double("+1.5") == 1.5);
  CHECK(parse_double(" 2 ") == 2.0);
  CHECK_THROWS_AS(parse_double("abc"), ParseError);
  CHECK_THROWS_AS(parse_double("1.5x"), ParseError);
  CHECK_THROWS_AS(parse_double(""), ParseError);
}

TEST_CASE("dataset CSV") {
  TempDir t;
  const Dataset d({1.0, 2.5, 1e3}, {0.1, -1.0 / 3.0, 7e-12});
  write_dataset_csv(t.path / "d.csv", d);
  const Dataset back = read_dataset_csv(t.path / "d.csv");
  CHECK(back.x() == d.x());
  CHECK(back.y() == d.y());

  CHECK(read_dataset_csv(t.file("bom.csv", "\xEF\xBB\xBFx,y\r\n1,2\r\n\r\n3,4\n")).size() == 2);
  CHECK_THROWS_AS(read_dataset_csv(t.path / "missing.csv"), IoError);
  CHECK_THROWS_AS(read_dataset_csv(t.file("h.csv", "a,b\n1,2\n")), ParseError);
  CHECK_THROWS_AS(read_dataset_csv(t.file("e.csv", "")), ParseError);
  CHECK_THROWS_AS(read_dataset_csv(t.file("n.csv", "x,y\n1,abc\n")), ParseError);
  CHECK_THROWS_AS(read_dataset_csv(t.file("nan.csv", "x,y\n1,nan\n2,1\n")), ParseError);
  CHECK_THROWS_AS(read_dataset_csv(t.file("inf.csv", "x,y\n1,inf\n2,1\n")), ParseError);
  CHECK_THROWS_AS(read_dataset_csv(t.file("c.csv", "x,y\n1,2,3\n")), ParseError);
  CHECK_THROWS_AS(read_dataset_csv(t.file("o.csv", "x,y\n2,1\n1,1\n")), OrderingError);
  CHECK_THROWS_AS(read_dataset_csv(t.file("dup.csv", "x,y\n1,1\n1,2\n")), OrderingError);
}

TEST_CASE("summary CSV round trip at full precision") {
  TempDir t;
  const Dataset d({1, 2, 3}, {0.5, 0.25, 1.0 / 7.0});
  PosteriorSummary s;
  s.mean = {1.0 / 3.0, 2.0 / 3.0, std::sqrt(2.0)};
  s.lower = {0.1, 0.2, 0.3000000000000001};
  s.upper = {1e-17, 5e300, 7.0};
  s.ess = {123.456, std::nan(""), 2000};
  write_summary_csv(t.path / "s.csv", d, s);
  const SummaryTable r = read_summary_csv(t.path / "s.csv");
  CHECK(r.x == d.x());
  CHECK(r.y == d.y());
  CHECK(r.mean == s.mean);
  CHECK(r.lo == s.lower);
  CHECK(r.hi == s.upper);
  CHECK(r.ess[0] == s.ess[0]);
  CHECK(std::isnan(r.ess[1]));
  std::ifstream in(t.path / "s.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "x,y,mean,lo,hi,ess");
}

TEST_CASE("draws CSV columns") {
  TempDir t;
  PosteriorDraws d;
  d.n = 2;
  d.m = 2;
  d.theta = {1, 2, 3, 4};
  d.sigma2 = {0.5, 0.6};
  d.gamma2 = {1.5, 1.6};
  d.rho2 = {2.5, 2.6};
  write_draws_csv(t.path / "d.csv", d);
  std::ifstream in(t.path / "d.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "draw,sigma2,gamma2,rho2,theta_1,theta_2");
  std::getline(in, line);
  CHECK(line == "0,0.5,1.5,2.5,1,2");
}

TEST_CASE("manifest and checksum") {
  TempDir t;
  const fs::path a = t.file("a.txt", "a");
  CHECK(file_checksum(a) == "af63dc4c8601ec8c");
  CHECK(file_checksum(t.file("empty.txt", "")) == "cbf29ce484222325");

  FitConfig cfg;
  cfg.seed = 42;
  cfg.prior = PriorKind::laplace;
  cfg.constraint = ShapeConstraint::decreasing;
  cfg.hyper.b_tau = 0.3;
  PosteriorDraws draws;
  draws.m = 2000;
  const Manifest m = fit_manifest(cfg, "in.csv", "0123", draws);
  write_manifest(t.path / "m.txt", m);
  const Manifest back = read_manifest(t.path / "m.txt");
  CHECK(back == m);
  CHECK(back.at("seed") == "42");
  CHECK(back.at("prior") == "lap");
  CHECK(back.at("constraint") == "ni-dec");
  CHECK(back.at("b-tau") == "0.3");
  CHECK(back.at("iters") == "10500");

  const Manifest c = read_manifest(t.file("c.txt", "# comment\n\nseed = 5\n"));
  CHECK(c.at("seed") == "5");
  CHECK_THROWS_AS(read_manifest(t.file("bad.txt", "seed 5\n")), ParseError);
}

TEST_CASE("result tables") {
  TempDir t;
  MethodResult r;
  r.method = parse_method("hsni");
  r.rmse_mean = 0.1;
  r.rmse_sd = std::nan("");
  r.al = 0.3;
  r.cp = 0.95;
  ReplicationRecord rec;
  rec.ok = true;
  rec.metrics.rmse = 0.1;
  r.records.push_back(rec);
  write_metrics_csv(t.path / "m.csv", {r});
  std::ifstream in(t.path / "m.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "method,rmse_mean,rmse_sd,al,cp");
  std::getline(in, line);
  CHECK(line == "hsni,0.1,,0.3,0.95");
  write_replications_csv(t.path / "r.csv", {r});
  CHECK(fs::file_size(t.path / "r.csv") > 0);
  write_metrics_csv(t.path / "new" / "dir" / "m.csv", {r});
  CHECK(fs::exists(t.path / "new" / "dir" / "m.csv"));
  const fs::path blocker = t.file("blocker", "x");
  CHECK_THROWS_AS(write_metrics_csv(blocker / "m.csv", {r}), IoError);
}
