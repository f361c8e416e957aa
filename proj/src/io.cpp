#include "bbtf/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <system_error>

namespace bbtf {

namespace {

std::ofstream open_out(const std::filesystem::path &path) {
  std::error_code ec;
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path(), ec);
  if (ec)
    throw IoError("cannot create directory for " + path.string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot read " + path.string());
  return in;
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos)
    return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos)
      return out;
    start = comma + 1;
  }
}

bool blank(std::string_view line) { return trim(line).empty(); }

// Reads the header and the remaining numeric rows of a CSV.
std::vector<std::vector<double>> read_table(const std::filesystem::path &path,
                                            const std::vector<std::string> &header) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line))
    throw ParseError(path.string() + ": empty file");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
    line.erase(0, 3);
  const auto names = split(line);
  if (names.size() != header.size())
    throw ParseError(path.string() + ": expected header " + [&] {
      std::string h;
      for (const auto &s : header)
        h += (h.empty() ? "" : ",") + s;
      return h;
    }());
  for (std::size_t j = 0; j < header.size(); ++j)
    if (names[j] != header[j])
      throw ParseError(path.string() + ": unexpected column '" +
                       std::string(names[j]) + "'");

  std::vector<std::vector<double>> cols(header.size());
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line))
      continue;
    const auto fields = split(line);
    if (fields.size() != header.size())
      throw ParseError(path.string() + ":" + std::to_string(lineno) +
                       ": wrong number of fields");
    for (std::size_t j = 0; j < fields.size(); ++j) {
      try {
        cols[j].push_back(parse_double(fields[j]));
      } catch (const ParseError &e) {
        throw ParseError(path.string() + ":" + std::to_string(lineno) + ": " +
                         e.what());
      }
    }
  }
  return cols;
}

std::uint64_t fnv1a(std::istream &in) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[4096];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

} // namespace

std::string format_double(double v) {
  if (std::isnan(v))
    return "nan";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double parse_double(std::string_view text) {
  text = trim(text);
  if (text == "nan" || text == "NaN")
    return std::nan("");
  if (!text.empty() && text.front() == '+')
    text.remove_prefix(1);
  double v = 0.0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || r.ec != std::errc() || r.ptr != text.data() + text.size())
    throw ParseError("not a number: '" + std::string(text) + "'");
  return v;
}

Dataset read_dataset_csv(const std::filesystem::path &path) {
  auto cols = read_table(path, {"x", "y"});
  if (cols[0].empty())
    throw ParseError(path.string() + ": no data rows");
  for (const auto &c : cols)
    for (double v : c)
      if (!std::isfinite(v))
        throw ParseError(path.string() + ": non-finite value");
  return Dataset(std::move(cols[0]), std::move(cols[1]));
}

void write_dataset_csv(const std::filesystem::path &path, const Dataset &data) {
  std::ofstream out = open_out(path);
  out << "x,y\n";
  for (std::size_t i = 0; i < data.size(); ++i)
    out << format_double(data.x()[i]) << ',' << format_double(data.y()[i])
        << '\n';
}

void write_summary_csv(const std::filesystem::path &path, const Dataset &data,
                       const PosteriorSummary &summary) {
  if (summary.mean.size() != data.size())
    throw DimensionError("summary and data lengths differ");
  std::ofstream out = open_out(path);
  out << "x,y,mean,lo,hi,ess\n";
  for (std::size_t i = 0; i < data.size(); ++i)
    out << format_double(data.x()[i]) << ',' << format_double(data.y()[i])
        << ',' << format_double(summary.mean[i]) << ','
        << format_double(summary.lower[i]) << ','
        << format_double(summary.upper[i]) << ','
        << format_double(summary.ess[i]) << '\n';
}

SummaryTable read_summary_csv(const std::filesystem::path &path) {
  auto c = read_table(path, {"x", "y", "mean", "lo", "hi", "ess"});
  return {std::move(c[0]), std::move(c[1]), std::move(c[2]),
          std::move(c[3]), std::move(c[4]), std::move(c[5])};
}

void write_draws_csv(const std::filesystem::path &path,
                     const PosteriorDraws &draws) {
  std::ofstream out = open_out(path);
  const bool tau = !draws.tau2.empty();
  const bool gam = !draws.gamma2.empty();
  const bool rho = !draws.rho2.empty();
  out << "draw,sigma2";
  if (tau)
    out << ",tau2";
  if (gam)
    out << ",gamma2";
  if (rho)
    out << ",rho2";
  for (std::size_t i = 0; i < draws.n; ++i)
    out << ",theta_" << i + 1;
  out << '\n';
  for (std::size_t d = 0; d < draws.m; ++d) {
    out << d << ',' << format_double(draws.sigma2[d]);
    if (tau)
      out << ',' << format_double(draws.tau2[d]);
    if (gam)
      out << ',' << format_double(draws.gamma2[d]);
    if (rho)
      out << ',' << format_double(draws.rho2[d]);
    for (std::size_t i = 0; i < draws.n; ++i)
      out << ',' << format_double(draws.theta_at(d, i));
    out << '\n';
  }
}

std::string file_checksum(const std::filesystem::path &path) {
  std::ifstream in = open_in(path);
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << fnv1a(in);
  return s.str();
}

namespace {

std::string flag_name(PriorKind p) {
  switch (p) {
  case PriorKind::horseshoe:
    return "hs";
  case PriorKind::laplace:
    return "lap";
  case PriorKind::normal:
    return "nor";
  }
  return "hs";
}

std::string flag_name(ShapeConstraint c) {
  switch (c) {
  case ShapeConstraint::none:
    return "none";
  case ShapeConstraint::increasing:
    return "ni-inc";
  case ShapeConstraint::decreasing:
    return "ni-dec";
  case ShapeConstraint::convex:
    return "convex";
  case ShapeConstraint::concave:
    break;
  }
  throw DomainError("nearly-concave fits are not exposed as a flag");
}

} // namespace

Manifest fit_manifest(const FitConfig &config, const std::string &input,
                      const std::string &checksum, const PosteriorDraws &draws) {
  const Hyperparameters &h = config.hyper;
  return {
      {"version", kVersion},
      {"input", input},
      {"input-fnv1a", checksum},
      {"seed", std::to_string(config.seed)},
      {"order", std::to_string(config.order)},
      {"prior", flag_name(config.prior)},
      {"constraint", flag_name(config.constraint)},
      {"side", to_string(config.side)},
      {"eta", format_double(config.eta)},
      {"iters", std::to_string(config.schedule.iterations)},
      {"burnin", std::to_string(config.schedule.burn_in)},
      {"thin", std::to_string(config.schedule.thin)},
      {"grid-scale", format_double(config.grid_scale)},
      {"a-sigma", format_double(h.a_sigma)},
      {"b-sigma", format_double(h.b_sigma)},
      {"a-rho", format_double(h.a_rho)},
      {"b-rho", format_double(h.b_rho)},
      {"a-u", format_double(h.a_u)},
      {"b-u", format_double(h.b_u)},
      {"a-gamma", format_double(h.a_gamma)},
      {"b-gamma", format_double(h.b_gamma)},
      {"a-tau", format_double(h.a_tau)},
      {"b-tau", format_double(h.b_tau)},
      {"retained", std::to_string(draws.m)},
      {"seconds", format_double(draws.seconds)},
  };
}

void write_manifest(const std::filesystem::path &path, const Manifest &manifest) {
  std::ofstream out = open_out(path);
  for (const auto &[k, v] : manifest)
    out << k << '=' << v << '\n';
}

Manifest read_manifest(const std::filesystem::path &path) {
  std::ifstream in = open_in(path);
  Manifest m;
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view t = trim(line);
    if (t.empty() || t.front() == '#')
      continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string_view::npos)
      throw ParseError(path.string() + ": expected key=value, got '" +
                       std::string(t) + "'");
    m[std::string(trim(t.substr(0, eq)))] = std::string(trim(t.substr(eq + 1)));
  }
  return m;
}

void write_metrics_csv(const std::filesystem::path &path,
                       const std::vector<MethodResult> &results) {
  std::ofstream out = open_out(path);
  out << "method,rmse_mean,rmse_sd,al,cp\n";
  for (const auto &r : results) {
    out << r.method.name << ',' << format_double(r.rmse_mean) << ',';
    if (std::isfinite(r.rmse_sd))
      out << format_double(r.rmse_sd);
    out << ',' << format_double(r.al) << ',' << format_double(r.cp) << '\n';
  }
}

void write_replications_csv(const std::filesystem::path &path,
                            const std::vector<MethodResult> &results) {
  std::ofstream out = open_out(path);
  out << "method,rep,ok,rmse,al,cp,feasible_fraction,max_violation,error\n";
  for (const auto &r : results)
    for (const auto &rec : r.records) {
      out << r.method.name << ',' << rec.rep << ',' << (rec.ok ? 1 : 0);
      if (rec.ok)
        out << ',' << format_double(rec.metrics.rmse) << ','
            << format_double(rec.metrics.al) << ','
            << format_double(rec.metrics.cp) << ','
            << format_double(rec.feasibility.fraction) << ','
            << format_double(rec.feasibility.max_violation) << ',';
      else
        out << ",,,,,,";
      std::string msg = rec.error;
      for (char &c : msg)
        if (c == ',' || c == '\n')
          c = ' ';
      out << msg << '\n';
    }
}

void write_bench_csv(const std::filesystem::path &path,
                     const std::vector<BenchRow> &rows) {
  std::ofstream out = open_out(path);
  out << "n,sampler,seconds,mean_ess,reps,failures\n";
  for (const auto &r : rows)
    out << r.n << ',' << r.sampler << ',' << format_double(r.seconds) << ','
        << format_double(r.mean_ess) << ',' << r.reps << ',' << r.failures
        << '\n';
}

void write_trace_csv(const std::filesystem::path &path, const TraceExport &trace) {
  std::ofstream out = open_out(path);
  out << "draw,value,lag,acf\n";
  const std::size_t rows = std::max(trace.trace.size(), trace.acf.size());
  for (std::size_t i = 0; i < rows; ++i) {
    if (i < trace.trace.size())
      out << i << ',' << format_double(trace.trace[i]);
    else
      out << ',';
    out << ',';
    if (i < trace.acf.size())
      out << i << ',' << format_double(trace.acf[i]);
    else
      out << ',';
    out << '\n';
  }
}

void write_eta_csv(const std::filesystem::path &path,
                   const std::vector<EtaRun> &runs) {
  std::ofstream out = open_out(path);
  out << "eta,rep,rmse\n";
  for (const auto &r : runs) {
    out << format_double(r.eta) << ',' << r.rep << ',';
    if (r.ok)
      out << format_double(r.rmse);
    out << '\n';
  }
}

void write_geweke_csv(const std::filesystem::path &path,
                      const GewekeReport &report) {
  std::ofstream out = open_out(path);
  out << "statistic,ks,pvalue,ess\n";
  for (const auto &s : report.statistics)
    out << s.name << ',' << format_double(s.ks_statistic) << ','
        << format_double(s.pvalue) << ',' << format_double(s.ess) << '\n';
}

} // namespace bbtf
