#include "qmarkov/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "qmarkov/errors.hpp"

namespace qmarkov {

namespace {

// Line-oriented reader that skips '#' comments and blank lines and tracks
// line numbers for error messages.
class LineReader {
public:
  LineReader(std::istream& in, std::string name)
      : in_(in), name_(std::move(name)) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++line_no_;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      while (!line.empty() && (line.back() == ' ' || line.back() == '\r' ||
                               line.back() == '\t'))
        line.pop_back();
      size_t start = 0;
      while (start < line.size() && (line[start] == ' ' || line[start] == '\t'))
        ++start;
      line.erase(0, start);
      if (!line.empty()) return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(name_ + ":" + std::to_string(line_no_) + ": " + message);
  }

  std::string require(const std::string& what) {
    std::string line;
    if (!next(line)) fail("unexpected end of input, expected " + what);
    return line;
  }

private:
  std::istream& in_;
  std::string name_;
  int line_no_ = 0;
};

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

// "<label>:<dim>" with the dimension after the last colon.
std::pair<std::string, int> parse_sized_label(LineReader& reader,
                                              const std::string& tok) {
  const auto colon = tok.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == tok.size())
    reader.fail("expected <label>:<dim>, got '" + tok + "'");
  char* end = nullptr;
  const long dim = std::strtol(tok.c_str() + colon + 1, &end, 10);
  if (*end != '\0' || dim < 1) reader.fail("bad dimension in '" + tok + "'");
  return {tok.substr(0, colon), static_cast<int>(dim)};
}

double parse_double(LineReader& reader, const std::string& tok) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0')
    reader.fail("bad number '" + tok + "'");
  return v;
}

void print_double(std::ostream& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out << buf;
}

}  // namespace

DensityOperator read_state(std::istream& in, const std::string& source_name,
                           const Tolerances& tols) {
  LineReader reader(in, source_name);
  if (reader.require("header") != "qstate v1") reader.fail("expected 'qstate v1'");

  const auto sys_toks = split_ws(reader.require("systems line"));
  if (sys_toks.empty() || sys_toks[0] != "systems")
    reader.fail("expected 'systems <label>:<dim> ...'");
  std::vector<SubSystem> systems;
  for (size_t i = 1; i < sys_toks.size(); ++i) {
    auto [label, dim] = parse_sized_label(reader, sys_toks[i]);
    systems.push_back({label, dim});
  }
  SystemLayout layout;
  try {
    layout = SystemLayout(systems);
  } catch (const LayoutError& e) {
    reader.fail(e.what());
  }

  if (reader.require("matrix line") != "matrix") reader.fail("expected 'matrix'");

  const int d = layout.total_dim();
  Matrix m(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      const auto toks = split_ws(reader.require("matrix entry"));
      if (toks.size() != 2) reader.fail("expected '<re> <im>'");
      m(r, c) = Complex(parse_double(reader, toks[0]), parse_double(reader, toks[1]));
    }
  return DensityOperator::validated(Operator(std::move(layout), std::move(m)), tols);
}

DensityOperator read_state(const std::filesystem::path& path, const Tolerances& tols) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  return read_state(in, path.filename().string(), tols);
}

void write_state(std::ostream& out, const DensityOperator& rho) {
  out << "qstate v1\n";
  out << "systems";
  for (const auto& s : rho.layout().systems()) out << ' ' << s.label << ':' << s.dim;
  out << "\nmatrix\n";
  const int d = rho.dim();
  const Matrix& m = rho.entries();
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      print_double(out, m(r, c).real());
      out << ' ';
      print_double(out, m(r, c).imag());
      out << '\n';
    }
}

void write_state(const std::filesystem::path& path, const DensityOperator& rho) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path.string() + "' for writing");
  write_state(out, rho);
}

JointPmf read_pmf(std::istream& in, const std::string& source_name) {
  LineReader reader(in, source_name);
  if (reader.require("header") != "qpmf v1") reader.fail("expected 'qpmf v1'");

  const auto toks = split_ws(reader.require("alphabets line"));
  if (toks.empty() || toks[0] != "alphabets")
    reader.fail("expected 'alphabets <label>:<size> ...'");
  std::vector<Alphabet> alphabets;
  int cells = 1;
  for (size_t i = 1; i < toks.size(); ++i) {
    auto [label, size] = parse_sized_label(reader, toks[i]);
    alphabets.push_back({label, size});
    cells *= size;
  }

  if (reader.require("probs line") != "probs") reader.fail("expected 'probs'");

  std::vector<double> probs(cells);
  for (int i = 0; i < cells; ++i) {
    const auto ptoks = split_ws(reader.require("probability"));
    if (ptoks.size() != 1) reader.fail("expected one probability per line");
    probs[i] = parse_double(reader, ptoks[0]);
  }
  try {
    return JointPmf(std::move(alphabets), std::move(probs));
  } catch (const Error& e) {
    reader.fail(e.what());
  }
}

JointPmf read_pmf(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  return read_pmf(in, path.filename().string());
}

void write_pmf(std::ostream& out, const JointPmf& pmf) {
  out << "qpmf v1\n";
  out << "alphabets";
  for (const auto& a : pmf.alphabets()) out << ' ' << a.label << ':' << a.size;
  out << "\nprobs\n";
  for (double p : pmf.probs()) {
    print_double(out, p);
    out << '\n';
  }
}

void write_pmf(const std::filesystem::path& path, const JointPmf& pmf) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path.string() + "' for writing");
  write_pmf(out, pmf);
}

}  // namespace qmarkov
