#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "ils/errors.hpp"
#include "ils/matrix.hpp"
#include "ils/search.hpp"

namespace ils {

/// Shortest decimal string that parses back to exactly the same double
/// (at most 17 significant digits).
inline std::string format_real(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

/// Same, but integral values keep a decimal point ("1.0", not "1"). Used for
/// the human-facing q and defect figures.
inline std::string format_real_pointed(double x) {
  std::string s = format_real(x);
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
    s += ".0";
  return s;
}

/// Problem file:
///   ILS n=<dim>
///   <n rows of n reals>
///   vhat: <n reals>     (optional)
struct MatrixFile {
  Matrix q;
  std::optional<std::vector<double>> vhat;
};

namespace io_detail {

inline double parse_real(const std::string& tok, const char* where) {
  double x = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw ParseError(std::string("bad real '") + tok + "' in " + where);
  return x;
}

inline std::int64_t parse_int(const std::string& tok, const char* where) {
  std::int64_t x = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw ParseError(std::string("bad integer '") + tok + "' in " + where);
  return x;
}

inline int parse_header(std::istream& in, const char* where) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(std::string("empty ") + where);
  std::istringstream hs(line);
  std::string magic, nfield;
  hs >> magic >> nfield;
  if (magic != "ILS" || nfield.rfind("n=", 0) != 0)
    throw ParseError(std::string("missing 'ILS n=<dim>' header in ") + where);
  const std::int64_t n = parse_int(nfield.substr(2), where);
  if (n < 1 || n > 100000)
    throw ParseError(std::string("implausible dimension in ") + where);
  return static_cast<int>(n);
}

}  // namespace io_detail

inline MatrixFile read_matrix_file(std::istream& in) {
  const int n = io_detail::parse_header(in, "matrix file");
  Matrix q(n, n);
  std::string tok;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!(in >> tok)) throw ParseError("matrix file truncated");
      q(i, j) = io_detail::parse_real(tok, "matrix file");
    }
  MatrixFile out{std::move(q), std::nullopt};
  if (in >> tok) {
    if (tok != "vhat:") throw ParseError("expected 'vhat:' line, got '" + tok + "'");
    std::vector<double> vhat(n);
    for (int i = 0; i < n; ++i) {
      if (!(in >> tok)) throw ParseError("vhat line truncated");
      vhat[i] = io_detail::parse_real(tok, "vhat line");
    }
    if (in >> tok) throw ParseError("trailing content after vhat");
    out.vhat = std::move(vhat);
  }
  return out;
}

inline void write_matrix_file(std::ostream& os, const Matrix& q,
                              const std::vector<double>* vhat = nullptr) {
  os << "ILS n=" << q.rows() << "\n";
  for (int i = 0; i < q.rows(); ++i) {
    for (int j = 0; j < q.cols(); ++j) {
      if (j) os << ' ';
      os << format_real(q(i, j));
    }
    os << "\n";
  }
  if (vhat) {
    os << "vhat:";
    for (const double x : *vhat) os << ' ' << format_real(x);
    os << "\n";
  }
}

/// Integer transform file: same header, n rows of n integers.
inline void write_int_matrix(std::ostream& os, const IntMatrix& m) {
  os << "ILS n=" << m.rows() << "\n";
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      os << m(i, j);
    }
    os << "\n";
  }
}

inline IntMatrix read_int_matrix(std::istream& in) {
  const int n = io_detail::parse_header(in, "transform file");
  IntMatrix m(n, n);
  std::string tok;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!(in >> tok)) throw ParseError("transform file truncated");
      m(i, j) = io_detail::parse_int(tok, "transform file");
    }
  return m;
}

/// Diagonal file: same header, one row of n reals.
inline void write_diagonal(std::ostream& os, std::span<const double> d) {
  os << "ILS n=" << d.size() << "\n";
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i) os << ' ';
    os << format_real(d[i]);
  }
  os << "\n";
}

inline std::vector<double> read_diagonal(std::istream& in) {
  const int n = io_detail::parse_header(in, "diagonal file");
  std::vector<double> d(n);
  std::string tok;
  for (int i = 0; i < n; ++i) {
    if (!(in >> tok)) throw ParseError("diagonal file truncated");
    d[i] = io_detail::parse_real(tok, "diagonal file");
  }
  return d;
}

/// Solver output: one stats comment, then one solution per line,
/// q non-decreasing.
inline void write_result_record(std::ostream& os, const SolveResult& res,
                                double defect_before, double defect_after) {
  os << "# stats nodes=" << res.stats.nodes
     << " next_calls=" << res.stats.next_calls
     << " defect_before=" << format_real_pointed(defect_before)
     << " defect_after=" << format_real_pointed(defect_after) << "\n";
  for (const Solution& sol : res.solutions) {
    os << "q=" << format_real_pointed(sol.q) << " v=[";
    for (std::size_t i = 0; i < sol.v.size(); ++i) {
      if (i) os << ' ';
      os << sol.v[i];
    }
    os << "]\n";
  }
}

}  // namespace ils
