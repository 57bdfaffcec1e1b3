#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sqn/canonical_form.hpp"

namespace sqn {

/// A matrix as stored on disk. Real matrices keep zero imaginary parts; the
/// `complex` flag records which format the file used.
struct MatrixData {
  bool complex = false;
  ComplexMatrix m;

  RealMatrix real() const { return m.real(); }
};

/// Fixed 9-significant-digit formatting; the determinism contract for every
/// printed listing.
inline std::string format_sig(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x + 0.0);
  return buf;
}

inline std::string format_complex(Complex z) {
  const double re = z.real() + 0.0, im = z.imag() + 0.0;
  return format_sig(re) + (im < 0 ? "-" : "+") + format_sig(std::abs(im)) +
         "i";
}

inline std::string describe_block(const CanonicalBlock& b) {
  struct V {
    std::string operator()(const BlockLambda& l) const {
      return "Lambda lambda=" + format_complex(l.lambda);
    }
    std::string operator()(const BlockS1& s) const {
      return "S1 mu=" + format_complex(s.mu) + " r=" + format_sig(s.r);
    }
    std::string operator()(const BlockS2& s) const {
      return "S2 nu=" + format_complex(s.nu) + " tau=" + format_sig(s.tau);
    }
    std::string operator()(const BlockRealRotation& r) const {
      return "RealRotation a=" + format_sig(r.a) + " b=" + format_sig(r.b);
    }
    std::string operator()(const BlockRealS2Pair& p) const {
      return "RealS2Pair c=" + format_sig(p.c) + " d=" + format_sig(p.d) +
             " tau=" + format_sig(p.tau);
    }
  };
  return std::visit(V{}, b);
}

inline std::string describe_form(const CanonicalForm& form) {
  std::string out;
  for (const auto& b : form.blocks) out += describe_block(b) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Matrix files: JSON, with a plain whitespace fallback for real matrices
// ---------------------------------------------------------------------------

namespace detail {

inline Complex parse_entry(const nlohmann::json& e) {
  if (e.is_number()) return Complex(e.get<double>(), 0);
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
    return Complex(e[0].get<double>(), e[1].get<double>());
  throw IoError("matrix entry must be a number or [re, im]");
}

inline MatrixData parse_matrix_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw IoError(std::string("malformed JSON: ") + ex.what());
  }
  MatrixData out;
  try {
    const Index rows = j.at("rows").get<Index>();
    const Index cols = j.at("cols").get<Index>();
    out.complex = j.at("complex").get<bool>();
    const auto& data = j.at("data");
    if (rows < 0 || cols < 0 || !data.is_array() ||
        static_cast<Index>(data.size()) != rows * cols)
      throw IoError("data length does not match rows*cols");
    out.m.resize(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index k = 0; k < cols; ++k) {
        const Complex z = parse_entry(data[static_cast<size_t>(i * cols + k)]);
        if (!out.complex && z.imag() != 0)
          throw IoError("real matrix file carries an imaginary entry");
        out.m(i, k) = z;
      }
  } catch (const nlohmann::json::exception& ex) {
    throw IoError(std::string("malformed matrix object: ") + ex.what());
  }
  return out;
}

inline MatrixData parse_matrix_whitespace(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::istringstream ls(line);
    std::vector<double> row;
    double x;
    while (ls >> x) row.push_back(x);
    if (!ls.eof()) throw IoError("non-numeric token in matrix text");
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError("empty matrix file");
  const size_t cols = rows[0].size();
  for (const auto& r : rows)
    if (r.size() != cols) throw IoError("ragged rows in matrix text");
  MatrixData out;
  out.complex = false;
  out.m.resize(static_cast<Index>(rows.size()), static_cast<Index>(cols));
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t k = 0; k < cols; ++k)
      out.m(static_cast<Index>(i), static_cast<Index>(k)) =
          Complex(rows[i][k], 0);
  return out;
}

}  // namespace detail

inline MatrixData read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const size_t first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw IoError("empty matrix file");
  if (text[first] == '{') return detail::parse_matrix_json(text);
  return detail::parse_matrix_whitespace(text);
}

inline void write_matrix_file(const std::string& path, const MatrixData& md) {
  nlohmann::json j;
  j["rows"] = md.m.rows();
  j["cols"] = md.m.cols();
  j["complex"] = md.complex;
  nlohmann::json data = nlohmann::json::array();
  for (Index i = 0; i < md.m.rows(); ++i)
    for (Index k = 0; k < md.m.cols(); ++k) {
      const Complex z = md.m(i, k);
      if (md.complex)
        data.push_back({z.real(), z.imag()});
      else
        data.push_back(z.real());
    }
  j["data"] = std::move(data);
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << j.dump(1) << "\n";
  if (!out) throw IoError("write failed for " + path);
}

// ---------------------------------------------------------------------------
// Canonical-form files (sidecar schema)
// ---------------------------------------------------------------------------

inline nlohmann::json form_to_json(const CanonicalForm& form) {
  nlohmann::json blocks = nlohmann::json::array();
  struct V {
    nlohmann::json operator()(const BlockLambda& l) const {
      return {{"type", "lambda"},
              {"re", l.lambda.real()},
              {"im", l.lambda.imag()}};
    }
    nlohmann::json operator()(const BlockS1& s) const {
      return {{"type", "s1"},
              {"mu_re", s.mu.real()},
              {"mu_im", s.mu.imag()},
              {"r", s.r}};
    }
    nlohmann::json operator()(const BlockS2& s) const {
      return {{"type", "s2"},
              {"nu_re", s.nu.real()},
              {"nu_im", s.nu.imag()},
              {"tau", s.tau}};
    }
    nlohmann::json operator()(const BlockRealRotation& r) const {
      return {{"type", "rotation"}, {"a", r.a}, {"b", r.b}};
    }
    nlohmann::json operator()(const BlockRealS2Pair& p) const {
      return {{"type", "s2pair"}, {"c", p.c}, {"d", p.d}, {"tau", p.tau}};
    }
  };
  for (const auto& b : form.blocks) blocks.push_back(std::visit(V{}, b));
  return {{"flavor", flavor_name(form.flavor)}, {"blocks", std::move(blocks)}};
}

inline CanonicalForm form_from_json(const nlohmann::json& j) {
  CanonicalForm form;
  try {
    const std::string flavor = j.at("flavor").get<std::string>();
    if (flavor == "a")
      form.flavor = Flavor::ComplexA;
    else if (flavor == "b")
      form.flavor = Flavor::ComplexB;
    else if (flavor == "real")
      form.flavor = Flavor::Real;
    else
      throw IoError("unknown flavor " + flavor);
    for (const auto& b : j.at("blocks")) {
      const std::string type = b.at("type").get<std::string>();
      if (type == "lambda")
        form.blocks.emplace_back(BlockLambda(
            Complex(b.at("re").get<double>(), b.at("im").get<double>())));
      else if (type == "s1")
        form.blocks.emplace_back(
            BlockS1(Complex(b.at("mu_re").get<double>(),
                            b.at("mu_im").get<double>()),
                    b.at("r").get<double>()));
      else if (type == "s2")
        form.blocks.emplace_back(
            BlockS2(Complex(b.at("nu_re").get<double>(),
                            b.at("nu_im").get<double>()),
                    b.at("tau").get<double>()));
      else if (type == "rotation")
        form.blocks.emplace_back(BlockRealRotation(b.at("a").get<double>(),
                                                   b.at("b").get<double>()));
      else if (type == "s2pair")
        form.blocks.emplace_back(BlockRealS2Pair(b.at("c").get<double>(),
                                                 b.at("d").get<double>(),
                                                 b.at("tau").get<double>()));
      else
        throw IoError("unknown block type " + type);
    }
  } catch (const nlohmann::json::exception& ex) {
    throw IoError(std::string("malformed form object: ") + ex.what());
  } catch (const std::invalid_argument& ex) {
    throw IoError(std::string("invalid block parameters: ") + ex.what());
  }
  return form;
}

inline void write_form_file(const std::string& path,
                            const CanonicalForm& form) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << form_to_json(form).dump(1) << "\n";
  if (!out) throw IoError("write failed for " + path);
}

inline CanonicalForm read_form_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw IoError(std::string("malformed JSON: ") + ex.what());
  }
  return form_from_json(j);
}

}  // namespace sqn
