#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include <sqn/sqn.hpp>

using namespace sqn;

namespace {

std::string tmp_path(const std::string& name) {
  return "/tmp/sqn_io_test_" + name;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("nine significant digits, signed zero collapsed") {
  CHECK(format_sig(2) == "2");
  CHECK(format_sig(1.0 / 3) == "0.333333333");
  CHECK(format_sig(-0.0) == "0");
  CHECK(format_sig(1e10) == "1e+10");
  CHECK(format_sig(0.3819660112501051) == "0.381966011");
  CHECK(format_sig(1.618033988749895) == "1.61803399");
}

TEST_CASE("complex formatting uses a signed imaginary suffix") {
  CHECK(format_complex(Complex(1, 0)) == "1+0i");
  CHECK(format_complex(Complex(0, -2)) == "0-2i");
  CHECK(format_complex(Complex(-1.5, 2)) == "-1.5+2i");
  CHECK(format_complex(Complex(0.5, -0.0)) == "0.5+0i");
}

TEST_CASE("block descriptions are stable strings") {
  CHECK(describe_block(BlockS1(Complex(1, 0), 1)) == "S1 mu=1+0i r=1");
  CHECK(describe_block(BlockLambda(Complex(-1.5, 2))) ==
        "Lambda lambda=-1.5+2i");
  CHECK(describe_block(f_inverse(BlockS1(Complex(1, 0), 1))) ==
        "S2 nu=0.381966011+0i tau=1.61803399");
  CHECK(describe_block(BlockRealRotation(0, 2)) == "RealRotation a=0 b=2");
  CHECK(describe_block(BlockRealS2Pair(0, 0.5, 1)) ==
        "RealS2Pair c=0 d=0.5 tau=1");
}

TEST_CASE("form descriptions list one block per line") {
  CanonicalForm form;
  form.flavor = Flavor::ComplexA;
  form.blocks.emplace_back(BlockLambda(Complex(5, 0)));
  form.blocks.emplace_back(BlockS1(Complex(0, 1), 1));
  CHECK(describe_form(form) == "Lambda lambda=5+0i\nS1 mu=0+1i r=1\n");
}

TEST_CASE("complex matrix files round-trip exactly") {
  MatrixData md;
  md.complex = true;
  md.m.resize(2, 2);
  md.m << Complex(1.25, -3), Complex(0, 1e-9), Complex(7, 0),
      Complex(-0.5, 0.125);
  const std::string path = tmp_path("complex.json");
  write_matrix_file(path, md);
  const MatrixData back = read_matrix_file(path);
  CHECK(back.complex);
  REQUIRE(back.m.rows() == 2);
  CHECK((back.m - md.m).norm() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("real matrix files round-trip exactly") {
  MatrixData md;
  md.complex = false;
  md.m.resize(2, 3);
  md.m.real() << 1, 2, 3, 4, 5, 6.5;
  md.m.imag().setZero();
  const std::string path = tmp_path("real.json");
  write_matrix_file(path, md);
  const MatrixData back = read_matrix_file(path);
  CHECK_FALSE(back.complex);
  CHECK((back.real() - md.real()).norm() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("whitespace matrix text is accepted as a real matrix") {
  const std::string path = tmp_path("plain.txt");
  write_text(path, "1 2\n3 4\n");
  const MatrixData md = read_matrix_file(path);
  CHECK_FALSE(md.complex);
  REQUIRE(md.m.rows() == 2);
  REQUIRE(md.m.cols() == 2);
  CHECK(md.m(0, 0) == Complex(1, 0));
  CHECK(md.m(1, 1) == Complex(4, 0));

  write_text(path, "  1e-3  2.5E+2 \n -7 0 \n");
  const MatrixData sci = read_matrix_file(path);
  CHECK(sci.m(0, 0) == Complex(1e-3, 0));
  CHECK(sci.m(0, 1) == Complex(250, 0));
  std::remove(path.c_str());
}

TEST_CASE("mixed JSON entry spellings parse to the same values") {
  const std::string path = tmp_path("mixed.json");
  write_text(path,
             "{\"rows\":2,\"cols\":2,\"complex\":true,"
             "\"data\":[1,[2,3],0,[0,-1]]}");
  const MatrixData md = read_matrix_file(path);
  CHECK(md.m(0, 0) == Complex(1, 0));
  CHECK(md.m(0, 1) == Complex(2, 3));
  CHECK(md.m(1, 0) == Complex(0, 0));
  CHECK(md.m(1, 1) == Complex(0, -1));
  std::remove(path.c_str());
}

TEST_CASE("malformed matrix files are refused") {
  const std::string path = tmp_path("bad.txt");

  write_text(path, "1 2\n3\n");
  CHECK_THROWS_AS(read_matrix_file(path), IoError);

  write_text(path, "1 x\n");
  CHECK_THROWS_AS(read_matrix_file(path), IoError);

  write_text(path, "   \n  \n");
  CHECK_THROWS_AS(read_matrix_file(path), IoError);

  write_text(path, "{\"rows\":2,\"cols\":2,\"complex\":false,\"data\":[1,2,3]}");
  CHECK_THROWS_AS(read_matrix_file(path), IoError);

  write_text(path, "{\"rows\":1,\"cols\":1,\"complex\":false,\"data\":[[1,2]]}");
  CHECK_THROWS_AS(read_matrix_file(path), IoError);

  write_text(path, "{not json");
  CHECK_THROWS_AS(read_matrix_file(path), IoError);

  std::remove(path.c_str());
  CHECK_THROWS_AS(read_matrix_file(tmp_path("missing.json")), IoError);
}

TEST_CASE("form files round-trip every block type exactly") {
  CanonicalForm form;
  form.flavor = Flavor::Real;
  form.blocks.emplace_back(BlockLambda(Complex(-2.25, 0)));
  form.blocks.emplace_back(BlockS2(Complex(0.3819660112501051, 0),
                                   1.618033988749895));
  form.blocks.emplace_back(BlockRealRotation(0.5, 1.5));
  form.blocks.emplace_back(BlockRealS2Pair(0.3, 0.4, 2.5));
  const std::string path = tmp_path("form.json");
  write_form_file(path, form);
  const CanonicalForm back = read_form_file(path);
  CHECK(back.flavor == Flavor::Real);
  REQUIRE(form_match(form, back, 1e-300).has_value());

  CanonicalForm cform;
  cform.flavor = Flavor::ComplexA;
  cform.blocks.emplace_back(BlockS1(Complex(0.125, 2), 0.75));
  write_form_file(path, cform);
  const CanonicalForm cback = read_form_file(path);
  CHECK(cback.flavor == Flavor::ComplexA);
  CHECK(std::get<BlockS1>(cback.blocks[0]).mu == Complex(0.125, 2));
  CHECK(std::get<BlockS1>(cback.blocks[0]).r == 0.75);
  std::remove(path.c_str());
}

TEST_CASE("malformed form files are refused") {
  const std::string path = tmp_path("badform.json");

  write_text(path, "{\"flavor\":\"a\",\"blocks\":[{\"type\":\"mystery\"}]}");
  CHECK_THROWS_AS(read_form_file(path), IoError);

  write_text(path, "{\"flavor\":\"q\",\"blocks\":[]}");
  CHECK_THROWS_AS(read_form_file(path), IoError);

  // legal JSON, illegal parameters: r must be positive
  write_text(path,
             "{\"flavor\":\"a\",\"blocks\":[{\"type\":\"s1\",\"mu_re\":1,"
             "\"mu_im\":0,\"r\":-1}]}");
  CHECK_THROWS_AS(read_form_file(path), IoError);

  write_text(path, "{\"flavor\":\"a\"}");
  CHECK_THROWS_AS(read_form_file(path), IoError);

  std::remove(path.c_str());
}
