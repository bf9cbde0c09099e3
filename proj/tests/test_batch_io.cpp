#include "gcv/batch.hpp"
#include "gcv/error.hpp"
#include "gcv/matrix_io.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace gcv;
using namespace gcv::testing;

TEST(Batch, ParallelMatchesSerial) {
  Rng rng(1);
  std::vector<Mat> mats;
  std::vector<CovarianceMatrix> cms;
  for (int i = 0; i < 200; ++i) {
    mats.push_back(random_cm_matrix(1 + i % 4, rng));
    cms.push_back(random_cm(2, rng));
  }
  const auto a = batch_symplectic_spectra(mats);
  const auto b = batch_symplectic_spectra_serial(mats);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].values, b[i].values);
  EXPECT_EQ(batch_log_negativity(cms, {1, 1}), batch_log_negativity_serial(cms, {1, 1}));
}

TEST(Batch, ErrorsPropagate) {
  std::vector<Mat> mats{Mat::Identity(2, 2), Mat::Identity(3, 3)};
  EXPECT_THROW(batch_symplectic_spectra(mats), Error);
  std::vector<CovarianceMatrix> cms{vacuum_cm(3)};
  EXPECT_THROW(batch_log_negativity(cms, {1, 1}), Error);
}

TEST(MatrixIo, JsonObject) {
  const MatrixFile f = parse_matrix_text(
      R"({"matrix": [[1,0],[0,1]], "split": [1, 0], "convention": "capital", "displacement": [0.5, 1]})",
      MatrixFormat::json);
  EXPECT_EQ(f.matrix.rows(), 2);
  EXPECT_EQ(f.convention, Convention::capital);
  ASSERT_TRUE(f.split.has_value());
  ASSERT_TRUE(f.displacement.has_value());
  EXPECT_DOUBLE_EQ((*f.displacement)(0), 0.5);
  const MatrixFile s = parse_matrix_text(R"({"matrix": [[1,0],[0,1]], "split": "1:1"})", MatrixFormat::json);
  EXPECT_EQ(s.split->n_b, 1);
}

TEST(MatrixIo, BareArrayAndCsv) {
  EXPECT_EQ(parse_matrix_text("[[3,1],[1,1]]", MatrixFormat::json).matrix(0, 1), 1.0);
  const MatrixFile c = parse_matrix_text("# comment\n3, 1\n1, 1\n", MatrixFormat::csv);
  EXPECT_EQ(c.matrix(0, 0), 3.0);
  EXPECT_EQ(c.matrix.rows(), 2);
}

TEST(MatrixIo, Malformed) {
  for (const char* bad : {"[[1,2],[3]]", "{\"mat\": [[1]]}", "not json", "[[1,\"x\"]]"}) {
    try {
      parse_matrix_text(bad, MatrixFormat::json);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::parse);
    }
  }
  EXPECT_THROW(parse_matrix_text("1,2\n3\n", MatrixFormat::csv), Error);
  EXPECT_THROW(parse_matrix_text("1,abc\n", MatrixFormat::csv), Error);
  EXPECT_THROW(parse_convention("sideways"), Error);
}

TEST(MatrixIo, DetectAndRoundTrip) {
  EXPECT_EQ(detect_format("m.csv", "1,0\n0,1"), MatrixFormat::csv);
  EXPECT_EQ(detect_format("-", "  {\"matrix\": []}"), MatrixFormat::json);
  EXPECT_EQ(detect_format("-", "1,0\n0,1"), MatrixFormat::csv);
  const nlohmann::json j = matrix_to_json(reference_matrix());
  const MatrixFile back = parse_matrix_text(nlohmann::json{{"matrix", j}}.dump(), MatrixFormat::json);
  EXPECT_EQ(back.matrix, reference_matrix());
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
}
