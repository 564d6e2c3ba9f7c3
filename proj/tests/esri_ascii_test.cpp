#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"
#include "roughkit/esri_ascii.hpp"

using namespace roughkit;

TEST(EsriAscii, WritesHeaderNorthUp) {
  Raster r(GridSpec{10.0, 20.0, 3, 2, 0.5});
  r.set(0, 0, 1.5);
  r.set(0, 1, 2.0);
  r.set(0, 2, -3.25);
  r.set(1, 0, 4.0);
  r.set(1, 2, 6.0);
  std::ostringstream out;
  write_esri_ascii(out, r);
  EXPECT_EQ(out.str(),
            "ncols 3\nnrows 2\nxllcorner 10\nyllcorner 20\ncellsize 0.5\n"
            "NODATA_value -9999\n1.5 2 -3.25\n4 -9999 6\n");
}

TEST(EsriAscii, RoundTripIsExact) {
  Raster r = oracle::random_dem(17, 23, 4, -100.0, 100.0, 0.37);
  r.set_nodata(3, 4);
  r.set_nodata(16, 22);
  std::ostringstream out;
  write_esri_ascii(out, r);
  std::istringstream in(out.str());
  Raster back = read_esri_ascii(in);
  EXPECT_EQ(back.spec(), r.spec());
  for (std::size_t i = 0; i < r.nrows(); ++i)
    for (std::size_t j = 0; j < r.ncols(); ++j) {
      ASSERT_EQ(back.valid(i, j), r.valid(i, j));
      if (r.valid(i, j)) {
        EXPECT_EQ(back.at(i, j), r.at(i, j));
      }
    }
}

TEST(EsriAscii, AcceptsCentreRegistrationAndCustomNoData) {
  std::istringstream in(
      "NCOLS 2\nNROWS 2\nXLLCENTER 0.5\nYLLCENTER 0.5\nCELLSIZE 1\nNODATA_VALUE -1\n"
      "1 -1\n3 4\n");
  Raster r = read_esri_ascii(in);
  EXPECT_EQ(r.spec().x0, 0.0);
  EXPECT_EQ(r.spec().y0, 0.0);
  EXPECT_FALSE(r.valid(0, 1));
  EXPECT_EQ(r.at(1, 1), 4.0);
}

TEST(EsriAscii, ValuesMayWrapAcrossLines) {
  std::istringstream in("ncols 3\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\n1 2\n3 4 5\n6\n");
  Raster r = read_esri_ascii(in);
  EXPECT_EQ(r.at(1, 2), 6.0);
}

TEST(EsriAscii, Errors) {
  const std::string head = "ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\n";
  for (const std::string& body : {std::string("1 2 3\n"), std::string("1 2 3 4 5\n"),
                                  std::string("1 2 x 4\n")}) {
    std::istringstream in(head + body);
    EXPECT_THROW(read_esri_ascii(in), ParseError) << body;
  }
  std::istringstream missing("ncols 2\nnrows 2\n1 2 3 4\n");
  EXPECT_THROW(read_esri_ascii(missing), ParseError);
  std::istringstream zero_cell("ncols 1\nnrows 1\nxllcorner 0\nyllcorner 0\ncellsize 0\n1\n");
  EXPECT_THROW(read_esri_ascii(zero_cell), ParseError);
}
