#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "jacobi/io.hpp"
#include "jacobi/parallel.hpp"

using namespace jacobi;

TEST_CASE("shortest round-trip formatting") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> d(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = d(rng) * std::pow(10.0, (i % 40) - 20);
    CHECK(std::stod(io::format_double(v)) == v);
  }
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(-0.0) == "0");
  CHECK(io::format_double(1e-300) == "1e-300");
  CHECK(io::format_double(NAN) == "nan");
}

TEST_CASE("CSV writer") {
  std::ostringstream os;
  io::CsvWriter w(os, "demo", 3, {"a", "b", "c"});
  w.cell(1.5).cell(7LL).cell("x");
  w.end_row();
  CHECK(os.str() == "# schema: demo v3\na,b,c\n1.5,7,x\n");
}

TEST_CASE("parallel_for visits every index once and propagates exceptions") {
  for (unsigned threads : {1u, 2u, 4u}) {
    set_thread_count(threads);
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
    CHECK_THROWS_AS(parallel_for(50, [](std::size_t i) {
                      if (i == 17) throw std::runtime_error("boom");
                    }),
                    std::runtime_error);
  }
  set_thread_count(0);
}
