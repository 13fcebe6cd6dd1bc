#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nlasso/datagen.hpp"
#include "nlasso/error.hpp"
#include "nlasso/io.hpp"

using namespace nlasso;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "nlasso_io_test";
  fs::create_directories(dir);
  return dir;
}

std::size_t error_line(const std::string& text, bool dataset = false) {
  std::istringstream in(text);
  try {
    if (dataset)
      io::parse_dataset_table(in, "mem");
    else
      io::parse_edge_list(in, "mem");
  } catch (const ParseError& e) {
    return e.line();
  }
  return static_cast<std::size_t>(-1);
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("edge list errors carry line numbers") {
  CHECK(error_line("i,j,weight\n0,1,1\n2,2,1\n") == 3);
  CHECK(error_line("i,j,weight\n0,1,1\n1,0,2\n") == 3);
  CHECK(error_line("i,j,weight\n0,1,0\n") == 2);
  CHECK(error_line("i,j,weight\n0,1,-3\n") == 2);
  CHECK(error_line("i,j,weight\n0,1\n") == 2);
  CHECK(error_line("i,j,weight\n0,x,1\n") == 2);
  CHECK(error_line("a,b,c\n") == 1);
  CHECK(error_line("") == 0);
}

TEST_CASE("dataset errors carry line numbers") {
  CHECK(error_line("node,x1,y\n0,1.0,2\n1,3\n", true) == 3);
  CHECK(error_line("node,x1,y\n0,1.0,2\n0,3,1\n", true) == 3);
  CHECK(error_line("node,x1,x2,y\n0,1.0,abc,2\n", true) == 2);
  CHECK(error_line("node,x2,y\n", true) == 1);
}

TEST_CASE("empty label means unlabeled") {
  std::istringstream in("node,x1,x2,y\n10,1,2,\n20,3,4,5.5\n");
  const auto t = io::parse_dataset_table(in, "mem");
  CHECK(t.dim == 2);
  CHECK(!t.labels[0]);
  CHECK(*t.labels[1] == 5.5);
}

TEST_CASE("round trip of a generated dataset") {
  const auto dir = scratch_dir();
  const auto inst = two_cluster_instance({.n = 20, .avg_degree = 4, .inter_edges = 3, .seed = 8}, 2);
  const auto index = io::NodeIndex::identity(20);
  io::write_graph_csv((dir / "g.csv").string(), inst.dataset.graph(), index);
  io::write_dataset_csv((dir / "d.csv").string(), inst.dataset, index);
  io::write_partition_csv((dir / "p.csv").string(), inst.partition, index);

  const auto loaded = io::load_dataset((dir / "g.csv").string(), (dir / "d.csv").string());
  CHECK(loaded.dataset.features() == inst.dataset.features());
  CHECK(std::equal(loaded.dataset.labels().begin(), loaded.dataset.labels().end(),
                   inst.dataset.labels().begin(), inst.dataset.labels().end()));
  CHECK(std::equal(loaded.dataset.graph().edges().begin(), loaded.dataset.graph().edges().end(),
                   inst.dataset.graph().edges().begin(), inst.dataset.graph().edges().end()));
  const auto part = io::assemble_partition(io::read_partition_rows((dir / "p.csv").string()), loaded.index,
                                           (dir / "p.csv").string());
  for (std::size_t i = 0; i < 20; ++i) CHECK(part.cluster_of(i) == inst.partition.cluster_of(i));
}

TEST_CASE("external node ids are mapped in increasing order") {
  const auto dir = scratch_dir();
  std::ofstream(dir / "g2.csv") << "i,j,weight\n300,7,1.5\n";
  std::ofstream(dir / "d2.csv") << "node,x1,y\n300,1,\n7,2,4\n";
  const auto loaded = io::load_dataset((dir / "g2.csv").string(), (dir / "d2.csv").string());
  CHECK(loaded.index.id_of(0) == 7);
  CHECK(loaded.dataset.feature(0)[0] == 2.0);
  CHECK(loaded.dataset.graph().edge(0).weight == 1.5);
  std::ofstream(dir / "g3.csv") << "i,j,weight\n300,8,1.5\n";
  CHECK_THROWS_AS(io::load_dataset((dir / "g3.csv").string(), (dir / "d2.csv").string()), ParseError);
}

TEST_CASE("signal json round trip") {
  NodeSignal w(3, 2);
  for (std::size_t t = 0; t < 6; ++t) w.flat()[t] = 0.1 * static_cast<double>(t) - 0.25;
  const io::NodeIndex index({5, 9, 2});
  const auto back = io::signal_from_json(io::signal_to_json(w, index), index);
  CHECK(back == w);
}

TEST_CASE("ncc json round trip keeps infinities") {
  NccReport rep;
  rep.rho = {2.5, std::numeric_limits<double>::infinity()};
  rep.rho_min = 2.5;
  rep.rho_mean = std::numeric_limits<double>::infinity();
  rep.threshold = std::sqrt(2.0);
  rep.satisfied = true;
  rep.L_used = 2.5;
  rep.K_used = 4.0;
  rep.boundary_size = 3.0;
  rep.boundary_edge_count = 3;
  const auto back = io::ncc_from_json(io::ncc_to_json(rep));
  CHECK(back.rho[0] == 2.5);
  CHECK(std::isinf(back.rho[1]));
  CHECK(std::isinf(back.rho_mean));
  CHECK(*back.K_used == 4.0);
  CHECK(back.satisfied);
}

TEST_CASE("shortest round-trip formatting") {
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(std::stod(io::format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

}
