// Writes the test corpus as group JSON files, one per group.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include <remak/corpus.hpp>
#include <remak/io.hpp>

namespace fs = std::filesystem;
using namespace remak;

int main(int argc, char** argv) {
  CLI::App app{"Write the group corpus"};
  std::string out;
  std::size_t abelian_max = 256;
  std::uint64_t product_max = 2000, table_max = 0;
  app.add_option("out", out, "output directory")->required();
  app.add_option("--abelian-max", abelian_max, "largest abelian order");
  app.add_option("--product-max", product_max, "largest product order");
  app.add_option("--tables", table_max, "also write table versions of groups up to this order");
  CLI11_PARSE(app, argc, argv);

  fs::create_directories(out);
  std::size_t n = 0;
  for (const auto& e : corpus(abelian_max, product_max)) {
    std::string stem = std::to_string(e.order) + "_" + e.gens.name;
    for (char& c : stem)
      if (c == '(' || c == ')' || c == ',') c = '_';
    std::ofstream(fs::path(out) / (stem + ".json")) << io::group_to_json(e.gens).dump() << "\n";
    ++n;
    if (e.order <= table_max) {
      std::ofstream(fs::path(out) / (stem + "_table.json")) << io::table_to_json(e.gens.group(), e.gens.name).dump() << "\n";
      ++n;
    }
  }
  std::cout << n << " files written to " << out << "\n";
}
