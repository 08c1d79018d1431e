// Writes a synthetic corpus for the command line smoke test.
// usage: make_corpus <dir> [works] [items]
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "fixtures.hpp"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: make_corpus <dir> [works] [items]\n");
    return 2;
  }
  fixture::CorpusSpec spec;
  if (argc > 2) spec.works = std::strtoul(argv[2], nullptr, 10);
  if (argc > 3) spec.items = std::strtoul(argv[3], nullptr, 10);
  const auto c = fixture::write_corpus(spec, argv[1]);
  std::ofstream truth(std::filesystem::path(argv[1]) / "truth.tsv");
  for (const auto& [item, work] : c.truth) truth << item << '\t' << work << '\n';
  std::printf("items=%s payloads=%s works=%s editions=%s\n", c.items_file.c_str(), c.payload_dir.c_str(),
              c.works_file.c_str(), c.editions_file.c_str());
  return 0;
}
