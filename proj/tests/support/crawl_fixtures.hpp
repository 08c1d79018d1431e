#pragma once

// Fixture graphs for the frontier planner, with their hand-computed series.

#include <filesystem>
#include <string>
#include <vector>

#include "fixtures.hpp"

namespace fixture {

/// One seed recommending five leaves that recommend nothing.
/// Works per depth: 1, 5, 0.
inline void write_star_graph(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text(dir / "seeds.txt", "hub\n");
  std::string recs;
  for (int i = 1; i <= 5; ++i) recs += "hub\tleaf" + std::to_string(i) + "\n";
  recs += "leaf1\thub\n";  // already known, must not be counted again
  write_text(dir / "recs.tsv", recs);
}

inline const std::vector<std::size_t> kStarSeries{1, 5, 0};

/// Seed -> 8 works; at each later depth half of the frontier recommends one
/// new work. Works per depth: 1, 8, 4, 2, 1, 0.
inline void write_geometric_graph(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text(dir / "seeds.txt", "# decay\ng0\n");
  std::string recs;
  std::vector<std::string> frontier;
  for (int i = 0; i < 8; ++i) {
    const std::string id = "g1_" + std::to_string(i);
    recs += "g0\t" + id + "\n";
    frontier.push_back(id);
  }
  for (int depth = 2; frontier.size() > 1; ++depth) {
    std::vector<std::string> next;
    for (std::size_t i = 0; i < frontier.size(); i += 2) {
      const std::string id = "g" + std::to_string(depth) + "_" + std::to_string(i / 2);
      recs += frontier[i] + "\t" + id + "\n";
      recs += frontier[i + 1] + "\t" + frontier[i] + "\n";  // back-edge, known
      next.push_back(id);
    }
    frontier = std::move(next);
  }
  write_text(dir / "recs.tsv", recs);
}

inline const std::vector<std::size_t> kGeometricSeries{1, 8, 4, 2, 1, 0};

}  // namespace fixture
