#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "blochlab/holo.hpp"

namespace blochlab {

struct CorpusFunction {
  std::string id;
  HoloFunction f;
};

struct CorpusMap {
  std::string id;
  HoloSelfMap phi;
};

struct Corpus {
  std::size_t n = 0;
  std::vector<CorpusFunction> functions;
  std::vector<CorpusMap> maps;
  bool empty() const { return functions.empty() && maps.empty(); }
};

// count polynomials of total degree <= max_degree with coefficients drawn
// uniformly from the unit disk (deterministic in seed).
std::vector<HoloFunction> random_polynomials(std::size_t n, std::size_t count, int max_degree, std::uint64_t seed);

// Random polydisk automorphism (deterministic in seed and index).
HoloSelfMap random_automorphism(std::size_t n, std::uint64_t seed, std::size_t index);

// Polynomials, the three test families at exponent p, a Moebius factor and
// compositions, plus a handful of certified self-maps.
Corpus default_corpus(std::size_t n, double p, std::uint64_t seed = 20061017);

// Deterministic sample points with |z_k| <= radius.
std::vector<std::vector<cplx>> sample_points(std::size_t n, std::size_t count, double radius, std::uint64_t seed);

}  // namespace blochlab
