#include "vnroles/embedding.hpp"
#include "vnroles/random.hpp"

namespace vnroles {

PerturbedMatrix perturb(const RoleVectorSet& rvs, std::uint64_t seed) {
  PerturbedMatrix pm;
  pm.vocab = rvs.vocab;
  pm.seed = seed;
  pm.values = DenseMatrix(rvs.vectors.size(), rvs.length());
  Rng rng(seed);
  for (std::size_t r = 0; r < rvs.vectors.size(); ++r) {
    const auto& bits = rvs.vectors[r];
    auto out = pm.values.row(r);
    for (std::size_t j = 0; j < bits.size(); ++j) {
      out[j] = bits[j] ? 1.0 : rng.uniform_open_pm1();
    }
  }
  return pm;
}

}  // namespace vnroles
