#include "ale/probes.hpp"

namespace ale::probes {

Counters& counters() {
  static Counters instance;
  return instance;
}

void reset() {
  Counters& c = counters();
  c.fit_pca.store(0);
  c.pca_project.store(0);
  c.lsh_build.store(0);
  c.stitch.store(0);
  c.mixup.store(0);
  c.geometric.store(0);
  c.selection_scoring.store(0);
}

}  // namespace ale::probes
