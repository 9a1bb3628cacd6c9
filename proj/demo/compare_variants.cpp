// Runs the best published settings of cGA, MScGA and SWcGA on 100-bit noisy
// OneMax and prints the final recommendation quality of each.
#include <cstdio>

#include "noisy_eda/harness.hpp"

using namespace noisy_eda;

int main() {
  const ProblemSpec onemax{ProblemKind::NoisyOneMax, 100, 1.0};

  auto make = [&](Algorithm alg, double k_multiple) {
    ExperimentConfig cfg;
    cfg.problem = onemax;
    cfg.optimizer.algorithm = alg;
    cfg.optimizer.d = onemax.d;
    cfg.optimizer.k = k_multiple * static_cast<double>(onemax.d);
    cfg.trials = 100;
    cfg.master_seed = 7;
    return cfg;
  };

  ExperimentConfig cga = make(Algorithm::CGA, 0.5);
  ExperimentConfig mscga = make(Algorithm::MSCGA, 5);
  mscga.optimizer.n = 20;
  ExperimentConfig swcga = make(Algorithm::SWCGA, 5);
  swcga.optimizer.w = 10;

  for (const auto& row : sweep({cga, mscga, swcga})) {
    std::printf("%-6s k=%-5g param=%-3d NHO=%-3d RQ=%.2f +- %.2f\n",
                std::string(to_string(row.config.optimizer.algorithm)).c_str(), *row.config.optimizer.k,
                row.config.optimizer.param(), row.stats.nho, row.stats.rq_mean, row.stats.rq_stderr);
  }
}
