// Packs triangles into one G(n,p) sample with and without the bootstrap,
// then plants a triangle-free set by edge deletion on the same host.
//
//   triangle_tiling [n] [p] [seed]

#include <cstdio>
#include <cstdlib>
#include <string>

#include "packbench/adversary.hpp"
#include "packbench/bootstrap.hpp"
#include "packbench/packing.hpp"

int main(int argc, char** argv) {
  using namespace packbench;
  const std::size_t n = argc > 1 ? std::stoul(argv[1]) : 1500;
  const double p = argc > 2 ? std::stod(argv[2]) : 0.2;
  const std::uint64_t seed = argc > 3 ? std::stoull(argv[3]) : 1;

  const Pattern h = complete_pattern(3);
  const auto params = pattern_params(h);
  std::printf("H = %s: m2 = %s, chi_cr = %s\n", h.name().c_str(), to_string(params.m2).c_str(),
              to_string(params.chi_cr).c_str());

  const Graph g = gnp_generate({n, p, seed});
  std::printf("G(%zu, %g): %zu edges, min degree %zu\n", n, p, g.edge_count(), min_degree(g));

  BootstrapConfig cfg;
  cfg.seed = derive_seed(seed, 2);
  cfg.oracle.seed = derive_seed(seed, 1);
  const auto boot = bootstrap_pack(g, h, p, cfg);
  std::printf("bootstrap: q = %zu, parts:", boot.plan.q);
  for (auto s : boot.plan.sizes) std::printf(" %zu", s);
  std::printf("\n");
  for (const auto& st : boot.stages)
    std::printf("  stage %zu: pool %zu (carried %zu) -> %zu copies, leftover %zu%s\n", st.stage, st.pool_size,
                st.carried_leftover, st.copies_added, st.stage_leftover, st.oracle_shortfall ? " [shortfall]" : "");
  std::printf("bootstrap leftover %zu (bound gamma (C/p)^m2 = %.1f), verified: %s\n", leftover_count(boot.packing),
              theorem_bound(p, params.m2, cfg.gamma, cfg.C), verify_packing(g, h, boot.packing) ? "yes" : "no");

  OracleConfig single = cfg.oracle;
  single.swap_budget *= boot.plan.q;
  const auto flat = HeuristicOracle{}(g, h, single);
  std::printf("single-shot leftover %zu\n", leftover_count(flat));

  AdversaryConfig adv;
  adv.x_override = 10;
  adv.seed = derive_seed(seed, 3);
  const auto out = adversary_construct(g, h, p, adv);
  std::printf("adversary: |X| = %zu, %zu deletions, min degree %zu -> %zu, isolation %s\n", out.x.size(),
              out.deleted.size(), out.min_degree_before, out.min_degree_after,
              verify_isolation(out, h) ? "holds" : "FAILS");
  return EXIT_SUCCESS;
}
