// Picks the median of a shuffled sequence with each grouped algorithm and
// prints the per-iteration trace alongside the discard check.

#include <iostream>

#include "mmselect/mmselect.hpp"

int main() {
  using namespace mmselect;

  const auto keys = generate_keys(parse_generator("uniform:n=100000:seed=3"));
  const std::size_t i = keys.size() / 2;

  for (const auto& algo : {AlgorithmId::classic(5), AlgorithmId::repeated_step3(),
                           AlgorithmId::shifting_target4(), AlgorithmId::hybrid4()}) {
    auto report = run(algo, make_sequence(keys), i);
    std::cout << algo.name() << ": key " << report.result.key << ", "
              << report.total_comparisons << " comparisons ("
              << comparisons_per_element(report) << " per element)\n";
    for (const auto& e : report.iterations) {
      const auto b = registered_bound(e);
      std::cout << "  n=" << e.n << " i=" << e.i << " a1=" << e.size_a1 << " a2=" << e.size_a2
                << "  guaranteed " << b.at_most << "/" << b.at_least << "  "
                << (check_two_sided_bound(e) ? "ok" : "VIOLATED") << '\n';
    }
    const auto c = check_run(report);
    std::cout << "  run check: " << (c ? "ok" : c.explanation) << '\n';
  }
}
