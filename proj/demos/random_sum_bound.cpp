// Normal-approximation report for a compound sum of fair coins whose length
// is uniform on {1, ..., 10}, compared with the exactly enumerated law.

#include <cstdio>
#include <vector>

#include <malstein/random_sums.hpp>
#include <malstein/report_json.hpp>
#include <malstein/stein.hpp>

int main() {
    using namespace malstein;
    std::vector<double> lengths, probs;
    for (int k = 1; k <= 10; ++k) {
        lengths.push_back(k);
        probs.push_back(0.1);
    }
    const RandomSumSpec spec =
        make_random_sum_spec(DiscreteDistribution(lengths, probs), fair_coin());

    const BoundReport report = rs_bound(spec);
    std::printf("%s\n", report_to_json(report).c_str());

    const LawOfF law = law_of(random_sum_functional(spec));
    std::printf("exact d_K = %.12f\n", kolmogorov_distance(law));
    std::printf("exact d_W = %.12f (bound total %.12f)\n", wasserstein_distance(law),
                report.total);
    return 0;
}
