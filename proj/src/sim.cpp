#include "qkdcal/sim.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qkdcal {

namespace {

constexpr std::uint64_t kBlockSize = 1u << 16;

// splitmix64; one independent stream per (seed, block).
struct Stream {
    std::uint64_t state;

    explicit Stream(std::uint64_t seed, std::uint64_t block) {
        state = seed ^ (0x9e3779b97f4a7c15ULL * (block + 1));
        next();
        next();
    }

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double uniform() { return (next() >> 11) * 0x1.0p-53; }
};

struct Tally {
    std::array<std::array<std::uint64_t, 2>, 2> n{};
    // Sums of outcome products and single outcomes per basis pair.
    std::array<std::array<std::int64_t, 2>, 2> sum_xy{};
    std::array<std::array<std::int64_t, 2>, 2> sum_x{};  // Alice outcome per (a,b)
    std::array<std::array<std::int64_t, 2>, 2> sum_y{};  // Bob outcome per (a,b)

    void merge(const Tally& o) {
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                n[a][b] += o.n[a][b];
                sum_xy[a][b] += o.sum_xy[a][b];
                sum_x[a][b] += o.sum_x[a][b];
                sum_y[a][b] += o.sum_y[a][b];
            }
    }
};

// Cumulative outcome-cell probabilities for one basis pair, order
// (+,+), (+,-), (-,+), (-,-).
struct CellCdf {
    std::array<double, 4> c{};
};

Tally sample_block(const std::array<std::array<CellCdf, 2>, 2>& cdf, std::uint64_t seed,
                   std::uint64_t block, std::uint64_t rounds_in_block) {
    Tally t;
    Stream rng(seed, block);
    for (std::uint64_t r = 0; r < rounds_in_block; ++r) {
        const std::uint64_t bits = rng.next();
        const int a = static_cast<int>(bits & 1u);
        const int b = static_cast<int>((bits >> 1) & 1u);
        const double u = rng.uniform();
        const auto& c = cdf[a][b].c;
        const int cell = u < c[0] ? 0 : u < c[1] ? 1 : u < c[2] ? 2 : 3;
        const int x = cell < 2 ? 1 : -1;
        const int y = (cell % 2 == 0) ? 1 : -1;
        ++t.n[a][b];
        t.sum_xy[a][b] += x * y;
        t.sum_x[a][b] += x;
        t.sum_y[a][b] += y;
    }
    return t;
}

double mean_or_nan(std::int64_t sum, std::uint64_t n) {
    return n == 0 ? std::numeric_limits<double>::quiet_NaN()
                  : static_cast<double>(sum) / static_cast<double>(n);
}

// Standard error of the mean of n +-1 samples with sample mean m.
double pm1_stderr(double m, std::uint64_t n) {
    if (n == 0) return std::numeric_limits<double>::quiet_NaN();
    return std::sqrt(std::max(0.0, 1.0 - m * m) / static_cast<double>(n));
}

}  // namespace

void SimConfig::validate() const {
    state.validate();
    for (const auto& m : alice) m.validate();
    for (const auto& m : bob) m.validate();
    if (rounds < 1) throw std::domain_error("SimConfig: rounds must be >= 1");
}

bool EstimatedDataMatrix::has_undefined() const {
    for (const auto& row : d.d)
        for (double v : row)
            if (std::isnan(v)) return true;
    return false;
}

EstimatedDataMatrix run(const SimConfig& config) {
    config.validate();

    std::array<std::array<CellCdf, 2>, 2> cdf;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            const JointDistribution j =
                outcome_distribution(config.state, config.alice[a], config.bob[b]);
            double acc = 0.0;
            int k = 0;
            for (int i = 0; i < 2; ++i)
                for (int l = 0; l < 2; ++l) cdf[a][b].c[k++] = (acc += j.p[i][l]);
        }
    }

    Tally total;
    const std::uint64_t blocks = (config.rounds + kBlockSize - 1) / kBlockSize;
    for (std::uint64_t blk = 0; blk < blocks; ++blk) {
        const std::uint64_t in_block =
            std::min<std::uint64_t>(kBlockSize, config.rounds - blk * kBlockSize);
        total.merge(sample_block(cdf, config.seed, blk, in_block));
    }

    EstimatedDataMatrix out;
    out.counts = total.n;
    out.stderr_est[0][0] = 0.0;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            const double m = mean_or_nan(total.sum_xy[a][b], total.n[a][b]);
            out.d.d[1 + a][1 + b] = m;
            out.stderr_est[1 + a][1 + b] = pm1_stderr(m, total.n[a][b]);
        }
        // Marginals come from the matched basis-pair rounds so that the
        // matched-pair correlation triples are exact empirical distributions
        // (a pooled marginal next to a deterministic joint would be
        // inconsistent at finite statistics).
        const double ma = mean_or_nan(total.sum_x[a][a], total.n[a][a]);
        out.d.d[1 + a][0] = ma;
        out.stderr_est[1 + a][0] = pm1_stderr(ma, total.n[a][a]);
    }
    for (int b = 0; b < 2; ++b) {
        const double mb = mean_or_nan(total.sum_y[b][b], total.n[b][b]);
        out.d.d[0][1 + b] = mb;
        out.stderr_est[0][1 + b] = pm1_stderr(mb, total.n[b][b]);
    }
    return out;
}

DataMatrix exact_data(const SimConfig& config) {
    config.validate();
    DataMatrix m;
    for (int a = 0; a < 2; ++a) {
        m.d[1 + a][0] = marginal_a(config.state, config.alice[a]);
        for (int b = 0; b < 2; ++b)
            m.d[1 + a][1 + b] = expectation(config.state, config.alice[a], config.bob[b]);
    }
    for (int b = 0; b < 2; ++b) m.d[0][1 + b] = marginal_b(config.state, config.bob[b]);
    return m;
}

}  // namespace qkdcal
