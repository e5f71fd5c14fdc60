#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mfsinr/charfn.hpp"

namespace mfsinr::mc {

// xoshiro256++ with splitmix64 state initialization. Substreams for parallel
// blocks are derived by long_jump (2^192 steps apart), so any partition of
// the sample range onto workers draws identical values per sample index.
class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed);
    std::uint64_t next();
    void long_jump();
    double uniform01();    ///< uniform on (0, 1]
    double normal();       ///< standard normal (Marsaglia polar, pair-cached)
    double gamma_shape(double alpha);  ///< Gamma(alpha, 1), alpha >= 1 (Marsaglia-Tsang)

private:
    std::uint64_t s_[4];
    double cached_ = 0.0;
    bool have_cached_ = false;
};

struct McSpec {
    std::uint64_t n_samples = 1000000;
    std::uint64_t seed = 1;
    unsigned shards = 0;  ///< worker threads; 0 = hardware concurrency

    void validate() const;
};

// Samples are partitioned into fixed blocks of this many samples; each block
// owns a dedicated RNG substream and a dedicated output slot, so results are
// bit-identical for every shard count.
inline constexpr std::uint64_t kBlockSize = 65536;

// Runs fn(block_index, samples_in_block, rng) over all blocks of spec using
// spec.shards workers. fn must write only to storage owned by its block.
void run_blocks(const McSpec& spec,
                const std::function<void(std::size_t, std::uint64_t, Xoshiro256pp&)>& fn);

// One i.i.d. CN(0,1) channel matrix (real and imaginary parts each N(0,1/2)).
// Column j is the L-vector channel of user j, stored at h[j*L .. j*L+L-1].
struct ChannelMatrix {
    int L = 0, K = 0;
    std::vector<std::complex<double>> h;
};

ChannelMatrix sample_channel(const SystemConfig& cfg, Xoshiro256pp& rng);

// SINR of `user` computed directly from the system definition:
//   (p_t/K) ||h_u||^2 / (sigma2 + (p_t/K) sum_{i != u} |h_u^T h_i^*|^2 / ||h_i||^2).
double sinr_direct(const ChannelMatrix& chan, int user, const SystemConfig& cfg);

// One SINR draw through the distributional decomposition 1/(Y + sum X_i) with
// Y = a/Gamma(L,1) and X_i = 1 - U^{1/(L-1)} i.i.d.
double sample_decomposed(const SystemConfig& cfg, Xoshiro256pp& rng);

// Power-independent direct-channel pairs: signal = ||h_0||^2 and
// interference = sum_{i>0} |h_0^T h_i^*|^2/||h_i||^2 for user 0. SINR for any
// (p_t, sigma2) follows as (p_t/K) s / (sigma2 + (p_t/K) i), letting one batch
// serve a whole power sweep.
struct SigIntBatch {
    std::vector<double> signal, interference;
};
SigIntBatch sample_sig_int(int L, int K, const McSpec& spec);
// Single fused draw of one (signal, interference) pair for user 0; consumes
// the stream in the same order as sample_channel. scratch must have size 2L.
void draw_sig_int(int L, int K, Xoshiro256pp& rng, std::vector<double>& scratch,
                  double& signal, double& interference);
std::vector<double> sinr_from_sig_int(const SigIntBatch& batch, const SystemConfig& cfg);

std::vector<double> sample_sinr_direct(const SystemConfig& cfg, const McSpec& spec);
std::vector<double> sample_sinr_decomposed(const SystemConfig& cfg, const McSpec& spec);

// Empirical CDF evaluated at each grid point (grid must be ascending);
// values need not be sorted.
std::vector<double> empirical_cdf(const std::vector<double>& values,
                                  const std::vector<double>& grid);

// One-sample Kolmogorov-Smirnov sup distance against a reference CDF.
double ks_statistic(std::vector<double> values, const std::function<double(double)>& cdf);
// Two-sample KS sup distance.
double two_sample_ks(std::vector<double> a, std::vector<double> b);
// Large-n critical values at significance alpha.
double ks_critical_value(std::uint64_t n, double alpha);
double two_sample_ks_critical_value(std::uint64_t n, std::uint64_t m, double alpha);
// Dvoretzky-Kiefer-Wolfowitz band half-width with failure probability delta.
double dkw_halfwidth(std::uint64_t n, double delta);

}  // namespace mfsinr::mc
