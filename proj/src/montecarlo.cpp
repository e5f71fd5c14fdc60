#include "mfsinr/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace mfsinr::mc {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Xoshiro256pp::Xoshiro256pp(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
}

std::uint64_t Xoshiro256pp::next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

void Xoshiro256pp::long_jump() {
    static constexpr std::uint64_t kJump[] = {0x76e15d3efefdcbbfULL, 0xc5004e441c522fb3ULL,
                                              0x77710069854ee241ULL, 0x39109bb02acbe635ULL};
    std::uint64_t t[4] = {0, 0, 0, 0};
    for (std::uint64_t jump : kJump)
        for (int b = 0; b < 64; ++b) {
            if (jump & (1ULL << b))
                for (int w = 0; w < 4; ++w) t[w] ^= s_[w];
            next();
        }
    for (int w = 0; w < 4; ++w) s_[w] = t[w];
    have_cached_ = false;
}

double Xoshiro256pp::uniform01() {
    // (next >> 11) + 1 in (0, 2^53]: never 0, so logarithms are safe.
    return ((next() >> 11) + 1) * 0x1.0p-53;
}

double Xoshiro256pp::normal() {
    if (have_cached_) {
        have_cached_ = false;
        return cached_;
    }
    double v1, v2, s;
    do {
        v1 = 2.0 * ((next() >> 11) * 0x1.0p-53) - 1.0;
        v2 = 2.0 * ((next() >> 11) * 0x1.0p-53) - 1.0;
        s = v1 * v1 + v2 * v2;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    cached_ = v2 * f;
    have_cached_ = true;
    return v1 * f;
}

double Xoshiro256pp::gamma_shape(double alpha) {
    if (!(alpha >= 1.0)) throw std::domain_error("gamma_shape: requires alpha >= 1");
    const double d = alpha - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform01();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

void McSpec::validate() const {
    if (n_samples == 0) throw std::domain_error("McSpec: n_samples must be positive");
}

void run_blocks(const McSpec& spec,
                const std::function<void(std::size_t, std::uint64_t, Xoshiro256pp&)>& fn) {
    spec.validate();
    const std::size_t n_blocks =
        static_cast<std::size_t>((spec.n_samples + kBlockSize - 1) / kBlockSize);
    // Walk the substream chain once; block b gets the master stream advanced
    // by b long jumps. This is O(n_blocks) setup, independent of shard count.
    std::vector<Xoshiro256pp> streams;
    streams.reserve(n_blocks);
    Xoshiro256pp walker(spec.seed);
    for (std::size_t b = 0; b < n_blocks; ++b) {
        streams.push_back(walker);
        walker.long_jump();
    }
    unsigned workers = spec.shards != 0 ? spec.shards : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_blocks));

    std::atomic<std::size_t> next_block{0};
    auto work = [&] {
        for (;;) {
            const std::size_t b = next_block.fetch_add(1);
            if (b >= n_blocks) return;
            const std::uint64_t count =
                std::min<std::uint64_t>(kBlockSize, spec.n_samples - b * kBlockSize);
            fn(b, count, streams[b]);
        }
    };
    if (workers == 1) {
        work();
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
}

ChannelMatrix sample_channel(const SystemConfig& cfg, Xoshiro256pp& rng) {
    cfg.validate();
    ChannelMatrix chan;
    chan.L = cfg.L;
    chan.K = cfg.K;
    chan.h.resize(static_cast<std::size_t>(cfg.L) * cfg.K);
    for (auto& e : chan.h) {
        const double re = rng.normal() * M_SQRT1_2;
        const double im = rng.normal() * M_SQRT1_2;
        e = {re, im};
    }
    return chan;
}

double sinr_direct(const ChannelMatrix& chan, int user, const SystemConfig& cfg) {
    if (user < 0 || user >= chan.K) throw std::domain_error("sinr_direct: user out of range");
    const int L = chan.L;
    const auto* h = chan.h.data();
    const auto* hu = h + static_cast<std::size_t>(user) * L;
    double sig = 0.0;
    for (int j = 0; j < L; ++j) sig += std::norm(hu[j]);
    double interference = 0.0;
    for (int i = 0; i < chan.K; ++i) {
        if (i == user) continue;
        const auto* hi = h + static_cast<std::size_t>(i) * L;
        double dre = 0.0, dim = 0.0, nrm = 0.0;
        for (int j = 0; j < L; ++j) {
            // h_u^T h_i^* accumulated in parts
            dre += hu[j].real() * hi[j].real() + hu[j].imag() * hi[j].imag();
            dim += hu[j].imag() * hi[j].real() - hu[j].real() * hi[j].imag();
            nrm += std::norm(hi[j]);
        }
        interference += (dre * dre + dim * dim) / nrm;
    }
    const double scale = cfg.p_t / cfg.K;
    return scale * sig / (cfg.sigma2 + scale * interference);
}

double sample_decomposed(const SystemConfig& cfg, Xoshiro256pp& rng) {
    cfg.validate();
    const double y = cfg.noise_ratio() / rng.gamma_shape(static_cast<double>(cfg.L));
    double x = 0.0;
    const double inv = 1.0 / (cfg.L - 1);
    for (int i = 1; i < cfg.K; ++i) x += 1.0 - std::pow(rng.uniform01(), inv);
    return 1.0 / (y + x);
}

// Fused per-sample kernel for user 0: draws the channel column by column
// (same stream order as sample_channel) without materializing the matrix.
void draw_sig_int(int L, int K, Xoshiro256pp& rng, std::vector<double>& hu,
                  double& sig_out, double& int_out) {
    double sig = 0.0;
    for (int j = 0; j < L; ++j) {
        const double re = rng.normal() * M_SQRT1_2;
        const double im = rng.normal() * M_SQRT1_2;
        hu[2 * j] = re;
        hu[2 * j + 1] = im;
        sig += re * re + im * im;
    }
    double interference = 0.0;
    for (int i = 1; i < K; ++i) {
        double dre = 0.0, dim = 0.0, nrm = 0.0;
        for (int j = 0; j < L; ++j) {
            const double re = rng.normal() * M_SQRT1_2;
            const double im = rng.normal() * M_SQRT1_2;
            dre += hu[2 * j] * re + hu[2 * j + 1] * im;
            dim += hu[2 * j + 1] * re - hu[2 * j] * im;
            nrm += re * re + im * im;
        }
        interference += (dre * dre + dim * dim) / nrm;
    }
    sig_out = sig;
    int_out = interference;
}

SigIntBatch sample_sig_int(int L, int K, const McSpec& spec) {
    if (L < 2 || K < 1) throw std::domain_error("sample_sig_int: requires L >= 2, K >= 1");
    SigIntBatch batch;
    batch.signal.resize(spec.n_samples);
    batch.interference.resize(spec.n_samples);
    run_blocks(spec, [&](std::size_t b, std::uint64_t count, Xoshiro256pp& rng) {
        std::vector<double> hu(static_cast<std::size_t>(2 * L));
        const std::size_t base = b * kBlockSize;
        for (std::uint64_t j = 0; j < count; ++j)
            draw_sig_int(L, K, rng, hu, batch.signal[base + j], batch.interference[base + j]);
    });
    return batch;
}

std::vector<double> sinr_from_sig_int(const SigIntBatch& batch, const SystemConfig& cfg) {
    cfg.validate();
    const double scale = cfg.p_t / cfg.K;
    std::vector<double> out(batch.signal.size());
    for (std::size_t j = 0; j < out.size(); ++j)
        out[j] = scale * batch.signal[j] / (cfg.sigma2 + scale * batch.interference[j]);
    return out;
}

std::vector<double> sample_sinr_direct(const SystemConfig& cfg, const McSpec& spec) {
    cfg.validate();
    std::vector<double> out(spec.n_samples);
    const double scale = cfg.p_t / cfg.K;
    run_blocks(spec, [&](std::size_t b, std::uint64_t count, Xoshiro256pp& rng) {
        std::vector<double> hu(static_cast<std::size_t>(2 * cfg.L));
        const std::size_t base = b * kBlockSize;
        double s, in;
        for (std::uint64_t j = 0; j < count; ++j) {
            draw_sig_int(cfg.L, cfg.K, rng, hu, s, in);
            out[base + j] = scale * s / (cfg.sigma2 + scale * in);
        }
    });
    return out;
}

std::vector<double> sample_sinr_decomposed(const SystemConfig& cfg, const McSpec& spec) {
    cfg.validate();
    std::vector<double> out(spec.n_samples);
    run_blocks(spec, [&](std::size_t b, std::uint64_t count, Xoshiro256pp& rng) {
        const std::size_t base = b * kBlockSize;
        for (std::uint64_t j = 0; j < count; ++j) out[base + j] = sample_decomposed(cfg, rng);
    });
    return out;
}

std::vector<double> empirical_cdf(const std::vector<double>& values,
                                  const std::vector<double>& grid) {
    std::vector<std::uint64_t> counts(grid.size(), 0);
    for (double v : values) {
        // count of grid points >= v contributes; accumulate via binary search
        const auto it = std::lower_bound(grid.begin(), grid.end(), v);
        if (it != grid.end()) ++counts[static_cast<std::size_t>(it - grid.begin())];
    }
    // counts[i] currently holds #{v : grid[i-1] < v <= grid[i]}; prefix-sum.
    std::vector<double> out(grid.size());
    std::uint64_t acc = 0;
    const double inv_n = values.empty() ? 0.0 : 1.0 / static_cast<double>(values.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        acc += counts[i];
        out[i] = static_cast<double>(acc) * inv_n;
    }
    return out;
}

double ks_statistic(std::vector<double> values, const std::function<double(double)>& cdf) {
    if (values.empty()) throw std::domain_error("ks_statistic: empty sample");
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double f = cdf(values[i]);
        sup = std::max(sup, std::max(f - static_cast<double>(i) / n,
                                     static_cast<double>(i + 1) / n - f));
    }
    return sup;
}

double two_sample_ks(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::domain_error("two_sample_ks: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double sup = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        const double fa = static_cast<double>(i) / a.size();
        const double fb = static_cast<double>(j) / b.size();
        sup = std::max(sup, std::abs(fa - fb));
    }
    return sup;
}

double ks_critical_value(std::uint64_t n, double alpha) {
    if (n == 0 || !(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("ks_critical_value: bad arguments");
    return std::sqrt(-0.5 * std::log(alpha / 2.0) / static_cast<double>(n));
}

double two_sample_ks_critical_value(std::uint64_t n, std::uint64_t m, double alpha) {
    if (n == 0 || m == 0 || !(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("two_sample_ks_critical_value: bad arguments");
    const double nn = static_cast<double>(n), mm = static_cast<double>(m);
    return std::sqrt(-0.5 * std::log(alpha / 2.0) * (nn + mm) / (nn * mm));
}

double dkw_halfwidth(std::uint64_t n, double delta) {
    if (n == 0 || !(delta > 0.0 && delta < 1.0))
        throw std::domain_error("dkw_halfwidth: bad arguments");
    return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(n)));
}

}  // namespace mfsinr::mc
