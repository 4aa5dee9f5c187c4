#include "hyperwalk/oracle.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <queue>

#include "hyperwalk/errors.hpp"

namespace hyperwalk::oracle {

namespace {

constexpr std::int64_t kOracleMaxN = 12;

// The two single-coordinate transition tables of the conditional chain,
// indexed [z][x][y].
struct CoordinateTables {
    double p[2][2][2];
};

CoordinateTables coordinate_tables(const ModelParams& pr) {
    CoordinateTables t{};
    const double phi = pr.phi();
    const double ratio = pr.alpha() / pr.alpha_bar();
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            const double base = (y == 1) ? phi : 1.0 - phi;
            const double f = (1.0 - y / phi) * (1.0 - x / pr.gamma());
            t.p[1][x][y] = base * (1.0 - f);
            t.p[0][x][y] = base * (1.0 + ratio * f);
        }
    }
    return t;
}

// pmf of Z over packed states; exchangeable families spread their Hamming
// law uniformly over each weight class.
std::vector<double> latent_state_pmf(const LatentModel& model,
                                     const ModelParams& pr) {
    const std::int64_t n = pr.n();
    const std::size_t m = std::size_t{1} << n;
    if (const auto* e = model.get_if<ExplicitPmf>()) return e->pmf;
    const auto hp = hamming_pmf(model, n);
    std::vector<double> pmf(m, 0.0);
    std::vector<double> class_size(static_cast<std::size_t>(n + 1), 0.0);
    for (std::size_t z = 0; z < m; ++z) {
        class_size[static_cast<std::size_t>(std::popcount(z))] += 1.0;
    }
    for (std::size_t z = 0; z < m; ++z) {
        const auto w = static_cast<std::size_t>(std::popcount(z));
        pmf[z] = hp[w] / class_size[w];
    }
    return pmf;
}

}  // namespace

DenseKernel oracle_kernel(const LatentModel& model, const ModelParams& pr) {
    const std::int64_t n = pr.n();
    if (n > kOracleMaxN) {
        throw too_large_error("brute-force oracle supports n <= 12");
    }
    model.check_dimension(n);
    const std::size_t m = std::size_t{1} << n;
    const auto tables = coordinate_tables(pr);
    const auto zpmf = latent_state_pmf(model, pr);

    std::vector<double> kernel(m * m, 0.0);
    std::vector<double> row(m);
    for (std::size_t z = 0; z < m; ++z) {
        if (zpmf[z] == 0.0) continue;
        for (std::size_t x = 0; x < m; ++x) {
            // iterated outer product of per-coordinate rows
            row[0] = 1.0;
            std::size_t len = 1;
            for (std::int64_t k = 0; k < n; ++k) {
                const int zk = (z >> k) & 1u;
                const int xk = (x >> k) & 1u;
                const double p0 = tables.p[zk][xk][0];
                const double p1 = tables.p[zk][xk][1];
                for (std::size_t i = 0; i < len; ++i) {
                    row[i + len] = row[i] * p1;
                    row[i] = row[i] * p0;
                }
                len <<= 1;
            }
            const double w = zpmf[z];
            double* dst = kernel.data() + (x << n);
            for (std::size_t y = 0; y < m; ++y) dst[y] += w * row[y];
        }
    }
    return DenseKernel(n, std::move(kernel));
}

std::vector<Rational> oracle_kernel_exact(const std::vector<Rational>& latent_pmf,
                                          const Rational& phi,
                                          const Rational& gamma,
                                          std::int64_t n) {
    if (n > 6) throw too_large_error("exact oracle supports n <= 6");
    const std::size_t m = std::size_t{1} << n;
    if (latent_pmf.size() != m) {
        throw dimension_mismatch_error("latent pmf must have 2^n entries");
    }
    const Rational alpha = phi <= gamma ? phi : gamma;
    const Rational ratio = alpha / (Rational(1) - alpha);
    Rational tab[2][2][2];
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            const Rational base = (y == 1) ? phi : Rational(1) - phi;
            const Rational f =
                (Rational(1) - Rational(y) / phi) * (Rational(1) - Rational(x) / gamma);
            tab[1][x][y] = base * (Rational(1) - f);
            tab[0][x][y] = base * (Rational(1) + ratio * f);
        }
    }
    std::vector<Rational> kernel(m * m, Rational(0));
    std::vector<Rational> row(m);
    for (std::size_t z = 0; z < m; ++z) {
        if (latent_pmf[z] == 0) continue;
        for (std::size_t x = 0; x < m; ++x) {
            row[0] = 1;
            std::size_t len = 1;
            for (std::int64_t k = 0; k < n; ++k) {
                const int zk = (z >> k) & 1u;
                const int xk = (x >> k) & 1u;
                for (std::size_t i = 0; i < len; ++i) {
                    row[i + len] = row[i] * tab[zk][xk][1];
                    row[i] = row[i] * tab[zk][xk][0];
                }
                len <<= 1;
            }
            for (std::size_t y = 0; y < m; ++y) {
                kernel[(x << n) | y] += latent_pmf[z] * row[y];
            }
        }
    }
    return kernel;
}

ExactDistribution oracle_stationary(const DenseKernel& kernel) {
    const std::int64_t n = kernel.n();
    const std::size_t m = std::size_t{1} << n;

    // irreducibility: strong connectivity of the positive-entry digraph
    auto reachable = [&](bool transpose) {
        std::vector<char> seen(m, 0);
        std::queue<std::size_t> q;
        q.push(0);
        seen[0] = 1;
        while (!q.empty()) {
            const std::size_t u = q.front();
            q.pop();
            for (std::size_t v = 0; v < m; ++v) {
                const double p = transpose ? kernel.at(v, u) : kernel.at(u, v);
                if (p > 0.0 && !seen[v]) {
                    seen[v] = 1;
                    q.push(v);
                }
            }
        }
        for (std::size_t v = 0; v < m; ++v) {
            if (!seen[v]) return false;
        }
        return true;
    };
    if (!reachable(false) || !reachable(true)) {
        throw reducible_error("kernel is not irreducible");
    }
    // period via BFS levels: gcd of (level[u] + 1 - level[v]) over edges
    {
        std::vector<std::int64_t> level(m, -1);
        std::queue<std::size_t> q;
        q.push(0);
        level[0] = 0;
        while (!q.empty()) {
            const std::size_t u = q.front();
            q.pop();
            for (std::size_t v = 0; v < m; ++v) {
                if (kernel.at(u, v) > 0.0 && level[v] < 0) {
                    level[v] = level[u] + 1;
                    q.push(v);
                }
            }
        }
        std::int64_t g = 0;
        for (std::size_t u = 0; u < m; ++u) {
            for (std::size_t v = 0; v < m; ++v) {
                if (kernel.at(u, v) > 0.0) {
                    g = std::gcd(g, level[u] + 1 - level[v]);
                }
            }
        }
        if (g != 1) throw reducible_error("kernel is periodic");
    }

    std::vector<double> pi(m, 1.0 / static_cast<double>(m));
    std::vector<double> next(m, 0.0);
    for (int iter = 0; iter < 200000; ++iter) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t x = 0; x < m; ++x) {
            const double w = pi[x];
            if (w == 0.0) continue;
            for (std::size_t y = 0; y < m; ++y) {
                next[y] += w * kernel.at(x, y);
            }
        }
        double diff = 0.0, sum = 0.0;
        for (std::size_t y = 0; y < m; ++y) sum += next[y];
        for (std::size_t y = 0; y < m; ++y) {
            next[y] /= sum;
            diff = std::max(diff, std::abs(next[y] - pi[y]));
        }
        pi.swap(next);
        if (diff <= 1e-15) break;
    }
    // residual re-verification
    double residual = 0.0;
    for (std::size_t y = 0; y < m; ++y) {
        double v = 0.0;
        for (std::size_t x = 0; x < m; ++x) v += pi[x] * kernel.at(x, y);
        residual = std::max(residual, std::abs(v - pi[y]));
    }
    if (residual > 1e-12) {
        throw error("power iteration failed to converge");
    }
    return ExactDistribution{std::move(pi)};
}

double lumping_certificate(const DenseKernel& kernel) {
    const std::int64_t n = kernel.n();
    const std::size_t m = std::size_t{1} << n;
    // class-conditional row sums for each source state
    std::vector<std::vector<double>> sums(
        m, std::vector<double>(static_cast<std::size_t>(n + 1), 0.0));
    for (std::size_t x = 0; x < m; ++x) {
        for (std::size_t y = 0; y < m; ++y) {
            sums[x][static_cast<std::size_t>(std::popcount(y))] +=
                kernel.at(x, y);
        }
    }
    double cert = 0.0;
    std::vector<std::size_t> representative(static_cast<std::size_t>(n + 1),
                                            m);
    for (std::size_t x = 0; x < m; ++x) {
        const auto hx = static_cast<std::size_t>(std::popcount(x));
        if (representative[hx] == m) {
            representative[hx] = x;
            continue;
        }
        const auto& ref = sums[representative[hx]];
        for (std::int64_t hy = 0; hy <= n; ++hy) {
            cert = std::max(cert, std::abs(sums[x][static_cast<std::size_t>(hy)] -
                                           ref[static_cast<std::size_t>(hy)]));
        }
    }
    return cert;
}

LumpResult oracle_lump_hamming(const DenseKernel& kernel) {
    const std::int64_t n = kernel.n();
    const std::size_t m = std::size_t{1} << n;
    LumpResult out;
    out.certificate = lumping_certificate(kernel);
    if (out.certificate > 1e-10) {
        throw not_lumpable_error(
            "Hamming classes are not lumpable for this kernel (certificate " +
            std::to_string(out.certificate) + ")");
    }
    out.matrix.assign(static_cast<std::size_t>(n + 1),
                      std::vector<double>(static_cast<std::size_t>(n + 1), 0.0));
    std::vector<char> done(static_cast<std::size_t>(n + 1), 0);
    for (std::size_t x = 0; x < m; ++x) {
        const auto hx = static_cast<std::size_t>(std::popcount(x));
        if (done[hx]) continue;
        done[hx] = 1;
        for (std::size_t y = 0; y < m; ++y) {
            out.matrix[hx][static_cast<std::size_t>(std::popcount(y))] +=
                kernel.at(x, y);
        }
    }
    return out;
}

}  // namespace hyperwalk::oracle
