#include "blockdiff/numerics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace blockdiff {

template <typename T>
Mat<T> matmul(const Mat<T> & a, const Mat<T> & b) {
    if (a.cols != b.rows) {
        throw std::invalid_argument("matmul: inner dimensions differ (" + std::to_string(a.cols) + " vs " +
                                    std::to_string(b.rows) + ")");
    }
    Mat<T> c(a.rows, b.cols);
    for (int i = 0; i < a.rows; i++) {
        const T * arow = a.row(i);
        T * crow = c.row(i);
        for (int k = 0; k < a.cols; k++) {
            const T aik = arow[k];
            const T * brow = b.row(k);
            for (int j = 0; j < b.cols; j++) {
                crow[j] += aik * brow[j];
            }
        }
    }
    return c;
}

template <typename T>
Mat<T> matmul_tn(const Mat<T> & a, const Mat<T> & b) {
    if (a.rows != b.rows) {
        throw std::invalid_argument("matmul_tn: row counts differ");
    }
    Mat<T> c(a.cols, b.cols);
    for (int k = 0; k < a.rows; k++) {
        const T * arow = a.row(k);
        const T * brow = b.row(k);
        for (int i = 0; i < a.cols; i++) {
            const T aki = arow[i];
            T * crow = c.row(i);
            for (int j = 0; j < b.cols; j++) {
                crow[j] += aki * brow[j];
            }
        }
    }
    return c;
}

template <typename T>
Mat<T> matmul_nt(const Mat<T> & a, const Mat<T> & b) {
    if (a.cols != b.cols) {
        throw std::invalid_argument("matmul_nt: column counts differ");
    }
    Mat<T> c(a.rows, b.rows);
    for (int i = 0; i < a.rows; i++) {
        const T * arow = a.row(i);
        T * crow = c.row(i);
        for (int j = 0; j < b.rows; j++) {
            const T * brow = b.row(j);
            T acc = T(0);
            for (int k = 0; k < a.cols; k++) {
                acc += arow[k] * brow[k];
            }
            crow[j] = acc;
        }
    }
    return c;
}

template <typename T>
Mat<T> masked_softmax(const Mat<T> & scores, const MaskMatrix & allow) {
    if (scores.rows != allow.q_len || scores.cols != allow.k_len) {
        throw std::invalid_argument("masked_softmax: score/mask shape mismatch");
    }
    Mat<T> out(scores.rows, scores.cols);
    for (int i = 0; i < scores.rows; i++) {
        const T * srow = scores.row(i);
        T * orow = out.row(i);
        T mx = -std::numeric_limits<T>::infinity();
        bool any = false;
        for (int j = 0; j < scores.cols; j++) {
            if (allow.allowed(i, j)) {
                any = true;
                if (srow[j] > mx) {
                    mx = srow[j];
                }
            }
        }
        if (!any) {
            throw std::runtime_error("masked_softmax: fully masked query row " + std::to_string(i));
        }
        T sum = T(0);
        for (int j = 0; j < scores.cols; j++) {
            if (allow.allowed(i, j)) {
                orow[j] = std::exp(srow[j] - mx);
                sum += orow[j];
            }
        }
        for (int j = 0; j < scores.cols; j++) {
            if (allow.allowed(i, j)) {
                orow[j] /= sum;
            }
        }
    }
    return out;
}

template <typename T>
std::vector<T> rms_norm(std::span<const T> x, std::span<const T> gamma, T eps) {
    if (x.size() != gamma.size()) {
        throw std::invalid_argument("rms_norm: length mismatch");
    }
    T ms = T(0);
    for (size_t i = 0; i < x.size(); i++) {
        ms += x[i] * x[i];
    }
    ms /= T(x.size());
    const T r = T(1) / std::sqrt(ms + eps);
    std::vector<T> y(x.size());
    for (size_t i = 0; i < x.size(); i++) {
        y[i] = gamma[i] * x[i] * r;
    }
    return y;
}

template <typename T>
std::pair<T, int> cross_entropy(const Mat<T> & logits, const std::vector<int> & targets, int ignore_marker) {
    if (static_cast<int>(targets.size()) != logits.rows) {
        throw std::invalid_argument("cross_entropy: one target per logit row required");
    }
    T loss = T(0);
    int count = 0;
    for (int i = 0; i < logits.rows; i++) {
        const int y = targets[i];
        if (y == ignore_marker) {
            continue;
        }
        if (y < 0 || y >= logits.cols) {
            throw std::out_of_range("cross_entropy: target id " + std::to_string(y) + " outside vocabulary");
        }
        const T * row = logits.row(i);
        T mx = row[0];
        for (int j = 1; j < logits.cols; j++) {
            if (row[j] > mx) {
                mx = row[j];
            }
        }
        T sum = T(0);
        for (int j = 0; j < logits.cols; j++) {
            sum += std::exp(row[j] - mx);
        }
        loss += std::log(sum) - (row[y] - mx);
        count++;
    }
    if (count == 0) {
        return {T(0), 0};
    }
    return {loss / T(count), count};
}

uint64_t prng_next_u64(PrngState & s) {
    s.state += 0x9E3779B97F4A7C15ull;
    uint64_t z = s.state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double prng_next(PrngState & s) {
    return static_cast<double>(prng_next_u64(s) >> 11) * 0x1.0p-53;
}

int prng_below(PrngState & s, int n) {
    if (n <= 0) {
        throw std::invalid_argument("prng_below: n must be positive");
    }
    return static_cast<int>(prng_next_u64(s) % static_cast<uint64_t>(n));
}

double prng_range(PrngState & s, double lo, double hi) {
    return lo + (hi - lo) * prng_next(s);
}

uint64_t sub_seed(uint64_t seed, uint64_t stream) {
    PrngState s{seed ^ (0xA0761D6478BD642Full * (stream + 1))};
    return prng_next_u64(s);
}

template Mat<float> matmul(const Mat<float> &, const Mat<float> &);
template Mat<double> matmul(const Mat<double> &, const Mat<double> &);
template Mat<float> matmul_tn(const Mat<float> &, const Mat<float> &);
template Mat<double> matmul_tn(const Mat<double> &, const Mat<double> &);
template Mat<float> matmul_nt(const Mat<float> &, const Mat<float> &);
template Mat<double> matmul_nt(const Mat<double> &, const Mat<double> &);
template Mat<float> masked_softmax(const Mat<float> &, const MaskMatrix &);
template Mat<double> masked_softmax(const Mat<double> &, const MaskMatrix &);
template std::vector<float> rms_norm(std::span<const float>, std::span<const float>, float);
template std::vector<double> rms_norm(std::span<const double>, std::span<const double>, double);
template std::pair<float, int> cross_entropy(const Mat<float> &, const std::vector<int> &, int);
template std::pair<double, int> cross_entropy(const Mat<double> &, const std::vector<int> &, int);

}   // namespace blockdiff
