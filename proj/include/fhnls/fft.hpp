#pragma once

// Thin RAII layer over FFTW3. Plans are created once per (shape, kind) with
// FFTW_ESTIMATE | FFTW_UNALIGNED and cached behind a mutex, so transforms are
// deterministic across processes and safe to call from worker threads.

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <vector>

namespace fhnls::detail {

enum class PlanKind : int { c2c_fwd = 0, c2c_bwd = 1, r2c = 2, c2r = 3 };

class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(const std::vector<int>& dims, PlanKind kind, void* in, void* out) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto key = std::make_pair(dims, static_cast<int>(kind));
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;

        const int rank = static_cast<int>(dims.size());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        fftw_plan p = nullptr;
        switch (kind) {
            case PlanKind::c2c_fwd:
                p = fftw_plan_dft(rank, dims.data(), static_cast<fftw_complex*>(in),
                                  static_cast<fftw_complex*>(out), FFTW_FORWARD, flags);
                break;
            case PlanKind::c2c_bwd:
                p = fftw_plan_dft(rank, dims.data(), static_cast<fftw_complex*>(in),
                                  static_cast<fftw_complex*>(out), FFTW_BACKWARD, flags);
                break;
            case PlanKind::r2c:
                p = fftw_plan_dft_r2c(rank, dims.data(), static_cast<double*>(in),
                                      static_cast<fftw_complex*>(out), flags);
                break;
            case PlanKind::c2r:
                p = fftw_plan_dft_c2r(rank, dims.data(), static_cast<fftw_complex*>(in),
                                      static_cast<double*>(out), flags);
                break;
        }
        plans_[key] = p;
        return p;
    }

private:
    PlanCache() = default;
    std::mutex mutex_;
    std::map<std::pair<std::vector<int>, int>, fftw_plan> plans_;
};

// Unnormalized in-place complex DFT; sign = -1 forward, +1 backward.
inline void dft_inplace(std::complex<double>* data, const std::vector<int>& dims, int sign) {
    auto* c = reinterpret_cast<fftw_complex*>(data);
    fftw_plan p = PlanCache::instance().get(
        dims, sign < 0 ? PlanKind::c2c_fwd : PlanKind::c2c_bwd, c, c);
    fftw_execute_dft(p, c, c);
}

// Unnormalized real-to-complex transform; out holds the half spectrum with the
// last axis truncated to n/2+1.
inline void dft_r2c(double* in, std::complex<double>* out, const std::vector<int>& dims) {
    auto* c = reinterpret_cast<fftw_complex*>(out);
    fftw_plan p = PlanCache::instance().get(dims, PlanKind::r2c, in, c);
    fftw_execute_dft_r2c(p, in, c);
}

// Unnormalized complex-to-real inverse; destroys the input spectrum.
inline void dft_c2r(std::complex<double>* in, double* out, const std::vector<int>& dims) {
    auto* c = reinterpret_cast<fftw_complex*>(in);
    fftw_plan p = PlanCache::instance().get(dims, PlanKind::c2r, c, out);
    fftw_execute_dft_c2r(p, c, out);
}

}  // namespace fhnls::detail
