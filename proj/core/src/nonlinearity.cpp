#include "sgf/nonlinearity.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "sgf/operators.hpp"

namespace sgf {

namespace {

// FFTW planner calls are not thread-safe; executions on private buffers are.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// Per-thread transform workspace: each thread owns its plans and buffers, so
// executions never share state; only planning is serialized.
class TransformWorkspace {
  public:
    explicit TransformWorkspace(int grid) : grid_(grid) {
        const std::size_t n = std::size_t(grid) * grid;
        for (auto& buf : bufs_) buf = fftw_alloc_complex(n);
        {
            std::lock_guard<std::mutex> lock(planner_mutex());
            backward_ = fftw_plan_dft_2d(grid, grid, bufs_[0], bufs_[0], FFTW_BACKWARD,
                                         FFTW_ESTIMATE | FFTW_UNALIGNED);
            forward_ = fftw_plan_dft_2d(grid, grid, bufs_[0], bufs_[0], FFTW_FORWARD,
                                        FFTW_ESTIMATE | FFTW_UNALIGNED);
        }
        if (!backward_ || !forward_) throw std::runtime_error("fftw plan creation failed");
    }
    ~TransformWorkspace() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(backward_);
        fftw_destroy_plan(forward_);
        for (auto& buf : bufs_) fftw_free(buf);
    }
    TransformWorkspace(const TransformWorkspace&) = delete;
    TransformWorkspace& operator=(const TransformWorkspace&) = delete;

    int grid() const { return grid_; }
    fftw_complex* buf(int i) { return bufs_[std::size_t(i)]; }
    void to_physical(int i) { fftw_execute_dft(backward_, buf(i), buf(i)); }
    void to_modes(int i) { fftw_execute_dft(forward_, buf(i), buf(i)); }

    std::size_t slot(WaveVector k) const {
        int i = k.k1 >= 0 ? k.k1 : k.k1 + grid_;
        int j = k.k2 >= 0 ? k.k2 : k.k2 + grid_;
        return std::size_t(i) * grid_ + std::size_t(j);
    }

  private:
    int grid_;
    fftw_complex* bufs_[3] = {nullptr, nullptr, nullptr};
    fftw_plan backward_ = nullptr;
    fftw_plan forward_ = nullptr;
};

TransformWorkspace& workspace_for(int grid) {
    thread_local std::map<int, TransformWorkspace> cache;
    auto it = cache.find(grid);
    if (it == cache.end()) it = cache.try_emplace(grid, grid).first;
    return it->second;
}

inline void put(fftw_complex* buf, std::size_t s, Complex z) {
    buf[s][0] = z.real();
    buf[s][1] = z.imag();
}
inline Complex get(const fftw_complex* buf, std::size_t s) {
    return {buf[s][0], buf[s][1]};
}

}  // namespace

SpectralField nonlinear_term(const SpectralField& u, const SpectralField& v) {
    if (u.alpha() != v.alpha())
        throw std::invalid_argument("nonlinear_term: alpha mismatch");
    if (u.cutoff() != v.cutoff())
        throw std::invalid_argument("nonlinear_term: cutoff mismatch");

    const int n = u.cutoff();
    const double alpha = u.alpha();
    // Support 2n+1 per input, product support 4n+1: grid 4n+2 is alias-free.
    const int grid = 4 * n + 2;
    auto& ws = workspace_for(grid);
    const std::size_t cells = std::size_t(grid) * grid;

    for (int b = 0; b < 3; ++b)
        for (std::size_t s = 0; s < cells; ++s) put(ws.buf(b), s, {});

    // buf0 = transported scalar q = curl((I + alpha A) u); buf1/buf2 = v.
    u.for_each([&](WaveVector k, Complex a) {
        if (a == Complex{}) return;
        double m = orientation_sign(k) * std::sqrt(k.norm2()) * (1.0 + alpha * k.norm2());
        put(ws.buf(0), ws.slot(k), Complex{0.0, m} * a);
    });
    v.for_each([&](WaveVector k, Complex a) {
        if (a == Complex{}) return;
        double dx, dy;
        direction(k, dx, dy);
        put(ws.buf(1), ws.slot(k), a * dx);
        put(ws.buf(2), ws.slot(k), a * dy);
    });

    ws.to_physical(0);
    ws.to_physical(1);
    ws.to_physical(2);

    // q x v = q * (-v2, v1) pointwise.
    for (std::size_t s = 0; s < cells; ++s) {
        const Complex q = get(ws.buf(0), s);
        const Complex vx = get(ws.buf(1), s);
        const Complex vy = get(ws.buf(2), s);
        put(ws.buf(1), s, -q * vy);
        put(ws.buf(2), s, q * vx);
    }

    ws.to_modes(1);
    ws.to_modes(2);

    const double scale = 1.0 / double(cells);
    SpectralField out(n, alpha);
    out.transform([&](WaveVector k, Complex) {
        double dx, dy;
        direction(k, dx, dy);
        const std::size_t s = ws.slot(k);
        Complex c = (get(ws.buf(1), s) * dx + get(ws.buf(2), s) * dy) * scale;
        return c / (1.0 + alpha * k.norm2());
    });
    return out;
}

}  // namespace sgf
