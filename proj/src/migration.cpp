#include "stressnet/migration.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace stressnet {

MigrationKernel::MigrationKernel(Field p_out_, Field eps_in_, double m_)
    : p_out(std::move(p_out_)), eps_in(std::move(eps_in_)), m(m_) {
    if (m < 0.0 || m > 1.0)
        throw std::invalid_argument("migration: proportion m must lie in [0, 1], got " +
                                    std::to_string(m));
    for (double v : p_out.values)
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("migration: departure kernel values must lie in [0, 1]");
    for (double v : eps_in.values)
        if (!(v >= 0.0))
            throw std::invalid_argument("migration: reception kernel values must be >= 0");
    double total = integrate(eps_in);
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("migration: reception kernel integral is " +
                                    std::to_string(total) + ", expected 1 (normalize first)");
}

Field gaussian_kernel(const Grid& g, double center_x, double center_y, double radius) {
    if (!(radius > 0.0))
        throw std::invalid_argument("gaussian kernel: radius must be > 0");
    Field f(g);
    double inv_r2 = 1.0 / (radius * radius);
    for (int j = 0; j < g.ny; ++j) {
        double dy = g.center_y(j) - center_y;
        for (int i = 0; i < g.nx; ++i) {
            double dx = g.center_x(i) - center_x;
            f(i, j) = std::exp(-(dx * dx + dy * dy) * inv_r2);
        }
    }
    return f;
}

Field normalize_reception(const Field& raw) {
    double total = integrate(raw);
    if (!(total > 0.0))
        throw std::invalid_argument("normalize_reception: kernel integral must be > 0, got " +
                                    std::to_string(total));
    Field out(*raw.grid);
    double inv = 1.0 / total;
    for (int c = 0; c < raw.size(); ++c) out[c] = raw[c] * inv;
    return out;
}

double migration_add(const Field& u_src, const MigrationKernel& k, Field& src_out,
                     Field& dst_out) {
    if (!u_src.grid->same_layout(*k.p_out.grid))
        throw std::invalid_argument("migration: u_src not on the channel's source grid");
    if (!dst_out.grid->same_layout(*k.eps_in.grid))
        throw std::invalid_argument("migration: dst_out not on the channel's destination grid");
    if (k.m == 0.0) return 0.0;
    double I = weighted_integral(k.p_out, u_src);
    const double* u = u_src.values.data();
    const double* p = k.p_out.values.data();
    double* so = src_out.values.data();
    const std::size_t ns = u_src.values.size();
    const double m = k.m;
    for (std::size_t c = 0; c < ns; ++c) so[c] -= m * p[c] * u[c];
    const double* e = k.eps_in.values.data();
    double*dst = dst_out.values.data();
    const double inflow = m * I;
    const std::size_t nd = dst_out.values.size();
    for (std::size_t c = 0; c < nd; ++c) dst[c] += e[c] * inflow;
    return I;
}

std::pair<Field, Field> migration_rhs(const Field& u_src, const Field& u_dst,
                                      const MigrationKernel& out_kernel,
                                      const MigrationKernel* in_kernel) {
    Field src_delta(*u_src.grid, 0.0);
    Field dst_delta(*u_dst.grid, 0.0);
    migration_add(u_src, out_kernel, src_delta, dst_delta);
    if (in_kernel) migration_add(u_dst, *in_kernel, dst_delta, src_delta);
    return {std::move(src_delta), std::move(dst_delta)};
}

}  // namespace stressnet
