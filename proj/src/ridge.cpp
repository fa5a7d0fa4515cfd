#include <cmath>

#include "models.hpp"

namespace trajens {

namespace {

// Solves A x = b in place by Gaussian elimination with partial pivoting.
std::vector<double> solve_dense(std::vector<double> A, std::vector<double> b) {
    const std::size_t d = b.size();
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < d; ++r)
            if (std::abs(A[r * d + col]) > std::abs(A[piv * d + col])) piv = r;
        if (piv != col) {
            for (std::size_t c = 0; c < d; ++c) std::swap(A[col * d + c], A[piv * d + c]);
            std::swap(b[col], b[piv]);
        }
        double p = A[col * d + col];
        if (std::abs(p) < 1e-300) throw NumericError("singular system in ridge solve");
        for (std::size_t r = col + 1; r < d; ++r) {
            double m = A[r * d + col] / p;
            if (m == 0.0) continue;
            for (std::size_t c = col; c < d; ++c) A[r * d + c] -= m * A[col * d + c];
            b[r] -= m * b[col];
        }
    }
    std::vector<double> x(d);
    for (std::size_t ri = d; ri-- > 0;) {
        double s = b[ri];
        for (std::size_t c = ri + 1; c < d; ++c) s -= A[ri * d + c] * x[c];
        x[ri] = s / A[ri * d + ri];
    }
    return x;
}

}  // namespace

TrainResult train_ridge(const Dataset& d, const std::vector<double>& w,
                        const std::vector<std::size_t>& fs, const LearnerConfig& cfg,
                        std::uint64_t) {
    const std::size_t n = d.n();
    const std::size_t p = fs.size();
    const std::size_t dim = p + 1;  // intercept last

    auto design_row = [&](std::size_t i, std::vector<double>& z) {
        for (std::size_t k = 0; k < p; ++k) z[k] = d.features.at(i, fs[k]);
        z[p] = 1.0;
    };

    auto model = std::make_shared<RidgeModel>();
    model->set_meta(d.task_kind, d.f(), fs);

    TrainResult out;
    std::vector<double> z(dim);

    if (d.task_kind == TaskKind::regression) {
        // closed form: (Z' W Z + l2 I) beta = Z' W y, intercept unpenalized
        std::vector<double> A(dim * dim, 0.0), b(dim, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            design_row(i, z);
            for (std::size_t r = 0; r < dim; ++r) {
                double wz = w[i] * z[r];
                for (std::size_t c = 0; c < dim; ++c) A[r * dim + c] += wz * z[c];
                b[r] += wz * d.labels[i];
            }
        }
        for (std::size_t k = 0; k < p; ++k) A[k * dim + k] += cfg.ridge.l2;
        auto beta = solve_dense(std::move(A), std::move(b));
        model->coef.assign(beta.begin(), beta.begin() + p);
        model->intercept = beta[p];

        out.curves.values = Matrix(n, 1);
        for (std::size_t i = 0; i < n; ++i) {
            double l = pointwise_loss(model->predict_row(d.features.row(i)), d.labels[i],
                                      TaskKind::regression);
            if (!std::isfinite(l)) throw NumericError("non-finite loss in ridge fit");
            out.curves.values.at(i, 0) = l;
        }
    } else {
        // logistic regression via IRLS, cfg.iterations Newton steps
        std::vector<double> beta(dim, 0.0);
        out.curves.values = Matrix(n, cfg.iterations);
        for (std::size_t it = 0; it < cfg.iterations; ++it) {
            std::vector<double> A(dim * dim, 0.0), g(dim, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                design_row(i, z);
                double eta = 0.0;
                for (std::size_t k = 0; k < dim; ++k) eta += beta[k] * z[k];
                double pr = sigmoid(eta);
                double hv = std::max(pr * (1.0 - pr), 1e-10);
                for (std::size_t r = 0; r < dim; ++r) {
                    double wz = w[i] * hv * z[r];
                    for (std::size_t c = 0; c < dim; ++c) A[r * dim + c] += wz * z[c];
                    g[r] += w[i] * (d.labels[i] - pr) * z[r];
                }
            }
            for (std::size_t k = 0; k < p; ++k) {
                A[k * dim + k] += cfg.ridge.l2;
                g[k] -= cfg.ridge.l2 * beta[k];
            }
            auto step = solve_dense(std::move(A), std::move(g));
            for (std::size_t k = 0; k < dim; ++k) beta[k] += step[k];

            model->coef.assign(beta.begin(), beta.begin() + p);
            model->intercept = beta[p];
            for (std::size_t i = 0; i < n; ++i) {
                double l = pointwise_loss(model->predict_row(d.features.row(i)), d.labels[i],
                                          TaskKind::binary_classification);
                if (!std::isfinite(l))
                    throw NumericError("non-finite loss in ridge fit at iteration " +
                                       std::to_string(it + 1));
                out.curves.values.at(i, it) = l;
            }
        }
    }

    out.model = std::move(model);
    return out;
}

}  // namespace trajens
