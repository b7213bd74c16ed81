#include "cqbm/numerics/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <queue>
#include <stdexcept>

namespace cqbm::numerics {
namespace {

constexpr double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                           0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                           0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                           0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                           0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                           0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                           0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
    double a, b;
    std::vector<double> value, error;
    double badness;
};

struct Worse {
    bool operator()(const Interval* x, const Interval* y) const { return x->badness < y->badness; }
};

void kronrod(const VectorIntegrand& f, std::size_t dim, Interval& iv, std::vector<double>& buf) {
    const double c = 0.5 * (iv.a + iv.b), h = 0.5 * (iv.b - iv.a);
    iv.value.assign(dim, 0.0);
    iv.error.assign(dim, 0.0);
    std::vector<double> gauss(dim, 0.0);
    buf.resize(dim);
    f(c, buf);
    for (std::size_t j = 0; j < dim; ++j) {
        iv.value[j] = wgk[7] * buf[j];
        gauss[j] = wg[3] * buf[j];
    }
    for (int k = 0; k < 7; ++k) {
        for (int sgn : {-1, 1}) {
            f(c + sgn * h * xgk[k], buf);
            for (std::size_t j = 0; j < dim; ++j) {
                iv.value[j] += wgk[k] * buf[j];
                if (k % 2 == 1) gauss[j] += wg[k / 2] * buf[j];
            }
        }
    }
    for (std::size_t j = 0; j < dim; ++j) {
        iv.value[j] *= h;
        iv.error[j] = std::abs(iv.value[j] - h * gauss[j]);
    }
}

}  // namespace

AdaptiveResult integrate_adaptive(const VectorIntegrand& f, std::size_t dim, std::span<const double> cuts,
                                  const AdaptiveOptions& opts, const ReferenceScale& reference) {
    if (cuts.size() < 2) throw std::invalid_argument("integrate_adaptive: need at least one interval");

    std::vector<std::unique_ptr<Interval>> store;
    std::priority_queue<Interval*, std::vector<Interval*>, Worse> heap;
    AdaptiveResult res;
    res.value.assign(dim, 0.0);
    res.error.assign(dim, 0.0);
    std::vector<double> ref(dim, 0.0), buf;

    auto update_ref = [&] {
        if (reference) {
            reference(res.value, ref);
        } else {
            for (std::size_t j = 0; j < dim; ++j) ref[j] = std::abs(res.value[j]);
        }
    };
    auto badness = [&](const Interval& iv) {
        double worst = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            const double scale = opts.rel_tol * ref[j] + opts.abs_tol;
            const double r = scale > 0 ? iv.error[j] / scale : (iv.error[j] > 0 ? std::numeric_limits<double>::max() : 0.0);
            worst = std::max(worst, r);
        }
        return worst;
    };
    auto done = [&] {
        for (std::size_t j = 0; j < dim; ++j)
            if (res.error[j] > opts.rel_tol * ref[j] + opts.abs_tol) return false;
        return true;
    };

    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (!(cuts[i + 1] > cuts[i])) continue;
        auto iv = std::make_unique<Interval>(Interval{cuts[i], cuts[i + 1], {}, {}, 0.0});
        kronrod(f, dim, *iv, buf);
        res.evaluations += 15;
        for (std::size_t j = 0; j < dim; ++j) {
            res.value[j] += iv->value[j];
            res.error[j] += iv->error[j];
        }
        store.push_back(std::move(iv));
    }
    update_ref();
    for (auto& iv : store) {
        iv->badness = badness(*iv);
        heap.push(iv.get());
    }

    int count = static_cast<int>(store.size());
    while (!done() && count < opts.max_intervals && !heap.empty()) {
        Interval* worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst->a + worst->b);
        if (!(mid > worst->a && mid < worst->b)) break;
        auto left = std::make_unique<Interval>(Interval{worst->a, mid, {}, {}, 0.0});
        auto right = std::make_unique<Interval>(Interval{mid, worst->b, {}, {}, 0.0});
        kronrod(f, dim, *left, buf);
        kronrod(f, dim, *right, buf);
        res.evaluations += 30;
        for (std::size_t j = 0; j < dim; ++j) {
            res.value[j] += left->value[j] + right->value[j] - worst->value[j];
            res.error[j] += left->error[j] + right->error[j] - worst->error[j];
        }
        worst->value.clear();
        worst->error.assign(dim, 0.0);
        update_ref();
        left->badness = badness(*left);
        right->badness = badness(*right);
        heap.push(left.get());
        heap.push(right.get());
        store.push_back(std::move(left));
        store.push_back(std::move(right));
        ++count;
    }

    // Re-sum to shed the drift of incremental updates.
    std::fill(res.value.begin(), res.value.end(), 0.0);
    std::fill(res.error.begin(), res.error.end(), 0.0);
    for (auto& iv : store) {
        if (iv->value.empty()) continue;
        for (std::size_t j = 0; j < dim; ++j) {
            res.value[j] += iv->value[j];
            res.error[j] += iv->error[j];
        }
    }
    update_ref();
    res.converged = done();
    return res;
}

}  // namespace cqbm::numerics
