#include "cnp/optimize.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <memory>
#include <stdexcept>

namespace cnp {

namespace {

struct VectorDeleter {
    void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};
using VectorPtr = std::unique_ptr<gsl_vector, VectorDeleter>;

VectorPtr make_vector(std::span<const double> values) {
    VectorPtr v(gsl_vector_alloc(values.size()));
    if (!v) throw std::bad_alloc();
    for (std::size_t i = 0; i < values.size(); ++i) gsl_vector_set(v.get(), i, values[i]);
    return v;
}

std::vector<double> to_std(const gsl_vector* v) {
    std::vector<double> out(v->size);
    for (std::size_t i = 0; i < v->size; ++i) out[i] = gsl_vector_get(v, i);
    return out;
}

std::span<const double> view(const gsl_vector* v) {
    // Vectors allocated here are contiguous (stride 1).
    return {v->data, v->size};
}

struct GradientContext {
    const ObjectiveWithGradient* f;
    std::vector<double> scratch;
};

double nm_call(const gsl_vector* x, void* params) {
    return (*static_cast<const Objective*>(params))(view(x));
}

double qn_f(const gsl_vector* x, void* params) {
    auto* ctx = static_cast<GradientContext*>(params);
    return (*ctx->f)(view(x), ctx->scratch);
}

void qn_df(const gsl_vector* x, void* params, gsl_vector* g) {
    auto* ctx = static_cast<GradientContext*>(params);
    (*ctx->f)(view(x), ctx->scratch);
    for (std::size_t i = 0; i < ctx->scratch.size(); ++i) gsl_vector_set(g, i, ctx->scratch[i]);
}

void qn_fdf(const gsl_vector* x, void* params, double* value, gsl_vector* g) {
    auto* ctx = static_cast<GradientContext*>(params);
    *value = (*ctx->f)(view(x), ctx->scratch);
    for (std::size_t i = 0; i < ctx->scratch.size(); ++i) gsl_vector_set(g, i, ctx->scratch[i]);
}

struct HandlerGuard {
    gsl_error_handler_t* previous = gsl_set_error_handler_off();
    ~HandlerGuard() { gsl_set_error_handler(previous); }
};

}  // namespace

Minimum nelder_mead(const Objective& f, std::vector<double> x0, double step, int max_iter, double size_tol) {
    if (x0.empty()) throw std::invalid_argument("nelder_mead: empty start point");
    HandlerGuard guard;
    const std::size_t n = x0.size();
    gsl_multimin_function fn{&nm_call, n, const_cast<Objective*>(&f)};
    auto x = make_vector(x0);
    std::vector<double> steps(n, step);
    auto ss = make_vector(steps);

    std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)> s(
        gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n), &gsl_multimin_fminimizer_free);
    gsl_multimin_fminimizer_set(s.get(), &fn, x.get(), ss.get());

    int iter = 0;
    while (iter < max_iter) {
        ++iter;
        if (gsl_multimin_fminimizer_iterate(s.get()) != GSL_SUCCESS) break;
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s.get()), size_tol) == GSL_SUCCESS) break;
    }
    return {to_std(gsl_multimin_fminimizer_x(s.get())), gsl_multimin_fminimizer_minimum(s.get()), iter};
}

Minimum quasi_newton(const ObjectiveWithGradient& f, std::vector<double> x0, int max_iter, double grad_tol) {
    if (x0.empty()) throw std::invalid_argument("quasi_newton: empty start point");
    HandlerGuard guard;
    const std::size_t n = x0.size();
    GradientContext ctx{&f, std::vector<double>(n)};
    gsl_multimin_function_fdf fn{&qn_f, &qn_df, &qn_fdf, n, &ctx};
    auto x = make_vector(x0);

    std::unique_ptr<gsl_multimin_fdfminimizer, decltype(&gsl_multimin_fdfminimizer_free)> s(
        gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, n), &gsl_multimin_fdfminimizer_free);
    gsl_multimin_fdfminimizer_set(s.get(), &fn, x.get(), 0.01, 0.1);

    int iter = 0;
    while (iter < max_iter) {
        ++iter;
        if (gsl_multimin_fdfminimizer_iterate(s.get()) != GSL_SUCCESS) break;
        if (gsl_multimin_test_gradient(s.get()->gradient, grad_tol) == GSL_SUCCESS) break;
    }
    return {to_std(gsl_multimin_fdfminimizer_x(s.get())), gsl_multimin_fdfminimizer_minimum(s.get()), iter};
}

}  // namespace cnp
