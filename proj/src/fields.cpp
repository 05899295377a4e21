#include "conjlab/fields.hpp"

#include <cmath>
#include <limits>

#include "conjlab/errors.hpp"

namespace conjlab {

namespace {

double get_param(const ParamMap& p, const std::string& key) {
    auto it = p.find(key);
    if (it == p.end()) throw InvalidArgument("missing parameter: " + key);
    return it->second;
}

double get_param_or(const ParamMap& p, const std::string& key, double def) {
    auto it = p.find(key);
    return it == p.end() ? def : it->second;
}

}  // namespace

struct MatrixField::Impl {
    std::string kind;
    int dim = 0;
    bool constant = false;
    bool diagonal = false;
    Mat const_value;
    std::function<Mat(double)> eval;
    // exact antiderivative of diagonal entries, when the kind admits one
    std::function<double(int, double, double)> diag_integral;
};

MatrixField MatrixField::constant(Mat a) {
    if (a.rows() != a.cols() || a.rows() < 1)
        throw InvalidArgument("coefficient matrix must be square");
    auto impl = std::make_shared<Impl>();
    impl->kind = "constant";
    impl->dim = static_cast<int>(a.rows());
    impl->constant = true;
    impl->diagonal = true;
    for (int i = 0; i < impl->dim && impl->diagonal; ++i)
        for (int j = 0; j < impl->dim; ++j)
            if (i != j && a(i, j) != 0.0) { impl->diagonal = false; break; }
    impl->const_value = a;
    Mat av = a;
    impl->eval = [av](double) { return av; };
    if (impl->diagonal)
        impl->diag_integral = [av](int i, double s, double t) { return av(i, i) * (t - s); };
    return MatrixField(impl);
}

MatrixField MatrixField::diagonal_table(std::vector<double> times,
                                        std::vector<std::vector<double>> entries) {
    if (entries.empty()) throw InvalidArgument("diagonal table needs >= 1 entry");
    auto tables = std::make_shared<std::vector<PiecewiseLinear>>();
    for (auto& e : entries) tables->emplace_back(times, e);
    auto impl = std::make_shared<Impl>();
    impl->kind = "diagonal_table";
    impl->dim = static_cast<int>(entries.size());
    impl->diagonal = true;
    const int n = impl->dim;
    impl->eval = [tables, n](double t) {
        Mat a = Mat::Zero(n, n);
        for (int i = 0; i < n; ++i) a(i, i) = (*tables)[i].at(t);
        return a;
    };
    impl->diag_integral = [tables](int i, double s, double t) {
        return (*tables)[static_cast<size_t>(i)].integral(s, t);
    };
    return MatrixField(impl);
}

MatrixField MatrixField::builtin(const std::string& name, const ParamMap& params) {
    auto impl = std::make_shared<Impl>();
    impl->kind = "builtin:" + name;
    if (name == "sin_diag") {
        const double amp = get_param(params, "amp");
        impl->dim = 2;
        impl->diagonal = true;
        impl->eval = [amp](double t) {
            Mat a = Mat::Zero(2, 2);
            a(0, 0) = -1.0 - amp * std::sin(t);
            a(1, 1) = 1.0;
            return a;
        };
        impl->diag_integral = [amp](int i, double s, double t) {
            if (i == 0) return -(t - s) + amp * (std::cos(t) - std::cos(s));
            return t - s;
        };
        return MatrixField(impl);
    }
    if (name == "shear") {
        const double amp = get_param(params, "amp");
        const double omega = get_param(params, "omega");
        impl->dim = 2;
        impl->eval = [amp, omega](double t) {
            Mat a = Mat::Zero(2, 2);
            a(0, 0) = -1.0;
            a(0, 1) = amp * std::cos(omega * t);
            a(1, 1) = 1.0;
            return a;
        };
        return MatrixField(impl);
    }
    throw InvalidArgument("unknown matrix builtin: " + name);
}

int MatrixField::dim() const { return impl_->dim; }
Mat MatrixField::at(double t) const { return impl_->eval(t); }
bool MatrixField::is_constant() const { return impl_->constant; }
bool MatrixField::is_diagonal() const { return impl_->diagonal; }
const std::string& MatrixField::kind() const { return impl_->kind; }

std::optional<double> MatrixField::diagonal_integral(int i, double s, double t) const {
    if (!impl_->diagonal || !impl_->diag_integral) return std::nullopt;
    return impl_->diag_integral(i, s, t);
}

MatrixField::BoundM MatrixField::bound_M(Interval window, double grid_step) const {
    if (grid_step <= 0.0) throw InvalidArgument("grid step must be positive");
    BoundM out;
    out.grid_step = grid_step;
    for (double t = window.lo; t <= window.hi + 0.5 * grid_step; t += grid_step)
        out.value = std::max(out.value, op_norm(impl_->eval(std::min(t, window.hi))));
    return out;
}

struct NonlinearField::Impl {
    std::string kind;
    int dim = 0;
    bool zero = false;
    double local_radius = std::numeric_limits<double>::infinity();
    std::function<Vec(double, const Vec&)> eval;
    ScalarModulus mu;
    ScalarModulus r;
};

NonlinearField NonlinearField::zero(int dim) {
    auto impl = std::make_shared<Impl>();
    impl->kind = "zero";
    impl->dim = dim;
    impl->zero = true;
    impl->eval = [dim](double, const Vec&) { return Vec(Vec::Zero(dim)); };
    impl->mu = ScalarModulus::constant(0.0);
    impl->r = ScalarModulus::constant(0.0);
    return NonlinearField(impl);
}

NonlinearField NonlinearField::custom(int dim, std::function<Vec(double, const Vec&)> eval,
                                      ScalarModulus mu, ScalarModulus r, std::string kind,
                                      double local_radius) {
    auto impl = std::make_shared<Impl>();
    impl->kind = std::move(kind);
    impl->dim = dim;
    impl->eval = std::move(eval);
    impl->mu = std::move(mu);
    impl->r = std::move(r);
    impl->local_radius = local_radius;
    return NonlinearField(impl);
}

namespace {

double unit_ball_f1(double eps, double x) {
    return x >= 0.0 ? eps * x : eps * x * x * x;
}

}  // namespace

NonlinearField NonlinearField::builtin(const std::string& name, const ParamMap& params) {
    if (name == "zero") {
        return zero(static_cast<int>(get_param_or(params, "dim", 2)));
    }
    if (name == "planar_sine") {
        const double sigma = get_param(params, "sigma");
        if (sigma < 0.0) throw InvalidArgument("sigma must be nonnegative");
        auto eval = [sigma](double, const Vec& x) {
            Vec f(2);
            f[0] = sigma * std::sin(x[1]);
            f[1] = sigma * std::sin(x[0]);
            return f;
        };
        return custom(2, eval, ScalarModulus::constant(sigma * std::sqrt(2.0)),
                      ScalarModulus::constant(sigma), "builtin:planar_sine");
    }
    if (name == "unit_ball_local") {
        const double eps = get_param(params, "epsilon");
        if (eps <= 0.0 || eps >= 1.0) throw InvalidArgument("epsilon must be in (0,1)");
        auto eval = [eps](double, const Vec& x) {
            Vec f(2);
            f[0] = unit_ball_f1(eps, x[0]);
            f[1] = -unit_ball_f1(eps, x[1]);
            return f;
        };
        // bounds on [-1,1]^2: |f_i| <= eps, |f_i'| <= 3 eps (cubic branch)
        return custom(2, eval, ScalarModulus::constant(eps * std::sqrt(2.0)),
                      ScalarModulus::constant(3.0 * eps), "builtin:unit_ball_local",
                      /*local_radius=*/1.0);
    }
    if (name == "scalar_time") {
        const double eps = get_param(params, "epsilon");
        const double delta = get_param(params, "delta");
        const double box = get_param_or(params, "box", 2.0);
        if (!(0.0 < eps && eps < delta)) throw InvalidArgument("need 0 < epsilon < delta");
        auto gain = [](double t) { return 2.0 * std::exp(-t) / (std::exp(t) + std::exp(-t)); };
        auto blend = [eps, delta](double u) {
            if (u <= eps) return 0.0;
            if (u >= delta) return 1.0;
            const double v = (u - eps) / (delta - eps);
            return v * v * (3.0 - 2.0 * v);
        };
        auto eval = [gain, blend](double t, const Vec& x) {
            Vec f(1);
            f[0] = blend(std::abs(x[0])) * gain(t) * x[0];
            return f;
        };
        const double lip = 1.0 + 1.5 * delta / (delta - eps);
        auto mu = ScalarModulus::from_function(
            "scalar_time_mu", [gain, box](double t) { return gain(t) * box; });
        auto r = ScalarModulus::from_function(
            "scalar_time_r", [gain, lip](double t) { return gain(t) * lip; });
        return custom(1, eval, mu, r, "builtin:scalar_time");
    }
    if (name == "sawtooth_sine") {
        const double c = get_param(params, "c");
        auto saw = ScalarModulus::sawtooth(c);
        auto eval = [saw](double t, const Vec& x) {
            Vec f(1);
            f[0] = saw.at(t) * std::sin(x[0]);
            return f;
        };
        return custom(1, eval, saw, saw, "builtin:sawtooth_sine");
    }
    throw InvalidArgument("unknown nonlinear builtin: " + name);
}

int NonlinearField::dim() const { return impl_->dim; }
Vec NonlinearField::at(double t, const Vec& x) const { return impl_->eval(t, x); }
const ScalarModulus& NonlinearField::mu() const { return impl_->mu; }
const ScalarModulus& NonlinearField::r() const { return impl_->r; }
double NonlinearField::local_radius() const { return impl_->local_radius; }
bool NonlinearField::is_zero() const { return impl_->zero; }
const std::string& NonlinearField::kind() const { return impl_->kind; }

NonlinearField radial_extend(const NonlinearField& inner, double radius) {
    if (radius <= 0.0) throw InvalidArgument("extension radius must be positive");
    if (inner.local_radius() < radius)
        throw InvalidArgument("inner field is not defined on the requested ball");
    const Vec origin = Vec::Zero(inner.dim());
    for (double t : {-1.0, 0.0, 1.0})
        if (inner.at(t, origin).norm() > 1e-12)
            throw InvalidArgument("radial extension requires f(t,0) = 0");
    auto base = inner;
    auto eval = [base, radius](double t, const Vec& x) {
        const double n = x.norm();
        if (n <= radius) return base.at(t, x);
        return base.at(t, (radius / n) * x);
    };
    // values outside the ball are boundary values, so the inner bound still holds
    return NonlinearField::custom(inner.dim(), eval, inner.mu(), inner.r().scaled(2.0),
                                  "radial_extend(" + inner.kind() + ")");
}

}  // namespace conjlab
