#include "sqgci/engine.hpp"

#include <algorithm>
#include <limits>

#include "sqgci/analysis.hpp"
#include "sqgci/operators.hpp"
#include "sqgci/spectral.hpp"
#include "sqgci/waves.hpp"

namespace sqgci {

// ---------------------------------------------------------------- helpers

namespace {

template <class T>
bool cache_get(std::mutex& m, const std::map<double, T>& c, double t, T& out) {
    std::lock_guard<std::mutex> lock(m);
    auto it = c.find(t);
    if (it == c.end()) return false;
    out = it->second;
    return true;
}

template <class T>
void cache_put(std::mutex& m, std::map<double, T>& c, double t, const T& v, std::size_t limit) {
    std::lock_guard<std::mutex> lock(m);
    if (c.size() >= limit) {
        // evict the entry farthest from t
        auto far = c.begin();
        if (std::abs(std::prev(c.end())->first - t) > std::abs(far->first - t)) far = std::prev(c.end());
        c.erase(far);
    }
    c[t] = v;
}

double pointwise_max(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::hypot(a[i], b[i]));
    return m;
}

// shift coefficients by the lattice vector (s1, s2): G(xi) = F(xi - s)
ScalarField shift_modes(const ScalarField& f, int s1, int s2) {
    const auto& g = f.grid();
    int n = g.n, h = n / 2;
    ScalarField r(g, false);
    for (int a = 0; a < n; ++a) {
        int k1 = g.freq(a) + s1;
        if (k1 <= -h || k1 >= h) continue;
        for (int b = 0; b < n; ++b) {
            int k2 = g.freq(b) + s2;
            if (k2 <= -h || k2 >= h) continue;
            r.coeff_ref(k1, k2) = f.data()[static_cast<std::size_t>(a) * n + b];
        }
    }
    return r;
}

VectorField real_sum(const VectorField& W) {
    VectorField r = W + W.conj();
    r[0].set_real(true);
    r[1].set_real(true);
    return r;
}

ScalarField real_sum(const ScalarField& W) {
    ScalarField r = W + W.conj();
    r.set_real(true);
    return r;
}

}  // namespace

void lattice_vector(const Vec2& k, double lambda, int& k1, int& k2) {
    double a = lambda * k.x, b = lambda * k.y;
    k1 = int(std::lround(a));
    k2 = int(std::lround(b));
    if (std::abs(a - k1) > 1e-9 || std::abs(b - k2) > 1e-9)
        throw PreconditionError("lambda k is not a lattice vector (lambda must be a multiple of 5)");
}

int level_grid_size(double lambda) { return fft_size_at_least(int(std::floor(4.5 * lambda)) + 2); }

// ---------------------------------------------------------------- Stage

VectorField Stage::transport_velocity(double t) const { return fractional_laplacian(velocity(t), 1.0); }

double Stage::hamiltonian(double t) const { return sqgci::hamiltonian(velocity(t)); }

VectorField BaseStage::velocity(double) const {
    VectorField v(grid(), true);
    v.div_free = true;
    return v;
}

StressField BaseStage::stress(double) const { return StressField(grid(), true); }

// ---------------------------------------------------------------- StepStage

StepStage::StepStage(std::shared_ptr<const Stage> prev, const HamiltonianProfile& H, const EngineOptions& opt, int n)
    : Stage(prev->level() + 1, TorusGrid(n), prev->params()),
      prev_(std::move(prev)),
      H_(H),
      opt_(opt),
      lambda_(params_.lambda(level_)),
      partition_(params_.tau_next(level_ - 1)) {
    if (!(n > 4.5 * lambda_))
        throw ResolutionError("grid n = " + std::to_string(n) + " cannot hold level " + std::to_string(level_) +
                              " (needs n > 4.5 lambda = " + std::to_string(4.5 * lambda_) + ")");
    auto p = prev_;
    uq_ = std::make_shared<FunctionVelocity>([p](double s) { return p->transport_velocity(s); });
}

double StepStage::previous_energy(double t) const {
    double e;
    if (cache_get(mutex_, energy_cache_, t, e)) return e;
    e = prev_->hamiltonian(t);
    cache_put(mutex_, energy_cache_, t, e, 4096);
    return e;
}

double StepStage::rho(double t) const {
    double gap = H_.value(t) - previous_energy(t);
    double floor = 0.5 * params_.lambda(level_ + 1) * params_.delta(level_ + 1);
    // sum over Omega of gamma_k^2(Id) is 4, hence the factor 1/4
    return 0.25 / (kTwoPi * kTwoPi * lambda_) * std::max(gap - floor, 0.0);
}

double StepStage::rho_j(long j) const { return j_info(j).rho; }

const JInfo& StepStage::j_info(long j) const {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = jinfo_.find(j);
        if (it != jinfo_.end()) return it->second;
    }
    JInfo ji;
    double tj = double(j) * tau();
    ji.rho = rho(tj);
    StressField R = prev_->stress(tj);
    ji.stress_c0 = c_norm(R, 0);
    double eps = params_.epsilon_gamma();
    if (ji.rho > 0.0) {
        ji.guard_ratio = ji.stress_c0 / (lambda_ * ji.rho);
        if (ji.guard_ratio > eps && opt_.strict_guard)
            throw AssertionFailure("amplitude guard violated at level " + std::to_string(level_) + ", j = " +
                                   std::to_string(j) + ": ||R_q||/(lambda rho_j) = " + std::to_string(ji.guard_ratio) +
                                   " > eps_gamma = " + std::to_string(eps));
        double target = opt_.guard_margin * eps;
        ji.saturation = ji.guard_ratio > target ? target / ji.guard_ratio : 1.0;
    } else {
        ji.guard_ratio = ji.stress_c0 > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
        ji.saturation = 0.0;
    }
    if (ji.stress_c0 > 0.0) {
        int band = static_cast<int>(std::ceil(R.max_frequency()));
        ji.r11 = std::make_shared<PointEvaluator>(R.m11, PointEvaluator::Method::Auto, 10, band);
        ji.r12 = std::make_shared<PointEvaluator>(R.m12, PointEvaluator::Method::Auto, 10, band);
    }
    if (opt_.flow.substeps > 0) {
        ji.substeps = opt_.flow.substeps;
    } else {
        double span = 2.5 * tau(), gn = 0.0;
        for (double s : {tj, tj + 0.5 * span, tj + span}) gn = std::max(gn, c_norm(uq_->at(s), 1));
        ji.substeps = std::max(opt_.flow.min_substeps, int(std::ceil(1.25 * span * gn / opt_.flow.cfl_target)));
    }
    std::lock_guard<std::mutex> lock(mutex_);
    return jinfo_.emplace(j, std::move(ji)).first->second;
}

FlowMap StepStage::flow_map(long j, double t) const {
    const JInfo& ji = j_info(j);
    FlowOptions o = opt_.flow;
    o.substeps = ji.substeps;
    return solve_flow_map(*uq_, double(j) * tau(), t, grid_, o);
}

WaveSample StepStage::wave_sample(double t, bool with_terms) const {
    WaveSample ws;
    ws.t = t;
    ws.w = VectorField(grid_, true);
    ws.gamma_min = 1.0;
    const std::size_t N = grid_.size();
    std::vector<double> o11(N, 0.0), o12(N, 0.0), l11(N, 0.0), l12(N, 0.0), ap11, ap12;
    if (with_terms) {
        StressField Rt = resample(prev_->stress(t), grid_);
        ap11 = Rt.m11.to_physical();
        ap12 = Rt.m12.to_physical();
    }
    std::vector<double> x1(N), x2(N), r11(N), r12(N);
    for (long j : partition_.active(t)) {
        double chi = partition_.chi(j, t);
        if (chi == 0.0) continue;
        const JInfo& ji = j_info(j);
        bool waves = ji.rho > 0.0;
        bool stress_diag = with_terms && ji.r11;
        if (!waves && !stress_diag) continue;
        FlowMap phi = flow_map(j, t);
        for (int a = 0; a < grid_.n; ++a)
            for (int b = 0; b < grid_.n; ++b) {
                std::size_t i = static_cast<std::size_t>(a) * grid_.n + b;
                x1[i] = grid_.x(a) + phi.d1[i];
                x2[i] = grid_.x(b) + phi.d2[i];
            }
        if (ji.r11) {
            PointEvaluator::eval_real_pair(*ji.r11, *ji.r12, x1, x2, r11, r12);
        } else {
            std::fill(r11.begin(), r11.end(), 0.0);
            std::fill(r12.begin(), r12.end(), 0.0);
        }
        double c2 = chi * chi, s = ji.saturation;
        if (with_terms)
            for (std::size_t i = 0; i < N; ++i) {
                ap11[i] -= c2 * r11[i];
                ap12[i] -= c2 * r12[i];
                l11[i] += c2 * (1.0 - s) * r11[i];
                l12[i] += c2 * (1.0 - s) * r12[i];
            }
        if (!waves) continue;
        const DirectionSet& ds = direction_set_for_index(j);
        auto gid = ds.gamma_squared(Sym2::identity());
        std::vector<double> a2[3];
        for (auto& v : a2) v.resize(N);
        double scale = s / (lambda_ * ji.rho);
        for (std::size_t i = 0; i < N; ++i) {
            Sym2 M{1.0 - scale * r11[i], -scale * r12[i], 1.0 + scale * r11[i]};
            auto g2 = ds.gamma_squared(M);
            for (int k = 0; k < 3; ++k) {
                if (!(g2[k] > 0.0))
                    throw AssertionFailure("geometric lemma coefficient nonpositive at level " +
                                           std::to_string(level_) + ", j = " + std::to_string(j));
                ws.gamma_min = std::min(ws.gamma_min, g2[k] / gid[k]);
                a2[k][i] = ji.rho * g2[k];
            }
        }
        for (int kk = 0; kk < 3; ++kk) {
            const Vec2& k = ds.plus()[kk];
            int s1, s2;
            lattice_vector(k, lambda_, s1, s2);
            std::vector<cplx> c(N);
            for (std::size_t i = 0; i < N; ++i)
                c[i] = std::sqrt(a2[kk][i]) * std::polar(1.0, lambda_ * (k.x * phi.d1[i] + k.y * phi.d2[i]));
            ScalarField G = shift_modes(ScalarField::from_physical_complex(grid_, c, false), s1, s2);
            Vec2 kp = k.perp();
            VectorField W(cplx(0.0, kp.x) * G, cplx(0.0, kp.y) * G);
            W = wave_localizer(k, lambda_, W);
            W *= chi;
            ws.w += real_sum(W);
            if (with_terms) {
                // traceless part of the principal term -lambda chi^2 a^2 k (x) k (both signs of k)
                double t11 = 0.5 * (k.x * k.x - k.y * k.y), t12 = k.x * k.y;
                for (std::size_t i = 0; i < N; ++i) {
                    o11[i] -= lambda_ * c2 * a2[kk][i] * t11;
                    o12[i] -= lambda_ * c2 * a2[kk][i] * t12;
                }
                WaveTerm term;
                term.j = j;
                term.k = k;
                term.theta = perp_divergence(W);
                std::vector<double> ca(N);
                for (std::size_t i = 0; i < N; ++i) ca[i] = c2 * a2[kk][i];
                term.chi2a2 = ScalarField::from_physical(grid_, ca);
                term.W = std::move(W);
                ws.terms.push_back(std::move(term));
            }
        }
        if (with_terms)
            for (std::size_t i = 0; i < N; ++i) {
                o11[i] += c2 * s * r11[i];
                o12[i] += c2 * s * r12[i];
            }
    }
    ws.w[0].set_real(true);
    ws.w[1].set_real(true);
    ws.w.div_free = true;
    if (with_terms) {
        ws.principal_residual = pointwise_max(o11, o12);
        ws.approx_stress = pointwise_max(ap11, ap12);
        ws.saturation_leftover = pointwise_max(l11, l12);
    }
    return ws;
}

VectorField StepStage::wave(double t) const {
    VectorField w;
    if (cache_get(mutex_, wave_cache_, t, w)) return w;
    w = wave_sample(t, false).w;
    cache_put(mutex_, wave_cache_, t, w, opt_.cache_limit);
    return w;
}

VectorField StepStage::velocity(double t) const {
    VectorField v;
    if (cache_get(mutex_, velocity_cache_, t, v)) return v;
    v = resample(prev_->velocity(t), grid_) + wave(t);
    v.div_free = true;
    cache_put(mutex_, velocity_cache_, t, v, opt_.cache_limit);
    return v;
}

StressField StepStage::assemble_low(const std::vector<WaveTerm>& terms, const PseudoProductOptions& pp,
                                    StressField* remainder, double* low_norm) const {
    StressField low(grid_, true), rem(grid_, true);
    VectorField anti(grid_, true), anti_rem(grid_, true);
    auto add = [&](const MatrixField& Q, StressField& S, VectorField& A) {
        ScalarField q11 = real_sum(Q.q[0][0]), q12 = real_sum(Q.q[0][1]);
        ScalarField q21 = real_sum(Q.q[1][0]), q22 = real_sum(Q.q[1][1]);
        // symmetric trace-free part of Q^T and its antisymmetric part a = (Q21 - Q12)/2
        S.m11 += 0.5 * (q11 - q22);
        S.m12 += 0.5 * (q12 + q21);
        ScalarField a = 0.5 * (q21 - q12);
        A[0] += spectral_derivative(a, 2);
        A[1] -= spectral_derivative(a, 1);
    };
    for (const auto& term : terms) {
        OscillationSplit Q = oscillation_Q(term.k, lambda_, term.theta, term.theta.conj(), term.chi2a2, pp);
        add(Q.full, low, anti);
        if (remainder) add(Q.remainder, rem, anti_rem);
    }
    low += inverse_divergence(anti);
    if (remainder) *remainder = rem + inverse_divergence(anti_rem);
    if (low_norm) *low_norm = c_norm(low, 0);
    return low;
}

StressBundle StepStage::stress_bundle(double t) const {
    StressBundle B;
    B.t = t;
    double h = fd_step();
    WaveSample ws = wave_sample(t, true);
    B.w = ws.w;
    VectorField vq = resample(prev_->velocity(t), grid_);
    VectorField uq = fractional_laplacian(vq, 1.0);
    B.dtw = central_difference4(wave(t - 2 * h), wave(t - h), wave(t + h), wave(t + 2 * h), h);
    B.R_T = inverse_divergence(B.dtw + advect(uq, ws.w));
    B.R_N = inverse_divergence(nonlinear_N(ws.w, vq) + grad_transpose_dot(uq, ws.w));
    B.R_D = params_.gamma > 0.0 ? inverse_divergence(fractional_laplacian(ws.w, params_.gamma))
                                : StressField(grid_, true);
    StressField rem;
    StressField low = assemble_low(ws.terms, opt_.pseudo, &rem, &B.diag.low);
    VectorField high = nonlinear_N(ws.w, ws.w);
    for (const auto& term : ws.terms) high -= real_sum(nonlinear_N(term.W, term.W.conj()));
    StressField R_high = inverse_divergence(high);
    B.R_O = resample(prev_->stress(t), grid_) + low + R_high;
    B.total = B.R_T + B.R_N + B.R_D + B.R_O;

    auto& d = B.diag;
    d.principal_residual = ws.principal_residual;
    d.approx = ws.approx_stress;
    d.saturation_leftover = ws.saturation_leftover;
    d.commutator = c_norm(rem, 0);
    d.high = c_norm(R_high, 0);
    double hn = c_norm(high, 0);
    d.high_leakage = hn > 0.0 ? c_norm(high - annular_projector(lambda_, high), 0) / hn : 0.0;
    d.gamma_min = ws.gamma_min;
    if (!ws.terms.empty()) {
        PseudoProductOptions coarse = opt_.pseudo;
        coarse.quad.nodes = std::max(1, opt_.pseudo.quad.nodes / 2);
        StressField low2 = assemble_low(ws.terms, coarse, nullptr, nullptr);
        d.quadrature = c_norm(divergence(low - low2), 0);
    }
    cache_put(mutex_, stress_cache_, t, B.total, opt_.cache_limit);
    return B;
}

StressField StepStage::stress(double t) const {
    StressField s;
    if (cache_get(mutex_, stress_cache_, t, s)) return s;
    return stress_bundle(t).total;
}

VectorField central_difference4(const VectorField& m2, const VectorField& m1, const VectorField& p1,
                                const VectorField& p2, double h) {
    VectorField d = 8.0 * (p1 - m1) - (p2 - m2);
    d *= 1.0 / (12.0 * h);
    return d;
}

VectorField central_difference6(const VectorField& m3, const VectorField& m2, const VectorField& m1,
                                const VectorField& p1, const VectorField& p2, const VectorField& p3, double h) {
    VectorField d = 45.0 * (p1 - m1) - 9.0 * (p2 - m2) + (p3 - m3);
    d *= 1.0 / (60.0 * h);
    return d;
}

ResidualReport StepStage::residual_oracle(double t, const StressBundle* bundle) const {
    ResidualReport rep;
    double h = fd_step();
    StressBundle B = bundle ? *bundle : stress_bundle(t);
    VectorField v = velocity(t);
    // sixth-order centred derivative of v_{q+1}
    VectorField Dr = central_difference6(velocity(t - 3 * h), velocity(t - 2 * h), velocity(t - h), velocity(t + h),
                                         velocity(t + 2 * h), velocity(t + 3 * h), h);
    rep.residual = c_norm(relaxed_defect(Dr, v, B.total, params_.gamma), 0);
    rep.div_stress = c_norm(divergence(B.total), 0);
    VectorField N = nonlinear_N(v, v);
    // the stress side used the fourth-order stencil on w
    VectorField Dw6 = central_difference6(wave(t - 3 * h), wave(t - 2 * h), wave(t - h), wave(t + h),
                                          wave(t + 2 * h), wave(t + 3 * h), h);
    rep.budget_fd = c_norm(leray_project(B.dtw - Dw6), 0);
    rep.budget_quadrature = B.diag.quadrature;
    // off-grid interpolation of u_q and R_q: measured discrepancy between the
    // interpolant and the exact trigonometric sum at probe points, propagated
    // through the centred difference
    double interp = 0.0;
    {
        VectorField uq = prev_->transport_velocity(t);
        StressField Rq = prev_->stress(t);
        const ScalarField* fs[4] = {&uq[0], &uq[1], &Rq.m11, &Rq.m12};
        for (const ScalarField* f : fs) {
            double scale = c_norm(*f, 0);
            if (scale == 0.0) continue;
            PointEvaluator pe(*f);
            if (pe.method() != PointEvaluator::Method::Lagrange) continue;
            double e = 0.0;
            for (int p = 0; p < 16; ++p) {
                double x = -kPi + kTwoPi * std::fmod(0.6180339887 * (p + 1), 1.0);
                double y = -kPi + kTwoPi * std::fmod(0.7548776662 * (p + 1), 1.0);
                e = std::max(e, std::abs(pe.real_at(x, y) - f->eval(x, y).real()));
            }
            interp = std::max(interp, e / scale);
        }
    }
    rep.budget_interpolation = interp * c_norm(B.w, 0) / h;
    if (auto* ps = dynamic_cast<const StepStage*>(prev_.get())) rep.budget_inherited = ps->residual_oracle(t).residual;
    // floating-point error of the products and of the difference quotients
    // (stencil weight sum 110/60, ten ulps per sample)
    rep.budget_roundoff = 1e-12 * std::max({c_norm(Dr, 0), c_norm(N, 0), rep.div_stress}) +
                          10.0 * std::numeric_limits<double>::epsilon() * c_norm(v, 0) * (110.0 / 60.0) / h;
    return rep;
}

VectorField StepStage::material_derivative_velocity(double t) const {
    double h = fd_step();
    return material_derivative(velocity(t - h), velocity(t), velocity(t + h), h, transport_velocity(t));
}

VectorField StepStage::material_derivative_transport(double t) const {
    double h = fd_step();
    VectorField u = transport_velocity(t);
    return material_derivative(transport_velocity(t - h), u, transport_velocity(t + h), h, u);
}

StressField StepStage::material_derivative_stress(double t) const {
    double h = fd_step();
    return material_derivative(stress(t - h), stress(t), stress(t + h), h, transport_velocity(t));
}

std::vector<std::shared_ptr<const StepStage>> build_tower(const SchemeParams& p, const HamiltonianProfile& H,
                                                          const EngineOptions& opt, int q_max, int n_last) {
    p.validate();
    H.validate();
    std::vector<std::shared_ptr<const StepStage>> out;
    std::shared_ptr<const Stage> prev = std::make_shared<BaseStage>(p);
    for (int q = 0; q <= q_max; ++q) {
        int n = q == q_max ? n_last : level_grid_size(p.lambda(q + 1));
        auto st = std::make_shared<StepStage>(prev, H, opt, n);
        out.push_back(st);
        prev = st;
    }
    return out;
}

}  // namespace sqgci
