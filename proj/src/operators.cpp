#include "bergman/operators.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "bergman/fft.hpp"
#include "bergman/parallel.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/weight_classes.hpp"

namespace bergman {

// ---------------------------------------------------------------------------
// AnalyticCoeffs

Complex AnalyticCoeffs::eval(Complex z) const {
    Complex acc(0.0, 0.0);
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
    return acc;
}

AnalyticCoeffs AnalyticCoeffs::derivative() const {
    AnalyticCoeffs d;
    if (c.size() <= 1) return d;
    d.c.resize(c.size() - 1);
    for (std::size_t n = 1; n < c.size(); ++n)
        d.c[n - 1] = c[n] * static_cast<double>(n);
    return d;
}

AnalyticCoeffs dilate(const AnalyticCoeffs& f, double r) {
    if (!(r > 0.0) || !(r < 1.0)) throw DomainError("dilation requires 0 < r < 1");
    AnalyticCoeffs out = f;
    double p = 1.0;
    for (std::size_t n = 0; n < out.c.size(); ++n) {
        out.c[n] *= p;
        p *= r;
        if ((n & 1023u) == 1023u) p = std::pow(r, static_cast<double>(n + 1));
    }
    return out;
}

// ---------------------------------------------------------------------------
// SymbolFunction

SymbolFunction SymbolFunction::analytic(AnalyticCoeffs f, std::string label) {
    SymbolFunction s;
    s.kind_ = Kind::Analytic;
    s.coeffs_ = std::move(f);
    s.label_ = std::move(label);
    return s;
}

SymbolFunction SymbolFunction::conj_analytic(AnalyticCoeffs f, std::string label) {
    SymbolFunction s;
    s.kind_ = Kind::ConjAnalytic;
    s.coeffs_ = std::move(f);
    s.label_ = std::move(label);
    return s;
}

SymbolFunction SymbolFunction::monomials(std::vector<Monomial> ms, std::string label) {
    for (const auto& m : ms)
        if (m.a < 0 || m.b < 0)
            throw ValidationError("monomial symbol requires a, b >= 0");
    SymbolFunction s;
    s.kind_ = Kind::MonomialMix;
    s.monomials_ = std::move(ms);
    s.label_ = std::move(label);
    return s;
}

SymbolFunction SymbolFunction::sign_re(double cutoff) {
    if (!(cutoff > 0.0) || cutoff > 1.0)
        throw ValidationError("sign symbol cutoff must lie in (0,1]");
    SymbolFunction s;
    s.kind_ = Kind::SignRe;
    s.cutoff_ = cutoff;
    s.label_ = cutoff < 1.0 ? "signre:R=" + std::to_string(cutoff) : "signre";
    return s;
}

SymbolFunction SymbolFunction::grid(GridSymbolData data, std::string label) {
    if (data.radii.empty() || data.thetas.empty() ||
        data.values.size() != data.radii.size() * data.thetas.size())
        throw ValidationError("grid symbol needs a complete radius x angle table");
    SymbolFunction s;
    s.kind_ = Kind::Grid;
    s.grid_ = std::move(data);
    s.label_ = std::move(label);
    return s;
}

SymbolFunction SymbolFunction::callable(std::function<Complex(Complex)> fn,
                                        std::string label) {
    SymbolFunction s;
    s.kind_ = Kind::Callable;
    s.fn_ = std::move(fn);
    s.label_ = std::move(label);
    return s;
}

Complex SymbolFunction::eval(Complex zeta) const {
    switch (kind_) {
        case Kind::Analytic: return coeffs_.eval(zeta);
        case Kind::ConjAnalytic: return std::conj(coeffs_.eval(zeta));
        case Kind::MonomialMix: {
            Complex acc(0.0, 0.0);
            for (const auto& m : monomials_) {
                Complex v = m.c;
                for (int i = 0; i < m.a; ++i) v *= zeta;
                for (int i = 0; i < m.b; ++i) v *= std::conj(zeta);
                acc += v;
            }
            return acc;
        }
        case Kind::SignRe: {
            if (std::abs(zeta) > cutoff_) return {0.0, 0.0};
            double re = zeta.real();
            return {re > 0.0 ? 1.0 : (re < 0.0 ? -1.0 : 0.0), 0.0};
        }
        case Kind::Grid: {
            double r = std::abs(zeta);
            double th = std::arg(zeta);
            if (th < 0.0) th += 2.0 * M_PI;
            const auto& rs = grid_.radii;
            const auto& ts = grid_.thetas;
            auto clamp_interp = [&](double x, const std::vector<double>& xs,
                                    bool wrap) -> std::pair<std::size_t, double> {
                if (x <= xs.front()) {
                    if (!wrap) return {0, 0.0};
                }
                if (x >= xs.back()) {
                    if (!wrap) return {xs.size() - 2, 1.0};
                    // between last angle and first (wrapping)
                    double span = 2.0 * M_PI - xs.back() + xs.front();
                    return {xs.size() - 1, span > 0.0 ? (x - xs.back()) / span : 0.0};
                }
                auto it = std::upper_bound(xs.begin(), xs.end(), x);
                std::size_t hi = static_cast<std::size_t>(it - xs.begin());
                double t = (x - xs[hi - 1]) / (xs[hi] - xs[hi - 1]);
                return {hi - 1, t};
            };
            if (rs.size() == 1 || ts.size() == 1) {
                return grid_.values.front();
            }
            auto [i, tr] = clamp_interp(r, rs, false);
            auto [j, tt] = clamp_interp(th, ts, true);
            std::size_t jn = (j + 1) % ts.size();
            auto at = [&](std::size_t a, std::size_t b) {
                return grid_.values[a * ts.size() + b];
            };
            return (1.0 - tr) * ((1.0 - tt) * at(i, j) + tt * at(i, jn)) +
                   tr * ((1.0 - tt) * at(i + 1, j) + tt * at(i + 1, jn));
        }
        case Kind::Callable: return fn_(zeta);
    }
    return {0.0, 0.0};
}

bool SymbolFunction::is_zero() const {
    switch (kind_) {
        case Kind::Analytic:
        case Kind::ConjAnalytic: {
            for (const auto& v : coeffs_.c)
                if (v != Complex(0.0, 0.0)) return false;
            return true;
        }
        case Kind::MonomialMix: {
            for (const auto& m : monomials_)
                if (m.c != Complex(0.0, 0.0)) return false;
            return true;
        }
        default: return false;
    }
}

// ---------------------------------------------------------------------------
// symbol parsing

namespace {

std::vector<double> parse_number_list(const std::string& body) {
    std::vector<double> out;
    std::string cur;
    for (char ch : body) {
        if (ch == ',' || ch == ' ') {
            if (!cur.empty()) {
                out.push_back(std::stod(cur));
                cur.clear();
            }
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) out.push_back(std::stod(cur));
    return out;
}

/// Fourier coefficient of sign(cos theta) at integer frequency q.
double sign_re_fourier(long q) {
    long aq = std::labs(q);
    if (aq % 2 == 0) return 0.0;
    double sign = ((aq - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
    return 2.0 * sign / (M_PI * static_cast<double>(aq));
}

}  // namespace

SymbolFunction parse_symbol_spec(const std::string& spec) {
    if (spec == "logsym") {
        AnalyticCoeffs f;
        f.c.resize(201, Complex(0.0, 0.0));
        for (int n = 1; n <= 200; ++n) f.c[n] = Complex(1.0 / n, 0.0);
        return SymbolFunction::analytic(std::move(f), spec);
    }
    if (spec == "signre") return SymbolFunction::sign_re();
    if (spec.rfind("signre:R=", 0) == 0)
        return SymbolFunction::sign_re(std::stod(spec.substr(9)));
    if (spec.rfind("poly:[", 0) == 0 && spec.back() == ']') {
        AnalyticCoeffs f;
        for (double v : parse_number_list(spec.substr(6, spec.size() - 7)))
            f.c.push_back(Complex(v, 0.0));
        if (f.c.empty()) throw ValidationError("empty poly symbol");
        return SymbolFunction::analytic(std::move(f), spec);
    }
    if (spec.rfind("lacunary:K=", 0) == 0) {
        int K = std::stoi(spec.substr(11));
        if (K < 0 || K > 20) throw ValidationError("lacunary K out of range [0,20]");
        AnalyticCoeffs f;
        f.c.resize((1u << K) + 1, Complex(0.0, 0.0));
        for (int k = 0; k <= K; ++k) f.c[1u << k] = Complex(1.0, 0.0);
        return SymbolFunction::analytic(std::move(f), spec);
    }
    if (spec.rfind("conj:", 0) == 0) {
        auto inner = parse_symbol_spec(spec.substr(5));
        if (inner.kind() != SymbolFunction::Kind::Analytic)
            throw ValidationError("conj: requires an analytic inner symbol");
        return SymbolFunction::conj_analytic(inner.coeffs(), spec);
    }
    if (spec.rfind("mono:", 0) == 0) {
        int a = -1, b = -1;
        std::istringstream ss(spec.substr(5));
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok.rfind("a=", 0) == 0) a = std::stoi(tok.substr(2));
            else if (tok.rfind("b=", 0) == 0) b = std::stoi(tok.substr(2));
            else throw ValidationError("mono symbol expects a=,b=");
        }
        if (a < 0 || b < 0) throw ValidationError("mono symbol needs a>=0 and b>=0");
        return SymbolFunction::monomials({{Complex(1.0, 0.0), a, b}}, spec);
    }
    if (spec.rfind("grid:", 0) == 0) {
        std::string path = spec.substr(5);
        std::ifstream in(path);
        if (!in) throw ValidationError("cannot open grid symbol file '" + path + "'");
        std::map<double, std::map<double, Complex>> table;
        std::string line;
        bool first = true;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            for (char& ch : line)
                if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
            std::istringstream ls(line);
            double r, th, re, im;
            if (!(ls >> r >> th >> re >> im)) {
                if (first) {
                    first = false;
                    continue;
                }
                throw ValidationError("malformed grid row '" + line + "'");
            }
            first = false;
            table[r][th] = Complex(re, im);
        }
        if (table.empty()) throw ValidationError("empty grid symbol file");
        GridSymbolData data;
        for (const auto& [r, row] : table) data.radii.push_back(r);
        for (const auto& [th, v] : table.begin()->second) data.thetas.push_back(th);
        for (const auto& [r, row] : table) {
            if (row.size() != data.thetas.size())
                throw ValidationError("grid symbol table is not a complete rectangle");
            for (const auto& [th, v] : row) data.values.push_back(v);
        }
        return SymbolFunction::grid(std::move(data), spec);
    }
    throw ValidationError("unknown symbol spec '" + spec + "'");
}

// ---------------------------------------------------------------------------
// pair integrals n_q = 2 int phi_q(r) r^{q+1} omega(r) dr

namespace {

std::vector<Complex> pair_integrals_numeric(const RadialWeight& w,
                                            const SymbolFunction& f, std::size_t M) {
    const std::size_t m_ang =
        next_pow2(std::max<std::size_t>(512, 4 * (M + 1)));
    std::vector<double> bps = w.breakpoints();
    if (f.kind() == SymbolFunction::Kind::SignRe && f.cutoff() < 1.0)
        bps.push_back(f.cutoff());
    if (f.kind() == SymbolFunction::Kind::Grid && f.grid_data().radii.size() <= 64)
        for (double r : f.grid_data().radii) bps.push_back(r);

    auto estimate = [&](int depth) {
        NodeSet ns = boundary_nodes(0.0, depth, bps);
        const std::size_t nn = ns.r.size();
        std::vector<std::vector<Complex>> rows(nn);
        par::for_index(nn, [&](std::size_t i) {
            double r = ns.r[i], omr = ns.omr[i];
            std::vector<Complex> vals(m_ang);
            for (std::size_t j = 0; j < m_ang; ++j) {
                double th = 2.0 * M_PI * static_cast<double>(j) /
                            static_cast<double>(m_ang);
                vals[j] = f.eval(Complex(r * std::cos(th), r * std::sin(th)));
            }
            fft_pow2(vals, -1);
            double wr = ns.w[i] * 2.0 * w.eval_unchecked(r, omr) /
                        static_cast<double>(m_ang);
            std::vector<Complex> row(M + 1);
            double rp = r;  // r^{m+1}
            for (std::size_t m = 0; m <= M; ++m) {
                row[m] = vals[m] * (wr * rp);
                rp *= r;
            }
            rows[i] = std::move(row);
        });
        std::vector<Complex> out(M + 1, Complex(0.0, 0.0));
        for (std::size_t i = 0; i < nn; ++i)
            for (std::size_t m = 0; m <= M; ++m) out[m] += rows[i][m];
        return out;
    };

    int depth = 10;
    auto prev = estimate(depth);
    for (;;) {
        int d2 = depth + 3;
        auto cur = estimate(d2);
        double scale = 0.0;
        for (std::size_t m = 0; m <= M; ++m) scale = std::max(scale, std::abs(cur[m]));
        // per-entry relative agreement with a floor at the global scale, so
        // small coefficients (tiny high moments) converge relatively while
        // symmetry zeros are not chased below roundoff
        bool ok = true;
        for (std::size_t m = 0; m <= M && ok; ++m) {
            double gauge = std::max(std::abs(cur[m]), 1e-13 * (scale + 1e-300));
            if (std::abs(cur[m] - prev[m]) > 1e-11 * gauge) ok = false;
        }
        if (ok || d2 >= 34) return cur;
        prev = std::move(cur);
        depth = d2;
    }
}

std::vector<Complex> pair_integrals(const RadialWeight& w, const SymbolFunction& f,
                                    std::size_t M, ProjectPath path) {
    if (path == ProjectPath::Quadrature) return pair_integrals_numeric(w, f, M);
    std::vector<Complex> n(M + 1, Complex(0.0, 0.0));
    switch (f.kind()) {
        case SymbolFunction::Kind::Analytic: {
            const auto& c = f.coeffs().c;
            for (std::size_t m = 0; m <= M && m < c.size(); ++m)
                if (c[m] != Complex(0.0, 0.0))
                    n[m] = c[m] * 2.0 * w.moment(2.0 * m + 1.0);
            return n;
        }
        case SymbolFunction::Kind::ConjAnalytic: {
            if (!f.coeffs().c.empty())
                n[0] = std::conj(f.coeffs().c[0]) * 2.0 * w.moment(1.0);
            return n;
        }
        case SymbolFunction::Kind::MonomialMix: {
            for (const auto& mono : f.monomial_terms()) {
                long m = mono.a - mono.b;
                if (m < 0 || static_cast<std::size_t>(m) > M) continue;
                n[m] += mono.c * 2.0 *
                        w.moment(static_cast<double>(mono.a + mono.b + m + 1));
            }
            return n;
        }
        case SymbolFunction::Kind::SignRe: {
            double R = f.cutoff();
            // only odd q contribute; x = q+1 runs over the even progression
            std::size_t count = M / 2 + 1;
            std::shared_ptr<const std::vector<double>> pm;
            if (R < 1.0)
                pm = w.partial_moment_run(2.0, count, R);
            else
                pm = w.moment_run(2.0, count);
            for (std::size_t q = 1; q <= M; q += 2)
                n[q] = Complex(2.0 * sign_re_fourier(static_cast<long>(q)) *
                                   (*pm)[(q - 1) / 2],
                               0.0);
            return n;
        }
        default: return pair_integrals_numeric(w, f, M);
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// projections

AnalyticCoeffs project(const RadialWeight& w, const SymbolFunction& f, std::size_t M,
                       ProjectPath path) {
    AnalyticCoeffs out;
    out.c.resize(M + 1, Complex(0.0, 0.0));
    if (path == ProjectPath::Auto && f.kind() == SymbolFunction::Kind::Analytic) {
        // reproducing formula: analytic inputs are fixed points
        for (std::size_t m = 0; m <= M && m < f.coeffs().c.size(); ++m)
            out.c[m] = f.coeffs().c[m];
        return out;
    }
    auto n = pair_integrals(w, f, M, path);
    auto run = w.moment_run(1.0, M + 1);
    for (std::size_t m = 0; m <= M; ++m) out.c[m] = n[m] / (2.0 * (*run)[m]);
    return out;
}

double maximal_project_point(const RadialWeight& w, const SymbolFunction& f, Complex z,
                             double tol) {
    const double s = std::abs(z);
    if (!(s < 1.0)) throw DomainError("maximal projection requires |z| < 1");
    std::size_t have = 1024;
    auto run = w.kernel_coefficients_run(have);

    auto res = integrate_to_one(
        [&](double r, double omr) {
            double rho = s * r;
            std::size_t m = next_pow2(static_cast<std::size_t>(
                std::max(128.0, std::min(8.0 / std::max(1e-9, 1.0 - rho), 262144.0))));
            // kernel values around the circle
            std::size_t klen = 8;
            for (; klen < run->size(); ++klen) {
                double tail = (*run)[klen] * std::pow(rho, static_cast<double>(klen));
                if (tail < 1e-14) break;
            }
            std::vector<Complex> kc(klen);
            for (std::size_t n = 0; n < klen; ++n) kc[n] = Complex((*run)[n], 0.0);
            auto kv = series_on_circle(kc, std::conj(z) * r, m);
            std::vector<double> vals(m);
            for (std::size_t j = 0; j < m; ++j) {
                double th =
                    2.0 * M_PI * static_cast<double>(j) / static_cast<double>(m);
                Complex zeta(r * std::cos(th), r * std::sin(th));
                vals[j] = std::abs(f.eval(zeta)) * std::abs(kv[j]);
            }
            return 2.0 * r * w.eval_unchecked(r, omr) * par::pairwise_sum(vals) /
                   static_cast<double>(m);
        },
        0.0, tol, w.breakpoints());
    if (!res.converged && res.rel_err > 1e-4)
        throw AccuracyError("maximal projection quadrature stalled", res.rel_err);
    return res.value;
}

// ---------------------------------------------------------------------------
// Hankel operator

AnalyticCoeffs hankel_output_coeffs(const RadialWeight& w, const SymbolFunction& f,
                                    const AnalyticCoeffs& g, std::size_t M) {
    std::size_t gdeg = g.c.empty() ? 0 : g.c.size() - 1;
    auto n = pair_integrals(w, f, M + gdeg, ProjectPath::Auto);
    auto run = w.moment_run(1.0, M + 1);
    AnalyticCoeffs out;
    out.c.resize(M + 1, Complex(0.0, 0.0));
    for (std::size_t m = 0; m <= M; ++m) {
        Complex acc(0.0, 0.0);
        for (std::size_t j = 0; j < g.c.size(); ++j)
            acc += g.c[j] * std::conj(n[j + m]);
        out.c[m] = acc / (2.0 * (*run)[m]);
    }
    return out;
}

Complex hankel_apply(const RadialWeight& w, const SymbolFunction& f,
                     const AnalyticCoeffs& g, Complex z, std::size_t M) {
    auto coeffs = hankel_output_coeffs(w, f, g, M);
    return coeffs.eval(std::conj(z));
}

HankelMatrix hankel_matrix(const RadialWeight& w, const SymbolFunction& f,
                           std::size_t M_in, std::size_t M_out) {
    auto n = pair_integrals(w, f, M_in + M_out, ProjectPath::Auto);
    auto run = w.moment_run(1.0, M_out + 1);
    HankelMatrix H;
    H.weight_spec = w.spec();
    H.symbol_label = f.label();
    H.rows = M_out + 1;
    H.cols = M_in + 1;
    H.entries.resize(H.rows * H.cols);
    for (std::size_t m = 0; m <= M_out; ++m)
        for (std::size_t j = 0; j <= M_in; ++j)
            H.at(m, j) = std::conj(n[j + m]) / (2.0 * (*run)[m]);
    return H;
}

double analytic_norm_Ap(const RadialWeight& w, const AnalyticCoeffs& f, double p,
                        double tol) {
    if (f.c.empty()) return 0.0;
    const std::size_t m_ang = next_pow2(std::max<std::size_t>(64, 2 * f.c.size()));
    auto res = integrate_to_one(
        [&](double r, double omr) {
            auto vals = series_on_circle(f.c, Complex(r, 0.0), m_ang);
            std::vector<double> mags(m_ang);
            for (std::size_t j = 0; j < m_ang; ++j)
                mags[j] = std::pow(std::abs(vals[j]), p);
            return 2.0 * r * w.eval_unchecked(r, omr) * par::pairwise_sum(mags) /
                   static_cast<double>(m_ang);
        },
        0.0, tol, w.breakpoints());
    return std::pow(res.value, 1.0 / p);
}

namespace {

/// largest singular value by power iteration on the conjugated matrix
double largest_singular_value(const HankelMatrix& H,
                              const std::vector<double>& out_norms,
                              const std::vector<double>& in_norms) {
    const std::size_t rows = H.rows, cols = H.cols;
    std::vector<Complex> A(rows * cols);
    for (std::size_t m = 0; m < rows; ++m)
        for (std::size_t j = 0; j < cols; ++j)
            A[m * cols + j] = H.at(m, j) * out_norms[m] / in_norms[j];

    std::vector<Complex> v(cols), u(rows), back(cols);
    for (std::size_t j = 0; j < cols; ++j)
        v[j] = Complex(1.0 / std::sqrt(static_cast<double>(j + 1)), 0.0);
    double sigma = 0.0;
    for (int iter = 0; iter < 20000; ++iter) {
        double nv = 0.0;
        for (const auto& x : v) nv += std::norm(x);
        nv = std::sqrt(nv);
        if (nv == 0.0) return 0.0;
        for (auto& x : v) x /= nv;
        for (std::size_t m = 0; m < rows; ++m) {
            Complex acc(0.0, 0.0);
            for (std::size_t j = 0; j < cols; ++j) acc += A[m * cols + j] * v[j];
            u[m] = acc;
        }
        double nu2 = 0.0;
        for (const auto& x : u) nu2 += std::norm(x);
        double next = std::sqrt(nu2);
        for (std::size_t j = 0; j < cols; ++j) {
            Complex acc(0.0, 0.0);
            for (std::size_t m = 0; m < rows; ++m)
                acc += std::conj(A[m * cols + j]) * u[m];
            back[j] = acc;
        }
        v = back;
        if (iter > 4 && std::abs(next - sigma) <= 1e-12 * std::max(next, 1e-300))
            return next;
        sigma = next;
    }
    return sigma;
}

AnalyticCoeffs truncated_kernel_power(Complex a, double gamma, std::size_t len) {
    AnalyticCoeffs f;
    f.c.resize(len);
    f.c[0] = Complex(1.0, 0.0);
    for (std::size_t k = 0; k + 1 < len; ++k)
        f.c[k + 1] = f.c[k] * a * ((static_cast<double>(k) + gamma) /
                                   (static_cast<double>(k) + 1.0));
    return f;
}

}  // namespace

HankelNormEstimate hankel_norm(const RadialWeight& w, const SymbolFunction& f, double p,
                               std::size_t M, HankelNormMode mode) {
    if (M > 256) throw DomainError("hankel norm truncation capped at M = 256");
    if (mode == HankelNormMode::Exact2) {
        if (p != 2.0)
            throw ValidationError("exact2 mode is defined only for p = 2");
        auto H = hankel_matrix(w, f, M, M);
        auto run = w.moment_run(1.0, M + 1);
        std::vector<double> norms(M + 1);
        for (std::size_t j = 0; j <= M; ++j) norms[j] = std::sqrt(2.0 * (*run)[j]);
        return {largest_singular_value(H, norms, norms), "truncated-exact"};
    }

    // certified lower bound: max ratio over test functions plus duality pairs
    const double pp = p / (p - 1.0);
    std::vector<std::pair<AnalyticCoeffs, std::string>> family;
    for (std::size_t j : {0u, 1u, 2u, 4u, 8u, 16u}) {
        if (j > M) break;
        AnalyticCoeffs mono;
        mono.c.resize(j + 1, Complex(0.0, 0.0));
        mono.c[j] = Complex(1.0, 0.0);
        family.emplace_back(std::move(mono), "mono" + std::to_string(j));
    }
    for (double a : {0.5, 0.9})
        family.emplace_back(truncated_kernel_power(Complex(a, 0.0), 3.0 / p, 192),
                            "kernel" + std::to_string(a));

    double best = 0.0;
    std::vector<double> norms_p, norms_pp;
    for (const auto& [g, lab] : family) {
        norms_p.push_back(analytic_norm_Ap(w, g, p));
        norms_pp.push_back(analytic_norm_Ap(w, g, pp));
    }
    for (std::size_t i = 0; i < family.size(); ++i) {
        auto out = hankel_output_coeffs(w, f, family[i].first, M);
        double ratio = analytic_norm_Ap(w, out, p) / norms_p[i];
        best = std::max(best, ratio);
    }
    // duality pairs |<f, conj(g h)>| / (norm_p(g) norm_pp(h)), both orderings
    std::size_t need = 0;
    for (const auto& [g, lab] : family) need = std::max(need, g.c.size());
    auto n = pair_integrals(w, f, 2 * need, ProjectPath::Auto);
    for (std::size_t i = 0; i < family.size(); ++i)
        for (std::size_t j = 0; j < family.size(); ++j) {
            const auto& g = family[i].first;
            const auto& h = family[j].first;
            Complex acc(0.0, 0.0);
            for (std::size_t a = 0; a < g.c.size(); ++a)
                for (std::size_t b = 0; b < h.c.size(); ++b)
                    acc += std::conj(g.c[a] * h.c[b]) * n[a + b];
            double bound = std::abs(acc) / (norms_p[i] * norms_pp[j]);
            best = std::max(best, bound);
        }
    return {best, "lower-bound"};
}

// ---------------------------------------------------------------------------
// V-transform

Complex VMultiplier::eval(Complex z) const {
    // quadrature nodes may round to |z| == 1; the prefactor vanishes there
    double r = std::abs(z);
    double omr = std::max(1.0 - r, 0.0);
    return nu.eval_unchecked(r, omr) * series.eval(z);
}

VMultiplier v_multiplier(const RadialWeight& w, const RadialWeight& nu,
                         const AnalyticCoeffs& f) {
    auto wv = w.product(nu);
    AnalyticCoeffs series;
    series.c.resize(f.c.size());
    if (!f.c.empty()) {
        auto num = w.moment_run(1.0, f.c.size());
        auto den = wv.moment_run(1.0, f.c.size());
        for (std::size_t n = 0; n < f.c.size(); ++n)
            series.c[n] = f.c[n] * (*num)[n] / (*den)[n];
    }
    return {std::move(series), nu};
}

namespace {

/// V series coefficients s_m = n_m / (2 (omega nu)_{2m+1}) with the truncation
/// chosen by coefficient decay against the outermost grid radius.
AnalyticCoeffs v_series(const RadialWeight& w, const RadialWeight& nu,
                        const SymbolFunction& f, double r_max) {
    std::size_t M;
    switch (f.kind()) {
        case SymbolFunction::Kind::Analytic:
            M = f.coeffs().c.empty() ? 0 : f.coeffs().c.size() - 1;
            break;
        case SymbolFunction::Kind::ConjAnalytic: M = 0; break;
        case SymbolFunction::Kind::MonomialMix: {
            long worst = 0;
            for (const auto& m : f.monomial_terms())
                worst = std::max<long>(worst, m.a - m.b);
            M = static_cast<std::size_t>(worst);
            break;
        }
        default: M = 4096; break;
    }
    auto n = pair_integrals(w, f, M, ProjectPath::Auto);
    auto wv = w.product(nu);
    auto den = wv.moment_run(1.0, M + 1);
    AnalyticCoeffs s;
    s.c.resize(M + 1);
    for (std::size_t m = 0; m <= M; ++m) s.c[m] = n[m] / (2.0 * (*den)[m]);
    // drop the negligible tail against the outermost radius probed
    if (M > 64) {
        double scale = 0.0, rp = 1.0;
        std::vector<double> weighted(M + 1);
        for (std::size_t m = 0; m <= M; ++m) {
            weighted[m] = std::abs(s.c[m]) * rp;
            scale = std::max(scale, weighted[m]);
            rp *= r_max;
        }
        std::size_t keep = M + 1;
        while (keep > 64 && weighted[keep - 1] < 1e-14 * scale) --keep;
        s.c.resize(keep);
    }
    return s;
}

}  // namespace

Complex v_transform(const RadialWeight& w, const RadialWeight& nu,
                    const SymbolFunction& f, Complex z, VPath path) {
    double r = std::abs(z);
    if (!(r < 1.0)) throw DomainError("V-transform evaluated outside the disc");
    if (path == VPath::Fourier) {
        auto s = v_series(w, nu, f, std::max(r, 0.5));
        return nu.eval_unchecked(r, 1.0 - r) * s.eval(z);
    }
    // direct 2-D quadrature with pointwise kernel evaluation; this is the
    // independent cross-check route, run at tight angular resolution
    auto wv = w.product(nu);
    auto run = wv.kernel_coefficients_run(2048);
    auto integrand_at = [&](double rr, bool imag_part) {
        double rho = r * rr;
        std::size_t m = next_pow2(static_cast<std::size_t>(
            std::max(128.0, std::min(32.0 / std::max(1e-9, 1.0 - rho), 131072.0))));
        std::size_t klen = 8;
        for (; klen < run->size(); ++klen)
            if ((*run)[klen] * std::pow(rho, static_cast<double>(klen)) < 1e-14) break;
        std::vector<Complex> kc(klen);
        for (std::size_t q = 0; q < klen; ++q) kc[q] = Complex((*run)[q], 0.0);
        auto kv = series_on_circle(kc, std::conj(z) * rr, m);
        std::vector<double> vals(m);
        for (std::size_t j = 0; j < m; ++j) {
            double th = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(m);
            Complex zeta(rr * std::cos(th), rr * std::sin(th));
            Complex term = f.eval(zeta) * std::conj(kv[j]);
            vals[j] = imag_part ? term.imag() : term.real();
        }
        return par::pairwise_sum(vals) / static_cast<double>(m);
    };
    auto re = integrate_to_one(
        [&](double rr, double omr) {
            return 2.0 * rr * w.eval_unchecked(rr, omr) * integrand_at(rr, false);
        },
        0.0, 1e-10, w.breakpoints());
    auto im = integrate_to_one(
        [&](double rr, double omr) {
            return 2.0 * rr * w.eval_unchecked(rr, omr) * integrand_at(rr, true);
        },
        0.0, 1e-10, w.breakpoints());
    return nu.eval_unchecked(r, 1.0 - r) * Complex(re.value, im.value);
}

PolarGrid default_polar_grid() {
    PolarGrid g;
    g.radii.push_back(0.0);
    for (int k = 1; k <= 19; ++k) g.radii.push_back(0.05 * k);
    for (int k = 5; k <= 14; ++k) g.radii.push_back(1.0 - std::ldexp(1.0, -k));
    std::sort(g.radii.begin(), g.radii.end());
    g.radii.erase(std::unique(g.radii.begin(), g.radii.end()), g.radii.end());
    g.angles = 32;
    return g;
}

SupResult v_sup_norm(const RadialWeight& w, const RadialWeight& nu,
                     const SymbolFunction& f, const PolarGrid& grid) {
    if (grid.radii.empty() || grid.angles < 16)
        throw DomainError("v_sup_norm grid needs radii and >= 16 angles");
    double r_max = *std::max_element(grid.radii.begin(), grid.radii.end());
    if (r_max < 0.999) throw DomainError("v_sup_norm grid must reach 0.999");
    auto s = v_series(w, nu, f, r_max);

    SupResult best;
    const std::size_t m_ang = next_pow2(static_cast<std::size_t>(grid.angles));
    for (double r : grid.radii) {
        double nuv = nu.eval_unchecked(r, 1.0 - r);
        if (nuv == 0.0) continue;
        auto vals = series_on_circle(s.c, Complex(r, 0.0), m_ang);
        for (std::size_t j = 0; j < m_ang; ++j) {
            double v = nuv * std::abs(vals[j]);
            if (v > best.value) {
                double th =
                    2.0 * M_PI * static_cast<double>(j) / static_cast<double>(m_ang);
                best.value = v;
                best.argmax = Complex(r * std::cos(th), r * std::sin(th));
            }
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// norms

double bloch_norm(const AnalyticCoeffs& f, const PolarGrid& grid) {
    double sup = 0.0;
    auto d = f.derivative();
    const std::size_t m_ang = next_pow2(static_cast<std::size_t>(
        std::max(grid.angles, 8)));
    for (double r : grid.radii) {
        double factor = 1.0 - r * r;
        if (d.c.empty()) break;
        auto vals = series_on_circle(d.c, Complex(r, 0.0), m_ang);
        for (const auto& v : vals) sup = std::max(sup, factor * std::abs(v));
    }
    double at0 = f.c.empty() ? 0.0 : std::abs(f.c[0]);
    return at0 + sup;
}

LogNormResult omega_log_norm(const RadialWeight& w, const SymbolFunction& f) {
    const std::size_t m_ang = 256;
    auto res = integrate_to_one(
        [&](double r, double omr) {
            std::vector<double> vals(m_ang);
            for (std::size_t j = 0; j < m_ang; ++j) {
                double th =
                    2.0 * M_PI * static_cast<double>(j) / static_cast<double>(m_ang);
                vals[j] = std::abs(f.eval(Complex(r * std::cos(th), r * std::sin(th))));
            }
            double mean = par::pairwise_sum(vals) / static_cast<double>(m_ang);
            return 2.0 * r * w.eval_unchecked(r, omr) * mean *
                   (1.0 - std::log(omr));
        },
        0.0, 1e-8, w.breakpoints());
    if (res.diverging || (!res.converged && res.rel_err > 1e-3))
        return {res.value, false};
    return {res.value, true};
}

SeminormResult small_p_seminorm(const RadialWeight& w, const AnalyticCoeffs& f,
                                double p, const PolarGrid& grid) {
    if (!(p > 0.0) || p > 1.0) throw DomainError("small-p seminorm requires 0 < p <= 1");
    auto d = f.derivative();
    SeminormResult out;
    if (d.c.empty()) return out;
    const std::size_t m_ang = next_pow2(static_cast<std::size_t>(grid.angles));
    std::vector<double> radial_max;
    for (double r : grid.radii) {
        double omr = 1.0 - r;
        double gauge;
        if (p == 1.0) {
            gauge = omr * (1.0 - std::log(omr));
        } else {
            gauge = omr / std::pow(w.tail_from_one_minus(omr) * omr, 1.0 / p - 1.0);
        }
        auto vals = series_on_circle(d.c, Complex(r, 0.0), m_ang);
        double mx = 0.0;
        for (const auto& v : vals) mx = std::max(mx, std::abs(v));
        radial_max.push_back(mx * gauge);
        out.value = std::max(out.value, mx * gauge);
    }
    out.diverging = divergence_trend(radial_max);
    return out;
}

// ---------------------------------------------------------------------------
// theorem reports

RatioReport theorem1_report(const RadialWeight& w,
                            const std::vector<SymbolFunction>& symbols,
                            const Theorem1Options& opt) {
    int n = opt.n ? *opt.n : default_n0(w);
    auto nu = RadialWeight::log_power(static_cast<double>(n), 0.0);  // (1-r)^n
    RatioReport report;
    report.title = "hankel norm vs V-transform sup";
    report.two_sided = opt.p == 2.0;
    double key = 0.0;
    for (const auto& f : symbols) {
        RatioRow row;
        row.key = key++;
        row.label = f.label();
        if (f.is_zero()) {
            row.degenerate = true;
            report.rows.push_back(row);
            continue;
        }
        auto ln = omega_log_norm(w, f);
        if (!ln.finite) {
            row.degenerate = true;
            report.notes.push_back(f.label() + ": omega_log norm diverges, skipped");
            report.rows.push_back(row);
            continue;
        }
        auto hn = hankel_norm(w, f, opt.p, opt.M,
                              opt.p == 2.0 ? HankelNormMode::Exact2
                                           : HankelNormMode::LowerP);
        auto vs = v_sup_norm(w, nu, f, opt.grid);
        row.lhs = hn.value;
        row.rhs = vs.value;
        row.ratio = row.lhs / row.rhs;
        row.extras.emplace_back("vsup_at_r", std::abs(vs.argmax));
        report.rows.push_back(row);
    }
    report.provenance.emplace_back("p", opt.p);
    report.provenance.emplace_back("n", n);
    report.provenance.emplace_back("M", static_cast<double>(opt.M));
    report.notes.push_back(opt.p == 2.0 ? "kind: truncated-exact"
                                        : "kind: lower-bound");
    report.finalize(50.0);
    return report;
}

RatioReport theorem2_report(const RadialWeight& w,
                            const std::vector<AnalyticCoeffs>& symbols,
                            const std::vector<std::string>& labels,
                            const Theorem2Options& opt) {
    if (symbols.size() != labels.size())
        throw DomainError("theorem2 symbols and labels must align");
    int n = opt.n ? *opt.n : default_n0(w);
    auto nu_hat = RadialWeight::tail_of(opt.nu_weight);
    auto nu_pow = RadialWeight::log_power(static_cast<double>(n), 0.0);
    RatioReport report;
    report.title = "Bloch norm vs V-transform sup";
    double key = 0.0;
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        RatioRow row;
        row.key = key++;
        row.label = labels[i];
        auto f = SymbolFunction::analytic(symbols[i], labels[i]);
        if (f.is_zero()) {
            row.degenerate = true;
            report.rows.push_back(row);
            continue;
        }
        row.lhs = bloch_norm(symbols[i], opt.grid);
        row.rhs = v_sup_norm(w, nu_hat, f, opt.grid).value;
        row.ratio = row.lhs / row.rhs;
        row.extras.emplace_back("vsup_power_nu",
                                v_sup_norm(w, nu_pow, f, opt.grid).value);
        row.extras.emplace_back(
            "hankel_norm",
            hankel_norm(w, f, opt.p, opt.M,
                        opt.p == 2.0 ? HankelNormMode::Exact2
                                     : HankelNormMode::LowerP)
                .value);
        report.rows.push_back(row);
    }
    report.provenance.emplace_back("p", opt.p);
    report.provenance.emplace_back("n", n);
    report.provenance.emplace_back("M", static_cast<double>(opt.M));
    report.finalize(50.0);
    return report;
}

}  // namespace bergman
