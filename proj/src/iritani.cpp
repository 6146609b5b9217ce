#include "vsc/iritani.hpp"

#include "vsc/errors.hpp"

#include <json.hpp>

#include <set>
#include <sstream>

namespace vsc {

namespace {

void add_into(LaurentZ &acc, int power, const BigRational &c)
{
    if (c == 0) return;
    auto [it, inserted] = acc.try_emplace(power, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) acc.erase(it);
    }
}

void add_into(LaurentZ &acc, const LaurentZ &x, const BigRational &scale = 1)
{
    for (const auto &[p, c] : x) add_into(acc, p, c * scale);
}

LaurentZ mul(const LaurentZ &a, const LaurentZ &b)
{
    LaurentZ out;
    for (const auto &[pa, ca] : a)
        for (const auto &[pb, cb] : b) add_into(out, pa + pb, ca * cb);
    return out;
}

NilpotentLaurent mul(const NilpotentLaurent &a, const NilpotentLaurent &b)
{
    NilpotentLaurent out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; i + j < 3; ++j) add_into(out.h[i + j], mul(a.h[i], b.h[j]));
    return out;
}

NilpotentLaurent one()
{
    NilpotentLaurent r;
    r.h[0][0] = 1;
    return r;
}

// h + j z
NilpotentLaurent linear(int j)
{
    NilpotentLaurent r;
    if (j != 0) r.h[0][1] = j;
    r.h[1][0] = 1;
    return r;
}

// 1/(h + j z) = (1/(jz)) (1 - h/(jz) + h^2/(jz)^2), j != 0
NilpotentLaurent inverse_linear(int j)
{
    NilpotentLaurent r;
    r.h[0][-1] = ratio(1, j);
    r.h[1][-2] = -ratio(1, static_cast<long>(j) * j);
    r.h[2][-3] = ratio(1, static_cast<long>(j) * j * j);
    return r;
}

// ∏_{-∞}^{0} (h+jz) / ∏_{-∞}^{K} (h+jz)
NilpotentLaurent telescoped(int K)
{
    NilpotentLaurent r = one();
    if (K >= 0)
        for (int j = 1; j <= K; ++j) r = mul(r, inverse_linear(j));
    else
        for (int j = K + 1; j <= 0; ++j) r = mul(r, linear(j));
    return r;
}

Matrix3 identity3()
{
    Matrix3 m;
    for (int i = 0; i < 3; ++i) m[i][i][0] = 1;
    return m;
}

bool is_zero(const Matrix3 &m)
{
    for (const auto &row : m)
        for (const auto &e : row)
            if (!e.empty()) return false;
    return true;
}

void add_product(Matrix3 &acc, const Matrix3 &a, const Matrix3 &b, const BigRational &scale = 1)
{
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int l = 0; l < 3; ++l)
                if (!a[i][l].empty() && !b[l][j].empty()) add_into(acc[i][j], mul(a[i][l], b[l][j]), scale);
}

void add_matrix(Matrix3 &acc, const Matrix3 &x, const BigRational &scale = 1)
{
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) add_into(acc[i][j], x[i][j], scale);
}

std::vector<Bidegree> bidegrees(const IritaniBox &box)
{
    // Sorted by total degree: a linear extension of the componentwise order.
    std::vector<Bidegree> out;
    for (int s = 0; s <= box.n_max + box.m_max; ++s)
        for (int n = 0; n <= std::min(s, box.n_max); ++n)
            if (s - n <= box.m_max) out.push_back({n, s - n});
    return out;
}

// Pairs (i, k - i) with both parts nonzero.
template <class F>
void for_each_split(Bidegree k, F &&f)
{
    for (int n = 0; n <= k.n; ++n)
        for (int m = 0; m <= k.m; ++m) {
            Bidegree i{n, m};
            Bidegree j{k.n - n, k.m - m};
            if (i == Bidegree{} || j == Bidegree{}) continue;
            f(i, j);
        }
}

const Matrix3 *find(const LoopMatrix &m, Bidegree b)
{
    auto it = m.find(b);
    return it == m.end() ? nullptr : &it->second;
}

// Inverse of 1 + X with X supported away from (0,0).
LoopMatrix loop_inverse(const LoopMatrix &a, const IritaniBox &box)
{
    LoopMatrix inv;
    inv[{}] = identity3();
    for (Bidegree k : bidegrees(box)) {
        if (k == Bidegree{}) continue;
        Matrix3 acc;
        for_each_split(k, [&](Bidegree i, Bidegree j) {
            const Matrix3 *x = find(a, i);
            const Matrix3 *y = find(inv, j);
            if (x && y) add_product(acc, *x, *y, -1);
        });
        if (const Matrix3 *x = find(a, k)) add_matrix(acc, *x, -1);
        if (!is_zero(acc)) inv[k] = std::move(acc);
    }
    return inv;
}

const std::vector<int> kClasses{0, 1, 2};

} // namespace

NilpotentLaurent i_coeff(int n, int m)
{
    if (n < 0 || m < 0) throw UsageError("i_coeff: bidegree must be nonnegative");
    NilpotentLaurent f = telescoped(n - m);
    NilpotentLaurent r = mul(mul(f, f), telescoped(n));
    const BigRational scale = ratio(BigInt(1), factorial(static_cast<unsigned>(m)));
    for (auto &part : r.h) {
        LaurentZ shifted;
        for (const auto &[p, c] : part) shifted[p - m] = c * scale;
        part = std::move(shifted);
    }
    return r;
}

LoopMatrix build_loop_matrix(const IritaniBox &box)
{
    LoopMatrix M;
    for (Bidegree b : bidegrees(box)) {
        NilpotentLaurent col = i_coeff(b.n, b.m);
        Matrix3 entry;
        for (int c = 0; c < 3; ++c) {
            for (int i = 0; i < 3; ++i) entry[i][c] = col.h[i];
            col = mul(col, linear(b.n));
        }
        if (!is_zero(entry)) M[b] = std::move(entry);
    }
    if (M[{}] != identity3()) throw ContractError("build_loop_matrix: M_00 is not the identity");
    return M;
}

LoopMatrix loop_product(const LoopMatrix &a, const LoopMatrix &b, const IritaniBox &box)
{
    LoopMatrix out;
    for (Bidegree k : bidegrees(box)) {
        Matrix3 acc;
        for (int n = 0; n <= k.n; ++n)
            for (int m = 0; m <= k.m; ++m) {
                const Matrix3 *x = find(a, {n, m});
                const Matrix3 *y = find(b, {k.n - n, k.m - m});
                if (x && y) add_product(acc, *x, *y);
            }
        if (!is_zero(acc)) out[k] = std::move(acc);
    }
    return out;
}

std::pair<LoopMatrix, LoopMatrix> birkhoff(const LoopMatrix &M, const IritaniBox &box)
{
    const Matrix3 *m00 = find(M, {});
    if (!m00 || *m00 != identity3()) throw UsageError("birkhoff: M_00 must be the identity");
    LoopMatrix minus, plus;
    minus[{}] = identity3();
    plus[{}] = identity3();
    for (Bidegree k : bidegrees(box)) {
        if (k == Bidegree{}) continue;
        Matrix3 rest;
        if (const Matrix3 *a = find(M, k)) rest = *a;
        for_each_split(k, [&](Bidegree i, Bidegree j) {
            const Matrix3 *b = find(minus, i);
            const Matrix3 *c = find(plus, j);
            if (b && c) add_product(rest, *b, *c, -1);
        });
        Matrix3 neg, pos;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (const auto &[p, c] : rest[i][j]) (p < 0 ? neg : pos)[i][j][p] = c;
        if (!is_zero(neg)) minus[k] = std::move(neg);
        if (!is_zero(pos)) plus[k] = std::move(pos);
    }
    return {std::move(minus), std::move(plus)};
}

ConnectionMatrix connection_matrix(const LoopMatrix &M_minus, const IritaniBox &box)
{
    // With S_- = exp(y^1 N / z) M_-, C_1 = M_-^{-1} (N M_- + z D M_-), D multiplying bidegree (n, m) by n.
    Matrix3 shift;
    shift[1][0][0] = 1;
    shift[2][1][0] = 1;
    LoopMatrix rhs;
    for (const auto &[b, m] : M_minus) {
        Matrix3 acc;
        add_product(acc, shift, m);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (const auto &[p, c] : m[i][j]) add_into(acc[i][j], p + 1, c * b.n);
        if (!is_zero(acc)) rhs[b] = std::move(acc);
    }
    const LoopMatrix c1 = loop_product(loop_inverse(M_minus, box), rhs, box);

    const HalfInt dmax = HalfInt::from_int(box.n_max);
    const GradedSeries zero(kClasses, dmax);
    ConnectionMatrix out{{{zero, zero, zero}, {zero, zero, zero}, {zero, zero, zero}}};
    for (const auto &[b, m] : c1)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (const auto &[p, c] : m[i][j]) {
                    if (p != 0) {
                        std::ostringstream msg;
                        msg << "connection_matrix: z^" << p << " survives in entry (" << i + 1 << "," << j + 1
                            << ") at bidegree (" << b.n << "," << b.m << ")";
                        throw RepresentationError(msg.str());
                    }
                    out[i][j].add_term(HalfInt::from_int(b.n),
                                       GradedSeries::monomial_of(out[i][j], {{2, static_cast<unsigned>(b.m)}}), c);
                }
    return out;
}

namespace {

// ∫ dy^1 with q^n -> q^n / n, plus `constant`; q^0 terms other than `allowed_q0` are rejected.
GradedSeries integrate(const GradedSeries &s, const GradedSeries &allowed_q0, const GradedSeries &constant,
                       const char *name)
{
    GradedSeries out = constant;
    GradedSeries q0(s.classes(), s.dmax());
    for (const auto &[key, c] : s.terms()) {
        if (key.q.twice == 0)
            q0.add_term(key.q, key.x, c);
        else
            out.add_term(key.q, key.x, c / BigRational(key.q.twice / 2));
    }
    if (!(q0 == allowed_q0))
        throw RepresentationError(std::string("iritani_pipeline: q^0 correction in ") + name + ": " +
                                  to_canonical_text(q0));
    return out;
}

nlohmann::json compare(const GradedSeries &quasimap, const GradedSeries &iritani, bool &all_equal,
                       const SeriesSymbols &sym)
{
    std::set<GradedSeries::Key> keys;
    for (const auto &[k, c] : quasimap.terms()) keys.insert(k);
    for (const auto &[k, c] : iritani.terms()) keys.insert(k);
    nlohmann::json rows = nlohmann::json::array();
    all_equal = true;
    for (const auto &k : keys) {
        auto lookup = [&](const GradedSeries &s) {
            auto it = s.terms().find(k);
            return it == s.terms().end() ? BigRational(0) : it->second;
        };
        const BigRational a = lookup(quasimap), b = lookup(iritani);
        GradedSeries mono(quasimap.classes(), quasimap.dmax());
        mono.add_term(k.q, k.x, 1);
        rows.push_back({{"term", to_compact_text(mono, sym)},
                        {"quasimap", to_string(a)},
                        {"iritani", to_string(b)},
                        {"equal", a == b}});
        all_equal = all_equal && a == b;
    }
    return rows;
}

} // namespace

IritaniResult iritani_pipeline(const IritaniBox &box, MirrorEngine &engine)
{
    if (box.n_max < 1 || box.m_max < 0) throw UsageError("iritani_pipeline: box must have n_max >= 1");
    const HalfInt dmax = HalfInt::from_int(box.n_max);
    const LoopMatrix M = build_loop_matrix(box);
    const auto [M_minus, M_plus] = birkhoff(M, box);
    const ConnectionMatrix C = connection_matrix(M_minus, box);

    const GradedSeries zero(kClasses, dmax);
    const GradedSeries unit = GradedSeries::constant(kClasses, dmax, 1);
    auto y = [&](int j) { return GradedSeries::coupling(kClasses, dmax, j); };

    std::vector<GradedSeries> components{
        integrate(C[0][0], zero, y(0), "(C1)11"),
        integrate(C[1][0], unit, y(1), "(C1)21"),
        integrate(C[2][0], zero, y(2), "(C1)31"),
    };
    FormalMap mirror = FormalMap::from_components(kClasses, dmax, components);
    GradedSeries f1 = integrate(C[0][1], zero, zero, "(C1)12");
    GradedSeries f2 = integrate(C[0][2], zero, zero, "(C1)13");
    GradedSeries f3 = integrate(C[1][1], zero, y(0), "(C1)22");

    const FormalMap inverse = invert_formal_map(mirror);
    IritaniResult r{mirror, f1, f2, f3, series_compose(f1, inverse), series_compose(f2, inverse),
                    series_compose(f3, inverse), {}, false, false};

    const Model cp2 = Model::projective(3);
    const FormalMap &quasimap = engine.mirror_map(cp2, dmax, 2);
    const SeriesSymbols ysym{"q", "y"}, tsym{"Q", "t"};

    nlohmann::json report;
    bool all_maps_equal = true;
    for (int j = 0; j < 3; ++j) {
        bool eq = false;
        report["mirror_map"]["t" + std::to_string(j)] = compare(quasimap.component(j), mirror.component(j), eq, ysym);
        all_maps_equal = all_maps_equal && eq;
    }
    const std::array<std::pair<int, int>, 3> pairs{{{1, 2}, {2, 2}, {1, 1}}};
    const std::array<const GradedSeries *, 3> flat{&r.f1_flat, &r.f2_flat, &r.f3_flat};
    bool all_obs_equal = true;
    for (int i = 0; i < 3; ++i) {
        bool eq = false;
        const GradedSeries gw = engine.gw_closed(cp2, pairs[i].first, pairs[i].second, dmax, 2);
        report["observables"]["f" + std::to_string(i + 1)] = compare(gw, *flat[i], eq, tsym);
        all_obs_equal = all_obs_equal && eq;
    }
    report["box"] = {{"n_max", box.n_max}, {"m_max", box.m_max}};
    report["observables_match"] = all_obs_equal;
    report["mirror_maps_differ"] = !all_maps_equal;
    r.report = report.dump(2);
    r.observables_match = all_obs_equal;
    r.mirror_maps_differ = !all_maps_equal;
    return r;
}

} // namespace vsc
