#include "rossler/knots.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace rossler {

namespace {

using Poly = std::vector<long long>;  // degree 0 first

void trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

long long checked_mul(long long a, long long b) {
    __int128 r = static_cast<__int128>(a) * b;
    if (r > INT64_MAX / 4 || r < INT64_MIN / 4)
        throw DegenerateDiagram("alexander: coefficient overflow");
    return static_cast<long long>(r);
}

Poly mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] += checked_mul(a[i], b[j]);
    }
    trim(r);
    return r;
}

Poly sub(Poly a, const Poly& b) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    trim(a);
    return a;
}

// exact division in Z[t]; throws if not exact
Poly div_exact(Poly num, const Poly& den) {
    trim(num);
    if (den.empty()) throw std::invalid_argument("poly division by zero");
    if (num.empty()) return {};
    if (num.size() < den.size()) throw std::invalid_argument("poly division not exact");
    Poly q(num.size() - den.size() + 1, 0);
    for (int i = static_cast<int>(q.size()) - 1; i >= 0; --i) {
        long long lead = num[i + den.size() - 1];
        if (lead % den.back() != 0) throw std::invalid_argument("poly division not exact");
        long long f = lead / den.back();
        q[i] = f;
        if (f != 0)
            for (std::size_t j = 0; j < den.size(); ++j)
                num[i + j] -= checked_mul(f, den[j]);
    }
    trim(num);
    if (!num.empty()) throw std::invalid_argument("poly division not exact");
    return q;
}

Poly t_power_minus_one(int n) {
    Poly p(n + 1, 0);
    p[0] = -1;
    p[n] = 1;
    return p;
}

}  // namespace

long long AlexPoly::at_one() const {
    long long s = 0;
    for (long long c : coeffs) s += c;
    return s;
}

bool AlexPoly::palindromic_up_to_sign() const {
    std::size_t n = coeffs.size();
    bool plus = true, minus = true;
    for (std::size_t i = 0; i < n; ++i) {
        if (coeffs[i] != coeffs[n - 1 - i]) plus = false;
        if (coeffs[i] != -coeffs[n - 1 - i]) minus = false;
    }
    return plus || minus;
}

std::string AlexPoly::str() const {
    std::ostringstream os;
    bool first = true;
    for (int d = degree(); d >= 0; --d) {
        long long c = coeffs[d];
        if (c == 0) continue;
        if (!first) os << (c > 0 ? " + " : " - ");
        else if (c < 0) os << "-";
        long long m = std::abs(c);
        if (m != 1 || d == 0) os << m;
        if (d >= 1) os << "t";
        if (d >= 2) os << "^" << d;
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

AlexPoly normalize_poly(std::vector<long long> c) {
    // strip factors of t and trailing zeros
    trim(c);
    std::size_t lead_zero = 0;
    while (lead_zero < c.size() && c[lead_zero] == 0) ++lead_zero;
    c.erase(c.begin(), c.begin() + lead_zero);
    if (c.empty()) throw DegenerateDiagram("alexander: zero determinant");
    if (c.back() < 0)
        for (auto& v : c) v = -v;
    // canonical representative of t <-> 1/t
    std::vector<long long> rev(c.rbegin(), c.rend());
    if (rev.back() < 0)
        for (auto& v : rev) v = -v;
    AlexPoly r;
    r.coeffs = std::min(c, rev);
    return r;
}

// ---------------------------------------------------------------------------
// diagram extraction

namespace {

struct Vec2 {
    double x, y;
};

double cross2(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

struct Occurrence {
    double pos;   // traversal position: segment index + parameter
    int id;
    bool over;
    int sign;
    double px, py;  // projected crossing point
};

}  // namespace

std::vector<State3> resample_closed(const std::vector<State3>& curve,
                                    std::size_t max_segments) {
    if (curve.size() <= max_segments) return curve;
    std::vector<State3> out;
    out.reserve(max_segments);
    double step = static_cast<double>(curve.size()) / max_segments;
    for (std::size_t i = 0; i < max_segments; ++i)
        out.push_back(curve[static_cast<std::size_t>(i * step)]);
    return out;
}

GaussCode gauss_code(const std::vector<State3>& closed_curve, const State3& direction) {
    std::vector<State3> curve = closed_curve;
    if (curve.size() < 3) throw std::invalid_argument("gauss_code: degenerate curve");
    if (norm(curve.front() - curve.back()) < 1e-6)
        curve.pop_back();
    else
        throw std::invalid_argument("gauss_code: curve not closed (gap >= 1e-6)");
    curve = resample_closed(curve, 20000);
    std::size_t n = curve.size();

    double dn = norm(direction);
    if (dn < 1e-12) throw std::invalid_argument("gauss_code: zero projection direction");
    State3 d = direction * (1.0 / dn);
    State3 ref = std::abs(d.z) < 0.9 ? State3{0, 0, 1} : State3{1, 0, 0};
    State3 e1 = cross(d, ref);
    e1 = e1 * (1.0 / norm(e1));
    State3 e2 = cross(d, e1);

    std::vector<Vec2> q(n);
    std::vector<double> depth(n);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        q[i] = {dot(curve[i], e1), dot(curve[i], e2)};
        depth[i] = dot(curve[i], d);
        scale = std::max({scale, std::abs(q[i].x), std::abs(q[i].y)});
    }
    scale = 1.0 + scale;

    std::vector<Occurrence> occ;
    int next_id = 0;
    const double eps_par = 1e-9;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t i2 = (i + 1) % n;
        Vec2 r{q[i2].x - q[i].x, q[i2].y - q[i].y};
        double rlen = std::hypot(r.x, r.y);
        if (rlen < 1e-14 * scale) continue;
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;  // adjacent around the seam
            std::size_t j2 = (j + 1) % n;
            Vec2 s{q[j2].x - q[j].x, q[j2].y - q[j].y};
            double slen = std::hypot(s.x, s.y);
            if (slen < 1e-14 * scale) continue;
            // bounding box prune
            if (std::min(q[i].x, q[i2].x) > std::max(q[j].x, q[j2].x) ||
                std::min(q[j].x, q[j2].x) > std::max(q[i].x, q[i2].x) ||
                std::min(q[i].y, q[i2].y) > std::max(q[j].y, q[j2].y) ||
                std::min(q[j].y, q[j2].y) > std::max(q[i].y, q[i2].y))
                continue;
            double denom = cross2(r, s);
            Vec2 w{q[j].x - q[i].x, q[j].y - q[i].y};
            if (std::abs(denom) < 1e-14 * rlen * slen) {
                // parallel segments in overlapping boxes: generic only if far
                double dist = std::abs(cross2(r, w)) / rlen;
                if (dist < 1e-9 * scale)
                    throw NonGenericProjection("near-parallel overlapping segments");
                continue;
            }
            double tt = cross2(w, s) / denom;
            double uu = cross2(w, r) / denom;
            if (tt < -eps_par || tt > 1.0 + eps_par || uu < -eps_par || uu > 1.0 + eps_par)
                continue;
            if (tt < eps_par || tt > 1.0 - eps_par || uu < eps_par || uu > 1.0 - eps_par)
                throw NonGenericProjection("crossing at a projected vertex");
            double sin_angle = std::abs(denom) / (rlen * slen);
            if (sin_angle <= 1e-3)
                throw NonGenericProjection("crossing angle below the floor");
            double d1 = depth[i] + tt * (depth[i2] - depth[i]);
            double d2 = depth[j] + uu * (depth[j2] - depth[j]);
            if (std::abs(d1 - d2) <= 1e-9 * scale)
                throw NonGenericProjection("unresolved crossing depths");
            bool first_over = d1 > d2;
            // sign from (over direction) x (under direction)
            double cr = first_over ? cross2(r, s) : cross2(s, r);
            int sign = (cr > 0.0) ? 1 : -1;
            double px = q[i].x + tt * r.x, py = q[i].y + tt * r.y;
            occ.push_back({static_cast<double>(i) + tt, next_id, first_over, sign, px, py});
            occ.push_back({static_cast<double>(j) + uu, next_id, !first_over, sign, px, py});
            ++next_id;
        }
    }

    std::sort(occ.begin(), occ.end(),
              [](const Occurrence& a, const Occurrence& b) { return a.pos < b.pos; });
    for (std::size_t i = 0; i + 1 < occ.size(); ++i) {
        if (occ[i + 1].pos - occ[i].pos < 1e-9)
            throw NonGenericProjection("coincident crossing positions on the curve");
    }
    for (std::size_t i = 0; i < occ.size(); ++i)
        for (std::size_t j = i + 1; j < occ.size(); ++j)
            if (occ[i].id != occ[j].id &&
                std::hypot(occ[i].px - occ[j].px, occ[i].py - occ[j].py) < 1e-9 * scale)
                throw NonGenericProjection("triple point in the projection");

    GaussCode code;
    for (const auto& o : occ) code.seq.push_back({o.id, o.over, o.sign});
    return code;
}

// ---------------------------------------------------------------------------
// code reduction and the Alexander matrix

GaussCode reduce_code(GaussCode code) {
    auto erase_ids = [&](std::set<int> ids) {
        GaussCode out;
        for (const auto& e : code.seq)
            if (!ids.count(e.id)) out.seq.push_back(e);
        code = std::move(out);
    };
    bool changed = true;
    while (changed && !code.seq.empty()) {
        changed = false;
        std::size_t m = code.seq.size();
        // R1: a kink, the same crossing visited over then under in a row
        for (std::size_t i = 0; i < m; ++i) {
            const auto& a = code.seq[i];
            const auto& b = code.seq[(i + 1) % m];
            if (a.id == b.id && a.over != b.over) {
                erase_ids({a.id});
                changed = true;
                break;
            }
        }
        if (changed) continue;
        // R2: two adjacent over-visits matched by two adjacent under-visits
        // of the same crossing pair with opposite signs
        for (std::size_t i = 0; i < m && !changed; ++i) {
            const auto& a = code.seq[i];
            const auto& b = code.seq[(i + 1) % m];
            if (a.id == b.id || !(a.over && b.over)) continue;
            for (std::size_t j = 0; j < m && !changed; ++j) {
                const auto& c = code.seq[j];
                const auto& d = code.seq[(j + 1) % m];
                if (c.over || d.over) continue;
                bool same_pair = (c.id == a.id && d.id == b.id) ||
                                 (c.id == b.id && d.id == a.id);
                if (!same_pair) continue;
                if (a.sign * b.sign != -1) continue;
                erase_ids({a.id, b.id});
                changed = true;
            }
        }
    }
    return code;
}

namespace {

void validate_code(const GaussCode& code) {
    std::map<int, int> seen_over, seen_under;
    for (const auto& e : code.seq) {
        if (e.over) seen_over[e.id]++;
        else seen_under[e.id]++;
    }
    if (seen_over.size() != code.crossings() || seen_under.size() != code.crossings())
        throw DegenerateDiagram("gauss code: ids must appear once over, once under");
    for (const auto& [id, cnt] : seen_over)
        if (cnt != 1 || seen_under[id] != 1)
            throw DegenerateDiagram("gauss code: ids must appear once over, once under");
}

Poly bareiss_det(std::vector<std::vector<Poly>> m) {
    std::size_t n = m.size();
    if (n == 0) return {1};
    Poly prev{1};
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k].empty()) {
            std::size_t piv = k + 1;
            while (piv < n && m[piv][k].empty()) ++piv;
            if (piv == n) return {};
            std::swap(m[k], m[piv]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m[i][j] = div_exact(sub(mul(m[i][j], m[k][k]), mul(m[i][k], m[k][j])), prev);
        prev = m[k][k];
    }
    Poly det = m[n - 1][n - 1];
    if (sign < 0)
        for (auto& c : det) c = -c;
    return det;
}

}  // namespace

AlexPoly alexander(const GaussCode& input) {
    GaussCode code = reduce_code(input);
    if (code.seq.empty()) return AlexPoly{};  // unknot
    validate_code(code);
    std::size_t m = code.seq.size();
    std::size_t n = code.crossings();

    // arcs are cut at under-visits; arc u runs from under-visit u to u+1
    std::map<int, int> under_rank;   // crossing id -> rank of its under-visit
    std::vector<int> arc_at(m);      // arc present at each sequence position
    {
        int rank = 0;
        for (std::size_t i = 0; i < m; ++i)
            if (!code.seq[i].over) under_rank[code.seq[i].id] = rank++;
        int cur = static_cast<int>(n) - 1;  // before the first under-visit: last arc
        for (std::size_t i = 0; i < m; ++i) {
            if (!code.seq[i].over) cur = under_rank[code.seq[i].id];
            arc_at[i] = cur;
        }
    }
    std::map<int, int> over_arc;
    for (std::size_t i = 0; i < m; ++i)
        if (code.seq[i].over) over_arc[code.seq[i].id] = arc_at[i];

    // Wirtinger relations through Fox calculus, generators abelianized to t:
    //   positive: out = over * in * over^-1 -> (1-t) over + t in - out
    //   negative: out = over^-1 * in * over -> (t-1) over + in - t out
    std::vector<std::vector<Poly>> mat(n, std::vector<Poly>(n));
    for (const auto& [id, rk] : under_rank) {
        int in_arc = (rk + static_cast<int>(n) - 1) % static_cast<int>(n);
        int out_arc = rk;
        int ov = over_arc[id];
        int sign = 0;
        for (const auto& e : code.seq)
            if (e.id == id) { sign = e.sign; break; }
        auto add = [&](int col, Poly p) {
            Poly& cell = mat[rk][col];
            if (cell.size() < p.size()) cell.resize(p.size(), 0);
            for (std::size_t i = 0; i < p.size(); ++i) cell[i] += p[i];
            trim(cell);
        };
        if (sign > 0) {
            add(ov, Poly{1, -1});
            add(in_arc, Poly{0, 1});
            add(out_arc, Poly{-1});
        } else {
            add(ov, Poly{-1, 1});
            add(in_arc, Poly{1});
            add(out_arc, Poly{0, -1});
        }
    }
    // delete the last row and column
    std::vector<std::vector<Poly>> minor(n - 1, std::vector<Poly>(n - 1));
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = 0; j + 1 < n; ++j) minor[i][j] = mat[i][j];
    Poly det = bareiss_det(std::move(minor));
    if (det.empty()) throw DegenerateDiagram("alexander: vanishing determinant");
    return normalize_poly(det);
}

AlexPoly torus_alexander(int p, int q) {
    if (p < 2 || q < 2) throw std::invalid_argument("torus_alexander: p,q >= 2");
    Poly num = mul(t_power_minus_one(p * q), t_power_minus_one(1));
    Poly den = mul(t_power_minus_one(p), t_power_minus_one(q));
    return normalize_poly(div_exact(num, den));
}

std::optional<std::pair<int, int>> torus_knot_id(const AlexPoly& poly, int max_pq) {
    if (poly.coeffs == std::vector<long long>{1}) return std::nullopt;  // unknot
    for (int p = 2; p <= max_pq; ++p)
        for (int q = p + 1; q <= max_pq; ++q) {
            if (std::gcd(p, q) != 1) continue;
            if (torus_alexander(p, q) == poly) return std::make_pair(p, q);
        }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// the L(0,1) template

namespace {

// shift order on rotations of a periodic word: symbol 1 preserves, symbol 2
// reverses; ties impossible for primitive words
bool rotation_less(const std::string& w, int i, int j) {
    int len = static_cast<int>(w.size());
    int twos = 0;
    for (int nn = 0; nn < len; ++nn) {
        char si = w[(i + nn) % len], sj = w[(j + nn) % len];
        if (si != sj) return (si < sj) == (twos % 2 == 0);
        if (si == '2') ++twos;
    }
    return false;
}

bool is_primitive(const std::string& w) {
    int len = static_cast<int>(w.size());
    for (int d = 1; d < len; ++d) {
        if (len % d != 0) continue;
        bool power = true;
        for (int i = d; i < len && power; ++i) power = (w[i] == w[i - d]);
        if (power) return false;
    }
    return true;
}

struct Path3 {
    std::vector<State3> pts;
    void add(double x, double y, double z) { pts.push_back({x, y, z}); }
};

}  // namespace

std::vector<State3> template_embed(const std::string& word) {
    int k = static_cast<int>(word.size());
    if (k == 0) throw std::invalid_argument("template_embed: empty word");
    for (char ch : word)
        if (ch != '1' && ch != '2')
            throw std::invalid_argument("template_embed: symbols must be 1 or 2");
    if (!is_primitive(word))
        throw std::invalid_argument("template_embed: word must be primitive");

    // branch-line order of the k rotations
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](int i, int j) { return rotation_less(word, i, j); });
    std::vector<int> rank(k);
    for (int r = 0; r < k; ++r) rank[idx[r]] = r;

    auto xpos = [&](int r) { return (k == 1) ? 0.0 : -1.0 + 2.0 * r / (k - 1); };

    // group-2 strands and the bubble-sort schedule of the half twist
    std::vector<int> g2;  // rotation indices through strip 2, by branch position
    for (int r = 0; r < k; ++r)
        if (word[idx[r]] == '2') g2.push_back(idx[r]);
    int R = static_cast<int>(g2.size());
    std::vector<std::pair<int, int>> swaps;  // positions within the bundle
    {
        std::vector<int> order(R);
        for (int i = 0; i < R; ++i) order[i] = i;
        std::vector<int> target(R);
        for (int i = 0; i < R; ++i) target[i] = R - 1 - i;
        bool moved = true;
        while (moved) {
            moved = false;
            for (int j = 0; j + 1 < R; ++j) {
                // bubble toward full reversal
                if (target[order[j]] > target[order[j + 1]]) {
                    swaps.emplace_back(j, j + 1);
                    std::swap(order[j], order[j + 1]);
                    moved = true;
                }
            }
        }
    }
    int n_slab = std::max<int>(1, static_cast<int>(swaps.size()));
    double y_tw0 = 0.15, y_tw1 = 0.50;
    double z1 = -0.45, z2 = 0.45, bump = 0.12;

    std::vector<Path3> strand(k);
    std::vector<double> g2x(R);
    for (int b = 0; b < R; ++b) g2x[b] = xpos(rank[g2[b]]);
    for (int i = 0; i < k; ++i) {
        int r = rank[i];
        int r_next = rank[(i + 1) % k];
        double x0 = xpos(r), x1 = xpos(r_next);
        Path3& pth = strand[i];
        pth.add(x0, 0.0, 0.0);
        if (word[i] == '1') {
            pth.add(x0, 0.12, z1);
            pth.add(x0, y_tw1, z1);
            pth.add(x1, 0.82, z1);
        } else {
            pth.add(x0, 0.10, z2);
            // walk the bundle positions through the swap schedule
            int pos = 0;
            while (g2[pos] != i) ++pos;
            double dy = (y_tw1 - y_tw0) / n_slab;
            double y = y_tw0;
            pth.add(x0, y, z2);
            for (const auto& [pa, pb] : swaps) {
                double ya = y, yb = y + dy;
                if (pos == pa) {
                    // left strand crosses over to the right
                    pth.add(0.5 * (g2x[pa] + g2x[pb]), 0.5 * (ya + yb), z2 + bump);
                    pth.add(g2x[pb], yb, z2);
                    pos = pb;
                } else if (pos == pb) {
                    pth.add(0.5 * (g2x[pa] + g2x[pb]), 0.5 * (ya + yb), z2 - bump);
                    pth.add(g2x[pa], yb, z2);
                    pos = pa;
                } else {
                    pth.add(g2x[pos], yb, z2);
                }
                y = yb;
            }
            pth.add(g2x[pos], y_tw1 + 0.02, z2);
            pth.add(x1, 0.82, z2);
        }
        // re-join the branch line, then close behind at a rank-keyed depth
        pth.add(x1, 1.0, 0.0);
        double dq = -1.1 - 0.07 * r_next;
        pth.add(x1, 1.22, dq);
        pth.add(x1 + 0.04, 1.05, dq);
        pth.add(x1 + 0.04, -0.05, dq);
        pth.add(x1, -0.22, dq);
        pth.add(x1, 0.0, 0.0);
    }

    // concatenate strands along the orbit: i -> i+1 -> ...
    std::vector<State3> loop;
    int cur = 0;
    for (int step = 0; step < k; ++step) {
        const auto& pts = strand[cur].pts;
        for (std::size_t j = (step == 0 ? 0 : 1); j < pts.size(); ++j) loop.push_back(pts[j]);
        cur = (cur + 1) % k;
    }
    // densify so that crossings are refined on short segments
    std::vector<State3> fine;
    for (std::size_t i = 0; i + 1 < loop.size(); ++i) {
        const State3& a = loop[i];
        const State3& b = loop[i + 1];
        double len = norm(b - a);
        int pieces = std::max(1, static_cast<int>(len / 0.05));
        for (int j = 0; j < pieces; ++j)
            fine.push_back(a + (b - a) * (static_cast<double>(j) / pieces));
    }
    fine.push_back(loop.back());
    return fine;
}

std::vector<std::string> enumerate_words(int max_len) {
    if (max_len < 1) throw std::invalid_argument("enumerate_words: max_len >= 1");
    std::set<std::string> out;
    for (int len = 1; len <= max_len; ++len) {
        for (int mask = 0; mask < (1 << len); ++mask) {
            std::string w(len, '1');
            for (int i = 0; i < len; ++i)
                if (mask & (1 << i)) w[i] = '2';
            if (!is_primitive(w)) continue;
            std::string best = w;
            for (int r = 1; r < len; ++r) {
                std::string rot = w.substr(r) + w.substr(0, r);
                best = std::min(best, rot);
            }
            out.insert(best);
        }
    }
    std::vector<std::string> v(out.begin(), out.end());
    std::sort(v.begin(), v.end(), [](const std::string& a, const std::string& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return v;
}

AlexPoly alexander_of_closed_curve(const std::vector<State3>& curve,
                                   std::uint64_t rng_seed, int max_tries) {
    std::mt19937_64 rng(rng_seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::string last = "no projection attempted";
    for (int t = 0; t < max_tries; ++t) {
        State3 dir{gauss(rng), gauss(rng), gauss(rng)};
        if (norm(dir) < 1e-3) continue;
        try {
            return alexander(gauss_code(curve, dir));
        } catch (const NonGenericProjection& e) {
            last = e.what();
        }
    }
    throw NonGenericProjection("alexander_of_closed_curve: all projections failed: " + last);
}

}  // namespace rossler
