#include <functional>
#include <map>

#include "gtc/models/finset.hpp"
#include "gtc/models/tot.hpp"
#include "gtc/suites.hpp"

namespace gtc::suites {

namespace {

// Per-law tallies; a law holds when it was exercised and never failed.
struct Laws {
    std::map<std::string, std::pair<long, long>> tally;  // checks, failures

    void record(SuiteResult& r, const std::string& law, bool ok, const std::string& what) {
        auto& t = tally[law];
        ++t.first;
        if (!ok) ++t.second;
        r.check(ok, law + ": " + what);
    }
    bool holds(const std::string& law) const {
        auto it = tally.find(law);
        return it != tally.end() && it->second.first > 0 && it->second.second == 0;
    }
    nlohmann::json to_json() const {
        nlohmann::json j;
        for (auto& [law, t] : tally) j[law] = {{"checks", t.first}, {"failures", t.second}};
        return j;
    }
};

// The three implications between the laws; each is reported together with its premise.
void report_implications(SuiteResult& r, const Laws& laws, const std::string& uniform_any,
                         const std::string& uniform_inj) {
    bool conway = laws.holds("fixpoint") && laws.holds("naturality") && laws.holds("dinaturality") &&
                  laws.holds("codiagonal");
    struct Imp {
        std::string name;
        bool premise, conclusion;
    };
    std::vector<Imp> imps{
        {"codiagonal+" + uniform_any + "=>squaring", laws.holds("codiagonal") && laws.holds(uniform_any),
         laws.holds("squaring")},
        {"squaring+" + uniform_inj + "=>dinaturality", laws.holds("squaring") && laws.holds(uniform_inj),
         laws.holds("dinaturality")},
        {"conway=>" + uniform_inj, conway, laws.holds(uniform_inj)},
    };
    nlohmann::json j;
    for (auto& i : imps) {
        j[i.name] = {{"premise", i.premise}, {"conclusion", i.conclusion}};
        r.check(!i.premise || i.conclusion, "implication fails: " + i.name);
    }
    r.check(conway, "not all Conway laws hold");
    r.details["laws"] = laws.to_json();
    r.details["implications"] = j;
    r.details["conway"] = conway;
}

// ---------------------------------------------------------------- finite sets under coproduct

using Fn = std::vector<int>;

std::vector<Fn> all_functions(int n, int m) {
    std::vector<Fn> out;
    if (n > 0 && m == 0) return out;
    Fn f(n, 0);
    while (true) {
        out.push_back(f);
        int k = 0;
        while (k < n && ++f[k] == m) f[k++] = 0;
        if (k == n) break;
    }
    return out;
}

bool lands_in(const Fn& f, int bound) {
    for (int v : f)
        if (v >= bound) return false;
    return true;
}

bool injective(const Fn& f, int m) {
    std::vector<char> seen(m, 0);
    for (int v : f) {
        if (seen[v]) return false;
        seen[v] = 1;
    }
    return true;
}

std::string show(const Fn& f) {
    std::string s = "[";
    for (std::size_t k = 0; k < f.size(); ++k) s += (k ? "," : "") + std::to_string(f[k]);
    return s + "]";
}

}  // namespace

SuiteResult conway_finset() {
    SuiteResult r{"conway_finset"};
    Laws laws;
    auto dag = [](const Fn& f, int ny) { return finset::finset_iter(f, ny); };
    auto guarded_check = [&](const std::string& law, const std::function<bool()>& body, const std::string& what) {
        bool ok;
        try {
            ok = body();
        } catch (const std::exception&) {
            ok = false;
        }
        laws.record(r, law, ok, what);
    };

    for (int nx = 0; nx <= 3; ++nx)
        for (int ny = 0; ny <= 3; ++ny)
            for (const Fn& f : all_functions(nx, ny + nx)) {
                if (!lands_in(f, ny)) continue;
                guarded_check("fixpoint", [&] {
                    Fn d = dag(f, ny);
                    for (int x = 0; x < nx; ++x)
                        if (d[x] != (f[x] < ny ? f[x] : d[f[x] - ny])) return false;
                    return true;
                }, show(f));
            }

    for (int nx = 0; nx <= 2; ++nx)
        for (int ny = 0; ny <= 2; ++ny) {
            std::vector<Fn> guarded;
            for (const Fn& f : all_functions(nx, ny + nx))
                if (lands_in(f, ny)) guarded.push_back(f);
            for (const Fn& f : guarded) {
                for (int nz = 0; nz <= 2; ++nz)
                    for (const Fn& g : all_functions(ny, nz))
                        guarded_check("naturality", [&] {
                            Fn h(nx);
                            for (int x = 0; x < nx; ++x) h[x] = f[x] < ny ? g[f[x]] : nz + f[x] - ny;
                            Fn lhs = dag(h, nz), d = dag(f, ny);
                            for (int x = 0; x < nx; ++x)
                                if (lhs[x] != g[d[x]]) return false;
                            return true;
                        }, show(f) + " " + show(g));
                guarded_check("squaring", [&] {
                    Fn sq(nx);
                    for (int x = 0; x < nx; ++x) sq[x] = f[x] < ny ? f[x] : f[f[x] - ny];
                    return dag(sq, ny) == dag(f, ny);
                }, show(f));
            }
            // codiagonal: f : X -> (Y + X) + X guarded in both copies of X
            for (const Fn& f : all_functions(nx, ny + 2 * nx)) {
                if (!lands_in(f, ny)) continue;
                guarded_check("codiagonal", [&] {
                    Fn merged(nx);
                    for (int x = 0; x < nx; ++x) merged[x] = f[x] < ny + nx ? f[x] : ny + (f[x] - ny - nx);
                    return dag(merged, ny) == dag(dag(f, ny + nx), ny);
                }, show(f));
            }
            // dinaturality: g : X -> Y + Z, h : Z -> Y + X, one of them guarded
            for (int nz = 0; nz <= 2; ++nz)
                for (const Fn& g : all_functions(nx, ny + nz))
                    for (const Fn& h : all_functions(nz, ny + nx)) {
                        if (!lands_in(g, ny) && !lands_in(h, ny)) continue;
                        guarded_check("dinaturality", [&] {
                            Fn left(nx), right(nz);
                            for (int x = 0; x < nx; ++x) left[x] = g[x] < ny ? g[x] : h[g[x] - ny];
                            for (int z = 0; z < nz; ++z) right[z] = h[z] < ny ? h[z] : g[h[z] - ny];
                            Fn lhs = dag(left, ny), inner = dag(right, ny);
                            for (int x = 0; x < nx; ++x)
                                if (lhs[x] != (g[x] < ny ? g[x] : inner[g[x] - ny])) return false;
                            return true;
                        }, show(g) + " " + show(h));
                    }
        }

    // uniformity: (id + h) f = g h implies f-dagger = g-dagger h, for f : X -> Z + X, g : Y -> Z + Y, h : X -> Y
    for (int nx = 0; nx <= 2; ++nx)
        for (int ny = 0; ny <= 2; ++ny)
            for (int nz = 0; nz <= 2; ++nz)
                for (const Fn& h : all_functions(nx, ny)) {
                    bool inj = injective(h, ny);
                    for (const Fn& f : all_functions(nx, nz + nx)) {
                        if (!lands_in(f, nz)) continue;
                        for (const Fn& g : all_functions(ny, nz + ny)) {
                            if (!lands_in(g, nz)) continue;
                            bool premise = true;
                            for (int x = 0; x < nx && premise; ++x)
                                premise = (f[x] < nz ? f[x] : nz + h[f[x] - nz]) == g[h[x]];
                            if (!premise) continue;
                            auto body = [&] {
                                Fn df = dag(f, nz), dg = dag(g, nz);
                                for (int x = 0; x < nx; ++x)
                                    if (df[x] != dg[h[x]]) return false;
                                return true;
                            };
                            std::string what = show(f) + " " + show(g) + " " + show(h);
                            guarded_check("uniformity_all_maps", body, what);
                            if (inj) guarded_check("uniformity_injections", body, what);
                        }
                    }
                }

    report_implications(r, laws, "uniformity_all_maps", "uniformity_injections");
    return r;
}

// ---------------------------------------------------------------- truncated presheaves

namespace {

using tot::Presheaf;

// PMap t: t[n-1][x] is the image of x in stage n.
using PMap = std::vector<std::vector<int>>;

Presheaf terminal(int N) {
    Presheaf p;
    p.sizes.assign(N, 1);
    for (int n = 1; n < N; ++n) p.restrict.push_back({0});
    return p;
}

// Pairs (x, y) are indexed x * |Q(n)| + y.
Presheaf pprod(const Presheaf& a, const Presheaf& b) {
    Presheaf p;
    for (int n = 1; n <= a.stages(); ++n) p.sizes.push_back(a.size(n) * b.size(n));
    for (int n = 1; n < a.stages(); ++n) {
        std::vector<int> r;
        for (int x = 0; x < a.size(n + 1); ++x)
            for (int y = 0; y < b.size(n + 1); ++y) r.push_back(a.down(n + 1, x) * b.size(n) + b.down(n + 1, y));
        p.restrict.push_back(r);
    }
    return p;
}

// Presheaves with stage sets of size 1 or 2 and surjective restrictions.
std::vector<Presheaf> family(int N) {
    std::vector<Presheaf> out;
    std::function<void(Presheaf&)> grow = [&](Presheaf& p) {
        if (p.stages() == N) {
            out.push_back(p);
            return;
        }
        int prev = p.sizes.empty() ? 0 : p.sizes.back();
        for (int s = std::max(prev, 1); s <= 2; ++s) {
            p.sizes.push_back(s);
            if (prev == 0) {
                grow(p);
            } else {
                for (const Fn& r : all_functions(s, prev)) {
                    std::vector<char> hit(prev, 0);
                    for (int v : r) hit[v] = 1;
                    if (std::find(hit.begin(), hit.end(), 0) != hit.end()) continue;
                    p.restrict.push_back(r);
                    grow(p);
                    p.restrict.pop_back();
                }
            }
            p.sizes.pop_back();
        }
    };
    Presheaf p;
    grow(p);
    return out;
}

// Natural maps P -> Q constant on the classes of key(stage, x).
std::vector<PMap> natural_maps(const Presheaf& P, const Presheaf& Q, const std::function<long(int, int)>& key) {
    int N = P.stages();
    std::vector<PMap> out;
    PMap cur(N);
    std::function<void(int)> stage = [&](int n) {
        if (n > N) {
            out.push_back(cur);
            return;
        }
        std::map<long, std::vector<int>> classes;
        for (int x = 0; x < P.size(n); ++x) classes[key(n, x)].push_back(x);
        std::vector<std::vector<int>> members, cands;
        for (auto& [k, xs] : classes) {
            std::vector<int> c;
            for (int v = 0; v < Q.size(n); ++v) {
                bool ok = true;
                if (n > 1)
                    for (int x : xs) ok = ok && Q.down(n, v) == cur[n - 2][P.down(n, x)];
                if (ok) c.push_back(v);
            }
            if (c.empty()) return;
            members.push_back(xs);
            cands.push_back(c);
        }
        cur[n - 1].assign(P.size(n), -1);
        std::function<void(std::size_t)> pick = [&](std::size_t g) {
            if (g == members.size()) {
                stage(n + 1);
                return;
            }
            for (int v : cands[g]) {
                for (int x : members[g]) cur[n - 1][x] = v;
                pick(g + 1);
            }
        };
        pick(0);
    };
    stage(1);
    return out;
}

std::vector<PMap> all_natural(const Presheaf& P, const Presheaf& Q) {
    return natural_maps(P, Q, [](int, int x) { return static_cast<long>(x); });
}

// f : Y x X -> X seeing X only one stage late.
std::vector<PMap> guarded_in_second(const Presheaf& Y, const Presheaf& X) {
    return natural_maps(pprod(Y, X), X, [&](int n, int i) {
        int y = i / X.size(n), x = i % X.size(n);
        int prev = n == 1 ? 1 : X.size(n - 1);
        return static_cast<long>(y) * prev + X.down(n, x);
    });
}

// Seeing all of P one stage late.
std::vector<PMap> guarded_in_all(const Presheaf& P, const Presheaf& Q) {
    return natural_maps(P, Q, [&](int n, int x) { return static_cast<long>(P.down(n, x)); });
}

bool depends_late(const Presheaf& P, const PMap& m) {
    for (int n = 1; n <= P.stages(); ++n)
        for (int a = 0; a < P.size(n); ++a)
            for (int b = 0; b < P.size(n); ++b)
                if (P.down(n, a) == P.down(n, b) && m[n - 1][a] != m[n - 1][b]) return false;
    return true;
}

// Unique fixpoint family of f : Y x X -> X, stage by stage.
PMap rec(const Presheaf& Y, const Presheaf& X, const PMap& f) {
    PMap out(Y.stages());
    for (int n = 1; n <= Y.stages(); ++n)
        for (int y = 0; y < Y.size(n); ++y) {
            int found = -1, count = 0;
            for (int x = 0; x < X.size(n); ++x)
                if (f[n - 1][y * X.size(n) + x] == x) {
                    found = x;
                    ++count;
                }
            if (count != 1) throw ModelError("stage " + std::to_string(n) + " has " + std::to_string(count) + " fixpoints");
            out[n - 1].push_back(found);
        }
    return out;
}

PMap then(const PMap& f, const PMap& g) {
    PMap out = f;
    for (std::size_t n = 0; n < f.size(); ++n)
        for (auto& v : out[n]) v = g[n][v];
    return out;
}

}  // namespace

SuiteResult conway_tot(int max_stages) {
    SuiteResult r{"conway_tot"};
    Laws laws;
    auto run = [&](const std::string& law, const std::function<bool()>& body, const std::string& what) {
        bool ok;
        try {
            ok = body();
        } catch (const std::exception&) {
            ok = false;
        }
        laws.record(r, law, ok, what);
    };

    for (int N = 1; N <= max_stages; ++N) {
        std::vector<Presheaf> fam = family(N);
        Presheaf one = terminal(N);
        std::string tag = "N=" + std::to_string(N);

        for (std::size_t iy = 0; iy < fam.size(); ++iy)
            for (std::size_t ix = 0; ix < fam.size(); ++ix) {
                const Presheaf &Y = fam[iy], &X = fam[ix];
                std::string pair = tag + " Y#" + std::to_string(iy) + " X#" + std::to_string(ix);
                for (const PMap& f : guarded_in_second(Y, X)) {
                    run("fixpoint", [&] {
                        PMap s = rec(Y, X, f);
                        for (int n = 1; n <= N; ++n)
                            for (int y = 0; y < Y.size(n); ++y)
                                if (f[n - 1][y * X.size(n) + s[n - 1][y]] != s[n - 1][y]) return false;
                        return true;
                    }, pair);
                    run("squaring", [&] {
                        PMap sq = f;
                        for (int n = 1; n <= N; ++n)
                            for (int y = 0; y < Y.size(n); ++y)
                                for (int x = 0; x < X.size(n); ++x) {
                                    int once = f[n - 1][y * X.size(n) + x];
                                    sq[n - 1][y * X.size(n) + x] = f[n - 1][y * X.size(n) + once];
                                }
                        return rec(Y, X, sq) == rec(Y, X, f);
                    }, pair);
                    for (std::size_t iz = 0; iz < fam.size(); ++iz) {
                        const Presheaf& Z = fam[iz];
                        for (const PMap& h : all_natural(Z, Y))
                            run("naturality", [&] {
                                PMap moved(N);
                                for (int n = 1; n <= N; ++n)
                                    for (int z = 0; z < Z.size(n); ++z)
                                        for (int x = 0; x < X.size(n); ++x)
                                            moved[n - 1].push_back(f[n - 1][h[n - 1][z] * X.size(n) + x]);
                                return rec(Z, X, moved) == then(h, rec(Y, X, f));
                            }, pair + " Z#" + std::to_string(iz));
                    }
                }
            }

        // binary laws with the terminal parameter
        for (std::size_t ix = 0; ix < fam.size(); ++ix) {
            const Presheaf& X = fam[ix];
            for (std::size_t iz = 0; iz < fam.size(); ++iz) {
                const Presheaf& Z = fam[iz];
                for (const PMap& g : all_natural(X, Z))
                    for (const PMap& h : all_natural(Z, X)) {
                        if (!depends_late(X, g) && !depends_late(Z, h)) continue;
                        run("dinaturality", [&] {
                            PMap lhs = rec(one, Z, then(h, g));
                            PMap inner = rec(one, X, then(g, h));
                            return lhs == then(inner, g);
                        }, tag + " X#" + std::to_string(ix) + " Z#" + std::to_string(iz));
                    }
            }
            Presheaf XX = pprod(X, X);
            for (const PMap& f : guarded_in_all(XX, X))
                run("codiagonal", [&] {
                    PMap diag(N);
                    for (int n = 1; n <= N; ++n)
                        for (int x = 0; x < X.size(n); ++x) diag[n - 1].push_back(f[n - 1][x * X.size(n) + x]);
                    PMap inner = rec(X, X, f);
                    if (!depends_late(X, inner)) return false;
                    return rec(one, X, diag) == rec(one, X, inner);
                }, tag + " X#" + std::to_string(ix));
        }

        // uniformity: f (id x h) = h g implies f-dagger = h g-dagger, for f on X, g on Y, h : Y -> X
        auto uniform = [&](const std::string& law, const Presheaf& X, const Presheaf& Y, const std::vector<PMap>& hs,
                           const std::string& what) {
            auto fs = guarded_in_all(X, X);
            auto gs = guarded_in_all(Y, Y);
            for (const PMap& h : hs)
                for (const PMap& f : fs)
                    for (const PMap& g : gs) {
                        if (then(h, f) != then(g, h)) continue;
                        run(law, [&] { return rec(one, X, f) == then(rec(one, Y, g), h); }, what);
                    }
        };
        for (std::size_t ix = 0; ix < fam.size(); ++ix)
            for (std::size_t iy = 0; iy < fam.size(); ++iy) {
                const Presheaf &X = fam[ix], &Y = fam[iy];
                std::string what = tag + " X#" + std::to_string(ix) + " Y#" + std::to_string(iy);
                uniform("uniformity_all_maps", X, Y, all_natural(Y, X), what);
                // product projection X x W -> X with W = Y
                Presheaf XW = pprod(X, Y);
                PMap proj(N);
                for (int n = 1; n <= N; ++n)
                    for (int i = 0; i < XW.size(n); ++i) proj[n - 1].push_back(i / Y.size(n));
                uniform("uniformity_projections", X, XW, {proj}, what);
            }
    }
    report_implications(r, laws, "uniformity_all_maps", "uniformity_projections");
    return r;
}

}  // namespace gtc::suites
