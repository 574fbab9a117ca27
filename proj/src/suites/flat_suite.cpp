#include <functional>
#include <map>

#include "gtc/models/flat.hpp"
#include "gtc/suites.hpp"

namespace gtc::suites {

namespace {

using flat::eta;
using flat::Map;
using flat::Poset;

// Operators in table form. The parameter comes first in every product.
// Total recursion: (B, A, f : B x A -> A) -> B -> A, for A pointed.
using Rec = std::function<Map(const Poset&, const Poset&, const Map&)>;
// Guarded recursion from a witness: (Y, X, g : Y x TX -> X) -> Y -> X, for f = g (id x eta).
using GRec = std::function<Map(const Poset&, const Poset&, const Map&)>;

int at(const Poset&, const Poset& Q, int p, int q) { return p * Q.n + q; }

Poset prod(const Poset& P, const Poset& Q) { return flat::product({P, Q}); }

// Least fixpoint by iteration from the bottom.
Map kleene(const Poset& B, const Poset& A, const Map& f) {
    int bot = *A.bottom();
    Map out(B.n);
    for (int b = 0; b < B.n; ++b) {
        int x = bot;
        for (int step = 0;; ++step) {
            int nx = f[at(B, A, b, x)];
            if (nx == x) break;
            if (step > A.n) throw ModelError("iteration from bottom does not stabilise");
            x = nx;
        }
        out[b] = x;
    }
    return out;
}

// Recursion with an unstructured parameter Y through the free algebra TY and the strict strength.
Map extend(const Rec& rec, const Poset& Y, const Poset& A, const Map& f) {
    Poset TY = flat::lift(Y);
    int bot = *A.bottom();
    Map F(TY.n * A.n);
    for (int t = 0; t < TY.n; ++t)
        for (int x = 0; x < A.n; ++x) F[at(TY, A, t, x)] = t == 0 ? bot : f[at(Y, A, t - 1, x)];
    Map r = rec(TY, A, F);
    Map out(Y.n);
    for (int y = 0; y < Y.n; ++y) out[y] = r[eta(y)];
    return out;
}

// g <id, (eta g)_rec>
GRec guarded_from_rec(Rec rec) {
    return [rec](const Poset& Y, const Poset& X, const Map& g) {
        Poset TX = flat::lift(X);
        Map eg(Y.n * TX.n);
        for (int i = 0; i < Y.n * TX.n; ++i) eg[i] = eta(g[i]);
        Map hat = extend(rec, Y, TX, eg);
        Map out(Y.n);
        for (int y = 0; y < Y.n; ++y) out[y] = g[at(Y, TX, y, hat[y])];
        return out;
    };
}

// a (eta f (id x a))_grec with the witness eta f (id x a Ta)
Rec rec_from_guarded(GRec grec) {
    return [grec](const Poset& B, const Poset& A, const Map& f) {
        Poset TA = flat::lift(A), TTA = flat::lift(TA);
        int bot = *A.bottom();
        auto a = [bot](int t) { return t == 0 ? bot : t - 1; };
        auto Ta = [a](int s) { return s == 0 ? 0 : eta(a(s - 1)); };
        Map w(B.n * TTA.n);
        for (int b = 0; b < B.n; ++b)
            for (int s = 0; s < TTA.n; ++s) w[at(B, TTA, b, s)] = eta(f[at(B, A, b, a(Ta(s)))]);
        if (!flat::monotone(prod(B, TTA), TA, w)) throw ModelError("transported witness is not monotone");
        Map r = grec(B, TA, w);
        Map out(B.n);
        for (int b = 0; b < B.n; ++b) out[b] = a(r[b]);
        return out;
    };
}

Map then(const Map& f, const Map& g) {
    Map out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = g[f[i]];
    return out;
}

struct Tally {
    std::map<std::string, std::pair<long, long>> laws;
    void record(SuiteResult& r, const std::string& law, const std::function<bool()>& body, const std::string& what) {
        bool ok;
        try {
            ok = body();
        } catch (const std::exception&) {
            ok = false;
        }
        auto& t = laws[law];
        ++t.first;
        if (!ok) ++t.second;
        r.check(ok, law + ": " + what);
    }
    bool all_hold(const std::string& prefix) const {
        bool any = false;
        for (auto& [law, t] : laws)
            if (law.rfind(prefix, 0) == 0) {
                any = true;
                if (t.second) return false;
            }
        return any;
    }
    nlohmann::json to_json() const {
        nlohmann::json j;
        for (auto& [law, t] : laws) j[law] = {{"checks", t.first}, {"failures", t.second}};
        return j;
    }
};

// Conway laws for total recursion on pointed posets; binary laws use the terminal parameter.
void total_laws(SuiteResult& r, Tally& t, const std::string& tag, const Rec& rec, const std::vector<Poset>& pointed) {
    const Poset one = flat::discrete(1);
    for (std::size_t ib = 0; ib < pointed.size(); ++ib)
        for (std::size_t ia = 0; ia < pointed.size(); ++ia) {
            const Poset &B = pointed[ib], &A = pointed[ia];
            std::string what = "B#" + std::to_string(ib) + " A#" + std::to_string(ia);
            for (const Map& f : flat::all_monotone(prod(B, A), A)) {
                t.record(r, tag + "fixpoint", [&] {
                    Map s = rec(B, A, f);
                    for (int b = 0; b < B.n; ++b)
                        if (f[at(B, A, b, s[b])] != s[b]) return false;
                    return true;
                }, what);
                t.record(r, tag + "squaring", [&] {
                    Map sq(f.size());
                    for (int b = 0; b < B.n; ++b)
                        for (int x = 0; x < A.n; ++x) sq[at(B, A, b, x)] = f[at(B, A, b, f[at(B, A, b, x)])];
                    return rec(B, A, sq) == rec(B, A, f);
                }, what);
                for (const Poset& C : pointed)
                    for (const Map& h : flat::all_monotone(C, B))
                        t.record(r, tag + "naturality", [&] {
                            Map moved(C.n * A.n);
                            for (int c = 0; c < C.n; ++c)
                                for (int x = 0; x < A.n; ++x) moved[at(C, A, c, x)] = f[at(B, A, h[c], x)];
                            return rec(C, A, moved) == then(h, rec(B, A, f));
                        }, what);
            }
        }
    for (std::size_t ia = 0; ia < pointed.size(); ++ia) {
        const Poset& A = pointed[ia];
        for (const Poset& A2 : pointed)
            for (const Map& g : flat::all_monotone(A, A2))
                for (const Map& h : flat::all_monotone(A2, A))
                    t.record(r, tag + "dinaturality", [&] {
                        Map lhs = rec(one, A2, then(h, g));
                        Map inner = rec(one, A, then(g, h));
                        return lhs[0] == g[inner[0]];
                    }, "A#" + std::to_string(ia));
        for (const Map& f : flat::all_monotone(prod(A, A), A))
            t.record(r, tag + "codiagonal", [&] {
                Map diag(A.n);
                for (int x = 0; x < A.n; ++x) diag[x] = f[at(A, A, x, x)];
                return rec(one, A, diag) == rec(one, A, rec(A, A, f));
            }, "A#" + std::to_string(ia));
    }
}

// Conway laws for guarded recursion given by witnesses g : Y x TX -> X.
void guarded_laws(SuiteResult& r, Tally& t, const std::string& tag, const GRec& grec, const std::vector<Poset>& all) {
    const Poset one = flat::discrete(1);
    for (std::size_t iy = 0; iy < all.size(); ++iy)
        for (std::size_t ix = 0; ix < all.size(); ++ix) {
            const Poset &Y = all[iy], &X = all[ix];
            Poset TX = flat::lift(X);
            std::string what = "Y#" + std::to_string(iy) + " X#" + std::to_string(ix);
            for (const Map& g : flat::all_monotone(prod(Y, TX), X)) {
                t.record(r, tag + "fixpoint", [&] {
                    Map s = grec(Y, X, g);
                    for (int y = 0; y < Y.n; ++y)
                        if (g[at(Y, TX, y, eta(s[y]))] != s[y]) return false;
                    return true;
                }, what);
                t.record(r, tag + "squaring", [&] {
                    // f (y, f (y, x)) has the witness g (y, eta g (y, t))
                    Map sq(g.size());
                    for (int y = 0; y < Y.n; ++y)
                        for (int s = 0; s < TX.n; ++s) sq[at(Y, TX, y, s)] = g[at(Y, TX, y, eta(g[at(Y, TX, y, s)]))];
                    return grec(Y, X, sq) == grec(Y, X, g);
                }, what);
                for (const Poset& Z : all) {
                    for (const Map& h : flat::all_monotone(Z, Y))
                        t.record(r, tag + "naturality", [&] {
                            Map moved(Z.n * TX.n);
                            for (int z = 0; z < Z.n; ++z)
                                for (int s = 0; s < TX.n; ++s) moved[at(Z, TX, z, s)] = g[at(Y, TX, h[z], s)];
                            return grec(Z, X, moved) == then(h, grec(Y, X, g));
                        }, what);
                }
            }
        }
    for (std::size_t ix = 0; ix < all.size(); ++ix) {
        const Poset& X = all[ix];
        Poset TX = flat::lift(X);
        std::string what = "X#" + std::to_string(ix);
        for (const Poset& Z : all) {
            Poset TZ = flat::lift(Z);
            // g guarded through its witness gw : TX -> Z, h arbitrary
            for (const Map& gw : flat::all_monotone(TX, Z))
                for (const Map& h : flat::all_monotone(Z, X))
                    t.record(r, tag + "dinaturality", [&] {
                        Map Th(TZ.n);
                        for (int s = 0; s < TZ.n; ++s) Th[s] = s == 0 ? 0 : eta(h[s - 1]);
                        Map lhs = grec(one, Z, then(Th, gw));
                        Map inner = grec(one, X, then(gw, h));
                        return lhs[0] == gw[eta(inner[0])];
                    }, what);
            // h guarded through hw : TZ -> X, g arbitrary
            for (const Map& hw : flat::all_monotone(TZ, X))
                for (const Map& g : flat::all_monotone(X, Z))
                    t.record(r, tag + "dinaturality", [&] {
                        Map Tg(TX.n);
                        for (int s = 0; s < TX.n; ++s) Tg[s] = s == 0 ? 0 : eta(g[s - 1]);
                        Map lhs = grec(one, Z, then(hw, g));
                        Map inner = grec(one, X, then(Tg, hw));
                        return lhs[0] == g[inner[0]];
                    }, what);
        }
        // codiagonal: f : X x X -> X guarded in the pair, witness gw : T(X x X) -> X
        Poset XX = prod(X, X), TXX = flat::lift(XX);
        for (const Map& gw : flat::all_monotone(TXX, X))
            t.record(r, tag + "codiagonal", [&] {
                Map diag(TX.n);
                for (int s = 0; s < TX.n; ++s) diag[s] = s == 0 ? gw[0] : gw[eta(at(X, X, s - 1, s - 1))];
                Map first(X.n * TX.n);
                for (int x = 0; x < X.n; ++x)
                    for (int s = 0; s < TX.n; ++s) first[at(X, TX, x, s)] = s == 0 ? gw[0] : gw[eta(at(X, X, x, s - 1))];
                Map inner = grec(X, X, first);
                Map outer(TX.n);
                for (int s = 0; s < TX.n; ++s) outer[s] = s == 0 ? gw[0] : inner[s - 1];
                if (!flat::monotone(TX, X, outer)) return false;
                return grec(one, X, diag) == grec(one, X, outer);
            }, what);
    }
}

}  // namespace

SuiteResult flat_bridge(int max_n) {
    SuiteResult r{"flat_bridge"};
    std::vector<Poset> all = flat::all_posets(max_n), pointed;
    for (const Poset& p : all)
        if (p.bottom()) pointed.push_back(p);

    Rec lfp = kleene;
    GRec dag = guarded_from_rec(lfp);        // transported to guarded recursion
    Rec back = rec_from_guarded(dag);        // and back again
    GRec dag_again = guarded_from_rec(back);
    Tally t;

    long n_total = 0, n_guarded = 0;
    for (std::size_t ib = 0; ib < all.size(); ++ib)
        for (std::size_t ia = 0; ia < pointed.size(); ++ia) {
            const Poset &B = all[ib], &A = pointed[ia];
            std::string what = "B#" + std::to_string(ib) + " A#" + std::to_string(ia);
            for (const Map& f : flat::all_monotone(prod(B, A), A)) {
                ++n_total;
                t.record(r, "round_trip_total", [&] { return back(B, A, f) == lfp(B, A, f); }, what);
                t.record(r, "extension_matches_lfp", [&] { return extend(lfp, B, A, f) == lfp(B, A, f); }, what);
            }
        }
    for (std::size_t iy = 0; iy < all.size(); ++iy)
        for (std::size_t ix = 0; ix < all.size(); ++ix) {
            const Poset &Y = all[iy], &X = all[ix];
            Poset TX = flat::lift(X);
            std::string what = "Y#" + std::to_string(iy) + " X#" + std::to_string(ix);
            for (const Map& g : flat::all_monotone(prod(Y, TX), X)) {
                ++n_guarded;
                t.record(r, "round_trip_guarded", [&] { return dag_again(Y, X, g) == dag(Y, X, g); }, what);
                // the result is the least fixpoint of f (y, -), whichever witness was chosen
                t.record(r, "least_solution", [&] {
                    Map s = dag(Y, X, g);
                    for (int y = 0; y < Y.n; ++y) {
                        auto lfp_y = flat::least_fixpoint(X, [&](int x) { return g[at(Y, TX, y, eta(x))]; });
                        if (!lfp_y || *lfp_y != s[y]) return false;
                    }
                    return true;
                }, what);
            }
        }

    total_laws(r, t, "total.", lfp, pointed);
    guarded_laws(r, t, "guarded.", dag, all);
    total_laws(r, t, "total_from_guarded.", back, pointed);

    bool total_conway = t.all_hold("total.");
    bool guarded_conway = t.all_hold("guarded.");
    bool back_conway = t.all_hold("total_from_guarded.");
    r.check(total_conway == guarded_conway, "Conway property differs between the two operators");
    r.check(guarded_conway == back_conway, "Conway property differs after transport back");
    r.details = {{"posets", all.size()},
                 {"pointed", pointed.size()},
                 {"total_instances", n_total},
                 {"guarded_instances", n_guarded},
                 {"total_conway", total_conway},
                 {"guarded_conway", guarded_conway},
                 {"transported_back_conway", back_conway},
                 {"laws", t.to_json()}};
    return r;
}

}  // namespace gtc::suites
