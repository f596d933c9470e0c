#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "kleinbundle/bundles.hpp"
#include "oracle_helpers.hpp"

using namespace kb;

namespace {

ExactLineBundle lb(int d, const Rational& a, const Rational& b) {
    return ExactLineBundle{d, make_point<Rational>(a, b)};
}

BundleDesc V(const ExactLineBundle& L) {
    return BundleDesc::of_real({conj_pair_atom(line_atom(L))});
}

BundleDesc W(const ExactLineBundle& xi) { return BundleDesc::of_real({self_ext_atom(xi)}); }

}  // namespace

TEST_CASE("atom constructors enforce the descent invariants") {
    CHECK_NOTHROW(real_line_atom(lb(0, Rational(1, 5), Rational(0))));
    CHECK_THROWS_AS(real_line_atom(lb(1, Rational(0), Rational(0))), DomainError);
    CHECK_THROWS_AS(real_line_atom(lb(0, Rational(1, 5), Rational(1, 2))), DomainError);
    CHECK_THROWS_AS(self_ext_atom(lb(0, Rational(0), Rational(1, 3))), DomainError);
    CHECK_THROWS_AS(real_stable_atom(3, 1, Rational(0)), DomainError);   // odd degree
    CHECK_THROWS_AS(real_stable_atom(4, 2, Rational(0)), DomainError);   // gcd 2
    CHECK_THROWS_AS(real_stable_atom(0, 2, Rational(0)), DomainError);   // bad rank
    CHECK_THROWS_AS(stable_atom(4, 2, {Rational(0), Rational(0)}), DomainError);
    // keys reduce into the side-1/r cell
    RealAtom a = real_stable_atom(3, 2, Rational(2, 5));
    CHECK(std::get<RealStableAtom>(a).key == Rational(1, 15));
    ComplexAtom s = stable_atom(2, 1, {Rational(3, 4), Rational(7, 8)});
    CHECK(std::get<StableAtom>(s).det == ExactPoint{Rational(1, 4), Rational(3, 8)});
}

TEST_CASE("slope") {
    CHECK(slope(V(lb(1, Rational(1, 5), Rational(3, 10)))) == Rational(1));
    CHECK(slope(W(lb(0, Rational(0), Rational(0)))) == Rational(0));
    BundleDesc cps = BundleDesc::of_real(
        {conj_pair_atom(stable_atom(3, 2, {Rational(0), Rational(1, 5)}))});
    CHECK(slope(cps) == Rational(2, 3));
    CHECK_THROWS_AS(slope(BundleDesc::of_real({})), DomainError);
}

TEST_CASE("stability trichotomy") {
    CHECK(stability(V(lb(0, Rational(3, 10), Rational(1, 4)))) == Stability::Stable);

    BundleDesc poly = BundleDesc::of_real({real_line_atom(lb(0, Rational(1, 5), Rational(0))),
                                           real_line_atom(lb(0, Rational(7, 10), Rational(0)))});
    CHECK(stability(poly) == Stability::PolystableNotStable);

    CHECK(stability(W(lb(0, Rational(1, 10), Rational(0)))) == Stability::SemistableNotPolystable);

    BundleDesc unstable = BundleDesc::of_real(
        {real_line_atom(lb(0, Rational(1, 5), Rational(0))), real_stable_atom(1, 2, Rational(0))});
    CHECK(stability(unstable) == Stability::Unstable);

    SECTION("fixed-but-not-real pairs are stable") {
        CHECK(stability(V(lb(0, Rational(3, 10), Rational(1, 2)))) == Stability::Stable);
    }
    SECTION("pairs over the real locus normalize to a polystable sum") {
        CHECK(stability(V(lb(0, Rational(3, 10), Rational(0)))) == Stability::PolystableNotStable);
    }
    SECTION("a conjugate pair of self-extensions is semistable only") {
        BundleDesc d = BundleDesc::of_real(
            {conj_pair_atom(ext2_atom(lb(0, Rational(1, 5), Rational(1, 3))))});
        CHECK(stability(d) == Stability::SemistableNotPolystable);
    }
    SECTION("stable implies gcd(rank, degree) in {1, 2}") {
        std::vector<BundleDesc> pool;
        pool.push_back(V(lb(1, Rational(1, 5), Rational(1, 3))));
        pool.push_back(V(lb(0, Rational(1, 5), Rational(1, 3))));
        pool.push_back(BundleDesc::of_real({real_stable_atom(5, 4, Rational(1, 7))}));
        pool.push_back(BundleDesc::of_real({real_line_atom(lb(2, Rational(1, 5), Rational(0)))}));
        pool.push_back(BundleDesc::of_real(
            {conj_pair_atom(stable_atom(3, 2, {Rational(0), Rational(1, 5)}))}));
        for (const auto& d : pool) {
            REQUIRE(stability(d) == Stability::Stable);
            int g = std::gcd(d.rank(), std::abs(d.degree()));
            if (d.degree() == 0) g = d.rank();
            CHECK((g == 1 || g == 2));
        }
    }
}

TEST_CASE("normalize_desc canonical form") {
    BundleDesc split = normalize_desc(V(lb(0, Rational(3, 10), Rational(0))));
    REQUIRE(split.real_atoms.size() == 2);
    CHECK(atom_eq(split.real_atoms[0], real_line_atom(lb(0, Rational(3, 10), Rational(0)))));
    CHECK(atom_eq(split.real_atoms[1], real_line_atom(lb(0, Rational(3, 10), Rational(0)))));

    BundleDesc obstructed = V(lb(0, Rational(3, 10), Rational(1, 2)));
    BundleDesc n = normalize_desc(obstructed);
    REQUIRE(n.real_atoms.size() == 1);
    CHECK(std::holds_alternative<ConjPairAtom>(n.real_atoms[0]));

    SECTION("idempotent and preserves rank/degree") {
        std::mt19937 rng(17);
        auto grid = oracle::farey(6);
        std::uniform_int_distribution<std::size_t> pick(0, grid.size() - 1);
        std::uniform_int_distribution<int> deg(-2, 2);
        for (int i = 0; i < 300; ++i) {
            std::vector<RealAtom> atoms;
            atoms.push_back(conj_pair_atom(line_atom(lb(deg(rng), grid[pick(rng)], grid[pick(rng)]))));
            if (i % 2) atoms.push_back(real_line_atom(lb(0, grid[pick(rng)], Rational(0))));
            BundleDesc d = BundleDesc::of_real(atoms);
            BundleDesc n1 = normalize_desc(d);
            BundleDesc n2 = normalize_desc(n1);
            CHECK(n1.real_atoms.size() == n2.real_atoms.size());
            for (std::size_t k = 0; k < n1.real_atoms.size(); ++k)
                CHECK(atom_eq(n1.real_atoms[k], n2.real_atoms[k]));
            CHECK(n1.rank() == d.rank());
            CHECK(n1.degree() == d.degree());
            CHECK(is_isomorphic(n1, d));
        }
    }

    SECTION("conjugate pairs of real self-extensions split") {
        BundleDesc d = BundleDesc::of_real(
            {conj_pair_atom(ext2_atom(lb(0, Rational(1, 5), Rational(0))))});
        BundleDesc n = normalize_desc(d);
        REQUIRE(n.real_atoms.size() == 2);
        CHECK(std::holds_alternative<SelfExtAtom>(n.real_atoms[0]));
        BundleDesc two_w = BundleDesc::of_real({self_ext_atom(lb(0, Rational(1, 5), Rational(0))),
                                                self_ext_atom(lb(0, Rational(1, 5), Rational(0)))});
        CHECK(is_isomorphic(d, two_w));
    }

    SECTION("conjugate pairs of real stable atoms split") {
        BundleDesc d = BundleDesc::of_real(
            {conj_pair_atom(stable_atom(3, 2, {Rational(1, 6), Rational(0)}))});
        BundleDesc n = normalize_desc(d);
        REQUIRE(n.real_atoms.size() == 2);
        CHECK(atom_eq(n.real_atoms[0], real_stable_atom(3, 2, Rational(1, 6))));
        // odd inner degree stays a pair even on the b = 0 circle
        BundleDesc odd = BundleDesc::of_real(
            {conj_pair_atom(stable_atom(2, 1, {Rational(1, 6), Rational(0)}))});
        CHECK(normalize_desc(odd).real_atoms.size() == 1);
    }

    SECTION("rank-one stable atoms fold into line atoms") {
        BundleDesc d = BundleDesc::of_real({real_stable_atom(1, 2, Rational(1, 3))});
        BundleDesc n = normalize_desc(d);
        REQUIRE(n.real_atoms.size() == 1);
        CHECK(atom_eq(n.real_atoms[0], real_line_atom(lb(2, Rational(1, 3), Rational(0)))));
    }
}

TEST_CASE("isomorphism testing") {
    ExactLineBundle L = lb(1, Rational(1, 5), Rational(3, 10));
    CHECK(is_isomorphic(V(L), V(sigma_conj(L))));

    CHECK_FALSE(is_isomorphic(W(lb(0, Rational(1, 10), Rational(0))),
                              W(lb(0, Rational(1, 5), Rational(0)))));

    ExactLineBundle x1 = lb(0, Rational(1, 10), Rational(0));
    ExactLineBundle x2 = lb(0, Rational(3, 5), Rational(0));
    BundleDesc d12 = BundleDesc::of_real({real_line_atom(x1), real_line_atom(x2)});
    BundleDesc d21 = BundleDesc::of_real({real_line_atom(x2), real_line_atom(x1)});
    CHECK(is_isomorphic(d12, d21));

    CHECK_THROWS_AS(is_isomorphic(d12, BundleDesc::of_complex({line_atom(x1)})), DomainError);

    SECTION("matches the brute-force matching oracle on a torsion grid") {
        auto grid = oracle::farey(4);
        std::vector<BundleDesc> pool;
        for (const auto& a : grid)
            for (const auto& b : grid) {
                pool.push_back(V(lb(0, a, b)));
                pool.push_back(V(lb(1, a, b)));
            }
        for (const auto& a : grid) pool.push_back(W(lb(0, a, Rational(0))));
        for (std::size_t i = 0; i < pool.size(); ++i)
            for (std::size_t j = 0; j < pool.size(); ++j) {
                if (pool[i].degree() != pool[j].degree()) continue;
                CHECK(is_isomorphic(pool[i], pool[j]) == oracle::iso_brute(pool[i], pool[j]));
            }
    }

    SECTION("equivalence relation on a descriptor pool") {
        auto grid = oracle::farey(5);
        std::mt19937 rng(41);
        std::uniform_int_distribution<std::size_t> pick(0, grid.size() - 1);
        std::vector<BundleDesc> pool;
        for (int i = 0; i < 40; ++i) {
            ExactLineBundle L0 = lb(0, grid[pick(rng)], grid[pick(rng)]);
            pool.push_back(V(L0));
            pool.push_back(V(sigma_conj(L0)));
        }
        for (const auto& d : pool) CHECK(is_isomorphic(d, d));
        std::uniform_int_distribution<std::size_t> pd(0, pool.size() - 1);
        for (int i = 0; i < 4000; ++i) {
            const auto &a = pool[pd(rng)], &b = pool[pd(rng)], &c = pool[pd(rng)];
            CHECK(is_isomorphic(a, b) == is_isomorphic(b, a));
            if (is_isomorphic(a, b) && is_isomorphic(b, c)) CHECK(is_isomorphic(a, c));
        }
    }
}

TEST_CASE("complexification") {
    BundleDesc rs = BundleDesc::of_real({real_stable_atom(3, 2, Rational(1, 6))});
    BundleDesc rs_c = complexify(rs);
    REQUIRE(rs_c.complex_atoms.size() == 1);
    CHECK(atom_eq(rs_c.complex_atoms[0], stable_atom(3, 2, {Rational(1, 6), Rational(0)})));

    ExactPoint p{Rational(1, 3), Rational(1, 4)};
    BundleDesc cp = BundleDesc::of_real({conj_pair_atom(stable_atom(2, 1, p))});
    BundleDesc cp_c = complexify(cp);
    REQUIRE(cp_c.complex_atoms.size() == 2);
    bool has_p = false, has_conj = false;
    for (const auto& a : cp_c.complex_atoms) {
        if (atom_eq(a, stable_atom(2, 1, p))) has_p = true;
        if (atom_eq(a, stable_atom(2, 1, {Rational(1, 3), Rational(1, 4)}))) { /* same as p */ }
        if (atom_eq(a, stable_atom(2, 1, {p.a, modulo(-p.b, Rational(1, 2))}))) has_conj = true;
    }
    CHECK(has_p);
    CHECK(has_conj);

    BundleDesc lines = BundleDesc::of_real({real_line_atom(lb(0, Rational(1, 5), Rational(0))),
                                            real_line_atom(lb(2, Rational(2, 5), Rational(0)))});
    BundleDesc lines_c = complexify(lines);
    REQUIRE(lines_c.complex_atoms.size() == 2);
    for (const auto& a : lines_c.complex_atoms) CHECK(std::holds_alternative<LineAtom>(a));
    CHECK(lines_c.rank() == lines.rank());
    CHECK(lines_c.degree() == lines.degree());

    CHECK_THROWS_AS(complexify(lines_c), DomainError);

    SECTION("complexification is a faithful isomorphism test (rank <= 4)") {
        auto grid = oracle::farey(4);
        std::vector<RealAtom> atom_pool;
        for (const auto& a : grid) {
            atom_pool.push_back(real_line_atom(lb(0, a, Rational(0))));
            atom_pool.push_back(self_ext_atom(lb(0, a, Rational(0))));
        }
        for (const auto& a : grid)
            for (const auto& b : grid) {
                atom_pool.push_back(conj_pair_atom(line_atom(lb(0, a, b))));
                atom_pool.push_back(conj_pair_atom(line_atom(lb(1, a, b))));
                atom_pool.push_back(conj_pair_atom(ext2_atom(lb(0, a, b))));
            }
        atom_pool.push_back(real_stable_atom(3, 2, Rational(0)));
        atom_pool.push_back(real_stable_atom(3, 2, Rational(1, 4)));
        atom_pool.push_back(conj_pair_atom(stable_atom(2, 1, {Rational(1, 4), Rational(1, 3)})));
        atom_pool.push_back(conj_pair_atom(stable_atom(2, 1, {Rational(1, 4), Rational(1, 6)})));

        std::mt19937 rng(59);
        std::uniform_int_distribution<std::size_t> pick(0, atom_pool.size() - 1);
        std::vector<BundleDesc> pool;
        for (const auto& a : atom_pool) pool.push_back(BundleDesc::of_real({a}));
        for (int i = 0; i < 60; ++i) {
            RealAtom a = atom_pool[pick(rng)], b = atom_pool[pick(rng)];
            if (rank_of(a) + rank_of(b) <= 4) pool.push_back(BundleDesc::of_real({a, b}));
        }
        for (std::size_t i = 0; i < pool.size(); ++i)
            for (std::size_t j = i; j < pool.size(); ++j) {
                bool real_iso = is_isomorphic(pool[i], pool[j]);
                bool cx_iso = is_isomorphic(complexify(pool[i]), complexify(pool[j]));
                CHECK(real_iso == cx_iso);
            }
    }
}

TEST_CASE("rank-two classification") {
    BundleDesc v22 = V(lb(1, Rational(1, 5), Rational(3, 10)));
    Rank2Class c22 = classify_rank2(v22);
    CHECK(c22.stratum == Rank2Class::Stratum::Stable22);
    CHECK(c22.orbit_rep == ExactPoint{Rational(1, 5), Rational(3, 10)});
    CHECK(c22.twists_applied == 0);
    // the other orbit representative gives the same stratum parameter
    Rank2Class c22b = classify_rank2(V(sigma_conj(lb(1, Rational(1, 5), Rational(3, 10)))));
    CHECK(c22b.orbit_rep == c22.orbit_rep);

    Rank2Class cw = classify_rank2(W(lb(0, Rational(2, 5), Rational(0))));
    CHECK(cw.stratum == Rank2Class::Stratum::SelfExtStratum);
    CHECK(cw.circle_point == Rational(2, 5));

    BundleDesc poly = BundleDesc::of_real({real_line_atom(lb(0, Rational(1, 10), Rational(0))),
                                           real_line_atom(lb(0, Rational(3, 5), Rational(0)))});
    Rank2Class cp = classify_rank2(poly);
    CHECK(cp.stratum == Rank2Class::Stratum::PolyNotStable);
    CHECK(cp.circle_pair[0] == Rational(1, 10));
    CHECK(cp.circle_pair[1] == Rational(3, 5));

    Rank2Class cs = classify_rank2(V(lb(0, Rational(3, 10), Rational(1, 2))));
    CHECK(cs.stratum == Rank2Class::Stratum::Stable20);
    CHECK(cs.orbit_rep == ExactPoint{Rational(3, 10), Rational(1, 2)});

    BundleDesc split = BundleDesc::of_real({real_line_atom(lb(0, Rational(1, 5), Rational(0))),
                                            real_line_atom(lb(2, Rational(1, 3), Rational(0)))});
    Rank2Class cu = classify_rank2(split);
    CHECK(cu.stratum == Rank2Class::Stratum::SplitUnstable);
    CHECK(cu.split_pair[0].degree == 0);
    CHECK(cu.split_pair[1].degree == 2);

    SECTION("degree reduction by the real degree-2 reference") {
        // degree 6 = 2 mod 4: one downward twist
        Rank2Class hi = classify_rank2(V(lb(3, Rational(1, 5), Rational(3, 10))));
        CHECK(hi.stratum == Rank2Class::Stratum::Stable22);
        CHECK(hi.twists_applied == 1);
        // the reduced class is L (x) T^{-1}: degree 1, a - 1/2
        ExactLineBundle reduced = lb(1, Rational(1, 5) - Rational(1, 2), Rational(3, 10));
        Rank2Class lo = classify_rank2(V(reduced));
        CHECK(hi.orbit_rep == lo.orbit_rep);

        Rank2Class neg = classify_rank2(V(lb(-1, Rational(1, 5), Rational(3, 10))));
        CHECK(neg.stratum == Rank2Class::Stratum::Stable22);
        CHECK(neg.twists_applied == -1);

        Rank2Class w4 = classify_rank2(W(lb(2, Rational(2, 5), Rational(0))));
        CHECK(w4.stratum == Rank2Class::Stratum::SelfExtStratum);
        CHECK(w4.twists_applied == 1);
        CHECK(w4.circle_point == mod1(Rational(2, 5) - Rational(1, 2)));
    }

    SECTION("input validation") {
        CHECK_THROWS_AS(classify_rank2(BundleDesc::of_real({real_stable_atom(3, 2, Rational(0))})),
                        DomainError);
        CHECK_THROWS_AS(classify_rank2(BundleDesc::of_complex(
                            {line_atom(lb(0, Rational(0), Rational(0))),
                             line_atom(lb(0, Rational(0), Rational(0)))})),
                        DomainError);
    }

    SECTION("V(L) of degree one: stratum and isomorphism orbit, denominators <= 8") {
        auto grid = oracle::farey(8);
        std::vector<ExactLineBundle> classes;
        for (const auto& a : grid)
            for (const auto& b : grid) classes.push_back(lb(1, a, b));
        for (const auto& L : classes) {
            Rank2Class c = classify_rank2(V(L));
            CHECK(c.stratum == Rank2Class::Stratum::Stable22);
        }
        std::mt19937 rng(67);
        std::uniform_int_distribution<std::size_t> pick(0, classes.size() - 1);
        for (int i = 0; i < 4000; ++i) {
            const auto& L = classes[pick(rng)];
            const auto& M = classes[pick(rng)];
            bool expected = (M == L) || (M == sigma_conj(L));
            CHECK(is_isomorphic(V(L), V(M)) == expected);
        }
    }
}
