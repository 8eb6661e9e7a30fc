#include <doctest.h>

#include "qpc/complex.hpp"
#include "support.hpp"

using namespace qpc;
using qpc::testing::Rng;

namespace {

const Prime p3(3);
const Config cfg3 = Config::standard(p3);  // N = w = 4

Matrix scalar(long v) { return Matrix::Constant(1, 1, PLocal(v)); }

AdamsModule L(long j) { return AdamsModule::line(p3, j); }

/// [L_0 --p--> L_0] in degrees 1, 0.
BoundedComplex mult_by_p() {
    return BoundedComplex::make(p3, 0, {L(0), L(0)}, {AdamsMap::make(L(0), L(0), scalar(3))});
}

bool all_acyclic(const PeriodicComplex& x) {
    for (const auto& h : x.homology())
        if (!h.is_zero()) return false;
    return true;
}

/// Mapping cone of f : A -> B over unrolled degrees [lo, hi], with the
/// differentials of B read through `b_diff`.
template <class BDiff>
BoundedComplex unrolled_cone(const PeriodicComplex& a, const PeriodicComplex& b, BDiff b_diff, long lo, long hi) {
    std::vector<AdamsModule> levels;
    std::vector<AdamsMap> diffs;
    for (long n = lo; n <= hi; ++n) {
        levels.push_back(a.level(n - 1) + b.level(n));
        if (n == lo) continue;
        const AdamsMap da = a.diff(n - 1), db = b_diff(n);
        const auto as = a.level(n - 1).size(), at = a.level(n - 2).size();
        const auto bs = b.level(n).size(), bt = b.level(n - 1).size();
        Matrix m = Matrix::Zero(at + bt, as + bs);
        m.block(0, 0, at, as) = -da.matrix();
        m.block(at, 0, bt, as) = Matrix::Identity(bt, as);
        m.block(at, as, bt, bs) = db.matrix();
        diffs.push_back(AdamsMap::make(levels[levels.size() - 1], levels[levels.size() - 2], m));
    }
    return BoundedComplex::make(a.prime(), lo, std::move(levels), std::move(diffs));
}

}  // namespace

TEST_CASE("bounded complexes: construction and homology") {
    const auto x = mult_by_p();
    CHECK(x.homology(0).normal_form() == FgModule{0, {1}});
    CHECK(x.homology(1).is_zero());
    CHECK(x.homology(5).is_zero());

    const auto bad = AdamsMap::make(L(0), L(0), scalar(1));
    CHECK_THROWS_WITH_AS(BoundedComplex::make(p3, 0, {L(0), L(0), L(0)}, {bad, bad}), doctest::Contains("degree 2"),
                         ValidationError);

    const auto disk = BoundedComplex::disk(L(1), 3);
    CHECK(disk.lo() == 2);
    for (long n = 0; n < 5; ++n) CHECK(disk.homology(n).is_zero());

    const auto s = shift(x, 2);
    CHECK(s.lo() == 2);
    CHECK(s.diff(3).matrix()(0, 0) == PLocal(3));
    CHECK(shift(x, 1).diff(2).matrix()(0, 0) == PLocal(-3));
    CHECK(shift(shift(x, 1), 2) == shift(x, 3));
    CHECK(shift(x, 0) == x);
}

TEST_CASE("bounded tensor examples") {
    const auto a = BoundedComplex::concentrated(L(1), 2);
    const auto b = BoundedComplex::concentrated(L(-3), -1);
    CHECK(tensor(a, b) == BoundedComplex::concentrated(L(-2), 1));

    // [Z -p-> Z] (x) [Z -p-> Z] has H_0 = Z/p, H_1 = Z/p.
    const auto t = tensor(mult_by_p(), mult_by_p());
    CHECK(t.homology(0).normal_form() == FgModule{0, {1}});
    CHECK(t.homology(1).normal_form() == FgModule{0, {1}});
    CHECK(t.homology(2).is_zero());

    Rng rng(11);
    for (int i = 0; i < 20; ++i) {
        const auto x = qpc::testing::random_bounded_complex(rng, p3, -1, 2);
        const auto d = tensor(BoundedComplex::disk(L(0), 1), x);
        for (long n = d.lo(); n <= d.hi() + 1; ++n) CHECK(d.homology(n).is_zero());
    }
}

TEST_CASE("chain maps: validation and quasi-isomorphisms") {
    const AdamsModule zp = AdamsModule::make(CyclicSum::cyclic(p3, 1), scalar(1));
    const auto target = BoundedComplex::concentrated(zp, 0);
    const auto q = ChainMap::make(mult_by_p(), target, 0, {AdamsMap::make(L(0), zp, scalar(1))});
    CHECK(is_quasi_iso(q));
    CHECK(is_isomorphism(homology_map(q, 0)));

    const auto twice = BoundedComplex::make(p3, 0, {L(0), L(0)}, {AdamsMap::make(L(0), L(0), scalar(9))});
    CHECK_THROWS_AS(ChainMap::make(twice, mult_by_p(), 0, {AdamsMap::identity(L(0)), AdamsMap::identity(L(0))}),
                    ValidationError);
    const auto ok = ChainMap::make(twice, mult_by_p(), 0, {AdamsMap::identity(L(0)), AdamsMap::make(L(0), L(0), scalar(3))});
    CHECK(ok.chain_errors().empty());
    CHECK_FALSE(is_quasi_iso(ok));

    Rng rng(5);
    for (int i = 0; i < 20; ++i) {
        const auto x = qpc::testing::random_bounded_complex(rng, p3, 0, 2);
        const auto y = qpc::testing::random_bounded_complex(rng, p3, 0, 2);
        const auto f = qpc::testing::random_chain_map(rng, x, y);
        CHECK(f.chain_errors().empty());
        CHECK(compose(ChainMap::identity(y), f).chain_errors().empty());
    }
}

TEST_CASE("periodic complexes: unit, shift and twist") {
    const auto unit = PeriodicComplex::unit(cfg3);
    CHECK(unit.level(0) == L(0));
    CHECK(unit.level(4) == L(-4));
    CHECK(unit.level(-8) == L(8));
    CHECK(unit.level(1).is_zero());
    CHECK(periodify(BoundedComplex::concentrated(L(0), 0), cfg3) == unit);
    CHECK(periodify(BoundedComplex::zero(p3), cfg3) == PeriodicComplex::zero(cfg3));

    Rng rng(3);
    for (int i = 0; i < 15; ++i) {
        const auto x = periodify(qpc::testing::random_bounded_complex(rng, p3, -2, 6), cfg3);
        CHECK(shift(x, cfg3.period) == twist(x, cfg3.weight));
        CHECK(shift(shift(x, 1), 2) == shift(x, 3));
        CHECK(shift(shift(x, 3), -3) == x);
        CHECK(x.errors().empty());
    }

    // Odd period: the same identity relies on the (-1)^{kN} sign.
    const Config odd{p3, 3, 4};
    for (int i = 0; i < 10; ++i) {
        const auto x = periodify(qpc::testing::random_bounded_complex(rng, p3, -2, 5), odd);
        CHECK(shift(x, 3) == twist(x, 4));
    }
}

TEST_CASE("periodification examples") {
    const auto px = periodify(mult_by_p(), cfg3);
    CHECK(px.homology(0).normal_form() == FgModule{0, {1}});
    for (long n = 1; n < 4; ++n) CHECK(px.homology(n).is_zero());
    CHECK(px.homology(4).normal_form() == FgModule{0, {1}});

    // M concentrated in degree N lands in window degree 0 twisted by w.
    const auto high = periodify(BoundedComplex::concentrated(L(0), 4), cfg3);
    CHECK(high.level(0) == L(4));

    // Support wider than one period wraps onto itself.
    const auto wide = BoundedComplex::make(p3, 0, {L(0), L(0), L(0), L(0), L(0)},
                                           {AdamsMap::make(L(0), L(0), scalar(3)), AdamsMap::zero(L(0), L(0)),
                                            AdamsMap::zero(L(0), L(0)), AdamsMap::make(L(0), L(0), scalar(3))});
    const auto pw = periodify(wide, cfg3);
    CHECK(pw.level(0).size() == 2);
    CHECK(pw.wrap().matrix()(0, 1) == PLocal(3));

    for (long n = 0; n < 3; ++n) CHECK(all_acyclic(periodify(BoundedComplex::disk(L(n), n), cfg3)));
}

TEST_CASE("coperiodification agrees with periodification on bounded input") {
    Rng rng(17);
    for (int i = 0; i < 30; ++i) {
        const auto m = qpc::testing::random_bounded_complex(rng, p3, -5, 9, 3);
        CHECK(coperiodify(m, cfg3) == periodify(m, cfg3));
    }
}

TEST_CASE("periodify is functorial and preserves quasi-isomorphisms") {
    const AdamsModule zp = AdamsModule::make(CyclicSum::cyclic(p3, 1), scalar(1));
    const auto q = ChainMap::make(mult_by_p(), BoundedComplex::concentrated(zp, 0), 0, {AdamsMap::make(L(0), zp, scalar(1))});
    CHECK(is_quasi_iso(periodify(q, cfg3)));

    Rng rng(23);
    for (int i = 0; i < 20; ++i) {
        const auto x = qpc::testing::random_bounded_complex(rng, p3, -1, 5);
        const auto y = qpc::testing::random_bounded_complex(rng, p3, -1, 5);
        const auto z = qpc::testing::random_bounded_complex(rng, p3, -1, 5);
        const auto f = qpc::testing::random_chain_map(rng, x, y);
        const auto g = qpc::testing::random_chain_map(rng, y, z);
        CHECK(periodify(compose(g, f), cfg3) == compose(periodify(g, cfg3), periodify(f, cfg3)));
        CHECK(periodify(ChainMap::identity(x), cfg3) == PeriodicMap::identity(periodify(x, cfg3)));

        // X -> X + D is a quasi-isomorphism.
        const auto d = BoundedComplex::disk(qpc::testing::random_adams_module(rng, p3), qpc::testing::uniform(rng, 0, 4));
        const auto xd = direct_sum(x, d);
        std::vector<AdamsMap> comps;
        for (long n = xd.lo(); n <= xd.hi(); ++n) {
            Matrix inc = Matrix::Zero(xd.level(n).size(), x.level(n).size());
            inc.topRows(x.level(n).size()) = Matrix::Identity(x.level(n).size(), x.level(n).size());
            comps.push_back(AdamsMap::make(x.level(n), xd.level(n), inc));
        }
        const auto inc = ChainMap::make(x, xd, xd.lo(), comps);
        CHECK(is_quasi_iso(inc));
        CHECK(is_quasi_iso(periodify(inc, cfg3)));
    }
}

TEST_CASE("periodic maps: validation") {
    const auto px = periodify(mult_by_p(), cfg3);
    auto comps = PeriodicMap::identity(px).components;
    CHECK(validate_periodic_map(px, px, comps).valid);

    comps[0] = AdamsMap::make(px.level(0), px.level(0), scalar(2));
    const auto bad = validate_periodic_map(px, px, comps);
    CHECK_FALSE(bad.valid);
    REQUIRE(bad.diagnostics.size() == 1);
    CHECK(bad.diagnostics[0].find("degree 1") != std::string::npos);
    CHECK_THROWS_AS(PeriodicMap::make(px, px, comps), ValidationError);

    const auto unit = PeriodicComplex::unit(cfg3);
    const auto other = PeriodicComplex::unit(Config{p3, 2, 2});
    CHECK_FALSE(validate_periodic_map(unit, other, PeriodicMap::identity(unit).components).valid);
}

TEST_CASE("periodic cokernels and sums") {
    const auto unit = PeriodicComplex::unit(cfg3);
    auto comps = PeriodicMap::identity(unit).components;
    comps[0] = AdamsMap::make(L(0), L(0), scalar(3));
    const auto times_p = PeriodicMap::make(unit, unit, comps);
    const auto c = cokernel(times_p);
    CHECK(c.object.level(0).normal_form() == FgModule{0, {1}});
    CHECK(c.object.homology(0).normal_form() == FgModule{0, {1}});
    CHECK(compose(c.projection, times_p) == PeriodicMap::zero(unit, c.object));

    const auto two = direct_sum(unit, unit);
    const auto cp = copair(PeriodicMap::identity(unit), times_p);
    CHECK(cp.source == two);
    const auto pr = pair(PeriodicMap::identity(unit), times_p);
    CHECK(pr.target == two);
    CHECK(is_isomorphism(PeriodicMap::identity(two)));
    CHECK(is_quasi_iso(-PeriodicMap::identity(unit)));
}

TEST_CASE("adjunction round trips") {
    Rng rng(29);
    for (int i = 0; i < 200; ++i) {
        const auto m = qpc::testing::random_bounded_complex(rng, p3, -3, 6, 2);
        const auto x = periodify(qpc::testing::random_bounded_complex(rng, p3, -3, 6, 2), cfg3);
        const auto g = qpc::testing::random_map_to_periodic(rng, m, x);
        const auto f = extend(g);
        const auto back = flatten(f, m);
        CHECK(back.components == g.components);
        CHECK(extend(back) == f);
    }
    const auto m = mult_by_p();
    CHECK(extend(unit_map(m, cfg3)) == PeriodicMap::identity(periodify(m, cfg3)));
    const auto zero = ChainMapToPeriodic::make(
        m, PeriodicComplex::unit(cfg3), {AdamsMap::zero(L(0), L(0)), AdamsMap::zero(L(0), AdamsModule::zero(p3))});
    CHECK(extend(zero) == PeriodicMap::zero(periodify(m, cfg3), PeriodicComplex::unit(cfg3)));
}

TEST_CASE("PI-module round trip and failing identities") {
    Rng rng(31);
    for (int i = 0; i < 15; ++i) {
        const auto x = periodify(qpc::testing::random_bounded_complex(rng, p3, -2, 6), cfg3);
        CHECK(from_module(to_module(x)) == x);
    }
    const auto x = periodify(mult_by_p(), cfg3);
    auto m = to_module(x);
    m.action[2][4] = scaled(m.action[2][4], PLocal(2));  // phi(1) at degree 0
    CHECK_THROWS_WITH_AS(from_module(m), doctest::Contains("phi(1) phi(-1) = id"), ValidationError);
    m = to_module(x);
    m.action[1][5] = scaled(m.action[1][5], PLocal(-1));
    CHECK_THROWS_WITH_AS(from_module(m), doctest::Contains("unit law"), ValidationError);
}

TEST_CASE("sign audit through the cone of alpha with an odd period") {
    const Config odd{p3, 3, 4};
    const auto e = [](long a, long b) {
        Matrix m = Matrix::Zero(a, b);
        return m;
    };
    const AdamsModule l2 = L(0) + L(0);
    Matrix d3 = e(2, 1), d2 = e(2, 2), d1 = e(1, 2);
    d3(0, 0) = PLocal(1);
    d2(0, 1) = PLocal(1);
    d1(0, 1) = PLocal(1);
    const auto m = BoundedComplex::make(p3, 0, {L(0), l2, l2, L(0)},
                                        {AdamsMap::make(l2, L(0), d1), AdamsMap::make(l2, l2, d2), AdamsMap::make(L(0), l2, d3)});
    const auto x = periodify(m, odd);
    const auto a = twist(x, odd.weight), b = shift(x, odd.period);
    REQUIRE(a == b);
    CHECK(PeriodicMap::make(a, b, PeriodicMap::identity(a).components).components.size() == 3);

    const auto cone = unrolled_cone(a, b, [&](long n) { return b.diff(n); }, -6, 6);
    CHECK(cone.lo() == -6);
    for (long n = -5; n <= 5; ++n) CHECK(cone.homology(n).is_zero());

    // Dropping (-1)^{kN} from the unrolled differential breaks d o d = 0.
    const auto naive = [&](long n) {
        const long r = ((n % 3) + 3) % 3, k = (n - r) / 3;
        const AdamsMap& base = r == 0 ? b.wrap() : b.window_diffs()[static_cast<std::size_t>(r - 1)];
        return twist(base, -k * odd.weight);
    };
    CHECK_THROWS_AS(unrolled_cone(a, b, naive, -6, 6), ValidationError);
}

TEST_CASE("tensor with the unit") {
    Rng rng(37);
    const auto unit = PeriodicComplex::unit(cfg3);
    for (int i = 0; i < 15; ++i) {
        const auto m = qpc::testing::random_bounded_complex(rng, p3, -2, 6);
        const auto x = periodify(m, cfg3);
        CHECK(tensor_over_unit(unit, x) == x);
        CHECK(tensor_over_unit(x, unit) == x);

        const auto iso = unit_tensor_iso(m, cfg3);
        CHECK(is_isomorphism(iso));
        CHECK(iso.source == tensor(unit, m));

        const auto m2 = qpc::testing::random_bounded_complex(rng, p3, -2, 6);
        const auto h = qpc::testing::random_chain_map(rng, m, m2);
        const auto lhs = compose(periodify(h, cfg3), iso);
        const auto rhs = compose(unit_tensor_iso(m2, cfg3), tensor(PeriodicMap::identity(unit), h));
        CHECK(lhs == rhs);
    }
    CHECK_THROWS_AS(tensor_over_unit(PeriodicComplex::unit(Config{p3, 3, 4}), PeriodicComplex::unit(Config{p3, 3, 4})),
                    ValidationError);
}

TEST_CASE("tensor over PI matches periodified tensors") {
    Rng rng(41);
    for (int i = 0; i < 10; ++i) {
        const auto c = qpc::testing::random_bounded_complex(rng, p3, 0, 3, 2, false);
        const auto d = qpc::testing::random_bounded_complex(rng, p3, 0, 3, 2, false);
        const auto lhs = tensor_over_unit(periodify(c, cfg3), periodify(d, cfg3));
        const auto rhs = periodify(tensor(c, d), cfg3);
        for (long n = 0; n < 4; ++n) {
            CHECK(lhs.level(n).normal_form() == rhs.level(n).normal_form());
            const auto hl = lhs.homology(n), hr = rhs.homology(n);
            CHECK(hl.normal_form() == hr.normal_form());
            if (hl.size() <= 3) CHECK(is_isomorphic(hl, hr));
        }
    }
    const auto unit = PeriodicComplex::unit(cfg3);
    for (long i = -3; i <= 3; ++i)
        for (long j = -3; j <= 3; ++j) {
            const auto t = tensor_over_unit(shift(unit, i), shift(unit, j));
            const auto s = shift(unit, i + j);
            for (long n = 0; n < 4; ++n) CHECK(is_isomorphic(t.homology(n), s.homology(n)));
        }
}

TEST_CASE("tensor of periodic maps with chain maps is functorial") {
    Rng rng(43);
    for (int i = 0; i < 10; ++i) {
        const auto x = periodify(qpc::testing::random_bounded_complex(rng, p3, 0, 4), cfg3);
        const auto m = qpc::testing::random_bounded_complex(rng, p3, 0, 2);
        const auto f = qpc::testing::random_periodic_map(rng, x, x);
        const auto g = qpc::testing::random_chain_map(rng, m, m);
        const auto fg = tensor(f, g);
        CHECK(fg.source == tensor(x, m));
        CHECK(tensor(PeriodicMap::identity(x), ChainMap::identity(m)) == PeriodicMap::identity(tensor(x, m)));
        const auto y = periodify(m, cfg3);
        const auto h = qpc::testing::random_periodic_map(rng, y, y);
        CHECK(tensor_over_unit(f, h).source == tensor_over_unit(x, y));
    }
}
