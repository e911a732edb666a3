#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spatgen/geometry.hpp"
#include "support.hpp"

#include <algorithm>

using namespace spatgen;

TEST_CASE("centroid examples") {
    const std::vector<Vec2> ns{{30, 40}, {50, 40}};
    const std::vector<Vec2> ew{{40, 30}, {40, 50}};
    CHECK(intersection_center(ns, ew) == Vec2{40, 40});

    const std::vector<Vec2> one{{7, -3}};
    CHECK(intersection_center(one, {}) == Vec2{7, -3});
    CHECK(intersection_center({}, one) == Vec2{7, -3});

    const std::vector<Vec2> ns2{{0, 0}, {2, 0}};
    const std::vector<Vec2> ew2{{1, 1}, {1, 3}};
    CHECK(intersection_center(ns2, ew2) == Vec2{1, 1});

    CHECK_THROWS_AS(intersection_center({}, {}), GeometryError);
}

TEST_CASE("centroid is permutation invariant and translation equivariant") {
    fixture::Gen gen(17);
    std::uniform_real_distribution<double> coord(-500.0, 500.0);
    for (int i = 0; i < 1000; ++i) {
        std::vector<Vec2> ns(static_cast<std::size_t>(gen.uniform(1, 6)));
        std::vector<Vec2> ew(static_cast<std::size_t>(gen.uniform(1, 6)));
        for (auto* list : {&ns, &ew}) {
            for (auto& p : *list) p = {coord(gen.engine()), coord(gen.engine())};
        }
        const Vec2 c = intersection_center(ns, ew);

        // Oracle: plain mean.
        Vec2 sum;
        for (const auto& p : ns) sum += p;
        for (const auto& p : ew) sum += p;
        const Vec2 mean = sum / static_cast<double>(ns.size() + ew.size());
        CHECK(distance(c, mean) <= 1e-9);

        std::vector<Vec2> all = ns;
        all.insert(all.end(), ew.begin(), ew.end());
        std::shuffle(all.begin(), all.end(), gen.engine());
        const auto split = static_cast<std::ptrdiff_t>(gen.uniform(0, static_cast<std::int64_t>(all.size())));
        const std::vector<Vec2> a(all.begin(), all.begin() + split), b(all.begin() + split, all.end());
        CHECK(distance(intersection_center(a, b), c) <= 1e-9);

        const Vec2 shift{coord(gen.engine()), coord(gen.engine())};
        for (auto& p : ns) p = p + shift;
        for (auto& p : ew) p = p + shift;
        CHECK(distance(intersection_center(ns, ew), c + shift) <= 1e-9);
    }
}

TEST_CASE("area boundary is inclusive") {
    IntersectionGeometry g = IntersectionGeometry::four_way({100, -20});
    const Vec2 c = g.center;
    CHECK(c == Vec2{100, -20});
    CHECK(in_intersection_area(c, g));
    CHECK(in_intersection_area(c + Vec2{35, 0}, g));
    CHECK_FALSE(in_intersection_area(c + Vec2{35.01, 0}, g));
    CHECK(in_intersection_area(c + Vec2{20, -34}, g));
    CHECK(in_intersection_area(c + Vec2{-35, 35}, g));
    CHECK_FALSE(in_intersection_area(c + Vec2{0, -35.01}, g));
}

TEST_CASE("four way layout") {
    const IntersectionGeometry g = IntersectionGeometry::four_way();
    CHECK(g.ns_lights.size() == 2);
    CHECK(g.ew_lights.size() == 2);
    CHECK(norm(g.center) < 1e-12);
    for (auto d : kAllDirections) {
        const Vec2 h = unit_heading(d);
        CHECK(std::abs(norm(h) - 1.0) < 1e-12);
        const SignalHead* head = governing_light(g, d, g.lane_entry(d));
        REQUIRE(head != nullptr);
        CHECK(head->governs == d);
        // Head sits on the lane centre at the stop line.
        CHECK(std::abs(g.along(d, head->position) - (g.approach_length - g.stop_line_offset)) < 1e-9);
        CHECK(distance(g.lane_point(d, g.approach_length - g.stop_line_offset), head->position) < 1e-9);
        // Passed the head: nothing governs.
        CHECK(governing_light(g, d, head->position + h * 0.5) == nullptr);
        CHECK(governing_light(g, d, head->position) != nullptr);
    }
    CHECK(approach_of(TravelDirection::Southbound) == Approach::NorthSouth);
    CHECK(approach_of(TravelDirection::Eastbound) == Approach::EastWest);
}

TEST_CASE("nearest head ahead wins") {
    IntersectionGeometry g = IntersectionGeometry::four_way();
    SignalHead far = g.ns_lights[0];
    far.id = 99;
    far.position = far.position + unit_heading(far.governs) * 30.0;
    g.ns_lights.push_back(far);
    g.finalize();
    const TravelDirection d = g.ns_lights[0].governs;
    const SignalHead* near = governing_light(g, d, g.lane_entry(d));
    REQUIRE(near != nullptr);
    CHECK(near->id == g.ns_lights[0].id);
    const SignalHead* next = governing_light(g, d, g.ns_lights[0].position + unit_heading(d) * 1.0);
    REQUIRE(next != nullptr);
    CHECK(next->id == 99);
}

TEST_CASE("distance ordering is enforced") {
    IntersectionGeometry g = IntersectionGeometry::four_way();
    g.stop_line_offset = 40;
    CHECK_THROWS_AS(g.finalize(), GeometryError);
    CHECK_THROWS_AS(IntersectionGeometry::four_way({}, 35, 15, 30), GeometryError);
}
