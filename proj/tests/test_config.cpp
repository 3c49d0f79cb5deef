#include <stdexcept>
#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "reflect/config.hpp"

using namespace reflect;

namespace {

ParticleConfig two_spheres(double r, double dist) {
    ParticleConfig c;
    c.particles = {{{0, 0, 0}, r}, {{dist, 0, 0}, r}};
    return c;
}

// brute force reference for nearest distances
std::vector<double> nearest_brute(const ParticleConfig& c) {
    std::vector<double> out(c.size(), std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = 0; j < c.size(); ++j)
            if (i != j)
                out[i] = std::min(out[i], norm(c.particles[i].center - c.particles[j].center));
    return out;
}

}  // namespace

TEST_CASE("nearest distances") {
    auto d = nearest_distances(two_spheres(0.1, 1.0));
    CHECK(d[0] == doctest::Approx(1.0));
    CHECK(d[1] == doctest::Approx(1.0));

    ParticleConfig single;
    single.particles = {{{1, 2, 3}, 0.5}};
    CHECK(std::isinf(nearest_distances(single)[0]));

    const auto lattice = generate_lattice({1.0, 0.1, {{-1, -1, -1}, {1, 1, 1}}});
    const auto dl = nearest_distances(lattice);
    const auto ref = nearest_brute(lattice);
    for (std::size_t i = 0; i < dl.size(); ++i) {
        CHECK(dl[i] == doctest::Approx(ref[i]));
        CHECK(dl[i] == doctest::Approx(1.0));
    }
}

TEST_CASE("nearest distances commute with relabeling") {
    auto config = generate_random(30, 0.01, 2.0, {{0, 0, 0}, {1, 1, 1}}, 42);
    auto base = nearest_distances(config);

    std::vector<std::size_t> perm(config.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::mt19937_64 rng(7);
    std::shuffle(perm.begin(), perm.end(), rng);

    ParticleConfig shuffled = config;
    for (std::size_t i = 0; i < perm.size(); ++i)
        shuffled.particles[i] = config.particles[perm[i]];
    auto permuted = nearest_distances(shuffled);
    for (std::size_t i = 0; i < perm.size(); ++i) CHECK(permuted[i] == base[perm[i]]);
}

TEST_CASE("condition checks on lattices") {
    auto l1 = generate_lattice({1.0, 0.1, {{-1, -1, -1}, {1, 1, 1}}});
    auto rep = check_conditions(l1, 2.0, 1.0);
    CHECK(rep.mu0 == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(rep.kappa_ok);  // 0.5 > 0.2
    CHECK(rep.violations.empty());

    auto l2 = generate_lattice({1.0, 0.3, {{-1, -1, -1}, {1, 1, 1}}});
    auto rep2 = check_conditions(l2, 2.0, 1.0);
    CHECK_FALSE(rep2.kappa_ok);  // 0.5 <= 0.6
    CHECK(rep2.violations.size() == l2.size());
}

TEST_CASE("single particle passes vacuously") {
    ParticleConfig single;
    single.particles = {{{0, 0, 0}, 0.2}};
    auto rep = check_conditions(single, 2.0, 1.0);
    CHECK(rep.mu0 == 0.0);
    CHECK(rep.kappa_ok);
    CHECK(rep.alpha_ok);
}

TEST_CASE("overlap detection names the pair") {
    auto config = two_spheres(0.6, 1.0);  // r_i + r_j = 1.2 > 1
    CHECK_THROWS_WITH_AS(check_conditions(config, 2.0, 1.0),
                         doctest::Contains("spheres 0 and 1 overlap"), std::invalid_argument);
    // touching counts as overlap
    CHECK_THROWS_AS(validate_disjoint(two_spheres(0.5, 1.0)), std::invalid_argument);
    CHECK_NOTHROW(validate_disjoint(two_spheres(0.499, 1.0)));
}

TEST_CASE("alpha condition for yukawa") {
    auto config = two_spheres(0.3, 2.0);
    config.kernel = Kernel::yukawa;
    config.xi = 0.2;
    auto rep = check_conditions(config, 2.0, 1.0);  // r = 0.3 > alpha*xi = 0.2
    CHECK_FALSE(rep.alpha_ok);
    rep = check_conditions(config, 2.0, 2.0);  // alpha*xi = 0.4 >= 0.3
    CHECK(rep.alpha_ok);
}

TEST_CASE("lattice generation counts") {
    CHECK(generate_lattice({1.0, 0.1, {{-1, -1, -1}, {1, 1, 1}}}).size() == 27);
    CHECK(generate_lattice({0.5, 0.1, {{0, 0, 0}, {1, 1, 1}}}).size() == 27);

    auto big = generate_lattice({1.0, 0.1, {{-2, -2, -2}, {2, 2, 2}}});
    CHECK(big.size() == 125);
    CHECK(check_conditions(big, 2.0, 1.0).all_ok());

    // ordering is lexicographic in the lattice index
    CHECK(big.particles.front().center.x == doctest::Approx(-2.0));
    CHECK(big.particles.front().center.y == doctest::Approx(-2.0));
    CHECK(big.particles[1].center.z == doctest::Approx(-1.0));

    CHECK_THROWS_AS(generate_lattice({1.0, 0.5, {{-1, -1, -1}, {1, 1, 1}}}),
                    std::invalid_argument);  // 2r = d
    CHECK_THROWS_AS(generate_lattice({1.0, 0.1, {{0.2, 0.2, 0.2}, {0.8, 0.8, 0.8}}}),
                    std::invalid_argument);  // no lattice point inside
}

TEST_CASE("lattice capacity density is exact") {
    const double d = 0.5, r = 0.02;
    auto lattice = generate_lattice({d, r, {{-1, -1, -1}, {1, 1, 1}}});
    auto rep = check_conditions(lattice, 2.0, 1.0);
    CHECK(rep.mu0 == doctest::Approx(r / (d * d * d)).epsilon(1e-14));
    CHECK(lattice_capacity(d, r, Kernel::laplace) ==
          doctest::Approx(4.0 * M_PI * rep.mu0).epsilon(1e-14));
    CHECK(lattice_capacity(d, r, Kernel::stokes) ==
          doctest::Approx(6.0 * M_PI * rep.mu0).epsilon(1e-14));
}

TEST_CASE("random generation") {
    auto empty = generate_random(0, 0.1, 2.0, {{0, 0, 0}, {1, 1, 1}}, 1);
    CHECK(empty.size() == 0);

    auto a = generate_random(50, 0.02, 2.0, {{0, 0, 0}, {1, 1, 1}}, 7);
    auto b = generate_random(50, 0.02, 2.0, {{0, 0, 0}, {1, 1, 1}}, 7);
    CHECK(a.size() == 50);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.particles[i].center.x == b.particles[i].center.x);
        CHECK(a.particles[i].center.y == b.particles[i].center.y);
        CHECK(a.particles[i].center.z == b.particles[i].center.z);
    }
    CHECK(check_conditions(a, 2.0, 1.0).kappa_ok);

    auto c = generate_random(50, 0.02, 2.0, {{0, 0, 0}, {1, 1, 1}}, 8);
    bool any_differ = false;
    for (std::size_t i = 0; i < c.size() && !any_differ; ++i)
        any_differ = c.particles[i].center.x != a.particles[i].center.x;
    CHECK(any_differ);

    // infeasible packing reports the achieved count
    CHECK_THROWS_WITH_AS(generate_random(100000, 0.05, 2.0, {{0, 0, 0}, {1, 1, 1}}, 3),
                         doctest::Contains("placed only"), std::runtime_error);
}

TEST_CASE("generated configs pass their own generation parameters") {
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        auto config = generate_random(40, 0.015, 2.5, {{0, 0, 0}, {1, 1, 1}}, seed);
        CHECK(check_conditions(config, 2.5, 1.0).kappa_ok);
    }
}
