#include "fbmlab/partition.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace fbmlab;

TEST_CASE("Hurst index lives in the open unit interval") {
    CHECK_THROWS_AS(HurstIndex(0.0), std::invalid_argument);
    CHECK_THROWS_AS(HurstIndex(1.0), std::invalid_argument);
    CHECK_THROWS_AS(HurstIndex(-0.3), std::invalid_argument);
    CHECK_THROWS_AS(HurstIndex(1.2), std::invalid_argument);
    CHECK_THROWS_AS(HurstIndex(std::nan("")), std::invalid_argument);
    CHECK(HurstIndex(0.5).is_brownian());
    CHECK_FALSE(HurstIndex(0.75).is_brownian());
    CHECK(HurstIndex(0.75).value() == 0.75);
}

TEST_CASE("uniform partitions") {
    const Partition p = uniform_partition(1.0, 2);
    REQUIRE(p.steps() == 2);
    CHECK(p.time(0) == 0.0);
    CHECK(p.time(1) == 0.5);
    CHECK(p.time(2) == 1.0);
    CHECK(p.horizon() == 1.0);
    CHECK(p.mesh() == 0.5);
    CHECK(p.uniform_grid());
    CHECK(p.has_exact_times());

    const Partition q = uniform_partition(2.0, 4);
    const std::vector<double> expect{0.0, 0.5, 1.0, 1.5, 2.0};
    REQUIRE(q.steps() == 4);
    for (std::size_t i = 0; i <= 4; ++i) CHECK(q.time(i) == expect[i]);

    const Partition coarsest = uniform_partition(1.0, 1);
    CHECK(coarsest.steps() == 1);
    CHECK(coarsest.time(1) == 1.0);

    CHECK_THROWS_AS(uniform_partition(1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(uniform_partition(0.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(uniform_partition(-1.0, 4), std::invalid_argument);
}

TEST_CASE("partitions from explicit times") {
    const Partition p = Partition::from_times({0.0, 0.1, 0.15, 0.4, 1.0});
    CHECK(p.steps() == 4);
    CHECK(p.horizon() == 1.0);
    CHECK(p.dt(2) == doctest::Approx(0.25));
    CHECK(p.mesh() == doctest::Approx(0.6));
    CHECK_FALSE(p.uniform_grid());
    CHECK_FALSE(p.has_exact_times());

    CHECK_THROWS_AS(Partition::from_times({0.0}), std::invalid_argument);
    CHECK_THROWS_AS(Partition::from_times({0.1, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(Partition::from_times({0.0, 0.5, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(Partition::from_times({0.0, 0.7, 0.4}), std::invalid_argument);
}

TEST_CASE("refinement checks are exact on subdivision grids") {
    CHECK(uniform_partition(1.0, 4).refines(uniform_partition(1.0, 2)));
    CHECK(uniform_partition(1.0, 6).refines(uniform_partition(1.0, 3)));
    CHECK_FALSE(uniform_partition(1.0, 3).refines(uniform_partition(1.0, 2)));
    CHECK_FALSE(uniform_partition(1.0, 2).refines(uniform_partition(1.0, 4)));
    CHECK_FALSE(uniform_partition(2.0, 4).refines(uniform_partition(1.0, 2)));
    // every partition refines itself
    CHECK(uniform_partition(1.0, 8).refines(uniform_partition(1.0, 8)));
}

TEST_CASE("refinement falls back to tolerance for inexact times") {
    const Partition fine = Partition::from_times({0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0});
    const Partition coarse = Partition::from_times({0.0, 2.0 / 3.0, 1.0});
    CHECK(fine.refines(coarse));
    CHECK_FALSE(coarse.refines(fine));
    // mixing exact and inexact grids also works through the fallback
    CHECK(uniform_partition(1.0, 6).refines(coarse));
}

TEST_CASE("floor index implements the step-function convention") {
    const Partition p = uniform_partition(1.0, 16);
    CHECK(p.floor_index(0.0) == 0);
    CHECK(p.floor_index(0.4) == 6);      // 6/16 = 0.375 <= 0.4 < 7/16
    CHECK(p.floor_index(0.375) == 6);    // exact grid point
    CHECK(p.floor_index(1.0) == 16);
    CHECK(p.floor_index(0.99) == 15);
    CHECK(p.time(p.floor_index(0.4)) == doctest::Approx(0.375));
}

TEST_CASE("dyadic sequences condense") {
    const PartitionSequence seq = dyadic_sequence(1.0, 1, 3);
    REQUIRE(seq.size() == 3);
    CHECK(seq[0].steps() == 2);
    CHECK(seq[1].steps() == 4);
    CHECK(seq[2].steps() == 8);
    for (std::size_t n = 0; n < seq.size(); ++n)
        CHECK(seq[n].mesh() == doctest::Approx(1.0 / static_cast<double>(seq[n].steps())));
    CHECK(seq.valid());

    const PartitionSequence two = dyadic_sequence(2.0, 0, 4);
    CHECK(two.valid());
    CHECK(two[0].steps() == 1);

    CHECK_THROWS_AS(dyadic_sequence(1.0, 3, 1), std::invalid_argument);
    CHECK_THROWS_AS(dyadic_sequence(1.0, -1, 1), std::invalid_argument);
}

TEST_CASE("sequence validity catches broken nesting and meshes") {
    std::string reason;
    const PartitionSequence not_nested({uniform_partition(1.0, 2), uniform_partition(1.0, 3)});
    CHECK_FALSE(not_nested.valid(&reason));
    CHECK(!reason.empty());

    const PartitionSequence constant_mesh({uniform_partition(1.0, 4), uniform_partition(1.0, 4)});
    CHECK_FALSE(constant_mesh.valid());

    CHECK_THROWS_AS(PartitionSequence({}), std::invalid_argument);
}
