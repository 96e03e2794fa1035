#include <doctest.h>

#include <vector>

#include <throughput/core.hpp>
#include <throughput/exact.hpp>
#include <throughput/rng.hpp>

#include "support/oracles.hpp"

using namespace throughput;

TEST_CASE("exact_solve on an empty instance")
{
	Exact_result result = exact_solve(Instance({}, 1));
	CHECK(result.value == 0);
	CHECK(result.schedule.assignments.empty());
	CHECK(result.proven_optimal);
}

TEST_CASE("exact_solve schedules the short job before the long one")
{
	Instance inst({Job{1, 2, 0, 4}, Job{2, 1, 1, 2}}, 1);
	Exact_result result = exact_solve(inst);
	CHECK(result.value == 2);
	CHECK(result.proven_optimal);
	CHECK(validate_schedule(inst, result.schedule).feasible);
	CHECK(oracles::best_throughput(inst) == 2);
}

TEST_CASE("exact_solve fits two of three identical jobs into four time units")
{
	Instance inst({Job{1, 2, 0, 4}, Job{2, 2, 0, 4}, Job{3, 2, 0, 4}}, 1);
	Exact_result result = exact_solve(inst);
	CHECK(result.value == 2);
	CHECK(result.proven_optimal);
	CHECK(oracles::best_throughput(inst) == 2);
}

TEST_CASE("exact_solve agrees with the assignment-enumeration reference")
{
	Rng rng(314, "exact-agreement");
	for (int trial = 0; trial < 150; trial++) {
		int n = static_cast<int>(rng.range(1, 7));
		int m = static_cast<int>(rng.range(1, 2));
		std::vector<Job> jobs;
		for (int j = 0; j < n; j++) {
			Time p = rng.range(1, 5);
			Time r = rng.range(0, 10);
			jobs.push_back(Job{j, p, r, r + p + rng.range(0, 7)});
		}
		std::vector<Blocked_interval> blocks;
		if (rng.chance(0.35)) {
			Time s = rng.range(0, 8);
			blocks.push_back({static_cast<int>(rng.range(0, m - 1)), s, s + rng.range(1, 3)});
		}
		Instance inst(jobs, m, blocks);
		Exact_result result = exact_solve(inst);
		REQUIRE(result.proven_optimal);
		CHECK(result.value == oracles::best_throughput(inst));
		CHECK(validate_schedule(inst, result.schedule).feasible);
		CHECK(result.schedule.value() == result.value);
	}
}

TEST_CASE("removing a job never increases the exact value")
{
	Rng rng(515, "exact-monotonicity");
	for (int trial = 0; trial < 60; trial++) {
		int n = static_cast<int>(rng.range(2, 6));
		std::vector<Job> jobs;
		for (int j = 0; j < n; j++) {
			Time p = rng.range(1, 4);
			Time r = rng.range(0, 8);
			jobs.push_back(Job{j, p, r, r + p + rng.range(0, 6)});
		}
		Instance inst(jobs, 1);
		std::int64_t full = exact_solve(inst).value;
		std::size_t victim = rng.range(0, n - 1);
		std::vector<Job> fewer = jobs;
		fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(victim));
		Instance smaller(fewer, 1);
		smaller.horizon = inst.horizon;
		CHECK(exact_solve(smaller).value <= full);
	}
}

TEST_CASE("exact_solve respects the job-count precondition")
{
	std::vector<Job> jobs;
	for (int j = 0; j < 13; j++)
		jobs.push_back(Job{j, 1, 0, 40});
	Oracle_limits limits;
	CHECK_THROWS_AS(exact_solve(Instance(jobs, 1), limits), std::invalid_argument);

	// A wall-clock budget lifts the hard job cap.
	limits.time_budget_ms = 1000;
	Exact_result result = exact_solve(Instance(jobs, 1), limits);
	CHECK(result.value >= 1);
}

TEST_CASE("bounded_best explores up to the size cap and reports completeness")
{
	Instance inst({Job{1, 2, 0, 4}, Job{2, 1, 1, 2}}, 1);
	Bounded_search_result result = bounded_best(inst, 2);
	CHECK(result.value == 2);
	CHECK(result.complete);
	CHECK(validate_schedule(inst, result.schedule).feasible);
}

TEST_CASE("edf_uniform_feasible orders by deadline")
{
	Instance inst({Job{1, 1, 0, 1}, Job{2, 1, 0, 2}}, 1);
	Edf_result result = edf_uniform_feasible(inst);
	CHECK(result.feasible);
	CHECK(result.schedule.assignments.at(1).start == 0);
	CHECK(result.schedule.assignments.at(2).start == 1);
}

TEST_CASE("edf_uniform_feasible detects an overloaded machine")
{
	Instance one({Job{1, 2, 0, 2}, Job{2, 2, 0, 2}}, 1);
	CHECK(!edf_uniform_feasible(one).feasible);

	Instance two({Job{1, 2, 0, 2}, Job{2, 2, 0, 2}}, 2);
	Edf_result split = edf_uniform_feasible(two);
	CHECK(split.feasible);
	CHECK(validate_schedule(two, split.schedule).feasible);
}

TEST_CASE("edf_uniform_feasible rejects mixed processing times")
{
	Instance inst({Job{1, 1, 0, 4}, Job{2, 2, 0, 4}}, 1);
	CHECK_THROWS_AS(edf_uniform_feasible(inst), std::invalid_argument);
}

TEST_CASE("an edf success certifies full throughput on uniform instances")
{
	// The rule is a simulation, so it may miss schedules the exact solver
	// finds; a success must still be a real full schedule.
	Rng rng(981, "edf-exact");
	int successes = 0;
	for (int trial = 0; trial < 100; trial++) {
		int n = static_cast<int>(rng.range(1, 6));
		int m = static_cast<int>(rng.range(1, 2));
		Time p = rng.range(1, 3);
		std::vector<Job> jobs;
		for (int j = 0; j < n; j++) {
			Time r = rng.range(0, 6);
			jobs.push_back(Job{j, p, r, r + p + rng.range(0, 5)});
		}
		Instance inst(jobs, m);
		Edf_result edf = edf_uniform_feasible(inst);
		if (edf.feasible) {
			CHECK(edf.schedule.value() == n);
			CHECK(exact_solve(inst).value == n);
			CHECK(validate_schedule(inst, edf.schedule).feasible);
			successes++;
		}
	}
	CHECK(successes >= 50);
}
