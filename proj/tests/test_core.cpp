#include <doctest.h>

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

#include <throughput/core.hpp>
#include <throughput/rng.hpp>
#include <throughput/slack.hpp>

using namespace throughput;

TEST_CASE("instance construction computes the horizon and rejects bad fields")
{
	Instance inst({Job{1, 2, 0, 2}}, 1);
	CHECK(inst.horizon == 2);
	CHECK(inst.size_class_count() == 1);

	Instance empty({}, 1);
	CHECK(empty.horizon == 1);
	CHECK(empty.jobs.empty());

	CHECK_THROWS_AS(Instance({Job{1, 0, 0, 2}}, 1), std::invalid_argument);
	CHECK_THROWS_AS(Instance({Job{1, 3, 0, 2}}, 1), std::invalid_argument);
	CHECK_THROWS_AS(Instance({Job{1, 1, -1, 2}}, 1), std::invalid_argument);
	CHECK_THROWS_AS(Instance({Job{1, 1, 0, 2}, Job{1, 1, 0, 3}}, 1), std::invalid_argument);
	CHECK_THROWS_AS(Instance({}, 0), std::invalid_argument);
}

TEST_CASE("instance rejects malformed blocked intervals")
{
	CHECK_THROWS_AS(Instance({Job{1, 1, 0, 4}}, 1, {{1, 0, 2}}), std::invalid_argument);
	CHECK_THROWS_AS(Instance({Job{1, 1, 0, 4}}, 1, {{0, 2, 2}}), std::invalid_argument);
	CHECK_THROWS_AS(Instance({Job{1, 1, 0, 4}}, 1, {{0, 0, 2}, {0, 1, 3}}), std::invalid_argument);

	// Blocks are clipped to the horizon; a block entirely past it vanishes.
	Instance inst({Job{1, 1, 0, 4}}, 1, {{0, 2, 9}});
	CHECK(inst.blocked.size() == 1);
	CHECK(inst.blocked[0].end == 4);
}

TEST_CASE("distinct sizes are sorted and deduplicated")
{
	Instance inst({Job{1, 3, 0, 9}, Job{2, 1, 0, 9}, Job{3, 3, 0, 9}}, 1);
	CHECK(inst.distinct_sizes() == std::vector<Time>{1, 3});
	CHECK(inst.size_class_count() == 2);
}

TEST_CASE("validate_schedule accepts an exact fit")
{
	Instance inst({Job{1, 2, 0, 2}}, 1);
	Schedule sched;
	sched.assign(1, 0, 0);
	Validation_report report = validate_schedule(inst, sched);
	CHECK(report.feasible);
	CHECK(report.throughput == 1);
	CHECK(report.violations.empty());
}

TEST_CASE("validate_schedule flags a deadline violation")
{
	Instance inst({Job{1, 2, 0, 2}}, 1);
	Schedule sched;
	sched.assign(1, 0, 1);
	Validation_report report = validate_schedule(inst, sched);
	CHECK(!report.feasible);
	CHECK(report.throughput == 1);
}

TEST_CASE("validate_schedule flags overlapping runs on one machine")
{
	Instance inst({Job{1, 2, 0, 4}, Job{2, 2, 0, 4}}, 1);
	Schedule sched;
	sched.assign(1, 0, 0);
	sched.assign(2, 0, 1);
	CHECK(!validate_schedule(inst, sched).feasible);

	// The same two runs on distinct machines are fine.
	Instance two({Job{1, 2, 0, 4}, Job{2, 2, 0, 4}}, 2);
	Schedule split;
	split.assign(1, 0, 0);
	split.assign(2, 1, 1);
	CHECK(validate_schedule(two, split).feasible);
}

TEST_CASE("validate_schedule flags unknown jobs, bad machines, and blocked overlap")
{
	Instance inst({Job{1, 2, 0, 8}}, 1, {{0, 2, 4}});
	Schedule unknown;
	unknown.assign(7, 0, 0);
	CHECK(!validate_schedule(inst, unknown).feasible);

	Schedule off_machine;
	off_machine.assign(1, 1, 0);
	CHECK(!validate_schedule(inst, off_machine).feasible);

	Schedule in_block;
	in_block.assign(1, 0, 3);
	CHECK(!validate_schedule(inst, in_block).feasible);

	Schedule after_block;
	after_block.assign(1, 0, 4);
	CHECK(validate_schedule(inst, after_block).feasible);
}

TEST_CASE("validate_schedule is a pure function")
{
	Instance inst({Job{1, 2, 0, 4}, Job{2, 2, 1, 6}}, 1);
	Schedule sched;
	sched.assign(1, 0, 0);
	sched.assign(2, 0, 2);
	Validation_report first = validate_schedule(inst, sched);
	Validation_report second = validate_schedule(inst, sched);
	CHECK(first.feasible == second.feasible);
	CHECK(first.throughput == second.throughput);
	CHECK(first.violations == second.violations);
}

TEST_CASE("left_shift moves a job to its release time")
{
	Instance inst({Job{1, 2, 0, 10}}, 1);
	Schedule sched;
	sched.assign(1, 0, 5);
	Schedule shifted = left_shift(inst, sched);
	CHECK(shifted.assignments.at(1).start == 0);
}

TEST_CASE("left_shift packs a job against its predecessor's finish")
{
	Instance inst({Job{1, 2, 0, 10}, Job{2, 2, 0, 10}}, 1);
	Schedule sched;
	sched.assign(1, 0, 0);
	sched.assign(2, 0, 5);
	Schedule shifted = left_shift(inst, sched);
	CHECK(shifted.assignments.at(2).start == 2);
}

TEST_CASE("left_shift stops at a blocked interval's end")
{
	Instance inst({Job{1, 2, 0, 10}}, 1, {{0, 0, 3}});
	Schedule sched;
	sched.assign(1, 0, 7);
	Schedule shifted = left_shift(inst, sched);
	CHECK(shifted.assignments.at(1).start == 3);
}

TEST_CASE("left_shift rejects an infeasible schedule")
{
	Instance inst({Job{1, 2, 0, 2}}, 1);
	Schedule sched;
	sched.assign(1, 0, 1);
	CHECK_THROWS_AS(left_shift(inst, sched), std::invalid_argument);
}

namespace {

	// Greedily builds some feasible schedule so shifting has material to work
	// on; placement quality is irrelevant here.
	Schedule arbitrary_feasible(const Instance& inst, Rng& rng)
	{
		Schedule sched;
		std::vector<Time> free_at(static_cast<std::size_t>(inst.machines), 0);
		for (const Job& job : inst.jobs) {
			int machine = static_cast<int>(rng.range(0, inst.machines - 1));
			Time lb = std::max(job.r, free_at[static_cast<std::size_t>(machine)]);
			Time jitter = rng.range(0, 2);
			Time start = earliest_block_free(inst.blocks_on(machine), lb + jitter, job.p);
			if (start + job.p > job.d)
				continue;
			sched.assign(job.id, machine, start);
			free_at[static_cast<std::size_t>(machine)] = start + job.p;
		}
		return sched;
	}

}

TEST_CASE("left_shift preserves feasibility and throughput on random schedules")
{
	Rng rng(2024, "left-shift-property");
	for (int trial = 0; trial < 200; trial++) {
		int n = static_cast<int>(rng.range(1, 6));
		int m = static_cast<int>(rng.range(1, 2));
		std::vector<Job> jobs;
		for (int j = 0; j < n; j++) {
			Time p = rng.range(1, 4);
			Time r = rng.range(0, 8);
			jobs.push_back(Job{j, p, r, r + p + rng.range(0, 8)});
		}
		std::vector<Blocked_interval> blocks;
		if (rng.chance(0.3)) {
			Time s = rng.range(0, 6);
			blocks.push_back({static_cast<int>(rng.range(0, m - 1)), s, s + rng.range(1, 3)});
		}
		Instance inst(jobs, m, blocks);
		Schedule sched = arbitrary_feasible(inst, rng);
		REQUIRE(validate_schedule(inst, sched).feasible);

		Schedule shifted = left_shift(inst, sched);
		Validation_report report = validate_schedule(inst, shifted);
		CHECK(report.feasible);
		CHECK(shifted.value() == sched.value());
	}
}

TEST_CASE("left-shifted starts come from the slack set or block ends")
{
	Rng rng(77, "start-membership");
	for (int trial = 0; trial < 200; trial++) {
		int n = static_cast<int>(rng.range(1, 5));
		std::vector<Job> jobs;
		for (int j = 0; j < n; j++) {
			Time p = rng.range(1, 3);
			Time r = rng.range(0, 6);
			jobs.push_back(Job{j, p, r, r + p + rng.range(0, 6)});
		}
		std::vector<Blocked_interval> blocks;
		if (rng.chance(0.3)) {
			Time s = rng.range(0, 5);
			blocks.push_back({0, s, s + rng.range(1, 2)});
		}
		Instance inst(jobs, 1, blocks);
		Schedule sched = arbitrary_feasible(inst, rng);
		Schedule shifted = left_shift(inst, sched);

		Slack_set starts = start_candidates(inst);
		REQUIRE(!starts.overflow);
		std::set<Time> allowed(starts.times.begin(), starts.times.end());
		for (const auto& [id, place] : shifted.assignments)
			CHECK(allowed.contains(place.start));
	}
}
