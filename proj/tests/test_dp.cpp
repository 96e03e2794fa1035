#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <throughput/classify.hpp>
#include <throughput/dp.hpp>
#include <throughput/exact.hpp>
#include <throughput/greedy.hpp>
#include <throughput/io.hpp>
#include <throughput/partition.hpp>
#include <throughput/rng.hpp>

#include "support/oracles.hpp"

using namespace throughput;

TEST_CASE("canonicalize_blocks sorts, merges abutting pairs, and rejects overlap")
{
	Blocked_vector out_of_order;
	out_of_order.machines = {{{4, 6}, {0, 2}}};
	Blocked_vector sorted = canonicalize_blocks(out_of_order);
	CHECK(sorted.machines[0] == std::vector<Blocked_pair>{{0, 2}, {4, 6}});

	Blocked_vector abutting;
	abutting.machines = {{{0, 2}, {2, 4}}};
	CHECK(canonicalize_blocks(abutting).machines[0] == std::vector<Blocked_pair>{{0, 4}});

	Blocked_vector with_empty;
	with_empty.machines = {{{3, 3}, {0, 2}}};
	CHECK(canonicalize_blocks(with_empty).machines[0] == std::vector<Blocked_pair>{{0, 2}});

	Blocked_vector overlapping;
	overlapping.machines = {{{0, 3}, {2, 4}}};
	CHECK_THROWS_AS(canonicalize_blocks(overlapping), std::invalid_argument);
}

TEST_CASE("equal states map to identical keys")
{
	Count_vector zeros;
	zeros.counts = {{0, 0}, {0, 0}};

	Blocked_vector a;
	a.machines = {{{4, 6}, {0, 2}}};
	Blocked_vector b;
	b.machines = {{{0, 2}, {4, 6}}};
	CHECK(canonicalize_key(a, zeros) == canonicalize_key(b, zeros));

	Count_vector bumped = zeros;
	bumped.counts[1][0] = 1;
	CHECK(!(canonicalize_key(a, zeros) == canonicalize_key(a, bumped)));
}

namespace {

	// Partition over the instance horizon as the full pipeline would build
	// it: refined against the instance's release and deadline points.
	Hierarchical_partition pipeline_partition(const Instance& inst, double eps, Time r0,
	                                          std::size_t stop_rule = 24)
	{
		int q = static_cast<int>(std::ceil(1.0 / (eps * eps)));
		std::vector<Time> points;
		for (const Job& job : inst.jobs) {
			points.push_back(job.r);
			points.push_back(job.d);
		}
		return build_partition(inst.horizon, q, r0, stop_rule, points);
	}

}

TEST_CASE("solve_tight finds the maximum independent set of intervals")
{
	Instance inst({Job{1, 2, 0, 2}, Job{2, 2, 1, 3}, Job{3, 2, 2, 4}}, 1);
	Hierarchical_partition part = pipeline_partition(inst, 0.5, 0);
	Dp_result result = solve_tight(inst, part, 0.5);
	CHECK(result.report.value == 2);
	CHECK(result.schedule.value() == 2);
	CHECK(validate_schedule(inst, result.schedule).feasible);
	CHECK(oracles::interval_mis({{0, 2}, {1, 3}, {2, 4}}) == 2);
}

TEST_CASE("solve_tight schedules a single job and splits duplicates across machines")
{
	Instance one({Job{1, 3, 2, 5}}, 1);
	Dp_result single = solve_tight(one, pipeline_partition(one, 0.5, 0), 0.5);
	CHECK(single.report.value == 1);

	Instance twin({Job{1, 4, 0, 4}, Job{2, 4, 0, 4}}, 2);
	Dp_result pair = solve_tight(twin, pipeline_partition(twin, 0.5, 0), 0.5);
	CHECK(pair.report.value == 2);
	CHECK(validate_schedule(twin, pair.schedule).feasible);
}

TEST_CASE("solve_tight rejects loose jobs, stray deadlines, and bad eps")
{
	Instance loose({Job{1, 1, 0, 8}}, 1);
	Hierarchical_partition part = pipeline_partition(loose, 0.5, 0);
	CHECK_THROWS_AS(solve_tight(loose, part, 0.5), std::invalid_argument);

	Instance tight({Job{1, 4, 0, 4}}, 1);
	Hierarchical_partition small = build_partition(2, 4, 0);
	CHECK_THROWS_AS(solve_tight(tight, small, 0.5), std::invalid_argument);

	Hierarchical_partition fine = pipeline_partition(tight, 0.5, 0);
	CHECK_THROWS_AS(solve_tight(tight, fine, 0.7), std::invalid_argument);
}

TEST_CASE("solve_full handles the empty and single-job instances")
{
	Dp_options options;
	options.eps = 0.5;
	Instance empty({}, 1);
	Dp_result none = solve_full(empty, options);
	CHECK(none.report.value == 0);

	Instance one({Job{1, 2, 1, 6}}, 1);
	Dp_result single = solve_full(one, options);
	CHECK(single.report.value == 1);
	CHECK(validate_schedule(one, single.schedule).feasible);
}

TEST_CASE("solve_full output is always feasible for the original instance")
{
	Rng rng(1999, "full-feasibility");
	for (int trial = 0; trial < 25; trial++) {
		int n = static_cast<int>(rng.range(1, 7));
		std::vector<Job> jobs;
		for (int j = 0; j < n; j++) {
			Time p = rng.range(1, 4);
			Time span = p + rng.range(0, 3 * p);
			Time r = rng.range(0, 24 - span);
			jobs.push_back(Job{j, p, r, r + span});
		}
		std::vector<Blocked_interval> blocks;
		if (rng.chance(0.3)) {
			Time s = rng.range(0, 16);
			blocks.push_back({0, s, s + rng.range(1, 4)});
		}
		Instance inst(jobs, 1, blocks);
		inst.horizon = 24;

		Dp_options options;
		options.eps = 0.5;
		options.seed = rng.next();
		Dp_result result = solve_full(inst, options);
		CHECK(validate_schedule(inst, result.schedule).feasible);
		CHECK(result.schedule.value() == result.report.value);
	}
}

TEST_CASE("solve_full never loses to the greedy baseline")
{
	Rng rng(2000, "full-floor");
	for (int trial = 0; trial < 15; trial++) {
		int n = static_cast<int>(rng.range(1, 6));
		std::vector<Job> jobs;
		for (int j = 0; j < n; j++) {
			Time p = rng.range(1, 4);
			Time span = p + rng.range(0, 2 * p);
			Time r = rng.range(0, 20 - span);
			jobs.push_back(Job{j, p, r, r + span});
		}
		Instance inst(jobs, 1);
		inst.horizon = 20;
		Dp_options options;
		options.eps = 0.5;
		options.seed = 17 + static_cast<std::uint64_t>(trial);
		Dp_result result = solve_full(inst, options);
		CHECK(result.report.value >= greedy_shortest_first(inst).value());
	}
}

TEST_CASE("removing a blocked interval never lowers the tight-solver value")
{
	Rng rng(2001, "block-monotonicity");
	int compared = 0;
	for (int trial = 0; trial < 40 && compared < 12; trial++) {
		int n = static_cast<int>(rng.range(2, 6));
		std::vector<Job> jobs;
		for (int j = 0; j < n; j++) {
			Time p = rng.range(2, 4);
			Time span = p + rng.range(0, p - 1);
			Time r = rng.range(0, 20 - span);
			jobs.push_back(Job{j, p, r, r + span});
		}
		Time s = rng.range(0, 14);
		Instance blocked(jobs, 1, {{0, s, s + 3}});
		blocked.horizon = 20;
		Instance open(jobs, 1);
		open.horizon = 20;

		Hierarchical_partition part = pipeline_partition(open, 0.5, 0);
		Job_classification cls = classify_jobs(open, part, 2);
		if (!find_span_crossing(open, part, cls).empty())
			continue;

		CHECK(solve_tight(open, part, 0.5).report.value
		      >= solve_tight(blocked, part, 0.5).report.value);
		compared++;
	}
	CHECK(compared >= 12);
}

TEST_CASE("on all-tight instances the full pipeline matches the tight solver")
{
	Rng rng(2002, "tight-equivalence");
	int compared = 0;
	for (int trial = 0; trial < 40 && compared < 12; trial++) {
		int n = static_cast<int>(rng.range(2, 6));
		std::vector<Job> jobs;
		for (int j = 0; j < n; j++) {
			Time p = rng.range(2, 5);
			// Spans strictly below twice the size keep every job tight and
			// uncut, so both entry points see the same effective instance.
			Time span = p + rng.range(0, p - 1);
			Time r = rng.range(0, 24 - span);
			jobs.push_back(Job{j, p, r, r + span});
		}
		Instance inst(jobs, 1);
		inst.horizon = 24;

		Dp_options options;
		options.eps = 0.5;
		options.seed = 100 + static_cast<std::uint64_t>(trial);
		options.offsets = 1;
		options.caps_disabled = true;

		// The pipeline draws this offset internally from the same stream.
		int q = 4;
		Time r0 = Rng(options.seed, "offset-sequence").range(0, inst.horizon / q);
		Hierarchical_partition part = pipeline_partition(inst, options.eps, r0,
		                                                 options.stop_rule);
		Job_classification cls = classify_jobs(inst, part, 2);
		if (!find_span_crossing(inst, part, cls).empty())
			continue;

		Dp_result tight = solve_tight(inst, part, options.eps, options);
		Dp_result full = solve_full(inst, options);
		CHECK(full.report.value == tight.report.value);
		compared++;
	}
	CHECK(compared >= 12);
}

TEST_CASE("a tiny guess budget reports truncation instead of failing")
{
	std::vector<Job> jobs;
	for (int j = 0; j < 6; j++)
		jobs.push_back(Job{j, 2, 0, 16});
	Instance inst(jobs, 1);
	Dp_options options;
	options.eps = 0.5;
	options.guess_budget = 3;
	Dp_result result = solve_full(inst, options);
	CHECK(result.report.truncated);
	// The greedy backstop still produces a real schedule.
	CHECK(result.report.value >= 1);
	CHECK(validate_schedule(inst, result.schedule).feasible);
}

TEST_CASE("a zero memo cap reports truncation through the same path")
{
	Instance inst({Job{1, 2, 0, 8}, Job{2, 2, 0, 8}}, 1);
	Dp_options options;
	options.eps = 0.5;
	options.memo_cap = 0;
	Dp_result result = solve_full(inst, options);
	CHECK(result.report.truncated);
	CHECK(validate_schedule(inst, result.schedule).feasible);
}

TEST_CASE("fixed seeds reproduce identical schedule bytes")
{
	Rng rng(2003, "determinism-instances");
	for (int trial = 0; trial < 5; trial++) {
		int n = static_cast<int>(rng.range(2, 7));
		std::vector<Job> jobs;
		for (int j = 0; j < n; j++) {
			Time p = rng.range(1, 4);
			Time span = p + rng.range(0, 3 * p);
			Time r = rng.range(0, 24 - span);
			jobs.push_back(Job{j, p, r, r + span});
		}
		Instance inst(jobs, 1);
		inst.horizon = 24;
		Dp_options options;
		options.eps = 0.5;
		options.seed = 33;
		options.offsets = 3;
		Dp_result first = solve_full(inst, options);
		Dp_result second = solve_full(inst, options);
		CHECK(dump_canonical(schedule_to_json(first.schedule))
		      == dump_canonical(schedule_to_json(second.schedule)));
		CHECK(first.report.r0 == second.report.r0);
	}
}

TEST_CASE("the report serializes the documented fields in order")
{
	Instance inst({Job{1, 2, 1, 6}}, 1);
	Dp_options options;
	options.eps = 0.5;
	Dp_result result = solve_full(inst, options);
	nlohmann::ordered_json doc = dp_report_to_json(result.report);
	std::vector<std::string> keys;
	for (auto it = doc.begin(); it != doc.end(); ++it)
		keys.push_back(it.key());
	CHECK(keys == std::vector<std::string>{
		"value", "truncated", "r0", "nodes_evaluated", "leaf_calls"});
	CHECK(doc["value"] == 1);
}
