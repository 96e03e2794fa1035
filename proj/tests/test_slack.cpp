#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include <throughput/core.hpp>
#include <throughput/rng.hpp>
#include <throughput/slack.hpp>

using namespace throughput;

TEST_CASE("slack_times enumerates subset sums anchored at release times")
{
	Instance inst({Job{1, 1, 0, 3}, Job{2, 2, 0, 3}}, 1);
	Slack_set slack = slack_times(inst);
	CHECK(slack.times == std::vector<Time>{0, 1, 2, 3});
	CHECK(!slack.overflow);
}

TEST_CASE("slack_times of a single job is its release and finish")
{
	Instance inst({Job{1, 5, 2, 10}}, 1);
	Slack_set slack = slack_times(inst);
	CHECK(slack.times == std::vector<Time>{2, 7});
}

TEST_CASE("slack_times clips values above the horizon")
{
	// Sums 0, 4, 8 anchored at 0 and 3; 3+8 = 11 exceeds T = 10.
	Instance inst({Job{1, 4, 0, 10}, Job{2, 4, 3, 10}}, 1);
	Slack_set slack = slack_times(inst);
	for (Time t : slack.times)
		CHECK(t <= inst.horizon);
	CHECK(std::count(slack.times.begin(), slack.times.end(), 11) == 0);
}

TEST_CASE("slack_times always contains releases and single-job finishes")
{
	Rng rng(5150, "slack-membership");
	for (int trial = 0; trial < 200; trial++) {
		int n = static_cast<int>(rng.range(1, 6));
		std::vector<Job> jobs;
		for (int j = 0; j < n; j++) {
			Time p = rng.range(1, 5);
			Time r = rng.range(0, 12);
			jobs.push_back(Job{j, p, r, r + p + rng.range(0, 10)});
		}
		Instance inst(jobs, 1);
		Slack_set slack = slack_times(inst);
		std::set<Time> have(slack.times.begin(), slack.times.end());
		for (const Job& a : inst.jobs) {
			CHECK(have.contains(a.r));
			for (const Job& b : inst.jobs)
				if (a.r + b.p <= inst.horizon)
					CHECK(have.contains(a.r + b.p));
		}
		CHECK(std::is_sorted(slack.times.begin(), slack.times.end()));
		CHECK(std::adjacent_find(slack.times.begin(), slack.times.end()) == slack.times.end());
	}
}

TEST_CASE("slack set size respects the count-vector bound")
{
	// Three jobs over two distinct sizes: at most 3^(2+1) = 27 points.
	Instance inst({Job{1, 2, 0, 30}, Job{2, 2, 5, 30}, Job{3, 7, 9, 30}}, 1);
	Slack_set slack = slack_times(inst);
	CHECK(slack.times.size() <= 27);
}

TEST_CASE("slack enumeration cap sets the overflow flag")
{
	std::vector<Job> jobs;
	for (int j = 0; j < 12; j++)
		jobs.push_back(Job{j, j + 1, static_cast<Time>(j), 400});
	Instance inst(jobs, 1);
	Slack_set capped = slack_times(inst, 10);
	CHECK(capped.overflow);
	CHECK(capped.times.size() <= 10);
	Slack_set full = slack_times(inst);
	CHECK(!full.overflow);
}

TEST_CASE("start_candidates adds block end points as anchors")
{
	Instance inst({Job{1, 2, 0, 12}}, 1, {{0, 3, 5}});
	Slack_set starts = start_candidates(inst);
	std::set<Time> have(starts.times.begin(), starts.times.end());
	CHECK(have.contains(5));
	CHECK(have.contains(7));
	CHECK(have.contains(0));
	CHECK(have.contains(2));
}
