#include <doctest.h>

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <throughput/generator.hpp>
#include <throughput/io.hpp>

using namespace throughput;

TEST_CASE("zero jobs yield an empty instance on the requested machines")
{
	Gen_params params;
	params.n = 0;
	params.m = 3;
	Instance inst = generate_instance(params);
	CHECK(inst.jobs.empty());
	CHECK(inst.machines == 3);
}

TEST_CASE("one size class makes every processing time equal")
{
	Gen_params params;
	params.n = 10;
	params.c = 1;
	params.T = 40;
	params.seed = 7;
	Instance inst = generate_instance(params);
	REQUIRE(inst.jobs.size() == 10);
	for (const Job& job : inst.jobs)
		CHECK(job.p == inst.jobs.front().p);
	CHECK(inst.distinct_sizes().size() == 1);
}

TEST_CASE("the same seed reproduces the instance byte for byte")
{
	Gen_params params;
	params.n = 12;
	params.c = 3;
	params.T = 64;
	params.seed = 42;
	std::string first = dump_canonical(instance_to_json(generate_instance(params)));
	std::string second = dump_canonical(instance_to_json(generate_instance(params)));
	CHECK(first == second);

	params.seed = 43;
	CHECK(dump_canonical(instance_to_json(generate_instance(params))) != first);
}

TEST_CASE("parameter validation rejects out-of-range requests")
{
	Gen_params params;
	params.n = -1;
	CHECK_THROWS_AS(generate_instance(params), std::invalid_argument);

	params = {};
	params.m = 0;
	CHECK_THROWS_AS(generate_instance(params), std::invalid_argument);

	params = {};
	params.c = 0;
	CHECK_THROWS_AS(generate_instance(params), std::invalid_argument);

	params = {};
	params.T = 3;
	CHECK_THROWS_AS(generate_instance(params), std::invalid_argument);

	params = {};
	params.T = 8;
	params.c = 3;
	CHECK_THROWS_AS(generate_instance(params), std::invalid_argument);
}

TEST_CASE("requesting more size classes than jobs reduces c with a warning")
{
	Gen_params params;
	params.n = 2;
	params.c = 5;
	params.T = 64;
	std::vector<std::string> warnings;
	Instance inst = generate_instance(params, &warnings);
	CHECK(inst.distinct_sizes().size() <= 2);
	REQUIRE(warnings.size() == 1);
	CHECK(warnings.front().find("c reduced to 2") != std::string::npos);
}

TEST_CASE("the instance carries exactly c distinct sizes and unique ids")
{
	Gen_params params;
	params.n = 9;
	params.c = 3;
	params.T = 48;
	params.seed = 11;
	Instance inst = generate_instance(params);
	CHECK(inst.distinct_sizes().size() == 3);

	std::set<Job_id> ids;
	for (const Job& job : inst.jobs)
		ids.insert(job.id);
	CHECK(ids.size() == inst.jobs.size());
}

TEST_CASE("every span fits in the horizon window")
{
	for (std::uint64_t seed = 1; seed <= 20; seed++) {
		Gen_params params;
		params.n = 8;
		params.c = 2;
		params.T = 32;
		params.seed = seed;
		Instance inst = generate_instance(params);
		CHECK(inst.horizon == 32);
		for (const Job& job : inst.jobs) {
			CHECK(job.r >= 0);
			CHECK(job.d <= 32);
			CHECK(job.r + job.p <= job.d);
		}
	}
}

TEST_CASE("span distributions bias the window widths as named")
{
	Gen_params params;
	params.n = 20;
	params.c = 2;
	params.T = 64;
	params.seed = 5;

	params.span_dist = Span_dist::tight_heavy;
	for (const Job& job : generate_instance(params).jobs)
		CHECK(job.span_length() <= 2 * job.p);

	params.span_dist = Span_dist::loose_heavy;
	for (const Job& job : generate_instance(params).jobs)
		CHECK(job.span_length() >= std::min<Time>(4 * job.p, params.T));
}

TEST_CASE("distribution names round-trip and unknown names are rejected")
{
	for (Span_dist dist : {Span_dist::tight_heavy, Span_dist::loose_heavy, Span_dist::mixed})
		CHECK(span_dist_from_name(span_dist_name(dist)) == dist);
	CHECK_THROWS_AS(span_dist_from_name("bursty"), std::invalid_argument);
}
