#ifndef THROUGHPUT_GENERATOR_HPP
#define THROUGHPUT_GENERATOR_HPP

#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "core.hpp"
#include "rng.hpp"

namespace throughput {

	enum class Span_dist {
		tight_heavy,
		loose_heavy,
		mixed,
	};

	inline const char* span_dist_name(Span_dist dist)
	{
		switch (dist) {
		case Span_dist::tight_heavy: return "tight-heavy";
		case Span_dist::loose_heavy: return "loose-heavy";
		case Span_dist::mixed: return "mixed";
		}
		throw std::invalid_argument("span_dist_name: unknown distribution");
	}

	inline Span_dist span_dist_from_name(const std::string& name)
	{
		if (name == "tight-heavy")
			return Span_dist::tight_heavy;
		if (name == "loose-heavy")
			return Span_dist::loose_heavy;
		if (name == "mixed")
			return Span_dist::mixed;
		throw std::invalid_argument("span distribution must be one of "
			"tight-heavy, loose-heavy, mixed; got \"" + name + "\"");
	}

	struct Gen_params {
		int n = 8;
		int m = 1;
		int c = 2;
		Time T = 32;
		std::uint64_t seed = 1;
		Span_dist span_dist = Span_dist::mixed;
	};

	namespace detail {

		// Log-uniform integer in [1, hi]: exponent drawn uniformly, then
		// rounded down, so small values are as likely as large ones per
		// octave.
		inline Time log_uniform(Rng& rng, Time hi)
		{
			double exponent = rng.real01() * std::log(static_cast<double>(hi) + 1.0);
			Time value = static_cast<Time>(std::exp(exponent));
			if (value < 1)
				value = 1;
			if (value > hi)
				value = hi;
			return value;
		}

	}

	// Deterministic seeded instance generator. Draws c distinct processing
	// times log-uniformly from [1, T/4], deals each value to at least one job
	// so the instance has exactly c distinct sizes, and places every span
	// inside [0, T] following the requested distribution.
	inline Instance generate_instance(const Gen_params& params,
	                                  std::vector<std::string>* warnings = nullptr)
	{
		if (params.n < 0)
			throw std::invalid_argument("generate_instance: n must not be negative");
		if (params.m < 1)
			throw std::invalid_argument("generate_instance: m must be at least 1");
		if (params.c < 1)
			throw std::invalid_argument("generate_instance: c must be at least 1");
		if (params.T < 4)
			throw std::invalid_argument("generate_instance: T must be at least 4");

		Time size_hi = params.T / 4;
		if (static_cast<Time>(params.c) > size_hi)
			throw std::invalid_argument("generate_instance: c = " + std::to_string(params.c)
				+ " distinct sizes cannot be drawn from [1, " + std::to_string(size_hi) + "]");

		if (params.n == 0)
			return Instance({}, params.m);

		int c = params.c;
		if (c > params.n) {
			c = params.n;
			if (warnings)
				warnings->push_back("generate_instance: c reduced to " + std::to_string(c)
					+ " because only " + std::to_string(params.n) + " jobs are drawn");
		}

		Rng size_rng(params.seed, "instance-sizes");
		std::set<Time> sizes;
		int attempts = 0;
		while (static_cast<int>(sizes.size()) < c) {
			sizes.insert(detail::log_uniform(size_rng, size_hi));
			if (++attempts > 1000 * params.c) {
				c = static_cast<int>(sizes.size());
				if (warnings)
					warnings->push_back("generate_instance: c reduced to " + std::to_string(c)
						+ " after repeated duplicate size draws");
				break;
			}
		}
		std::vector<Time> size_values(sizes.begin(), sizes.end());

		Rng job_rng(params.seed, "instance-jobs");
		std::vector<Job> jobs;
		for (int i = 0; i < params.n; i++) {
			// The first c jobs take one value each, which pins the distinct
			// size count; the rest draw uniformly.
			Time p = i < c ? size_values[static_cast<std::size_t>(i)]
			               : size_values[static_cast<std::size_t>(
						job_rng.range(0, static_cast<std::int64_t>(size_values.size()) - 1))];

			bool tight = params.span_dist == Span_dist::tight_heavy
				|| (params.span_dist == Span_dist::mixed && job_rng.chance(0.5));
			Time span_lo = tight ? p : 4 * p;
			Time span_hi = tight ? 2 * p : 10 * p;
			span_lo = std::min(span_lo, params.T);
			span_hi = std::min(span_hi, params.T);
			Time span = span_lo + job_rng.range(0, span_hi - span_lo);
			Time r = job_rng.range(0, params.T - span);
			jobs.push_back(Job{static_cast<Job_id>(i + 1), p, r, r + span});
		}
		Instance inst(std::move(jobs), params.m);
		inst.horizon = params.T;
		return inst;
	}

}

#endif
