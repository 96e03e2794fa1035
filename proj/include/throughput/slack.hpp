#ifndef THROUGHPUT_SLACK_HPP
#define THROUGHPUT_SLACK_HPP

#include <algorithm>
#include <cstddef>
#include <vector>

#include "core.hpp"

namespace throughput {

	// The candidate start times of left-shifted schedules. With c distinct
	// processing times and n jobs the set has at most n^(c+1) members, since
	// each is an anchor plus a sum of per-size multiplicities.
	struct Slack_set {
		std::vector<Time> times;
		bool overflow = false;
	};

	namespace detail {

		// All values a + sum_sizes(k_1..k_c) <= horizon where a ranges over
		// anchors and 0 <= k_i <= count_i. Sorted and deduplicated. If more
		// than cap values arise, keeps the cap smallest and flags overflow.
		inline Slack_set anchored_sums(const std::vector<Time>& anchors,
		                               const std::vector<std::pair<Time, std::size_t>>& size_counts,
		                               Time horizon, std::size_t cap)
		{
			Slack_set result;
			if (anchors.empty())
				return result;

			std::vector<Time> sums{0};
			for (const auto& [size, count] : size_counts) {
				std::vector<Time> extended;
				extended.reserve(sums.size() * (count + 1));
				for (Time base : sums) {
					for (std::size_t k = 0; k <= count; k++) {
						Time value = base + static_cast<Time>(k) * size;
						if (value > horizon)
							break;
						extended.push_back(value);
					}
				}
				std::sort(extended.begin(), extended.end());
				extended.erase(std::unique(extended.begin(), extended.end()), extended.end());
				if (extended.size() > cap) {
					extended.resize(cap);
					result.overflow = true;
				}
				sums = std::move(extended);
			}

			std::vector<Time>& times = result.times;
			for (Time anchor : anchors)
				for (Time sum : sums) {
					Time value = anchor + sum;
					if (value <= horizon)
						times.push_back(value);
				}
			std::sort(times.begin(), times.end());
			times.erase(std::unique(times.begin(), times.end()), times.end());
			if (times.size() > cap) {
				times.resize(cap);
				result.overflow = true;
			}
			return result;
		}

		inline std::vector<std::pair<Time, std::size_t>> size_multiplicities(const Instance& inst)
		{
			std::vector<std::pair<Time, std::size_t>> size_counts;
			for (Time size : inst.distinct_sizes()) {
				std::size_t count = 0;
				for (const Job& j : inst.jobs)
					if (j.p == size)
						count++;
				size_counts.emplace_back(size, count);
			}
			return size_counts;
		}

	}

	// Slack times of an instance: every release time plus every sum of job
	// processing times (taken with multiplicity), clipped at the horizon.
	inline Slack_set slack_times(const Instance& inst, std::size_t cap = 200000)
	{
		std::vector<Time> anchors;
		for (const Job& j : inst.jobs)
			anchors.push_back(j.r);
		std::sort(anchors.begin(), anchors.end());
		anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());
		return detail::anchored_sums(anchors, detail::size_multiplicities(inst), inst.horizon, cap);
	}

	// Superset of slack_times that also anchors sums at blocked-interval end
	// points and any extra anchors the caller supplies. Left-shifted schedules
	// on instances with blocked machine time can chain job starts off a block
	// end, so search procedures use this wider candidate set.
	inline Slack_set start_candidates(const Instance& inst,
	                                  const std::vector<Time>& extra_anchors = {},
	                                  std::size_t cap = 200000)
	{
		std::vector<Time> anchors;
		for (const Job& j : inst.jobs)
			anchors.push_back(j.r);
		for (const Blocked_interval& b : inst.blocked)
			anchors.push_back(b.end);
		for (Time a : extra_anchors)
			if (a >= 0 && a <= inst.horizon)
				anchors.push_back(a);
		std::sort(anchors.begin(), anchors.end());
		anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());
		return detail::anchored_sums(anchors, detail::size_multiplicities(inst), inst.horizon, cap);
	}

}

#endif
