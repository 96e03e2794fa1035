#ifndef THROUGHPUT_CLASSIFY_HPP
#define THROUGHPUT_CLASSIFY_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "core.hpp"
#include "partition.hpp"

namespace throughput {

	// Class of a job relative to the partition: class 0 spans at least
	// lambda level-0 intervals worth of time, class i in [1, k] satisfies
	// lambda * l_i <= |span| < lambda * l_(i-1), and class k+1 collects the
	// rest. A job is loose when its size is at most a 1/lambda fraction of
	// its span, so it has substantial freedom in where it runs.
	struct Job_class_info {
		int class_index = 0;
		bool loose = false;
		// First and last interval of the class level that the span overlaps,
		// recorded at classification time so later passes cut against the
		// same geometry.
		std::size_t head = 0;
		std::size_t tail = 0;
	};

	struct Job_classification {
		int lambda = 2;
		int deepest = 0;
		std::map<Job_id, Job_class_info> info;

		const Job_class_info& of(Job_id id) const
		{
			auto it = info.find(id);
			if (it == info.end())
				throw std::invalid_argument("classification does not cover job " + std::to_string(id));
			return it->second;
		}
	};

	inline Job_classification classify_jobs(const Instance& inst,
	                                        const Hierarchical_partition& part,
	                                        int lambda)
	{
		if (lambda < 2)
			throw std::invalid_argument("classify_jobs: lambda must be at least 2");
		Job_classification cls;
		cls.lambda = lambda;
		cls.deepest = part.deepest_level();
		for (const Job& job : inst.jobs) {
			Job_class_info info;
			Time span = job.span_length();
			int k = part.deepest_level();
			if (span >= static_cast<Time>(lambda) * part.nominal_length(0)) {
				info.class_index = 0;
			} else {
				info.class_index = k + 1;
				for (int level = 1; level <= k; level++) {
					if (span >= static_cast<Time>(lambda) * part.nominal_length(level)) {
						info.class_index = level;
						break;
					}
				}
			}
			info.loose = job.p * static_cast<Time>(lambda) <= span;
			int level = std::min(info.class_index, k);
			std::vector<std::size_t> touched = part.overlapping(level, job.r, job.d);
			info.head = touched.front();
			info.tail = touched.back();
			cls.info[job.id] = info;
		}
		return cls;
	}

	// Jobs of class >= 2 whose span overlaps more than one interval two
	// levels up. Their span is short relative to that level's grid, so a
	// random offset rarely cuts through it; the caller drops them.
	inline std::vector<Job_id> find_span_crossing(const Instance& inst,
	                                              const Hierarchical_partition& part,
	                                              const Job_classification& cls)
	{
		std::vector<Job_id> crossing;
		for (const Job& job : inst.jobs) {
			const Job_class_info& info = cls.of(job.id);
			if (info.class_index < 2)
				continue;
			if (part.overlapping(info.class_index - 2, job.r, job.d).size() > 1)
				crossing.push_back(job.id);
		}
		return crossing;
	}

	// Scheduled jobs whose run straddles a boundary two levels above the
	// level their size belongs to. A job of size in [l_i, l_(i-1)) is charged
	// to level i; sizes of l_1 or more are never counted because the top
	// levels have no grid two above them.
	inline std::vector<Job_id> find_position_crossing(const Instance& inst,
	                                                  const Hierarchical_partition& part,
	                                                  const Schedule& sched)
	{
		std::vector<Job_id> crossing;
		int k = part.deepest_level();
		if (k < 1)
			return crossing;
		for (const auto& [id, placement] : sched.assignments) {
			const Job* job = inst.find_job(id);
			if (job == nullptr)
				throw std::invalid_argument("schedule refers to unknown job " + std::to_string(id));
			if (job->p >= part.nominal_length(1))
				continue;
			int level = k + 1;
			for (int i = 2; i <= k; i++) {
				if (job->p >= part.nominal_length(i)) {
					level = i;
					break;
				}
			}
			const std::vector<Time>& grid = part.boundaries[static_cast<std::size_t>(level - 2)];
			Time start = placement.start;
			Time finish = start + job->p;
			auto it = std::upper_bound(grid.begin(), grid.end(), start);
			if (it != grid.end() && *it < finish)
				crossing.push_back(id);
		}
		return crossing;
	}

	struct Cut_result {
		Instance instance;
		std::vector<Job_id> dropped;
	};

	// Shrinks every loose job of class <= k to whole intervals of its class
	// level: the partial interval at each end of the span is cut away. Jobs
	// whose trimmed span can no longer hold them are dropped; that only
	// happens when lambda == 2, where a span of lambda intervals has nothing
	// left after losing both ends.
	inline Cut_result cut_heads_tails(const Instance& inst,
	                                  const Hierarchical_partition& part,
	                                  const Job_classification& cls)
	{
		std::vector<Job> kept;
		std::vector<Job_id> dropped;
		int k = part.deepest_level();
		for (const Job& job : inst.jobs) {
			const Job_class_info& info = cls.of(job.id);
			if (!info.loose || info.class_index > k) {
				kept.push_back(job);
				continue;
			}
			int level = info.class_index;
			if (info.tail < info.head + 2) {
				dropped.push_back(job.id);
				continue;
			}
			std::size_t first = info.head + 1;
			std::size_t last = info.tail - 1;
			Time r = part.interval(level, first).first;
			Time d = part.interval(level, last).second;
			if (r + job.p > d) {
				dropped.push_back(job.id);
				continue;
			}
			Job cut = job;
			cut.r = r;
			cut.d = d;
			kept.push_back(cut);
		}
		Instance out(kept, inst.machines, inst.blocked);
		out.horizon = inst.horizon;
		return Cut_result{std::move(out), std::move(dropped)};
	}

}

#endif
