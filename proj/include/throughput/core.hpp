#ifndef THROUGHPUT_CORE_HPP
#define THROUGHPUT_CORE_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace throughput {

	typedef std::int64_t Time;
	typedef std::int64_t Job_id;

	// One schedulable unit of work: p contiguous time units somewhere in [r, d],
	// on any one machine, without preemption.
	struct Job {
		Job_id id = 0;
		Time p = 0;
		Time r = 0;
		Time d = 0;

		Time span_length() const { return d - r; }

		// A job that cannot fit inside its own window is rejected at load time.
		bool window_feasible() const { return r + p <= d; }

		bool operator==(const Job&) const = default;
	};

	// Pre-occupied machine time. Half-open: the machine is busy in [start, end).
	struct Blocked_interval {
		int machine = 0;
		Time start = 0;
		Time end = 0;

		bool operator==(const Blocked_interval&) const = default;
	};

	// A problem instance. The horizon T is always max over jobs of d
	// (floored at 1 so an empty instance still has a nonempty timeline),
	// and blocked intervals are clipped to [0, T].
	struct Instance {
		std::vector<Job> jobs;
		int machines = 1;
		Time horizon = 1;
		std::vector<Blocked_interval> blocked;

		Instance() = default;

		Instance(std::vector<Job> jobs_in, int machine_count,
		         std::vector<Blocked_interval> blocked_in = {})
			: jobs(std::move(jobs_in)), machines(machine_count)
		{
			if (machines < 1)
				throw std::invalid_argument("Instance: machine count must be at least 1");
			std::set<Job_id> seen;
			horizon = 1;
			for (const Job& j : jobs) {
				if (j.p < 1)
					throw std::invalid_argument(field_error("processing time", j));
				if (j.r < 0)
					throw std::invalid_argument(field_error("release time", j));
				if (!j.window_feasible())
					throw std::invalid_argument(field_error("window", j));
				if (!seen.insert(j.id).second)
					throw std::invalid_argument("Instance: duplicate job id " + std::to_string(j.id));
				horizon = std::max(horizon, j.d);
			}
			for (Blocked_interval b : blocked_in) {
				if (b.machine < 0 || b.machine >= machines)
					throw std::invalid_argument("Instance: blocked interval on machine "
						+ std::to_string(b.machine) + " out of range");
				if (b.start < 0 || b.start >= b.end)
					throw std::invalid_argument("Instance: blocked interval must satisfy 0 <= start < end");
				b.end = std::min(b.end, horizon);
				if (b.start >= b.end)
					continue;
				blocked.push_back(b);
			}
			std::sort(blocked.begin(), blocked.end(), [](const Blocked_interval& a, const Blocked_interval& b) {
				return a.machine != b.machine ? a.machine < b.machine : a.start < b.start;
			});
			for (std::size_t i = 1; i < blocked.size(); i++) {
				if (blocked[i - 1].machine == blocked[i].machine
				    && blocked[i].start < blocked[i - 1].end)
					throw std::invalid_argument("Instance: overlapping blocked intervals on machine "
						+ std::to_string(blocked[i].machine));
			}
		}

		// Distinct processing times, ascending. Their count is the value c
		// that drives the slack-time bound n^(c+1).
		std::vector<Time> distinct_sizes() const
		{
			std::vector<Time> sizes;
			sizes.reserve(jobs.size());
			for (const Job& j : jobs)
				sizes.push_back(j.p);
			std::sort(sizes.begin(), sizes.end());
			sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
			return sizes;
		}

		std::size_t size_class_count() const
		{
			return distinct_sizes().size();
		}

		const Job* find_job(Job_id id) const
		{
			for (const Job& j : jobs)
				if (j.id == id)
					return &j;
			return nullptr;
		}

		std::vector<Blocked_interval> blocks_on(int machine) const
		{
			std::vector<Blocked_interval> out;
			for (const Blocked_interval& b : blocked)
				if (b.machine == machine)
					out.push_back(b);
			return out;
		}

	private:
		static std::string field_error(const char* what, const Job& j)
		{
			std::ostringstream msg;
			msg << "Instance: job " << j.id << " has an invalid " << what
			    << " (p=" << j.p << ", r=" << j.r << ", d=" << j.d << ")";
			return msg.str();
		}
	};

	struct Placement {
		int machine = 0;
		Time start = 0;

		bool operator==(const Placement&) const = default;
	};

	// A (partial) schedule: which jobs run, where and when. Kept sorted by job
	// id so iteration order and serialized output are deterministic.
	struct Schedule {
		std::map<Job_id, Placement> assignments;

		std::int64_t value() const { return static_cast<std::int64_t>(assignments.size()); }

		void assign(Job_id job, int machine, Time start)
		{
			assignments[job] = Placement{machine, start};
		}

		bool operator==(const Schedule&) const = default;
	};

	struct Validation_report {
		bool feasible = true;
		std::int64_t throughput = 0;
		std::vector<std::string> violations;
	};

	// Earliest start s >= from such that [s, s+p) avoids every interval in
	// blocks. blocks must be sorted by start and pairwise disjoint.
	inline Time earliest_block_free(const std::vector<Blocked_interval>& blocks, Time from, Time p)
	{
		Time s = from;
		for (const Blocked_interval& b : blocks) {
			if (b.end <= s)
				continue;
			if (s + p <= b.start)
				break;
			s = b.end;
		}
		return s;
	}

	// Checks one schedule against one instance. Pure: never mutates either
	// argument, and reports every violation it finds rather than stopping at
	// the first.
	inline Validation_report validate_schedule(const Instance& inst, const Schedule& sched)
	{
		Validation_report report;
		report.throughput = sched.value();

		struct Run {
			Time start;
			Time end;
			Job_id job;
		};
		std::vector<std::vector<Run>> per_machine(static_cast<std::size_t>(inst.machines));

		for (const auto& [id, place] : sched.assignments) {
			const Job* j = inst.find_job(id);
			std::ostringstream msg;
			if (j == nullptr) {
				msg << "job " << id << " is not part of the instance";
				report.violations.push_back(msg.str());
				continue;
			}
			if (place.machine < 0 || place.machine >= inst.machines) {
				msg << "job " << id << " runs on machine " << place.machine
				    << " but the instance has " << inst.machines;
				report.violations.push_back(msg.str());
				continue;
			}
			if (place.start < j->r) {
				msg << "job " << id << " starts at " << place.start
				    << " before its release " << j->r;
				report.violations.push_back(msg.str());
			}
			if (place.start + j->p > j->d) {
				msg << "job " << id << " finishes at " << place.start + j->p
				    << " after its deadline " << j->d;
				report.violations.push_back(msg.str());
			}
			for (const Blocked_interval& b : inst.blocked) {
				if (b.machine == place.machine
				    && place.start < b.end && b.start < place.start + j->p) {
					std::ostringstream bmsg;
					bmsg << "job " << id << " overlaps blocked interval ["
					     << b.start << ", " << b.end << ") on machine " << b.machine;
					report.violations.push_back(bmsg.str());
				}
			}
			per_machine[static_cast<std::size_t>(place.machine)]
				.push_back(Run{place.start, place.start + j->p, id});
		}

		for (auto& runs : per_machine) {
			std::sort(runs.begin(), runs.end(), [](const Run& a, const Run& b) {
				return a.start != b.start ? a.start < b.start : a.job < b.job;
			});
			for (std::size_t i = 1; i < runs.size(); i++) {
				if (runs[i].start < runs[i - 1].end) {
					std::ostringstream msg;
					msg << "jobs " << runs[i - 1].job << " and " << runs[i].job
					    << " overlap on the same machine";
					report.violations.push_back(msg.str());
				}
			}
		}

		report.feasible = report.violations.empty();
		return report;
	}

	// Shifts every run of a feasible schedule as far left as it can go without
	// changing the machine or the relative order of jobs on it. Afterwards
	// every start time is a release time, the finish time of the previous job
	// on the machine, or the end of a blocked interval.
	inline Schedule left_shift(const Instance& inst, const Schedule& sched)
	{
		Validation_report check = validate_schedule(inst, sched);
		if (!check.feasible)
			throw std::invalid_argument("left_shift: input schedule is infeasible: "
				+ (check.violations.empty() ? std::string("unknown") : check.violations.front()));

		Schedule shifted;
		for (int machine = 0; machine < inst.machines; machine++) {
			std::vector<std::pair<Time, Job_id>> order;
			for (const auto& [id, place] : sched.assignments)
				if (place.machine == machine)
					order.emplace_back(place.start, id);
			std::sort(order.begin(), order.end());

			std::vector<Blocked_interval> blocks = inst.blocks_on(machine);
			Time free_at = 0;
			for (const auto& [old_start, id] : order) {
				const Job& j = *inst.find_job(id);
				Time s = earliest_block_free(blocks, std::max(j.r, free_at), j.p);
				shifted.assign(id, machine, s);
				free_at = s + j.p;
			}
		}
		return shifted;
	}

}

#endif
