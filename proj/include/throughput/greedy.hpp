#ifndef THROUGHPUT_GREEDY_HPP
#define THROUGHPUT_GREEDY_HPP

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "core.hpp"

namespace throughput {

	// Shortest-job-first list scheduling: whenever a machine is free, it runs
	// the smallest released job that can still both meet its deadline and
	// finish before the machine's next blocked interval; ties go to the
	// earlier deadline, then the lower id. Guarantees half the optimum on one
	// machine and 1 - 1/(1+1/m)^m of it on m machines.
	inline Schedule greedy_shortest_first(const Instance& inst)
	{
		Schedule sched;
		std::vector<std::vector<Blocked_interval>> machine_blocks;
		for (int machine = 0; machine < inst.machines; machine++)
			machine_blocks.push_back(inst.blocks_on(machine));

		std::vector<const Job*> pending;
		for (const Job& j : inst.jobs)
			pending.push_back(&j);
		std::sort(pending.begin(), pending.end(), [](const Job* a, const Job* b) {
			return a->id < b->id;
		});

		const Time closed = inst.horizon + 1;
		std::vector<Time> free_at(static_cast<std::size_t>(inst.machines), 0);

		while (!pending.empty()) {
			int machine = -1;
			for (int candidate = 0; candidate < inst.machines; candidate++) {
				Time f = free_at[static_cast<std::size_t>(candidate)];
				if (f >= closed)
					continue;
				if (machine < 0 || f < free_at[static_cast<std::size_t>(machine)])
					machine = candidate;
			}
			if (machine < 0)
				break;
			const std::vector<Blocked_interval>& blocks =
				machine_blocks[static_cast<std::size_t>(machine)];

			// Normalize the clock to a moment where the machine is idle.
			Time t = free_at[static_cast<std::size_t>(machine)];
			for (const Blocked_interval& b : blocks)
				if (b.start <= t && t < b.end)
					t = b.end;

			Time gap_end = std::numeric_limits<Time>::max();
			for (const Blocked_interval& b : blocks)
				if (b.start >= t) {
					gap_end = b.start;
					break;
				}

			const Job* chosen = nullptr;
			for (const Job* j : pending) {
				if (j->r > t || t + j->p > j->d || t + j->p > gap_end)
					continue;
				if (chosen == nullptr
				    || j->p < chosen->p
				    || (j->p == chosen->p && j->d < chosen->d)
				    || (j->p == chosen->p && j->d == chosen->d && j->id < chosen->id))
					chosen = j;
			}
			if (chosen != nullptr) {
				sched.assign(chosen->id, machine, t);
				free_at[static_cast<std::size_t>(machine)] = t + chosen->p;
				pending.erase(std::find(pending.begin(), pending.end(), chosen));
				continue;
			}

			Time next_event = closed;
			for (const Job* j : pending)
				if (j->r > t)
					next_event = std::min(next_event, j->r);
			for (const Blocked_interval& b : blocks)
				if (b.end > t) {
					next_event = std::min(next_event, b.end);
					break;
				}
			free_at[static_cast<std::size_t>(machine)] = next_event > t ? next_event : closed;
		}
		return sched;
	}

	struct Solver_entry {
		std::string name;
		std::function<Schedule(const Instance&)> run;
	};

	struct Best_of_result {
		Schedule schedule;
		std::string winner;
		// One entry per solver whose output failed validation; such output is
		// never allowed to win.
		std::vector<std::string> defects;
	};

	inline Best_of_result best_of(const Instance& inst, const std::vector<Solver_entry>& solvers)
	{
		if (solvers.empty())
			throw std::invalid_argument("best_of: empty solver list");
		Best_of_result result;
		std::int64_t best = -1;
		for (const Solver_entry& solver : solvers) {
			Schedule candidate = solver.run(inst);
			Validation_report report = validate_schedule(inst, candidate);
			if (!report.feasible) {
				result.defects.push_back("solver " + solver.name
					+ " produced an infeasible schedule: " + report.violations.front());
				continue;
			}
			if (candidate.value() > best) {
				best = candidate.value();
				result.schedule = std::move(candidate);
				result.winner = solver.name;
			}
		}
		return result;
	}

}

#endif
