#ifndef THROUGHPUT_EXACT_HPP
#define THROUGHPUT_EXACT_HPP

#include <chrono>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "core.hpp"

namespace throughput {

	struct Oracle_limits {
		std::size_t max_jobs = 12;
		// 0 means no time limit.
		std::int64_t time_budget_ms = 0;
	};

	struct Exact_result {
		std::int64_t value = 0;
		Schedule schedule;
		bool proven_optimal = true;
	};

	namespace detail {

		// Branch-and-bound over left-shifted schedules. A state is the next
		// free time of every machine plus the set of jobs still undecided.
		// The machine that frees earliest either receives one more job at its
		// earliest feasible start or is closed for good; per size class only
		// the feasible job with the earliest deadline is tried, since any
		// schedule that runs another can be rewritten to run that one.
		class Exact_search {
		public:
			Exact_search(const Instance& inst, const Oracle_limits& limits)
				: inst(inst), limits(limits)
			{
				for (int machine = 0; machine < inst.machines; machine++)
					machine_blocks.push_back(inst.blocks_on(machine));
				closed_sentinel = inst.horizon + 1;
				if (limits.time_budget_ms > 0)
					deadline = std::chrono::steady_clock::now()
						+ std::chrono::milliseconds(limits.time_budget_ms);
			}

			Exact_result run()
			{
				Exact_result result;
				if (inst.jobs.size() > 63)
					throw std::invalid_argument("exact_solve: more than 63 jobs");
				std::vector<Time> free_at(static_cast<std::size_t>(inst.machines), 0);
				std::uint64_t all = inst.jobs.size() == 0
					? 0 : (~0ull >> (64 - inst.jobs.size()));
				try {
					result.value = evaluate(free_at, all);
					replay(free_at, all, result.schedule);
					result.proven_optimal = true;
				} catch (const Budget_exhausted&) {
					result.value = incumbent_value;
					result.schedule = incumbent;
					result.proven_optimal = false;
				}
				return result;
			}

		private:
			struct Budget_exhausted {};

			struct Branch {
				bool close;
				std::size_t job;
				Time start;
			};

			const Instance& inst;
			const Oracle_limits& limits;
			std::vector<std::vector<Blocked_interval>> machine_blocks;
			Time closed_sentinel = 0;
			std::map<std::pair<std::vector<Time>, std::uint64_t>, std::int64_t> memo;
			std::chrono::steady_clock::time_point deadline{};
			std::uint64_t nodes = 0;
			std::int64_t incumbent_value = 0;
			Schedule incumbent;
			std::vector<std::tuple<Job_id, int, Time>> trail;

			void tick()
			{
				nodes++;
				if (limits.time_budget_ms > 0 && (nodes & 1023u) == 0
				    && std::chrono::steady_clock::now() > deadline)
					throw Budget_exhausted();
			}

			int earliest_machine(const std::vector<Time>& free_at) const
			{
				int best = -1;
				for (int machine = 0; machine < inst.machines; machine++) {
					Time f = free_at[static_cast<std::size_t>(machine)];
					if (f >= closed_sentinel)
						continue;
					if (best < 0 || f < free_at[static_cast<std::size_t>(best)])
						best = machine;
				}
				return best;
			}

			// A feasible same-size job with an earlier deadline could always
			// be swapped into this slot, so trying this job too is redundant.
			bool dominated(std::size_t job, Time start, std::uint64_t remaining) const
			{
				const Job& j = inst.jobs[job];
				for (std::size_t other = 0; other < inst.jobs.size(); other++) {
					if (other == job || !(remaining & (1ull << other)))
						continue;
					const Job& o = inst.jobs[other];
					if (o.p != j.p || o.r > start || start + o.p > o.d)
						continue;
					if (o.d < j.d || (o.d == j.d && o.id < j.id))
						return true;
				}
				return false;
			}

			std::vector<Branch> branches(const std::vector<Time>& free_at, std::uint64_t remaining) const
			{
				std::vector<Branch> out;
				int machine = earliest_machine(free_at);
				if (machine < 0)
					return out;
				Time f = free_at[static_cast<std::size_t>(machine)];
				for (std::size_t job = 0; job < inst.jobs.size(); job++) {
					if (!(remaining & (1ull << job)))
						continue;
					const Job& j = inst.jobs[job];
					Time s = earliest_block_free(machine_blocks[static_cast<std::size_t>(machine)],
						std::max(j.r, f), j.p);
					if (s + j.p > j.d)
						continue;
					if (dominated(job, s, remaining))
						continue;
					out.push_back(Branch{false, job, s});
				}
				out.push_back(Branch{true, 0, 0});
				return out;
			}

			std::int64_t evaluate(std::vector<Time> free_at, std::uint64_t remaining)
			{
				tick();
				if (static_cast<std::int64_t>(trail.size()) > incumbent_value)
					snapshot();
				int machine = earliest_machine(free_at);
				if (machine < 0 || remaining == 0)
					return 0;
				auto key = std::make_pair(free_at, remaining);
				auto found = memo.find(key);
				if (found != memo.end())
					return found->second;

				std::int64_t remaining_count = 0;
				for (std::uint64_t bits = remaining; bits != 0; bits &= bits - 1)
					remaining_count++;

				std::int64_t best = 0;
				for (const Branch& b : branches(free_at, remaining)) {
					std::int64_t value;
					if (b.close) {
						Time saved = free_at[static_cast<std::size_t>(machine)];
						free_at[static_cast<std::size_t>(machine)] = closed_sentinel;
						value = evaluate(free_at, remaining);
						free_at[static_cast<std::size_t>(machine)] = saved;
					} else {
						const Job& j = inst.jobs[b.job];
						Time saved = free_at[static_cast<std::size_t>(machine)];
						free_at[static_cast<std::size_t>(machine)] = b.start + j.p;
						trail.emplace_back(j.id, machine, b.start);
						value = 1 + evaluate(free_at, remaining & ~(1ull << b.job));
						trail.pop_back();
						free_at[static_cast<std::size_t>(machine)] = saved;
					}
					best = std::max(best, value);
					if (best == remaining_count)
						break;
				}
				memo.emplace(std::move(key), best);
				return best;
			}

			void snapshot()
			{
				incumbent_value = static_cast<std::int64_t>(trail.size());
				incumbent = Schedule{};
				for (const auto& [id, machine, start] : trail)
					incumbent.assign(id, machine, start);
			}

			void replay(std::vector<Time> free_at, std::uint64_t remaining, Schedule& sched)
			{
				while (true) {
					int machine = earliest_machine(free_at);
					if (machine < 0 || remaining == 0)
						return;
					std::int64_t target = evaluate(free_at, remaining);
					if (target == 0)
						return;
					bool advanced = false;
					for (const Branch& b : branches(free_at, remaining)) {
						if (b.close) {
							std::vector<Time> next = free_at;
							next[static_cast<std::size_t>(machine)] = closed_sentinel;
							if (evaluate(next, remaining) == target) {
								free_at = std::move(next);
								advanced = true;
								break;
							}
						} else {
							const Job& j = inst.jobs[b.job];
							std::vector<Time> next = free_at;
							next[static_cast<std::size_t>(machine)] = b.start + j.p;
							if (1 + evaluate(next, remaining & ~(1ull << b.job)) == target) {
								sched.assign(j.id, machine, b.start);
								free_at = std::move(next);
								remaining &= ~(1ull << b.job);
								advanced = true;
								break;
							}
						}
					}
					if (!advanced)
						throw std::logic_error("exact_solve: replay failed to reproduce the optimum");
				}
			}
		};

	}

	// Optimal throughput by exhaustive search. Meant for small instances:
	// refuses more than limits.max_jobs jobs unless a time budget is set, in
	// which case it returns the best schedule found so far with
	// proven_optimal=false once the budget runs out.
	inline Exact_result exact_solve(const Instance& inst, const Oracle_limits& limits = {})
	{
		if (inst.jobs.size() > limits.max_jobs && limits.time_budget_ms <= 0)
			throw std::invalid_argument("exact_solve: "
				+ std::to_string(inst.jobs.size()) + " jobs exceed the limit of "
				+ std::to_string(limits.max_jobs) + " and no time budget is set");
		detail::Exact_search search(inst, limits);
		return search.run();
	}

	struct Bounded_search_result {
		std::int64_t value = 0;
		Schedule schedule;
		// True when the search space was exhausted: value is then the true
		// optimum among schedules of at most size_cap jobs.
		bool complete = true;
	};

	namespace detail {

		// Depth-capped variant of the same search, without memoization: finds
		// the best schedule that uses at most size_cap jobs. If the returned
		// value is below the cap and the search completed, that value is the
		// true optimum, because schedulable job sets are subset-closed.
		class Bounded_search {
		public:
			Bounded_search(const Instance& inst, std::int64_t size_cap, std::uint64_t node_budget)
				: inst(inst), size_cap(size_cap), node_budget(node_budget)
			{
				for (int machine = 0; machine < inst.machines; machine++)
					machine_blocks.push_back(inst.blocks_on(machine));
				closed_sentinel = inst.horizon + 1;
			}

			Bounded_search_result run()
			{
				if (inst.jobs.size() > 63)
					throw std::invalid_argument("bounded_best: more than 63 jobs");
				std::vector<Time> free_at(static_cast<std::size_t>(inst.machines), 0);
				std::uint64_t all = inst.jobs.size() == 0
					? 0 : (~0ull >> (64 - inst.jobs.size()));
				try {
					descend(free_at, all);
				} catch (const Stop&) {
				}
				result.complete = !exhausted;
				return result;
			}

		private:
			struct Stop {};

			const Instance& inst;
			std::int64_t size_cap;
			std::uint64_t node_budget;
			std::vector<std::vector<Blocked_interval>> machine_blocks;
			Time closed_sentinel = 0;
			std::uint64_t nodes = 0;
			bool exhausted = false;
			std::vector<std::tuple<Job_id, int, Time>> trail;
			std::set<std::pair<std::vector<Time>, std::uint64_t>> visited;
			Bounded_search_result result;

			void record()
			{
				if (static_cast<std::int64_t>(trail.size()) > result.value) {
					result.value = static_cast<std::int64_t>(trail.size());
					result.schedule = Schedule{};
					for (const auto& [id, machine, start] : trail)
						result.schedule.assign(id, machine, start);
				}
			}

			void descend(std::vector<Time>& free_at, std::uint64_t remaining)
			{
				if (++nodes > node_budget) {
					exhausted = true;
					throw Stop();
				}
				record();
				if (static_cast<std::int64_t>(trail.size()) >= size_cap)
					return;
				int machine = -1;
				for (int candidate = 0; candidate < inst.machines; candidate++) {
					Time f = free_at[static_cast<std::size_t>(candidate)];
					if (f >= closed_sentinel)
						continue;
					if (machine < 0 || f < free_at[static_cast<std::size_t>(machine)])
						machine = candidate;
				}
				if (machine < 0 || remaining == 0)
					return;
				if (!visited.emplace(free_at, remaining).second)
					return;
				Time f = free_at[static_cast<std::size_t>(machine)];
				for (std::size_t job = 0; job < inst.jobs.size(); job++) {
					if (!(remaining & (1ull << job)))
						continue;
					const Job& j = inst.jobs[job];
					Time s = earliest_block_free(machine_blocks[static_cast<std::size_t>(machine)],
						std::max(j.r, f), j.p);
					if (s + j.p > j.d)
						continue;
					free_at[static_cast<std::size_t>(machine)] = s + j.p;
					trail.emplace_back(j.id, machine, s);
					descend(free_at, remaining & ~(1ull << job));
					trail.pop_back();
					free_at[static_cast<std::size_t>(machine)] = f;
				}
				free_at[static_cast<std::size_t>(machine)] = closed_sentinel;
				descend(free_at, remaining);
				free_at[static_cast<std::size_t>(machine)] = f;
			}
		};

	}

	inline Bounded_search_result bounded_best(const Instance& inst, std::int64_t size_cap,
	                                          std::uint64_t node_budget = 20000000)
	{
		detail::Bounded_search search(inst, size_cap, node_budget);
		return search.run();
	}

	struct Edf_result {
		bool feasible = true;
		Schedule schedule;
	};

	// Earliest-deadline-first simulation for instances where every job has
	// the same processing time. Whenever a machine frees, it runs the
	// released, unscheduled job with the earliest deadline if that job can
	// still finish on this machine; a released job that can no longer finish
	// is abandoned. Feasible means every job got scheduled.
	inline Edf_result edf_uniform_feasible(const Instance& inst)
	{
		if (inst.size_class_count() > 1)
			throw std::invalid_argument("edf_uniform_feasible: processing times are not all equal");

		Edf_result result;
		std::vector<std::vector<Blocked_interval>> machine_blocks;
		for (int machine = 0; machine < inst.machines; machine++)
			machine_blocks.push_back(inst.blocks_on(machine));

		std::vector<const Job*> pending;
		for (const Job& j : inst.jobs)
			pending.push_back(&j);
		std::sort(pending.begin(), pending.end(), [](const Job* a, const Job* b) {
			return a->d != b->d ? a->d < b->d : a->id < b->id;
		});

		std::vector<Time> free_at(static_cast<std::size_t>(inst.machines), 0);
		Time closed = inst.horizon + 1;
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
			Time f = free_at[static_cast<std::size_t>(machine)];

			auto released = pending.end();
			for (auto it = pending.begin(); it != pending.end(); ++it)
				if ((*it)->r <= f) {
					released = it;
					break;
				}
			if (released == pending.end()) {
				Time next_release = closed;
				for (const Job* j : pending)
					next_release = std::min(next_release, j->r);
				free_at[static_cast<std::size_t>(machine)] =
					next_release > f ? next_release : closed;
				continue;
			}
			const Job* j = *released;
			Time s = earliest_block_free(machine_blocks[static_cast<std::size_t>(machine)],
				std::max(j->r, f), j->p);
			if (s + j->p <= j->d) {
				result.schedule.assign(j->id, machine, s);
				free_at[static_cast<std::size_t>(machine)] = s + j->p;
			} else {
				result.feasible = false;
			}
			pending.erase(released);
		}
		if (!pending.empty())
			result.feasible = false;
		return result;
	}

}

#endif
