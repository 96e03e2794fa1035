#ifndef THROUGHPUT_BASECASE_HPP
#define THROUGHPUT_BASECASE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "core.hpp"
#include "exact.hpp"

namespace throughput {

	// Solver for instances with few distinct release times, few distinct
	// deadlines and few blocked intervals. It is exact against schedules in
	// which no job runs across a straddle point, and loses at most one job
	// per straddle point against unrestricted schedules.

	struct Basecase_limits {
		int max_releases = 6;
		int max_deadlines = 6;
		int max_blocks = 6;
	};

	struct Basecase_limit_exceeded : std::invalid_argument {
		using std::invalid_argument::invalid_argument;
	};

	struct Sweep_budget_exceeded : std::runtime_error {
		using std::runtime_error::runtime_error;
	};

	// A maximal block-free stretch of one machine between two consecutive
	// straddle points.
	struct Window {
		int machine = 0;
		Time start = 0;
		Time end = 0;

		Time length() const { return end - start; }
	};

	struct Basecase_structure {
		// Sorted distinct straddle points: every release and deadline, each
		// adjusted per machine to the edge of any blocked interval covering
		// it, plus the endpoints of the blocked intervals themselves.
		std::vector<Time> straddle;
		std::vector<Window> windows;
	};

	inline Basecase_structure compute_straddle_and_windows(const Instance& inst,
	                                                       const Basecase_limits& limits = {})
	{
		std::set<Time> releases;
		std::set<Time> deadlines;
		for (const Job& j : inst.jobs) {
			releases.insert(j.r);
			deadlines.insert(j.d);
		}
		if (static_cast<int>(releases.size()) > limits.max_releases)
			throw Basecase_limit_exceeded("base case: " + std::to_string(releases.size())
				+ " distinct release times exceed the limit of " + std::to_string(limits.max_releases)
				+ "; this instance needs the hierarchical solver");
		if (static_cast<int>(deadlines.size()) > limits.max_deadlines)
			throw Basecase_limit_exceeded("base case: " + std::to_string(deadlines.size())
				+ " distinct deadlines exceed the limit of " + std::to_string(limits.max_deadlines)
				+ "; this instance needs the hierarchical solver");
		if (static_cast<int>(inst.blocked.size()) > limits.max_blocks)
			throw Basecase_limit_exceeded("base case: " + std::to_string(inst.blocked.size())
				+ " blocked intervals exceed the limit of " + std::to_string(limits.max_blocks)
				+ "; this instance needs the hierarchical solver");

		std::set<Time> points;
		for (int machine = 0; machine < inst.machines; machine++) {
			std::vector<Blocked_interval> blocks = inst.blocks_on(machine);
			for (Time r : releases) {
				Time adjusted = r;
				for (const Blocked_interval& b : blocks)
					if (b.start <= r && r < b.end)
						adjusted = b.end;
				points.insert(adjusted);
			}
			for (Time d : deadlines) {
				Time adjusted = d;
				for (const Blocked_interval& b : blocks)
					if (b.start < d && d <= b.end)
						adjusted = b.start;
				points.insert(adjusted);
			}
		}
		for (const Blocked_interval& b : inst.blocked) {
			points.insert(b.start);
			points.insert(b.end);
		}

		Basecase_structure structure;
		structure.straddle.assign(points.begin(), points.end());
		for (int machine = 0; machine < inst.machines; machine++) {
			std::vector<Blocked_interval> blocks = inst.blocks_on(machine);
			for (std::size_t i = 0; i + 1 < structure.straddle.size(); i++) {
				Time a = structure.straddle[i];
				Time b = structure.straddle[i + 1];
				bool covered = false;
				for (const Blocked_interval& block : blocks)
					if (block.start < b && a < block.end)
						covered = true;
				if (!covered)
					structure.windows.push_back(Window{machine, a, b});
			}
		}
		return structure;
	}

	enum class Basecase_mode {
		exact_sweep,
		rounded_sweep,
	};

	struct Basecase_options {
		Basecase_mode mode = Basecase_mode::exact_sweep;
		// Rounding factor of the rounded sweep, and the divisor in the
		// small-optimum threshold |straddle| / eps.
		double eps = 0.25;
		Basecase_limits limits{};
		std::int64_t small_opt_cap = 8;
		std::uint64_t small_opt_node_budget = 2000000;
		std::uint64_t sweep_transition_budget = 20000000;
	};

	struct Basecase_result {
		Schedule schedule;
		std::int64_t value = 0;
		// The search over small schedules proved this value optimal.
		bool small_opt_exact = false;
		// The value is only guaranteed against schedules in which no job
		// crosses a straddle point.
		bool no_straddle_only = false;
		// The small-schedule search was skipped or ran out of budget.
		bool small_opt_truncated = false;
	};

	namespace detail {

		// Jobs that agree on release, deadline and size are interchangeable;
		// the sweep only tracks how many of each group remain.
		struct Sweep_group {
			Time r = 0;
			Time d = 0;
			Time p = 0;
			std::vector<Job_id> ids;
		};

		inline std::vector<Sweep_group> sweep_groups(const Instance& inst)
		{
			std::map<std::tuple<Time, Time, Time>, std::vector<Job_id>> grouped;
			for (const Job& j : inst.jobs)
				grouped[{j.r, j.d, j.p}].push_back(j.id);
			std::vector<Sweep_group> groups;
			for (auto& [key, ids] : grouped) {
				std::sort(ids.begin(), ids.end());
				groups.push_back(Sweep_group{std::get<0>(key), std::get<1>(key),
				                             std::get<2>(key), std::move(ids)});
			}
			return groups;
		}

		// Per-window optimizer over group counts. Windows are handled one at
		// a time; within a window the search walks the eligible types (jobs
		// sharing release and deadline), choosing how many jobs of each size
		// to place. In rounded mode the per-type choices are restricted to
		// either at most alpha jobs in any mix, or a canonical smallest-first
		// fill of a capacity floor((1+eps)^j).
		class Sweep_solver {
		public:
			Sweep_solver(const std::vector<Sweep_group>& groups,
			             const std::vector<Window>& windows,
			             Basecase_mode mode, double eps,
			             std::uint64_t transition_budget)
				: groups_(groups), windows_(windows), mode_(mode), eps_(eps),
				  budget_(transition_budget)
			{
				std::map<std::pair<Time, Time>, std::size_t> type_of;
				for (std::size_t g = 0; g < groups_.size(); g++) {
					auto key = std::make_pair(groups_[g].r, groups_[g].d);
					auto it = type_of.find(key);
					if (it == type_of.end()) {
						type_of[key] = types_.size();
						types_.push_back({g});
					} else {
						types_[it->second].push_back(g);
					}
				}
				for (std::vector<std::size_t>& members : types_)
					std::sort(members.begin(), members.end(), [this](std::size_t a, std::size_t b) {
						return groups_[a].p != groups_[b].p
							? groups_[a].p < groups_[b].p
							: a < b;
					});
				alpha_ = static_cast<std::int64_t>(std::ceil(1.0 / (eps_ * eps_)));
				memo_.resize(windows_.size());
			}

			std::int64_t solve(std::vector<std::int32_t> counts)
			{
				counts_ = std::move(counts);
				return value_from(0);
			}

			// Group take counts per window of the optimal sweep, in the same
			// order as the window list.
			std::vector<std::vector<std::int32_t>> winning_takes()
			{
				std::vector<std::vector<std::int32_t>> takes;
				std::size_t w = 0;
				while (w < windows_.size()) {
					const Memo_entry& entry = memo_[w].at(counts_);
					takes.push_back(entry.takes);
					for (std::size_t g = 0; g < groups_.size(); g++)
						counts_[g] -= entry.takes[g];
					w++;
				}
				return takes;
			}

		private:
			struct Memo_entry {
				std::int64_t value = 0;
				std::vector<std::int32_t> takes;
			};

			const std::vector<Sweep_group>& groups_;
			const std::vector<Window>& windows_;
			Basecase_mode mode_;
			double eps_;
			std::uint64_t budget_;
			std::uint64_t transitions_ = 0;
			std::int64_t alpha_ = 0;
			std::vector<std::vector<std::size_t>> types_;
			std::vector<std::int32_t> counts_;
			std::vector<std::map<std::vector<std::int32_t>, Memo_entry>> memo_;

			bool eligible(std::size_t type, const Window& window) const
			{
				const Sweep_group& lead = groups_[types_[type][0]];
				return lead.r <= window.start && lead.d >= window.end;
			}

			std::int64_t value_from(std::size_t w)
			{
				if (w >= windows_.size())
					return 0;
				auto it = memo_[w].find(counts_);
				if (it != memo_[w].end())
					return it->second.value;

				std::vector<std::size_t> open_types;
				for (std::size_t t = 0; t < types_.size(); t++)
					if (eligible(t, windows_[w]))
						open_types.push_back(t);

				Memo_entry best;
				best.value = -1;
				std::vector<std::int32_t> take(groups_.size(), 0);
				explore_types(w, open_types, 0, windows_[w].length(), 0, take, best);
				memo_[w][counts_] = best;
				return best.value;
			}

			void explore_types(std::size_t w, const std::vector<std::size_t>& open_types,
			                   std::size_t type_pos, Time budget, std::int64_t taken,
			                   std::vector<std::int32_t>& take, Memo_entry& best)
			{
				if (type_pos == open_types.size()) {
					if (++transitions_ > budget_)
						throw Sweep_budget_exceeded("base case sweep: transition budget of "
							+ std::to_string(budget_) + " exhausted");
					for (std::size_t g = 0; g < groups_.size(); g++)
						counts_[g] -= take[g];
					std::int64_t value = taken + value_from(w + 1);
					for (std::size_t g = 0; g < groups_.size(); g++)
						counts_[g] += take[g];
					if (value > best.value) {
						best.value = value;
						best.takes = take;
					}
					return;
				}
				std::size_t type = open_types[type_pos];
				for (const std::vector<std::int32_t>& option : type_options(type, budget)) {
					Time used = 0;
					std::int64_t count = 0;
					for (std::size_t i = 0; i < option.size(); i++) {
						used += static_cast<Time>(option[i]) * groups_[types_[type][i]].p;
						count += option[i];
					}
					if (used > budget)
						continue;
					for (std::size_t i = 0; i < option.size(); i++)
						take[types_[type][i]] = option[i];
					explore_types(w, open_types, type_pos + 1, budget - used, taken + count, take, best);
					for (std::size_t i = 0; i < option.size(); i++)
						take[types_[type][i]] = 0;
				}
			}

			// All take vectors considered for one type inside one window of
			// the given length. Exact mode allows anything that fits; rounded
			// mode allows arbitrary mixes of at most alpha jobs plus the
			// canonical smallest-first fill of each capacity floor((1+eps)^j)
			// up to the window length.
			std::vector<std::vector<std::int32_t>> type_options(std::size_t type, Time budget)
			{
				const std::vector<std::size_t>& members = types_[type];
				std::vector<std::vector<std::int32_t>> options;
				std::set<std::vector<std::int32_t>> seen;
				std::vector<std::int32_t> current(members.size(), 0);

				std::int64_t cardinality_cap = mode_ == Basecase_mode::exact_sweep
					? std::numeric_limits<std::int64_t>::max()
					: alpha_;
				std::function<void(std::size_t, Time, std::int64_t)> combos =
					[&](std::size_t pos, Time room, std::int64_t cards) {
						if (pos == members.size()) {
							if (++transitions_ > budget_)
								throw Sweep_budget_exceeded("base case sweep: transition budget of "
									+ std::to_string(budget_) + " exhausted");
							if (seen.insert(current).second)
								options.push_back(current);
							return;
						}
						const Sweep_group& group = groups_[members[pos]];
						std::int32_t most = static_cast<std::int32_t>(std::min<std::int64_t>(
							counts_[members[pos]],
							std::min<std::int64_t>(room / group.p, cards)));
						for (std::int32_t t = 0; t <= most; t++) {
							current[pos] = t;
							combos(pos + 1, room - static_cast<Time>(t) * group.p, cards - t);
							current[pos] = 0;
						}
					};
				combos(0, budget, cardinality_cap);

				if (mode_ == Basecase_mode::rounded_sweep) {
					long double step = 1.0L + static_cast<long double>(eps_);
					long double power = 1.0L;
					while (true) {
						Time capacity = static_cast<Time>(power);
						if (capacity > budget)
							break;
						std::vector<std::int32_t> fill(members.size(), 0);
						Time room = capacity;
						for (std::size_t i = 0; i < members.size(); i++) {
							const Sweep_group& group = groups_[members[i]];
							std::int32_t fits = static_cast<std::int32_t>(std::min<std::int64_t>(
								counts_[members[i]], room / group.p));
							fill[i] = fits;
							room -= static_cast<Time>(fits) * group.p;
						}
						if (seen.insert(fill).second)
							options.push_back(fill);
						power *= step;
					}
				}
				return options;
			}
		};

	}

	inline Basecase_result solve_basecase(const Instance& inst, const Basecase_options& options = {})
	{
		if (!(options.eps > 0.0) || options.eps >= 1.0)
			throw std::invalid_argument("solve_basecase: eps must lie in (0, 1)");
		Basecase_structure structure = compute_straddle_and_windows(inst, options.limits);

		Basecase_result result;
		if (inst.jobs.empty()) {
			result.small_opt_exact = true;
			return result;
		}

		// When the optimum is small, a direct bounded search settles the
		// instance exactly, straddling schedules included.
		std::int64_t straddle_count = static_cast<std::int64_t>(structure.straddle.size());
		std::int64_t threshold = static_cast<std::int64_t>(
			std::ceil(static_cast<double>(straddle_count) / options.eps));
		std::int64_t cap = std::min(options.small_opt_cap, threshold - 1);
		bool have_probe = false;
		Bounded_search_result probe;
		if (cap >= 1 && inst.jobs.size() <= 63) {
			probe = bounded_best(inst, static_cast<std::size_t>(cap) + 1,
			                     options.small_opt_node_budget);
			have_probe = true;
			if (probe.complete && probe.value <= cap) {
				result.schedule = probe.schedule;
				result.value = probe.value;
				result.small_opt_exact = true;
				return result;
			}
			result.small_opt_truncated = !probe.complete;
		} else {
			result.small_opt_truncated = true;
		}

		std::vector<detail::Sweep_group> groups = detail::sweep_groups(inst);
		std::vector<std::int32_t> counts;
		counts.reserve(groups.size());
		for (const detail::Sweep_group& g : groups)
			counts.push_back(static_cast<std::int32_t>(g.ids.size()));

		detail::Sweep_solver solver(groups, structure.windows, options.mode,
		                            options.eps, options.sweep_transition_budget);
		std::int64_t sweep_value = solver.solve(counts);
		std::vector<std::vector<std::int32_t>> takes = solver.winning_takes();

		Schedule sweep_schedule;
		std::vector<std::size_t> consumed(groups.size(), 0);
		for (std::size_t w = 0; w < structure.windows.size(); w++) {
			const Window& window = structure.windows[w];
			std::vector<std::size_t> chosen;
			for (std::size_t g = 0; g < groups.size(); g++)
				if (takes[w][g] > 0)
					chosen.push_back(g);
			std::sort(chosen.begin(), chosen.end(), [&groups](std::size_t a, std::size_t b) {
				const detail::Sweep_group& ga = groups[a];
				const detail::Sweep_group& gb = groups[b];
				if (ga.d != gb.d)
					return ga.d < gb.d;
				if (ga.r != gb.r)
					return ga.r < gb.r;
				return ga.p < gb.p;
			});
			Time at = window.start;
			for (std::size_t g : chosen) {
				for (std::int32_t i = 0; i < takes[w][g]; i++) {
					sweep_schedule.assign(groups[g].ids[consumed[g]++], window.machine, at);
					at += groups[g].p;
				}
			}
		}

		result.schedule = sweep_schedule;
		result.value = sweep_value;
		result.no_straddle_only = true;
		if (have_probe && probe.value > result.value) {
			result.schedule = probe.schedule;
			result.value = probe.value;
		}
		return result;
	}

}

#endif
