#ifndef THROUGHPUT_KNAPSACK_HPP
#define THROUGHPUT_KNAPSACK_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "core.hpp"

namespace throughput {

	// Multiple knapsack with unit profits: pack as many items as possible
	// into knapsacks of fixed capacities. Item sizes and capacities are
	// positive integers.
	struct Mk_problem {
		std::vector<Time> item_sizes;
		std::vector<Time> capacities;
	};

	struct Mk_result {
		std::int64_t count = 0;
		// assignment[i] is the knapsack of item i, or -1 if the item is left
		// out.
		std::vector<int> assignment;
	};

	struct Mk_budget_exceeded : std::runtime_error {
		using std::runtime_error::runtime_error;
	};

	namespace detail {

		inline void check_mk_problem(const Mk_problem& prob)
		{
			for (Time s : prob.item_sizes)
				if (s < 1)
					throw std::invalid_argument("multiple knapsack: item sizes must be positive");
			for (Time c : prob.capacities)
				if (c < 0)
					throw std::invalid_argument("multiple knapsack: capacities must not be negative");
		}

	}

	// Exact maximum-cardinality packing. Dynamic program over residual
	// capacity vectors, one item at a time in descending size order, with
	// dominance pruning: a state is dropped when another state packs at
	// least as many items and leaves at least as much room in every
	// knapsack. The reachable state space is bounded by the product of
	// (capacity + 1) over all knapsacks; instances above the state budget
	// are rejected up front.
	inline Mk_result mk_exact(const Mk_problem& prob, std::uint64_t state_budget = 100000000)
	{
		detail::check_mk_problem(prob);
		std::size_t n = prob.item_sizes.size();
		std::size_t k = prob.capacities.size();
		if (n == 0 || k == 0)
			return Mk_result{0, std::vector<int>(n, -1)};

		std::uint64_t space = 1;
		for (Time c : prob.capacities) {
			if (space > state_budget / (static_cast<std::uint64_t>(c) + 1))
				throw Mk_budget_exceeded("multiple knapsack: state space exceeds budget of "
					+ std::to_string(state_budget) + " states");
			space *= static_cast<std::uint64_t>(c) + 1;
		}

		std::vector<std::size_t> order(n);
		std::iota(order.begin(), order.end(), 0);
		std::sort(order.begin(), order.end(), [&prob](std::size_t a, std::size_t b) {
			Time sa = prob.item_sizes[a];
			Time sb = prob.item_sizes[b];
			return sa != sb ? sa > sb : a < b;
		});

		struct State {
			std::vector<Time> room;
			std::int64_t count;
			std::size_t parent;
			int decision;
		};

		// layers[t] holds the undominated states after deciding the first t
		// items of the sorted order.
		std::vector<std::vector<State>> layers;
		layers.push_back({State{prob.capacities, 0, 0, -1}});

		auto dominates = [](const State& a, const State& b) {
			if (a.count < b.count)
				return false;
			for (std::size_t i = 0; i < a.room.size(); i++)
				if (a.room[i] < b.room[i])
					return false;
			return true;
		};

		for (std::size_t t = 0; t < n; t++) {
			Time size = prob.item_sizes[order[t]];
			const std::vector<State>& prev = layers.back();
			std::vector<State> next;
			for (std::size_t pi = 0; pi < prev.size(); pi++) {
				const State& state = prev[pi];
				next.push_back(State{state.room, state.count, pi, -1});
				for (std::size_t ki = 0; ki < k; ki++) {
					if (state.room[ki] < size)
						continue;
					State packed{state.room, state.count + 1, pi, static_cast<int>(ki)};
					packed.room[ki] -= size;
					next.push_back(std::move(packed));
				}
			}
			if (next.size() > state_budget)
				throw Mk_budget_exceeded("multiple knapsack: state count exceeds budget");

			std::sort(next.begin(), next.end(), [](const State& a, const State& b) {
				if (a.count != b.count)
					return a.count > b.count;
				return a.room > b.room;
			});
			std::vector<State> pruned;
			for (State& cand : next) {
				bool dominated = false;
				for (const State& keep : pruned) {
					if (dominates(keep, cand)) {
						dominated = true;
						break;
					}
				}
				if (!dominated)
					pruned.push_back(std::move(cand));
			}
			layers.push_back(std::move(pruned));
		}

		std::size_t best = 0;
		for (std::size_t i = 1; i < layers.back().size(); i++)
			if (layers.back()[i].count > layers.back()[best].count)
				best = i;

		Mk_result result;
		result.assignment.assign(n, -1);
		result.count = layers.back()[best].count;
		std::size_t at = best;
		for (std::size_t t = n; t-- > 0;) {
			const State& state = layers[t + 1][at];
			result.assignment[order[t]] = state.decision;
			at = state.parent;
		}
		return result;
	}

	namespace detail {

		// Number of items a single knapsack of the given capacity can hold
		// when filled greedily with the smallest items first. This is the
		// maximum cardinality any packing of that knapsack alone can reach.
		inline std::int64_t greedy_capacity_count(const std::vector<Time>& sorted_sizes, Time capacity)
		{
			std::int64_t count = 0;
			Time used = 0;
			for (Time s : sorted_sizes) {
				if (used + s > capacity)
					break;
				used += s;
				count++;
			}
			return count;
		}

		// Largest value floor((1+eps)^j) that is at most capacity.
		inline Time rounded_capacity(Time capacity, double eps)
		{
			long double step = 1.0L + static_cast<long double>(eps);
			long double power = 1.0L;
			Time best = 1;
			while (true) {
				Time floored = static_cast<Time>(power);
				if (floored > capacity)
					break;
				best = std::max(best, floored);
				power *= step;
				if (power > 4.0L * static_cast<long double>(capacity))
					break;
			}
			return best;
		}

	}

	// Approximate packing that rounds generous capacities down to a power of
	// (1+eps) before solving exactly. A knapsack is rounded only when it
	// could hold at least ceil(1/eps^2) items on its own; losing an eps
	// fraction of such a knapsack costs at most an eps fraction of its
	// items, so the result keeps at least a (1 - 2*eps) fraction of the
	// optimum. Knapsacks below the threshold keep their exact capacity.
	inline Mk_result mk_rounded(const Mk_problem& prob, double eps,
	                            std::uint64_t state_budget = 100000000)
	{
		if (!(eps > 0.0) || eps > 0.5)
			throw std::invalid_argument("mk_rounded: eps must lie in (0, 1/2]");
		detail::check_mk_problem(prob);

		std::vector<Time> sorted_sizes = prob.item_sizes;
		std::sort(sorted_sizes.begin(), sorted_sizes.end());
		std::int64_t alpha = static_cast<std::int64_t>(std::ceil(1.0 / (eps * eps)));

		Mk_problem rounded = prob;
		for (Time& capacity : rounded.capacities) {
			if (detail::greedy_capacity_count(sorted_sizes, capacity) >= alpha)
				capacity = detail::rounded_capacity(capacity, eps);
		}
		return mk_exact(rounded, state_budget);
	}

}

#endif
