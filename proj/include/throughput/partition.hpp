#ifndef THROUGHPUT_PARTITION_HPP
#define THROUGHPUT_PARTITION_HPP

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "core.hpp"

namespace throughput {

	// Randomly shifted hierarchical partition of [0, T]. Level i tiles the
	// horizon with intervals of nominal length T/q^(i+1); every level refines
	// the one above it, and the random offset r0 shifts the whole grid so the
	// first and last intervals of a level may be shorter. Timelines whose
	// length is not a power of q keep the tiling exact by letting the last
	// interval of a level absorb the remainder.
	struct Hierarchical_partition {
		Time horizon = 1;
		int q = 2;
		Time offset = 0;
		// boundaries[i] is the sorted boundary list of level i, starting at 0
		// and ending at horizon.
		std::vector<std::vector<Time>> boundaries;

		int deepest_level() const
		{
			return static_cast<int>(boundaries.size()) - 1;
		}

		// Nominal interval length of level i, floored at one time unit. Also
		// defined past the deepest built level, where it stays 1.
		Time nominal_length(int level) const
		{
			Time length = horizon;
			for (int i = 0; i <= level; i++) {
				length /= q;
				if (length <= 1)
					return 1;
			}
			return length;
		}

		std::size_t interval_count(int level) const
		{
			return boundaries[static_cast<std::size_t>(level)].size() - 1;
		}

		std::pair<Time, Time> interval(int level, std::size_t index) const
		{
			const std::vector<Time>& b = boundaries[static_cast<std::size_t>(level)];
			return {b[index], b[index + 1]};
		}

		// Index of the level-i interval whose half-open range [a, b) contains
		// t; the horizon itself belongs to the last interval.
		std::size_t locate(int level, Time t) const
		{
			const std::vector<Time>& b = boundaries[static_cast<std::size_t>(level)];
			if (t <= b.front())
				return 0;
			if (t >= b.back())
				return b.size() - 2;
			std::size_t idx = static_cast<std::size_t>(
				std::upper_bound(b.begin(), b.end(), t) - b.begin());
			return idx - 1;
		}

		// Indices of level-i intervals that overlap [from, to] in more than a
		// point.
		std::vector<std::size_t> overlapping(int level, Time from, Time to) const
		{
			std::vector<std::size_t> out;
			for (std::size_t idx = 0; idx < interval_count(level); idx++) {
				auto [a, b] = interval(level, idx);
				if (a < to && from < b)
					out.push_back(idx);
			}
			return out;
		}
	};

	namespace detail {

		// Splits [a, b] into pieces of length `piece`. Interior intervals are
		// exact; the final piece keeps whatever remains. The first interval
		// of the timeline is split from the right instead, so the shortened
		// piece sits at the very start and everything else stays on the
		// offset grid.
		inline void split_interval(std::vector<Time>& out, Time a, Time b, Time piece, bool first_of_timeline)
		{
			out.push_back(a);
			if (piece >= b - a)
				return;
			if (first_of_timeline) {
				std::vector<Time> down;
				for (Time t = b - piece; t > a; t -= piece)
					down.push_back(t);
				for (auto it = down.rbegin(); it != down.rend(); ++it)
					out.push_back(*it);
			} else {
				for (Time t = a + piece; t < b; t += piece)
					out.push_back(t);
			}
		}

	}

	// Builds the partition for horizon T, branching factor q and offset r0.
	// stop_rule > 0 stops refining any interval that contains fewer than
	// stop_rule of the given event points (release and deadline times); such
	// intervals are carried through deeper levels unchanged. stop_rule == 0
	// refines everything down to unit length.
	inline Hierarchical_partition build_partition(Time T, int q, Time r0,
	                                              std::size_t stop_rule = 0,
	                                              const std::vector<Time>& event_points = {})
	{
		if (T < 1)
			throw std::invalid_argument("build_partition: horizon must be positive");
		if (q < 2)
			throw std::invalid_argument("build_partition: q must be at least 2");
		if (r0 < 0 || r0 > T / q)
			throw std::invalid_argument("build_partition: offset must lie in [0, T/q]");

		std::vector<Time> points = event_points;
		std::sort(points.begin(), points.end());
		points.erase(std::unique(points.begin(), points.end()), points.end());
		auto points_within = [&points](Time a, Time b) {
			auto lo = std::lower_bound(points.begin(), points.end(), a);
			auto hi = std::upper_bound(points.begin(), points.end(), b);
			return static_cast<std::size_t>(hi - lo);
		};

		Hierarchical_partition part;
		part.horizon = T;
		part.q = q;
		part.offset = r0;

		std::vector<Time> level0;
		level0.push_back(0);
		Time l0 = std::max<Time>(1, T / q);
		for (Time t = r0; t < T; t += l0)
			if (t > 0)
				level0.push_back(t);
		level0.push_back(T);
		level0.erase(std::unique(level0.begin(), level0.end()), level0.end());
		part.boundaries.push_back(level0);

		// Refinable means long enough to split and, when a stop rule is in
		// force, still busy enough to be worth splitting. An interval that
		// falls below the stop rule once never refines again.
		std::vector<char> frozen(level0.size() - 1, 0);
		if (stop_rule > 0)
			for (std::size_t idx = 0; idx + 1 < level0.size(); idx++)
				if (points_within(level0[idx], level0[idx + 1]) < stop_rule)
					frozen[idx] = 1;

		int level_cap = 1;
		{
			Time reach = std::max<Time>(1, T / q);
			while (reach > 1) {
				reach /= q;
				level_cap++;
			}
		}

		for (int level = 1; level <= level_cap; level++) {
			const std::vector<Time>& prev = part.boundaries.back();
			Time piece = part.nominal_length(level);
			std::vector<Time> next;
			std::vector<char> next_frozen;
			bool changed = false;
			for (std::size_t idx = 0; idx + 1 < prev.size(); idx++) {
				Time a = prev[idx];
				Time b = prev[idx + 1];
				std::size_t before = next.size();
				if (frozen[idx] || piece >= b - a) {
					next.push_back(a);
				} else {
					detail::split_interval(next, a, b, piece, a == 0 && r0 > 0);
					changed = changed || next.size() - before > 1;
				}
				bool parent_frozen = frozen[idx] != 0;
				for (std::size_t piece_idx = before; piece_idx < next.size(); piece_idx++) {
					Time pa = next[piece_idx];
					Time pb = piece_idx + 1 < next.size() ? next[piece_idx + 1] : b;
					bool freeze = parent_frozen
						|| (stop_rule > 0 && points_within(pa, pb) < stop_rule);
					next_frozen.push_back(freeze ? 1 : 0);
				}
			}
			next.push_back(T);
			if (!changed)
				break;
			part.boundaries.push_back(next);
			frozen = std::move(next_frozen);
		}
		return part;
	}

	inline nlohmann::ordered_json partition_to_json(const Hierarchical_partition& part)
	{
		nlohmann::ordered_json doc;
		doc["q"] = part.q;
		doc["r0"] = part.offset;
		doc["levels"] = nlohmann::ordered_json::array();
		for (const std::vector<Time>& level : part.boundaries)
			doc["levels"].push_back(level);
		return doc;
	}

	// Tree view of the partition. A node is one interval at one level; its
	// children are the intervals the next level cuts it into. An interval
	// that no deeper level subdivides is a leaf. The root is a virtual node
	// above level 0 covering the whole horizon, so the top-level combination
	// step can use the same code path as every other node.
	struct Partition_node {
		int level = -1;
		Time start = 0;
		Time end = 0;
		std::vector<std::size_t> children;

		bool leaf() const { return children.empty(); }
		Time length() const { return end - start; }
	};

	struct Node_tree {
		std::vector<Partition_node> nodes;
		std::size_t root = 0;
	};

	inline Node_tree build_node_tree(const Hierarchical_partition& part)
	{
		Node_tree tree;
		tree.nodes.push_back(Partition_node{-1, 0, part.horizon, {}});
		tree.root = 0;

		struct Work {
			std::size_t node;
			int level;
			Time start;
			Time end;
		};
		std::vector<Work> queue;

		auto sub_boundaries = [&part](int level, Time a, Time b) {
			const std::vector<Time>& all = part.boundaries[static_cast<std::size_t>(level)];
			auto lo = std::lower_bound(all.begin(), all.end(), a);
			auto hi = std::upper_bound(all.begin(), all.end(), b);
			return std::vector<Time>(lo, hi);
		};

		// Does any stored level strictly subdivide [a, b]?
		auto subdivided_below = [&part, &sub_boundaries](int level, Time a, Time b) {
			for (int deeper = level + 1; deeper <= part.deepest_level(); deeper++)
				if (sub_boundaries(deeper, a, b).size() > 2)
					return true;
			return false;
		};

		queue.push_back(Work{0, -1, 0, part.horizon});
		while (!queue.empty()) {
			Work work = queue.back();
			queue.pop_back();
			int child_level = work.level + 1;
			if (child_level > part.deepest_level())
				continue;
			if (work.level >= 0 && !subdivided_below(work.level, work.start, work.end))
				continue;
			std::vector<Time> bounds = sub_boundaries(child_level, work.start, work.end);
			for (std::size_t i = 0; i + 1 < bounds.size(); i++) {
				Partition_node child;
				child.level = child_level;
				child.start = bounds[i];
				child.end = bounds[i + 1];
				tree.nodes.push_back(child);
				std::size_t child_id = tree.nodes.size() - 1;
				tree.nodes[work.node].children.push_back(child_id);
				queue.push_back(Work{child_id, child_level, child.start, child.end});
			}
		}
		return tree;
	}

}

#endif
