#ifndef THROUGHPUT_DP_HPP
#define THROUGHPUT_DP_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "basecase.hpp"
#include "classify.hpp"
#include "core.hpp"
#include "greedy.hpp"
#include "partition.hpp"
#include "rng.hpp"
#include "slack.hpp"

namespace throughput {

	// Dynamic program over the hierarchical partition. Every node of the
	// partition tree is solved for a state (v, u): v lists the time already
	// blocked on each machine by jobs committed higher up, and u counts, per
	// child interval and per size, the jobs handed down whose span was
	// narrowed to exactly that child.

	struct Blocked_pair {
		Time start = 0;
		Time end = 0;

		bool operator==(const Blocked_pair&) const = default;
		auto operator<=>(const Blocked_pair&) const = default;
	};

	struct Blocked_vector {
		// machines[m] is the blocked set of machine m, kept sorted and
		// disjoint.
		std::vector<std::vector<Blocked_pair>> machines;

		bool operator==(const Blocked_vector&) const = default;
	};

	struct Count_vector {
		// counts[child][size_class]
		std::vector<std::vector<std::int64_t>> counts;

		bool operator==(const Count_vector&) const = default;
	};

	// Sorts each machine's blocked pairs, drops empty ones and merges pairs
	// that touch. Overlapping pairs mean two committed jobs collide, which a
	// correct caller never produces.
	inline Blocked_vector canonicalize_blocks(Blocked_vector v)
	{
		for (std::vector<Blocked_pair>& pairs : v.machines) {
			std::sort(pairs.begin(), pairs.end());
			std::vector<Blocked_pair> merged;
			for (const Blocked_pair& pair : pairs) {
				if (pair.start == pair.end)
					continue;
				if (pair.start > pair.end)
					throw std::invalid_argument("canonicalize_key: blocked pair runs backwards");
				if (!merged.empty() && pair.start < merged.back().end)
					throw std::invalid_argument("canonicalize_key: blocked pairs overlap");
				if (!merged.empty() && pair.start == merged.back().end)
					merged.back().end = pair.end;
				else
					merged.push_back(pair);
			}
			pairs = std::move(merged);
		}
		return v;
	}

	namespace detail {

		inline void append_int(std::string& out, std::int64_t value)
		{
			for (int i = 0; i < 8; i++) {
				out.push_back(static_cast<char>(value & 0xff));
				value >>= 8;
			}
		}

	}

	struct Dp_key {
		std::string bytes;

		bool operator<(const Dp_key& other) const { return bytes < other.bytes; }
		bool operator==(const Dp_key&) const = default;
	};

	// Canonical memoization key for a (v, u) state. Equal states always
	// serialize identically once v is canonicalized.
	inline Dp_key canonicalize_key(const Blocked_vector& v_in, const Count_vector& u)
	{
		Blocked_vector v = canonicalize_blocks(v_in);
		Dp_key key;
		detail::append_int(key.bytes, static_cast<std::int64_t>(v.machines.size()));
		for (const std::vector<Blocked_pair>& pairs : v.machines) {
			detail::append_int(key.bytes, static_cast<std::int64_t>(pairs.size()));
			for (const Blocked_pair& pair : pairs) {
				detail::append_int(key.bytes, pair.start);
				detail::append_int(key.bytes, pair.end);
			}
		}
		detail::append_int(key.bytes, static_cast<std::int64_t>(u.counts.size()));
		for (const std::vector<std::int64_t>& per_child : u.counts) {
			detail::append_int(key.bytes, static_cast<std::int64_t>(per_child.size()));
			for (std::int64_t count : per_child)
				detail::append_int(key.bytes, count);
		}
		return key;
	}

	struct Dp_budget_exceeded : std::runtime_error {
		using std::runtime_error::runtime_error;
	};

	struct Dp_options {
		double eps = 0.5;
		std::uint64_t seed = 1;
		// Number of random offsets to try; the best result wins.
		int offsets = 1;
		// Refinement stops once an interval holds fewer release and deadline
		// points than this. Zero refines everything down to unit length.
		std::size_t stop_rule = 24;
		// Maximum number of jobs guessed and placed at one node. Disabling
		// the cap makes the search exact at each node but exponential in the
		// worst case.
		std::int64_t guess_cap = 4;
		bool caps_disabled = false;
		// Completed guess configurations allowed per solve before giving up.
		std::uint64_t guess_budget = 50000000;
		// Alternatives tried when routing narrowed jobs into grandchild
		// cells; past this the routing falls back to a single canonical
		// choice.
		std::uint64_t routing_budget = 4096;
		// Hard ceiling on memo entries; the program fails fast rather than
		// evict, since a partial table cannot prove anything.
		std::size_t memo_cap = 4000000;
		std::size_t start_cap = 200000;
		std::int64_t small_opt_cap = 8;
		std::uint64_t small_opt_node_budget = 2000000;
		std::uint64_t sweep_transition_budget = 20000000;
	};

	struct Dp_report {
		std::int64_t value = 0;
		bool truncated = false;
		Time r0 = 0;
		std::int64_t nodes_evaluated = 0;
		std::int64_t leaf_calls = 0;
		std::int64_t dropped_span_crossing = 0;
		std::int64_t dropped_cut = 0;
	};

	struct Dp_result {
		Schedule schedule;
		Dp_report report;
	};

	inline nlohmann::ordered_json dp_report_to_json(const Dp_report& report)
	{
		nlohmann::ordered_json doc;
		doc["value"] = report.value;
		doc["truncated"] = report.truncated;
		doc["r0"] = report.r0;
		doc["nodes_evaluated"] = report.nodes_evaluated;
		doc["leaf_calls"] = report.leaf_calls;
		return doc;
	}

	namespace detail {

		// Shared solving engine. On instances where every job is tight the
		// narrowing machinery never fires: all decided jobs clear the size
		// threshold, so the count vectors stay empty all the way down.
		class Dp_engine {
		public:
			Dp_engine(const Instance& inst, const Hierarchical_partition& part,
			          const Job_classification& cls, const Dp_options& options)
				: inst_(inst), part_(part), cls_(cls), options_(options)
			{
				tree_ = build_node_tree(part_);
				sizes_ = inst_.distinct_sizes();
				for (std::size_t s = 0; s < sizes_.size(); s++)
					size_index_[sizes_[s]] = s;

				std::vector<Time> anchors;
				for (const std::vector<Time>& level : part_.boundaries)
					anchors.insert(anchors.end(), level.begin(), level.end());
				Slack_set slack = start_candidates(inst_, anchors, options_.start_cap);
				starts_ = std::move(slack.times);
				starts_truncated_ = slack.overflow;

				synth_base_ = 1;
				for (const Job& j : inst_.jobs)
					synth_base_ = std::max(synth_base_, std::abs(j.id) + 1);

				assign_decision_nodes();
				build_statics();
			}

			Dp_result run()
			{
				Blocked_vector v0;
				v0.machines.resize(static_cast<std::size_t>(inst_.machines));
				for (const Blocked_interval& b : inst_.blocked)
					v0.machines[static_cast<std::size_t>(b.machine)]
						.push_back(Blocked_pair{b.start, b.end});
				v0 = canonicalize_blocks(std::move(v0));
				Count_vector u0;
				u0.counts.assign(node_at(tree_.root).children.size(),
				                 std::vector<std::int64_t>(sizes_.size(), 0));

				Dp_result result;
				result.report.value = value(tree_.root, v0, u0);
				Slot_ids ids(node_at(tree_.root).children.size(),
				             std::vector<std::vector<Job_id>>(sizes_.size()));
				walk(tree_.root, v0, u0, ids, result.schedule);
				result.report.truncated = truncated_ || starts_truncated_;
				result.report.nodes_evaluated = nodes_evaluated_;
				result.report.leaf_calls = leaf_calls_;
				if (result.schedule.value() != result.report.value)
					throw std::logic_error("reconstructed schedule disagrees with the computed value");
				return result;
			}

		private:
			// ids[child][size_class] lists, sorted ascending, the real jobs
			// behind the counts in the matching Count_vector.
			using Slot_ids = std::vector<std::vector<std::vector<Job_id>>>;

			struct Guess_placement {
				bool from_u = false;
				std::size_t job_index = 0;
				std::size_t child_ordinal = 0;
				std::size_t size_class = 0;
				int machine = 0;
				Time start = 0;
			};

			struct Route_entry {
				std::size_t child_ordinal = 0;
				std::size_t size_class = 0;
				// Parallel to the admissible cell list of (child, size).
				std::vector<std::int64_t> cell_counts;
			};

			struct Small_target {
				std::size_t child_ordinal = 0;
				bool to_leaf = false;
				std::size_t cell_ordinal = 0;
				Time clip_r = 0;
				Time clip_d = 0;
			};

			// Decision for one small job: index into its target list, or -1
			// when it has no admissible target and is dropped.
			struct Small_route {
				std::size_t job_index = 0;
				std::int64_t choice = -1;
			};

			struct Node_entry {
				std::int64_t value = 0;
				std::vector<Guess_placement> placements;
				std::vector<Route_entry> routes;
				std::vector<Small_route> small_routes;
			};

			struct Leaf_entry {
				std::int64_t value = 0;
				Schedule schedule;
			};

			struct Guess_item {
				bool from_u = false;
				std::size_t job_index = 0;
				std::size_t child_ordinal = 0;
				std::size_t size_class = 0;
				bool first_copy = true;
				Time p = 0;
				Time window_r = 0;
				Time window_d = 0;
			};

			struct Route_task {
				std::size_t child_ordinal = 0;
				std::size_t size_class = 0;
				std::int64_t count = 0;
			};

			struct Extra_group {
				Time r = 0;
				Time d = 0;
				Time p = 0;
				std::int64_t count = 0;
			};

			// Geometry that depends only on the node, not on the state.
			struct Node_static {
				Time threshold = 1;
				std::vector<std::size_t> big_jobs;
				std::vector<std::size_t> small_jobs;
				// Parallel to small_jobs.
				std::vector<std::vector<Small_target>> small_targets;
				// cell_admissible[child][size]: ordinals of the child's own
				// children long enough to hold the size; empty for leaf
				// children.
				std::vector<std::vector<std::vector<std::size_t>>> cell_admissible;
			};

			// Everything fixed while one guess configuration is scored.
			struct Guess_frame {
				std::size_t node_idx = 0;
				std::vector<Guess_placement> placements;
				std::vector<Blocked_vector> child_v;
				std::vector<std::vector<std::int64_t>> residual;
				std::vector<Route_task> tasks;
				std::vector<Route_entry> routes;
				std::vector<Small_route> small_routes;
			};

			const Instance& inst_;
			const Hierarchical_partition& part_;
			const Job_classification& cls_;
			Dp_options options_;
			Node_tree tree_;
			std::vector<Time> sizes_;
			std::map<Time, std::size_t> size_index_;
			std::vector<Time> starts_;
			bool starts_truncated_ = false;
			std::vector<std::vector<std::size_t>> node_jobs_;
			std::vector<std::int64_t> subtree_jobs_;
			std::vector<Node_static> statics_;
			Job_id synth_base_ = 1;

			std::int64_t nodes_evaluated_ = 0;
			std::int64_t leaf_calls_ = 0;
			std::uint64_t transitions_ = 0;
			bool truncated_ = false;

			std::map<std::string, Node_entry> memo_;
			std::map<std::string, Leaf_entry> leaf_memo_;

			const Partition_node& node_at(std::size_t idx) const { return tree_.nodes[idx]; }

			// Each job belongs to the node where its class says it must be
			// decided: walking down from the root, a job of class i stops at
			// level i-2 (classes 0 and 1 stay at the root), or at the first
			// leaf on the way there.
			void assign_decision_nodes()
			{
				node_jobs_.assign(tree_.nodes.size(), {});
				for (std::size_t j = 0; j < inst_.jobs.size(); j++) {
					const Job& job = inst_.jobs[j];
					int target_level = std::max(-1, cls_.of(job.id).class_index - 2);
					std::size_t at = tree_.root;
					while (node_at(at).level < target_level && !node_at(at).leaf()) {
						std::size_t next = at;
						for (std::size_t child : node_at(at).children) {
							if (node_at(child).start <= job.r && job.d <= node_at(child).end) {
								next = child;
								break;
							}
						}
						if (next == at)
							throw std::invalid_argument("job " + std::to_string(job.id)
								+ " crosses a child boundary above its class level");
						at = next;
					}
					node_jobs_[at].push_back(j);
				}

				subtree_jobs_.assign(tree_.nodes.size(), 0);
				for (std::size_t n = tree_.nodes.size(); n-- > 0;) {
					subtree_jobs_[n] = static_cast<std::int64_t>(node_jobs_[n].size());
					for (std::size_t child : node_at(n).children)
						subtree_jobs_[n] += subtree_jobs_[child];
				}
			}

			void build_statics()
			{
				statics_.resize(tree_.nodes.size());
				for (std::size_t n = 0; n < tree_.nodes.size(); n++) {
					const Partition_node& node = node_at(n);
					if (node.leaf())
						continue;
					Node_static& st = statics_[n];
					st.threshold = part_.nominal_length(node.level + 3);
					for (std::size_t j : node_jobs_[n]) {
						if (inst_.jobs[j].p >= st.threshold)
							st.big_jobs.push_back(j);
						else
							st.small_jobs.push_back(j);
					}
					st.cell_admissible.resize(node.children.size());
					for (std::size_t c = 0; c < node.children.size(); c++) {
						const Partition_node& child = node_at(node.children[c]);
						if (child.leaf())
							continue;
						st.cell_admissible[c].resize(sizes_.size());
						for (std::size_t s = 0; s < sizes_.size(); s++)
							for (std::size_t g = 0; g < child.children.size(); g++)
								if (node_at(child.children[g]).length() >= sizes_[s])
									st.cell_admissible[c][s].push_back(g);
					}
					for (std::size_t j : st.small_jobs) {
						const Job& job = inst_.jobs[j];
						std::vector<Small_target> targets;
						for (std::size_t c = 0; c < node.children.size(); c++) {
							const Partition_node& child = node_at(node.children[c]);
							if (child.leaf()) {
								Time clip_r = std::max(job.r, child.start);
								Time clip_d = std::min(job.d, child.end);
								if (clip_r + job.p <= clip_d)
									targets.push_back(Small_target{c, true, 0, clip_r, clip_d});
							} else {
								for (std::size_t g = 0; g < child.children.size(); g++) {
									const Partition_node& cell = node_at(child.children[g]);
									if (job.r <= cell.start && cell.end <= job.d
									    && cell.length() >= job.p)
										targets.push_back(Small_target{c, false, g,
										                               cell.start, cell.end});
								}
							}
						}
						st.small_targets.push_back(std::move(targets));
					}
				}
			}

			std::string state_key(std::size_t node, const Blocked_vector& v, const Count_vector& u) const
			{
				Dp_key key = canonicalize_key(v, u);
				std::string bytes;
				append_int(bytes, static_cast<std::int64_t>(node));
				bytes += key.bytes;
				return bytes;
			}

			std::string leaf_state_key(std::size_t node, const Blocked_vector& v,
			                           const std::vector<Extra_group>& extras) const
			{
				Dp_key key = canonicalize_key(v, Count_vector{});
				std::string bytes;
				append_int(bytes, static_cast<std::int64_t>(node));
				bytes += key.bytes;
				for (const Extra_group& group : extras) {
					append_int(bytes, group.r);
					append_int(bytes, group.d);
					append_int(bytes, group.p);
					append_int(bytes, group.count);
				}
				return bytes;
			}

			std::pair<std::size_t, std::size_t> start_range(Time lo, Time hi) const
			{
				auto begin = std::lower_bound(starts_.begin(), starts_.end(), lo);
				auto end = std::upper_bound(starts_.begin(), starts_.end(), hi);
				return {static_cast<std::size_t>(begin - starts_.begin()),
				        static_cast<std::size_t>(end - starts_.begin())};
			}

			static bool overlaps_any(const std::vector<Blocked_pair>& pairs, Time start, Time end)
			{
				for (const Blocked_pair& pair : pairs)
					if (pair.start < end && start < pair.end)
						return true;
				return false;
			}

			// ---- value computation ----

			std::int64_t value(std::size_t node_idx, const Blocked_vector& v, const Count_vector& u)
			{
				bool empty_u = true;
				for (const std::vector<std::int64_t>& per_child : u.counts)
					for (std::int64_t count : per_child)
						if (count > 0)
							empty_u = false;
				if (empty_u && subtree_jobs_[node_idx] == 0)
					return 0;

				std::string key = state_key(node_idx, v, u);
				auto hit = memo_.find(key);
				if (hit != memo_.end())
					return hit->second.value;
				nodes_evaluated_++;

				Node_entry best = evaluate_node(node_idx, v, u);
				std::int64_t result = best.value;
				if (memo_.size() + leaf_memo_.size() >= options_.memo_cap)
					throw Dp_budget_exceeded("hierarchical solve: state table reached "
						+ std::to_string(options_.memo_cap)
						+ " entries; rerun with a smaller instance or a larger eps");
				memo_[std::move(key)] = std::move(best);
				return result;
			}

			Node_entry evaluate_node(std::size_t node_idx, const Blocked_vector& v,
			                         const Count_vector& u)
			{
				const Partition_node& node = node_at(node_idx);
				const Node_static& st = statics_[node_idx];

				std::vector<Guess_item> items;
				for (std::size_t j : st.big_jobs) {
					const Job& job = inst_.jobs[j];
					items.push_back(Guess_item{false, j, 0, 0, true, job.p, job.r, job.d});
				}
				// A machine fits at most (child length / threshold) <= q*q
				// guessed jobs inside one child, so deeper copies of a count
				// slot can never be placed and need not become items.
				std::int64_t copy_cap = static_cast<std::int64_t>(inst_.machines)
					* static_cast<std::int64_t>(part_.q) * static_cast<std::int64_t>(part_.q);
				for (std::size_t c = 0; c < node.children.size(); c++) {
					const Partition_node& child = node_at(node.children[c]);
					if (child.leaf())
						continue;
					for (std::size_t s = 0; s < sizes_.size(); s++) {
						if (sizes_[s] < st.threshold)
							continue;
						std::int64_t copies = std::min(u.counts[c][s], copy_cap);
						for (std::int64_t copy = 0; copy < copies; copy++)
							items.push_back(Guess_item{true, 0, c, s, copy == 0,
							                           sizes_[s], child.start, child.end});
					}
				}

				std::int64_t cap = options_.caps_disabled
					? std::numeric_limits<std::int64_t>::max()
					: options_.guess_cap;

				Node_entry best;
				best.value = -1;
				std::vector<Guess_placement> chosen;
				std::vector<std::vector<Blocked_pair>> occupied(v.machines.size());
				dfs_items(node_idx, v, u, items, 0, false, cap, chosen, occupied, best);
				if (best.value < 0)
					throw std::logic_error("node enumeration produced no configuration");
				return best;
			}

			void dfs_items(std::size_t node_idx, const Blocked_vector& v, const Count_vector& u,
			               const std::vector<Guess_item>& items, std::size_t at, bool prev_placed,
			               std::int64_t cap, std::vector<Guess_placement>& chosen,
			               std::vector<std::vector<Blocked_pair>>& occupied, Node_entry& best)
			{
				if (++transitions_ > options_.guess_budget)
					throw Dp_budget_exceeded("hierarchical solve: guess budget of "
						+ std::to_string(options_.guess_budget) + " steps exhausted");
				if (at == items.size()) {
					score_guess(node_idx, v, u, chosen, best);
					return;
				}
				const Guess_item& item = items[at];

				// Skip branch. Later copies of the same count slot are then
				// forced to skip as well, which kills permutation duplicates.
				dfs_items(node_idx, v, u, items, at + 1, false, cap, chosen, occupied, best);

				if (static_cast<std::int64_t>(chosen.size()) >= cap) {
					truncated_ = true;
					return;
				}
				if (item.from_u && !item.first_copy && !prev_placed)
					return;

				Time lo = std::max(item.window_r, node_at(node_idx).start);
				Time hi = std::min(item.window_d, node_at(node_idx).end) - item.p;
				if (hi < lo)
					return;
				auto [s_begin, s_end] = start_range(lo, hi);
				for (int machine = 0; machine < inst_.machines; machine++) {
					std::size_t mi = static_cast<std::size_t>(machine);
					for (std::size_t si = s_begin; si < s_end; si++) {
						Time start = starts_[si];
						if (item.from_u && !item.first_copy) {
							const Guess_placement& prev = chosen.back();
							if (machine < prev.machine
							    || (machine == prev.machine && start < prev.start))
								continue;
						}
						Time end = start + item.p;
						if (overlaps_any(v.machines[mi], start, end))
							continue;
						if (overlaps_any(occupied[mi], start, end))
							continue;
						chosen.push_back(Guess_placement{item.from_u, item.job_index,
						                                 item.child_ordinal, item.size_class,
						                                 machine, start});
						occupied[mi].push_back(Blocked_pair{start, end});
						dfs_items(node_idx, v, u, items, at + 1, true, cap, chosen,
						          occupied, best);
						occupied[mi].pop_back();
						chosen.pop_back();
					}
				}
			}

			// Projects the blocked space (inherited plus newly placed) onto
			// every child.
			std::vector<Blocked_vector> project_children(std::size_t node_idx,
			                                             const Blocked_vector& v,
			                                             const std::vector<Guess_placement>& placements) const
			{
				const Partition_node& node = node_at(node_idx);
				std::vector<Blocked_vector> child_v(node.children.size());
				for (std::size_t c = 0; c < node.children.size(); c++) {
					const Partition_node& child = node_at(node.children[c]);
					Blocked_vector projected;
					projected.machines.resize(v.machines.size());
					for (std::size_t m = 0; m < v.machines.size(); m++)
						for (const Blocked_pair& pair : v.machines[m]) {
							Time lo = std::max(pair.start, child.start);
							Time hi = std::min(pair.end, child.end);
							if (lo < hi)
								projected.machines[m].push_back(Blocked_pair{lo, hi});
						}
					for (const Guess_placement& placed : placements) {
						Time p = placed.from_u ? sizes_[placed.size_class]
						                       : inst_.jobs[placed.job_index].p;
						Time lo = std::max(placed.start, child.start);
						Time hi = std::min(placed.start + p, child.end);
						if (lo < hi)
							projected.machines[static_cast<std::size_t>(placed.machine)]
								.push_back(Blocked_pair{lo, hi});
					}
					child_v[c] = canonicalize_blocks(std::move(projected));
				}
				return child_v;
			}

			std::vector<std::vector<std::int64_t>> residual_counts(
				const Count_vector& u, const std::vector<Guess_placement>& placements) const
			{
				std::vector<std::vector<std::int64_t>> residual = u.counts;
				for (const Guess_placement& placed : placements)
					if (placed.from_u)
						residual[placed.child_ordinal][placed.size_class]--;
				return residual;
			}

			// One complete placement set: build the frame, then enumerate
			// routings of the narrowed jobs.
			void score_guess(std::size_t node_idx, const Blocked_vector& v, const Count_vector& u,
			                 const std::vector<Guess_placement>& placements, Node_entry& best)
			{
				if (++transitions_ > options_.guess_budget)
					throw Dp_budget_exceeded("hierarchical solve: guess budget of "
						+ std::to_string(options_.guess_budget) + " configurations exhausted");

				const Partition_node& node = node_at(node_idx);
				const Node_static& st = statics_[node_idx];

				Guess_frame frame;
				frame.node_idx = node_idx;
				frame.placements = placements;
				frame.child_v = project_children(node_idx, v, placements);
				frame.residual = residual_counts(u, placements);

				for (std::size_t c = 0; c < node.children.size(); c++) {
					const Partition_node& child = node_at(node.children[c]);
					if (child.leaf())
						continue;
					for (std::size_t s = 0; s < sizes_.size(); s++) {
						if (frame.residual[c][s] <= 0 || sizes_[s] >= st.threshold)
							continue;
						if (!st.cell_admissible[c][s].empty())
							frame.tasks.push_back(Route_task{c, s, frame.residual[c][s]});
						// Small counts with no admissible cell are dropped.
					}
				}

				// Within budget every routing is tried; past it one canonical
				// choice (the longest target) stands in.
				bool exhaustive = true;
				long double estimate = 1.0L;
				for (const Route_task& task : frame.tasks) {
					std::size_t cells = st.cell_admissible[task.child_ordinal][task.size_class].size();
					for (std::int64_t i = 1; i < static_cast<std::int64_t>(cells); i++)
						estimate *= static_cast<long double>(task.count + i) / static_cast<long double>(i);
					if (estimate > static_cast<long double>(options_.routing_budget))
						break;
				}
				if (estimate <= static_cast<long double>(options_.routing_budget))
					for (std::size_t sj = 0; sj < st.small_jobs.size(); sj++) {
						estimate *= static_cast<long double>(
							std::max<std::size_t>(1, st.small_targets[sj].size()));
						if (estimate > static_cast<long double>(options_.routing_budget))
							break;
					}
				if (estimate > static_cast<long double>(options_.routing_budget)) {
					exhaustive = false;
					truncated_ = true;
				}

				if (exhaustive) {
					route_task(frame, 0, best);
				} else {
					for (const Route_task& task : frame.tasks) {
						const std::vector<std::size_t>& cells =
							st.cell_admissible[task.child_ordinal][task.size_class];
						std::size_t widest = 0;
						for (std::size_t i = 1; i < cells.size(); i++) {
							Time len_i = cell_length(node_idx, task.child_ordinal, cells[i]);
							Time len_w = cell_length(node_idx, task.child_ordinal, cells[widest]);
							if (len_i > len_w)
								widest = i;
						}
						Route_entry route{task.child_ordinal, task.size_class,
						                  std::vector<std::int64_t>(cells.size(), 0)};
						route.cell_counts[widest] = task.count;
						frame.routes.push_back(std::move(route));
					}
					for (std::size_t sj = 0; sj < st.small_jobs.size(); sj++) {
						const std::vector<Small_target>& targets = st.small_targets[sj];
						std::int64_t choice = -1;
						Time best_len = -1;
						for (std::size_t t = 0; t < targets.size(); t++) {
							Time len = targets[t].clip_d - targets[t].clip_r;
							if (len > best_len) {
								best_len = len;
								choice = static_cast<std::int64_t>(t);
							}
						}
						frame.small_routes.push_back(Small_route{st.small_jobs[sj], choice});
					}
					score_config(frame, best);
				}
			}

			Time cell_length(std::size_t node_idx, std::size_t child_ordinal, std::size_t cell) const
			{
				const Partition_node& child = node_at(node_at(node_idx).children[child_ordinal]);
				return node_at(child.children[cell]).length();
			}

			void route_task(Guess_frame& frame, std::size_t at, Node_entry& best)
			{
				const Node_static& st = statics_[frame.node_idx];
				if (at == frame.tasks.size()) {
					route_small(frame, 0, best);
					return;
				}
				const Route_task& task = frame.tasks[at];
				const std::vector<std::size_t>& cells =
					st.cell_admissible[task.child_ordinal][task.size_class];
				Route_entry route{task.child_ordinal, task.size_class,
				                  std::vector<std::int64_t>(cells.size(), 0)};
				frame.routes.push_back(route);
				compose_counts(frame, at, 0, task.count, best);
				frame.routes.pop_back();
			}

			void compose_counts(Guess_frame& frame, std::size_t task_at, std::size_t cell_at,
			                    std::int64_t remaining, Node_entry& best)
			{
				Route_entry& route = frame.routes.back();
				if (cell_at + 1 == route.cell_counts.size()) {
					route.cell_counts[cell_at] = remaining;
					route_task(frame, task_at + 1, best);
					route.cell_counts[cell_at] = 0;
					return;
				}
				for (std::int64_t take = 0; take <= remaining; take++) {
					route.cell_counts[cell_at] = take;
					compose_counts(frame, task_at, cell_at + 1, remaining - take, best);
				}
				route.cell_counts[cell_at] = 0;
			}

			void route_small(Guess_frame& frame, std::size_t at, Node_entry& best)
			{
				const Node_static& st = statics_[frame.node_idx];
				if (at == st.small_jobs.size()) {
					score_config(frame, best);
					return;
				}
				const std::vector<Small_target>& targets = st.small_targets[at];
				if (targets.empty()) {
					frame.small_routes.push_back(Small_route{st.small_jobs[at], -1});
					route_small(frame, at + 1, best);
					frame.small_routes.pop_back();
					return;
				}
				for (std::size_t t = 0; t < targets.size(); t++) {
					frame.small_routes.push_back(
						Small_route{st.small_jobs[at], static_cast<std::int64_t>(t)});
					route_small(frame, at + 1, best);
					frame.small_routes.pop_back();
				}
			}

			// Turns a fully routed frame into child states and scores them.
			void score_config(const Guess_frame& frame, Node_entry& best)
			{
				if (++transitions_ > options_.guess_budget)
					throw Dp_budget_exceeded("hierarchical solve: guess budget of "
						+ std::to_string(options_.guess_budget) + " steps exhausted");
				const Partition_node& node = node_at(frame.node_idx);
				const Node_static& st = statics_[frame.node_idx];

				std::vector<Count_vector> child_u(node.children.size());
				std::vector<std::map<std::tuple<Time, Time, Time>, std::int64_t>> extras(
					node.children.size());
				for (std::size_t c = 0; c < node.children.size(); c++) {
					const Partition_node& child = node_at(node.children[c]);
					if (child.leaf()) {
						for (std::size_t s = 0; s < sizes_.size(); s++)
							if (frame.residual[c][s] > 0)
								extras[c][{child.start, child.end, sizes_[s]}]
									+= frame.residual[c][s];
					} else {
						child_u[c].counts.assign(child.children.size(),
						                         std::vector<std::int64_t>(sizes_.size(), 0));
					}
				}
				for (const Route_entry& route : frame.routes) {
					const std::vector<std::size_t>& cells =
						st.cell_admissible[route.child_ordinal][route.size_class];
					for (std::size_t i = 0; i < cells.size(); i++)
						child_u[route.child_ordinal].counts[cells[i]][route.size_class]
							+= route.cell_counts[i];
				}
				for (const Small_route& sr : frame.small_routes) {
					if (sr.choice < 0)
						continue;
					std::size_t ordinal = small_ordinal(frame.node_idx, sr.job_index);
					const Small_target& target =
						st.small_targets[ordinal][static_cast<std::size_t>(sr.choice)];
					const Job& job = inst_.jobs[sr.job_index];
					if (target.to_leaf)
						extras[target.child_ordinal][{target.clip_r, target.clip_d, job.p}]++;
					else
						child_u[target.child_ordinal]
							.counts[target.cell_ordinal][size_index_.at(job.p)]++;
				}

				std::int64_t total = static_cast<std::int64_t>(frame.placements.size());
				for (std::size_t c = 0; c < node.children.size(); c++) {
					const Partition_node& child = node_at(node.children[c]);
					if (child.leaf()) {
						std::vector<Extra_group> groups;
						for (const auto& [key, count] : extras[c])
							groups.push_back(Extra_group{std::get<0>(key), std::get<1>(key),
							                             std::get<2>(key), count});
						total += leaf_value(node.children[c], frame.child_v[c], groups);
					} else {
						total += value(node.children[c], frame.child_v[c], child_u[c]);
					}
				}

				if (total > best.value) {
					best.value = total;
					best.placements = frame.placements;
					best.routes = frame.routes;
					best.small_routes = frame.small_routes;
				}
			}

			std::size_t small_ordinal(std::size_t node_idx, std::size_t job_index) const
			{
				const std::vector<std::size_t>& smalls = statics_[node_idx].small_jobs;
				for (std::size_t i = 0; i < smalls.size(); i++)
					if (smalls[i] == job_index)
						return i;
				throw std::logic_error("job is not a narrowed job of this node");
			}

			// ---- leaves ----

			// A leaf holds its own decided jobs plus whatever was narrowed
			// into it; both are concrete jobs for the bounded-structure
			// solver. Narrowed jobs get synthetic ids above every real id.
			Instance build_leaf_instance(std::size_t node_idx, const Blocked_vector& v,
			                             const std::vector<Extra_group>& extras) const
			{
				std::vector<Job> jobs;
				for (std::size_t j : node_jobs_[node_idx])
					jobs.push_back(inst_.jobs[j]);
				Job_id next = synth_base_;
				for (const Extra_group& group : extras)
					for (std::int64_t i = 0; i < group.count; i++)
						jobs.push_back(Job{next++, group.p, group.r, group.d});
				std::vector<Blocked_interval> blocks;
				for (std::size_t m = 0; m < v.machines.size(); m++)
					for (const Blocked_pair& pair : v.machines[m])
						blocks.push_back(Blocked_interval{static_cast<int>(m), pair.start, pair.end});
				return Instance(std::move(jobs), inst_.machines, std::move(blocks));
			}

			std::int64_t leaf_value(std::size_t node_idx, const Blocked_vector& v,
			                        const std::vector<Extra_group>& extras)
			{
				if (node_jobs_[node_idx].empty() && extras.empty())
					return 0;
				std::string key = leaf_state_key(node_idx, v, extras);
				auto hit = leaf_memo_.find(key);
				if (hit != leaf_memo_.end())
					return hit->second.value;
				leaf_calls_++;

				Instance leaf_inst = build_leaf_instance(node_idx, v, extras);
				Basecase_options base;
				base.eps = options_.eps;
				base.limits.max_releases = 4096;
				base.limits.max_deadlines = 4096;
				base.limits.max_blocks = 4096;
				base.small_opt_cap = options_.small_opt_cap;
				base.small_opt_node_budget = options_.small_opt_node_budget;
				base.sweep_transition_budget = options_.sweep_transition_budget;

				Leaf_entry entry;
				try {
					Basecase_result solved = solve_basecase(leaf_inst, base);
					entry.value = solved.value;
					entry.schedule = solved.schedule;
				} catch (const Sweep_budget_exceeded&) {
					try {
						base.mode = Basecase_mode::rounded_sweep;
						Basecase_result solved = solve_basecase(leaf_inst, base);
						entry.value = solved.value;
						entry.schedule = solved.schedule;
						truncated_ = true;
					} catch (const Sweep_budget_exceeded&) {
						entry.schedule = greedy_shortest_first(leaf_inst);
						entry.value = entry.schedule.value();
						truncated_ = true;
					}
				}

				std::int64_t result = entry.value;
				leaf_memo_[std::move(key)] = std::move(entry);
				return result;
			}

			// ---- reconstruction ----

			void walk(std::size_t node_idx, const Blocked_vector& v, const Count_vector& u,
			          const Slot_ids& ids, Schedule& out)
			{
				bool empty_u = true;
				for (const std::vector<std::int64_t>& per_child : u.counts)
					for (std::int64_t count : per_child)
						if (count > 0)
							empty_u = false;
				if (empty_u && subtree_jobs_[node_idx] == 0)
					return;

				const Node_entry& entry = memo_.at(state_key(node_idx, v, u));
				const Partition_node& node = node_at(node_idx);
				const Node_static& st = statics_[node_idx];

				Slot_ids pool = ids;
				for (const Guess_placement& placed : entry.placements) {
					Job_id id;
					if (placed.from_u) {
						std::vector<Job_id>& slot = pool[placed.child_ordinal][placed.size_class];
						id = slot.front();
						slot.erase(slot.begin());
					} else {
						id = inst_.jobs[placed.job_index].id;
					}
					out.assign(id, placed.machine, placed.start);
				}

				std::vector<Blocked_vector> child_v =
					project_children(node_idx, v, entry.placements);

				std::vector<Count_vector> child_u(node.children.size());
				std::vector<Slot_ids> child_ids(node.children.size());
				std::vector<std::map<std::tuple<Time, Time, Time>,
				                     std::pair<std::int64_t, std::vector<Job_id>>>> extras(
					node.children.size());

				for (std::size_t c = 0; c < node.children.size(); c++) {
					const Partition_node& child = node_at(node.children[c]);
					if (child.leaf()) {
						for (std::size_t s = 0; s < sizes_.size(); s++) {
							std::vector<Job_id>& leftover = pool[c][s];
							if (leftover.empty())
								continue;
							auto& bucket = extras[c][{child.start, child.end, sizes_[s]}];
							bucket.first += static_cast<std::int64_t>(leftover.size());
							bucket.second.insert(bucket.second.end(),
							                     leftover.begin(), leftover.end());
							leftover.clear();
						}
					} else {
						child_u[c].counts.assign(child.children.size(),
						                         std::vector<std::int64_t>(sizes_.size(), 0));
						child_ids[c].assign(child.children.size(),
						                    std::vector<std::vector<Job_id>>(sizes_.size()));
					}
				}

				for (const Route_entry& route : entry.routes) {
					const std::vector<std::size_t>& cells =
						st.cell_admissible[route.child_ordinal][route.size_class];
					std::vector<Job_id>& source = pool[route.child_ordinal][route.size_class];
					for (std::size_t i = 0; i < cells.size(); i++) {
						for (std::int64_t take = 0; take < route.cell_counts[i]; take++) {
							child_u[route.child_ordinal].counts[cells[i]][route.size_class]++;
							child_ids[route.child_ordinal][cells[i]][route.size_class]
								.push_back(source.front());
							source.erase(source.begin());
						}
					}
				}

				for (const Small_route& sr : entry.small_routes) {
					if (sr.choice < 0)
						continue;
					std::size_t ordinal = small_ordinal(node_idx, sr.job_index);
					const Small_target& target =
						st.small_targets[ordinal][static_cast<std::size_t>(sr.choice)];
					const Job& job = inst_.jobs[sr.job_index];
					if (target.to_leaf) {
						auto& bucket = extras[target.child_ordinal][{target.clip_r, target.clip_d, job.p}];
						bucket.first++;
						bucket.second.push_back(job.id);
					} else {
						child_u[target.child_ordinal]
							.counts[target.cell_ordinal][size_index_.at(job.p)]++;
						child_ids[target.child_ordinal][target.cell_ordinal][size_index_.at(job.p)]
							.push_back(job.id);
					}
				}

				for (std::size_t c = 0; c < node.children.size(); c++) {
					const Partition_node& child = node_at(node.children[c]);
					if (child.leaf()) {
						std::vector<Extra_group> groups;
						std::vector<std::vector<Job_id>> group_ids;
						for (auto& [key, bucket] : extras[c]) {
							groups.push_back(Extra_group{std::get<0>(key), std::get<1>(key),
							                             std::get<2>(key), bucket.first});
							std::sort(bucket.second.begin(), bucket.second.end());
							group_ids.push_back(bucket.second);
						}
						walk_leaf(node.children[c], child_v[c], groups, group_ids, out);
					} else {
						for (std::vector<std::vector<Job_id>>& per_cell : child_ids[c])
							for (std::vector<Job_id>& slot : per_cell)
								std::sort(slot.begin(), slot.end());
						walk(node.children[c], child_v[c], child_u[c], child_ids[c], out);
					}
				}
			}

			void walk_leaf(std::size_t node_idx, const Blocked_vector& v,
			               const std::vector<Extra_group>& groups,
			               const std::vector<std::vector<Job_id>>& group_ids, Schedule& out)
			{
				if (node_jobs_[node_idx].empty() && groups.empty())
					return;
				const Leaf_entry& entry = leaf_memo_.at(leaf_state_key(node_idx, v, groups));

				// Synthetic ids were handed out densely in group order, so a
				// running base per group translates them back.
				std::vector<Job_id> bases(groups.size());
				Job_id next = synth_base_;
				for (std::size_t g = 0; g < groups.size(); g++) {
					bases[g] = next;
					next += groups[g].count;
				}

				for (const auto& [id, placement] : entry.schedule.assignments) {
					if (id < synth_base_) {
						out.assign(id, placement.machine, placement.start);
						continue;
					}
					std::size_t g = 0;
					while (g + 1 < groups.size() && bases[g + 1] <= id)
						g++;
					Job_id real = group_ids[g][static_cast<std::size_t>(id - bases[g])];
					out.assign(real, placement.machine, placement.start);
				}
			}
		};

	}

	// Reference solver for instances where every job is tight: each job's
	// size is at least a 1/lambda fraction of its span. No narrowing is
	// needed, so with the guess cap disabled the program walks the full
	// guess space at every node.
	inline Dp_result solve_tight(const Instance& inst, const Hierarchical_partition& part,
	                             double eps, Dp_options options = {})
	{
		if (!(eps > 0.0) || eps > 0.5)
			throw std::invalid_argument("solve_tight: eps must lie in (0, 1/2]");
		options.eps = eps;
		options.caps_disabled = true;
		int lambda = static_cast<int>(std::ceil(1.0 / eps));

		for (const Job& job : inst.jobs) {
			if (job.d > part.horizon)
				throw std::invalid_argument("solve_tight: job " + std::to_string(job.id)
					+ " ends after the partition horizon");
			if (job.p * static_cast<Time>(lambda) < job.span_length())
				throw std::invalid_argument("solve_tight: job " + std::to_string(job.id)
					+ " is not tight for lambda " + std::to_string(lambda));
		}
		Job_classification cls = classify_jobs(inst, part, lambda);
		std::vector<Job_id> crossing = find_span_crossing(inst, part, cls);
		if (!crossing.empty())
			throw std::invalid_argument("solve_tight: job " + std::to_string(crossing.front())
				+ " crosses an interval two levels above its class");

		detail::Dp_engine engine(inst, part, cls, options);
		Dp_result result = engine.run();
		result.report.r0 = part.offset;
		Validation_report check = validate_schedule(inst, result.schedule);
		if (!check.feasible)
			throw std::logic_error("solve_tight produced an infeasible schedule: "
				+ check.violations.front());
		return result;
	}

	// Full pipeline: draw a random offset, build the partition, drop the
	// span-crossing jobs, trim loose spans to whole intervals, run the
	// hierarchical program, and keep the better of its schedule and the
	// greedy one. With several offsets the best single offset wins.
	inline Dp_result solve_full(const Instance& inst, const Dp_options& options = {})
	{
		if (!(options.eps > 0.0) || options.eps > 0.5)
			throw std::invalid_argument("solve_full: eps must lie in (0, 1/2]");
		if (options.offsets < 1)
			throw std::invalid_argument("solve_full: at least one offset is required");

		int q = static_cast<int>(std::ceil(1.0 / (options.eps * options.eps)));
		int lambda = static_cast<int>(std::ceil(1.0 / options.eps));
		Time T = inst.horizon;

		std::vector<Time> points;
		for (const Job& job : inst.jobs) {
			points.push_back(job.r);
			points.push_back(job.d);
		}

		Rng offset_rng(options.seed, "offset-sequence");

		bool have_best = false;
		Dp_result best;
		std::int64_t total_nodes = 0;
		std::int64_t total_leaf_calls = 0;
		bool any_truncated = false;
		for (int trial = 0; trial < options.offsets; trial++) {
			Time r0 = offset_rng.range(0, T / q);
			Hierarchical_partition part = build_partition(T, q, r0, options.stop_rule, points);
			Job_classification cls = classify_jobs(inst, part, lambda);

			std::vector<Job_id> crossing = find_span_crossing(inst, part, cls);
			std::vector<Job> kept;
			{
				std::set<Job_id> gone(crossing.begin(), crossing.end());
				for (const Job& job : inst.jobs)
					if (!gone.contains(job.id))
						kept.push_back(job);
			}
			Instance filtered(kept, inst.machines, inst.blocked);
			filtered.horizon = inst.horizon;
			Cut_result cut = cut_heads_tails(filtered, part, cls);

			Dp_result trial_result;
			try {
				detail::Dp_engine engine(cut.instance, part, cls, options);
				trial_result = engine.run();
			} catch (const Dp_budget_exceeded&) {
				trial_result.report.truncated = true;
			}
			trial_result.report.r0 = r0;
			trial_result.report.dropped_span_crossing =
				static_cast<std::int64_t>(crossing.size());
			trial_result.report.dropped_cut = static_cast<std::int64_t>(cut.dropped.size());

			Validation_report check = validate_schedule(inst, trial_result.schedule);
			if (!check.feasible)
				throw std::logic_error("hierarchical solve produced a schedule "
					"that is infeasible on the input instance: " + check.violations.front());

			total_nodes += trial_result.report.nodes_evaluated;
			total_leaf_calls += trial_result.report.leaf_calls;
			any_truncated = any_truncated || trial_result.report.truncated;
			if (!have_best || trial_result.report.value > best.report.value) {
				best = std::move(trial_result);
				have_best = true;
			}
		}
		best.report.nodes_evaluated = total_nodes;
		best.report.leaf_calls = total_leaf_calls;
		best.report.truncated = any_truncated;

		Schedule greedy = greedy_shortest_first(inst);
		if (greedy.value() > best.report.value) {
			best.schedule = greedy;
			best.report.value = greedy.value();
		}
		return best;
	}

}

#endif
