#ifndef THROUGHPUT_BENCH_HPP
#define THROUGHPUT_BENCH_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "basecase.hpp"
#include "classify.hpp"
#include "core.hpp"
#include "dp.hpp"
#include "exact.hpp"
#include "generator.hpp"
#include "greedy.hpp"
#include "partition.hpp"
#include "rng.hpp"

namespace throughput {

	// ---- benchmark runner ----

	struct Bench_block {
		Gen_params params;
		int count = 1;
	};

	struct Bench_config {
		std::uint64_t seed = 1;
		double eps = 0.25;
		int offsets = 1;
		std::vector<Bench_block> blocks;
		std::vector<std::string> solvers;
	};

	struct Bench_row {
		std::string instance_id;
		std::string solver;
		// -1 marks a row-level error: the solver rejected the instance or
		// gave up on a budget before producing a schedule.
		std::int64_t value = 0;
		bool feasible = true;
		double wall_ms = 0.0;
		bool truncated = false;
		std::uint64_t seed = 0;
		double eps = 0.0;
		std::string error;
	};

	struct Bench_outcome {
		std::vector<Bench_row> rows;
		// True when some produced schedule failed validation.
		bool defect = false;
		// True when some solver ran out of its search budget.
		bool budget_hit = false;
	};

	// Test seam: replaces a named solver with an arbitrary schedule source so
	// the validation path can be exercised with a deliberately broken one.
	using Solver_overrides = std::map<std::string, std::function<Schedule(const Instance&)>>;

	inline const std::vector<std::string>& known_solvers()
	{
		static const std::vector<std::string> names = {
			"greedy", "exact", "basecase", "tight-dp", "full-ptas",
		};
		return names;
	}

	inline Bench_config parse_bench_config(const nlohmann::json& doc)
	{
		if (!doc.is_object())
			throw std::invalid_argument("bench config: top level must be an object");
		Bench_config config;
		config.seed = doc.value("seed", std::uint64_t{1});
		config.eps = doc.value("eps", 0.25);
		config.offsets = doc.value("offsets", 1);
		if (!doc.contains("solvers") || !doc["solvers"].is_array() || doc["solvers"].empty())
			throw std::invalid_argument("bench config: \"solvers\" must be a non-empty array");
		for (const nlohmann::json& name : doc["solvers"]) {
			std::string solver = name.get<std::string>();
			const std::vector<std::string>& known = known_solvers();
			if (std::find(known.begin(), known.end(), solver) == known.end())
				throw std::invalid_argument("bench config: unknown solver \"" + solver + "\"");
			config.solvers.push_back(std::move(solver));
		}
		if (!doc.contains("instances") || !doc["instances"].is_array() || doc["instances"].empty())
			throw std::invalid_argument("bench config: \"instances\" must be a non-empty array");
		std::uint64_t block_index = 0;
		for (const nlohmann::json& entry : doc["instances"]) {
			Bench_block block;
			block.params.n = entry.value("n", 8);
			block.params.m = entry.value("m", 1);
			block.params.c = entry.value("c", 2);
			block.params.T = entry.value("T", Time{32});
			block.params.seed = entry.value("seed", derive_seed(config.seed,
				"bench-block-" + std::to_string(block_index)));
			block.params.span_dist = span_dist_from_name(entry.value("span_dist",
				std::string("mixed")));
			block.count = entry.value("count", 1);
			if (block.count < 1)
				throw std::invalid_argument("bench config: instance count must be at least 1");
			config.blocks.push_back(block);
			block_index++;
		}
		return config;
	}

	struct Solver_run {
		Schedule schedule;
		bool truncated = false;
		bool budget_hit = false;
	};

	inline Solver_run run_named_solver(const std::string& solver, const Instance& inst,
	                                 const Bench_config& config)
	{
		Solver_run run;
		if (solver == "greedy") {
			run.schedule = greedy_shortest_first(inst);
		} else if (solver == "exact") {
			Bounded_search_result found =
				bounded_best(inst, static_cast<std::int64_t>(inst.jobs.size()));
			run.schedule = found.schedule;
			run.truncated = !found.complete;
			run.budget_hit = !found.complete;
		} else if (solver == "basecase") {
			Basecase_options options;
			options.eps = config.eps;
			Basecase_result solved = solve_basecase(inst, options);
			run.schedule = solved.schedule;
			run.truncated = solved.small_opt_truncated;
		} else if (solver == "tight-dp") {
			Dp_options options;
			options.eps = config.eps;
			options.seed = config.seed;
			int q = static_cast<int>(std::ceil(1.0 / (config.eps * config.eps)));
			std::vector<Time> points;
			for (const Job& job : inst.jobs) {
				points.push_back(job.r);
				points.push_back(job.d);
			}
			Hierarchical_partition part = build_partition(inst.horizon, q, 0,
			                                              options.stop_rule, points);
			Dp_result solved = solve_tight(inst, part, config.eps, options);
			run.schedule = solved.schedule;
			run.truncated = solved.report.truncated;
		} else if (solver == "full-ptas") {
			Dp_options options;
			options.eps = config.eps;
			options.seed = config.seed;
			options.offsets = config.offsets;
			Dp_result solved = solve_full(inst, options);
			run.schedule = solved.schedule;
			run.truncated = solved.report.truncated;
			run.budget_hit = solved.report.truncated;
		} else {
			throw std::invalid_argument("bench: unknown solver \"" + solver + "\"");
		}
		return run;
	}

	inline Bench_outcome run_bench(const Bench_config& config,
	                               const Solver_overrides* overrides = nullptr)
	{
		if (config.solvers.empty())
			throw std::invalid_argument("run_bench: solver list is empty");
		if (config.blocks.empty())
			throw std::invalid_argument("run_bench: no instances configured");

		Bench_outcome outcome;
		int instance_index = 0;
		for (const Bench_block& block : config.blocks) {
			for (int draw = 0; draw < block.count; draw++) {
				Gen_params params = block.params;
				params.seed = derive_seed(params.seed, "draw-" + std::to_string(draw));
				Instance inst = generate_instance(params);

				char id[16];
				std::snprintf(id, sizeof id, "i%03d", instance_index);
				instance_index++;

				for (const std::string& solver : config.solvers) {
					Bench_row row;
					row.instance_id = id;
					row.solver = solver;
					row.seed = params.seed;
					row.eps = config.eps;

					auto begin = std::chrono::steady_clock::now();
					try {
						Solver_run run;
						if (overrides && overrides->contains(solver))
							run.schedule = overrides->at(solver)(inst);
						else
							run = run_named_solver(solver, inst, config);
						row.value = run.schedule.value();
						row.truncated = run.truncated;
						outcome.budget_hit = outcome.budget_hit || run.budget_hit;
						Validation_report check = validate_schedule(inst, run.schedule);
						row.feasible = check.feasible;
						if (!check.feasible)
							outcome.defect = true;
					} catch (const Dp_budget_exceeded& fail) {
						row.value = -1;
						row.error = fail.what();
						outcome.budget_hit = true;
					} catch (const Sweep_budget_exceeded& fail) {
						row.value = -1;
						row.error = fail.what();
						outcome.budget_hit = true;
					} catch (const std::invalid_argument& fail) {
						row.value = -1;
						row.error = fail.what();
					}
					auto end = std::chrono::steady_clock::now();
					row.wall_ms = std::chrono::duration<double, std::milli>(end - begin).count();
					outcome.rows.push_back(std::move(row));
				}
			}
		}

		std::sort(outcome.rows.begin(), outcome.rows.end(),
		          [](const Bench_row& a, const Bench_row& b) {
			          return std::tie(a.instance_id, a.solver) < std::tie(b.instance_id, b.solver);
		          });
		return outcome;
	}

	inline std::string bench_rows_to_csv(const std::vector<Bench_row>& rows)
	{
		std::string csv = "instance_id,solver,value,feasible,wall_ms,truncated,seed,eps\n";
		for (const Bench_row& row : rows) {
			char buffer[160];
			std::snprintf(buffer, sizeof buffer, "%s,%s,%lld,%s,%.3f,%s,%llu,%g\n",
			              row.instance_id.c_str(), row.solver.c_str(),
			              static_cast<long long>(row.value),
			              row.feasible ? "true" : "false", row.wall_ms,
			              row.truncated ? "true" : "false",
			              static_cast<unsigned long long>(row.seed), row.eps);
			csv += buffer;
		}
		return csv;
	}

	// ---- statistical checks of the decomposition guarantees ----

	struct Lemma_config {
		std::uint64_t seed = 7;
		double eps = 0.25;
		// Fixed instances for the crossing measurements, and offsets per
		// instance.
		int instances = 20;
		int offsets = 100;
		// Instances for the span-trimming loss measurement, one offset each.
		int cut_trials = 200;
		Gen_params base = Gen_params{8, 1, 3, 4096, 0, Span_dist::mixed};
	};

	inline Lemma_config parse_lemma_config(const nlohmann::json& doc)
	{
		if (!doc.is_object())
			throw std::invalid_argument("lemma config: top level must be an object");
		Lemma_config config;
		config.seed = doc.value("seed", std::uint64_t{7});
		config.eps = doc.value("eps", 0.25);
		config.instances = doc.value("instances", 20);
		config.offsets = doc.value("offsets", 100);
		config.cut_trials = doc.value("cut_trials", 200);
		config.base.n = doc.value("n", 8);
		config.base.m = doc.value("m", 1);
		config.base.c = doc.value("c", 3);
		config.base.T = doc.value("T", Time{4096});
		config.base.span_dist = span_dist_from_name(doc.value("span_dist",
			std::string("mixed")));
		if (config.instances < 1 || config.offsets < 1 || config.cut_trials < 0)
			throw std::invalid_argument("lemma config: counts must be positive");
		return config;
	}

	namespace detail {

		struct Sample_stats {
			double mean = 0.0;
			double se = 0.0;
		};

		inline Sample_stats summarize(const std::vector<double>& samples)
		{
			Sample_stats stats;
			if (samples.empty())
				return stats;
			double sum = 0.0;
			for (double x : samples)
				sum += x;
			stats.mean = sum / static_cast<double>(samples.size());
			if (samples.size() > 1) {
				double ss = 0.0;
				for (double x : samples)
					ss += (x - stats.mean) * (x - stats.mean);
				double variance = ss / static_cast<double>(samples.size() - 1);
				stats.se = std::sqrt(variance / static_cast<double>(samples.size()));
			}
			return stats;
		}

		inline double median_of(std::vector<double> values)
		{
			if (values.empty())
				return 0.0;
			std::sort(values.begin(), values.end());
			std::size_t mid = values.size() / 2;
			if (values.size() % 2 == 1)
				return values[mid];
			return (values[mid - 1] + values[mid]) / 2.0;
		}

	}

	// Draws random offsets over fixed instances and measures how often an
	// optimal schedule's jobs cross the random grid, then measures the value
	// lost to span trimming. Reports empirical means against the structural
	// bounds: crossing fractions stay within bound + 3 standard errors.
	inline nlohmann::ordered_json validate_lemmas(const Lemma_config& config)
	{
		if (!(config.eps > 0.0) || config.eps > 0.5)
			throw std::invalid_argument("validate_lemmas: eps must lie in (0, 1/2]");
		int q = static_cast<int>(std::ceil(1.0 / (config.eps * config.eps)));
		int lambda = static_cast<int>(std::ceil(1.0 / config.eps));

		Rng instance_seeds(config.seed, "lemma-instances");
		Rng offset_rng(config.seed, "lemma-offsets");

		std::vector<double> span_fractions;
		std::vector<double> position_fractions;
		int skipped_crossing = 0;

		for (int i = 0; i < config.instances; i++) {
			Gen_params params = config.base;
			params.seed = instance_seeds.next();
			Instance inst = generate_instance(params);
			Bounded_search_result opt =
				bounded_best(inst, static_cast<std::int64_t>(inst.jobs.size()));
			if (!opt.complete || opt.value == 0) {
				skipped_crossing++;
				continue;
			}

			for (int t = 0; t < config.offsets; t++) {
				Time r0 = offset_rng.range(0, inst.horizon / q);
				Hierarchical_partition part = build_partition(inst.horizon, q, r0, 0, {});
				Job_classification cls = classify_jobs(inst, part, lambda);

				std::vector<Job_id> span_ids = find_span_crossing(inst, part, cls);
				std::set<Job_id> span_set(span_ids.begin(), span_ids.end());
				std::int64_t span_hits = 0;
				for (const auto& [id, place] : opt.schedule.assignments)
					if (span_set.contains(id))
						span_hits++;
				span_fractions.push_back(static_cast<double>(span_hits)
					/ static_cast<double>(opt.value));

				std::vector<Job_id> position_ids =
					find_position_crossing(inst, part, opt.schedule);
				position_fractions.push_back(static_cast<double>(position_ids.size())
					/ static_cast<double>(opt.value));
			}
		}

		detail::Sample_stats span_stats = detail::summarize(span_fractions);
		detail::Sample_stats position_stats = detail::summarize(position_fractions);
		double span_bound = static_cast<double>(lambda + 1) / static_cast<double>(q);
		double position_bound = 1.0 / static_cast<double>(q);
		bool span_pass = span_stats.mean <= span_bound + 3.0 * span_stats.se;
		bool position_pass = position_stats.mean <= position_bound + 3.0 * position_stats.se;

		Rng cut_seeds(config.seed, "lemma-cut-instances");
		Rng cut_offsets(config.seed, "lemma-cut-offsets");
		std::vector<double> raw_losses;
		int skipped_cut = 0;
		int feasibility_failures = 0;
		int vacuous_trials = 0;
		bool per_trial_pass = true;

		for (int t = 0; t < config.cut_trials; t++) {
			Gen_params params = config.base;
			params.seed = cut_seeds.next();
			Instance inst = generate_instance(params);
			Time r0 = cut_offsets.range(0, inst.horizon / q);
			Hierarchical_partition part = build_partition(inst.horizon, q, r0, 0, {});
			Job_classification cls = classify_jobs(inst, part, lambda);

			std::vector<Job_id> crossing = find_span_crossing(inst, part, cls);
			std::set<Job_id> gone(crossing.begin(), crossing.end());
			std::vector<Job> kept;
			for (const Job& job : inst.jobs)
				if (!gone.contains(job.id))
					kept.push_back(job);
			Instance narrowed(kept, inst.machines, inst.blocked);
			narrowed.horizon = inst.horizon;
			Cut_result cut = cut_heads_tails(narrowed, part, cls);

			Bounded_search_result opt_narrowed =
				bounded_best(narrowed, static_cast<std::int64_t>(narrowed.jobs.size()));
			Bounded_search_result opt_cut =
				bounded_best(cut.instance, static_cast<std::int64_t>(cut.instance.jobs.size()));
			if (!opt_narrowed.complete || !opt_cut.complete) {
				skipped_cut++;
				continue;
			}

			if (!validate_schedule(narrowed, opt_cut.schedule).feasible)
				feasibility_failures++;
			if (!validate_schedule(narrowed, greedy_shortest_first(cut.instance)).feasible)
				feasibility_failures++;

			double c_actual = static_cast<double>(narrowed.distinct_sizes().size());
			double loss_bound = std::min(1.0, 120.0 * config.eps * c_actual);
			if (loss_bound >= 1.0)
				vacuous_trials++;
			double floor_value = (1.0 - loss_bound) * static_cast<double>(opt_narrowed.value);
			if (static_cast<double>(opt_cut.value) < floor_value)
				per_trial_pass = false;
			if (opt_narrowed.value > 0)
				raw_losses.push_back(
					static_cast<double>(opt_narrowed.value - opt_cut.value)
					/ static_cast<double>(opt_narrowed.value));
		}

		bool head_tail_pass = per_trial_pass && feasibility_failures == 0;

		nlohmann::ordered_json report;
		report["q"] = q;
		report["lambda"] = lambda;
		report["eps"] = config.eps;
		report["span_crossing"] = {
			{"bound", span_bound},
			{"trials", span_fractions.size()},
			{"skipped_instances", skipped_crossing},
			{"mean", span_stats.mean},
			{"se", span_stats.se},
			{"pass", span_pass},
		};
		report["position_crossing"] = {
			{"bound", position_bound},
			{"trials", position_fractions.size()},
			{"skipped_instances", skipped_crossing},
			{"mean", position_stats.mean},
			{"se", position_stats.se},
			{"pass", position_pass},
		};
		report["head_tail"] = {
			{"trials", config.cut_trials - skipped_cut},
			{"skipped", skipped_cut},
			{"feasibility_failures", feasibility_failures},
			{"vacuous_trials", vacuous_trials},
			{"raw_loss_median", detail::median_of(raw_losses)},
			{"per_trial_pass", per_trial_pass},
			{"pass", head_tail_pass},
		};
		report["pass"] = span_pass && position_pass && head_tail_pass;
		return report;
	}

}

#endif
