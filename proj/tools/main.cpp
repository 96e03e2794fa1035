#include <cstdint>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include <throughput/bench.hpp>
#include <throughput/core.hpp>
#include <throughput/dp.hpp>
#include <throughput/generator.hpp>
#include <throughput/io.hpp>

namespace {

	constexpr int exit_ok = 0;
	constexpr int exit_usage = 1;
	constexpr int exit_infeasible = 2;
	constexpr int exit_budget = 3;

	nlohmann::json read_json_file(const std::string& path)
	{
		std::ifstream in(path);
		if (!in)
			throw std::runtime_error("cannot open " + path);
		return nlohmann::json::parse(in);
	}

	void write_text_file(const std::string& path, const std::string& text)
	{
		std::ofstream out(path);
		if (!out)
			throw std::runtime_error("cannot open " + path + " for writing");
		out << text;
		if (!out)
			throw std::runtime_error("write to " + path + " failed");
	}

	int run_generate(const throughput::Gen_params& params, const std::string& out_path)
	{
		std::vector<std::string> warnings;
		throughput::Instance inst = throughput::generate_instance(params, &warnings);
		for (const std::string& warning : warnings)
			std::cerr << warning << "\n";
		write_text_file(out_path,
			throughput::dump_canonical(throughput::instance_to_json(inst)));
		std::cout << "wrote " << inst.jobs.size() << " jobs to " << out_path << "\n";
		return exit_ok;
	}

	int run_solve(const std::string& algo, double eps, std::uint64_t seed, int offsets,
	              const std::string& in_path, const std::string& out_path)
	{
		throughput::Load_result loaded = throughput::load_instance_json(read_json_file(in_path));
		for (const std::string& warning : loaded.warnings)
			std::cerr << warning << "\n";
		const throughput::Instance& inst = loaded.instance;

		throughput::Bench_config config;
		config.eps = eps;
		config.seed = seed;
		config.offsets = offsets;

		bool budget_hit = false;
		throughput::Schedule schedule;
		if (algo == "full-ptas") {
			throughput::Dp_options options;
			options.eps = eps;
			options.seed = seed;
			options.offsets = offsets;
			throughput::Dp_result result = throughput::solve_full(inst, options);
			schedule = result.schedule;
			budget_hit = result.report.truncated;
			std::cout << throughput::dump_canonical(throughput::dp_report_to_json(result.report));
		} else {
			throughput::Solver_run run = throughput::run_named_solver(algo, inst, config);
			schedule = run.schedule;
			budget_hit = run.budget_hit;
			std::cout << "value " << schedule.value()
			          << (run.truncated ? " (truncated)" : "") << "\n";
		}

		write_text_file(out_path,
			throughput::dump_canonical(throughput::schedule_to_json(schedule)));

		throughput::Validation_report check = throughput::validate_schedule(inst, schedule);
		if (!check.feasible) {
			for (const std::string& violation : check.violations)
				std::cerr << violation << "\n";
			return exit_infeasible;
		}
		return budget_hit ? exit_budget : exit_ok;
	}

	int run_bench_command(const std::string& config_path, const std::string& out_path)
	{
		throughput::Bench_config config =
			throughput::parse_bench_config(read_json_file(config_path));
		throughput::Bench_outcome outcome = throughput::run_bench(config);
		write_text_file(out_path, throughput::bench_rows_to_csv(outcome.rows));
		for (const throughput::Bench_row& row : outcome.rows)
			if (!row.error.empty())
				std::cerr << row.instance_id << " " << row.solver << ": " << row.error << "\n";
		std::cout << "wrote " << outcome.rows.size() << " rows to " << out_path << "\n";
		if (outcome.defect)
			return exit_infeasible;
		return outcome.budget_hit ? exit_budget : exit_ok;
	}

	int run_lemma_command(const std::string& config_path, const std::string& out_path)
	{
		throughput::Lemma_config config =
			throughput::parse_lemma_config(read_json_file(config_path));
		nlohmann::ordered_json report = throughput::validate_lemmas(config);
		write_text_file(out_path, throughput::dump_canonical(report));
		std::cout << (report["pass"].get<bool>() ? "all checks passed"
		                                         : "some checks FAILED") << "\n";
		return exit_ok;
	}

}

int main(int argc, char** argv)
{
	CLI::App app{"Throughput maximization toolkit: schedule jobs with release "
	             "times and deadlines on identical machines"};
	app.require_subcommand(1);

	throughput::Gen_params gen_params;
	std::string gen_out;
	std::string gen_dist = "mixed";
	CLI::App* generate = app.add_subcommand("generate", "write a random instance as JSON");
	generate->add_option("--n", gen_params.n, "number of jobs")->required();
	generate->add_option("--m", gen_params.m, "number of machines")->required();
	generate->add_option("--c", gen_params.c, "distinct processing times")->required();
	generate->add_option("--T", gen_params.T, "time horizon")->required();
	generate->add_option("--seed", gen_params.seed, "random seed")->required();
	generate->add_option("--out", gen_out, "output file")->required();
	generate->add_option("--span-dist", gen_dist,
	                     "span distribution: tight-heavy, loose-heavy, mixed");

	std::string solve_algo;
	double solve_eps = 0.25;
	std::uint64_t solve_seed = 1;
	int solve_offsets = 1;
	std::string solve_in;
	std::string solve_out;
	CLI::App* solve = app.add_subcommand("solve", "solve one instance");
	solve->add_option("--algo", solve_algo, "greedy, exact, basecase, tight-dp, full-ptas")
		->required()
		->check(CLI::IsMember(throughput::known_solvers()));
	solve->add_option("--eps", solve_eps, "accuracy parameter");
	solve->add_option("--seed", solve_seed, "random seed");
	solve->add_option("--offsets", solve_offsets, "random offsets for full-ptas");
	solve->add_option("--in", solve_in, "instance JSON file")->required();
	solve->add_option("--out", solve_out, "schedule JSON file")->required();

	std::string bench_config;
	std::string bench_out;
	CLI::App* bench = app.add_subcommand("bench", "run a solver comparison");
	bench->add_option("--config", bench_config, "bench config JSON")->required();
	bench->add_option("--out", bench_out, "output CSV file")->required();

	std::string lemma_config;
	std::string lemma_out;
	CLI::App* lemmas = app.add_subcommand("validate-lemmas",
	                                      "measure decomposition guarantees empirically");
	lemmas->add_option("--config", lemma_config, "lemma config JSON")->required();
	lemmas->add_option("--out", lemma_out, "output report JSON")->required();

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError& fail) {
		int code = app.exit(fail);
		return code == 0 ? exit_ok : exit_usage;
	}

	try {
		if (generate->parsed()) {
			gen_params.span_dist = throughput::span_dist_from_name(gen_dist);
			return run_generate(gen_params, gen_out);
		}
		if (solve->parsed())
			return run_solve(solve_algo, solve_eps, solve_seed, solve_offsets,
			                 solve_in, solve_out);
		if (bench->parsed())
			return run_bench_command(bench_config, bench_out);
		if (lemmas->parsed())
			return run_lemma_command(lemma_config, lemma_out);
	} catch (const throughput::Dp_budget_exceeded& fail) {
		std::cerr << fail.what() << "\n";
		return exit_budget;
	} catch (const throughput::Sweep_budget_exceeded& fail) {
		std::cerr << fail.what() << "\n";
		return exit_budget;
	} catch (const std::exception& fail) {
		std::cerr << fail.what() << "\n";
		return exit_usage;
	}
	return exit_usage;
}
