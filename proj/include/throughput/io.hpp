#ifndef THROUGHPUT_IO_HPP
#define THROUGHPUT_IO_HPP

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "core.hpp"

namespace throughput {

	struct Load_result {
		Instance instance;
		std::vector<std::string> warnings;
	};

	namespace detail {

		inline std::int64_t require_int(const nlohmann::json& node, const char* key,
		                                const char* where, bool allow_negative = false)
		{
			if (!node.contains(key))
				throw std::invalid_argument(std::string("instance document: ") + where
					+ " is missing field \"" + key + "\"");
			const nlohmann::json& field = node.at(key);
			if (!field.is_number_integer())
				throw std::invalid_argument(std::string("instance document: ") + where
					+ " field \"" + key + "\" must be an integer");
			std::int64_t value = field.get<std::int64_t>();
			if (!allow_negative && value < 0)
				throw std::invalid_argument(std::string("instance document: ") + where
					+ " field \"" + key + "\" must not be negative");
			return value;
		}

	}

	inline Load_result load_instance_json(const nlohmann::json& doc)
	{
		if (!doc.is_object())
			throw std::invalid_argument("instance document: top level must be an object");
		int machines = static_cast<int>(detail::require_int(doc, "m", "top level"));
		if (machines < 1)
			throw std::invalid_argument("instance document: \"m\" must be at least 1");

		Load_result result;
		std::vector<Job> jobs;
		if (doc.contains("jobs")) {
			if (!doc.at("jobs").is_array())
				throw std::invalid_argument("instance document: \"jobs\" must be an array");
			for (const nlohmann::json& node : doc.at("jobs")) {
				Job j;
				j.id = detail::require_int(node, "id", "job", true);
				j.p = detail::require_int(node, "p", "job");
				j.r = detail::require_int(node, "r", "job");
				j.d = detail::require_int(node, "d", "job");
				if (j.p < 1)
					throw std::invalid_argument("instance document: job "
						+ std::to_string(j.id) + " must have p >= 1");
				if (!j.window_feasible()) {
					result.warnings.push_back("job " + std::to_string(j.id)
						+ " cannot fit between release and deadline; excluded");
					continue;
				}
				jobs.push_back(j);
			}
		}

		std::vector<Blocked_interval> blocked;
		if (doc.contains("blocked")) {
			if (!doc.at("blocked").is_array())
				throw std::invalid_argument("instance document: \"blocked\" must be an array");
			for (const nlohmann::json& node : doc.at("blocked")) {
				Blocked_interval b;
				b.machine = static_cast<int>(detail::require_int(node, "machine", "blocked interval"));
				b.start = detail::require_int(node, "start", "blocked interval");
				b.end = detail::require_int(node, "end", "blocked interval");
				blocked.push_back(b);
			}
		}

		result.instance = Instance(std::move(jobs), machines, std::move(blocked));
		return result;
	}

	inline Load_result load_instance(std::istream& in)
	{
		nlohmann::json doc;
		try {
			doc = nlohmann::json::parse(in);
		} catch (const nlohmann::json::parse_error& e) {
			throw std::invalid_argument(std::string("instance document: parse error: ") + e.what());
		}
		return load_instance_json(doc);
	}

	// Canonical form: fixed key order, jobs sorted by id, blocked intervals
	// sorted by (machine, start). Serializing a loaded document reproduces it
	// byte for byte once it is in canonical form.
	inline nlohmann::ordered_json instance_to_json(const Instance& inst)
	{
		nlohmann::ordered_json doc;
		doc["m"] = inst.machines;
		doc["blocked"] = nlohmann::ordered_json::array();
		for (const Blocked_interval& b : inst.blocked) {
			nlohmann::ordered_json node;
			node["machine"] = b.machine;
			node["start"] = b.start;
			node["end"] = b.end;
			doc["blocked"].push_back(node);
		}
		std::vector<Job> jobs = inst.jobs;
		std::sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) { return a.id < b.id; });
		doc["jobs"] = nlohmann::ordered_json::array();
		for (const Job& j : jobs) {
			nlohmann::ordered_json node;
			node["id"] = j.id;
			node["p"] = j.p;
			node["r"] = j.r;
			node["d"] = j.d;
			doc["jobs"].push_back(node);
		}
		return doc;
	}

	inline Schedule schedule_from_json(const nlohmann::json& doc)
	{
		if (!doc.is_object() || !doc.contains("assignments") || !doc.at("assignments").is_array())
			throw std::invalid_argument("schedule document: expected an object with an \"assignments\" array");
		Schedule sched;
		for (const nlohmann::json& node : doc.at("assignments")) {
			Job_id job = detail::require_int(node, "job", "assignment", true);
			int machine = static_cast<int>(detail::require_int(node, "machine", "assignment"));
			Time start = detail::require_int(node, "start", "assignment");
			if (sched.assignments.count(job))
				throw std::invalid_argument("schedule document: job "
					+ std::to_string(job) + " is assigned twice");
			sched.assign(job, machine, start);
		}
		return sched;
	}

	inline Schedule load_schedule(std::istream& in)
	{
		nlohmann::json doc;
		try {
			doc = nlohmann::json::parse(in);
		} catch (const nlohmann::json::parse_error& e) {
			throw std::invalid_argument(std::string("schedule document: parse error: ") + e.what());
		}
		return schedule_from_json(doc);
	}

	inline nlohmann::ordered_json schedule_to_json(const Schedule& sched)
	{
		nlohmann::ordered_json doc;
		doc["assignments"] = nlohmann::ordered_json::array();
		for (const auto& [job, place] : sched.assignments) {
			nlohmann::ordered_json node;
			node["job"] = job;
			node["machine"] = place.machine;
			node["start"] = place.start;
			doc["assignments"].push_back(node);
		}
		return doc;
	}

	inline std::string dump_canonical(const nlohmann::ordered_json& doc)
	{
		return doc.dump(2) + "\n";
	}

}

#endif
