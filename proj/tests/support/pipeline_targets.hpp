#ifndef THROUGHPUT_TESTS_PIPELINE_TARGETS_HPP
#define THROUGHPUT_TESTS_PIPELINE_TARGETS_HPP

#include <cstdint>

// Frozen regression targets for the full-pipeline ratio gate. Each row fixes
// one generated instance (n, c, generator seed; one machine, horizon 24,
// mixed spans) together with its exhaustively proven optimum. The optima were
// computed by the exact solver in a separate run and are pinned here so the
// gate cannot drift with the solver under test.
namespace pipeline_targets {

	struct Target {
		int n;
		int c;
		std::uint64_t seed;
		std::int64_t opt;
	};

	inline constexpr int machines = 1;
	inline constexpr std::int64_t horizon = 24;

	inline constexpr Target table[] = {
		{4, 1, 1000, 3},
		{5, 2, 1001, 5},
		{6, 1, 1002, 5},
		{7, 2, 1003, 6},
		{8, 1, 1004, 4},
		{4, 2, 1005, 4},
		{5, 1, 1006, 5},
		{6, 2, 1007, 5},
		{7, 1, 1008, 4},
		{8, 2, 1009, 6},
		{4, 1, 1010, 4},
		{5, 2, 1011, 4},
		{6, 1, 1012, 4},
		{7, 2, 1013, 5},
		{8, 1, 1014, 8},
		{4, 2, 1015, 4},
		{5, 1, 1016, 5},
		{6, 2, 1017, 4},
		{7, 1, 1018, 7},
		{8, 2, 1019, 7},
		{4, 1, 1020, 3},
		{5, 2, 1021, 5},
		{6, 1, 1022, 6},
		{7, 2, 1023, 6},
		{8, 1, 1024, 8},
		{4, 2, 1025, 4},
		{5, 1, 1026, 5},
		{6, 2, 1027, 5},
		{7, 1, 1028, 3},
		{8, 2, 1029, 8},
		{4, 1, 1030, 4},
		{5, 2, 1031, 5},
		{6, 1, 1032, 6},
		{7, 2, 1033, 7},
		{8, 1, 1034, 8},
		{4, 2, 1035, 4},
		{5, 1, 1036, 4},
		{6, 2, 1037, 6},
		{7, 1, 1038, 7},
		{8, 2, 1039, 7},
		{4, 1, 1040, 4},
		{5, 2, 1041, 4},
		{6, 1, 1042, 6},
		{7, 2, 1043, 5},
		{8, 1, 1044, 5},
		{4, 2, 1045, 4},
		{5, 1, 1046, 4},
		{6, 2, 1047, 5},
		{7, 1, 1048, 6},
		{8, 2, 1049, 8},
	};

}

#endif
