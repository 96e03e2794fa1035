#ifndef THROUGHPUT_RNG_HPP
#define THROUGHPUT_RNG_HPP

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>

namespace throughput {

	// FNV-1a, used to derive named sub-stream seeds from one root seed.
	inline std::uint64_t fnv1a64(std::string_view text, std::uint64_t hash = 1469598103934665603ull)
	{
		for (unsigned char c : text) {
			hash ^= c;
			hash *= 1099511628211ull;
		}
		return hash;
	}

	inline std::uint64_t derive_seed(std::uint64_t root_seed, std::string_view stream_name)
	{
		std::uint64_t h = fnv1a64(stream_name);
		h ^= root_seed + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
		return h;
	}

	// Deterministic random source. All draws go through explicit integer
	// arithmetic so the same seed yields the same values everywhere.
	class Rng {
	public:
		explicit Rng(std::uint64_t seed) : engine(seed) {}

		Rng(std::uint64_t root_seed, std::string_view stream_name)
			: engine(derive_seed(root_seed, stream_name)) {}

		std::uint64_t next()
		{
			return engine();
		}

		// Uniform draw from [lo, hi], both ends inclusive. Rejection sampling
		// keeps the draw unbiased without relying on distribution classes,
		// whose output is not pinned down by the standard.
		std::int64_t range(std::int64_t lo, std::int64_t hi)
		{
			if (lo > hi)
				throw std::invalid_argument("Rng::range: empty range");
			std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1u;
			if (span == 0)
				return static_cast<std::int64_t>(next());
			std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
			std::uint64_t draw;
			do {
				draw = next();
			} while (draw >= limit);
			return lo + static_cast<std::int64_t>(draw % span);
		}

		// Uniform real in [0, 1), built from the top 53 bits of one draw.
		double real01()
		{
			return static_cast<double>(next() >> 11) * 0x1.0p-53;
		}

		bool chance(double probability)
		{
			return real01() < probability;
		}

	private:
		std::mt19937_64 engine;
	};

}

#endif
